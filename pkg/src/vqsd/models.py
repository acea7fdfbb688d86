"""Physics workloads: Heisenberg chains, product states, classically
correlated states, and the total-Sz observable."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import product_unitary, rotation_x, rotation_y, rotation_z
from .states import Observable, QuantumState, partial_trace

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

MAX_SITES = 12

__all__ = [
    "SpinChainSpec",
    "heisenberg_hamiltonian",
    "ground_state",
    "reduced_ground_state",
    "product_state",
    "classically_correlated_state",
    "total_sz",
]


@dataclass(frozen=True)
class SpinChainSpec:
    """A spin-1/2 chain with a distinguished contiguous subsystem."""

    sites: int
    subsystem: tuple = ()
    periodic: bool = True

    def __post_init__(self):
        if self.sites < 2:
            raise ValueError("need at least 2 sites")
        if self.sites > MAX_SITES:
            raise ValueError(f"sites={self.sites} exceeds the dense-solve limit {MAX_SITES}")
        sub = tuple(self.subsystem)
        if sub:
            if any(not 1 <= s <= self.sites for s in sub):
                raise ValueError(f"subsystem {sub} out of range 1..{self.sites}")
            if list(sub) != list(range(sub[0], sub[0] + len(sub))):
                raise ValueError(f"subsystem {sub} must be a contiguous index range")
        object.__setattr__(self, "subsystem", sub)


def _two_site_term(n: int, i: int, j: int) -> np.ndarray:
    """S^(i) . S^(j) embedded into 2^n x 2^n (1-based sites, site 1 = MSB)."""
    term = np.zeros((2**n, 2**n), dtype=complex)
    for pauli in (_X, _Y, _Z):
        ops = [np.eye(2, dtype=complex)] * n
        ops[i - 1] = pauli / 2
        ops[j - 1] = pauli / 2
        term += product_unitary(ops)
    return term


def heisenberg_hamiltonian(spec: SpinChainSpec) -> Observable:
    """H = sum_j S^(j) . S^(j+1), with a wraparound term when periodic."""
    n = spec.sites
    h = np.zeros((2**n, 2**n), dtype=complex)
    for j in range(1, n):
        h += _two_site_term(n, j, j + 1)
    if spec.periodic and n > 2:  # at n=2 the wrap would double-count the only bond
        h += _two_site_term(n, n, 1)
    return Observable(h)


def total_sz(n: int) -> Observable:
    """(1/2) sum_j Z_j as a diagonal observable."""
    idx = np.arange(2**n)
    diag = np.zeros(2**n)
    for j in range(1, n + 1):
        bits = (idx >> (n - j)) & 1
        diag += 0.5 * (1 - 2 * bits)
    return Observable(np.diag(diag.astype(complex)))


def ground_state(h: Observable, degeneracy_atol: float = 1e-10) -> QuantumState:
    """Lowest-eigenvalue eigenvector of ``h`` with a deterministic tie-break.

    Within a degenerate ground space the returned vector maximizes <Sz>,
    and the leading nonzero amplitude is phase-fixed to be real positive.
    """
    evals, evecs = np.linalg.eigh(h.matrix)
    ground = np.nonzero(evals - evals[0] <= degeneracy_atol)[0]
    if len(ground) == 1:
        vec = evecs[:, 0]
    else:
        n = h.n_qubits
        basis = evecs[:, ground]
        sz = total_sz(n).matrix
        sub = basis.conj().T @ sz @ basis
        sub_vals, sub_vecs = np.linalg.eigh((sub + sub.conj().T) / 2)
        vec = basis @ sub_vecs[:, -1]
    lead = np.argmax(np.abs(vec) > 1e-9)
    vec = vec * np.exp(-1j * np.angle(vec[lead]))
    return QuantumState.from_vector(vec)


def reduced_ground_state(spec: SpinChainSpec) -> QuantumState:
    """Reduced density matrix of the chain's ground state on the subsystem."""
    if not spec.subsystem:
        raise ValueError("spec.subsystem must be nonempty")
    psi = ground_state(heisenberg_hamiltonian(spec))
    return partial_trace(psi, spec.subsystem)


def product_state(angles, axes: str = "x") -> QuantumState:
    """Tensor product of rotated |0> states.

    ``axes="x"`` takes one Rx angle per qubit; ``axes="xyz"`` takes one
    (x, y, z) angle triple per qubit and applies Rx·Ry·Rz to |0>.
    """
    gates = []
    if axes == "x":
        for theta in angles:
            gates.append(rotation_x(float(theta)))
    elif axes == "xyz":
        for triple in angles:
            ax, ay, az = (float(t) for t in triple)
            gates.append(rotation_x(ax) @ rotation_y(ay) @ rotation_z(az))
    else:
        raise ValueError(f"unknown axis spec {axes!r}")
    n = len(gates)
    vec = product_unitary(gates)[:, 0]
    state = QuantumState.from_vector(vec)
    assert state.n_qubits == n
    return state


def classically_correlated_state(distribution, local_bases=None) -> QuantumState:
    """sum_z p_z |b_z1><b_z1| ⊗ ... ⊗ |b_zn><b_zn|.

    ``local_bases`` maps qubit j (0-based list) to a 2x2 unitary whose
    columns are that qubit's basis; default is the computational basis.
    """
    p = np.asarray(distribution, dtype=float)
    if p.min() < -1e-12 or abs(p.sum() - 1) > 1e-10:
        raise ValueError("distribution must be a probability vector")
    n = int(round(np.log2(p.size)))
    if 2**n != p.size:
        raise ValueError("distribution length must be a power of two")
    if local_bases is None:
        local_bases = [np.eye(2, dtype=complex)] * n
    rho = np.zeros((2**n, 2**n), dtype=complex)
    for z in range(p.size):
        if p[z] == 0:
            continue
        ops = []
        for j in range(n):
            bit = (z >> (n - 1 - j)) & 1
            col = local_bases[j][:, bit]
            ops.append(np.outer(col, col.conj()))
        rho += p[z] * product_unitary(ops)
    return QuantumState.from_matrix(rho)
