"""Dense linear algebra for multi-qubit quantum states.

Conventions used throughout the package:

* Qubit indices are 1-based.  Qubit 1 is the *most significant* bit of a
  computational-basis index, so the bitstring ``z1 z2 ... zn`` prints with
  ``z1`` leftmost and labels basis state ``int(z, 2)``.
* Pure states are kept as amplitude vectors of length ``2**n`` whenever
  possible and promoted to density matrices only on demand.
* States are immutable values; every operation returns a new state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_ATOL = 1e-10

__all__ = [
    "QuantumState",
    "Observable",
    "SpectralDecomposition",
    "apply_unitary",
    "dephase_global",
    "dephase_local",
    "purity",
    "partial_trace",
    "exact_eigendecomposition",
    "hs_distance",
    "von_neumann_entropy",
    "renyi2_entropy",
    "numerical_rank",
]


def _num_qubits(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2**n != dim or n < 1:
        raise ValueError(f"dimension {dim} is not a power of two >= 2")
    return n


def check_unitary(u: np.ndarray, atol: float = DEFAULT_ATOL) -> np.ndarray:
    """Validate that ``u`` is a square unitary matrix and return it as complex."""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if dev > atol:
        raise ValueError(f"matrix is not unitary: max |U†U - I| = {dev:.3e} > {atol:g}")
    return u


class QuantumState:
    """A pure statevector or density matrix on ``n_qubits`` qubits.

    Construct via :meth:`from_vector` or :meth:`from_matrix`.
    """

    __slots__ = ("n_qubits", "_vector", "_matrix")

    def __init__(self, n_qubits, vector=None, matrix=None):
        self.n_qubits = n_qubits
        self._vector = vector
        self._matrix = matrix

    @classmethod
    def from_vector(cls, amplitudes, atol: float = DEFAULT_ATOL) -> "QuantumState":
        """Build a pure state from an amplitude vector (must be normalized)."""
        vec = np.asarray(amplitudes, dtype=complex).ravel()
        n = _num_qubits(vec.size)
        norm_dev = abs(np.vdot(vec, vec).real - 1.0)
        if norm_dev > atol:
            raise ValueError(f"statevector is not normalized: |<psi|psi> - 1| = {norm_dev:.3e}")
        vec = vec.copy()
        vec.flags.writeable = False
        return cls(n, vector=vec)

    @classmethod
    def from_matrix(cls, rho, atol: float = DEFAULT_ATOL) -> "QuantumState":
        """Build a mixed state from a density matrix.

        Validates Hermiticity, unit trace, and positive semidefiniteness
        (eigenvalues >= -atol).
        """
        mat = np.asarray(rho, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {mat.shape}")
        n = _num_qubits(mat.shape[0])
        herm_dev = np.max(np.abs(mat - mat.conj().T))
        if herm_dev > atol:
            raise ValueError(f"density matrix not Hermitian: max |rho - rho†| = {herm_dev:.3e}")
        tr_dev = abs(np.trace(mat).real - 1.0)
        if tr_dev > atol:
            raise ValueError(f"density matrix trace deviates from 1 by {tr_dev:.3e}")
        evals = np.linalg.eigvalsh((mat + mat.conj().T) / 2)
        if evals.min() < -atol:
            raise ValueError(f"density matrix has negative eigenvalue {evals.min():.3e}")
        mat = mat.copy()
        mat.flags.writeable = False
        return cls(n, matrix=mat)

    @classmethod
    def basis_state(cls, n: int, index: int = 0) -> "QuantumState":
        vec = np.zeros(2**n, dtype=complex)
        vec[index] = 1.0
        return cls.from_vector(vec)

    @classmethod
    def maximally_mixed(cls, n: int) -> "QuantumState":
        d = 2**n
        return cls.from_matrix(np.eye(d) / d)

    @property
    def is_pure_form(self) -> bool:
        return self._vector is not None

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @property
    def vector(self) -> np.ndarray:
        if self._vector is None:
            raise ValueError("state is in matrix form; no amplitude vector available")
        return self._vector

    @property
    def matrix(self) -> np.ndarray:
        """Density matrix view; computed (and cached) on demand for pure states."""
        if self._matrix is None:
            mat = np.outer(self._vector, self._vector.conj())
            mat.flags.writeable = False
            self._matrix = mat
        return self._matrix

    @property
    def diagonal(self) -> np.ndarray:
        """Real diagonal of the density matrix (basis-state populations)."""
        if self._vector is not None:
            return np.abs(self._vector) ** 2
        return np.real(np.diag(self._matrix))

    def as_matrix_state(self) -> "QuantumState":
        """Return an equivalent state in matrix form (no revalidation)."""
        if not self.is_pure_form:
            return self
        return QuantumState(self.n_qubits, matrix=self.matrix)

    def __repr__(self):
        form = "pure" if self.is_pure_form else "matrix"
        return f"QuantumState(n_qubits={self.n_qubits}, form={form})"


@dataclass(frozen=True)
class Observable:
    """A Hermitian observable on n qubits."""

    matrix: np.ndarray
    atol: float = DEFAULT_ATOL

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {mat.shape}")
        dev = np.max(np.abs(mat - mat.conj().T))
        if dev > self.atol:
            raise ValueError(f"observable not Hermitian: max |M - M†| = {dev:.3e}")
        object.__setattr__(self, "matrix", mat)

    @property
    def n_qubits(self) -> int:
        return _num_qubits(self.matrix.shape[0])


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues sorted descending, eigenvector columns matched by index."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def rank(self, threshold: float = DEFAULT_ATOL) -> int:
        return int(np.count_nonzero(self.eigenvalues > threshold))


def apply_unitary(state: QuantumState, u: np.ndarray, atol: float = DEFAULT_ATOL) -> QuantumState:
    """Return U|psi> for pure input or U rho U† for matrix input."""
    u = check_unitary(u, atol)
    if u.shape[0] != state.dim:
        raise ValueError(f"dimension mismatch: unitary {u.shape[0]} vs state {state.dim}")
    if state.is_pure_form:
        return QuantumState(state.n_qubits, vector=u @ state.vector)
    return QuantumState(state.n_qubits, matrix=u @ state.matrix @ u.conj().T)


def dephase_global(rho: QuantumState) -> QuantumState:
    """Zero every off-diagonal element of the density matrix."""
    if rho.is_pure_form:
        raise ValueError("dephase_global requires matrix form; use as_matrix_state() first")
    return QuantumState(rho.n_qubits, matrix=np.diag(np.diag(rho.matrix)))


def _bit_values(n: int, j: int) -> np.ndarray:
    """Value of (1-based, MSB-first) bit j for every basis index 0..2^n-1."""
    idx = np.arange(2**n)
    return (idx >> (n - j)) & 1


def dephase_local(rho: QuantumState, j: int) -> QuantumState:
    """Zero the off-diagonal blocks connecting differing values of qubit ``j``."""
    if rho.is_pure_form:
        raise ValueError("dephase_local requires matrix form; use as_matrix_state() first")
    n = rho.n_qubits
    if not 1 <= j <= n:
        raise ValueError(f"qubit index {j} out of range 1..{n}")
    bits = _bit_values(n, j)
    mask = bits[:, None] == bits[None, :]
    return QuantumState(n, matrix=np.where(mask, rho.matrix, 0.0))


def purity(rho: QuantumState) -> float:
    """Tr(rho^2)."""
    if rho.is_pure_form:
        return 1.0
    m = rho.matrix
    return float(np.real(np.vdot(m, m)))


def partial_trace(state: QuantumState, keep) -> QuantumState:
    """Reduced density matrix on the (1-based) qubits in ``keep``.

    The kept qubits appear in the output in the order given.
    """
    keep = list(keep)
    n = state.n_qubits
    if not keep:
        raise ValueError("keep must be nonempty")
    if len(set(keep)) != len(keep) or any(not 1 <= q <= n for q in keep):
        raise ValueError(f"invalid qubit subset {keep} for n={n}")
    traced = [q for q in range(1, n + 1) if q not in keep]
    k = len(keep)
    if state.is_pure_form:
        # reshape to (kept, traced) and contract the traced axes
        psi = state.vector.reshape((2,) * n)
        perm = [q - 1 for q in keep] + [q - 1 for q in traced]
        psi = np.transpose(psi, perm).reshape(2**k, 2 ** (n - k))
        red = psi @ psi.conj().T
    else:
        m = state.matrix.reshape((2,) * (2 * n))
        perm = (
            [q - 1 for q in keep]
            + [q - 1 for q in traced]
            + [n + q - 1 for q in keep]
            + [n + q - 1 for q in traced]
        )
        m = np.transpose(m, perm).reshape(2**k, 2 ** (n - k), 2**k, 2 ** (n - k))
        red = np.einsum("iaja->ij", m)
    return QuantumState(k, matrix=red)


def exact_eigendecomposition(rho: QuantumState, atol: float = 1e-8) -> SpectralDecomposition:
    """Full spectrum of a density matrix, sorted descending with matched eigenvectors."""
    m = rho.matrix
    herm_dev = np.max(np.abs(m - m.conj().T))
    if herm_dev > 1e-8:
        raise ValueError(f"matrix not Hermitian: deviation {herm_dev:.3e}")
    evals, evecs = np.linalg.eigh((m + m.conj().T) / 2)
    order = np.argsort(evals)[::-1]
    return SpectralDecomposition(eigenvalues=evals[order], eigenvectors=evecs[:, order])


def hs_distance(a, b) -> float:
    """Hilbert-Schmidt distance Tr((A-B)†(A-B))."""
    a = a.matrix if isinstance(a, QuantumState) else np.asarray(a, dtype=complex)
    b = b.matrix if isinstance(b, QuantumState) else np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    d = a - b
    return float(np.real(np.vdot(d, d)))


def von_neumann_entropy(rho: QuantumState, threshold: float = DEFAULT_ATOL) -> float:
    """H(rho) = -sum lambda log2 lambda, with 0 log 0 := 0."""
    lam = exact_eigendecomposition(rho).eigenvalues
    lam = lam[lam > threshold]
    return float(-np.sum(lam * np.log2(lam)))


def renyi2_entropy(rho: QuantumState) -> float:
    """H2(rho) = -log2 Tr(rho^2)."""
    return float(-np.log2(purity(rho)))


def numerical_rank(rho: QuantumState, threshold: float = DEFAULT_ATOL) -> int:
    """Number of eigenvalues above ``threshold``."""
    return exact_eigendecomposition(rho).rank(threshold)
