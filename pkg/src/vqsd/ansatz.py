"""Parameterized diagonalizing unitaries.

Two-qubit gates use the canonical (KAK) parameterization with 15 real
parameters, ordered per gate as

    [a1_z, a1_y, a1_z2,  a2_z, a2_y, a2_z2,  tx, ty, tz,
     b1_z, b1_y, b1_z2,  b2_z, b2_y, b2_z2]

giving G = (A1 ⊗ A2) · N(tx, ty, tz) · (B1 ⊗ B2) with A, B = Rz·Ry·Rz and
N = exp(-i (tx X⊗X + ty Y⊗Y + tz Z⊗Z)).  All-zero parameters give the
identity, which is what makes identity-initialized growth possible.

The flattened parameter vector of an ansatz is the concatenation of each
gate's 15 parameters in gate-list order.  The synthesized matrix is the
left-to-right product of the gate embeddings, so gates appended at the end
of the list act first on the input state.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

PARAMS_PER_GATE = 15

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_XX = np.kron(_X, _X)
_YY = np.kron(_Y, _Y)
_ZZ = np.kron(_Z, _Z)
_EYE4 = np.eye(4, dtype=complex)

__all__ = [
    "PARAMS_PER_GATE",
    "ParamAnsatz",
    "rotation_x",
    "rotation_y",
    "rotation_z",
    "single_qubit_rotation",
    "two_qubit_gate",
    "embed_two_qubit",
    "build_layered",
    "layered_gate_count",
    "synthesize",
    "grow_identity_layer",
    "grow_to_depth",
    "grow_identity_gate",
    "random_structure_update",
    "random_free_ansatz",
    "product_unitary",
]


def rotation_x(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def rotation_y(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rotation_z(theta: float) -> np.ndarray:
    return np.array([[np.exp(-1j * theta / 2), 0], [0, np.exp(1j * theta / 2)]])


def single_qubit_rotation(a: float, b: float, c: float) -> np.ndarray:
    """Rz(a) · Ry(b) · Rz(c); identity at (0, 0, 0).

    Built from the closed form of the Euler-angle product; scalar math
    keeps this in the microsecond range, which matters because every cost
    evaluation synthesizes the full gate list.
    """
    cb, sb = math.cos(b / 2), math.sin(b / 2)
    ep = complex(math.cos((a + c) / 2), -math.sin((a + c) / 2))
    em = complex(math.cos((a - c) / 2), -math.sin((a - c) / 2))
    return np.array(
        [[ep * cb, -em * sb], [em.conjugate() * sb, ep.conjugate() * cb]]
    )


def _kron2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """np.kron for 2x2 factors without its generic-shape overhead."""
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(4, 4)


def _canonical_interaction(tx: float, ty: float, tz: float) -> np.ndarray:
    """exp(-i (tx XX + ty YY + tz ZZ)); the three factors commute."""
    out = math.cos(tx) * _EYE4 - 1j * math.sin(tx) * _XX
    out = out @ (math.cos(ty) * _EYE4 - 1j * math.sin(ty) * _YY)
    out = out @ (math.cos(tz) * _EYE4 - 1j * math.sin(tz) * _ZZ)
    return out


def two_qubit_gate(params) -> np.ndarray:
    """4x4 unitary from 15 canonical parameters; identity at zero."""
    p = np.asarray(params, dtype=float)
    if p.shape != (PARAMS_PER_GATE,):
        raise ValueError(f"expected {PARAMS_PER_GATE} parameters, got shape {p.shape}")
    a = _kron2(single_qubit_rotation(*p[0:3]), single_qubit_rotation(*p[3:6]))
    n = _canonical_interaction(*p[6:9])
    b = _kron2(single_qubit_rotation(*p[9:12]), single_qubit_rotation(*p[12:15]))
    return a @ n @ b


def embed_two_qubit(gate: np.ndarray, support, n: int) -> np.ndarray:
    """Embed a 4x4 gate acting on (1-based) qubits ``support`` into 2^n x 2^n."""
    i, j = support
    if i == j or not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"invalid support {support} for n={n}")
    g = gate.reshape(2, 2, 2, 2)
    # apply to the identity, viewed as a (2,)*n x 2^n stack of columns
    u = np.eye(2**n, dtype=complex).reshape((2,) * n + (2**n,))
    u = np.tensordot(g, u, axes=([2, 3], [i - 1, j - 1]))
    # tensordot put the gate's output axes first; move them back
    rest = [q for q in range(n) if q not in (i - 1, j - 1)]
    order = np.argsort([i - 1, j - 1] + rest)
    u = np.transpose(u, list(order) + [n])
    return u.reshape(2**n, 2**n)


@dataclass(frozen=True)
class ParamAnsatz:
    """A gate list with continuous parameters and structural metadata.

    ``structure`` is "layered" (with half-integer layer count ``p``) or
    "free" (arbitrary supports, used by the annealed structure search).
    """

    n_qubits: int
    supports: tuple
    params: np.ndarray
    structure: str = "free"
    p: float | None = None

    def __post_init__(self):
        if self.structure not in ("layered", "free"):
            raise ValueError(f"unknown structure {self.structure!r}")
        params = np.asarray(self.params, dtype=float)
        expected = PARAMS_PER_GATE * len(self.supports)
        if params.size != expected:
            raise ValueError(
                f"parameter vector has {params.size} entries, expected {expected}"
            )
        for s in self.supports:
            i, j = s
            if i == j or not (1 <= i <= self.n_qubits and 1 <= j <= self.n_qubits):
                raise ValueError(f"invalid support {s} for n={self.n_qubits}")
        params = params.reshape(len(self.supports), PARAMS_PER_GATE).copy()
        params.flags.writeable = False
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "supports", tuple(tuple(s) for s in self.supports))

    @property
    def gate_count(self) -> int:
        return len(self.supports)

    @property
    def param_vector(self) -> np.ndarray:
        """Flattened parameters: gate order, 15 slots per gate."""
        return self.params.ravel().copy()

    def with_params(self, params) -> "ParamAnsatz":
        return ParamAnsatz(self.n_qubits, self.supports, params, self.structure, self.p)

    def to_json(self) -> str:
        doc = {
            "n": self.n_qubits,
            "structure": self.structure,
            "gates": [
                {"support": list(s), "params": list(map(float, row))}
                for s, row in zip(self.supports, self.params)
            ],
        }
        if self.p is not None:
            doc["p"] = self.p
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "ParamAnsatz":
        doc = json.loads(text)
        supports = [tuple(g["support"]) for g in doc["gates"]]
        params = np.array([g["params"] for g in doc["gates"]], dtype=float)
        return cls(doc["n"], supports, params.reshape(-1), doc["structure"], doc.get("p"))


def _layer_rows(n: int) -> tuple[list, list]:
    even = [(i, i + 1) for i in range(1, n, 2)]
    odd = [(i, i + 1) for i in range(2, n, 2)]
    if n >= 4 and n % 2 == 0:
        odd.append((n, 1))  # periodic wrap from bottom to top
    return even, odd


def _layered_supports(n: int, p: float) -> list:
    if p < 0 or (2 * p) != int(2 * p):
        raise ValueError(f"p must be a non-negative half-integer, got {p}")
    even, odd = _layer_rows(n)
    supports = []
    full = int(p)
    for _ in range(full):
        supports.extend(even)
        supports.extend(odd)
    if 2 * p % 2 == 1:
        supports.extend(even)
    return supports


def layered_gate_count(n: int, p: float) -> int:
    return len(_layered_supports(n, p))


def build_layered(n: int, p: float, params) -> ParamAnsatz:
    """Layered ansatz: alternating nearest-neighbor rows with periodic wrap.

    Half-integer ``p`` appends the first (even-aligned) row of an extra layer.
    """
    supports = _layered_supports(n, p)
    return ParamAnsatz(n, supports, params, structure="layered", p=p)


def synthesize(ansatz: ParamAnsatz) -> np.ndarray:
    """Ordered product of the gate embeddings (empty list gives identity).

    Gates are contracted directly into the accumulating matrix over its row
    index (last gate first, i.e. left-multiplication in reverse list order),
    which avoids materializing each gate as a full 2^n x 2^n embedding.
    """
    n = ansatz.n_qubits
    dim = 2**n
    u = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for support, row in zip(reversed(ansatz.supports), reversed(ansatz.params)):
        i, j = support
        g = two_qubit_gate(row).reshape(2, 2, 2, 2)
        u = np.tensordot(g, u, axes=([2, 3], [i - 1, j - 1]))
        rest = [q for q in range(n) if q not in (i - 1, j - 1)]
        order = np.argsort([i - 1, j - 1] + rest)
        u = np.transpose(u, list(order) + [n])
    return np.ascontiguousarray(u.reshape(dim, dim))


def grow_to_depth(ansatz: ParamAnsatz, new_p: float) -> ParamAnsatz:
    """Extend a layered ansatz to ``new_p`` layers with zero (identity) parameters."""
    if ansatz.structure != "layered":
        raise ValueError("grow_to_depth requires a layered ansatz")
    if new_p < ansatz.p:
        raise ValueError(f"cannot shrink from p={ansatz.p} to p={new_p}")
    n = ansatz.n_qubits
    count = layered_gate_count(n, new_p)
    params = np.zeros(count * PARAMS_PER_GATE)
    params[: ansatz.params.size] = ansatz.params.ravel()
    return build_layered(n, new_p, params)


def grow_identity_layer(ansatz: ParamAnsatz) -> ParamAnsatz:
    """Append one full identity-initialized layer; synthesized unitary unchanged."""
    return grow_to_depth(ansatz, (ansatz.p or 0) + 1)


def grow_identity_gate(ansatz: ParamAnsatz, rng: np.random.Generator) -> ParamAnsatz:
    """Append one identity gate on a random support (free-structure ansatz)."""
    if ansatz.structure != "free":
        raise ValueError("grow_identity_gate requires a free-structure ansatz")
    supports = ansatz.supports + (_random_support(ansatz.n_qubits, rng),)
    params = np.concatenate([ansatz.params.ravel(), np.zeros(PARAMS_PER_GATE)])
    return ParamAnsatz(ansatz.n_qubits, supports, params, structure="free")


def _random_support(n: int, rng: np.random.Generator) -> tuple:
    i = int(rng.integers(1, n + 1))
    j = int(rng.integers(1, n))
    if j >= i:
        j += 1
    return (i, j)


def random_structure_update(
    ansatz: ParamAnsatz, rng: np.random.Generator, max_changes: int = 2
) -> ParamAnsatz:
    """Reassign the supports of 1..max_changes randomly chosen gates.

    Parameter values are carried over; the gate count is unchanged.
    """
    if ansatz.structure != "free":
        raise ValueError("random_structure_update requires a free-structure ansatz")
    d = ansatz.gate_count
    k = int(rng.integers(1, min(max_changes, d) + 1))
    chosen = rng.choice(d, size=k, replace=False)
    supports = list(ansatz.supports)
    for g in chosen:
        supports[g] = _random_support(ansatz.n_qubits, rng)
    return ParamAnsatz(ansatz.n_qubits, supports, ansatz.params.ravel(), structure="free")


def random_free_ansatz(
    n: int, gate_count: int, rng: np.random.Generator, scale: float = 0.1
) -> ParamAnsatz:
    """Free-structure ansatz with random supports and small random parameters."""
    supports = [_random_support(n, rng) for _ in range(gate_count)]
    params = rng.normal(scale=scale, size=gate_count * PARAMS_PER_GATE)
    return ParamAnsatz(n, supports, params, structure="free")


def product_unitary(single_qubit_gates) -> np.ndarray:
    """Tensor product of one-qubit gates, qubit 1 first (most significant)."""
    u = np.array([[1.0 + 0j]])
    for g in single_qubit_gates:
        u = np.kron(u, g)
    return u
