"""Eigenvalue readout and eigenvector preparation.

After training a diagonalizing unitary U, sampling rho~ = U rho U† in the
computational basis gives frequencies f_z whose normalized values estimate
the eigenvalues of rho.  The relative statistical error of an estimate is
eps_z = sqrt(N) / f_z, and an estimate is accepted when eps_z <= eps_max.
The inferred eigenvector for bitstring z is U† X^z |0...0>.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .ansatz import ParamAnsatz, synthesize
from .states import Observable, QuantumState, apply_unitary

__all__ = [
    "EigenEstimate",
    "infer_eigenvalues",
    "threshold",
    "prepare_eigenvector",
    "resolve_observable",
    "group_degenerate",
    "write_eigenvalue_csv",
    "write_observable_csv",
]


@dataclass
class EigenEstimate:
    """One observed readout outcome and its eigenvalue estimate."""

    bitstring: str
    frequency: int
    estimate: float
    rel_error: float
    accepted: bool = False


def _as_unitary(u_or_ansatz) -> np.ndarray:
    if isinstance(u_or_ansatz, ParamAnsatz):
        return synthesize(u_or_ansatz)
    return np.asarray(u_or_ansatz, dtype=complex)


def infer_eigenvalues(
    rho: QuantumState, u_or_ansatz, n_readout: int, seed: int = 0
) -> list:
    """Sample the diagonal of U rho U† and return estimates, largest first.

    Only observed bitstrings appear (an unobserved outcome has undefined
    relative error).  Ties in the estimate are broken by lexicographic
    bitstring order so reports are deterministic.
    """
    if n_readout < 1:
        raise ValueError("n_readout must be >= 1")
    u = _as_unitary(u_or_ansatz)
    n = rho.n_qubits
    diag = apply_unitary(rho, u).diagonal
    p = np.clip(diag, 0.0, None)
    p = p / p.sum()
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    counts = rng.multinomial(n_readout, p)
    out = []
    for z in np.nonzero(counts)[0]:
        f = int(counts[z])
        out.append(
            EigenEstimate(
                bitstring=format(z, f"0{n}b"),
                frequency=f,
                estimate=f / n_readout,
                rel_error=np.sqrt(n_readout) / f,
            )
        )
    out.sort(key=lambda e: (-e.estimate, e.bitstring))
    return out


def threshold(estimates, eps_max: float) -> tuple[list, int]:
    """Flag estimates with rel_error <= eps_max; returns (accepted list, m)."""
    accepted = []
    for e in estimates:
        e.accepted = e.frequency > 0 and e.rel_error <= eps_max
        if e.accepted:
            accepted.append(e)
    return accepted, len(accepted)


def prepare_eigenvector(u_or_ansatz, z: str) -> QuantumState:
    """Inferred eigenvector U† X^z |0...0> for readout bitstring ``z``."""
    u = _as_unitary(u_or_ansatz)
    n = int(round(np.log2(u.shape[0])))
    if len(z) != n or any(c not in "01" for c in z):
        raise ValueError(f"bitstring {z!r} does not have length {n} over 0/1")
    # X^z |0...0> is the basis state indexed by z; U† column extraction
    vec = u.conj().T[:, int(z, 2)]
    return QuantumState.from_vector(vec)


def resolve_observable(vector: QuantumState, obs: Observable) -> float:
    """Expectation value <v|M|v> of a Hermitian observable."""
    v = vector.vector
    if obs.matrix.shape[0] != v.size:
        raise ValueError(
            f"dimension mismatch: observable {obs.matrix.shape[0]} vs state {v.size}"
        )
    return float(np.real(np.vdot(v, obs.matrix @ v)))


def group_degenerate(estimates, n_readout: int, z_score: float = 2.0) -> list:
    """Group estimates whose values lie within ``z_score`` standard errors.

    Returns a list of lists (each a near-degenerate cluster, in input order);
    report writers annotate cluster sizes in parentheses.
    """
    groups = []
    for e in estimates:
        se = np.sqrt(max(e.estimate * (1 - e.estimate), 1e-12) / n_readout)
        if groups and abs(groups[-1][-1].estimate - e.estimate) <= z_score * se:
            groups[-1].append(e)
        else:
            groups.append([e])
    return groups


def write_eigenvalue_csv(estimates, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bitstring", "frequency", "estimate", "rel_error", "accepted"])
        for e in estimates:
            w.writerow(
                [e.bitstring, e.frequency, repr(float(e.estimate)),
                 repr(float(e.rel_error)), int(e.accepted)]
            )


def write_observable_csv(rows, path):
    """Rows are (bitstring, estimate, observable value) triples."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bitstring", "estimate", "observable"])
        for z, est, val in rows:
            w.writerow([z, repr(float(est)), repr(float(val))])
