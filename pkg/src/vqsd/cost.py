"""VQSD cost functions and eigensystem error metrics.

The cost of a candidate unitary U for a state rho is

    c1 = Tr(rho^2) - Tr(Z(rho~)^2)
    c2 = Tr(rho^2) - (1/n) sum_j Tr(Z_j(rho~)^2)
    c  = q c1 + (1 - q) c2,       rho~ = U rho U†

with the global/local dephasing channels Z and Z_j.  Exact mode evaluates
the purities from matrices; sampled mode runs the swap-test/DIP/PDIP
circuits.  ``CostEvaluator`` caches Tr(rho^2), which does not depend on U,
so an optimization loop pays for it once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import ParamAnsatz, synthesize
from .circuits import CircuitEstimate, ShotPlan, destructive_swap_test, dip_test, pdip_test
from .states import QuantumState, apply_unitary, purity

__all__ = [
    "CostReport",
    "ErrorMetrics",
    "CostEvaluator",
    "cost_c1",
    "cost_c2",
    "cost",
    "beta",
    "eigenvalue_error",
    "eigenvector_error",
]


@dataclass(frozen=True)
class CostReport:
    c: float
    c1: float
    c2: float
    q: float
    mode: str
    shots: int
    tr_rho_sq: float


@dataclass(frozen=True)
class ErrorMetrics:
    delta_lambda: float
    delta_v: float
    beta: float


def beta(n: int, q: float) -> float:
    """Proportionality factor in the eigensystem error bound: n / (1 + q(n-1))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= q <= 1:
        raise ValueError("q must lie in [0, 1]")
    return n / (1 + q * (n - 1))


def _as_unitary(u_or_ansatz) -> np.ndarray:
    if isinstance(u_or_ansatz, ParamAnsatz):
        return synthesize(u_or_ansatz)
    return np.asarray(u_or_ansatz, dtype=complex)


def _local_purity_exact(rho_t: np.ndarray, n: int, j: int) -> float:
    """Tr(Z_j(rho~)^2) from the matrix, via the equal-bit mask on qubit j."""
    idx = np.arange(2**n)
    bits = (idx >> (n - j)) & 1
    mask = bits[:, None] == bits[None, :]
    return float(np.sum(np.abs(rho_t[mask]) ** 2))


class CostEvaluator:
    """Per-problem cost context: fixes rho, q, and the shot plan.

    Tr(rho^2) is evaluated once at construction (swap test in sampled mode)
    and reused by every subsequent cost query.
    """

    def __init__(self, rho: QuantumState, q: float, plan: ShotPlan | None = None):
        if not 0 <= q <= 1:
            raise ValueError("q must lie in [0, 1]")
        self.rho = rho
        self.q = q
        self.plan = plan or ShotPlan.exact()
        if self.plan.mode == "exact":
            self.tr_rho_sq = purity(rho)
        else:
            self.tr_rho_sq = destructive_swap_test(rho, rho, self.plan).value
        self._eval_count = 0

    def _subplan(self) -> ShotPlan:
        """Fresh seeded sub-stream per evaluation, derived from the master seed."""
        if self.plan.mode == "exact":
            return self.plan
        self._eval_count += 1
        sub = np.random.SeedSequence([self.plan.seed, self._eval_count])
        return ShotPlan.sampled(self.plan.shots, int(sub.generate_state(1, np.uint64)[0]))

    def _terms(self, u_or_ansatz, need_c1: bool, need_c2: bool):
        u = _as_unitary(u_or_ansatz)
        n = self.rho.n_qubits
        c1 = c2 = 0.0
        if self.plan.mode == "exact":
            rho_t = apply_unitary(self.rho, u).matrix
            if need_c1:
                diag = np.real(np.diag(rho_t))
                c1 = self.tr_rho_sq - float(np.dot(diag, diag))
            if need_c2:
                local = [_local_purity_exact(rho_t, n, j) for j in range(1, n + 1)]
                c2 = self.tr_rho_sq - float(np.mean(local))
        else:
            rho_t = apply_unitary(self.rho, u)
            if need_c1:
                c1 = self.tr_rho_sq - dip_test(rho_t, rho_t, self._subplan()).value
            if need_c2:
                local = [
                    pdip_test(rho_t, rho_t, {j}, self._subplan()).value
                    for j in range(1, n + 1)
                ]
                c2 = self.tr_rho_sq - float(np.mean(local))
        return c1, c2

    def report(self, u_or_ansatz) -> CostReport:
        c1, c2 = self._terms(u_or_ansatz, True, True)
        shots = 0 if self.plan.mode == "exact" else self.plan.shots
        c = self.q * c1 + (1 - self.q) * c2
        return CostReport(
            c=c, c1=c1, c2=c2, q=self.q, mode=self.plan.mode, shots=shots,
            tr_rho_sq=self.tr_rho_sq,
        )

    def cost(self, u_or_ansatz) -> float:
        """The weighted cost alone; skips whichever term q gives zero weight."""
        c1, c2 = self._terms(u_or_ansatz, self.q > 0, self.q < 1)
        return self.q * c1 + (1 - self.q) * c2


def cost_c1(rho: QuantumState, u_or_ansatz, plan: ShotPlan | None = None) -> float:
    return CostEvaluator(rho, 1.0, plan).report(u_or_ansatz).c1


def cost_c2(rho: QuantumState, u_or_ansatz, plan: ShotPlan | None = None) -> float:
    return CostEvaluator(rho, 0.0, plan).report(u_or_ansatz).c2


def cost(rho: QuantumState, u_or_ansatz, q: float, plan: ShotPlan | None = None) -> CostReport:
    return CostEvaluator(rho, q, plan).report(u_or_ansatz)


def eigenvalue_error(true_spectrum, inferred_spectrum, dim: int | None = None) -> float:
    """Sum of squared differences between sorted spectra, zero-padded to ``dim``.

    Both inputs are sorted descending internally, so any tie order is accepted.
    """
    t = np.sort(np.asarray(true_spectrum, dtype=float))[::-1]
    s = np.sort(np.asarray(inferred_spectrum, dtype=float))[::-1]
    d = dim or max(t.size, s.size)
    if t.size > d or s.size > d:
        raise ValueError(f"spectrum longer than dimension {d}")
    t = np.pad(t, (0, d - t.size))
    s = np.pad(s, (0, d - s.size))
    return float(np.sum((t - s) ** 2))


def eigenvector_error(rho: QuantumState, inferred_vectors: np.ndarray, atol: float = 1e-8) -> float:
    """Sum over columns v of || rho v - <v|rho|v> v ||^2."""
    v = np.asarray(inferred_vectors, dtype=complex)
    if v.ndim != 2 or v.shape[0] != rho.dim:
        raise ValueError(f"expected a {rho.dim} x k column matrix, got {v.shape}")
    gram_dev = np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1])))
    if gram_dev > atol:
        raise ValueError(f"inferred vectors not orthonormal: deviation {gram_dev:.3e}")
    rv = rho.matrix @ v
    lam = np.real(np.einsum("ik,ik->k", v.conj(), rv))
    resid = rv - v * lam
    return float(np.sum(np.abs(resid) ** 2))


def error_metrics(rho: QuantumState, u: np.ndarray, q: float) -> ErrorMetrics:
    """Exact-mode Delta_lambda, Delta_v, and beta for a candidate unitary."""
    from .states import exact_eigendecomposition

    n = rho.n_qubits
    rho_t = apply_unitary(rho.as_matrix_state(), u)
    inferred = np.real(np.diag(rho_t.matrix))
    true = exact_eigendecomposition(rho).eigenvalues
    dl = eigenvalue_error(true, inferred, dim=rho.dim)
    dv = eigenvector_error(rho, u.conj().T)
    return ErrorMetrics(delta_lambda=dl, delta_v=dv, beta=beta(n, q))
