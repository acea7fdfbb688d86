"""Diagonalization test circuits: Destructive Swap Test, DIP Test, PDIP Test.

Each test runs in one of two modes:

* exact -- the target trace is computed directly from the state matrices.
* sampled -- measurement outcomes are drawn from the exact outcome
  distribution of the corresponding circuit, with seeded randomness.  For
  mixed inputs on more than ``_DENSE_MIXED_MAX`` qubits per register, a pure
  eigenvector of each input is sampled per shot (probability = eigenvalue)
  and the pure-state circuit is run, which yields the identical distribution
  at exponentially lower memory cost.

Register layout for the sampled circuits: the sigma register occupies
qubits 1..n (most significant bits of the outcome index), the tau register
qubits n+1..2n.  CNOT controls follow the convention that the tau register
controls the DIP-style gates and the sigma register controls the
destructive-swap-style gates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import QuantumState, exact_eigendecomposition

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_DENSE_MIXED_MAX = 5

__all__ = ["ShotPlan", "CircuitEstimate", "destructive_swap_test", "dip_test", "pdip_test"]


@dataclass(frozen=True)
class ShotPlan:
    """Evaluation mode for a cost or circuit query."""

    mode: str = "exact"
    shots: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exact", "sampled"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "sampled" and self.shots < 1:
            raise ValueError("sampled mode requires shots >= 1")

    @classmethod
    def exact(cls) -> "ShotPlan":
        return cls(mode="exact")

    @classmethod
    def sampled(cls, shots: int, seed: int = 0) -> "ShotPlan":
        return cls(mode="sampled", shots=shots, seed=seed)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed))


@dataclass(frozen=True)
class CircuitEstimate:
    value: float
    std_error: float
    shots_used: int


def _exact_estimate(value: float) -> CircuitEstimate:
    return CircuitEstimate(value=float(value), std_error=0.0, shots_used=0)


# ---------------------------------------------------------------------------
# dense circuit simulation helpers


def _apply_h_axis(arr: np.ndarray, axis: int) -> np.ndarray:
    arr = np.tensordot(_H, arr, axes=([1], [axis]))
    return np.moveaxis(arr, 0, axis)


def _apply_cnot_axes(arr: np.ndarray, control: int, target: int) -> np.ndarray:
    sl = [slice(None)] * arr.ndim
    sl[control] = 1
    sub_target = target if target < control else target - 1
    arr = arr.copy()
    arr[tuple(sl)] = np.flip(arr[tuple(sl)], axis=sub_target)
    return arr


def _circuit_gates(n: int, dip_qubits: set) -> tuple[list, list, list]:
    """Gate list plus measured-axis bookkeeping for the hybrid PDIP circuit.

    ``dip_qubits`` selects the DIP-style qubits; its complement gets
    destructive-swap-style treatment.  Axes are 0-based over 2n qubits with
    the sigma register first.  Returns (gates, measured_axes, unmeasured_axes)
    where gates are ("cnot", c, t) or ("h", q) tuples.
    """
    gates = []
    measured = []
    unmeasured = []
    comp = [i for i in range(1, n + 1) if i not in dip_qubits]
    for i in sorted(dip_qubits):
        gates.append(("cnot", n + i - 1, i - 1))  # control on tau register
        measured.append(i - 1)
        unmeasured.append(n + i - 1)
    for i in comp:
        gates.append(("cnot", i - 1, n + i - 1))  # control on sigma register
        gates.append(("h", i - 1))
        measured.append(i - 1)
        measured.append(n + i - 1)
    return gates, sorted(measured), sorted(unmeasured)


def _pure_outcome_distribution(psi, phi, gates, measured, m) -> np.ndarray:
    vec = np.kron(psi, phi).reshape((2,) * m)
    for g in gates:
        if g[0] == "cnot":
            vec = _apply_cnot_axes(vec, g[1], g[2])
        else:
            vec = _apply_h_axis(vec, g[1])
    p = np.abs(vec) ** 2
    drop = tuple(a for a in range(m) if a not in measured)
    if drop:
        p = p.sum(axis=drop)
    return p.reshape(-1)


def _dense_outcome_distribution(sigma_m, tau_m, gates, measured, m) -> np.ndarray:
    rho = np.kron(sigma_m, tau_m).reshape((2,) * (2 * m))
    for g in gates:
        if g[0] == "cnot":
            rho = _apply_cnot_axes(rho, g[1], g[2])
            rho = _apply_cnot_axes(rho, m + g[1], m + g[2])
        else:
            rho = _apply_h_axis(rho, g[1])
            rho = np.moveaxis(
                np.tensordot(_H.conj(), rho, axes=([1], [m + g[1]])), 0, m + g[1]
            )
    diag = np.real(np.diag(rho.reshape(2**m, 2**m)))
    p = diag.reshape((2,) * m)
    drop = tuple(a for a in range(m) if a not in measured)
    if drop:
        p = p.sum(axis=drop)
    return p.reshape(-1)


def _sample_counts(p: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    return rng.multinomial(shots, p)


def _estimate_from_counts(counts: np.ndarray, values: np.ndarray, shots: int) -> CircuitEstimate:
    mean = float(np.dot(counts, values) / shots)
    if shots > 1:
        var = float(np.dot(counts, (values - mean) ** 2) / (shots - 1))
    else:
        var = 0.0
    return CircuitEstimate(value=mean, std_error=float(np.sqrt(var / shots)), shots_used=shots)


def _mixed_components(state: QuantumState, threshold: float = 1e-12):
    """(probabilities, statevectors) decomposition of a possibly mixed state."""
    if state.is_pure_form:
        return np.array([1.0]), [state.vector]
    dec = exact_eigendecomposition(state)
    keep = dec.eigenvalues > threshold
    probs = dec.eigenvalues[keep]
    return probs / probs.sum(), [dec.eigenvectors[:, i] for i in np.nonzero(keep)[0]]


def _sampled_hybrid(sigma, tau, dip_qubits, values_fn, plan) -> CircuitEstimate:
    """Run the hybrid circuit in sampled mode and average per-shot values."""
    n = sigma.n_qubits
    m = 2 * n
    gates, measured, _ = _circuit_gates(n, dip_qubits)
    rng = plan.rng()
    values = values_fn(n, measured)
    both_pure = sigma.is_pure_form and tau.is_pure_form
    if both_pure or n <= _DENSE_MIXED_MAX:
        if both_pure:
            p = _pure_outcome_distribution(sigma.vector, tau.vector, gates, measured, m)
        else:
            p = _dense_outcome_distribution(sigma.matrix, tau.matrix, gates, measured, m)
        counts = _sample_counts(p, plan.shots, rng)
        return _estimate_from_counts(counts, values, plan.shots)
    # per-shot eigenvector sampling for large mixed inputs
    ps, svecs = _mixed_components(sigma)
    pt, tvecs = _mixed_components(tau)
    joint = np.outer(ps, pt).ravel()
    pair_counts = rng.multinomial(plan.shots, joint / joint.sum())
    counts = np.zeros(2 ** len(measured), dtype=np.int64)
    for flat, c in enumerate(pair_counts):
        if c == 0:
            continue
        k, l = divmod(flat, len(tvecs))
        p = _pure_outcome_distribution(svecs[k], tvecs[l], gates, measured, m)
        counts += _sample_counts(p, int(c), rng)
    return _estimate_from_counts(counts, values, plan.shots)


def _outcome_values(n: int, measured: list, dip_qubits: set) -> np.ndarray:
    """Per-outcome contribution: all-zeros indicator on the sigma-register DIP
    bits times the swap-test parity over the complement pairs."""
    k = len(measured)
    pos = {axis: k - 1 - idx for idx, axis in enumerate(measured)}
    idx = np.arange(2**k)
    values = np.ones(2**k)
    comp = [i for i in range(1, n + 1) if i not in dip_qubits]
    for i in sorted(dip_qubits):
        bit = (idx >> pos[i - 1]) & 1
        values = values * (bit == 0)
    for i in comp:
        a = (idx >> pos[i - 1]) & 1
        b = (idx >> pos[n + i - 1]) & 1
        values = values * np.where(a & b, -1.0, 1.0)
    return values


def _check_same_size(sigma: QuantumState, tau: QuantumState):
    if sigma.n_qubits != tau.n_qubits:
        raise ValueError(
            f"qubit-count mismatch: {sigma.n_qubits} vs {tau.n_qubits}"
        )


# ---------------------------------------------------------------------------
# public tests


def destructive_swap_test(
    sigma: QuantumState, tau: QuantumState, plan: ShotPlan
) -> CircuitEstimate:
    """Estimate Tr(sigma tau) via the pairwise Bell-basis measurement circuit."""
    _check_same_size(sigma, tau)
    if plan.mode == "exact":
        if sigma.is_pure_form and tau.is_pure_form:
            return _exact_estimate(abs(np.vdot(sigma.vector, tau.vector)) ** 2)
        if sigma.is_pure_form:
            v = sigma.vector
            return _exact_estimate(np.real(np.vdot(v, tau.matrix @ v)))
        if tau.is_pure_form:
            v = tau.vector
            return _exact_estimate(np.real(np.vdot(v, sigma.matrix @ v)))
        return _exact_estimate(np.real(np.vdot(tau.matrix, sigma.matrix)))
    n = sigma.n_qubits
    return _sampled_hybrid(
        sigma, tau, set(), lambda n_, meas: _outcome_values(n_, meas, set()), plan
    )


def dip_test(sigma: QuantumState, tau: QuantumState, plan: ShotPlan) -> CircuitEstimate:
    """Estimate Tr(Z(sigma) Z(tau)) = sum_z sigma_zz tau_zz.

    Sampled mode measures only the sigma register; the estimate is the
    frequency of the all-zeros outcome, with no post-processing.
    """
    _check_same_size(sigma, tau)
    if plan.mode == "exact":
        return _exact_estimate(float(np.dot(sigma.diagonal, tau.diagonal)))
    # outcome distribution is the XOR convolution of the two diagonals
    ds, dt = sigma.diagonal, tau.diagonal
    d = ds.size
    p = np.zeros(d)
    for z in np.nonzero(dt > 0)[0]:
        p[np.arange(d) ^ z] += dt[z] * ds
    counts = _sample_counts(p, plan.shots, plan.rng())
    values = np.zeros(d)
    values[0] = 1.0
    return _estimate_from_counts(counts, values, plan.shots)


def pdip_test(
    sigma: QuantumState, tau: QuantumState, dip_qubits, plan: ShotPlan
) -> CircuitEstimate:
    """Estimate Tr(Z_j(sigma) Z_j(tau)) for the (1-based) qubit set ``dip_qubits``.

    The DIP-style measurement acts on ``dip_qubits``; the destructive-swap
    measurement acts on the complement.  Empty set reduces to the swap test,
    the full set to the DIP test.
    """
    _check_same_size(sigma, tau)
    n = sigma.n_qubits
    js = set(dip_qubits)
    if any(not 1 <= j <= n for j in js):
        raise ValueError(f"invalid dip qubits {sorted(js)} for n={n}")
    if plan.mode == "exact":
        if not js:
            return destructive_swap_test(sigma, tau, plan)
        if len(js) == n:
            return dip_test(sigma, tau, plan)
        sm, tm = sigma.matrix, tau.matrix
        idx = np.arange(2**n)
        mask = np.ones((2**n, 2**n), dtype=bool)
        for j in sorted(js):
            bits = (idx >> (n - j)) & 1
            mask &= bits[:, None] == bits[None, :]
        return _exact_estimate(np.real(np.sum(np.where(mask, sm * tm.conj(), 0.0))))
    return _sampled_hybrid(
        sigma, tau, js, lambda n_, meas: _outcome_values(n_, meas, js), plan
    )
