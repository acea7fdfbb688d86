"""Classical minimizers for the diagonalization loop.

Three local optimizers share a common trace contract: Powell's
direction-set method with Brent line searches, a Nelder-Mead simplex, and
central-difference gradient descent with backtracking.  On top of those sit
two training drivers: layer-by-layer growth of the layered ansatz (warm
starts plus identity-initialized new layers) and a simulated-annealing
search over free gate structures.

A trace records one row per *strict improvement* of the objective, so the
cost column is strictly decreasing by construction.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .ansatz import (
    PARAMS_PER_GATE,
    ParamAnsatz,
    build_layered,
    grow_identity_gate,
    grow_to_depth,
    layered_gate_count,
    random_structure_update,
)
from .circuits import ShotPlan
from .cost import CostEvaluator
from .states import QuantumState

__all__ = [
    "OptimizationTrace",
    "OptimizerConfig",
    "AnnealSchedule",
    "powell_minimize",
    "nelder_mead_minimize",
    "fd_gradient_minimize",
    "minimize",
    "layer_growth_train",
    "annealed_structure_search",
]


@dataclass
class OptimizationTrace:
    """Strict-improvement history of one optimizer run.

    ``records`` rows are (iteration, params, cost, D) where iteration is the
    objective-call index at which the improvement happened and D is the gate
    count in force at that point (0 for raw vector objectives).
    ``growth_checks`` collects (cost_before, cost_after) pairs around
    structural growth events in the training drivers.
    """

    records: list = field(default_factory=list)
    evaluations: int = 0
    wall_time: float = 0.0
    growth_checks: list = field(default_factory=list)

    @property
    def best_cost(self) -> float:
        return self.records[-1][2] if self.records else np.inf

    @property
    def best_params(self) -> np.ndarray:
        if not self.records:
            raise ValueError("empty trace")
        return self.records[-1][1]

    def extend(self, other: "OptimizationTrace"):
        self.records.extend(other.records)
        self.evaluations += other.evaluations
        self.wall_time += other.wall_time
        self.growth_checks.extend(other.growth_checks)

    def write_csv(self, path, deterministic: bool = False):
        """CSV body: iteration, cost, D, wall_time (parameters go to JSON).

        With ``deterministic=True`` the wall_time cells are left empty so the
        body is byte-identical across reruns; timing then lives in the run
        manifest instead.
        """
        wt = "" if deterministic else repr(float(self.wall_time))
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["iteration", "cost", "D", "wall_time"])
            for it, _params, cost, d in self.records:
                w.writerow([it, repr(float(cost)), d, wt])

    def write_params_json(self, path):
        doc = [
            {"iteration": it, "cost": float(cost), "D": d,
             "params": [float(x) for x in params]}
            for it, params, cost, d in self.records
        ]
        with open(path, "w") as fh:
            json.dump(doc, fh)


@dataclass(frozen=True)
class OptimizerConfig:
    method: str = "powell"
    max_evals: int = 20000
    param_tolerance: float = 1e-8
    cost_tolerance: float = 1e-10
    fd_step: float = 1e-5
    seed: int = 0

    def __post_init__(self):
        if self.method not in ("powell", "nelder_mead", "fd_gradient"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.max_evals < 1:
            raise ValueError("max_evals must be positive")
        if self.param_tolerance <= 0 or self.cost_tolerance <= 0 or self.fd_step <= 0:
            raise ValueError("tolerances and fd_step must be positive")


class _Budget(Exception):
    """Raised internally when the evaluation budget runs out."""


class _Recorder:
    """Wraps an objective: counts calls, records strict improvements."""

    def __init__(self, objective, cfg: OptimizerConfig, gate_count: int = 0):
        self._objective = objective
        self._cfg = cfg
        self._gate_count = gate_count
        self.trace = OptimizationTrace()
        self.best = np.inf
        self.best_x = None

    def __call__(self, x):
        if self.trace.evaluations >= self._cfg.max_evals:
            raise _Budget()
        x = np.asarray(x, dtype=float)
        value = float(self._objective(x))
        self.trace.evaluations += 1
        if np.isnan(value):
            raise FloatingPointError(
                f"objective returned NaN at evaluation {self.trace.evaluations}, "
                f"x[:3]={x.ravel()[:3]}"
            )
        if value < self.best:
            self.best = value
            self.best_x = x.copy()
            self.trace.records.append(
                (self.trace.evaluations, x.copy(), value, self._gate_count)
            )
        return value


def _line_search_brent(rec: _Recorder, x: np.ndarray, direction: np.ndarray):
    """Minimize f(x + a*direction) over a; returns (best_a, best_value)."""

    def g(a):
        return rec(x + a * direction)

    res = minimize_scalar(g, bracket=(0.0, 0.25), method="brent",
                          options={"xtol": 1e-10, "maxiter": 60})
    return float(res.x), float(res.fun)


def powell_minimize(objective, x0, cfg: OptimizerConfig | None = None,
                    gate_count: int = 0) -> OptimizationTrace:
    """Powell's direction-set method with Brent line searches.

    The direction set starts as the coordinate axes; after each cycle the
    direction of largest single-search decrease is replaced by the cycle's
    net displacement.  The set resets to the axes when it degenerates.
    """
    cfg = cfg or OptimizerConfig(method="powell")
    rec = _Recorder(objective, cfg, gate_count)
    x = np.asarray(x0, dtype=float).copy()
    d = x.size
    start = time.perf_counter()
    try:
        f = rec(x)
        dirs = np.eye(d)
        while True:
            f_start = f
            x_start = x.copy()
            biggest_drop = 0.0
            biggest_idx = 0
            for i in range(d):
                a, fa = _line_search_brent(rec, x, dirs[i])
                if fa < f:
                    if f - fa > biggest_drop:
                        biggest_drop = f - fa
                        biggest_idx = i
                    x = x + a * dirs[i]
                    f = fa
            if f_start - f <= cfg.cost_tolerance:
                break
            if np.linalg.norm(x - x_start) <= cfg.param_tolerance:
                break
            new_dir = x - x_start
            norm = np.linalg.norm(new_dir)
            if norm > 0:
                dirs[biggest_idx] = dirs[d - 1]
                dirs[d - 1] = new_dir / norm
            if abs(np.linalg.det(dirs)) < 1e-12:
                dirs = np.eye(d)
            # extra search along the net displacement
            if norm > 0:
                a, fa = _line_search_brent(rec, x, dirs[d - 1])
                if fa < f:
                    x = x + a * dirs[d - 1]
                    f = fa
    except _Budget:
        pass
    rec.trace.wall_time = time.perf_counter() - start
    return rec.trace


def nelder_mead_minimize(objective, x0, cfg: OptimizerConfig | None = None,
                         gate_count: int = 0) -> OptimizationTrace:
    """Nelder-Mead simplex with standard reflection/expansion/contraction/shrink."""
    cfg = cfg or OptimizerConfig(method="nelder_mead")
    rec = _Recorder(objective, cfg, gate_count)
    x0 = np.asarray(x0, dtype=float)
    d = x0.size
    alpha, gamma, rho_c, sigma = 1.0, 2.0, 0.5, 0.5
    start = time.perf_counter()
    try:
        # conventional initial simplex: 5% relative displacement per
        # coordinate, with a small absolute step where a coordinate is zero
        simplex = [x0.copy()]
        for i in range(d):
            step = np.zeros(d)
            step[i] = 0.00025 if x0[i] == 0 else 0.05 * x0[i]
            simplex.append(x0 + step)
        values = [rec(v) for v in simplex]
        while True:
            order = np.argsort(values)
            simplex = [simplex[i] for i in order]
            values = [values[i] for i in order]
            spread = max(np.linalg.norm(v - simplex[0]) for v in simplex[1:])
            # both the values and the simplex itself must have collapsed
            if (values[-1] - values[0] <= cfg.cost_tolerance
                    and spread <= cfg.param_tolerance):
                break
            centroid = np.mean(simplex[:-1], axis=0)
            refl = centroid + alpha * (centroid - simplex[-1])
            f_refl = rec(refl)
            if values[0] <= f_refl < values[-2]:
                simplex[-1], values[-1] = refl, f_refl
            elif f_refl < values[0]:
                exp = centroid + gamma * (refl - centroid)
                f_exp = rec(exp)
                if f_exp < f_refl:
                    simplex[-1], values[-1] = exp, f_exp
                else:
                    simplex[-1], values[-1] = refl, f_refl
            else:
                contr = centroid + rho_c * (simplex[-1] - centroid)
                f_contr = rec(contr)
                if f_contr < values[-1]:
                    simplex[-1], values[-1] = contr, f_contr
                else:
                    best = simplex[0]
                    for i in range(1, d + 1):
                        simplex[i] = best + sigma * (simplex[i] - best)
                        values[i] = rec(simplex[i])
    except _Budget:
        pass
    rec.trace.wall_time = time.perf_counter() - start
    return rec.trace


def fd_gradient_minimize(objective, x0, cfg: OptimizerConfig | None = None,
                         gate_count: int = 0) -> OptimizationTrace:
    """Gradient descent on a central-difference gradient with backtracking."""
    cfg = cfg or OptimizerConfig(method="fd_gradient")
    rec = _Recorder(objective, cfg, gate_count)
    x = np.asarray(x0, dtype=float).copy()
    d = x.size
    h = cfg.fd_step
    step = 1.0
    start = time.perf_counter()
    try:
        f = rec(x)
        while True:
            grad = np.zeros(d)
            for i in range(d):
                e = np.zeros(d)
                e[i] = h
                grad[i] = (rec(x + e) - rec(x - e)) / (2 * h)
            if np.any(np.isnan(grad)):
                raise FloatingPointError("NaN gradient")
            gnorm = np.linalg.norm(grad)
            if gnorm <= cfg.param_tolerance:
                break
            # backtracking line search along -grad
            step = min(step * 2.0, 1.0)
            improved = False
            while step > 1e-14:
                f_new = rec(x - step * grad)
                if f_new < f - 1e-4 * step * gnorm**2:
                    x = x - step * grad
                    improved = True
                    break
                step *= 0.5
            if not improved or f - f_new <= cfg.cost_tolerance:
                if improved:
                    f = f_new
                break
            f = f_new
    except _Budget:
        pass
    rec.trace.wall_time = time.perf_counter() - start
    return rec.trace


_METHODS = {
    "powell": powell_minimize,
    "nelder_mead": nelder_mead_minimize,
    "fd_gradient": fd_gradient_minimize,
}


def minimize(objective, x0, cfg: OptimizerConfig, gate_count: int = 0) -> OptimizationTrace:
    """Dispatch to the optimizer named in ``cfg.method``."""
    return _METHODS[cfg.method](objective, x0, cfg, gate_count)


def _ansatz_objective(evaluator: CostEvaluator, template: ParamAnsatz):
    def f(params):
        return evaluator.cost(template.with_params(params))
    return f


def _half_steps(p_start: float, p_max: float):
    k = int(round(2 * p_start))
    while k / 2 <= p_max + 1e-12:
        yield k / 2
        k += 1


def layer_growth_train(
    rho: QuantumState,
    q: float,
    p_max: float,
    inner: OptimizerConfig,
    plan: ShotPlan | None = None,
    jitter: float = 0.01,
    restarts: int = 1,
    p_start: float = 0.5,
) -> tuple[ParamAnsatz, dict]:
    """Train the layered ansatz at p = p_start, ..., p_max with warm starts.

    Each stage starts from the previous optimum extended by identity gates.
    The first attempt of every stage refines that warm start directly;
    additional ``restarts`` launch from jittered copies of it, which can
    escape the exact critical point the identity extension sits on.  The
    best attempt wins; if nothing beats the warm-start cost, the warm
    start is kept, which makes the per-stage final cost non-increasing in
    p (exact mode).  At the first stage the warm start is the all-identity
    circuit, so the jittered attempts are independent random
    initializations at scale ``jitter``.

    Returns the final ansatz and a dict mapping p to that stage's trace.
    Growth consistency pairs (cost before growth, cost after growth)
    accumulate on each stage trace's ``growth_checks``.
    """
    if p_start < 0.5 or (2 * p_start) != int(2 * p_start):
        raise ValueError("p_start must be a half-integer >= 0.5")
    if p_max < p_start:
        raise ValueError("p_max must be >= p_start")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    n = rho.n_qubits
    evaluator = CostEvaluator(rho, q, plan)
    current = build_layered(n, 0.0, np.zeros(0))
    traces: dict = {}
    prev_cost = None
    rng = np.random.default_rng(np.random.SeedSequence([inner.seed, 0x6777]))
    for p in _half_steps(p_start, p_max):
        grown = grow_to_depth(current, p)
        cost_after_growth = evaluator.cost(grown)
        objective = _ansatz_objective(evaluator, grown)
        trace = None
        spent = 0
        for attempt in range(restarts):
            # first attempt refines the warm start itself; the rest explore
            # jittered copies (and can escape the identity critical point)
            x0 = grown.param_vector
            if attempt > 0:
                x0 = x0 + jitter * rng.standard_normal(x0.size)
            attempt = minimize(objective, x0, inner, gate_count=grown.gate_count)
            if trace is None or attempt.best_cost < trace.best_cost:
                spent += trace.evaluations if trace is not None else 0
                trace = attempt
            else:
                spent += attempt.evaluations
        trace.evaluations += spent
        if prev_cost is not None:
            trace.growth_checks.append((prev_cost, cost_after_growth))
        if trace.records and trace.best_cost < cost_after_growth:
            current = grown.with_params(trace.best_params)
            prev_cost = trace.best_cost
        else:
            current = grown
            prev_cost = cost_after_growth
        trace.stage_final_cost = prev_cost  # min(warm start, best found)
        traces[p] = trace
    return current, traces


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric temperature schedule T_k = t0 * gamma^k."""

    t0: float = 0.1
    gamma: float = 0.95
    stall_patience: int = 25

    def temperature(self, k: int) -> float:
        return self.t0 * self.gamma**k


def annealed_structure_search(
    rho: QuantumState,
    q: float,
    d_max: int,
    inner: OptimizerConfig,
    rng: np.random.Generator,
    initial: ParamAnsatz | None = None,
    schedule: AnnealSchedule | None = None,
    plan: ShotPlan | None = None,
    target_cost: float = 1e-8,
    max_rounds: int = 200,
) -> tuple[ParamAnsatz, OptimizationTrace]:
    """Simulated-annealing search over free gate structures.

    Each round re-optimizes the parameters, then proposes a random support
    reassignment; proposals are accepted if they lower the cost, or with
    probability exp(-delta/T) otherwise.  After ``stall_patience`` rejected
    rounds in a row an identity gate is appended (which leaves the cost
    unchanged) up to ``d_max`` gates total.
    """
    schedule = schedule or AnnealSchedule()
    evaluator = CostEvaluator(rho, q, plan)
    if initial is None:
        from .ansatz import random_free_ansatz

        initial = random_free_ansatz(rho.n_qubits, 1, rng)
    if initial.gate_count > d_max:
        raise ValueError(f"initial gate count {initial.gate_count} exceeds D_max={d_max}")
    current = initial
    total = OptimizationTrace()
    start = time.perf_counter()

    def optimize_params(ansatz: ParamAnsatz) -> tuple[ParamAnsatz, float]:
        trace = minimize(_ansatz_objective(evaluator, ansatz), ansatz.param_vector,
                         inner, gate_count=ansatz.gate_count)
        total.extend(trace)
        if trace.records:
            return ansatz.with_params(trace.best_params), trace.best_cost
        return ansatz, evaluator.cost(ansatz)

    current, cost = optimize_params(current)
    stalls = 0
    for k in range(max_rounds):
        if cost <= target_cost:
            break
        temp = schedule.temperature(k)
        proposal = random_structure_update(current, rng)
        prop_opt, prop_cost = optimize_params(proposal)
        delta = prop_cost - cost
        accept = delta < 0 or (temp > 0 and rng.random() < np.exp(-delta / temp))
        if accept and delta < 0:
            current, cost = prop_opt, prop_cost
            stalls = 0
        elif accept:
            current, cost = prop_opt, prop_cost
            stalls += 1
        else:
            stalls += 1
        if stalls >= schedule.stall_patience:
            if current.gate_count >= d_max:
                break
            before = cost
            current = grow_identity_gate(current, rng)
            after = evaluator.cost(current)
            total.growth_checks.append((before, after))
            current, cost = optimize_params(current)
            stalls = 0
    total.wall_time = time.perf_counter() - start
    return current, total
