"""Command-line driver.

One experiment per invocation.  A JSON config (or a named preset) fully
describes the run; command-line flags override individual fields.  Every
run writes CSV artifacts plus a JSON manifest echoing the resolved config,
package versions, and seeds.  CSV bodies are deterministic given (config,
seed): '.' decimals, LF line endings, and no timestamps outside the
manifest.

Exit codes: 0 success, 1 configuration error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .ansatz import build_layered, product_unitary, rotation_x, rotation_z, synthesize
from .circuits import ShotPlan
from .cost import CostEvaluator, cost_c1, error_metrics
from .models import (
    SpinChainSpec,
    heisenberg_hamiltonian,
    product_state,
    reduced_ground_state,
    total_sz,
)
from .optimize import (
    OptimizerConfig,
    annealed_structure_search,
    layer_growth_train,
    minimize,
)
from .qpca import NoiseModel, QpcaConfig, qpca_one_bit
from .readout import (
    infer_eigenvalues,
    prepare_eigenvector,
    resolve_observable,
    threshold,
    write_eigenvalue_csv,
    write_observable_csv,
)
from .states import QuantumState, exact_eigendecomposition

__all__ = ["main", "PRESETS"]


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# presets — one per stock experiment

PRESETS = {
    # single-qubit |+> diagonalized by Rx(pi/2)Rz(alpha)
    "one-qubit-plus": {
        "experiment": "diagonalize",
        "state": {"family": "plus", "n": 1},
        "ansatz": {"type": "one_qubit_rxrz"},
        "q": 1.0,
        "plan": {"mode": "exact", "shots": 0},
        "n_readout": 10000,
        "eps_max": 0.5,
    },
    # already-diagonal input: converges with zero parameters moved
    "diagonal-two-qubit": {
        "experiment": "diagonalize",
        "state": {"family": "diagonal", "probs": [0.4, 0.3, 0.2, 0.1]},
        "ansatz": {"type": "layered", "p_max": 0.5},
        "q": 1.0,
        "plan": {"mode": "exact", "shots": 0},
        "n_readout": 10000,
        "eps_max": 0.5,
    },
    # entanglement spectroscopy: 4-spin subsystem of the 8-spin chain
    "heisenberg-8-4": {
        "experiment": "diagonalize",
        "state": {"family": "heisenberg", "sites": 8, "subsystem": [3, 4, 5, 6]},
        "ansatz": {"type": "layered", "p_max": 5, "p_start": 1,
                    "jitter": 0.3, "restarts": 3},
        "q": 1.0,
        "optimizer": {"method": "powell", "max_evals": 12000},
        "plan": {"mode": "exact", "shots": 0},
        "n_readout": 100000,
        "eps_max": 0.5,
    },
    # slow optional variant: 6-qubit subsystem of the 12-spin chain
    "heisenberg-12-6": {
        "experiment": "diagonalize",
        "state": {"family": "heisenberg", "sites": 12,
                   "subsystem": [4, 5, 6, 7, 8, 9]},
        "ansatz": {"type": "layered", "p_max": 3, "p_start": 1,
                    "jitter": 0.3, "restarts": 3},
        "q": 1.0,
        "optimizer": {"method": "powell", "max_evals": 40000},
        "plan": {"mode": "exact", "shots": 0},
        "n_readout": 100000,
        "eps_max": 0.5,
    },
    # cost landscape of the one-parameter family on |+>
    "one-qubit-plus-landscape": {
        "experiment": "landscape",
        "state": {"family": "plus", "n": 1},
        "ansatz": {"type": "one_qubit_rxrz"},
        "q": 1.0,
        "plan": {"mode": "exact", "shots": 0},
        "landscape": {"resolution": 200},
    },
    # analytic product-state landscape: Rx(theta) on every qubit of |0...0>
    "product-landscape": {
        "experiment": "landscape",
        "state": {"family": "basis", "n": 6},
        "ansatz": {"type": "global_rx"},
        "q": 1.0,
        "plan": {"mode": "exact", "shots": 0},
        "landscape": {"resolution": 100},
    },
    # local-vs-global cost weighting sweep on product states
    "q-sweep-product": {
        "experiment": "q_sweep",
        "state": {"family": "product", "n": 6, "axes": "x", "angles": "random"},
        "ansatz": {"type": "layered", "p_max": 0.5},
        "optimizer": {"method": "powell", "max_evals": 4000},
        "plan": {"mode": "exact", "shots": 0},
        "q_values": [0.0, 0.5, 1.0],
    },
    # optimizer comparison on six-qubit product states
    "opt-bench-product6": {
        "experiment": "optimizer_bench",
        "state": {"family": "product", "n": 6, "axes": "x", "angles": "random"},
        "ansatz": {"type": "layered", "p_max": 1},
        "q": 1.0,
        "optimizer": {"max_evals": 16000},
        "plan": {"mode": "exact", "shots": 0},
        "bench": {"trials": 10, "success_cost": 1e-3,
                   "methods": ["powell", "nelder_mead", "fd_gradient"]},
    },
    # phase-estimation PCA baseline on |+>
    "qpca-plus": {
        "experiment": "qpca",
        "state": {"family": "plus", "n": 1},
        "plan": {"mode": "exact", "shots": 0},
        "qpca": {"t_values": [0.05, 0.1, 0.2, 0.4, 0.8, 1.2],
                  "k_values": [1, 2],
                  "noise": {"p_depol": 0.01, "p_readout": 0.02}},
    },
}

_DEFAULTS = {
    "q": 1.0,
    "optimizer": {"method": "powell", "max_evals": 20000,
                   "param_tolerance": 1e-8, "cost_tolerance": 1e-10,
                   "fd_step": 1e-5},
    "plan": {"mode": "exact", "shots": 0},
    "n_readout": 10000,
    "eps_max": 0.5,
    "seed": 0,
    "out": "out",
    "threads": 0,
}

_EXPERIMENTS = ("diagonalize", "landscape", "q_sweep", "optimizer_bench", "qpca")


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in override.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


def resolve_config(args) -> dict:
    """Preset/file config plus flag overrides, with validation."""
    cfg = {}
    if args.preset:
        if args.preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {args.preset!r}; available: {', '.join(sorted(PRESETS))}"
            )
        cfg = copy.deepcopy(PRESETS[args.preset])
    if args.config:
        if not os.path.exists(args.config):
            raise ConfigError(f"config file not found: {args.config}")
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        cfg = _merge(cfg, file_cfg)
    cfg = _merge(_DEFAULTS, cfg)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.out is not None:
        cfg["out"] = args.out
    if args.threads is not None:
        cfg["threads"] = args.threads
    if getattr(args, "mode", None) is not None:
        cfg["plan"]["mode"] = args.mode
    if getattr(args, "shots", None) is not None:
        cfg["plan"]["shots"] = args.shots
        cfg["plan"]["mode"] = "sampled"
    cfg["experiment"] = _SUBCOMMAND_EXPERIMENT[args.command]
    _validate_config(cfg)
    return cfg


def _validate_config(cfg: dict):
    if cfg["experiment"] not in _EXPERIMENTS:
        raise ConfigError(f"unknown experiment {cfg['experiment']!r}")
    if not 0 <= cfg["q"] <= 1:
        raise ConfigError(f"q={cfg['q']} outside [0, 1]")
    for qv in cfg.get("q_values", []):
        if not 0 <= qv <= 1:
            raise ConfigError(f"q value {qv} outside [0, 1]")
    plan = cfg["plan"]
    if plan["mode"] not in ("exact", "sampled"):
        raise ConfigError(f"plan mode {plan['mode']!r} must be exact or sampled")
    if plan["mode"] == "sampled" and plan.get("shots", 0) < 1:
        raise ConfigError("sampled mode requires shots >= 1")
    if cfg.get("n_readout", 1) < 1:
        raise ConfigError("n_readout must be >= 1")
    if "state" not in cfg and cfg["experiment"] != "qpca":
        raise ConfigError("missing state section")
    state = cfg.get("state", {})
    if state.get("family") == "file" and not os.path.exists(state.get("path", "")):
        raise ConfigError(f"density-matrix file not found: {state.get('path')}")
    try:
        _optimizer_config(cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _optimizer_config(cfg: dict) -> OptimizerConfig:
    o = cfg["optimizer"]
    return OptimizerConfig(
        method=o.get("method", "powell"),
        max_evals=o.get("max_evals", 20000),
        param_tolerance=o.get("param_tolerance", 1e-8),
        cost_tolerance=o.get("cost_tolerance", 1e-10),
        fd_step=o.get("fd_step", 1e-5),
        seed=cfg["seed"],
    )


def _shot_plan(cfg: dict, salt: int = 0) -> ShotPlan:
    plan = cfg["plan"]
    if plan["mode"] == "exact":
        return ShotPlan.exact()
    sub = np.random.SeedSequence([cfg["seed"], salt])
    return ShotPlan.sampled(plan["shots"], int(sub.generate_state(1, np.uint64)[0]))


def load_density_matrix(path: str) -> QuantumState:
    """JSON density-matrix file: {"n": n, "matrix": [[[re, im], ...], ...]}."""
    with open(path) as fh:
        doc = json.load(fh)
    n = doc["n"]
    rows = doc["matrix"]
    mat = np.array([[complex(re, im) for re, im in row] for row in rows])
    if mat.shape != (2**n, 2**n):
        raise ConfigError(f"matrix shape {mat.shape} does not match n={n}")
    return QuantumState.from_matrix(mat)


def build_state(cfg: dict) -> QuantumState:
    state = cfg["state"]
    family = state.get("family")
    if family == "plus":
        n = state.get("n", 1)
        return QuantumState.from_vector(np.full(2**n, 2 ** (-n / 2), dtype=complex))
    if family == "basis":
        return QuantumState.basis_state(state.get("n", 1), state.get("index", 0))
    if family == "diagonal":
        return QuantumState.from_matrix(np.diag(np.asarray(state["probs"], dtype=complex)))
    if family == "product":
        n = state["n"]
        angles = state.get("angles", "random")
        axes = state.get("axes", "x")
        if angles == "random":
            rng = np.random.default_rng(np.random.SeedSequence([cfg["seed"], 91]))
            shape = (n, 3) if axes == "xyz" else (n,)
            angles = rng.uniform(0, 2 * np.pi, size=shape)
        return product_state(angles, axes)
    if family == "heisenberg":
        return reduced_ground_state(
            SpinChainSpec(state["sites"], tuple(state["subsystem"]))
        )
    if family == "file":
        return load_density_matrix(state["path"])
    raise ConfigError(f"unknown state family {family!r}")


# ---------------------------------------------------------------------------
# training helpers


def _train(rho: QuantumState, cfg: dict):
    """Dispatch on ansatz type; returns (unitary, traces-for-csv dict, extras)."""
    ansatz = cfg.get("ansatz", {"type": "layered", "p_max": 1})
    kind = ansatz.get("type", "layered")
    opt = _optimizer_config(cfg)
    plan = _shot_plan(cfg, salt=1)
    if kind == "one_qubit_rxrz":
        if rho.n_qubits != 1:
            raise ConfigError("one_qubit_rxrz ansatz needs a single-qubit state")
        evaluator = CostEvaluator(rho, cfg["q"], plan)

        def objective(x):
            return evaluator.cost(rotation_x(np.pi / 2) @ rotation_z(float(x[0])))

        trace = minimize(objective, np.array([0.1]), opt, gate_count=1)
        alpha = float(trace.best_params[0])
        u = rotation_x(np.pi / 2) @ rotation_z(alpha)
        return u, {"trace": trace}, {"alpha": alpha}
    if kind == "layered":
        final, traces = layer_growth_train(
            rho, cfg["q"], ansatz["p_max"], opt, plan,
            jitter=ansatz.get("jitter", 0.01),
            restarts=ansatz.get("restarts", 1),
            p_start=ansatz.get("p_start", 0.5),
        )
        merged = {f"trace_p{p}": t for p, t in traces.items()}
        merged["trace"] = traces[max(traces)]
        return synthesize(final), merged, {"ansatz_json": final.to_json()}
    if kind == "free":
        rng = np.random.default_rng(np.random.SeedSequence([cfg["seed"], 17]))
        final, trace = annealed_structure_search(
            rho, cfg["q"], ansatz.get("d_max", 10), opt, rng, plan=plan
        )
        return synthesize(final), {"trace": trace}, {"ansatz_json": final.to_json()}
    raise ConfigError(f"unknown ansatz type {kind!r}")


def _write_manifest(cfg: dict, out_dir: str, extra: dict):
    doc = {
        "config": cfg,
        "version": __version__,
        "numpy": np.__version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "seed": cfg["seed"],
    }
    doc.update(extra)
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(doc, fh, indent=2, default=str)


def _csv_writer(fh):
    return csv.writer(fh, lineterminator="\n")


# ---------------------------------------------------------------------------
# experiment runners


def run_diagonalize(cfg: dict) -> int:
    out = cfg["out"]
    os.makedirs(out, exist_ok=True)
    rho = build_state(cfg)
    u, traces, extras = _train(rho, cfg)
    for name, trace in traces.items():
        trace.write_csv(os.path.join(out, f"{name}.csv"), deterministic=True)
        trace.write_params_json(os.path.join(out, f"{name}_params.json"))

    estimates = infer_eigenvalues(rho, u, cfg["n_readout"],
                                  seed=int(np.random.SeedSequence(
                                      [cfg["seed"], 5]).generate_state(1)[0]))
    accepted, m = threshold(estimates, cfg["eps_max"])
    write_eigenvalue_csv(estimates, os.path.join(out, "eigenvalues.csv"))

    obs = total_sz(rho.n_qubits)
    rows = [
        (e.bitstring, e.estimate,
         resolve_observable(prepare_eigenvector(u, e.bitstring), obs))
        for e in accepted
    ]
    write_observable_csv(rows, os.path.join(out, "eigenvector_observables.csv"))

    em = error_metrics(rho, u, cfg["q"])
    oracle = exact_eigendecomposition(rho).eigenvalues
    final_cost = traces["trace"].best_cost
    growth = [gc for t in traces.values() for gc in t.growth_checks]
    _write_manifest(cfg, out, {
        "final_cost": float(final_cost),
        "delta_lambda": em.delta_lambda,
        "delta_v": em.delta_v,
        "accepted_estimates": m,
        "oracle_spectrum": [float(x) for x in oracle[: min(len(oracle), 16)]],
        "growth_checks": [[float(a), float(b)] for a, b in growth],
        "wall_times": {k: t.wall_time for k, t in traces.items()},
        **{k: v for k, v in extras.items()},
    })
    return 0


def run_landscape(cfg: dict) -> int:
    out = cfg["out"]
    os.makedirs(out, exist_ok=True)
    rho = build_state(cfg)
    kind = cfg.get("ansatz", {}).get("type", "one_qubit_rxrz")
    res = cfg.get("landscape", {}).get("resolution", 100)
    n = rho.n_qubits
    rows = []
    for i in range(res):
        angle = 2 * np.pi * i / res
        if kind == "one_qubit_rxrz":
            u = rotation_x(np.pi / 2) @ rotation_z(angle)
        elif kind == "global_rx":
            u = product_unitary([rotation_x(angle)] * n)
        else:
            raise ConfigError(f"landscape needs a one-parameter ansatz, not {kind!r}")
        evaluator = CostEvaluator(rho, cfg["q"], _shot_plan(cfg, salt=100 + i))
        rep = evaluator.report(u)
        err = 0.0
        if cfg["plan"]["mode"] == "sampled":
            err = 1.0 / np.sqrt(cfg["plan"]["shots"])
        rows.append((angle, rep.c, rep.c1, rep.c2, err))
    with open(os.path.join(out, "landscape.csv"), "w", newline="") as fh:
        w = _csv_writer(fh)
        w.writerow(["angle", "cost", "c1", "c2", "std_error"])
        for row in rows:
            w.writerow([repr(float(x)) for x in row])
    costs = [r[1] for r in rows]
    minima = [rows[i][0] for i in _local_minima(costs)]
    _write_manifest(cfg, out, {"minima_angles": [float(a) for a in minima]})
    return 0


def _local_minima(costs) -> list:
    k = len(costs)
    out = []
    for i in range(k):
        if costs[i] < costs[(i - 1) % k] and costs[i] <= costs[(i + 1) % k]:
            out.append(i)
    return out


def run_q_sweep(cfg: dict) -> int:
    out = cfg["out"]
    os.makedirs(out, exist_ok=True)
    rho = build_state(cfg)
    opt = _optimizer_config(cfg)
    p_max = cfg.get("ansatz", {}).get("p_max", 0.5)
    summary = []
    for qi, q in enumerate(cfg.get("q_values", [0.0, 0.5, 1.0])):
        sub = dict(cfg)
        sub["q"] = q
        final, traces = layer_growth_train(rho, q, p_max, opt, _shot_plan(sub, 200 + qi))
        trace = traces[max(traces)]
        tag = f"q{q:g}".replace(".", "_")
        trace.write_csv(os.path.join(out, f"trace_{tag}.csv"), deterministic=True)
        c1_at_opt = cost_c1(rho, synthesize(final))
        summary.append((q, trace.best_cost, c1_at_opt, trace.evaluations))
    with open(os.path.join(out, "q_sweep_summary.csv"), "w", newline="") as fh:
        w = _csv_writer(fh)
        w.writerow(["q", "final_cost", "c1_at_optimum", "evaluations"])
        for q, c, c1v, ev in summary:
            w.writerow([repr(float(q)), repr(float(c)), repr(float(c1v)), ev])
    _write_manifest(cfg, out, {
        "summary": [
            {"q": float(q), "final_cost": float(c), "c1_at_optimum": float(c1v)}
            for q, c, c1v, _ in summary
        ]
    })
    return 0


def run_optimizer_bench(cfg: dict) -> int:
    out = cfg["out"]
    os.makedirs(out, exist_ok=True)
    bench = cfg.get("bench", {})
    trials = bench.get("trials", 10)
    success_cost = bench.get("success_cost", 1e-3)
    methods = bench.get("methods", ["powell", "nelder_mead", "fd_gradient"])
    p_max = cfg.get("ansatz", {}).get("p_max", 0.5)
    rows = []
    for trial in range(trials):
        sub = dict(cfg)
        sub["seed"] = int(np.random.SeedSequence([cfg["seed"], 300 + trial])
                          .generate_state(1)[0])
        rho = build_state(sub)
        n = rho.n_qubits
        template = build_layered(
            n, p_max, np.zeros(15 * _layered_count(n, p_max)))
        rng = np.random.default_rng(np.random.SeedSequence([cfg["seed"], 301, trial]))
        x0 = rng.uniform(-0.5, 0.5, size=template.param_vector.size)
        evaluator = CostEvaluator(rho, cfg["q"], _shot_plan(sub, 302))

        def objective(x, _ev=evaluator, _t=template):
            return _ev.cost(_t.with_params(x))

        for method in methods:
            mcfg = OptimizerConfig(
                method=method,
                max_evals=cfg["optimizer"].get("max_evals", 6000),
                param_tolerance=cfg["optimizer"].get("param_tolerance", 1e-8),
                cost_tolerance=cfg["optimizer"].get("cost_tolerance", 1e-10),
                fd_step=cfg["optimizer"].get("fd_step", 1e-5),
                seed=sub["seed"],
            )
            trace = minimize(objective, x0.copy(), mcfg,
                             gate_count=template.gate_count)
            rows.append((method, trial, trace.best_cost, trace.evaluations,
                         trace.wall_time, trace.best_cost <= success_cost))
    with open(os.path.join(out, "optimizer_bench.csv"), "w", newline="") as fh:
        w = _csv_writer(fh)
        w.writerow(["method", "trial", "final_cost", "evaluations", "success"])
        for method, trial, c, ev, _wt, ok in rows:
            w.writerow([method, trial, repr(float(c)), ev, int(ok)])
    fractions = {
        m: float(np.mean([ok for mm, *_, ok in rows if mm == m])) for m in methods
    }
    _write_manifest(cfg, out, {
        "success_fraction": fractions,
        "wall_times": {m: float(sum(wt for mm, _t, _c, _e, wt, _o in rows if mm == m))
                        for m in methods},
    })
    return 0


def _layered_count(n: int, p: float) -> int:
    from .ansatz import layered_gate_count

    return layered_gate_count(n, p)


def run_qpca(cfg: dict) -> int:
    out = cfg["out"]
    os.makedirs(out, exist_ok=True)
    rho = build_state(cfg) if "state" in cfg else QuantumState.from_vector(
        np.array([1, 1]) / np.sqrt(2))
    qp = cfg.get("qpca", {})
    t_values = qp.get("t_values", [0.05, 0.1, 0.2, 0.4, 0.8])
    k_values = qp.get("k_values", [1, 2])
    noise_cfg = qp.get("noise", {})
    noise = NoiseModel(noise_cfg.get("p_depol", 0.01), noise_cfg.get("p_readout", 0.02))
    rows = []
    for i, t in enumerate(t_values):
        for k in k_values:
            for label, nz in (("0", None), ("1", noise)):
                est = qpca_one_bit(rho, QpcaConfig(t=t, k=k, noise=nz),
                                   _shot_plan(cfg, 400 + i))
                rows.append((t, k, label, est))
    with open(os.path.join(out, "qpca.csv"), "w", newline="") as fh:
        w = _csv_writer(fh)
        w.writerow(["t", "k", "noise", "estimate"])
        for t, k, label, est in rows:
            w.writerow([repr(float(t)), k, label, repr(float(est))])
    _write_manifest(cfg, out, {"rows": len(rows)})
    return 0


# ---------------------------------------------------------------------------
# validate subcommand

_SCHEMAS = {
    "eigenvalues.csv": ["bitstring", "frequency", "estimate", "rel_error", "accepted"],
    "eigenvector_observables.csv": ["bitstring", "estimate", "observable"],
    "landscape.csv": ["angle", "cost", "c1", "c2", "std_error"],
    "q_sweep_summary.csv": ["q", "final_cost", "c1_at_optimum", "evaluations"],
    "optimizer_bench.csv": ["method", "trial", "final_cost", "evaluations", "success"],
    "qpca.csv": ["t", "k", "noise", "estimate"],
}
_TRACE_HEADER = ["iteration", "cost", "D", "wall_time"]


def run_validate(cfg_out: str) -> int:
    """Check every recognized artifact in a run directory against its schema."""
    if not os.path.isdir(cfg_out):
        print(f"error: not a directory: {cfg_out}", file=sys.stderr)
        return 1
    problems = []
    checked = 0
    for name in sorted(os.listdir(cfg_out)):
        path = os.path.join(cfg_out, name)
        if name == "manifest.json":
            try:
                with open(path) as fh:
                    doc = json.load(fh)
                for key in ("config", "version", "seed"):
                    if key not in doc:
                        problems.append(f"{name}: missing key {key!r}")
            except json.JSONDecodeError as exc:
                problems.append(f"{name}: invalid JSON ({exc})")
            checked += 1
            continue
        if not name.endswith(".csv"):
            continue
        expected = _SCHEMAS.get(name)
        if expected is None and (name.startswith("trace") and name.endswith(".csv")):
            expected = _TRACE_HEADER
        if expected is None:
            continue
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != expected:
                problems.append(f"{name}: header {header} != {expected}")
            else:
                width = len(expected)
                for lineno, row in enumerate(reader, start=2):
                    if len(row) != width:
                        problems.append(f"{name}:{lineno}: {len(row)} fields")
                        break
        checked += 1
    for p in problems:
        print(f"schema violation: {p}", file=sys.stderr)
    print(f"validated {checked} file(s), {len(problems)} problem(s)")
    return 1 if problems else 0


# ---------------------------------------------------------------------------
# argument parsing / entry point

_SUBCOMMAND_EXPERIMENT = {
    "diagonalize": "diagonalize",
    "landscape": "landscape",
    "q-sweep": "q_sweep",
    "opt-bench": "optimizer_bench",
    "qpca": "qpca",
}

_RUNNERS = {
    "diagonalize": run_diagonalize,
    "landscape": run_landscape,
    "q_sweep": run_q_sweep,
    "optimizer_bench": run_optimizer_bench,
    "qpca": run_qpca,
}


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON experiment config")
    p.add_argument("--preset", help="named built-in configuration")
    p.add_argument("--seed", type=int, help="master seed (overrides config)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--threads", type=int, help="worker-thread cap")
    p.add_argument("--mode", choices=["exact", "sampled"], help="evaluation mode")
    p.add_argument("--shots", type=int, help="shots per circuit (implies sampled)")
    p.add_argument("--print-config", action="store_true",
                   help="echo the resolved config and exit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vqsd", description="variational quantum state diagonalization"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMAND_EXPERIMENT:
        _add_common(sub.add_parser(name))
    v = sub.add_parser("validate", help="check run artifacts against their schemas")
    v.add_argument("--out", required=True, help="run directory to validate")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        return run_validate(args.out)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    if args.print_config:
        print(json.dumps(cfg, indent=2, default=str))
        return 0
    if cfg.get("threads"):
        os.environ.setdefault("OMP_NUM_THREADS", str(cfg["threads"]))
    try:
        return _RUNNERS[cfg["experiment"]](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - runtime failures map to exit 2
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
