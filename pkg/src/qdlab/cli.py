"""qdlab batch experiment driver.

Seeded subcommands reproduce each desk-scale experiment and emit
machine-readable CSV or JSON reports. Reports are byte-identical across
re-runs with the same config (wall time is printed to the console, never
written into the report). Exit codes: 0 success, 1 usage error, 2
validation failure, 3 acceptance-gate failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats

from . import __version__
from .combdisc import disc_exact, disc_heuristic
from .concentration import comparison_check, lower_bound_constants
from .dpp import exact_distribution, size_pmf, validate_kernel
from .errors import GroundSetTooLarge, QdlabError
from .matcore import as_projection, matrix_from_json, matrix_to_json
from .qdisc import delta_threshold, objective, qdisc_estimate
from .randmat import (
    concentration_probe,
    moment_gates,
    random_kernel,
    random_projection,
    random_projection_system,
    random_quantum_coloring,
)
from .setsys import ProjectionSystem, SetSystem, arithmetic_progressions, random_set_system, to_projection_system

FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_GATE = 3


class UsageError(Exception):
    """Bad command line or config file."""


@dataclass
class ExperimentReport:
    subcommand: str
    config: dict
    columns: list[str]
    rows: list[dict]
    summary: dict
    wall_time: float = 0.0
    exit_code: int = EXIT_OK


def _canon(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _py(v):
    """Coerce numpy scalars into plain Python for stable serialization."""
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.ndarray):
        return [_py(x) for x in v]
    return v


def render_report(report: ExperimentReport, fmt: str) -> str:
    rows = [{k: _py(v) for k, v in row.items()} for row in report.rows]
    summary = {k: _py(v) for k, v in report.summary.items()}
    if fmt == "json":
        doc = {
            "format": FORMAT_VERSION,
            "subcommand": report.subcommand,
            "version": __version__,
            "config": report.config,
            "columns": report.columns,
            "rows": rows,
            "summary": summary,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# qdlab-report format={FORMAT_VERSION} subcommand={report.subcommand} version={__version__}\n")
    buf.write(f"# config: {_canon(report.config)}\n")
    writer = csv.DictWriter(buf, fieldnames=report.columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
    buf.write(f"# summary: {_canon(summary)}\n")
    return buf.getvalue()


def _map_indexed(fn, count: int, threads: int) -> list:
    """Apply fn to 0..count-1, serially or on a thread pool; output order and
    values are independent of the thread count (work items carry their own
    seed streams)."""
    if threads <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


def _binomial_ci(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    """Clopper-Pearson interval."""
    a = (1.0 - level) / 2.0
    lo = stats.beta.ppf(a, successes, trials - successes + 1) if successes > 0 else 0.0
    hi = stats.beta.ppf(1 - a, successes + 1, trials - successes) if successes < trials else 1.0
    return float(lo), float(hi)


# --------------------------------------------------------------------------
# config handling

_COMMON_DEFAULTS = {"seed": None, "out": None, "format": "csv", "threads": 1}

_SCHEMAS: dict[str, dict] = {
    "disc": {
        "input": None, "ap": None, "random_n": None, "random_m": None,
        "heuristic": False, "trials": 64, "cap": 24,
    },
    "qdisc": {
        "input": None, "random_n": None, "random_m": None,
        "restarts": 4, "sweeps": 2, "plane_cap": None, "refine_top": None,
    },
    "ubound": {
        "n": 32, "m_grid": [4, 64, 1024], "trials": 1000,
        "c": None, "probe_trials": 20000,
    },
    "lbound": {
        "n_grid": [8, 16, 32], "m_cap": 2048, "restarts": 1, "sweeps": 1,
        "plane_cap": 48, "refine_top": 4, "alpha": 1.0,
    },
    "dpp": {
        "action": None, "kernel": None, "kind": "random", "n": 6,
        "trials": 20000, "tv_gate": 0.02, "z_gate": 4.0,
    },
    "compare": {
        "ap_min": 6, "ap_max": 12, "random_count": 4, "random_n": 10,
        "random_m": 12, "restarts": 2, "sweeps": 1, "cap": 24,
    },
    "haar": {
        "n_grid": [2, 3, 4, 5, 6, 7, 8], "trials": 100000, "z_gate": 4.0,
    },
}

# disc is stochastic only with a random generator or the heuristic search.
_ALWAYS_STOCHASTIC = {"qdisc", "ubound", "lbound", "dpp", "compare", "haar"}


def build_config(subcommand: str, args: argparse.Namespace) -> dict:
    cfg = dict(_SCHEMAS[subcommand])
    cfg.update(_COMMON_DEFAULTS)
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {args.config}: {exc}") from exc
        unknown = set(data) - set(cfg)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(data)
    for key in cfg:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    stochastic = subcommand in _ALWAYS_STOCHASTIC or (
        subcommand == "disc" and (cfg["heuristic"] or cfg["random_n"] is not None)
    )
    if stochastic and cfg["seed"] is None:
        raise UsageError(f"subcommand '{subcommand}' is stochastic: --seed is mandatory")
    return cfg


def _config_echo(cfg: dict) -> dict:
    return {k: _py(v) for k, v in cfg.items() if k != "out"}


def _seed_root(cfg: dict) -> np.random.SeedSequence:
    return np.random.SeedSequence(cfg["seed"] if cfg["seed"] is not None else 0)


def _signs_str(signs) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


# --------------------------------------------------------------------------
# subcommands

def _load_set_system(cfg: dict, root: np.random.SeedSequence) -> SetSystem:
    if cfg.get("input"):
        data = json.loads(Path(cfg["input"]).read_text())
        return SetSystem.from_json(data)
    if cfg.get("ap"):
        return arithmetic_progressions(int(cfg["ap"]))
    if cfg.get("random_n") is not None:
        if cfg.get("random_m") is None:
            raise UsageError("--random-n needs --random-m")
        return random_set_system(int(cfg["random_n"]), int(cfg["random_m"]), root.spawn(1)[0])
    raise UsageError("no input: give --input FILE, --ap N, or --random-n/--random-m")


def cmd_disc(cfg: dict) -> ExperimentReport:
    root = _seed_root(cfg)
    system = _load_set_system(cfg, root)
    if not cfg["heuristic"] and system.ground_size > cfg["cap"]:
        raise GroundSetTooLarge(
            f"ground set {system.ground_size} exceeds cap {cfg['cap']}; pass --heuristic"
        )
    if cfg["heuristic"]:
        value, witness = disc_heuristic(system, int(cfg["trials"]), root.spawn(2)[1])
        method = "heuristic"
    else:
        value, witness = disc_exact(system, cap=int(cfg["cap"]))
        method = "exact"
    sums = (np.array([[1 if i in s else 0 for i in range(1, system.ground_size + 1)]
                      for s in system.sets]) @ witness.signs)
    rows = [
        {"set_index": i, "size": len(s), "signed_sum": int(sums[i])}
        for i, s in enumerate(system.sets)
    ]
    summary = {
        "disc": value,
        "method": method,
        "witness": _signs_str(witness.signs),
        "n": system.ground_size,
        "m": system.num_sets,
        "system": system.to_json(),
    }
    return ExperimentReport("disc", _config_echo(cfg), ["set_index", "size", "signed_sum"], rows, summary)


def _load_projection_system(cfg: dict, root: np.random.SeedSequence) -> ProjectionSystem:
    if cfg.get("input"):
        data = json.loads(Path(cfg["input"]).read_text())
        if "sets" in data:
            return to_projection_system(SetSystem.from_json(data))
        if "projections" in data:
            projs = tuple(as_projection(matrix_from_json(p)) for p in data["projections"])
            return ProjectionSystem(int(data["n"]), projs)
        raise QdlabError("input JSON must contain 'sets' or 'projections'")
    if cfg.get("random_n") is not None:
        if cfg.get("random_m") is None:
            raise UsageError("--random-n needs --random-m")
        return random_projection_system(int(cfg["random_n"]), int(cfg["random_m"]), root.spawn(1)[0])
    raise UsageError("no input: give --input FILE or --random-n/--random-m")


def cmd_qdisc(cfg: dict) -> ExperimentReport:
    root = _seed_root(cfg)
    system = _load_projection_system(cfg, root)
    est = qdisc_estimate(
        system,
        restarts=int(cfg["restarts"]),
        sweeps=int(cfg["sweeps"]),
        seed=root.spawn(2)[1],
        plane_cap=cfg["plane_cap"],
        refine_top=cfg["refine_top"],
    )
    rows = []
    for i, proj in enumerate(system.projections):
        val = objective(est.witness, proj)
        rows.append({
            "projection_index": i,
            "rank": proj.rank,
            "trace_term": val.trace_term,
            "commutator_term": val.commutator_term,
            "objective": val.value,
        })
    summary = {
        "qdisc_estimate": est.value,
        "plus_count": est.plus_count,
        "restarts_used": est.restarts_used,
        "converged": est.converged,
        "witness": matrix_to_json(est.witness),
    }
    cols = ["projection_index", "rank", "trace_term", "commutator_term", "objective"]
    return ExperimentReport("qdisc", _config_echo(cfg), cols, rows, summary)


def cmd_ubound(cfg: dict) -> ExperimentReport:
    root = _seed_root(cfg)
    n = int(cfg["n"])
    m_grid = [int(m) for m in cfg["m_grid"]]
    trials = int(cfg["trials"])
    probe_child, *m_children = root.spawn(1 + 2 * len(m_grid))
    if cfg["c"] is None:
        probe = concentration_probe(n, int(cfg["probe_trials"]), seed=probe_child)
        c_used, c_source = probe.c_hat, "fit"
    else:
        c_used, c_source = float(cfg["c"]), "given"
    rows = []
    for pos, m in enumerate(m_grid):
        system = random_projection_system(n, m, m_children[2 * pos])
        stacked = system.stacked()
        ranks = system.ranks().astype(float)
        deltas = np.array([delta_threshold(n, int(r), m, c_used) for r in system.ranks()])
        children = m_children[2 * pos + 1].spawn(trials)

        def one_trial(t: int) -> bool:
            rng = np.random.Generator(np.random.PCG64(children[t]))
            chi = random_quantum_coloring(n, rng).array
            a = stacked @ chi
            t1 = np.einsum("mii->m", a).real
            t2 = np.einsum("mij,mji->m", a, a).real
            vals = np.sqrt(np.clip(t1 * t1 + ranks - t2, 0.0, None))
            return bool((vals <= deltas).all())

        oks = _map_indexed(one_trial, trials, int(cfg["threads"]))
        successes = int(sum(oks))
        lo, hi = _binomial_ci(successes, trials)
        rows.append({
            "n": n, "m": m, "c": c_used, "trials": trials,
            "successes": successes, "fraction": successes / trials,
            "ci_low": lo, "ci_high": hi,
            "max_delta": float(deltas.max()),
            "delta_over_scale": float(deltas.max() / math.sqrt(n + math.log(m))),
        })
    summary = {
        "c": c_used,
        "c_source": c_source,
        "min_fraction": min(r["fraction"] for r in rows),
        "all_at_least_half": all(r["fraction"] >= 0.5 for r in rows),
    }
    cols = ["n", "m", "c", "trials", "successes", "fraction", "ci_low", "ci_high",
            "max_delta", "delta_over_scale"]
    return ExperimentReport("ubound", _config_echo(cfg), cols, rows, summary)


def cmd_lbound(cfg: dict) -> ExperimentReport:
    root = _seed_root(cfg)
    constants = lower_bound_constants(float(cfg["alpha"]))
    n_grid = [int(n) for n in cfg["n_grid"]]
    m_cap = int(cfg["m_cap"])
    instances = []
    for n in n_grid:
        for m_requested in (n, n * n, int(round(2 ** (n / 2)))):
            instances.append((n, min(m_requested, m_cap), m_requested))
    children = root.spawn(2 * len(instances))
    rows = []
    for pos, (n, m, m_requested) in enumerate(instances):
        system = random_projection_system(n, m, children[2 * pos])
        est = qdisc_estimate(
            system,
            restarts=int(cfg["restarts"]),
            sweeps=int(cfg["sweeps"]),
            seed=children[2 * pos + 1],
            plane_cap=cfg["plane_cap"],
            refine_top=cfg["refine_top"],
        )
        scale = math.sqrt(n + math.log(m))
        regime_ok = n <= m <= 2 ** n
        if not regime_ok:
            print(f"warning: (n={n}, m={m}) outside the admissible regime", file=sys.stderr)
        rows.append({
            "n": n, "m": m, "m_requested": m_requested, "regime_ok": regime_ok,
            "estimate": est.value, "ratio": est.value / scale,
            "zeta_scaled": constants.zeta * scale,
        })
    ratios = [r["ratio"] for r in rows]
    summary = {
        "alpha": float(cfg["alpha"]),
        "epsilon": constants.epsilon,
        "zeta": constants.zeta,
        "condition_margin": constants.margin,
        "ratio_min": min(ratios),
        "ratio_max": max(ratios),
    }
    cols = ["n", "m", "m_requested", "regime_ok", "estimate", "ratio", "zeta_scaled"]
    return ExperimentReport("lbound", _config_echo(cfg), cols, rows, summary)


def _resolve_kernel(cfg: dict, child: np.random.SeedSequence):
    if cfg.get("kernel"):
        data = json.loads(Path(cfg["kernel"]).read_text())
        return validate_kernel(matrix_from_json(data))
    kind = cfg["kind"]
    n = int(cfg["n"])
    if kind == "uniform":
        return validate_kernel(0.5 * np.eye(n))
    if kind == "random":
        return random_kernel(n, np.random.Generator(np.random.PCG64(child)))
    if kind == "projection":
        return validate_kernel(random_projection(n, np.random.Generator(np.random.PCG64(child))).array)
    raise UsageError(f"unknown kernel kind {kind!r}")


def cmd_dpp(cfg: dict) -> ExperimentReport:
    action = cfg["action"]
    if action not in ("sample", "check"):
        raise UsageError("dpp needs an action: sample or check")
    root = _seed_root(cfg)
    kernel_child, draw_child = root.spawn(2)
    kernel = _resolve_kernel(cfg, kernel_child)
    trials = int(cfg["trials"])
    if trials < 1:
        raise UsageError("need trials >= 1")
    children = draw_child.spawn(trials)

    def one_draw(t: int):
        from .dpp import _sample_with
        return _sample_with(kernel, np.random.Generator(np.random.PCG64(children[t])))

    draws = _map_indexed(one_draw, trials, int(cfg["threads"]))
    if action == "sample":
        rows = [
            {"trial": t, "size": len(s.points), "points": " ".join(map(str, s.points))}
            for t, s in enumerate(draws)
        ]
        summary = {
            "trials": trials,
            "mean_size": sum(len(s.points) for s in draws) / trials,
            "kernel_trace": kernel.matrix.trace(),
            "kernel_dim": kernel.dim,
            "kernel": matrix_to_json(kernel),
        }
        return ExperimentReport("dpp", _config_echo(cfg), ["trial", "size", "points"], rows, summary)

    # action == "check": compare empirical statistics against exact laws
    n = kernel.dim
    dist = exact_distribution(kernel)  # raises GroundSetTooLarge past the cap
    counts = np.zeros(1 << n)
    size_counts = np.zeros(n + 1)
    incl_counts = np.zeros(n)
    for s in draws:
        counts[s.mask()] += 1
        size_counts[len(s.points)] += 1
        for p in s.points:
            incl_counts[p - 1] += 1
    emp = counts / trials
    exact = np.array([dist[t] for t in dist])
    subset_tv = 0.5 * float(np.abs(emp - exact).sum())
    size_tv = 0.5 * float(np.abs(size_counts / trials - size_pmf(kernel)).sum())
    tv_gate, z_gate = float(cfg["tv_gate"]), float(cfg["z_gate"])
    rows = [
        {"check": "subset_tv", "index": "", "value": subset_tv, "reference": 0.0,
         "gate": tv_gate, "passed": subset_tv <= tv_gate},
        {"check": "size_tv", "index": "", "value": size_tv, "reference": 0.0,
         "gate": tv_gate, "passed": size_tv <= tv_gate},
    ]
    diag = kernel.array.diagonal().real
    for i in range(n):
        p = float(diag[i])
        freq = incl_counts[i] / trials
        se = math.sqrt(max(p * (1 - p), 0.0) / trials)
        if se == 0.0:
            z = 0.0 if abs(freq - p) <= 1e-12 else math.inf
        else:
            z = (freq - p) / se
        rows.append({"check": "inclusion_z", "index": i + 1, "value": z, "reference": p,
                     "gate": z_gate, "passed": abs(z) <= z_gate})
    all_pass = all(r["passed"] for r in rows)
    summary = {"trials": trials, "all_pass": all_pass, "subset_tv": subset_tv, "size_tv": size_tv}
    cols = ["check", "index", "value", "reference", "gate", "passed"]
    report = ExperimentReport("dpp", _config_echo(cfg), cols, rows, summary)
    if not all_pass:
        report.exit_code = EXIT_GATE
    return report


def cmd_compare(cfg: dict) -> ExperimentReport:
    root = _seed_root(cfg)
    systems: list[tuple[str, SetSystem]] = []
    for n in range(int(cfg["ap_min"]), int(cfg["ap_max"]) + 1):
        systems.append((f"ap-{n}", arithmetic_progressions(n)))
    rand_children = root.spawn(int(cfg["random_count"]) * 2)
    for i in range(int(cfg["random_count"])):
        systems.append(
            (f"random-{i}", random_set_system(int(cfg["random_n"]), int(cfg["random_m"]), rand_children[2 * i]))
        )
    est_children = root.spawn(len(systems) + 100)[100:]

    def one_system(pos: int) -> dict:
        name, system = systems[pos]
        rep = comparison_check(
            system,
            restarts=int(cfg["restarts"]),
            sweeps=int(cfg["sweeps"]),
            seed=est_children[pos],
            cap=int(cfg["cap"]),
        )
        return {
            "system_id": name, "n": rep.ground_size, "m": rep.num_sets,
            "disc": rep.disc, "qdisc_est": rep.qdisc_est,
            "min_feasible_c_log": rep.min_feasible_c_log,
            "min_feasible_c_sqrt_log": rep.min_feasible_c_sqrt_log,
            "sandwich_ok": rep.sandwich_ok,
        }

    rows = _map_indexed(one_system, len(systems), int(cfg["threads"]))
    summary = {
        "instances": len(rows),
        "all_sandwich_ok": all(r["sandwich_ok"] for r in rows),
    }
    cols = ["system_id", "n", "m", "disc", "qdisc_est",
            "min_feasible_c_log", "min_feasible_c_sqrt_log", "sandwich_ok"]
    return ExperimentReport("compare", _config_echo(cfg), cols, rows, summary)


def cmd_haar(cfg: dict) -> ExperimentReport:
    trials = int(cfg["trials"])
    if trials < 2:
        raise UsageError("need trials >= 2")
    root = _seed_root(cfg)
    n_grid = [int(n) for n in cfg["n_grid"]]
    children = root.spawn(len(n_grid))

    def one_dim(pos: int):
        return moment_gates(n_grid[pos], trials, children[pos])

    z_gate = float(cfg["z_gate"])
    gates = [g for chunk in _map_indexed(one_dim, len(n_grid), int(cfg["threads"])) for g in chunk]
    rows = [
        {"n": g.n, "gate": g.name, "param": g.param, "exact": g.exact,
         "estimate": g.estimate, "se": g.se, "z": g.z, "passed": g.passes(z_gate)}
        for g in gates
    ]
    max_z = max(abs(g.z) for g in gates)
    summary = {"trials": trials, "max_abs_z": max_z, "all_pass": all(r["passed"] for r in rows)}
    cols = ["n", "gate", "param", "exact", "estimate", "se", "z", "passed"]
    report = ExperimentReport("haar", _config_echo(cfg), cols, rows, summary)
    if not summary["all_pass"]:
        report.exit_code = EXIT_GATE
    return report


_COMMANDS = {
    "disc": cmd_disc,
    "qdisc": cmd_qdisc,
    "ubound": cmd_ubound,
    "lbound": cmd_lbound,
    "dpp": cmd_dpp,
    "compare": cmd_compare,
    "haar": cmd_haar,
}


# --------------------------------------------------------------------------
# argument parsing

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file mirroring the subcommand fields")
    parser.add_argument("--seed", type=int, help="master seed (mandatory for stochastic subcommands)")
    parser.add_argument("--out", help="report output path (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json"], help="report format (default csv)")
    parser.add_argument("--threads", type=int, help="worker threads; 1 = serial (default)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdlab",
        description="Combinatorial/quantum discrepancy and DPP experiments with seeded, reproducible reports.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("disc", help="combinatorial discrepancy of a set system")
    p.add_argument("--input", help="set-system JSON file {'n':..,'sets':[[..]]}")
    p.add_argument("--ap", type=int, help="use the arithmetic-progression system on [N]")
    p.add_argument("--random-n", dest="random_n", type=int, help="random system ground size")
    p.add_argument("--random-m", dest="random_m", type=int, help="random system set count")
    p.add_argument("--heuristic", action="store_true", default=None, help="restart search instead of exhaustive")
    p.add_argument("--trials", type=int, help="heuristic restarts")
    p.add_argument("--cap", type=int, help="exhaustive enumeration cap (default 24)")
    _add_common(p)

    p = sub.add_parser("qdisc", help="quantum discrepancy estimate of a projection system")
    p.add_argument("--input", help="set-system or projection-system JSON file")
    p.add_argument("--random-n", dest="random_n", type=int)
    p.add_argument("--random-m", dest="random_m", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--sweeps", type=int)
    p.add_argument("--plane-cap", dest="plane_cap", type=int)
    p.add_argument("--refine-top", dest="refine_top", type=int)
    _add_common(p)

    p = sub.add_parser("ubound", help="Delta_P satisfaction experiment for random colorings")
    p.add_argument("--n", type=int)
    p.add_argument("--m-grid", dest="m_grid", type=int, nargs="+")
    p.add_argument("--trials", type=int)
    p.add_argument("--c", type=float, help="concentration constant; omit to fit via the probe")
    p.add_argument("--probe-trials", dest="probe_trials", type=int)
    _add_common(p)

    p = sub.add_parser("lbound", help="qdisc scaling on random projection systems")
    p.add_argument("--n-grid", dest="n_grid", type=int, nargs="+")
    p.add_argument("--m-cap", dest="m_cap", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--sweeps", type=int)
    p.add_argument("--plane-cap", dest="plane_cap", type=int)
    p.add_argument("--refine-top", dest="refine_top", type=int)
    p.add_argument("--alpha", type=float)
    _add_common(p)

    p = sub.add_parser("dpp", help="sample a determinantal process or check it against exact laws")
    p.add_argument("action", choices=["sample", "check"])
    p.add_argument("--kernel", help="kernel JSON file ([re,im] pair matrix)")
    p.add_argument("--kind", choices=["uniform", "random", "projection"], help="built-in kernel")
    p.add_argument("--n", type=int, help="dimension for built-in kernels")
    p.add_argument("--trials", type=int)
    p.add_argument("--tv-gate", dest="tv_gate", type=float)
    p.add_argument("--z-gate", dest="z_gate", type=float)
    _add_common(p)

    p = sub.add_parser("compare", help="disc vs qdisc sandwich table over a corpus")
    p.add_argument("--ap-min", dest="ap_min", type=int)
    p.add_argument("--ap-max", dest="ap_max", type=int)
    p.add_argument("--random-count", dest="random_count", type=int)
    p.add_argument("--random-n", dest="random_n", type=int)
    p.add_argument("--random-m", dest="random_m", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--sweeps", type=int)
    p.add_argument("--cap", type=int)
    _add_common(p)

    p = sub.add_parser("haar", help="Monte Carlo vs exact Haar moment gates")
    p.add_argument("--n-grid", dest="n_grid", type=int, nargs="+")
    p.add_argument("--trials", type=int)
    p.add_argument("--z-gate", dest="z_gate", type=float)
    _add_common(p)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        cfg = build_config(args.subcommand, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        report = _COMMANDS[args.subcommand](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QdlabError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    report.wall_time = time.perf_counter() - start
    text = render_report(report, cfg["format"] or "csv")
    if cfg["out"]:
        Path(cfg["out"]).write_text(text)
        print(f"report written to {cfg['out']} ({report.wall_time:.2f}s)", file=sys.stderr)
    else:
        sys.stdout.write(text)
        print(f"wall time {report.wall_time:.2f}s", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
