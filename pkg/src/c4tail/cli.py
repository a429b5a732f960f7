"""Command-line entry point: every module as a subcommand.

Artifacts are JSON or CSV with the run configuration echoed into the
output (a "config" key in JSON, a "# config:" header line in CSV), reals
printed with 12 significant digits, so identical configurations produce
byte-identical artifacts.  Exit codes: 1 usage error, 2 domain error,
3 budget error.  The heavy lifting stays in the core package; the CLI only
parses flags, dispatches and serialises.  Sweeps honour C4TAIL_THREADS.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import cores, meanfield, montecarlo, rates, varsolve
from .errors import BudgetExceededError, DomainError, InfeasibleSolutionError
from .extremal import bound_inducibility, max_induced_c4
from .graphs import SimpleGraph, exact_tail_probability
from .subcube import phi_bruteforce


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(1)


def fmt_real(x: float) -> str:
    return f"{x:.12g}"


def _round_floats(obj):
    if isinstance(obj, float):
        return float(fmt_real(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


@dataclass
class RunConfig:
    subcommand: str
    parameters: dict
    seed: int = 0
    output_format: str = "json"
    output_path: str | None = None

    def canonical(self) -> str:
        payload = {
            "subcommand": self.subcommand,
            "parameters": _round_floats(
                {k: v for k, v in sorted(self.parameters.items()) if v is not None}
            ),
            "seed": self.seed,
            "output_format": self.output_format,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _emit(config: RunConfig, artifact: str) -> None:
    if config.output_path:
        with open(config.output_path, "w") as fh:
            fh.write(artifact)
    else:
        sys.stdout.write(artifact)


def _json_artifact(config: RunConfig, result) -> str:
    doc = {"config": json.loads(config.canonical()), "result": _round_floats(result)}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _csv_artifact(config: RunConfig, header: list[str], rows: list[list]) -> str:
    lines = [f"# config: {config.canonical()}", ",".join(header)]
    for row in rows:
        lines.append(
            ",".join(fmt_real(v) if isinstance(v, float) else str(v) for v in row)
        )
    return "\n".join(lines) + "\n"


def _parse_grid(spec: str):
    parts = spec.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid '{spec}' is not lo:hi:steps")
    lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    if steps < 1 or lo <= 0 or hi <= 0:
        raise DomainError(f"grid '{spec}' must have positive bounds and steps >= 1")
    if steps == 1:
        return [lo]
    ratio = (hi / lo) ** (1.0 / (steps - 1))
    return [lo * ratio**i for i in range(steps)]


def _sweep_row(n: int, p: float, delta: float, eps: float):
    report = rates.rate_theorem(n, p, delta, eps)
    regime = report.regime
    meanfield_norm = math.sqrt(delta / 2.0)
    if regime.label == "SPARSE_K":
        k = regime.k
        planting = rates.normalized_planting_bound(n, p, delta, k, eps)
        ratio = report.normalized_rate / meanfield_norm
    else:
        ex = rates.expected_induced_c4(n, p)
        if regime.label == "SPARSE_DENSE":
            mass = rates.plant_mass(0, ex, delta, eps)
        else:
            mass = rates.hub_mass(ex, delta, eps)
        planting = (1.0 + eps) * mass / (n * n * p * p)
        k = 0
        meanfield_norm = report.normalized_rate
        ratio = 1.0
    return [
        float(p),
        regime.label,
        k,
        float(report.normalized_rate),
        float(planting),
        float(meanfield_norm),
        float(ratio),
    ]


def sweep_rows(n: int, delta: float, eps: float, p_grid) -> list[list]:
    workers = int(os.environ.get("C4TAIL_THREADS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda p: _sweep_row(n, p, delta, eps), p_grid))
    return [_sweep_row(n, p, delta, eps) for p in p_grid]


SWEEP_HEADER = [
    "p",
    "regime",
    "k",
    "normalized_rate",
    "planting_bound_norm",
    "meanfield_norm",
    "ratio",
]


def _read_graph(path: str) -> SimpleGraph:
    with open(path) as fh:
        return SimpleGraph.from_text(fh.read())


def dispatch(config: RunConfig) -> str:
    """Run the subcommand and return the artifact text."""
    P = config.parameters
    sub = config.subcommand
    if sub == "rate":
        report = rates.rate_theorem(P["n"], P["p"], P["delta"], P.get("eps") or 0.0)
        return _json_artifact(config, report.as_dict())
    if sub == "sweep":
        grid = _parse_grid(P["p_grid"])
        rows = sweep_rows(P["n"], P["delta"], P.get("eps") or 0.0, grid)
        return _csv_artifact(config, SWEEP_HEADER, rows)
    if sub == "phi":
        n, p, delta = P["n"], P["p"], P["delta"]
        eps = P.get("eps") or 0.0
        lower, upper = rates.phi_bounds(n, p, delta, eps)
        result = {"bounds": {"lower": lower, "upper": upper}}
        if P.get("brute"):
            val = phi_bruteforce(n, p, delta, one_supcubes_only=P.get("one_supcubes", False))
            result["bruteforce"] = val if math.isfinite(val) else "inf"
        return _json_artifact(config, result)
    if sub == "plant":
        sizes = rates.plant_sizes(P["n"], P["p"], P["delta"], P.get("eps") or 0.0)
        return _json_artifact(
            config,
            {
                "r": {str(k): v for k, v in sizes.r.items()},
                "m": {str(k): v for k, v in sizes.m.items()},
                "m_star": sizes.m_star,
                "ex": sizes.ex,
            },
        )
    if sub == "extremal":
        n, m = P["n"], P["m"]
        min_degree = P.get("min_degree") or 0
        rec = max_induced_c4(n, m, min_degree)
        bound = bound_inducibility(n, m) if m > 3 else float("nan")
        tight = m > 3 and rec.max_count == bound
        return _csv_artifact(
            config,
            ["n", "m", "min_degree", "max_count", "bound", "tight"],
            [[n, m, min_degree, rec.max_count, float(bound), str(tight).lower()]],
        )
    if sub == "core-extract":
        G = _read_graph(P["graph"])
        result = cores.extract_core(G, P["s"], P["p"])
        return result.to_text()
    if sub == "core-census":
        params = cores.CoreParams(
            eps=P["eps"], delta=P["delta"], K=P["K"], n=P["n"], p=P["p"]
        )
        report = cores.enumerate_cores(P["n"], P["m"], params)
        return _json_artifact(config, report.as_dict())
    if sub == "varsolve":
        sol = varsolve.solve_discrete(
            P["n"], P["p"], P["delta"], P["eps"], R=P.get("R")
        )
        return _json_artifact(config, sol.as_dict())
    if sub == "meanfield":
        method = P.get("method", "both")
        result = {}
        if method in ("ansatz", "both"):
            result["ansatz"] = meanfield.solve_ansatz(P["n"], P["p"], P["delta"]).as_dict()
        if method in ("general", "both"):
            result["general"] = meanfield.solve_general(
                P["n"], P["p"], P["delta"], seed=config.seed
            ).as_dict()
        return _json_artifact(config, result)
    if sub == "gap":
        p = P.get("p")
        if p is None:
            if P.get("k") is None:
                raise DomainError("gap needs --p or --k")
            p = rates.sparse_k_midpoint_p(P["n"], P["k"])
        return _json_artifact(config, meanfield.gap_report(P["n"], p, P["delta"]))
    if sub == "tail":
        est = montecarlo.estimate_tail(
            P["n"], P["p"], P["delta"], P["trials"], config.seed
        )
        result = est.as_dict()
        if P.get("exact"):
            threshold = (1.0 + P["delta"]) * rates.expected_induced_c4(P["n"], P["p"])
            oracle = exact_tail_probability(P["n"], P["p"], threshold)
            result["exact"] = oracle.probability
            result["graphs_enumerated"] = oracle.graphs_enumerated
        return _json_artifact(config, result)
    raise DomainError(f"unknown subcommand {sub}")


def _add_common(sp, *names):
    if "n" in names:
        sp.add_argument("--n", type=int, required=True)
    if "p" in names:
        sp.add_argument("--p", type=float, required=True)
    if "p_opt" in names:
        sp.add_argument("--p", type=float)
    if "delta" in names:
        sp.add_argument("--delta", type=float, required=True)
    if "eps" in names:
        sp.add_argument("--eps", type=float)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=["json", "csv"], default=None)
    sp.add_argument("--out", type=str, default=None)


def build_parser() -> _Parser:
    parser = _Parser(prog="c4tail", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sp = subs.add_parser("rate", help="normalised upper-tail rate report")
    _add_common(sp, "n", "p", "delta", "eps")

    sp = subs.add_parser("sweep", help="phase-diagram sweep over a p grid")
    sp.add_argument("--p-grid", type=str, required=True, metavar="lo:hi:steps")
    _add_common(sp, "n", "delta", "eps")

    sp = subs.add_parser("phi", help="optimal-plant cost bounds / brute force")
    sp.add_argument("--brute", action="store_true")
    sp.add_argument("--one-supcubes", action="store_true")
    _add_common(sp, "n", "p", "delta", "eps")

    sp = subs.add_parser("plant", help="plant size tables")
    _add_common(sp, "n", "p", "delta", "eps")

    sp = subs.add_parser("extremal", help="extremal census row")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--min-degree", type=int, default=0)
    _add_common(sp, "n")

    core = subs.add_parser("core", help="core extraction / census")
    core_subs = core.add_subparsers(dest="core_sub", required=True)
    sp = core_subs.add_parser("extract")
    sp.add_argument("--graph", type=str, required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", type=str, default=None)
    sp.add_argument("--format", choices=["json", "csv"], default=None)
    sp = core_subs.add_parser("census")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--K", type=float, required=True)
    _add_common(sp, "n", "p", "delta")
    sp.add_argument("--eps", type=float, required=True)

    sp = subs.add_parser("varsolve", help="discrete variational solver")
    sp.add_argument("--R", type=int, default=None)
    _add_common(sp, "n", "p", "delta")
    sp.add_argument("--eps", type=float, required=True)

    sp = subs.add_parser("meanfield", help="mean-field solvers")
    sp.add_argument("--method", choices=["ansatz", "general", "both"], default="both")
    _add_common(sp, "n", "p", "delta")

    sp = subs.add_parser("gap", help="mean-field vs family-planting gap")
    sp.add_argument("--k", type=int, default=None)
    _add_common(sp, "n", "p_opt", "delta")

    sp = subs.add_parser("tail", help="Monte Carlo tail estimate")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--exact", action="store_true")
    _add_common(sp, "n", "p", "delta")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    ns = vars(args)
    sub = ns.pop("subcommand")
    if sub == "core":
        sub = "core-extract" if ns.pop("core_sub") == "extract" else "core-census"
    seed = ns.pop("seed", 0)
    fmt = ns.pop("format", None)
    out = ns.pop("out", None)
    params = {k: v for k, v in ns.items()}
    config = RunConfig(
        subcommand=sub,
        parameters=params,
        seed=seed,
        output_format=fmt or ("csv" if sub in ("sweep", "extremal") else "json"),
        output_path=out,
    )
    try:
        artifact = dispatch(config)
    except BudgetExceededError as exc:
        sys.stderr.write(f"budget error: {exc}\n")
        return 3
    except (DomainError, InfeasibleSolutionError, FileNotFoundError) as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return 2
    _emit(config, artifact)
    return 0


if __name__ == "__main__":
    sys.exit(main())
