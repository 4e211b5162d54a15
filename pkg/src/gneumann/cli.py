"""Batch front door: load graph/measure/boundary files, run solvers and
simulations, emit CSV/JSON, and run the verification suites.

Four commands: ``solve``, ``simulate``, ``kernel``, ``verify``.  Flags
may also be supplied through ``--config file.json``; explicit flags win.
Failures exit nonzero after printing one machine-readable JSON error
object to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import fileio
from .errors import GneumannError, InputError
from .graphs import Measure, closure_subgraph
from .solver import (
    BoundaryData,
    check_compatibility,
    is_compatible,
    solve_boundary_measure,
    solve_direct,
    solve_green,
    solve_heat_integral,
)
from .spectral import eigendecompose, green_kernel, heat_kernel, heat_time_integral
from .stochastic import mc_estimate_measure, sample_path_graph
from .verification import run_all_suites

__all__ = ["main", "run", "RunConfig"]


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    measure: str | None = None
    interior: str | None = None
    boundary: str | None = None
    mu: str | None = None
    phi: str | None = None
    method: str = "direct"
    tol: float = 1e-10
    T: float | None = None
    N: int = 10000
    seed: int = 0
    start: str | None = None
    times: str | None = None
    out: str = "."
    project: bool = False
    dump_paths: bool = False


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gneumann",
        description="Neumann boundary-value problems on finite weighted graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in [
        ("solve", "solve the boundary-value problem and write CSV + JSON"),
        ("simulate", "Monte Carlo boundary-integral estimate along chain paths"),
        ("kernel", "export heat/Green kernel matrices and the spectrum"),
        ("verify", "run the invariant suites and write a pass/fail report"),
    ]:
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", help="JSON file with defaults for any flag")
        p.add_argument("--graph", help="edge-list TSV: x<TAB>y<TAB>weight")
        p.add_argument("--measure", help="vertex measure TSV: x<TAB>m")
        p.add_argument("--interior", help="interior vertex set, one id per line")
        p.add_argument("--boundary", help="designated boundary set (boundary-measure mode)")
        p.add_argument("--mu", help="boundary measure TSV (boundary-measure mode)")
        p.add_argument("--phi", help="boundary data TSV: x<TAB>value")
        p.add_argument("--method", choices=["direct", "green", "heat-integral"])
        p.add_argument("--tol", type=float, help="truncation tolerance (default 1e-10)")
        p.add_argument("--T", type=float, help="time horizon for simulation")
        p.add_argument("--N", type=int, help="number of Monte Carlo paths (default 10000)")
        p.add_argument("--seed", type=int, help="PRNG seed (default 0)")
        p.add_argument("--start", help="start vertex for simulation")
        p.add_argument("--times", help="comma-separated kernel times, e.g. 0.5,1,2")
        p.add_argument("--out", help="output directory (default .)")
        p.add_argument("--project", action="store_true", default=None,
                       help="center incompatible boundary data instead of failing")
        p.add_argument("--dump-paths", dest="dump_paths", action="store_true", default=None,
                       help="also write per-path CSV when simulating")
    return parser


def _merge_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        try:
            values = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"cannot read config {args.config}: {e}") from e
        if not isinstance(values, dict):
            raise InputError(f"config {args.config} must hold a JSON object")
    config = RunConfig(command=args.command)
    known = {f.name for f in fields(RunConfig)}
    for key, val in values.items():
        if key == "command":
            continue
        if key not in known:
            raise InputError(f"unknown config key {key!r}")
        setattr(config, key, val)
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            setattr(config, f.name, flag)
    return config


def _require(config: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(config, n) in (None, "")]
    if missing:
        raise InputError(
            f"{config.command} requires --" + ", --".join(missing), missing=missing
        )


def _load_instance(config: RunConfig):
    _require(config, "graph", "measure")
    g = fileio.read_graph(config.graph)
    m = fileio.read_measure(config.measure)
    return g, m


def _problem_mode(config: RunConfig) -> str:
    has_interior = bool(config.interior)
    has_measure_boundary = bool(config.boundary) or bool(config.mu)
    if has_interior and has_measure_boundary:
        raise InputError("give either --interior or --boundary with --mu, not both")
    if has_interior:
        return "vertex-boundary"
    if bool(config.boundary) and bool(config.mu):
        return "boundary-measure"
    raise InputError("need --interior, or --boundary together with --mu")


def _load_phi(config: RunConfig, boundary, measure: Measure) -> BoundaryData:
    _require(config, "phi")
    values = fileio.read_vertex_function(config.phi)
    return BoundaryData(values=values, measure=measure.restrict(boundary))


def _maybe_project(config: RunConfig, phi: BoundaryData):
    if config.project and not is_compatible(phi):
        projected, shift = phi.project_centered()
        warning = (
            "boundary data was not centered; subtracted its weighted mean "
            f"({fileio.fmt(shift)}) before solving"
        )
        return projected, shift, warning
    return phi, None, None


def _out_dir(config: RunConfig) -> Path:
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_solve(config: RunConfig) -> int:
    g, m = _load_instance(config)
    mode = _problem_mode(config)
    out = _out_dir(config)
    summary: dict = {"mode": mode}

    if mode == "vertex-boundary":
        interior = fileio.read_vertex_set(config.interior)
        sub = closure_subgraph(g, interior, m)
        phi = _load_phi(config, sub.boundary, sub.measure)
        phi, shift, warning = _maybe_project(config, phi)
        if config.method == "direct":
            sol = solve_direct(sub, phi)
        else:
            spec = eigendecompose(sub.graph, sub.measure)
            if config.method == "green":
                sol = solve_green(sub, phi, spec)
            else:
                sol = solve_heat_integral(sub, phi, spec, tol=config.tol)
        order = sub.closure
        boundary = sub.boundary
    else:
        boundary = fileio.read_vertex_set(config.boundary)
        mu = fileio.read_measure(config.mu)
        if config.method != "direct":
            raise InputError("boundary-measure mode supports only --method direct")
        _require(config, "phi")
        phi = BoundaryData(values=fileio.read_vertex_function(config.phi), measure=mu)
        phi, shift, warning = _maybe_project(config, phi)
        sol = solve_boundary_measure(g, boundary, m, mu, phi)
        order = g.vertices

    fileio.write_solution_csv(sol.u, boundary, order, out / "solution.csv")
    summary.update({
        "method": sol.method,
        "residual_interior": sol.residual_interior,
        "residual_boundary": sol.residual_boundary,
        "centering": sol.centering,
        "compatibility_sum": check_compatibility(phi),
    })
    if sol.truncation_horizon is not None:
        summary["T_truncation"] = sol.truncation_horizon
    if warning:
        summary["warning"] = warning
        summary["projected_shift"] = shift
    fileio.write_json(summary, out / "summary.json")
    return 0


def _cmd_simulate(config: RunConfig) -> int:
    g, m = _load_instance(config)
    mode = _problem_mode(config)
    _require(config, "start", "T")
    if config.N < 2:
        raise InputError(f"simulation needs N >= 2, got {config.N}")
    out = _out_dir(config)

    if mode == "vertex-boundary":
        interior = fileio.read_vertex_set(config.interior)
        sub = closure_subgraph(g, interior, m)
        walk_graph, walk_measure = sub.graph, sub.measure
        boundary = sub.boundary
        mu = sub.boundary_measure()
    else:
        boundary = fileio.read_vertex_set(config.boundary)
        mu = fileio.read_measure(config.mu)
        walk_graph, walk_measure = g, m

    _require(config, "phi")
    phi = BoundaryData(values=fileio.read_vertex_function(config.phi), measure=mu)

    est = mc_estimate_measure(
        walk_graph, boundary, walk_measure, mu, phi,
        config.start, config.T, config.N, config.seed,
    )

    # spectral value of the same finite-horizon expectation, as reference
    spec = eigendecompose(walk_graph, walk_measure)
    fvec = np.zeros(walk_graph.n)
    for y in boundary:
        fvec[walk_graph.index(y)] = phi.values[y] * mu[y] / walk_measure[y]
    ref = heat_time_integral(spec, fvec, config.T)[str(config.start)]
    z = (est.value - ref) / est.stderr if est.stderr > 0 else None

    report = {
        "start": est.start,
        "T": est.horizon,
        "N": est.samples,
        "seed": est.seed,
        "value": est.value,
        "stderr": est.stderr,
        "analytic_reference": ref,
        "z_score": z,
        "mode": mode,
    }
    fileio.write_json(report, out / "estimate.json")

    if config.dump_paths:
        with open(out / "paths.csv", "w", encoding="utf-8") as fh:
            fh.write("path_id,step,state,holding_time\n")
            for i in range(config.N):
                path = sample_path_graph(
                    walk_graph, walk_measure, config.start, config.T, (config.seed, i)
                )
                for step, (state, hold) in enumerate(zip(path.states, path.holding_times)):
                    fh.write(f"{i},{step},{state},{fileio.fmt(hold)}\n")
    return 0


def _cmd_kernel(config: RunConfig) -> int:
    g, m = _load_instance(config)
    if not config.times:
        raise InputError(
            "kernel requires explicit --times t1,t2,... "
            "(time scales are graph-dependent; there is no safe default)"
        )
    tokens = [tok.strip() for tok in str(config.times).split(",") if tok.strip()]
    try:
        times = [(tok, float(tok)) for tok in tokens]
    except ValueError as e:
        raise InputError(f"cannot parse --times: {e}") from e
    out = _out_dir(config)
    spec = eigendecompose(g, m)
    for tok, t in times:
        fileio.write_kernel_csv(heat_kernel(spec, t), out / f"heat_t{tok}.csv")
    fileio.write_kernel_csv(green_kernel(spec), out / "green.csv")
    fileio.write_spectrum_csv(spec, out / "spectrum.csv")
    return 0


def _cmd_verify(config: RunConfig) -> int:
    g, m = _load_instance(config)
    _require(config, "interior")
    interior = fileio.read_vertex_set(config.interior)
    sub = closure_subgraph(g, interior, m)
    phi = None
    if config.phi:
        phi = _load_phi(config, sub.boundary, sub.measure)
    report = run_all_suites(sub, phi=phi, seed=config.seed)
    out = _out_dir(config)
    fileio.write_json(report, out / "report.json")
    return 0 if report["passed"] else 1


_COMMANDS = {
    "solve": _cmd_solve,
    "simulate": _cmd_simulate,
    "kernel": _cmd_kernel,
    "verify": _cmd_verify,
}


def run(config: RunConfig) -> int:
    return _COMMANDS[config.command](config)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _merge_config(args)
        return run(config)
    except GneumannError as e:
        payload = {"code": e.code, "message": str(e), "context": getattr(e, "context", {})}
        print(json.dumps(payload, sort_keys=True, default=str), file=sys.stderr)
        return 1
    except OSError as e:
        payload = {"code": "InputError", "message": str(e), "context": {}}
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
