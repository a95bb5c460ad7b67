"""Command-line driver: writes benchmark tables as CSV or JSON.

Exit codes: 0 when every requested verdict passes, 1 when a verdict fails,
2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import platform
import sys
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, fd
from .model import DimensionlessProblem, DomainError, FieldSnapshot, pole_table
from .planar import DEFAULT_TAUS, eps0_initial_profile, eps0_initial_slope
from .roots import RootFindingError, find_roots, scaled_residual
from .spherical import SphericalSeries
from .verify import compare, convergence_study, inversion_snapshot, series_for

OUT_DIR_ENV = "MARSHAK_BENCH_OUT_DIR"
FIELD_COLUMNS = ("geometry", "method", "eps", "n_roots_or_cells", "x", "tau", "u", "v", "du_dx", "dv_dx", "tol")


# ---------------------------------------------------------------------------
# tables


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else None
    return value


@dataclass
class BenchmarkTable:
    metadata: dict
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)

    def add(self, *row) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} cells, table has {len(self.columns)} columns")
        self.rows.append(row)

    def add_snapshot(self, snap: FieldSnapshot, geometry: str, method: str, eps: float, size: int) -> None:
        tol = np.broadcast_to(np.asarray(snap.tol, dtype=float), snap.x.shape)
        for i in range(len(snap.x)):
            self.add(
                geometry, method, eps, size, snap.x[i], snap.tau,
                snap.u[i], snap.v[i], snap.du_dx[i], snap.dv_dx[i], tol[i],
            )

    def to_csv(self) -> str:
        lines = ["# " + json.dumps(self.metadata, sort_keys=True, default=_json_value)]
        lines.append(",".join(self.columns))
        lines.extend(",".join(fmt(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        rows = [{c: _json_value(v) for c, v in zip(self.columns, row)} for row in self.rows]
        return json.dumps({"metadata": self.metadata, "rows": rows}, indent=1, sort_keys=True, default=_json_value) + "\n"

    def render(self, fmt_name: str) -> str:
        return self.to_json() if fmt_name == "json" else self.to_csv()


def resolve_output(out: str | None) -> Path | None:
    if out in (None, "-"):
        return None
    path = Path(out)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd_, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd_, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(table: BenchmarkTable, args) -> None:
    if args.stamp:
        table.metadata["stamp"] = {
            "generated_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "python": platform.python_version(),
            "numpy": np.__version__,
        }
    text = table.render(args.format)
    path = resolve_output(args.out)
    if path is None:
        sys.stdout.write(text)
    else:
        write_atomic(path, text)


# ---------------------------------------------------------------------------
# argument helpers


def float_list(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def problem_from(args) -> DimensionlessProblem:
    if args.geometry == "slab":
        return DimensionlessProblem.slab(args.b, args.eps)
    return DimensionlessProblem.shell(args.x1, args.x2, args.eps)


def base_metadata(args, problem: DimensionlessProblem, command: str) -> dict:
    geom = {"b": problem.geometry.b} if problem.kind == "slab" else {"x1": problem.geometry.x1, "x2": problem.geometry.x2}
    return {"command": command, "geometry": problem.kind, **geom, "eps": problem.eps, "code_version": __version__}


def x_grid(problem: DimensionlessProblem, points: int) -> np.ndarray:
    if points < 2:
        raise DomainError(f"need at least 2 grid points, got {points}")
    lo, hi = problem.geometry.bounds
    return np.linspace(lo, hi, points)


def fd_setup(args, problem):
    params = fd.FdParams(kappa=args.kappa, eps=problem.eps)
    mesh = fd.mesh_for(problem, params, args.cells)
    if args.schedule == "paper":
        schedule = fd.TimeSchedule.paper()
    else:
        schedule = fd.TimeSchedule.uniform_dtau(args.dtau, params)
    return params, mesh, schedule


def fd_metadata(args, params, schedule) -> dict:
    return {
        "cells": args.cells,
        "kappa": params.kappa,
        "c": params.c,
        "schedule": args.schedule,
        "phases_dt_until_tau": [[dt, until if math.isfinite(until) else "inf"] for dt, until in schedule.phases],
        "phases_dtau": [params.dtau(dt) for dt, _ in schedule.phases],
    }


# ---------------------------------------------------------------------------
# commands


def cmd_analytic(args) -> int:
    problem = problem_from(args)
    series = series_for(problem, args.n_roots)
    taus = args.taus or ((0.0,) + DEFAULT_TAUS if problem.eps == 0 else DEFAULT_TAUS)
    xs = x_grid(problem, args.points)
    meta = base_metadata(args, problem, "analytic")
    meta.update(n_roots=args.n_roots, points=args.points, tol_meaning="2 x largest term of the last root")
    table = BenchmarkTable(meta, FIELD_COLUMNS)
    for tau in taus:
        if tau == 0.0 and problem.eps == 0 and problem.kind == "slab":
            u0 = eps0_initial_profile(xs, problem.geometry.b)
            z = np.zeros_like(xs)
            snap = FieldSnapshot(0.0, xs, u0, z, eps0_initial_slope(xs, problem.geometry.b), z, 0.0)
            table.add_snapshot(snap, problem.kind, "closed-form-eps0", problem.eps, args.n_roots)
            continue
        table.add_snapshot(series.snapshot(xs, tau), problem.kind, "residue", problem.eps, args.n_roots)
    emit(table, args)
    return 0


def cmd_currents(args) -> int:
    problem = problem_from(args)
    series = series_for(problem, args.n_roots)
    taus = args.taus or DEFAULT_TAUS
    shell = isinstance(series, SphericalSeries)
    cols = ["tau", "J_minus", "J_plus", "psi_r", "psi_m"]
    if shell:
        cols += ["psi_r_volavg", "psi_m_volavg"]
    meta = base_metadata(args, problem, "currents")
    meta["n_roots"] = args.n_roots
    if shell:
        meta["psi_normalization"] = "psi: integral of 4 pi x^2 (.) dx; volavg: psi / shell volume"
    table = BenchmarkTable(meta, tuple(cols))
    for tau in taus:
        jm, jp = series.leakage_currents(tau)
        row = [tau, jm, jp, *series.integrated_densities(tau)]
        if shell:
            row += list(series.volume_averaged_densities(tau))
        table.add(*row)
    emit(table, args)
    return 0


def cmd_fd(args) -> int:
    problem = problem_from(args)
    params, mesh, schedule = fd_setup(args, problem)
    result = fd.run(problem, mesh, schedule, args.taus or (0.01, 0.1, 1.0), params)
    meta = base_metadata(args, problem, "fd")
    meta.update(fd_metadata(args, params, schedule))
    meta["requested_taus"] = list(args.taus or (0.01, 0.1, 1.0))
    table = BenchmarkTable(meta, FIELD_COLUMNS)
    for snap in result.snapshots:
        table.add_snapshot(snap, problem.kind, "fd", problem.eps, args.cells)
    emit(table, args)
    return 0


COMPARE_COLUMNS = (
    "method_a", "method_b", "quantity", "tau", "max_abs", "max_rel", "mean_abs", "mean_rel", "tolerance", "passed",
)


def cmd_compare(args) -> int:
    """FD against the residue series on the FD cell centres, optionally with the
    Gaver-Stehfest oracle. Verdict: error below tolerance at the first time and
    strictly smaller at the last."""
    problem = problem_from(args)
    params, mesh, schedule = fd_setup(args, problem)
    taus = args.taus or (0.01, 1.0)
    result = fd.run(problem, mesh, schedule, taus, params)
    series = series_for(problem, args.n_roots)
    meta = base_metadata(args, problem, "compare")
    meta.update(fd_metadata(args, params, schedule))
    meta.update(n_roots=args.n_roots, tolerance=args.tolerance, requested_taus=list(taus))
    table = BenchmarkTable(meta, COMPARE_COLUMNS)
    reports = []
    for snap in result.snapshots:
        ref = series.snapshot(snap.x, snap.tau)
        rep = compare(ref, snap, args.tolerance, ("residue", "fd"))
        reports.append(rep)
        table.add(rep.method_a, rep.method_b, rep.quantity, rep.tau, rep.max_abs, rep.max_rel,
                  rep.mean_abs, rep.mean_rel, rep.tolerance, rep.passed)
        if args.with_inversion and snap.tau > 0:
            xs = np.linspace(*problem.geometry.bounds, 5)
            gs = compare(series.snapshot(xs, snap.tau), inversion_snapshot(xs, snap.tau, problem), args.gs_tolerance,
                         ("residue", "gaver-stehfest"))
            table.add(gs.method_a, gs.method_b, gs.quantity, gs.tau, gs.max_abs, gs.max_rel,
                      gs.mean_abs, gs.mean_rel, gs.tolerance, gs.passed)
    passed = reports[0].passed and (len(reports) < 2 or reports[-1].max_rel < reports[0].max_rel)
    table.metadata["verdict"] = "PASS" if passed else "FAIL"
    emit(table, args)
    for rep in reports:
        print(rep.summary(), file=sys.stderr)
    print(f"verdict: {table.metadata['verdict']}", file=sys.stderr)
    return 0 if passed else 1


def cmd_convergence(args) -> int:
    problem = problem_from(args)
    x = args.probe[0] if args.probe else problem.geometry.bounds[0]
    tau = args.probe[1] if args.probe else 2.5
    rows = convergence_study(problem, (x, tau), args.max_roots)
    meta = base_metadata(args, problem, "convergence")
    meta.update(
        probe_x=x, probe_tau=tau, max_roots=args.max_roots,
        counting="n_roots includes the steady s=0 pole",
        pct_error="100 |u_N - u_ref| / |u_ref - u_inf|",
        pct_error_value="100 |u_N - u_ref| / |u_ref|",
    )
    table = BenchmarkTable(meta, ("n_roots", "n_beta_roots", "n_poles", "value", "pct_error", "pct_error_value"))
    for r in rows:
        table.add(r.n_roots, r.n_beta_roots, r.n_poles, r.value, r.pct_error, r.pct_error_value)
    emit(table, args)
    return 0


def cmd_roots(args) -> int:
    problem = problem_from(args)
    roots = find_roots(problem, args.n)
    scaled = scaled_residual(problem, roots.roots)
    poles = pole_table(roots.roots, problem.eps)
    meta = base_metadata(args, problem, "roots")
    meta.update(n=args.n, tolerance=args.tolerance, verdict_on="scaled_residual")
    table = BenchmarkTable(meta, ("index", "beta", "residual", "scaled_residual", "s_slow", "s_fast"))
    for i, beta in enumerate(roots.roots):
        s = poles.s[poles.root_index == i]
        s_slow = float(s.max())
        s_fast = float(s.min()) if len(s) > 1 else float("nan")
        table.add(i + 1, beta, roots.residual[i], scaled[i], s_slow, s_fast)
    passed = bool(np.all(scaled <= args.tolerance))
    table.metadata["verdict"] = "PASS" if passed else "FAIL"
    emit(table, args)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="marshak-bench", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--geometry", choices=("slab", "shell"), default="slab")
    common.add_argument("--b", type=float, default=1.0, help="slab optical thickness")
    common.add_argument("--x1", type=float, default=1.0, help="shell inner radius")
    common.add_argument("--x2", type=float, default=2.0, help="shell outer radius")
    common.add_argument("--eps", type=float, default=0.1)
    common.add_argument("--out", default=None, help=f"output file ('-' or omitted: stdout); relative to ${OUT_DIR_ENV} if set")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--stamp", action="store_true", help="add timestamp and interpreter versions to the metadata")

    fd_opts = argparse.ArgumentParser(add_help=False)
    fd_opts.add_argument("--cells", type=int, default=fd.PAPER_CELLS)
    fd_opts.add_argument("--kappa", type=float, default=fd.PAPER_KAPPA)
    fd_opts.add_argument("--schedule", choices=("paper", "uniform"), default="paper")
    fd_opts.add_argument("--dtau", type=float, default=1e-3, help="scaled step for --schedule uniform")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", parents=[common], help="residue-series field table")
    p.add_argument("--n-roots", type=int, default=30)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--taus", type=float_list, default=None)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("currents", parents=[common], help="leakage currents and integrated densities")
    p.add_argument("--n-roots", type=int, default=30)
    p.add_argument("--taus", type=float_list, default=None)
    p.set_defaults(func=cmd_currents)

    p = sub.add_parser("fd", parents=[common, fd_opts], help="finite-difference field table")
    p.add_argument("--taus", type=float_list, default=None)
    p.set_defaults(func=cmd_fd)

    p = sub.add_parser("compare", parents=[common, fd_opts], help="FD against the residue series")
    p.add_argument("--n-roots", type=int, default=30)
    p.add_argument("--taus", type=float_list, default=None)
    p.add_argument("--tolerance", type=float, default=0.01)
    p.add_argument("--with-inversion", action="store_true", help="also check the series against Gaver-Stehfest")
    p.add_argument("--gs-tolerance", type=float, default=1e-5)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("convergence", parents=[common], help="error against number of roots")
    p.add_argument("--probe", type=float, nargs=2, metavar=("X", "TAU"), default=None)
    p.add_argument("--max-roots", type=int, default=30)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("roots", parents=[common], help="transcendental roots and their poles")
    p.add_argument("-n", type=int, default=30)
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.set_defaults(func=cmd_roots)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, RootFindingError, fd.DominanceError, fd.ScheduleExhausted, OSError) as exc:
        print(f"marshak-bench {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
