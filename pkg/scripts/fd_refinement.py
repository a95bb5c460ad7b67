"""Finite-difference error against the residue series under time and space refinement.

Covers the paper's two-phase schedule, uniform schedules from dtau = 1e-2 down
to 1e-5, and a cell-count sweep at a fine step.
"""

import numpy as np

from marshak_bench import DimensionlessProblem, build_series, fd
from marshak_bench.verify import compare


def errors(problem, schedule, cells=100, probes=(0.01, 1.0)):
    params = fd.FdParams(eps=problem.eps)
    mesh = fd.mesh_for(problem, params, cells)
    run = fd.run(problem, mesh, schedule, probes, params)
    series = build_series(problem, 30)
    out = []
    for snap in run.snapshots:
        ref = series.snapshot(snap.x, snap.tau)
        rep = compare(ref, snap, 0.01)
        norm = np.abs(snap.u - ref.u).max() / np.abs(ref.u).max()
        out.append((snap.tau, rep.max_rel, norm))
    return out


def show(label, rows):
    cells = "  ".join(f"tau={t:.4g}: pointwise {p:.2e}, max-norm {n:.2e}" for t, p, n in rows)
    print(f"{label:<28} {cells}")


def main():
    for problem in (DimensionlessProblem.slab(1.0), DimensionlessProblem.shell(1.0, 2.0)):
        print(f"\n== {problem.kind}")
        params = fd.FdParams(eps=problem.eps)
        show("paper two-phase schedule", errors(problem, fd.TimeSchedule.paper()))
        for dtau in (1e-2, 1e-3, 1e-4, 1e-5):
            until = 1.05 if dtau >= 1e-4 else 0.0105
            probes = (0.01, 1.0) if dtau >= 1e-4 else (0.01,)
            sched = fd.TimeSchedule.uniform_dtau(dtau, params, until)
            show(f"uniform dtau={dtau:g}", errors(problem, sched, probes=probes))
        for cells in (25, 50, 100, 200):
            sched = fd.TimeSchedule.uniform_dtau(1e-3, params, 1.05)
            show(f"cells={cells}, dtau=1e-3", errors(problem, sched, cells=cells, probes=(1.0,)))


if __name__ == "__main__":
    main()
