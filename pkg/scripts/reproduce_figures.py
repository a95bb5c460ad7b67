"""Write every figure's data table into one directory.

    python3 scripts/reproduce_figures.py [OUTDIR]

OUTDIR defaults to ./figures (or $MARSHAK_BENCH_OUT_DIR if set).
"""

import os
import sys

from marshak_bench.cli import OUT_DIR_ENV, main

JOBS = {
    "slab_fields.csv": ["analytic"],
    "slab_eps0_fields.csv": ["analytic", "--eps", "0"],
    "slab_currents.csv": ["currents", "--taus", "0.01,0.05,0.1,0.25,0.5,1,2,3,5,10,20,50"],
    "slab_convergence.csv": ["convergence", "--probe", "0", "2.5"],
    "slab_fd.csv": ["fd", "--taus", "0.01,0.1,1"],
    "slab_compare.csv": ["compare", "--taus", "0.01,0.1,1", "--with-inversion"],
    "shell_fields.csv": ["analytic", "--geometry", "shell"],
    "shell_currents.csv": ["currents", "--geometry", "shell", "--taus", "0.01,0.05,0.1,0.25,0.5,1,2,3,5,10,20,50"],
    "shell_convergence.csv": ["convergence", "--geometry", "shell", "--probe", "1", "2.5"],
    "shell_compare.csv": ["compare", "--geometry", "shell", "--taus", "0.01,0.1,1"],
    "roots_slab.csv": ["roots", "-n", "10"],
    "roots_shell.csv": ["roots", "--geometry", "shell", "-n", "10"],
}


def run(outdir: str) -> int:
    os.environ[OUT_DIR_ENV] = outdir
    worst = 0
    for name, argv in JOBS.items():
        code = main(argv + ["--out", name])
        print(f"{name:<24} exit {code}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(run(sys.argv[1] if len(sys.argv) > 1 else os.environ.get(OUT_DIR_ENV, "figures")))
