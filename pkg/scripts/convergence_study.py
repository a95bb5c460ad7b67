"""Error of u at the standard probes against the number of roots.

Prints both error bases (transient part, full value) and both root counts
(steady pole included or not) so the quoted percentages can be matched.
"""

from marshak_bench import DimensionlessProblem
from marshak_bench.verify import convergence_study

PROBES = {
    "slab b=1": (DimensionlessProblem.slab(1.0, 0.1), (0.0, 2.5)),
    "shell 1..2": (DimensionlessProblem.shell(1.0, 2.0, 0.1), (1.0, 2.5)),
}


def main(max_roots: int = 30) -> None:
    for label, (problem, probe) in PROBES.items():
        rows = convergence_study(problem, probe, max_roots)
        print(f"\n{label}, probe x={probe[0]}, tau={probe[1]}, reference = {max_roots} roots")
        print(f"{'N':>3} {'beta roots':>10} {'value':>14} {'% of transient':>15} {'% of value':>12}")
        for r in rows[:12]:
            print(f"{r.n_roots:>3} {r.n_beta_roots:>10} {r.value:>14.10f} {r.pct_error:>15.6f} {r.pct_error_value:>12.6f}")


if __name__ == "__main__":
    main()
