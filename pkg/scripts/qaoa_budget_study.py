"""Optimizer-budget study for QAOA max-cut on the worked 4-node graph.

Runs the depth-1 circuit with an increasing SPSA iteration budget and prints
the best cut found at each budget next to the brute-force optimum.
"""

import argparse
import time

from taxlab.clustering import WeightedGraph, brute_force_maxcut, qaoa_maxcut
from taxlab.optimize import OptimizerConfig

GRAPH = WeightedGraph(
    n=4,
    edges=[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 2.0), (0, 3, 6.0), (1, 3, 9.0), (2, 3, 5.0)],
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--budgets", type=int, nargs="+",
                        default=[1, 10, 25, 50, 100, 150])
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--reps", type=int, default=1)
    args = parser.parse_args()

    optimum = brute_force_maxcut(GRAPH)
    print(f"brute-force optimum: {optimum.value} at {optimum.bits}")
    print(f"{'budget':>8} {'expectation':>12} {'best cut':>9} {'seconds':>8}")
    for budget in args.budgets:
        start = time.perf_counter()
        result = qaoa_maxcut(
            GRAPH, reps=args.reps,
            optimizer=OptimizerConfig(kind="spsa", max_iterations=budget,
                                      seed=args.seed),
        )
        elapsed = time.perf_counter() - start
        print(f"{budget:>8} {result.expectation:>12.4f} "
              f"{result.assignment.value:>9.1f} {elapsed:>8.2f}")


if __name__ == "__main__":
    main()
