#!/usr/bin/env python3
"""Sweep the camp weight of the two-node forcing gadget.

For each eps on a /20 grid, runs the gadget from its default start and
reports the measured transient and period together with the exhaustive count
of synchronous fixed points.  The period-2 band and the fixed-point counts
are frozen as regression constants in the test suite.
"""

from fractions import Fraction

from borda_dynamics import build_cover_graph, enumerate_fixed_points, parse_order
from borda_dynamics.scenarios import build_gadget


def main() -> None:
    rho = parse_order("x>y>z", 3)
    graph = build_cover_graph(3)
    print(f"{'eps':>6} {'mu':>4} {'period':>7} {'fixed points':>13}")
    oscillating = []
    for k in range(1, 20):
        eps = Fraction(k, 20)
        sc = build_gadget(3, rho, eps)
        report = sc.run()
        fixed = enumerate_fixed_points(sc.network, graph, sc.policy, sc.persistent)
        print(f"{str(eps):>6} {report.mu:>4} {report.period:>7} {len(fixed):>13}")
        if report.period == 2:
            oscillating.append(eps)
    print(f"\nperiod-2 band on the /20 grid: {oscillating[0]} .. {oscillating[-1]}")
    print("note: the fixed-point set is never empty; for eps < 1/2 every strict")
    print("consensus of the two free nodes is an equilibrium")


if __name__ == "__main__":
    main()
