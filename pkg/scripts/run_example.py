"""Certify and solve the built-in example, then tabulate the solution.

    python3 scripts/run_example.py [--N 1024] [--every 128]
"""

import argparse

from perovkit.example import builtin_example
from perovkit.grid import Grid, PairFunction
from perovkit.hybrid import outer_solve, residual
from perovkit.hypotheses import full_report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=1024)
    ap.add_argument("--every", type=int, default=128, help="print every k-th node")
    args = ap.parse_args()

    spec, p = builtin_example(args.N)
    print(full_report(spec).summary())
    res = outer_solve(p, PairFunction.zeros(Grid(spec.T, args.N)))
    print(f"\nouter iterations {res.iterations}, damping {res.damping:g}, "
          f"residual {residual(p, res.point).tolist()}")
    print("\n     t          x(t)            y(t)")
    t = res.point.first.grid.nodes
    for j in range(0, args.N + 1, args.every):
        print(f"{t[j]:.4f}  {res.point.first.samples[j]: .10e}  {res.point.second.samples[j]: .10e}")


if __name__ == "__main__":
    main()
