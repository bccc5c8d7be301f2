"""Grid refinement study for the built-in example.

Solves at N = 64 .. 2048 (powers of two avoid the zero of f_2 at t = 2/3),
prints successive differences and the observed order per component.

    python3 scripts/refinement_study.py [--max-N 2048]
"""

import argparse
import time

import numpy as np

from perovkit.example import builtin_example
from perovkit.grid import Grid, PairFunction, pair_norm
from perovkit.hybrid import outer_solve


def solve(N):
    _, p = builtin_example(N)
    res = outer_solve(p, PairFunction.zeros(Grid(1.0, N)), tol=1e-12, inner_tol=1e-13)
    return res


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-N", type=int, default=2048)
    args = ap.parse_args()

    Ns = [64]
    while Ns[-1] * 2 <= args.max_N:
        Ns.append(Ns[-1] * 2)

    sols = {}
    for N in Ns:
        t0 = time.perf_counter()
        res = solve(N)
        sols[N] = res.point
        print(f"N={N:5d}  outer={res.iterations}  residual={res.residuals[-1].max():.2e}  "
              f"||(x,y)||={np.round(pair_norm(res.point).values, 6)}  {time.perf_counter() - t0:.2f}s")

    print("\n   N -> 2N        d_x          d_y      order_x  order_y")
    prev = None
    for N in Ns[:-1]:
        d = pair_norm(sols[N].resample(Grid(1.0, 2 * N)) - sols[2 * N]).values
        order = np.log2(prev / d) if prev is not None else (np.nan, np.nan)
        print(f"{N:5d} -> {2 * N:5d}  {d[0]:.3e}  {d[1]:.3e}  {order[0]:7.3f}  {order[1]:7.3f}")
        prev = d


if __name__ == "__main__":
    main()
