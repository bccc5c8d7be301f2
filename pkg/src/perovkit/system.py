"""Coupled quadratic fractional integral systems and their operator form.

    x_i(t) = f_i(t, x, y) * I^{alpha_i}[g_i(., x, y)](t)
             + sum_k I^{beta_i^k}[h_i^k(., x, y)](t),   i = 1, 2

is the hybrid equation ``(x, y) = A(x, y) . B(x, y) + C(x, y)`` with

    A_i(x, y)(t) = f_i(t, x(t), y(t))
    B_i(x, y)    = I^{alpha_i} g_i(., x, y)
    C_i(x, y)    = sum_k I^{beta_i^k} h_i^k(., x, y)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .fractional import as_order, rl_weights
from .grid import Grid, GridFunction, PairFunction

# f(t, x, y) -> array, vectorised over broadcastable arrays
PointFn = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FractionalSystem:
    f: tuple
    g: tuple
    h: tuple  # h[k][i] is h_i^{k+1}
    alpha: tuple
    betas: tuple  # betas[k][i] is beta_i^{k+1}

    def __post_init__(self):
        if not (len(self.f) == len(self.g) == len(self.alpha) == 2):
            raise ValueError("f, g and alpha need one entry per equation (2)")
        if len(self.h) != len(self.betas) or any(len(row) != 2 for row in self.h):
            raise ValueError("h and betas must both be m x 2")
        object.__setattr__(self, "alpha", tuple(as_order(a) for a in self.alpha))
        object.__setattr__(self, "betas", tuple(tuple(as_order(b) for b in row) for row in self.betas))

    @property
    def m(self) -> int:
        return len(self.h)

    def operators(self, grid: Grid):
        """Return the (A, B, C) operators on pairs of functions over ``grid``."""
        t = grid.nodes
        wa = [rl_weights(grid, a) for a in self.alpha]
        wb = [[rl_weights(grid, b) for b in row] for row in self.betas]

        def A(p: PairFunction) -> PairFunction:
            x, y = p.first.samples, p.second.samples
            return PairFunction.from_arrays(grid, *(_full(fi(t, x, y), t) for fi in self.f))

        def B(p: PairFunction) -> PairFunction:
            x, y = p.first.samples, p.second.samples
            return PairFunction.from_arrays(
                grid, *(w.apply(_full(gi(t, x, y), t)) for w, gi in zip(wa, self.g))
            )

        def C(p: PairFunction) -> PairFunction:
            x, y = p.first.samples, p.second.samples
            out = [np.zeros_like(t), np.zeros_like(t)]
            for hrow, wrow in zip(self.h, wb):
                for i in range(2):
                    out[i] = out[i] + wrow[i].apply(_full(hrow[i](t, x, y), t))
            return PairFunction.from_arrays(grid, *out)

        return A, B, C


def _full(values, t: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.asarray(values, dtype=float), t.shape)


def evaluate_at_zero(fns: Sequence[PointFn], grid: Grid) -> list[GridFunction]:
    """``t -> fn(t, 0, 0)`` sampled on the grid, for each function."""
    t = grid.nodes
    z = np.zeros_like(t)
    return [GridFunction(grid, _full(fn(t, z, z), t)) for fn in fns]
