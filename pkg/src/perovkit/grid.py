"""Grid-sampled functions on [0, T] and pairs of them.

``GridFunction`` stands in for C(J, R) with the discrete sup-norm, and
``PairFunction`` for the product space normed by the vector
``(||x||_inf, ||y||_inf)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridMismatch
from .matrix import OrderedVector


@dataclass(frozen=True)
class Grid:
    T: float
    N: int

    def __post_init__(self):
        if not (isinstance(self.N, (int, np.integer)) and self.N >= 1):
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        if not (np.isfinite(self.T) and self.T > 0):
            raise ValueError(f"T must be positive and finite, got {self.T!r}")
        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "N", int(self.N))

    @property
    def h(self) -> float:
        return self.T / self.N

    @cached_property
    def nodes(self) -> np.ndarray:
        t = np.arange(self.N + 1) * (self.T / self.N)
        t[-1] = self.T
        t.setflags(write=False)
        return t

    def sample(self, fn) -> "GridFunction":
        """Evaluate a vectorised callable of t at the nodes."""
        return GridFunction(self, np.broadcast_to(fn(self.nodes), (self.N + 1,)))

    def constant(self, c: float) -> "GridFunction":
        return GridFunction(self, np.full(self.N + 1, float(c)))

    def zeros(self) -> "GridFunction":
        return self.constant(0.0)


def _check_same(f: "GridFunction", g: "GridFunction"):
    if f.grid != g.grid:
        raise GridMismatch(f"grids differ: {f.grid} vs {g.grid}")


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.shape != (self.grid.N + 1,):
            raise ValueError(f"expected {self.grid.N + 1} samples, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    def __add__(self, other):
        if isinstance(other, GridFunction):
            return add(self, other)
        return GridFunction(self.grid, self.samples + float(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GridFunction):
            _check_same(self, other)
            return GridFunction(self.grid, self.samples - other.samples)
        return GridFunction(self.grid, self.samples - float(other))

    def __neg__(self):
        return GridFunction(self.grid, -self.samples)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            return multiply(self, other)
        return scale(other, self)

    __rmul__ = __mul__

    def __abs__(self):
        return GridFunction(self.grid, np.abs(self.samples))

    def sup(self) -> float:
        return sup_norm(self)

    def resample(self, grid: Grid) -> "GridFunction":
        """Piecewise-linear interpolation onto another grid over the same [0, T]."""
        if grid.T != self.grid.T:
            raise GridMismatch("resampling needs a common interval")
        return GridFunction(grid, np.interp(grid.nodes, self.grid.nodes, self.samples))


def sup_norm(f: GridFunction) -> float:
    return float(np.max(np.abs(f.samples)))


def multiply(f: GridFunction, g: GridFunction) -> GridFunction:
    _check_same(f, g)
    return GridFunction(f.grid, f.samples * g.samples)


def add(f: GridFunction, g: GridFunction) -> GridFunction:
    _check_same(f, g)
    return GridFunction(f.grid, f.samples + g.samples)


def scale(c: float, f: GridFunction) -> GridFunction:
    return GridFunction(f.grid, float(c) * f.samples)


@dataclass(frozen=True, eq=False)
class PairFunction:
    first: GridFunction
    second: GridFunction

    def __post_init__(self):
        _check_same(self.first, self.second)

    @property
    def grid(self) -> Grid:
        return self.first.grid

    @classmethod
    def zeros(cls, grid: Grid) -> "PairFunction":
        return cls(grid.zeros(), grid.zeros())

    @classmethod
    def from_arrays(cls, grid: Grid, x, y) -> "PairFunction":
        return cls(GridFunction(grid, x), GridFunction(grid, y))

    def __iter__(self):
        yield self.first
        yield self.second

    def __getitem__(self, i: int) -> GridFunction:
        return (self.first, self.second)[i]

    def _zip(self, other, op):
        if isinstance(other, PairFunction):
            return PairFunction(op(self.first, other.first), op(self.second, other.second))
        return PairFunction(op(self.first, other), op(self.second, other))

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __mul__(self, other):
        """Componentwise (algebra) product, or scaling by a real."""
        return self._zip(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return PairFunction(-self.first, -self.second)

    def norm(self) -> OrderedVector:
        return pair_norm(self)

    def resample(self, grid: Grid) -> "PairFunction":
        return PairFunction(self.first.resample(grid), self.second.resample(grid))

    def as_array(self) -> np.ndarray:
        return np.vstack([self.first.samples, self.second.samples])


def pair_norm(p: PairFunction) -> OrderedVector:
    return OrderedVector([sup_norm(p.first), sup_norm(p.second)])
