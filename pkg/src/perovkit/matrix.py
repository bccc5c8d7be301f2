"""Nonnegative matrices, spectral radius and the componentwise order on R^n_+.

Everything the Perov machinery needs from linear algebra lives here: a matrix
``M`` converges to zero iff its spectral radius is < 1, iff ``M^k -> 0``, iff
``I - M`` is invertible with a nonnegative inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotConvergent

POWER_RTOL = 1e-12
POWER_MAX_ITER = 2_000
SHIFT_EPS = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class NonnegMatrix:
    """Square matrix with finite nonnegative entries (a Lipschitz matrix)."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.entries, dtype=float))
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        if np.any(a < 0):
            raise ValueError("matrix entries must be nonnegative")
        object.__setattr__(self, "entries", _frozen(a))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def zeros(cls, n: int) -> "NonnegMatrix":
        return cls(np.zeros((n, n)))

    @classmethod
    def identity(cls, n: int) -> "NonnegMatrix":
        return cls(np.eye(n))

    def __array__(self, dtype=None, copy=None):
        return np.array(self.entries, dtype=dtype)

    def __matmul__(self, other):
        if isinstance(other, OrderedVector):
            if other.n != self.n:
                raise DimensionMismatch(f"{self.n}x{self.n} matrix times {other.n}-vector")
            return OrderedVector(self.entries @ other.values)
        if isinstance(other, NonnegMatrix):
            if other.n != self.n:
                raise DimensionMismatch("matrix sizes differ")
            return NonnegMatrix(self.entries @ other.entries)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, NonnegMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(
            np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash(self.entries.tobytes())

    def tolist(self) -> list:
        return self.entries.tolist()


@dataclass(frozen=True, eq=False)
class OrderedVector:
    """Element of R^n with the componentwise partial order."""

    values: np.ndarray

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=float))
        if v.ndim != 1 or v.size < 1:
            raise DimensionMismatch(f"expected a 1-d vector, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("vector entries must be finite")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def n(self) -> int:
        return self.values.size

    @classmethod
    def full(cls, n: int, value: float) -> "OrderedVector":
        return cls(np.full(n, float(value)))

    def __array__(self, dtype=None, copy=None):
        return np.array(self.values, dtype=dtype)

    def __iter__(self):
        return iter(self.values.tolist())

    def __getitem__(self, i):
        return float(self.values[i])

    def __len__(self):
        return self.n

    def __le__(self, other):
        return vec_leq(self, other)

    def __ge__(self, other):
        return vec_leq(other, self)

    def __eq__(self, other):
        if not isinstance(other, OrderedVector):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash(self.values.tobytes())

    def __repr__(self):
        return f"OrderedVector({self.values.tolist()})"

    def is_nonnegative(self) -> bool:
        return bool(np.all(self.values >= 0))

    def max(self) -> float:
        return float(self.values.max())

    def tolist(self) -> list:
        return self.values.tolist()


def as_matrix(M) -> NonnegMatrix:
    return M if isinstance(M, NonnegMatrix) else NonnegMatrix(M)


def as_vector(v) -> OrderedVector:
    return v if isinstance(v, OrderedVector) else OrderedVector(v)


def vec_leq(a, b) -> bool:
    """Componentwise ``a <= b``."""
    a, b = as_vector(a), as_vector(b)
    if a.n != b.n:
        raise DimensionMismatch(f"cannot compare vectors of length {a.n} and {b.n}")
    return bool(np.all(a.values <= b.values))


def _radius_closed_form(a: np.ndarray) -> float:
    if a.shape[0] == 1:
        return abs(float(a[0, 0]))
    (p, q), (r, s) = a
    # bc >= 0 for nonnegative matrices, so both roots are real
    return float(0.5 * (p + s) + math.hypot(0.5 * (p - s), math.sqrt(q * r)))


def _power_iteration(a: np.ndarray, rtol: float, max_iter: int):
    """Perron root estimate; returns (value, converged).

    Uses Collatz-Wielandt bracketing while the iterate is positive and the
    change in the norm ratio otherwise.
    """
    v = np.ones(a.shape[0])
    lam_prev = None
    for _ in range(max_iter):
        w = a @ v
        wmax = w.max()
        if wmax == 0.0:
            return 0.0, True
        if np.all(v > 0) and np.all(w > 0):
            ratios = w / v
            lo, hi = ratios.min(), ratios.max()
            if hi - lo <= rtol * hi:
                return float(0.5 * (lo + hi)), True
        lam = wmax / v.max()
        if lam_prev is not None and abs(lam - lam_prev) <= rtol * lam:
            # ratio change alone can stall early on slowly mixing matrices,
            # so only trust it when the iterate is also an eigenvector
            if np.max(np.abs(w - lam * v)) <= 10 * rtol * wmax:
                return float(lam), True
        lam_prev = lam
        v = w / wmax
    return float(lam_prev if lam_prev is not None else 0.0), False


def spectral_radius(M) -> float:
    """Largest eigenvalue modulus of a nonnegative matrix.

    Closed form for n <= 2; power iteration from the all-ones vector for
    larger n, retried on ``M + eps*I`` when plain iteration stagnates.
    """
    a = as_matrix(M).entries
    if a.shape[0] <= 2:
        return _radius_closed_form(a)
    rho, ok = _power_iteration(a, POWER_RTOL, POWER_MAX_ITER)
    if ok:
        return rho
    shifted = a + SHIFT_EPS * np.eye(a.shape[0])
    rho, ok = _power_iteration(shifted, POWER_RTOL, POWER_MAX_ITER)
    if ok:
        return max(rho - SHIFT_EPS, 0.0)
    # periodic/defective leftovers: dense eigensolver as last resort
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def is_convergent_to_zero(M) -> bool:
    return spectral_radius(M) < 1.0


def neumann_inverse(M) -> NonnegMatrix:
    """``(I - M)^{-1}`` by a direct solve; requires rho(M) < 1."""
    m = as_matrix(M)
    rho = spectral_radius(m)
    if not rho < 1.0:
        raise NotConvergent(f"spectral radius {rho:.6g} >= 1: I - M has no nonnegative inverse", rho)
    n = m.n
    inv = np.linalg.solve(np.eye(n) - m.entries, np.eye(n))
    # exact inverse is entrywise >= 0; clip rounding noise only
    if np.any(inv < -1e-12 * max(1.0, np.abs(inv).max())):
        raise NotConvergent("computed inverse has negative entries", rho)
    return NonnegMatrix(np.clip(inv, 0.0, None))


def neumann_series(M, K: int) -> np.ndarray:
    """Truncated series sum_{k=0}^{K} M^k (test oracle for ``neumann_inverse``)."""
    a = as_matrix(M).entries
    term = np.eye(a.shape[0])
    total = term.copy()
    for _ in range(K):
        term = term @ a
        total += term
    return total


def power_vanishes(M, K: int, tol: float) -> bool:
    """True iff every entry of ``M^K`` is below ``tol``."""
    if K < 1 or tol <= 0:
        raise ValueError("need K >= 1 and tol > 0")
    a = as_matrix(M).entries
    with np.errstate(over="ignore", invalid="ignore"):
        pk = np.linalg.matrix_power(a, K)
    return bool(np.all(np.isfinite(pk)) and pk.max() < tol)
