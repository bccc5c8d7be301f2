"""Hybrid operator equations ``x = Ax . Bx + Cx`` on pairs of grid functions.

For a frozen ``y`` the map ``phi_y(x) = Ax . By + Cx`` is a Perov contraction
with Lipschitz matrix ``||B(S)|| M_A + M_C``; its fixed point ``x_y`` realises
``((I - C)/A)^{-1} B y`` without ever dividing by ``A``. The full equation is
then solved by (optionally damped) iteration ``y <- x_y`` and accepted on the
residual only.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    MaxIterationsExceeded,
    NoConvergence,
    NotConvergentMatrix,
    RadiusExceeded,
    RegularityViolation,
)
from .grid import PairFunction, pair_norm
from .matrix import NonnegMatrix, OrderedVector, as_matrix, as_vector, spectral_radius
from .perov import ContractionCertificate, FixedPointResult, perov_iterate

log = logging.getLogger(__name__)

Operator = Callable[[PairFunction], PairFunction]

DAMPING = (1.0, 0.5, 0.25)


def combined_matrix(M_A, M_C, b) -> NonnegMatrix:
    """Entry ``(i, j)`` is ``b_j * M_A[i, j] + M_C[i, j]``."""
    M_A, M_C, b = as_matrix(M_A), as_matrix(M_C), as_vector(b)
    if not (M_A.n == M_C.n == b.n):
        raise DimensionMismatch(f"sizes differ: M_A {M_A.n}, M_C {M_C.n}, b {b.n}")
    return NonnegMatrix(M_A.entries * b.values[None, :] + M_C.entries)


@dataclass(frozen=True)
class HybridProblem:
    A: Operator
    B: Operator
    C: Operator
    M_A: NonnegMatrix
    M_C: NonnegMatrix
    B_norm_bound: OrderedVector
    r0: float
    a_min: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "M_A", as_matrix(self.M_A))
        object.__setattr__(self, "M_C", as_matrix(self.M_C))
        object.__setattr__(self, "B_norm_bound", as_vector(self.B_norm_bound))
        if not self.r0 > 0:
            raise ValueError("r0 must be positive")

    @property
    def combined(self) -> NonnegMatrix:
        return combined_matrix(self.M_A, self.M_C, self.B_norm_bound)

    def in_ball(self, x: PairFunction, slack: float = 0.0) -> bool:
        return bool(np.all(pair_norm(x).values <= self.r0 + slack))


def _regular_A(p: HybridProblem, x: PairFunction) -> PairFunction:
    Ax = p.A(x)
    low = min(np.abs(Ax.first.samples).min(), np.abs(Ax.second.samples).min())
    if low < p.a_min:
        raise RegularityViolation(f"min |A_i| = {low:.3g} fell below a_min = {p.a_min:g}", low)
    return Ax


def residual(p: HybridProblem, x: PairFunction) -> OrderedVector:
    return pair_norm(x - (p.A(x) * p.B(x) + p.C(x)))


def inner_solve(
    p: HybridProblem,
    y: PairFunction,
    x_init: Optional[PairFunction] = None,
    tol=1e-8,
    max_iter: int = 500,
) -> FixedPointResult:
    """Unique fixed point of ``x -> Ax . By + Cx`` for fixed ``y``."""
    cert = ContractionCertificate(p.combined)
    rho = spectral_radius(cert.M)
    if not rho < 1.0:
        raise NotConvergentMatrix(f"||B(S)|| M_A + M_C has spectral radius {rho:.6g} >= 1", rho)
    By = p.B(y)

    def phi(x):
        return _regular_A(p, x) * By + p.C(x)

    res = perov_iterate(phi, y if x_init is None else x_init, cert, tol, max_iter)
    _regular_A(p, res.point)
    return res


def outer_solve(
    p: HybridProblem,
    start: PairFunction,
    tol=1e-6,
    max_outer: int = 200,
    inner_tol=1e-8,
    stall_window: int = 20,
) -> FixedPointResult:
    """Damped Picard iteration on ``y -> x_y`` accepted by residual.

    Plain iteration is tried first; if the residual grows or stalls the
    run restarts from ``start`` with damping 1/2, then 1/4.
    """
    tol = as_vector(tol) if not np.isscalar(tol) else OrderedVector.full(2, tol)
    best_overall: Optional[FixedPointResult] = None

    for lam in DAMPING:
        y = start
        residuals: list[OrderedVector] = []
        steps: list[OrderedVector] = []
        left = False
        best = (np.inf, start)
        for k in range(max_outer + 1):
            r = residual(p, y)
            residuals.append(r)
            if not p.in_ball(y):
                left = True
            if r.max() < best[0]:
                best = (r.max(), y)
            if r <= tol:
                if left:
                    warnings.warn(f"outer iterates left the r0 = {p.r0} ball", RadiusExceeded)
                log.info("outer solve converged: %d iterations, damping %g", k, lam)
                return FixedPointResult(y, k, steps, None, True, residuals, left, lam)
            if k == max_outer:
                break
            if r.max() > 10 * best[0] or (
                len(residuals) > stall_window
                and residuals[-1].max() >= residuals[-1 - stall_window].max()
            ):
                log.info("damping %g: residual grew or stalled at iteration %d", lam, k)
                break
            try:
                x = inner_solve(p, y, x_init=y, tol=inner_tol).point
            except MaxIterationsExceeded as exc:
                log.info("damping %g: inner solve failed (%s)", lam, exc)
                break
            if not p.in_ball(x):
                left = True
            y_new = x if lam == 1.0 else (1.0 - lam) * y + lam * x
            steps.append(pair_norm(y_new - y))
            y = y_new
        run = FixedPointResult(best[1], len(residuals) - 1, steps, None, False, residuals, left, lam)
        if best_overall is None or best[0] < min(r.max() for r in best_overall.residuals):
            best_overall = run

    best_r = min(r.max() for r in best_overall.residuals)
    raise NoConvergence(f"outer iteration failed for every damping; best residual {best_r:.3g}", best_r, best_overall)
