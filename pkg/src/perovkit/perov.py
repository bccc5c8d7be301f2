"""Perov fixed-point iteration under a matrix Lipschitz certificate.

If ``||Tx - Ty|| <= M ||x - y||`` componentwise with ``rho(M) < 1`` then
Picard iterates converge and, with ``d_k = ||x_{k+1} - x_k||``,

    ||x_k - x*|| <= (I - M)^{-1} d_k

componentwise. That bound also covers ``x_{k+1}`` (it is smaller by a factor
of ``M``), which is the point returned.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DegenerateSamples, DivergenceDetected, MaxIterationsExceeded, NotConvergentMatrix
from .grid import Grid, PairFunction, pair_norm
from .matrix import NonnegMatrix, OrderedVector, as_matrix, as_vector, neumann_inverse, spectral_radius

log = logging.getLogger(__name__)

DIVERGENCE_FACTOR = 10.0
DIVERGENCE_WINDOW = 5


@dataclass(frozen=True)
class ContractionCertificate:
    M: NonnegMatrix
    verified: bool = False

    def __post_init__(self):
        object.__setattr__(self, "M", as_matrix(self.M))


@dataclass
class FixedPointResult:
    point: PairFunction
    iterations: int
    step_norms: list = field(default_factory=list)
    error_bound: Optional[OrderedVector] = None
    converged: bool = False
    # outer-iteration extras
    residuals: list = field(default_factory=list)
    left_ball: bool = False
    damping: float = 1.0


def perov_iterate(
    T: Callable,
    x0,
    cert: ContractionCertificate,
    tol,
    max_iter: int = 500,
    norm: Callable = pair_norm,
    callback: Optional[Callable] = None,
) -> FixedPointResult:
    """Picard iteration ``x_{k+1} = T(x_k)`` stopped by a componentwise step test.

    ``callback(k, x_k, x_next, step, bound)`` is invoked after every step, where
    ``bound`` is the a-posteriori bound on ``||x_k - x*||``.
    """
    M = cert.M
    rho = spectral_radius(M)
    if not rho < 1.0:
        raise NotConvergentMatrix(f"certificate has spectral radius {rho:.6g} >= 1", rho)
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    tol = as_vector(tol) if not np.isscalar(tol) else OrderedVector.full(M.n, tol)
    if tol.n != M.n or np.any(tol.values <= 0):
        raise ValueError("tol must be a positive vector matching the certificate size")
    inv = neumann_inverse(M)

    x = x0
    steps: list[OrderedVector] = []
    best = (np.inf, x0, None)
    for k in range(max_iter):
        x_next = T(x)
        step = norm(x_next - x)
        bound = inv @ step
        steps.append(step)
        if callback is not None:
            callback(k, x, x_next, step, bound)
        if step.max() < best[0]:
            best = (step.max(), x_next, bound)
        if step <= tol:
            return FixedPointResult(x_next, k + 1, steps, bound, True)
        if len(steps) > DIVERGENCE_WINDOW:
            old = steps[-1 - DIVERGENCE_WINDOW].values
            grown = (old > 0) & (step.values > DIVERGENCE_FACTOR * old)
            if np.any(grown):
                res = FixedPointResult(best[1], k + 1, steps, best[2], False)
                raise DivergenceDetected(
                    f"step norm grew by more than {DIVERGENCE_FACTOR}x over "
                    f"{DIVERGENCE_WINDOW} iterations (now {step.tolist()})",
                    res,
                )
        x = x_next
    res = FixedPointResult(best[1], max_iter, steps, best[2], False)
    raise MaxIterationsExceeded(f"no convergence in {max_iter} iterations; last step {steps[-1].tolist()}", res)


def estimate_lipschitz(T: Callable, samples: Sequence, norm: Callable = pair_norm) -> NonnegMatrix:
    """Smallest matrix consistent with the sampled difference quotients.

    Every sample ``(u, v)`` must differ in exactly one component ``j``; it then
    bounds column ``j`` from below by ``||Tu - Tv||_i / ||u - v||_j``.
    """
    if len(samples) < 2:
        raise DegenerateSamples("need at least two sample pairs")
    est = None
    for u, v in samples:
        d = norm(u - v).values
        if not np.any(d > 0):
            raise DegenerateSamples("sample pair has coincident points")
        moved = np.flatnonzero(d > 0)
        if moved.size != 1:
            raise ValueError("each sample pair must vary exactly one component")
        j = moved[0]
        if est is None:
            est = np.zeros((d.size, d.size))
        q = norm(T(u) - T(v)).values / d[j]
        est[:, j] = np.maximum(est[:, j], q)
    return NonnegMatrix(est)


def _random_function(grid: Grid, radius: float, rng: np.random.Generator) -> np.ndarray:
    amp = radius * rng.uniform(0.0, 1.0)
    if rng.uniform() < 0.5:
        return amp * rng.uniform(-1.0, 1.0, grid.N + 1)
    t = grid.nodes / grid.T
    coef = rng.normal(size=4)
    smooth = sum(c * np.cos(np.pi * k * t) for k, c in enumerate(coef))
    return amp * smooth / max(np.abs(smooth).max(), 1e-300)


def random_pair(grid: Grid, radius: float, rng: np.random.Generator) -> PairFunction:
    """Random element of the ball ``||(x, y)|| <= (radius, radius)``."""
    return PairFunction.from_arrays(
        grid, _random_function(grid, radius, rng), _random_function(grid, radius, rng)
    )


def sample_pairs(grid: Grid, radius: float, count: int, rng: np.random.Generator) -> list:
    """Pairs in the ball differing in one component, alternating which one.

    Half the perturbations are a fresh random function, half a small
    nudge, so both global and local sensitivities are probed.
    """
    out = []
    while len(out) < count:
        j = len(out) % 2
        u = random_pair(grid, radius, rng)
        comp = u[j].samples
        if rng.uniform() < 0.5:
            new = _random_function(grid, radius, rng)
        else:
            scale = 10.0 ** rng.uniform(-6, -1) * radius
            new = np.clip(comp + scale * rng.uniform(-1, 1, grid.N + 1), -radius, radius)
        if np.array_equal(new, comp):
            continue
        parts = [u.first.samples, u.second.samples]
        parts[j] = new
        out.append((u, PairFunction.from_arrays(grid, *parts)))
    return out
