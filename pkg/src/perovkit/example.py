"""The worked example: a coupled pair of quadratic fractional integral equations.

    x = f_1 . I^{1/2} g_1 + I^{1/3} h_1^1 + I^{10/3} h_1^2
    y = f_2 . I^{1/2} g_2 + I^{7/4} h_2^1 + I^{29/6} h_2^2

on J = [0, 1], with the constants claimed for it (``a``, ``b``, ``P = 1/4``,
``F0 = 1/36``, ``H0 = 2/25``, ``r0 = 2``).
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .grid import Grid
from .hybrid import HybridProblem
from .hypotheses import ProblemSpec, build_B_bound, build_MA, build_MC
from .system import FractionalSystem

PI = np.pi

# published diagonal of ||B(S)|| M_A + M_C, rounded to 4 places
PUBLISHED_COMBINED_DIAGONAL = (0.0990, 0.0653)


def f1(t, x, y):
    return (3 * np.cos(PI * t) + 2 * t) / (5 * (2 + 10 * t**2) * (np.abs(x) + 3))


def f2(t, x, y):
    return (4 * np.cos(PI * t) + 3 * t) / (7 * (3 + 8 * t**2) * (np.abs(y) + 6))


def g(t, x, y):
    return 3 / (35 * (13 - t**2)) * (7 * np.abs(x) + 15 * np.abs(y))


def h11(t, x, y):
    ax = np.abs(x)
    return 2 * t * np.exp(-3 * t) / (15 * (3 + t)) * ((x**2 + 9 * ax) / (ax + 5) + 12 * np.exp(3 * t) / 5)


def h12(t, x, y):
    ax = np.abs(x)
    return 2 * t * np.sin(PI * t) / (14 + t**2) * ((x**2 + 5 * ax) / (ax + 8) + 1 / 3)


def h21(t, x, y):
    ay = np.abs(y)
    return t * np.sin(t) / (7 * (4 + np.exp(t))) * ((y**2 + 4 * ay) / (ay + 3) + np.cos(t))


def h22(t, x, y):
    ay = np.abs(y)
    return 3 * t * np.cos(t) / (10 * (4 - t**2)) * ((y**2 + 5 * ay) / (ay + 4) + t / (t + 2))


ALPHA = (Fraction(1, 2), Fraction(1, 2))
BETAS = ((Fraction(1, 3), Fraction(7, 4)), (Fraction(10, 3), Fraction(29, 6)))


def builtin_system() -> FractionalSystem:
    return FractionalSystem(
        f=(f1, f2),
        g=(g, g),
        h=((h11, h21), (h12, h22)),
        alpha=ALPHA,
        betas=BETAS,
    )


def builtin_spec() -> ProblemSpec:
    return ProblemSpec(
        alpha=ALPHA,
        betas=BETAS,
        T=1.0,
        a=((1 / 12, 0.0), (0.0, 1 / 6)),
        b=(
            ((3 / 50, 0.0), (0.0, 4 / (21 * (4 + math.e)))),
            ((1 / 12, 0.0), (0.0, 1 / 8)),
        ),
        P=1 / 4,
        F0=1 / 36,
        H0=2 / 25,
        r0=2.0,
        rho=1 / 6,
        reference={"combined_diagonal": list(PUBLISHED_COMBINED_DIAGONAL)},
    )


def build_problem(system: FractionalSystem, spec: ProblemSpec, grid: Grid, a_min: float = 1e-8) -> HybridProblem:
    A, B, C = system.operators(grid)
    return HybridProblem(A, B, C, build_MA(spec), build_MC(spec), build_B_bound(spec), spec.r0, a_min)


def builtin_example(N: int = 1024, a_min: float = 1e-8):
    """The example's ``(ProblemSpec, HybridProblem)`` on a uniform grid of ``N`` cells."""
    spec = builtin_spec()
    return spec, build_problem(builtin_system(), spec, Grid(spec.T, N), a_min)
