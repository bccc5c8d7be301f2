"""Perov-type fixed-point machinery for hybrid equations ``x = Ax . Bx + Cx``."""

from .errors import (
    ConditionViolated,
    DegenerateSamples,
    DimensionMismatch,
    DivergenceDetected,
    DomainError,
    GridMismatch,
    MaxIterationsExceeded,
    NoConvergence,
    NotConvergent,
    NotConvergentMatrix,
    RadiusExceeded,
    RegularityViolation,
)
from .fractional import FracOrder, RLWeights, gamma, rl_integral, rl_weights
from .grid import Grid, GridFunction, PairFunction, add, multiply, pair_norm, scale, sup_norm
from .hybrid import HybridProblem, combined_matrix, inner_solve, outer_solve, residual
from .hypotheses import (
    ProblemSpec,
    TheoremReport,
    audit,
    build_B_bound,
    build_MA,
    build_MC,
    full_report,
    r0_min,
    rho_condition,
)
from .matrix import (
    NonnegMatrix,
    OrderedVector,
    is_convergent_to_zero,
    neumann_inverse,
    power_vanishes,
    spectral_radius,
    vec_leq,
)
from .perov import ContractionCertificate, FixedPointResult, estimate_lipschitz, perov_iterate

__version__ = "0.1.0"
