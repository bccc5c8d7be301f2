"""Checkable hypotheses of the existence theorem for coupled fractional systems.

Given the claimed constants (orders, Lipschitz constants of ``f_i`` and
``h_i^k``, the bound ``P`` on ``|g_i|``, ``F0``, ``H0`` and ``r0``) this module
assembles ``M_A``, ``M_C``, ``||B(S)||`` and the combined matrix, evaluates the
rho-condition and the admissible-radius bound, and collects everything in a
``TheoremReport``. ``audit`` then challenges the claimed constants by sampling
the actual functions.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import ConditionViolated
from .fractional import as_order, unit_bound
from .grid import Grid
from .hybrid import combined_matrix
from .matrix import NonnegMatrix, OrderedVector, spectral_radius
from .perov import estimate_lipschitz, sample_pairs
from .system import FractionalSystem, evaluate_at_zero

# a published value rounded to 4 decimals is off by at most half a unit
ROUNDING_SLACK = 5e-5
# sampled quotients from tiny perturbations carry ~1e-10 relative rounding
AUDIT_RTOL = 1e-8


def _num(v) -> float:
    if isinstance(v, str):
        return float(Fraction(v))
    return float(v)


@dataclass(frozen=True)
class ProblemSpec:
    alpha: tuple  # (alpha_1, alpha_2)
    betas: tuple  # betas[k][i] = beta_i^{k+1}
    T: float
    a: tuple  # a[i][j]
    b: tuple  # b[k][i][j]
    P: float
    F0: float
    H0: float
    r0: float
    rho: Optional[float] = None  # None: max over a and b
    reference: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)
        set_("alpha", tuple(as_order(x) for x in self.alpha))
        set_("betas", tuple(tuple(as_order(x) for x in row) for row in self.betas))
        set_("a", tuple(tuple(_num(x) for x in row) for row in self.a))
        set_("b", tuple(tuple(tuple(_num(x) for x in row) for row in mat) for mat in self.b))
        for name in ("T", "P", "F0", "H0", "r0"):
            set_(name, _num(getattr(self, name)))
        if self.rho is not None:
            set_("rho", _num(self.rho))
        n = len(self.alpha)
        if np.shape(self.a) != (n, n):
            raise ValueError(f"a must be {n}x{n}")
        if len(self.betas) != len(self.b) or any(len(r) != n for r in self.betas):
            raise ValueError("betas must be m x n with m matching b")
        if self.b and np.shape(self.b) != (len(self.b), n, n):
            raise ValueError(f"b must be m x {n} x {n}")
        if not (self.T > 0 and self.r0 > 0):
            raise ValueError("T and r0 must be positive")
        consts = [self.P, self.F0, self.H0, *np.ravel(self.a), *np.ravel(self.b)]
        if self.rho is not None:
            consts.append(self.rho)
        if any(c < 0 for c in consts):
            raise ValueError("P, Lipschitz constants, F0, H0 and rho must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def m(self) -> int:
        return len(self.betas)

    @property
    def effective_rho(self) -> float:
        if self.rho is not None:
            return self.rho
        return float(max([0.0, *np.ravel(self.a), *np.ravel(self.b)]))

    def to_dict(self) -> dict:
        d = {
            "alpha": [o.alpha for o in self.alpha],
            "betas": [[o.alpha for o in row] for row in self.betas],
            "T": self.T,
            "a": [list(r) for r in self.a],
            "b": [[list(r) for r in mat] for mat in self.b],
            "P": self.P,
            "F0": self.F0,
            "H0": self.H0,
            "r0": self.r0,
            "rho": self.rho,
        }
        if self.reference:
            d["reference"] = self.reference
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ProblemSpec":
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(d) - known - {"problem"}
        if extra:
            raise ValueError(f"unknown spec keys: {sorted(extra)}")
        return cls(**{k: v for k, v in d.items() if k in known})

    def replace(self, **kw) -> "ProblemSpec":
        return dataclasses.replace(self, **kw)


def build_MA(spec: ProblemSpec) -> NonnegMatrix:
    return NonnegMatrix(np.array(spec.a, dtype=float))


def build_MC(spec: ProblemSpec) -> NonnegMatrix:
    """Row ``i`` is ``sum_k T^{beta_i^k} / Gamma(beta_i^k + 1) * b^k[i, :]``."""
    mc = np.zeros((spec.n, spec.n))
    for row, mat in zip(spec.betas, spec.b):
        w = np.array([unit_bound(beta, spec.T) for beta in row])
        mc += w[:, None] * np.array(mat)
    return NonnegMatrix(mc)


def build_B_bound(spec: ProblemSpec) -> OrderedVector:
    """Componentwise bound ``P T^{alpha_i} / Gamma(alpha_i + 1)`` on ``||B(S)||``."""
    return OrderedVector([spec.P * unit_bound(a, spec.T) for a in spec.alpha])


def _alpha_sum(spec: ProblemSpec) -> float:
    return sum(unit_bound(a, spec.T) for a in spec.alpha)


def _beta_sum(spec: ProblemSpec) -> float:
    return sum(unit_bound(b, spec.T) for row in spec.betas for b in row)


def rho_condition(spec: ProblemSpec) -> float:
    return spec.effective_rho * (spec.P * _alpha_sum(spec) + _beta_sum(spec))


def r0_min(spec: ProblemSpec) -> float:
    denom = 1.0 - rho_condition(spec)
    if not denom > 0:
        raise ConditionViolated(f"rho-condition value {1.0 - denom:.6g} >= 1: no admissible radius")
    return (spec.F0 * spec.P * _alpha_sum(spec) + spec.H0 * _beta_sum(spec)) / denom


@dataclass
class TheoremReport:
    M_A: NonnegMatrix
    M_C: NonnegMatrix
    combined: NonnegMatrix
    B_norm_bound: OrderedVector
    rho: float
    rho_condition_value: float
    rho_condition_pass: bool
    spectral_radii: dict
    matrices_converge: dict
    r0: float
    r0_min: Optional[float]
    r0_pass: bool
    overall_pass: bool
    failed_checks: list
    discrepancies: list

    def to_dict(self) -> dict:
        return {
            "M_A": self.M_A.tolist(),
            "M_C": self.M_C.tolist(),
            "combined": self.combined.tolist(),
            "B_norm_bound": self.B_norm_bound.tolist(),
            "rho": self.rho,
            "rho_condition_value": self.rho_condition_value,
            "rho_condition_pass": self.rho_condition_pass,
            "spectral_radii": dict(self.spectral_radii),
            "matrices_converge": dict(self.matrices_converge),
            "r0": self.r0,
            "r0_min": self.r0_min,
            "r0_pass": self.r0_pass,
            "overall_pass": self.overall_pass,
            "failed_checks": list(self.failed_checks),
            "discrepancies": list(self.discrepancies),
        }

    def summary(self) -> str:
        fmt = lambda M: "[" + ", ".join("[" + ", ".join(f"{v:.6f}" for v in r) + "]" for r in M.tolist()) + "]"
        lines = [
            f"M_A                = {fmt(self.M_A)}   rho = {self.spectral_radii['M_A']:.6f}",
            f"M_C                = {fmt(self.M_C)}   rho = {self.spectral_radii['M_C']:.6f}",
            f"||B(S)||           = {[round(v, 6) for v in self.B_norm_bound]}",
            f"||B(S)||M_A + M_C  = {fmt(self.combined)}   rho = {self.spectral_radii['combined']:.6f}",
            f"rho-condition      = {self.rho_condition_value:.6f}  ({'pass' if self.rho_condition_pass else 'FAIL'})",
            "r0_min             = "
            + ("n/a" if self.r0_min is None else f"{self.r0_min:.6f}")
            + f" <= r0 = {self.r0:g}  ({'pass' if self.r0_pass else 'FAIL'})",
            f"overall            : {'PASS' if self.overall_pass else 'FAIL ' + ', '.join(self.failed_checks)}",
        ]
        lines += [f"note: {d}" for d in self.discrepancies]
        return "\n".join(lines)


def _reference_notes(spec: ProblemSpec, combined: NonnegMatrix) -> list:
    notes = []
    ref = spec.reference.get("combined_diagonal")
    if ref is not None:
        for i, published in enumerate(ref):
            got = float(combined.entries[i, i])
            if abs(got - published) > ROUNDING_SLACK:
                notes.append(
                    f"combined[{i},{i}] = {got:.6f} differs from published {published:.4f} by {abs(got - published):.1e}"
                )
    return notes


def full_report(spec: ProblemSpec) -> TheoremReport:
    M_A, M_C, b = build_MA(spec), build_MC(spec), build_B_bound(spec)
    comb = combined_matrix(M_A, M_C, b)
    radii = {"M_A": spectral_radius(M_A), "M_C": spectral_radius(M_C), "combined": spectral_radius(comb)}
    conv = {k: v < 1.0 for k, v in radii.items()}
    rc = rho_condition(spec)
    rc_pass = rc < 1.0
    try:
        rmin = r0_min(spec)
    except ConditionViolated:
        rmin = None
    r0_pass = rmin is not None and rmin <= spec.r0

    failed = []
    if not rc_pass:
        failed.append("rho_condition")
    failed += [f"{k}_convergent" for k, ok in conv.items() if not ok]
    if not r0_pass:
        failed.append("r0_admissible")
    return TheoremReport(
        M_A, M_C, comb, b, spec.effective_rho, rc, rc_pass, radii, conv,
        spec.r0, rmin, r0_pass, not failed, failed, _reference_notes(spec, comb),
    )


# --------------------------------------------------------------------------
# sampling audit of the claimed constants


@dataclass
class AuditReport:
    seed: int
    samples: int
    grid_N: int
    sampled_M_A: NonnegMatrix
    sampled_M_C: NonnegMatrix
    lipschitz_violations: list
    sampled_rho: float
    rho_ok: bool
    F0_grid: float
    H0_grid: float
    P_sampled: float
    min_abs_A: float
    A_regular_on_grid: bool
    sign_changes: list
    audited: TheoremReport
    discrepancies: list

    @property
    def passed(self) -> bool:
        return self.failed_checks == []

    @property
    def failed_checks(self) -> list:
        failed = []
        if self.lipschitz_violations:
            failed.append("lipschitz_audit")
        if not self.rho_ok:
            failed.append("rho_audit")
        if not self.A_regular_on_grid:
            failed.append("A_regularity")
        if not self.audited.overall_pass:
            failed.append("audited_conditions")
        return failed

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "grid_N": self.grid_N,
            "sampled_M_A": self.sampled_M_A.tolist(),
            "sampled_M_C": self.sampled_M_C.tolist(),
            "lipschitz_violations": list(self.lipschitz_violations),
            "sampled_rho": self.sampled_rho,
            "rho_ok": self.rho_ok,
            "F0_grid": self.F0_grid,
            "H0_grid": self.H0_grid,
            "P_sampled": self.P_sampled,
            "min_abs_A": self.min_abs_A,
            "A_regular_on_grid": self.A_regular_on_grid,
            "sign_changes": list(self.sign_changes),
            "audited_report": self.audited.to_dict(),
            "discrepancies": list(self.discrepancies),
            "passed": self.passed,
            "failed_checks": self.failed_checks,
        }

    def summary(self) -> str:
        fmt = lambda M: "[" + ", ".join("[" + ", ".join(f"{v:.6f}" for v in r) + "]" for r in M.tolist()) + "]"
        lines = [
            f"sampled M_A        = {fmt(self.sampled_M_A)}",
            f"sampled M_C        = {fmt(self.sampled_M_C)}",
            f"sampled rho        = {self.sampled_rho:.6f}  ({'ok' if self.rho_ok else 'EXCEEDS claim'})",
            f"F0 (grid)          = {self.F0_grid:.6f}   H0 (grid) = {self.H0_grid:.6f}",
            f"sup |g_i| on ball  = {self.P_sampled:.6f}",
            f"min |A_i| on ball  = {self.min_abs_A:.3e}",
            f"audited conditions : {'PASS' if self.audited.overall_pass else 'FAIL'}"
            f" (rho-condition {self.audited.rho_condition_value:.6f},"
            f" r0_min {self.audited.r0_min if self.audited.r0_min is None else round(self.audited.r0_min, 6)})",
            f"audit              : {'PASS' if self.passed else 'FAIL ' + ', '.join(self.failed_checks)}",
        ]
        lines += [f"violation: {v}" for v in self.lipschitz_violations]
        lines += [f"note: {d}" for d in self.discrepancies]
        return "\n".join(lines)


def pointwise_lipschitz(fn, arg: int, T: float, radius: float, rng: np.random.Generator, count: int = 20000) -> float:
    """Largest sampled quotient ``|fn(t, .) - fn(t, .')| / |delta|`` in argument ``arg`` (0 = x, 1 = y)."""
    t = rng.uniform(0.0, T, count)
    u = rng.uniform(-radius, radius, (2, count))
    delta = np.where(
        rng.uniform(size=count) < 0.5,
        rng.uniform(-2 * radius, 2 * radius, count),
        10.0 ** rng.uniform(-7, -1, count) * rng.choice([-1.0, 1.0], count),
    )
    v = u.copy()
    v[arg] = np.clip(u[arg] + delta, -radius, radius)
    d = np.abs(v[arg] - u[arg])
    keep = d > 1e-9
    q = np.abs(fn(t, v[0], v[1]) - fn(t, u[0], u[1]))[keep] / d[keep]
    return float(q.max()) if q.size else 0.0


def _sign_change_intervals(values: np.ndarray, t: np.ndarray) -> list:
    s = np.sign(values)
    idx = np.flatnonzero((s[:-1] * s[1:] <= 0) & ((s[:-1] != 0) | (s[1:] != 0)))
    return [[float(t[j]), float(t[j + 1])] for j in idx]


def audit(
    system: FractionalSystem,
    spec: ProblemSpec,
    grid: Grid,
    samples: int = 500,
    seed: int = 0,
    regularity_samples: int = 1000,
    a_min: float = 1e-8,
) -> AuditReport:
    """Challenge the claimed constants of ``spec`` against ``system`` by sampling.

    Sampling only yields lower bounds: a claimed constant below a sampled
    quotient is refuted, one above it is merely not contradicted.
    """
    rng = np.random.default_rng(seed)
    r0 = spec.r0
    A, _, C = system.operators(grid)
    pairs = sample_pairs(grid, r0, samples, rng)
    MA_hat = estimate_lipschitz(A, pairs)
    MC_hat = estimate_lipschitz(C, pairs)
    MA, MC = build_MA(spec), build_MC(spec)

    violations = []
    for name, hat, claim in (("M_A", MA_hat, MA), ("M_C", MC_hat, MC)):
        for (i, j), v in np.ndenumerate(hat.entries):
            if v > claim.entries[i, j] * (1 + AUDIT_RTOL):
                violations.append(f"{name}[{i},{j}]: sampled {v:.6g} > claimed {claim.entries[i, j]:.6g}")

    # pointwise constants behind rho
    point = [pointwise_lipschitz(fi, j, spec.T, r0, rng) for fi in system.f for j in (0, 1)]
    point += [pointwise_lipschitz(h, j, spec.T, r0, rng) for row in system.h for h in row for j in (0, 1)]
    sampled_rho = max(point)
    rho_ok = sampled_rho <= spec.effective_rho * (1 + AUDIT_RTOL)

    t = grid.nodes
    F0_grid = max(f.sup() for f in evaluate_at_zero(system.f, grid))
    H0_grid = max(h.sup() for h in evaluate_at_zero([h for row in system.h for h in row], grid))

    side = np.linspace(-r0, r0, 41)
    gx, gy = np.meshgrid(side, side)
    P_sampled = 0.0
    for gi in system.g:
        vals = gi(t[:, None], gx.ravel()[None, :], gy.ravel()[None, :])
        P_sampled = max(P_sampled, float(np.max(np.abs(vals))))

    xs = np.concatenate([[0.0, r0, -r0], rng.uniform(-r0, r0, regularity_samples)])
    ys = np.concatenate([[0.0, r0, -r0], rng.uniform(-r0, r0, regularity_samples)])
    min_abs_A = np.inf
    sign_changes = []
    for i, fi in enumerate(system.f):
        vals = np.broadcast_to(fi(t[:, None], xs[None, :], ys[None, :]), (t.size, xs.size))
        min_abs_A = min(min_abs_A, float(np.min(np.abs(vals))))
        for iv in _sign_change_intervals(vals[:, 0], t):
            sign_changes.append({"component": i, "t_interval": iv})

    notes = []
    if F0_grid > spec.F0 * (1 + 1e-12):
        notes.append(f"F0 on grid is {F0_grid:.6g}, above the claimed {spec.F0:.6g}")
    if H0_grid > spec.H0 * (1 + 1e-12):
        notes.append(f"H0 on grid is {H0_grid:.6g}, above the claimed {spec.H0:.6g}")
    if P_sampled > spec.P * (1 + 1e-12):
        notes.append(f"sup |g_i| over the r0 ball is {P_sampled:.6g}, above the claimed P = {spec.P:.6g}")
    for sc in sign_changes:
        lo, hi = sc["t_interval"]
        notes.append(
            f"f_{sc['component'] + 1}(t, 0, 0) changes sign in [{lo:.6g}, {hi:.6g}]:"
            " A is not regular in the continuous sense"
        )

    audited_spec = spec.replace(
        P=max(spec.P, P_sampled),
        F0=max(spec.F0, F0_grid),
        H0=max(spec.H0, H0_grid),
        rho=max(spec.effective_rho, sampled_rho),
        reference={},
    )
    return AuditReport(
        seed, samples, grid.N, MA_hat, MC_hat, violations, sampled_rho, rho_ok,
        F0_grid, H0_grid, P_sampled, min_abs_A, min_abs_A >= a_min, sign_changes,
        full_report(audited_spec), notes,
    )


def dumps(obj) -> str:
    """Deterministic JSON (sorted keys, repr floats: 17 significant digits)."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"
