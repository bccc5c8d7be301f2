"""Acceptance criteria, each at its stated tolerance.

Every test attaches its measured numbers through ``note``; the conftest hook
prints one PASS/FAIL line per criterion in the terminal summary.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from perovkit.example import builtin_example, builtin_spec, builtin_system
from perovkit.fractional import gamma, rl_integral
from perovkit.grid import Grid, PairFunction, pair_norm
from perovkit.hybrid import inner_solve, outer_solve, residual
from perovkit.hypotheses import audit, build_MC, full_report
from perovkit.matrix import is_convergent_to_zero, power_vanishes
from perovkit.perov import ContractionCertificate, perov_iterate, random_pair

ORDERS = (Fraction(1, 3), Fraction(1, 2), Fraction(7, 4), Fraction(10, 3), Fraction(29, 6))


def test_criterion_1_gamma_accuracy(note):
    t0 = time.perf_counter()
    half = abs(gamma(0.5) - math.sqrt(math.pi)) / math.sqrt(math.pi)
    fact = max(abs(gamma(n + 1) - math.factorial(n)) / math.factorial(n) for n in range(11))
    elapsed = time.perf_counter() - t0
    note(f"rel err gamma(1/2) {half:.1e}, max rel err n! {fact:.1e}, {elapsed * 1e3:.2f} ms")
    assert half <= 1e-12
    assert fact <= 1e-12
    assert elapsed < 0.1


def test_criterion_2_rl_exactness(note):
    grid = Grid(1.0, 256)
    t = grid.nodes
    t0 = time.perf_counter()
    worst = 0.0
    for a in ORDERS:
        a_f = float(a)
        e1 = np.max(np.abs(rl_integral(grid.constant(1.0), a).samples - t**a_f / math.gamma(a_f + 1)))
        e2 = np.max(np.abs(rl_integral(grid.sample(lambda s: s), a).samples - t ** (a_f + 1) / math.gamma(a_f + 2)))
        worst = max(worst, e1, e2)
    elapsed = time.perf_counter() - t0
    note(f"max node error {worst:.1e} over 5 orders, {elapsed:.3f} s")
    assert worst <= 1e-10
    assert elapsed < 1.0


def _random_nonneg(rng):
    n = int(rng.integers(2, 7))
    M = rng.uniform(0, 1, (n, n)) * (rng.uniform(size=(n, n)) < 0.7)
    r = np.max(np.abs(np.linalg.eigvals(M)))
    if r == 0:
        return M
    return M * rng.uniform(0.0, 2.0) / r


def test_criterion_3_lemma_equivalence(note):
    rng = np.random.default_rng(2024)
    agree = total = 0
    for _ in range(200):
        M = _random_nonneg(rng)
        rho = np.max(np.abs(np.linalg.eigvals(M)))
        if 0.95 <= rho <= 1.05:
            continue
        total += 1
        conv = is_convergent_to_zero(M)
        vanish = power_vanishes(M, 512, 1e-8)
        # (I - M)^{-1} computed independently, judged entrywise
        inv = np.linalg.inv(np.eye(len(M)) - M)
        inv_ok = bool(np.all(inv >= -1e-12 * np.max(np.abs(inv))))
        agree += conv == vanish == inv_ok
    note(f"{agree}/{total} agree (rho outside [0.95, 1.05])")
    assert total >= 150
    assert agree == total


def test_criterion_4_perov_linear_oracle(note):
    G = Grid(1.0, 64)
    M = np.array([[0.5, 0.0], [0.0, 0.5]])
    c = (G.sample(np.cos).samples, G.sample(lambda t: 1 + t**2).samples)
    x_star = np.linalg.solve(np.eye(2) - M, np.array(c))

    def T(p):
        return PairFunction.from_arrays(G, 0.5 * p.first.samples + c[0], 0.5 * p.second.samples + c[1])

    contained = []

    def check(k, x, x_next, step, bound):
        err = np.max(np.abs(x_next.as_array() - x_star), axis=1)
        contained.append(bool(np.all(err <= bound.values * (1 + 1e-12) + 1e-15)))

    res = perov_iterate(T, PairFunction.zeros(G), ContractionCertificate(M), 1e-13, callback=check)
    err = np.max(np.abs(res.point.as_array() - x_star))
    s = np.array([v.max() for v in res.step_norms])
    ratios = s[1:] / s[:-1]
    note(f"error {err:.1e}, max ratio after it. 3 {ratios[3:].max():.3f}, bound held {sum(contained)}/{len(contained)}")
    assert err <= 1e-10
    assert np.all(ratios[3:] <= 0.55)
    assert all(contained)


def test_criterion_5_example_constants(note):
    t0 = time.perf_counter()
    rep = full_report(builtin_spec())
    elapsed = time.perf_counter() - t0
    C = rep.combined.entries
    note(
        f"diag ({C[0, 0]:.6f}, {C[1, 1]:.6f}), rho-cond {rep.rho_condition_value:.6f}, "
        f"r0_min {rep.r0_min:.6f}, {len(rep.discrepancies)} discrepancy notes"
    )
    assert abs(C[0, 0] - 0.0990) <= 2e-3 and abs(C[1, 1] - 0.0653) <= 2e-3
    assert C[0, 1] == 0.0 and C[1, 0] == 0.0
    assert all(v < 1 for v in rep.spectral_radii.values()) and len(rep.spectral_radii) == 3
    assert abs(rep.rho_condition_value - 0.404) <= 2e-3
    assert abs(rep.r0_min - 0.276) <= 2e-3 and rep.r0_min <= 2
    # the gap to the rounded published values is flagged without failing
    gaps = np.abs(np.diag(C) - (0.0990, 0.0653))
    assert np.all(gaps <= 7.5e-4) and len(rep.discrepancies) == 2
    assert rep.overall_pass
    assert elapsed < 1.0


def test_criterion_6_lipschitz_audit(note):
    t0 = time.perf_counter()
    rep = audit(builtin_system(), builtin_spec(), Grid(1.0, 1024), samples=500, seed=0)
    elapsed = time.perf_counter() - t0
    MA_hat, MC_hat = rep.sampled_M_A.entries, rep.sampled_M_C.entries
    MA = np.array([[1 / 12, 0.0], [0.0, 1 / 6]])
    MC = build_MC(builtin_spec()).entries
    note(f"f1 sensitivity {MA_hat[0, 0]:.4f}, M_C hat diag ({MC_hat[0, 0]:.4f}, {MC_hat[1, 1]:.4f}), {elapsed:.2f} s")
    # sampled quotients carry ~1e-10 relative rounding; see AUDIT_RTOL
    assert np.all(MA_hat <= MA * (1 + 1e-8))
    assert np.all(MC_hat <= MC * (1 + 1e-8))
    assert MA_hat[0, 0] == pytest.approx(0.033, abs=2e-3) and MA_hat[0, 0] < 1 / 12
    assert rep.lipschitz_violations == []
    assert elapsed < 5.0


def test_criterion_7_end_to_end_solve(note):
    t0 = time.perf_counter()
    sols = {}
    for N in (512, 1024):
        spec, p = builtin_example(N)
        res = outer_solve(p, PairFunction.zeros(Grid(1.0, N)))
        sols[N] = (p, res)
    elapsed = time.perf_counter() - t0
    p, res = sols[1024]
    r = residual(p, res.point)
    gap = pair_norm(sols[512][1].point.resample(Grid(1.0, 1024)) - res.point)
    note(f"residual {r.max():.1e}, ||x|| {pair_norm(res.point).max():.4f}, N 512 vs 1024 {gap.max():.1e}, {elapsed:.1f} s")
    assert res.converged and r <= (1e-6, 1e-6)
    assert not res.left_ball and p.in_ball(res.point)
    assert gap <= (1e-3, 1e-3)
    assert elapsed <= 60.0


def test_criterion_8_ball_invariance(note):
    spec, p = builtin_example(1024)
    grid = Grid(1.0, 1024)
    rng = np.random.default_rng(8)
    inside, worst = 0, 0.0
    for _ in range(50):
        y = random_pair(grid, spec.r0, rng)
        x = inner_solve(p, y).point
        inside += p.in_ball(x)
        worst = max(worst, pair_norm(x).max())
    note(f"{inside}/50 inside, largest norm {worst:.4f} (r0 = {spec.r0:g})")
    assert inside == 50
