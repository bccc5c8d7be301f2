import numpy as np
import pytest

from perovkit.errors import DegenerateSamples, DivergenceDetected, MaxIterationsExceeded, NotConvergentMatrix
from perovkit.grid import Grid, PairFunction, pair_norm
from perovkit.perov import ContractionCertificate, estimate_lipschitz, perov_iterate, random_pair, sample_pairs

G = Grid(1.0, 32)


def linear_map(M, c):
    """(x, y) -> M (x, y) + c pointwise; its sup-norm Lipschitz matrix is exactly M for M >= 0."""
    M = np.asarray(M, dtype=float)

    def T(p):
        x, y = p.first.samples, p.second.samples
        return PairFunction.from_arrays(
            G, M[0, 0] * x + M[0, 1] * y + c[0], M[1, 0] * x + M[1, 1] * y + c[1]
        )

    return T


def exact_fixed_point(M, c):
    c = np.broadcast_to(np.asarray(c, dtype=float), (2, G.N + 1))
    sol = np.linalg.solve(np.eye(2) - np.asarray(M), c)
    return PairFunction.from_arrays(G, sol[0], sol[1])


def test_constant_map_converges_in_one_step():
    x0 = PairFunction(G.sample(np.sin), G.sample(np.cos))
    res = perov_iterate(lambda p: x0, x0, ContractionCertificate(np.zeros((2, 2))), 1e-12)
    assert res.converged and res.iterations == 1
    assert pair_norm(res.point - x0).tolist() == [0.0, 0.0]


def test_linear_oracle_diagonal():
    M = [[0.5, 0.0], [0.0, 0.5]]
    res = perov_iterate(linear_map(M, (1.0, 1.0)), PairFunction.zeros(G), ContractionCertificate(M), 1e-12)
    assert res.converged
    assert np.max(np.abs(res.point.as_array() - 2.0)) <= 1e-10
    assert res.error_bound.is_nonnegative()
    assert res.step_norms[-1] <= (1e-12, 1e-12)


def test_linear_oracle_coupled_with_time_dependent_shift():
    M = [[0.3, 0.2], [0.1, 0.4]]
    c = (G.sample(np.cos).samples, G.sample(lambda t: t**2 - 0.5).samples)
    x_star = exact_fixed_point(M, c)
    seen = []

    def check(k, x, x_next, step, bound):
        seen.append((pair_norm(x - x_star), bound, step))

    res = perov_iterate(linear_map(M, c), PairFunction.zeros(G), ContractionCertificate(M), 1e-13, callback=check)
    assert np.max(np.abs(res.point.as_array() - x_star.as_array())) <= 1e-11
    for err, bound, _ in seen:
        assert np.all(err.values <= bound.values + 1e-14)
    # steps obey ||d_{k+1}|| <= M ||d_k|| componentwise
    Mm = np.asarray(M)
    for (_, _, s0), (_, _, s1) in zip(seen, seen[1:]):
        assert np.all(s1.values <= Mm @ s0.values + 1e-9)


def test_step_ratios_decay_geometrically():
    M = [[0.5, 0.0], [0.0, 0.5]]
    c = (G.sample(np.sin).samples + 1, 1.0)
    res = perov_iterate(linear_map(M, c), PairFunction.zeros(G), ContractionCertificate(M), 1e-12)
    s = np.array([v.max() for v in res.step_norms])
    ratios = s[1:] / s[:-1]
    assert np.all(ratios[3:] <= 0.5 + 0.05)


def test_two_starts_agree():
    M = [[0.4, 0.3], [0.2, 0.5]]
    T = linear_map(M, (0.7, -1.2))
    cert = ContractionCertificate(M)
    rng = np.random.default_rng(3)
    a = perov_iterate(T, random_pair(G, 5.0, rng), cert, 1e-10)
    b = perov_iterate(T, random_pair(G, 5.0, rng), cert, 1e-10)
    gap = pair_norm(a.point - b.point).max()
    assert gap <= 2 * max(a.error_bound.max(), b.error_bound.max())


def test_certificate_rejected():
    with pytest.raises(NotConvergentMatrix):
        perov_iterate(lambda p: p, PairFunction.zeros(G), ContractionCertificate([[1.0, 0.0], [0.0, 0.2]]), 1e-8)


def test_max_iterations_returns_best_iterate():
    M = [[0.9, 0.0], [0.0, 0.9]]
    with pytest.raises(MaxIterationsExceeded) as info:
        perov_iterate(linear_map(M, (1.0, 1.0)), PairFunction.zeros(G), ContractionCertificate(M), 1e-12, max_iter=5)
    res = info.value.result
    assert res is not None and not res.converged and res.iterations == 5


def test_divergence_detected_for_wrong_certificate():
    T = linear_map([[3.0, 0.0], [0.0, 0.1]], (1.0, 1.0))
    with pytest.raises(DivergenceDetected):
        perov_iterate(T, PairFunction.zeros(G), ContractionCertificate([[0.5, 0.0], [0.0, 0.5]]), 1e-12, max_iter=200)


def test_tolerance_validation():
    cert = ContractionCertificate([[0.5, 0.0], [0.0, 0.5]])
    with pytest.raises(ValueError):
        perov_iterate(lambda p: p, PairFunction.zeros(G), cert, (1e-8, 0.0))
    with pytest.raises(ValueError):
        perov_iterate(lambda p: p, PairFunction.zeros(G), cert, 1e-8, max_iter=0)


# --- Lipschitz estimation ---


def test_estimate_identity_and_constant():
    rng = np.random.default_rng(0)
    pairs = sample_pairs(G, 2.0, 40, rng)
    ident = estimate_lipschitz(lambda p: p, pairs).entries
    assert np.allclose(np.diag(ident), 1.0) and np.all(np.diag(ident) >= 1.0 - 1e-15)
    const = PairFunction(G.constant(1.0), G.constant(2.0))
    assert np.array_equal(estimate_lipschitz(lambda p: const, pairs).entries, np.zeros((2, 2)))


def test_estimate_linear_map_is_a_lower_bound_and_tight():
    M = np.array([[0.3, 0.2], [0.1, 0.4]])
    pairs = sample_pairs(G, 2.0, 200, np.random.default_rng(1))
    est = estimate_lipschitz(linear_map(M, (0.0, 0.0)), pairs).entries
    # tiny perturbations carry ~eps*|u|/|delta| rounding in the quotient
    assert np.all(est <= M * (1 + 1e-8))
    assert np.allclose(est, M, rtol=1e-9)


def test_estimate_rejects_bad_samples():
    x = PairFunction.zeros(G)
    y = PairFunction(G.constant(1.0), G.zeros())
    both = PairFunction(G.constant(1.0), G.constant(1.0))
    with pytest.raises(DegenerateSamples):
        estimate_lipschitz(lambda p: p, [(x, x), (x, y)])
    with pytest.raises(DegenerateSamples):
        estimate_lipschitz(lambda p: p, [(x, y)])
    with pytest.raises(ValueError):
        estimate_lipschitz(lambda p: p, [(x, both), (x, y)])


def test_sample_pairs_stay_in_ball_and_vary_one_component():
    pairs = sample_pairs(G, 2.0, 100, np.random.default_rng(7))
    for k, (u, v) in enumerate(pairs):
        assert pair_norm(u) <= (2.0, 2.0) and pair_norm(v) <= (2.0, 2.0)
        d = pair_norm(u - v).values
        assert d[k % 2] > 0 and d[1 - k % 2] == 0
