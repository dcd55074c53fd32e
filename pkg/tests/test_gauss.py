"""Lattice distributions, discretized Gaussian, TV distances, CLT terms."""

import math
from fractions import Fraction as F

import pytest

from conclab.dist import uniform
from conclab.gauss import (
    GaussSpec,
    LatticeDist,
    berry_esseen_gap,
    discretized_gaussian,
    fit_gauss_spec,
    gaussian_tail_bound,
    gaussian_tail_check,
    lattice_delta,
    lconv,
    llt_terms,
    norm_cdf,
    pow_conv,
    singular_lower_bound,
    tv_exact,
    tv_to_discretized_gaussian,
)

SQUARE = LatticeDist(
    [((0, 0), F(1, 4)), ((1, 0), F(1, 4)), ((0, 1), F(1, 4)), ((1, 1), F(1, 4))]
)


def test_lattice_dist_validation():
    with pytest.raises(ValueError):
        LatticeDist([])
    with pytest.raises(ValueError):
        LatticeDist([((0, 0), F(1, 2)), ((1,), F(1, 2))])
    with pytest.raises(ValueError):
        LatticeDist([((0,), F(1, 2))])


def test_lconv_identity_and_power():
    assert lconv(lattice_delta((0, 0)), SQUARE) == SQUARE
    assert pow_conv(SQUARE, 1) == SQUARE
    two = pow_conv(SQUARE, 2)
    # independent coordinates: product of two binomial(2, 1/2) marginals
    for x in range(3):
        for y in range(3):
            expected = F(math.comb(2, x) * math.comb(2, y), 16)
            assert two.mass((x, y)) == expected
    assert pow_conv(SQUARE, 5) == lconv(lconv(two, two), SQUARE)


def test_lconv_moment_additivity():
    a = LatticeDist([((0, 0), F(1, 2)), ((2, 1), F(1, 2))])
    s = lconv(a, SQUARE)
    ma, mb = a.mean(), SQUARE.mean()
    assert s.mean() == tuple(x + y for x, y in zip(ma, mb))
    ca, cb, cs = a.cov(), SQUARE.cov(), s.cov()
    for i in range(2):
        for j in range(2):
            assert cs[i][j] == ca[i][j] + cb[i][j]


def test_tv_exact_examples():
    assert tv_exact(SQUARE, SQUARE) == 0
    assert tv_exact(lattice_delta((0,)), lattice_delta((1,))) == 1
    u = LatticeDist([((0,), F(1, 2)), ((1,), F(1, 2))])
    assert tv_exact(u, lattice_delta((0,))) == F(1, 2)


def test_tv_exact_metric_properties():
    import random

    rng = random.Random(3)
    def rand_dist():
        n = rng.randint(1, 5)
        sites = rng.sample(range(-4, 5), n)
        weights = [rng.randint(1, 5) for _ in range(n)]
        t = sum(weights)
        return LatticeDist((((s,), F(w, t)) for s, w in zip(sites, weights)))

    for _ in range(30):
        a, b, c = rand_dist(), rand_dist(), rand_dist()
        assert tv_exact(a, b) == tv_exact(b, a)
        assert (tv_exact(a, b) == 0) == (a == b)
        assert tv_exact(a, c) <= tv_exact(a, b) + tv_exact(b, c)


def test_discretized_gaussian_1d():
    spec = GaussSpec((0.0,), ((1.0,),))
    table = discretized_gaussian(spec, [(-8, 8)], tol=1e-9)
    p0, err = table.prob((0,))
    expected = norm_cdf(0.5) - norm_cdf(-0.5)
    assert abs(p0 - expected) <= err + 1e-13
    total = sum(p for p, _ in table.cells.values())
    assert total + table.tail_bound >= 1 - 2e-9 * len(table.cells)
    # symmetric spec: opposite cells agree
    for x in range(1, 8):
        assert abs(table.prob((x,))[0] - table.prob((-x,))[0]) <= 2e-9


def test_discretized_gaussian_tiny_variance_concentrates():
    spec = GaussSpec((0.0,), ((1e-6,),))
    table = discretized_gaussian(spec, [(-2, 2)], tol=1e-9)
    assert table.prob((0,))[0] > 1 - 1e-9


def test_discretized_gaussian_2d_symmetry_and_mass():
    spec = GaussSpec((0.0, 0.0), ((1.0, 0.3), (0.3, 1.0)))
    table = discretized_gaussian(spec, [(-6, 6), (-6, 6)], tol=1e-8)
    assert abs(table.prob((1, 1))[0] - table.prob((-1, -1))[0]) <= 2e-8
    total = sum(p for p, _ in table.cells.values())
    assert total + table.tail_bound >= 1 - 2e-8 * len(table.cells)


def test_discretized_gaussian_3d_seeded():
    spec = GaussSpec((0.0, 0.0, 0.0), ((1.0, 0, 0), (0, 1.0, 0), (0, 0, 1.0)))
    table = discretized_gaussian(spec, [(-1, 1)] * 3, tol=0.02, seed=5)
    p, half = table.prob((0, 0, 0))
    assert half <= 0.02
    exact_1d = norm_cdf(0.5) - norm_cdf(-0.5)
    assert abs(p - exact_1d**3) <= 3 * half + 0.01
    again = discretized_gaussian(spec, [(-1, 1)] * 3, tol=0.02, seed=5)
    assert again.cells == table.cells


def test_fit_gauss_spec_degenerate():
    line = LatticeDist([((0, 0), F(1, 2)), ((1, 1), F(1, 2))])
    with pytest.raises(ValueError):
        fit_gauss_spec(line)
    with pytest.raises(ValueError):
        fit_gauss_spec(lattice_delta((0,)))


def test_tv_to_gaussian_self_consistency():
    # binomial(48, 1/2): the fitted rounded Gaussian is close, certified
    coin = LatticeDist([((0,), F(1, 2)), ((1,), F(1, 2))])
    res_small = tv_to_discretized_gaussian(pow_conv(coin, 8))
    res_large = tv_to_discretized_gaussian(pow_conv(coin, 48))
    assert res_large.value + res_large.err < res_small.value - res_small.err
    assert res_large.value < 0.02


def test_tv_to_gaussian_2d_decreasing():
    res4 = tv_to_discretized_gaussian(pow_conv(SQUARE, 4))
    res8 = tv_to_discretized_gaussian(pow_conv(SQUARE, 8))
    assert res8.value + res8.err < res4.value - res4.err


def test_llt_terms_examples():
    y = LatticeDist([((0,), F(1, 2)), ((1,), F(1, 2))])
    terms = llt_terms([y, y])
    assert terms.u == (0.5, 0.5)
    assert terms.s_tilde == 0.5
    assert terms.applicable
    # chi: E|Y' - Y|^3 = 1/2 for a fair coin difference
    assert abs(terms.chi - 0.5) < 1e-12

    degenerate = llt_terms([lattice_delta((0,))] * 3)
    assert degenerate.s_tilde == 0.0
    assert not degenerate.applicable


def test_llt_u_shift_invariant():
    y = LatticeDist([((0, 0), F(1, 3)), ((1, 0), F(1, 3)), ((0, 1), F(1, 3))])
    terms = llt_terms([y])
    shifted = llt_terms([y.shifted((5, -7))])
    assert terms.u == shifted.u


def test_singular_lower_bound_examples():
    rep = singular_lower_bound([[1, 0], [0, 1]])
    assert rep.holds and abs(rep.bound - 1 / math.sqrt(2)) < 1e-12 and rep.sigma_min == 1.0
    rep = singular_lower_bound([[1, 0], [0, 3]])
    assert rep.holds and rep.sigma_min >= 1 / (math.sqrt(2) * 3)
    rep = singular_lower_bound([[5]])
    assert rep.holds and rep.bound == 1.0 and rep.sigma_min == 5.0
    with pytest.raises(ValueError):
        singular_lower_bound([[1, 2], [2, 4]])


def test_gaussian_tail_bound():
    assert gaussian_tail_bound([[1.0]], 32.0) == pytest.approx(math.exp(-8.0))
    with pytest.raises(ValueError):
        gaussian_tail_bound([[1.0]], 1.0)  # d > t / (16 sigma1)


def test_gaussian_tail_check():
    report = gaussian_tail_check([[1.0]], 32.0, 100_000, seed=7)
    assert report.holds
    assert report.empirical <= report.bound + 3 * report.std_err
    again = gaussian_tail_check([[1.0]], 32.0, 100_000, seed=7)
    assert again == report


def test_berry_esseen_gap_coins():
    report = berry_esseen_gap([uniform([0, 1])] * 64)
    assert report.max_cdf_gap <= 0.56 * report.bound
    # single extreme summand: computed, large relative bound
    single = berry_esseen_gap([uniform([5, 6])])
    assert single.bound >= single.max_cdf_gap


def test_berry_esseen_pm_one_ratio():
    # fair +-1 summands: third absolute moment equals the variance exactly,
    # so the ratio bound collapses to 1/sqrt(V)
    pm = uniform([-1, 1])
    for n in (4, 9, 25):
        report = berry_esseen_gap([pm] * n)
        assert report.third_moment == report.variance
        assert report.bound == pytest.approx(1 / math.sqrt(float(report.variance)))


def test_berry_esseen_zero_variance():
    from conclab.dist import delta

    with pytest.raises(ValueError):
        berry_esseen_gap([delta(3)])
