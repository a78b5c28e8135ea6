import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from advisory_miner.errors import DomainError
from advisory_miner.special import f_cdf, f_inv, f_pdf, f_sf, ln_gamma, reg_inc_beta, t_cdf, t_inv, t_pdf, t_sf

mpmath.mp.dps = 40


@pytest.mark.parametrize("x", [1e-8, 0.01, 0.5, 0.9, 1.0, 1.1, 1.5, 1.9, 2.0, 2.1, 3.3, 10.0, 171.5, 1e5])
def test_ln_gamma_against_mpmath(x):
    want = float(mpmath.loggamma(x))
    got = ln_gamma(x)
    assert abs(got - want) <= 1e-13 * max(1.0, abs(want)) or math.isclose(got, want, rel_tol=1e-12)


def test_ln_gamma_exact_points():
    assert ln_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
    assert ln_gamma(2.0) == pytest.approx(0.0, abs=1e-15)
    assert ln_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)
    assert ln_gamma(11.0) == pytest.approx(math.log(3628800), rel=1e-14)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_ln_gamma_domain(bad):
    with pytest.raises(DomainError):
        ln_gamma(bad)


@settings(max_examples=300, deadline=None)
@given(st.floats(0.05, 200), st.floats(0.05, 200), st.floats(0, 1))
def test_reg_inc_beta_against_mpmath(a, b, x):
    want = float(mpmath.betainc(a, b, 0, x, regularized=True))
    assert reg_inc_beta(a, b, x) == pytest.approx(want, abs=1e-11)


def test_reg_inc_beta_edges_and_symmetry():
    assert reg_inc_beta(2, 3, 0.0) == 0.0
    assert reg_inc_beta(2, 3, 1.0) == 1.0
    assert reg_inc_beta(1, 1, 0.3) == pytest.approx(0.3, abs=1e-15)
    assert reg_inc_beta(2.5, 4.0, 0.3) + reg_inc_beta(4.0, 2.5, 0.7) == pytest.approx(1.0, abs=1e-14)
    for args in ((0, 1, 0.5), (1, -1, 0.5), (1, 1, 1.5)):
        with pytest.raises(DomainError):
            reg_inc_beta(*args)


@pytest.mark.parametrize("df", [1, 2, 3, 7.5, 32, 100, 1000])
@pytest.mark.parametrize("t", [-40.0, -3.0, -1.644167436, 0.0, 0.5, 2.0, 12.0])
def test_t_against_scipy(t, df):
    assert t_cdf(t, df) == pytest.approx(stats.t.cdf(t, df), abs=1e-12)
    assert t_sf(t, df) == pytest.approx(stats.t.sf(t, df), rel=1e-9, abs=1e-300)


@pytest.mark.parametrize("d1,d2", [(1, 1), (1, 37), (2, 2), (5, 3), (30, 100), (100, 1)])
@pytest.mark.parametrize("f", [0.0, 0.01, 0.5, 1.0, 3.513325, 50.0])
def test_f_against_scipy(f, d1, d2):
    assert f_cdf(f, d1, d2) == pytest.approx(stats.f.cdf(f, d1, d2), abs=1e-12)
    assert f_sf(f, d1, d2) == pytest.approx(stats.f.sf(f, d1, d2), rel=1e-9, abs=1e-300)


def test_far_tails_keep_relative_precision():
    assert t_sf(30.0, 10) == pytest.approx(stats.t.sf(30.0, 10), rel=1e-8)
    assert f_sf(200.0, 3, 40) == pytest.approx(stats.f.sf(200.0, 3, 40), rel=1e-8)


@pytest.mark.parametrize("p,df", [(0.95, 32), (0.975, 32), (0.5, 5), (0.975, 1), (0.999, 3), (0.01, 60)])
def test_t_inv_against_scipy(p, df):
    assert t_inv(p, df) == pytest.approx(stats.t.ppf(p, df), abs=1e-8)


def test_t_inv_matches_spreadsheet_critical_values():
    # spreadsheet critical values are printed to ~1e-7
    assert t_inv(0.95, 32) == pytest.approx(1.693888703, abs=1e-7)
    assert t_inv(0.975, 32) == pytest.approx(2.036933334, abs=1e-7)


def test_f_inv_values():
    assert f_inv(0.95, 1, 37) == pytest.approx(4.105456, abs=1e-6)
    assert f_inv(0.99, 4, 20) == pytest.approx(stats.f.ppf(0.99, 4, 20), abs=1e-8)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.001, 0.999), st.integers(1, 200))
def test_t_inv_symmetry(p, df):
    assert t_inv(p, df) == pytest.approx(-t_inv(1 - p, df), abs=1e-8)


@pytest.mark.parametrize("call", [
    lambda: t_inv(0.0, 5), lambda: t_inv(1.0, 5), lambda: t_cdf(1.0, 0),
    lambda: f_inv(0.5, 0, 3), lambda: f_cdf(1.0, 2, -1), lambda: f_inv(1.2, 2, 3),
])
def test_domain_errors(call):
    with pytest.raises(DomainError):
        call()


def test_negative_f_rejected():
    with pytest.raises(DomainError):
        f_cdf(-1.0, 3, 4)
    with pytest.raises(DomainError):
        f_sf(math.nan, 3, 4)


@pytest.mark.parametrize("x", [-30.0, -2.0, 0.0, 0.3, 4.0])
@pytest.mark.parametrize("df", [1, 2.5, 32, 300])
def test_t_pdf(x, df):
    assert t_pdf(x, df) == pytest.approx(stats.t.pdf(x, df), rel=1e-11)


@pytest.mark.parametrize("x", [1e-6, 0.2, 1.0, 5.0, 80.0])
@pytest.mark.parametrize("d1,d2", [(1, 1), (1, 37), (2, 9), (12, 4), (100, 100)])
def test_f_pdf(x, d1, d2):
    assert f_pdf(x, d1, d2) == pytest.approx(stats.f.pdf(x, d1, d2), rel=1e-10)
    assert f_pdf(-1.0, d1, d2) == 0.0


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-6, 1 - 1e-6), st.floats(0.5, 500), st.floats(0.5, 500))
def test_inverses_against_scipy_ppf(p, d1, d2):
    x = f_inv(p, d1, d2)
    assert abs(f_cdf(x, d1, d2) - p) <= 1e-9
    assert x == pytest.approx(stats.f.ppf(p, d1, d2), rel=1e-7, abs=1e-9)
    t = t_inv(p, d1)
    assert abs(t_cdf(t, d1) - p) <= 1e-9
    assert t == pytest.approx(stats.t.ppf(p, d1), rel=1e-7, abs=1e-9)
