import math

import numpy as np
import pytest
import scipy.integrate
import scipy.special
from hypothesis import given, settings
from hypothesis import strategies as st

from qcentropy import model as M
from qcentropy.errors import ConfigError, DomainError


def quad_half_period(params, E0, diagonal=True):
    """Independent oracle: integrate ds / |v| along the orbit straight from H."""
    if diagonal:
        # along y = x, V(s) = ((beta + alpha)/2) s^4 and each axis has speed v(s)
        a = 0.5 * (params.beta + params.alpha)
        v = lambda s: math.sqrt(max(2.0 * (E0 - a * s ** 4) / (2.0 * params.m), 0.0))
    else:
        a = 0.25 * params.beta
        v = lambda s: math.sqrt(max(2.0 * (E0 - a * s ** 4) / params.m, 0.0))
    s_max = (E0 / a) ** 0.25
    val, _ = scipy.integrate.quad(lambda u: s_max / v(s_max * u) if u < 1 else 0.0, 0, 1,
                                  limit=400)
    return 2.0 * val


def test_hyp2f1_gauss_value_matches_scipy_and_quad():
    f = M.hyp2f1_series(0.25, 0.5, 1.25, 1.0)
    assert f == pytest.approx(scipy.special.hyp2f1(0.25, 0.5, 1.25, 1.0), rel=1e-12)
    integral, _ = scipy.integrate.quad(lambda u: 1 / math.sqrt(1 - u ** 4), 0, 1)
    assert f == pytest.approx(integral, rel=1e-9)
    assert f == pytest.approx(1.31, abs=0.005)


@given(z=st.floats(0.0, 0.95), a=st.floats(0.05, 2.0), b=st.floats(0.05, 2.0),
       c=st.floats(0.5, 4.0))
@settings(max_examples=60, deadline=None)
def test_hyp2f1_series_matches_scipy(z, a, b, c):
    assert M.hyp2f1_series(a, b, c, z) == pytest.approx(scipy.special.hyp2f1(a, b, c, z),
                                                         rel=1e-9)


def test_hyp2f1_domain_errors():
    with pytest.raises(DomainError):
        M.hyp2f1_series(1.0, 1.0, 1.5, 1.0)
    with pytest.raises(DomainError):
        M.hyp2f1_series(0.25, 0.5, 1.25, 1.2)
    with pytest.raises(DomainError):
        M.hyp2f1_series(0.25, 0.5, -2.0, 0.5)


@pytest.mark.parametrize("E0,alpha,value", [(1.5, 0.03, 6.30), (150.0, 0.03, 1.99)])
def test_half_period_reference_values(E0, alpha, value):
    assert M.half_period_diagonal(M.ModelParams(alpha=alpha), E0) == pytest.approx(value, abs=0.01)


def test_channel_half_period_reference_value():
    for alpha in (0.03, 1.0):
        assert M.half_period_channel(M.ModelParams(alpha=alpha), 15.0) == pytest.approx(4.21, abs=0.01)


@pytest.mark.parametrize("E0", [1.5, 15.0, 150.0])
@pytest.mark.parametrize("alpha,m", [(0.03, 1.0), (1.0, 1.0), (0.5, 2.5)])
def test_half_periods_match_quadrature(E0, alpha, m):
    p = M.ModelParams(alpha=alpha, m=m)
    assert M.half_period_diagonal(p, E0) == pytest.approx(quad_half_period(p, E0), rel=1e-6)
    assert M.half_period_channel(p, E0) == pytest.approx(quad_half_period(p, E0, False), rel=1e-6)


@given(E0=st.floats(0.1, 1e4), alpha=st.floats(0.0, 5.0), m=st.floats(0.2, 5.0))
@settings(max_examples=50, deadline=None)
def test_half_period_scaling_and_approx(E0, alpha, m):
    p = M.ModelParams(m=m, alpha=alpha)
    tau = M.half_period_diagonal(p, E0)
    # tau ~ E0^(-1/4) (homogeneous quartic potential)
    assert M.half_period_diagonal(p, 16 * E0) == pytest.approx(tau / 2, rel=1e-10)
    assert M.half_period_diagonal_approx(p, E0) == pytest.approx(tau, rel=2e-3)
    assert M.half_period_channel_approx(p, E0) == pytest.approx(M.half_period_channel(p, E0), rel=2e-3)


def test_turning_points_solve_potential():
    p = M.ModelParams(alpha=0.4)
    xd = M.diagonal_turning_point(p, 7.0)
    assert M.potential(p, xd, xd) == pytest.approx(7.0)
    xc = M.channel_turning_point(p, 7.0)
    assert M.potential(p, xc, 0.0) == pytest.approx(7.0)
    assert M.spreading_extent(p, 7.0) == pytest.approx(2 * xd)


@given(x=st.floats(-20, 20), y=st.floats(-20, 20), alpha=st.floats(0, 3))
@settings(max_examples=80, deadline=None)
def test_gradient_is_minus_finite_difference(x, y, alpha):
    p = M.ModelParams(alpha=alpha)
    h = 1e-5 * max(1.0, abs(x), abs(y))
    fx, fy = M.gradient(p, x, y)
    dvx = (M.potential(p, x + h, y) - M.potential(p, x - h, y)) / (2 * h)
    dvy = (M.potential(p, x, y + h) - M.potential(p, x, y - h)) / (2 * h)
    scale = 1.0 + abs(dvx) + abs(dvy)
    assert fx == pytest.approx(-dvx, abs=1e-6 * scale)
    assert fy == pytest.approx(-dvy, abs=1e-6 * scale)


def test_potential_symmetries():
    p = M.ModelParams(alpha=0.7)
    x, y = np.random.default_rng(0).normal(size=(2, 50))
    v = M.potential(p, x, y)
    assert np.allclose(v, M.potential(p, y, x))
    assert np.allclose(v, M.potential(p, -x, y))
    assert np.all(v >= 0)


def test_hamiltonian():
    p = M.ModelParams(alpha=1.0)
    pt = M.PhasePoint(1.0, 2.0, 3.0, -1.0)
    assert M.hamiltonian(p, pt) == pytest.approx(5.0 + 0.0025 * 17 + 2.0)
    with pytest.raises(ConfigError):
        M.PhasePoint(float("nan"), 0, 0, 0)


@pytest.mark.parametrize("kw", [{"m": 0}, {"hbar": -1}, {"beta": 0}, {"sigma2": 0},
                                {"alpha": -0.1}, {"alpha": float("inf")}])
def test_params_validation(kw):
    with pytest.raises(ConfigError):
        M.ModelParams(**kw)


def test_free_spreading_and_spreading_times():
    p = M.ModelParams()
    assert M.free_spreading_width(p, 0.0) == pytest.approx(p.sigma)
    assert M.free_spreading_width(p, 1.0) == pytest.approx(p.sigma * math.sqrt(2.0))
    w = M.free_spreading_width(p, 3.7)
    assert M.spreading_time(p, w) == pytest.approx(3.7)
    # reference values: t(1.5) ~ 4, t(15) ~ 7.3, t(150) ~ 13.1 at alpha = 0.03
    reg = M.ModelParams(alpha=0.03)
    for E0, t in ((1.5, 4.0), (15.0, 7.3), (150.0, 13.1)):
        assert M.diagonal_spreading_time(reg, E0) == pytest.approx(t, abs=0.05)
    with pytest.raises(DomainError):
        M.spreading_time(p, 0.1)
    with pytest.raises(DomainError):
        M.half_period_diagonal(p, -1.0)
