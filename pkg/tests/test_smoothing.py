import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bernsmooth.errors import DomainError, PreconditionError
from bernsmooth.numerics import central_diff, integrate_bump
from bernsmooth.smoothing import (SmoothingConfig, beta, bump_profile,
                                  default_omega, kappa, kernel, mollified,
                                  omega_rho, phi, smooth_weight,
                                  smooth_weight_with_derivative,
                                  verify_corollary1)
from bernsmooth.weights import Weight, builtin_weight, eval_weight


ZERO = builtin_weight("zero")


def test_kappa_value_and_bracket():
    k = kappa()
    assert 1.2 / math.e < k < 1.21 / math.e
    assert k == pytest.approx(0.4439938161680793, abs=1e-12)


def test_beta_positive_lift():
    g = builtin_weight("gauss")
    xs = np.linspace(-5, 5, 21)
    b = beta(g, 0.5, xs)
    assert np.all(b > 0)
    assert np.allclose(b, eval_weight(g, xs) + np.exp(-0.5 * np.abs(xs)))


def test_omega_rho_zero_weight_closed_form():
    # windowed sup of exp(-eps|y|) over |y - x| <= rho exp(-eps|x|)
    eps = 0.5
    for rho in (0.125, 0.5, 1.0):
        for x in (-3.0, -0.2, 0.0, 1.7, 6.0):
            r = rho * math.exp(-eps * abs(x))
            expected = math.exp(-eps * max(0.0, abs(x) - r))
            got = omega_rho(ZERO, eps, rho, x)
            assert got == pytest.approx(expected, rel=1e-9)


def test_omega_monotone_in_rho():
    g = builtin_weight("gauss")
    for x in (-2.0, 0.3, 4.0):
        vals = [omega_rho(g, 0.5, rho, x) for rho in (0.125, 0.5, 11 / 12, 1.0)]
        assert all(a <= b + 1e-12 for a, b in zip(vals, vals[1:]))
        assert beta(g, 0.5, x) <= vals[0] + 1e-12


def test_discrete_omega_includes_support_spikes():
    w = Weight.from_points([2.0], [0.9], bound=1.0)
    # window around x=2 contains the spike
    v = omega_rho(w, 0.5, 1.0, 2.0)
    assert v >= 0.9 + math.exp(-0.5 * 2.0) - 1e-12


def test_kernel_normalization():
    # integral of the kernel over its support is 1 for any width
    for om in (0.25, 1.0, 0.01):
        r = integrate_bump(lambda t: np.array([kernel(om, float(x))
                                               for x in np.atleast_1d(t)]),
                           -om, om, 1e-10)
        assert r.value == pytest.approx(1.0, abs=1e-8)
        # quadrature normalization agrees with the analytic value om*kappa
        assert kernel(om, 0.0) == pytest.approx(
            math.exp(-1.0) / (om * kappa()), rel=1e-9)
    with pytest.raises(DomainError):
        kernel(0.5, 0.6)


def test_mollified_linear_exact():
    val, der = mollified(lambda y: np.asarray(y, float), 1.0, 3.25)
    assert val == pytest.approx(3.25, abs=1e-10)
    assert der == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("fname,f,fp", [
    ("x2", lambda y: np.asarray(y, float) ** 2,
     lambda x: 2 * x),
    ("sin", lambda y: np.sin(np.asarray(y, float)), math.cos),
    ("gauss", lambda y: np.exp(-np.asarray(y, float) ** 2),
     lambda x: -2 * x * math.exp(-x * x)),
])
def test_mollified_derivative_cross_check(fname, f, fp):
    rng = np.random.default_rng(3)
    om = default_omega(0.5)
    for x in rng.uniform(-3, 3, 8):
        x = float(x)
        _, der = mollified(f, om, x)
        fd = central_diff(
            lambda u: np.array([mollified(f, om, float(ui))[0]
                                for ui in np.atleast_1d(u)]), x, 1e-4)
        assert der == pytest.approx(fd, rel=1e-5, abs=1e-7)


def test_phi_bounds_spot():
    for eps in (0.1, 0.5, 0.9):
        for x in (-7.0, -0.5, 0.0, 2.3, 12.0):
            v, d = phi(eps, x)
            e = math.exp(-eps * abs(x))
            assert math.exp(-2 * eps) / 4 * e - 1e-12 <= v <= e / 4 + 1e-12
            assert abs(d) <= (5.0 / 12.0) * e + 1e-12


def test_config_validation():
    with pytest.raises(PreconditionError):
        SmoothingConfig(eps=1.5)
    with pytest.raises(PreconditionError):
        SmoothingConfig(eps=0.5, rho=0.0)
    with pytest.raises(PreconditionError):
        SmoothingConfig(eps=0.5, omega=lambda x: np.ones_like(np.asarray(x, float)))


def test_sandwich_zero_weight():
    cfg = SmoothingConfig(eps=0.5)
    for x in (-4.0, -1.0, 0.0, 0.5, 3.0):
        v = smooth_weight(ZERO, cfg, x)
        lower = math.exp(-0.5 * abs(x))
        upper = omega_rho(ZERO, 0.5, 1.0, x)
        assert lower - 1e-8 <= v <= upper + 1e-8


def test_verify_corollary1_gauss_passes():
    g = builtin_weight("gauss")
    rep = verify_corollary1(g, 0.5, np.linspace(-4, 4, 9))
    assert rep.passed, rep.worst()
    labels = set(rep.labels)
    assert {"sandwich-lower", "sandwich-upper", "74-bound",
            "derivative-agreement"} <= labels


@given(st.floats(0.05, 0.95))
@settings(max_examples=20, deadline=None)
def test_bump_profile_bounded(t):
    v = float(bump_profile(t))
    assert 0 < v < math.exp(-1.0)
    assert bump_profile(1.0) == 0.0
