import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from bernsmooth.entire import (EntireProduct, ZeroSet, cauchy_bound_check,
                               counting, derivative_at_zero, eval_product,
                               eval_product_value, lemma1_constants,
                               log_derivative_at_zero, perturb,
                               ratio_bound_check, separation_check, theta,
                               theta_terms, type_estimate, zero_family,
                               zeros_from_json)
from bernsmooth.errors import DomainError, PreconditionError


SQUARES = zero_family("n_squared", 8)
B8 = EntireProduct(SQUARES)


def test_zero_set_validation():
    with pytest.raises(DomainError):
        ZeroSet(np.array([1.0, 1.0]))
    with pytest.raises(DomainError):
        ZeroSet(np.array([-1.0, 0.0, 1.0]))
    with pytest.raises(DomainError):
        ZeroSet(np.array([2.0, 1.0]))
    with pytest.raises(DomainError):
        EntireProduct(SQUARES, a0=0.0)


def test_families_and_json():
    zs = zero_family("lacunary_2n", 3)
    assert list(zs.zeros) == [-8, -4, -2, 2, 4, 8]
    zs = zero_family("n_squared", 3, signs="plus")
    assert list(zs.zeros) == [1, 4, 9]
    B = zeros_from_json({"zeros": [3.0, -1.0], "a0": 2.0})
    assert list(B.zeros.zeros) == [-1.0, 3.0]
    assert B.a0 == 2.0
    B = zeros_from_json('{"family": "n_squared", "n_max": 2}')
    assert list(B.zeros.zeros) == [-4, -1, 1, 4]
    with pytest.raises(DomainError):
        zeros_from_json({"family": "custom"})


def test_counting():
    n, s = counting(SQUARES, 10.0)
    assert n == 6  # +-1, +-4, +-9
    assert s == pytest.approx(0.0)  # symmetric reciprocals cancel
    n, _ = counting(SQUARES, 1.0)
    assert n == 0


def test_eval_product_matches_direct():
    for x in (-3.3, 0.0, 0.5, 7.0):
        sign, la = eval_product(B8, x)
        direct = float(np.prod(1.0 - x / SQUARES.zeros))
        assert sign * math.exp(la) == pytest.approx(direct, rel=1e-13)
    sign, la = eval_product(B8, 4.0)  # at a zero
    assert sign == 0 and la == -math.inf


def test_derivative_at_zero_vs_numeric():
    for lam in (1.0, -4.0, 9.0):
        d = derivative_at_zero(B8, lam)
        h = 1e-6
        fd = (eval_product_value(B8, lam + h) -
              eval_product_value(B8, lam - h)) / (2 * h)
        assert d == pytest.approx(fd, rel=1e-8)
    with pytest.raises(DomainError):
        derivative_at_zero(B8, 2.0)


def test_sin_product_derivative():
    # zeros +-n, n<=200: B ~ sin(pi z)/(pi z); B'(1) ~ -1 with O(1/N) truncation
    n = 200
    zs = ZeroSet(np.array([float(k) for k in range(-n, n + 1) if k]))
    B = EntireProduct(zs)
    assert derivative_at_zero(B, 1.0) == pytest.approx(-1.0, rel=2e-2)


def test_theta_positive_and_consistent():
    t = theta(B8)
    terms = theta_terms(B8)
    assert np.all(terms > 0)
    assert t == pytest.approx(float(np.sum(terms)))


def test_type_estimate_decays():
    trace = type_estimate(B8, [10.0, 100.0, 1000.0], angle_samples=60)
    vals = [v for _, v in trace]
    assert vals[0] > vals[1] > vals[2] > 0


def test_lemma1_constants_golden():
    B = EntireProduct(ZeroSet(np.array([-1.0, 1.0])))
    plan = lemma1_constants(B, 0.5)
    # frozen values; stable when circle_samples doubles
    assert plan.eps == pytest.approx(0.18393972040178144, rel=1e-12)
    assert plan.log_c_eps == pytest.approx(2.8245134769928777, rel=1e-9)
    assert plan.rho_delta == pytest.approx(3.5918294591199874e-05, rel=1e-9)
    assert plan.c_delta == pytest.approx(4.080378653104727, rel=1e-9)
    assert plan.theta_b == pytest.approx(1.0, rel=1e-12)
    plan2 = lemma1_constants(B, 0.5, circle_samples=1440)
    assert plan2.rho_delta == pytest.approx(plan.rho_delta, rel=1e-9)


def test_plan_ranges_and_clamp():
    plan = lemma1_constants(B8, 0.5)
    assert 0 < plan.rho_delta < 1.0 / 16.0
    assert np.all(plan.deltas_lambda < 0.25)
    assert plan.delta_effective < 1.0 / math.e
    small = lemma1_constants(B8, 0.1)
    assert small.delta_effective == 0.1
    with pytest.raises(PreconditionError):
        lemma1_constants(B8, -1.0)


def test_translation_for_one_sided_sets():
    zs = zero_family("n_squared", 5, signs="plus")  # 1..25, no origin gap
    B = EntireProduct(zs)
    plan = lemma1_constants(B, 0.3)
    norm = zs.zeros - plan.translation
    assert np.all(np.abs(norm) > 2 * plan.deltas_lambda)  # origin excluded
    assert plan.rho_delta > 0


def test_perturb_conclusion_and_guards():
    plan = lemma1_constants(B8, 0.5)
    radii = plan.rho_delta * np.exp(-plan.delta * np.abs(plan.zeros))
    rng = np.random.default_rng(11)
    shifts = rng.uniform(-1, 1, plan.zeros.size) * radii
    D, rep = perturb(B8, plan, shifts)
    assert rep.passed, rep.worst()
    assert np.all(np.diff(D.zeros.zeros) > 0)
    with pytest.raises(PreconditionError):
        perturb(B8, plan, shifts * 0 + 2 * radii.max())
    with pytest.raises(PreconditionError):
        perturb(B8, plan, shifts[:-1])


def test_perturb_maximal_shifts():
    plan = lemma1_constants(B8, 0.5)
    radii = plan.rho_delta * np.exp(-plan.delta * np.abs(plan.zeros))
    _, rep = perturb(B8, plan, radii)
    assert rep.passed, rep.worst()
    _, rep = perturb(B8, plan, -radii)
    assert rep.passed, rep.worst()


def test_separation_check_passes():
    rep = separation_check(B8, 0.5)
    assert rep.passed, rep.worst()


def test_ratio_bound_worked_example():
    r, bound, ok = ratio_bound_check(1.0, 1.005, 2.0, 0.1)
    assert ok and r <= bound
    assert r == pytest.approx(1.01005, abs=5e-5)


def test_ratio_bound_guards():
    with pytest.raises(PreconditionError):
        ratio_bound_check(1.0, 1.005, 2.0, 1.5)
    with pytest.raises(PreconditionError):
        ratio_bound_check(1.0, 1.5, 2.0, 0.1)  # b too far from a
    with pytest.raises(PreconditionError):
        ratio_bound_check(0.05, 0.051, 2.0, 0.1)  # origin inside
    with pytest.raises(PreconditionError):
        ratio_bound_check(1.0, 1.005, 1.1, 0.1)  # x inside 2*Delta


@given(st.floats(0.01, 0.5), st.floats(-1, 1), st.floats(-1, 1),
       st.booleans())
@settings(max_examples=200, deadline=None)
def test_ratio_bound_property(Delta, tb, tx, side):
    a = (1.0 if side else -1.0) * (Delta + 0.5)
    b = a + tb * Delta * Delta * 0.999
    x = a + (2.0 * Delta + 3.0) * (1 if tx >= 0 else -1) * (1 + abs(tx))
    assume(not (a - Delta < 0 < a + Delta))
    r, bound, ok = ratio_bound_check(a, b, x, Delta)
    assert ok


def test_cauchy_bound_check():
    rep = cauchy_bound_check(B8, 0.1, [0.3 + 0.2j, 2.5, -5.0 + 1.0j])
    assert rep.passed, rep.worst()
    with pytest.raises(PreconditionError):
        cauchy_bound_check(B8, 0.5, [1.0j])  # eps >= 1/(2e)


def test_lacunary_extreme_stays_finite():
    B = EntireProduct(zero_family("lacunary_2n", 20))
    plan = lemma1_constants(B, 0.5, circle_samples=180)
    assert math.isfinite(plan.log_rho_delta)
    assert 0 <= plan.rho_delta < 1.0 / 16.0
    assert np.all(plan.deltas_lambda < 0.25)
    assert math.isfinite(plan.c_delta)
