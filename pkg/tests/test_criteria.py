import math

import numpy as np
import pytest

from bernsmooth.criteria import (CriterionReport, debranges_sum,
                                 report_to_csv, report_to_json,
                                 singular_profile, subproduct_sums)
from bernsmooth.entire import (EntireProduct, ZeroSet,
                               log_derivative_at_zero, theta, zero_family)
from bernsmooth.errors import (DomainError, PreconditionError,
                               SupportViolationError)
from bernsmooth.weights import Weight, builtin_weight


TWO_POINT_W = Weight.from_points([-1.0, 1.0], [0.5, 0.5], bound=1.0)
TWO_POINT_B = EntireProduct(ZeroSet(np.array([-1.0, 1.0])))

E40 = EntireProduct(zero_family("n_squared", 40))
EXP_SQRT = Weight.from_function(
    lambda x: np.exp(-np.sqrt(np.abs(np.asarray(x, float)))),
    bound=1.0, name="exp_sqrt")


def test_two_point_exact_sums():
    r = debranges_sum(TWO_POINT_W, TWO_POINT_B, 0)
    assert r.total == 2.0
    assert r.verdict == "converged"
    assert debranges_sum(TWO_POINT_W, TWO_POINT_B, 1).total == 1.0


def test_terms_positive_and_sums_increasing():
    r = debranges_sum(EXP_SQRT, E40, 0)
    terms = np.array(r.terms)
    sums = np.array(r.partial_sums)
    assert np.all(terms > 0)
    # strictly increasing mathematically; nondecreasing once terms shrink
    # below one ulp of the running sum
    assert np.all(np.diff(sums) >= 0)
    assert np.all(np.diff(np.abs(r.lambdas)) >= 0)


def test_monotone_in_k():
    r0 = debranges_sum(EXP_SQRT, E40, 0)
    r1 = debranges_sum(EXP_SQRT, E40, 1)
    assert np.all(np.array(r1.partial_sums) <= np.array(r0.partial_sums))


def test_support_violation_names_zero():
    w = Weight.from_points([1.0], [0.5], bound=1.0)  # -1 carries no mass
    with pytest.raises(SupportViolationError, match="-1"):
        debranges_sum(w, TWO_POINT_B, 0)
    with pytest.raises(PreconditionError):
        debranges_sum(TWO_POINT_W, TWO_POINT_B, -1)


def test_theta_consistency():
    w_one = Weight.from_function(
        lambda x: np.ones_like(np.asarray(x, float)), bound=1.0, name="one")
    total = debranges_sum(w_one, E40, 0).total
    assert abs(total - theta(E40)) <= 1e-12 * theta(E40)


def test_truncation_stability():
    # re-running at n<=80 must only move terms via the B' truncation effect
    E80 = EntireProduct(zero_family("n_squared", 80))
    r40 = debranges_sum(EXP_SQRT, E40, 0)
    r80 = debranges_sum(EXP_SQRT, E80, 0)
    common = {lam: t for lam, t in zip(r80.lambdas, r80.terms)
              if abs(lam) <= 1600}
    dropped = np.array([float(n * n) for n in range(41, 81)])
    for lam, t in zip(r40.lambdas, r40.terms):
        # the finer truncation multiplies |B'| by paired factors
        # (1 - lam^2/mu^2) < 1, so each term can only grow, and by no more
        # than the reciprocal of that product
        factor = float(np.prod(1.0 - lam * lam / dropped ** 2))
        assert t <= common[lam] * (1 + 1e-12)
        assert t >= common[lam] * factor * (1 - 1e-12)


def test_singular_profile_constructed_transition():
    zs = zero_family("n_squared", 40)
    E = EntireProduct(zs)
    wvals = np.array([math.exp(-log_derivative_at_zero(E, l)[1]) / (1 + l * l)
                      for l in zs.zeros])
    w = Weight.from_points(zs.zeros, wvals, bound=float(wvals.max()))
    reports, n_est = singular_profile(w, E, 3)
    assert n_est == 1
    # direct term inspection: shift-k terms equal (1+lam^2)^(1-k)
    for k, rep in enumerate(reports):
        expect = (1.0 + np.array(rep.lambdas) ** 2) ** (1 - k)
        assert np.allclose(rep.terms, expect, rtol=1e-9)


def test_singular_profile_guards_and_finite_note():
    with pytest.raises(DomainError):
        singular_profile(EXP_SQRT, E40, 2)  # non-discrete weight
    wd = Weight.from_points([-1.0, 1.0], [0.5, 0.5], bound=1.0)
    with pytest.raises(PreconditionError):
        singular_profile(wd, TWO_POINT_B, 0)
    reports, n_est = singular_profile(wd, TWO_POINT_B, 2)
    assert n_est is None
    assert "finite truncation" in reports[0].notes


def test_subproduct_sums():
    reps = subproduct_sums(EXP_SQRT, E40, ["all", "every_other", "positive"])
    base = debranges_sum(EXP_SQRT, E40, 0)
    assert np.allclose(reps[0].terms, base.terms)
    assert "one-sided family" in reps[2].notes
    with pytest.raises(PreconditionError):
        subproduct_sums(EXP_SQRT, E40, [lambda z: z > 1e9])
    with pytest.raises(DomainError):
        subproduct_sums(EXP_SQRT, E40, ["bogus"])


def test_factor_dropping_grows_terms_on_lacunary():
    # dropping factors with |1 - lam/mu| > 1 shrinks |F'| at kept zeros
    E = EntireProduct(zero_family("lacunary_2n", 10))
    reps = subproduct_sums(EXP_SQRT, E, ["every_other"])
    base_terms = {lam: t for lam, t in
                  zip(*[debranges_sum(EXP_SQRT, E, 0).lambdas,
                        debranges_sum(EXP_SQRT, E, 0).terms])}
    kept = E.zeros.zeros[np.arange(E.zeros.size) % 2 == 0]
    sub = EntireProduct(ZeroSet(kept))
    for lam in kept:
        _, lb_full = log_derivative_at_zero(E, float(lam))
        _, lb_sub = log_derivative_at_zero(sub, float(lam))
        dropped = np.setdiff1d(E.zeros.zeros, kept)
        if np.all(np.abs(1.0 - lam / dropped) > 1.0):
            assert lb_sub < lb_full


def test_serialization(tmp_path):
    r = debranges_sum(TWO_POINT_W, TWO_POINT_B, 0)
    csv_path = tmp_path / "r.csv"
    report_to_csv(r, str(csv_path))
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "# schema=1"
    assert lines[2] == "lambda,term,partial_sum"
    assert len(lines) == 5
    json_path = tmp_path / "r.json"
    report_to_json(r, str(json_path))
    import json
    data = json.loads(json_path.read_text())
    assert data["total"] == 2.0 and data["verdict"] == "converged"
