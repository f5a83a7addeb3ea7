import math
import time
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import optimize

from conftest import erlang_model, exp_degenerate_model, exp_exp_model, hyper_model
from ruinprob import (
    Degenerate,
    Erlang,
    Exponential,
    RiskModel,
    adjustment_coefficient,
    exp_exp_adjustment_closed_form,
    lundberg_bound,
    martingale_self_test,
    mgf_domain_sup,
)
from ruinprob.errors import BracketingError, DomainError, NoPositiveRootError, UnsupportedModelError
from ruinprob.lundberg import adjustment_function, martingale_expectation

R_ERLANG = 0.349093
R_HYPER = 0.110607
R_EXP_DEG = 0.195273


def degenerate_funds_oracle(c, lam, mu1, mu2):
    """Root of ``lam exp(-mu2 R) = -c mu1 R^2 + (c - lam mu1) R + lam`` on ``(0, 1/mu1)``."""

    def f(r):
        return lam * math.exp(-mu2 * r) - (-c * mu1 * r * r + (c - lam * mu1) * r + lam)

    return optimize.brentq(f, 1e-9, (1 - 1e-12) / mu1, xtol=1e-15)


def erlang_oracle():
    # lam (1 - R/1.5)^-3 (1 + R/4)^-2 = lam + c R, cleared of denominators
    def f(r):
        return 4.0 - (4.0 + 10.0 * r) * (1 - r / 1.5) ** 3 * (1 + r / 4.0) ** 2

    return optimize.brentq(f, 1e-6, 1.5 - 1e-9, xtol=1e-15)


def exp_exp_cubic_oracle(c, lam, mu1, mu2):
    """Positive root of ``lam (1 - mu1 R)^-1 (1 + mu2 R)^-1 = lam + c R`` via polynomial roots."""
    # (lam + c R)(1 - mu1 R)(1 + mu2 R) - lam = 0; one root is R = 0
    p = np.polynomial.polynomial
    poly = p.polymul(p.polymul([lam, c], [1.0, -mu1]), [1.0, mu2])
    poly[0] -= lam
    roots = np.roots(poly[::-1][:-1])  # divide out R
    inside = [r.real for r in roots if abs(r.imag) < 1e-12 and 0 < r.real < 1 / mu1]
    assert len(inside) == 1
    return inside[0]


class TestExamples:
    def test_erlang(self):
        r = adjustment_coefficient(erlang_model()).r_hat
        assert r == pytest.approx(R_ERLANG, abs=5e-6)
        assert r == pytest.approx(erlang_oracle(), abs=1e-11)

    def test_hyperexponential(self):
        assert adjustment_coefficient(hyper_model()).r_hat == pytest.approx(R_HYPER, abs=5e-6)

    def test_exp_degenerate(self):
        r = adjustment_coefficient(exp_degenerate_model()).r_hat
        assert r == pytest.approx(R_EXP_DEG, abs=5e-6)
        assert r == pytest.approx(degenerate_funds_oracle(10.0, 4.0, 2.0, 0.5), abs=1e-11)

    def test_residual_and_bracket(self, example_model):
        res = adjustment_coefficient(example_model)
        assert abs(res.residual) < 1e-12
        lo, hi = res.bracket
        assert lo < res.r_hat < hi
        assert res.iterations >= 1

    def test_runtime(self, example_model):
        adjustment_coefficient(example_model)
        start = time.perf_counter()
        for _ in range(10):
            adjustment_coefficient(example_model)
        assert (time.perf_counter() - start) / 10 < 0.010


class TestExponentialPair:
    def test_closed_form_matches_solver(self):
        model = exp_exp_model()
        assert exp_exp_adjustment_closed_form(model) == pytest.approx(
            adjustment_coefficient(model).r_hat, abs=1e-12
        )

    def test_cubic_oracle(self):
        assert exp_exp_adjustment_closed_form(exp_exp_model()) == pytest.approx(
            exp_exp_cubic_oracle(10.0, 4.0, 2.0, 0.5), abs=1e-12
        )

    def test_closed_form_rejects_other_families(self):
        with pytest.raises(UnsupportedModelError):
            exp_exp_adjustment_closed_form(erlang_model())

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0.2, 20.0), st.floats(0.2, 20.0), st.floats(0.1, 5.0), st.floats(0.01, 5.0))
    def test_solver_matches_closed_form(self, c, lam, mu1, mu2):
        if c - lam * mu1 + lam * mu2 < 1e-3 * c:
            return
        model = RiskModel(c, lam, Exponential(mu1), Exponential(mu2))
        closed = exp_exp_adjustment_closed_form(model)
        assert adjustment_coefficient(model).r_hat == pytest.approx(closed, rel=1e-8, abs=1e-12)


def test_adjustment_function_is_convex(example_model):
    res = adjustment_coefficient(example_model)
    top = min(2 * res.r_hat, 0.99 * mgf_domain_sup(example_model.claims))
    grid = np.linspace(0, top, 50)
    values = np.array([adjustment_function(example_model, r) for r in grid])
    assert np.all(np.diff(values, 2) >= -1e-12)
    # negative just right of zero, positive past the root
    assert adjustment_function(example_model, 0.5 * res.r_hat) < 0


def test_adjustment_function_at_zero():
    assert adjustment_function(erlang_model(), 0.0) == 0.0


def test_adjustment_function_outside_domain():
    assert adjustment_function(erlang_model(), 1.5) == math.inf
    assert adjustment_function(hyper_model(), 0.3) == math.inf


class TestErrors:
    def test_no_positive_root_without_profit(self):
        with pytest.raises(NoPositiveRootError, match="psi"):
            adjustment_coefficient(exp_exp_model(c=1.0))

    def test_zero_margin(self):
        with pytest.raises(NoPositiveRootError):
            adjustment_coefficient(exp_exp_model(c=6.0))

    def test_ruin_impossible_cannot_bracket(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            model = RiskModel(1.0, 1.0, Degenerate(0.3), Degenerate(0.5))
        with pytest.raises(BracketingError) as info:
            adjustment_coefficient(model)
        assert info.value.grid
        assert all(not g > 0 for _, g in info.value.grid)

    def test_bad_tolerance(self):
        with pytest.raises(DomainError):
            adjustment_coefficient(erlang_model(), tol=0.0)


class TestBound:
    def test_table_values(self):
        assert lundberg_bound(R_ERLANG, 2.0) == pytest.approx(0.497487, abs=5e-7)
        assert lundberg_bound(R_EXP_DEG, 10.0) == pytest.approx(0.141886, abs=5e-7)

    def test_bound_at_zero(self):
        assert lundberg_bound(0.3, 0.0) == 1.0

    @pytest.mark.parametrize("r, x", [(-0.1, 1.0), (0.1, -1.0)])
    def test_domain(self, r, x):
        with pytest.raises(DomainError):
            lundberg_bound(r, x)


class TestMartingale:
    def test_expectation_is_one_at_root(self, example_model):
        r = adjustment_coefficient(example_model).r_hat
        assert martingale_expectation(example_model, r, 1.0) == pytest.approx(1.0, abs=1e-11)

    def test_sample_mean_near_one(self, example_model):
        r = adjustment_coefficient(example_model).r_hat
        check = martingale_self_test(example_model, r, 1.0, 200_000, np.random.default_rng(7))
        assert abs(check.z_score) < 5

    @pytest.mark.parametrize("factory", [erlang_model, exp_degenerate_model])
    def test_detects_perturbed_exponent(self, factory):
        model = factory()
        r = 1.5 * adjustment_coefficient(model).r_hat
        check = martingale_self_test(model, r, 1.0, 200_000, np.random.default_rng(8))
        assert check.expected > 1.0
        assert (check.mean - 1.0) / check.stderr > 5

    def test_input_validation(self):
        with pytest.raises(DomainError):
            martingale_self_test(erlang_model(), 0.3, 0.0, 10, np.random.default_rng(0))


def test_erlang_oracle_sanity():
    # the oracle's equation really is the adjustment equation for the Erlang model
    r = erlang_oracle()
    model = RiskModel(10.0, 4.0, Erlang(3, 2.0), Erlang(2, 0.5))
    assert abs(adjustment_function(model, r)) < 1e-10
