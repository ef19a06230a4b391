import math
import warnings

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hubbell.exceptions import DomainError, NotConvergedWarning
from hubbell.special import (
    EvalResult,
    Method,
    NeumaierSum,
    SeriesControl,
    hyp2f1,
    hyp2f1_pfaff,
    hyp2f1_series,
    hyp2f1m1,
    pochhammer,
)

from conftest import rel_err


def mp_hyp2f1(a, b, c, z):
    with mpmath.workdps(60):
        return mpmath.hyp2f1(a, b, c, z)


def mp_taylor(a, b, c, z, dps=200):
    """Brute-force Gauss series in exact-ish arithmetic; only for |z| < 1."""
    with mpmath.workdps(dps):
        a, b, c, z = (mpmath.mpf(v) for v in (a, b, c, z))
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        k = 0
        while abs(term) > mpmath.mpf(10) ** (-dps + 5):
            term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
            total += term
            k += 1
        return total


class TestPochhammer:
    def test_empty_product(self):
        assert pochhammer(0.5, 0) == 1.0

    def test_half_integer(self):
        assert pochhammer(0.5, 3) == pytest.approx(1.875, rel=1e-15)

    def test_factorial_ratio(self):
        assert pochhammer(2.0, 4) == 120.0

    def test_through_pole(self):
        # Gamma(-2) is a pole but the product is fine
        assert pochhammer(-2.0, 2) == 2.0
        assert pochhammer(-2.0, 5) == 0.0

    def test_overflow_is_inf(self):
        assert pochhammer(1e3, 400) == math.inf

    @pytest.mark.parametrize("k", [-1, 1.5])
    def test_bad_k(self, k):
        with pytest.raises(ValueError):
            pochhammer(1.0, k)

    @given(st.floats(-20, 20), st.integers(0, 60))
    def test_step_identity(self, alpha, k):
        lhs = pochhammer(alpha, k + 1)
        rhs = pochhammer(alpha, k) * (alpha + k)
        assert lhs == pytest.approx(rhs, rel=1e-14, abs=1e-300)

    @given(st.floats(0.1, 10), st.integers(0, 40))
    def test_gamma_quotient(self, alpha, k):
        expect = math.exp(math.lgamma(alpha + k) - math.lgamma(alpha))
        assert pochhammer(alpha, k) == pytest.approx(expect, rel=1e-11)


class TestSeriesControl:
    @pytest.mark.parametrize(
        "kwargs",
        [{"rel_tol": 0.0}, {"rel_tol": 1.0}, {"max_terms": 0}, {"consecutive_passes": 0},
         {"max_terms": 2.5}],
    )
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            SeriesControl(**kwargs)

    def test_defaults(self):
        ctl = SeriesControl()
        assert (ctl.rel_tol, ctl.max_terms, ctl.consecutive_passes) == (1e-15, 10_000, 2)


def test_neumaier_recovers_lost_bits():
    acc = NeumaierSum()
    for x in (1.0, 1e100, 1.0, -1e100):
        acc.add(x)
    assert acc.value == 2.0


def test_eval_result_scaled():
    r = EvalResult(2.0, 3, 0.5, True, Method.SERIES).scaled(-2.0)
    assert (r.value, r.est_error, r.terms_used) == (-4.0, 1.0, 3)
    assert r.as_dict()["method"] == "Series"


class TestHyp2f1Values:
    def test_arctan_at_one(self):
        r = hyp2f1(1, 0.5, 1.5, -1.0)
        assert r.value == pytest.approx(math.pi / 4, rel=1e-15)
        assert r.method is Method.PFAFF
        assert r.converged

    @pytest.mark.parametrize("params", [(1, 2, 3), (0.5, 0.5, 1), (-3.2, 7, 0.4)])
    def test_zero_argument(self, params):
        r = hyp2f1(*params, 0.0)
        assert r.value == 1.0 and r.converged

    def test_oracle_small_argument(self, mp200):
        z = -0.02 / 1.04
        ref = mp_taylor(0.5, 0.5, 1.0, z)
        r = hyp2f1(0.5, 0.5, 1.0, z)
        assert r.method is Method.SERIES
        assert rel_err(r.value, ref) < 1e-13

    @pytest.mark.parametrize(
        "a,b,c,z",
        [
            (1.0, 0.5, 1.5, -0.3),
            (0.5, 0.5, 1.0, -0.49),
            (-0.5, 0.5, 1.0, -0.9),
            (2.5, 0.5, 1.5, -3.0),
            (7.0, 0.5, 1.5, -0.2),
            (30.0, 0.5, 1.5, -0.4),
            (1.0, 0.5, 1.5, -250.0),
            (3.5, 1.25, 2.0, -1e4),
            (0.3, 2.7, 4.1, -0.75),
            (12.0, 3.0, 0.5, -0.1),
        ],
    )
    def test_against_mpmath(self, a, b, c, z):
        r = hyp2f1(a, b, c, z)
        assert r.converged
        assert rel_err(r.value, mp_hyp2f1(a, b, c, z)) < 1e-12

    def test_inversion_path_large_argument(self):
        x = 1e6
        r = hyp2f1(1.0, 0.5, 1.5, -x * x)
        assert r.method is Method.INVERSION
        assert r.value == pytest.approx(math.atan(x) / x, rel=1e-13)

    def test_terminating_polynomial(self):
        # 2F1(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
        b, c, z = 0.7, 1.3, -5.0
        expect = 1 - 2 * b * z / c + b * (b + 1) * z * z / (c * (c + 1))
        assert hyp2f1(-2, b, c, z).value == pytest.approx(expect, rel=1e-14)

    def test_path_labels(self):
        assert hyp2f1(1, 0.5, 1.5, -0.2).method is Method.SERIES
        assert hyp2f1(1, 0.5, 1.5, -0.5).method is Method.PFAFF
        assert hyp2f1(1, 0.5, 1.5, -5.0).method is Method.PFAFF


class TestHyp2f1Errors:
    @pytest.mark.parametrize("gamma", [0.0, -1.0, -4.0])
    def test_gamma_pole(self, gamma):
        with pytest.raises(DomainError):
            hyp2f1(1.0, 0.5, gamma, -0.1)

    def test_positive_argument(self):
        with pytest.raises(DomainError, match="z <= 0"):
            hyp2f1(1.0, 0.5, 1.5, 0.1)

    @pytest.mark.parametrize("bad", [math.nan, -math.inf])
    def test_nonfinite(self, bad):
        with pytest.raises(DomainError):
            hyp2f1(1.0, 0.5, 1.5, bad)

    def test_budget_exhausted(self):
        with pytest.warns(NotConvergedWarning):
            r = hyp2f1(1.0, 0.5, 1.5, -0.4, SeriesControl(max_terms=4))
        assert not r.converged
        assert r.terms_used <= 4
        assert r.value == pytest.approx(float(mp_hyp2f1(1.0, 0.5, 1.5, -0.4)), rel=1e-2)

    def test_forced_paths_check_domain(self):
        with pytest.raises(DomainError):
            hyp2f1_series(1, 1, 1, -1.0)
        with pytest.raises(DomainError):
            hyp2f1_pfaff(1, 1, 1, 0.5)


class TestHyp2f1m1:
    @pytest.mark.parametrize("z", [-1e-12, -1e-6, -0.01, -0.3, -0.7, -4.0])
    def test_small_difference(self, z):
        with mpmath.workdps(60):
            ref = mpmath.hyp2f1(-0.5, 0.5, 1, z) - 1
        assert rel_err(hyp2f1m1(-0.5, 0.5, 1.0, z).value, ref) < 1e-13

    def test_zero(self):
        assert hyp2f1m1(1, 2, 3, 0.0).value == 0.0


class TestProperties:
    @settings(max_examples=500)
    @given(
        st.floats(0.01, 5), st.floats(0.01, 5), st.floats(0.01, 5), st.floats(-0.49, -1e-9)
    )
    def test_pfaff_consistency(self, alpha, beta, gap, z):
        gamma = beta + gap
        direct = hyp2f1_series(alpha, beta, gamma, z)
        pfaff = hyp2f1_pfaff(alpha, beta, gamma, z)
        assert direct.converged and pfaff.converged
        assert rel_err(direct.value, pfaff.value) < 1e-12

    @given(
        st.floats(0.01, 20), st.floats(0.01, 5), st.floats(0.01, 5), st.floats(-1e3, 0)
    )
    def test_bounded_for_positive_parameters(self, alpha, beta, gap, z):
        # Euler's integral makes 2F1 a weighted mean of (1 - z t)^-alpha.
        r = hyp2f1(alpha, beta, beta + gap, z)
        assert 0.0 < r.value <= 1.0 + 1e-15

    @given(st.floats(0.05, 5), st.floats(0.05, 5), st.floats(0.05, 5), st.floats(-20, 0))
    def test_converged_error_within_tolerance(self, alpha, beta, gap, z):
        ctl = SeriesControl(rel_tol=1e-12)
        r = hyp2f1(alpha, beta, beta + gap, z, ctl)
        if r.method is Method.SERIES:
            assert r.est_error <= ctl.rel_tol * max(abs(r.value), 2.2250738585072014e-308)

    @settings(max_examples=60)
    @given(
        st.floats(0.05, 20), st.integers(-3, 3), st.floats(-0.04, 0.04),
        st.floats(0.05, 5), st.floats(1.5, 12),
    )
    def test_degenerate_large_argument(self, beta, shift, jitter, gap, log_x):
        # a - b within 0.04 of an integer, where the 1/z formula breaks down
        alpha = beta + shift + jitter
        z = -(10.0**log_x)
        r = hyp2f1(alpha, beta, beta + gap, z)
        assert r.converged
        assert rel_err(r.value, mp_hyp2f1(alpha, beta, beta + gap, z)) < 1e-12

    @given(st.floats(0.1, 30))
    def test_arctan_identity(self, x):
        r = hyp2f1(0.5, 1.0, 1.5, -x * x)
        assert x * r.value == pytest.approx(math.atan(x), rel=1e-13)


def test_no_warning_on_converged_call():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        hyp2f1(2.0, 0.5, 1.5, -12.0)
