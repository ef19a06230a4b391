import math
import warnings

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hubbell.appell import F2Args, f2_double_series
from hubbell.exceptions import InvalidParams
from hubbell.integrals import (
    CLASSICAL,
    FOUR_PI,
    HALF_CASE,
    HubbellParams,
    eval_detector_response,
    eval_h_closed_half,
    eval_h_general,
    eval_h_lambda0,
    eval_I,
)
from hubbell.oracle import quad_h2d, quad_h_general, quad_I
from hubbell.special import Method, SeriesControl, hyp2f1

from conftest import rel_err

pos = st.floats(0.05, 3.0)
EPS = 2.220446049250313e-16


def mp_h(a, b, p, lam, alpha, beta, gamma, sigma=1.0):
    """Defining integral at 30 digits."""
    with mpmath.workdps(30):
        f = lambda x: x**lam * (x * x + p) ** (-alpha) * mpmath.hyp2f1(alpha, beta, gamma, -a * a / (x * x + p))
        return sigma * a / (4 * mpmath.pi) * mpmath.quad(f, [0, b])


class TestParams:
    @pytest.mark.parametrize(
        "change,name",
        [
            (dict(a=0.0), "a > 0"),
            (dict(b=-1.0), "b > 0"),
            (dict(p=0.0), "p > 0"),
            (dict(beta=0.0), "beta > 0"),
            (dict(gamma=0.5), "gamma > beta"),
            (dict(lam=-1.0), "lambda > -1"),
            (dict(b=math.inf), "b finite"),
            (dict(sigma=math.nan), "sigma finite"),
        ],
    )
    def test_names_failing_constraint(self, change, name):
        kwargs = dict(a=0.1, b=0.2, p=0.5)
        kwargs.update(change)
        with pytest.raises(InvalidParams, match=name):
            HubbellParams(**kwargs).validate()

    def test_defaults_are_classical(self):
        assert HubbellParams(1, 1, 1).shape() == CLASSICAL

    def test_prefactor(self):
        q = HubbellParams(0.1, 0.2, 0.5, *HALF_CASE, sigma=2.0)
        assert q.prefactor() == pytest.approx(2 * 0.1 * 0.04 / (FOUR_PI * 2 * math.sqrt(0.5)), rel=1e-15)

    def test_steep_exponent_accepted(self):
        # lam = 1 exceeds 2 alpha - 1 = 0, yet the integral is finite for finite b
        HubbellParams(0.1, 0.2, 0.5, *HALF_CASE).validate()


class TestGeneral:
    @pytest.mark.parametrize(
        "args,expect",
        [
            ((0.1, 0.2, 0.5, *HALF_CASE), 0.00021969830536116192),
            ((0.5, 1.0, 2.5, *HALF_CASE), 0.011293885774813332),
            ((0.8, 2.6, 7.5, *CLASSICAL), 0.017255112588899273),
        ],
    )
    def test_published(self, args, expect):
        r = eval_h_general(HubbellParams(*args))
        assert r.converged and r.method is Method.FINITE_SUM
        assert rel_err(r.value, expect) < 1e-13

    @pytest.mark.parametrize(
        "args",
        [
            (0.3, 0.7, 1.3, -0.6, 0.8, 0.4, 1.7),
            (1.4, 0.9, 0.6, 2.5, 1.2, 0.7, 0.9),
            (0.05, 2.0, 0.4, 0.0, 2.0, 1.5, 3.0),
            (2.5, 1.5, 0.3, 0.5, 0.5, 0.5, 1.0),
        ],
    )
    def test_against_high_precision_integral(self, args):
        assert rel_err(eval_h_general(HubbellParams(*args)).value, mp_h(*args)) < 1e-13

    def test_small_b_vanishes_like_power(self):
        lam = 0.5
        vals = [eval_h_general(HubbellParams(0.3, b, 1.0, lam, 1.0, 0.5, 1.5)).value for b in (1e-3, 1e-4)]
        assert vals[0] / vals[1] == pytest.approx(10 ** (lam + 1), rel=1e-5)

    @given(pos, pos, st.floats(0.2, 3))
    def test_sigma_linear(self, a, b, p):
        one = eval_h_general(HubbellParams(a, b, p)).value
        two = eval_h_general(HubbellParams(a, b, p, sigma=2.0)).value
        assert two == pytest.approx(2 * one, rel=4e-16)

    @given(pos, pos, st.floats(0.2, 3), st.floats(1.01, 2))
    def test_increasing_in_a_and_b(self, a, b, p, f):
        base = eval_h_general(HubbellParams(a, b, p)).value
        assert eval_h_general(HubbellParams(a * f, b, p)).value > base
        assert eval_h_general(HubbellParams(a, b * f, p)).value > base

    @given(pos, pos, st.floats(0.2, 3))
    def test_looser_tolerance_never_costs_more(self, a, b, p):
        q = HubbellParams(a, b, p)
        counts = [eval_h_general(q, SeriesControl(rel_tol=t)).terms_used for t in (1e-5, 1e-6, 1e-9, 1e-12, 1e-15)]
        assert counts == sorted(counts)


class TestLambda0:
    @pytest.mark.parametrize(
        "a,b,p,expect",
        [(0.1, 0.1, 0.5, 0.001570716369171686), (0.5, 0.5, 1.0, 0.01718850607704923)],
    )
    def test_published(self, a, b, p, expect):
        assert rel_err(eval_h_lambda0(a, b, p).value, expect) < 1e-13

    @given(pos, pos, st.floats(0.2, 3))
    def test_matches_general(self, a, b, p):
        g = eval_h_general(HubbellParams(a, b, p)).value
        assert rel_err(eval_h_lambda0(a, b, p).value, g) < 1e-14

    def test_linear_in_small_a(self):
        v1, v2 = (eval_h_lambda0(a, 0.7, 1.2).value for a in (1e-6, 2e-6))
        assert v2 / v1 == pytest.approx(2.0, rel=1e-9)


class TestClosedHalf:
    @pytest.mark.parametrize(
        "a,b,p,expect",
        [(0.1, 0.5, 0.5, 0.0012595188919755733), (0.5, 0.5, 0.5, 0.0057948842707049595)],
    )
    def test_published(self, a, b, p, expect):
        r = eval_h_closed_half(a, b, p)
        assert r.method is Method.CLOSED_FORM
        assert rel_err(r.value, expect) < 1e-13

    def test_small_b_vanishes(self):
        assert abs(eval_h_closed_half(0.4, 1e-9, 1.0).value) < 1e-19

    @given(pos, pos, st.floats(0.2, 3))
    def test_matches_finite_sum(self, a, b, p):
        closed = eval_h_closed_half(a, b, p).value
        summed = eval_h_general(HubbellParams(a, b, p, *HALF_CASE)).value
        # the bracket cancels when b^2 << p; allow for its condition number
        far = math.sqrt(1 + b * b / p) * hyp2f1(-0.5, 0.5, 1.0, -a * a / (p + b * b)).value
        near = hyp2f1(-0.5, 0.5, 1.0, -a * a / p).value
        kappa = (far + near) / abs(far - near)
        assert rel_err(closed, summed) < max(1e-13, 50 * EPS * kappa)

    def test_wide_plaque(self):
        # large a drives the 2F1 arguments far below -20 with a - b integral
        args = (30.0, 0.5, 1.0, *HALF_CASE)
        ref = mp_h(*args)
        assert rel_err(eval_h_closed_half(30.0, 0.5, 1.0).value, ref) < 1e-12
        assert rel_err(eval_h_general(HubbellParams(*args)).value, ref) < 1e-13


class TestPlaque:
    def test_I_delegates(self):
        assert eval_I(0.1, 0.1).value == eval_h_lambda0(0.1, 0.1, 1.0).value

    def test_I_against_quadrature(self):
        assert rel_err(eval_I(0.5, 0.5).value, quad_I(0.5, 0.5).value) < 1e-11

    def test_wide_limit(self):
        with pytest.warns(UserWarning, match="0 < a <= b"):
            r = eval_I(1e6, 1.0)
        assert rel_err(FOUR_PI * r.value, math.pi / 2 * math.asinh(1.0)) < 1e-5

    def test_ordered_inputs_do_not_warn(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            eval_I(0.3, 0.4)

    def test_response_double_series(self):
        h = eval_detector_response(0.2, 0.3).value
        f2 = f2_double_series(F2Args(1.0, 0.5, 0.5, 1.5, 1.5, -0.04, -0.09)).value
        assert rel_err(h, 0.06 * f2) < 1e-12

    def test_response_quadrature(self):
        assert rel_err(eval_detector_response(1.0, 1.0).value, quad_h2d(1.0, 1.0).value) < 1e-10

    @settings(max_examples=50)
    @given(st.floats(0.05, 5), st.floats(0.05, 5))
    def test_response_symmetric(self, a, b):
        h_ab = eval_detector_response(a, b).value
        h_ba = eval_detector_response(b, a).value
        assert rel_err(h_ab, h_ba) < 1e-12

    @given(st.floats(0.1, 3), st.floats(0.1, 3))
    def test_specialization(self, a, b):
        g = eval_h_general(HubbellParams(a, b, 1.0, *CLASSICAL)).value
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)
            assert rel_err(eval_I(a, b).value, g) < 1e-14
