"""The generalized Hubbell rectangular-source integral and its special cases.

    H[a, b, p, lam; alpha, beta, gamma]
        = (sigma a / 4 pi) int_0^b x^lam (x^2+p)^-alpha
          2F1(alpha, beta; gamma; -a^2/(x^2+p)) dx

reduces to ``(sigma a b^(lam+1) / (4 pi (lam+1) p^alpha))`` times an Appell
F2 with arguments ``(-a^2/p, -b^2/p)``, which :func:`~hubbell.appell.f2_finite_sum`
evaluates as a positive single sum.

The classical plaque integral is ``I(a, b) = H[a, b, 1, 0; 1, 1/2, 3/2]`` and
the detector response is ``h(a, b) = 4 pi I(a, b) / sigma``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .appell import f2_finite_sum
from .exceptions import InvalidParams
from .special import DEFAULT_CONTROL, EvalResult, Method, SeriesControl, hyp2f1m1

__all__ = [
    "HubbellParams",
    "eval_h_general",
    "eval_h_lambda0",
    "eval_h_closed_half",
    "eval_I",
    "eval_detector_response",
    "CLASSICAL",
    "HALF_CASE",
]

FOUR_PI = 4.0 * math.pi

# (lam, alpha, beta, gamma) of the classical plaque integral and of the
# case with an elementary closed form.
CLASSICAL = (0.0, 1.0, 0.5, 1.5)
HALF_CASE = (1.0, 0.5, 0.5, 1.0)


@dataclass(frozen=True)
class HubbellParams:
    """Full parameter tuple of the generalized integral.

    ``a = w/h`` and ``b = l/h`` are the plaque width and length over the
    detector height; ``sigma`` is the source strength per unit area.

    Validation enforces ``a, b, p > 0``, ``gamma > beta > 0`` and
    ``lam > -1``. The upper bound ``lam < 2 alpha - 1`` sometimes quoted for
    this integral only matters for an infinite strip (``b = inf``), which is
    not supported, so it is not enforced.
    """

    a: float
    b: float
    p: float
    lam: float = CLASSICAL[0]
    alpha: float = CLASSICAL[1]
    beta: float = CLASSICAL[2]
    gamma: float = CLASSICAL[3]
    sigma: float = 1.0

    def validate(self) -> "HubbellParams":
        checks = [
            (self.a > 0, "a > 0"),
            (self.b > 0, "b > 0"),
            (self.p > 0, "p > 0"),
            (self.beta > 0, "beta > 0"),
            (self.gamma > self.beta, "gamma > beta"),
            (self.lam > -1, "lambda > -1"),
            (math.isfinite(self.b), "b finite"),
            (math.isfinite(self.sigma), "sigma finite"),
        ]
        for ok, name in checks:
            if not ok:
                raise InvalidParams(f"constraint violated: {name} ({self})")
        return self

    def prefactor(self) -> float:
        """``sigma a b^(lam+1) / (4 pi (lam+1) p^alpha)``."""
        return (
            self.sigma * self.a * self.b ** (self.lam + 1)
            / (FOUR_PI * (self.lam + 1) * self.p**self.alpha)
        )

    def shape(self) -> tuple[float, float, float, float]:
        return (self.lam, self.alpha, self.beta, self.gamma)

    def as_dict(self) -> dict:
        return {
            "a": self.a, "b": self.b, "p": self.p, "lambda": self.lam,
            "alpha": self.alpha, "beta": self.beta, "gamma": self.gamma,
            "sigma": self.sigma,
        }


def eval_h_general(params: HubbellParams, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """Evaluate ``H[a, b, p, lam; alpha, beta, gamma]`` by the adaptive finite sum.

    Convergence diagnostics (terms used, last increment) come from the
    inner sum, rescaled by the prefactor.
    """
    params.validate()
    inner = f2_finite_sum(
        params.alpha, params.beta, params.gamma, params.lam,
        params.a, params.b, params.p, ctl,
    )
    return inner.scaled(params.prefactor())


def eval_h_lambda0(
    a: float, b: float, p: float, sigma: float = 1.0, ctl: SeriesControl = DEFAULT_CONTROL
) -> EvalResult:
    """``H[a, b, p, 0; 1, 1/2, 3/2]``, the plaque integral with a shifted height.

    The summand coefficients reduce to ``k! / (3/2)_k``.
    """
    params = HubbellParams(a, b, p, *CLASSICAL, sigma=sigma).validate()
    inner = f2_finite_sum(1.0, 0.5, 1.5, 0.0, a, b, p, ctl)
    return inner.scaled(sigma * a * b / (FOUR_PI * p))


def eval_h_closed_half(
    a: float, b: float, p: float, sigma: float = 1.0, ctl: SeriesControl = DEFAULT_CONTROL
) -> EvalResult:
    """Closed form of ``H[a, b, p, 1; 1/2, 1/2, 1]``.

        (sigma a sqrt(p) / 4 pi) [ sqrt(1 + b^2/p) 2F1(-1/2, 1/2; 1; -a^2/(p+b^2))
                                   - 2F1(-1/2, 1/2; 1; -a^2/p) ]

    Two 2F1 evaluations and no truncated outer sum, which makes this an
    independent check on :func:`eval_h_general` for that parameter shape.

    Both 2F1 values sit close to 1 when ``a`` or ``b`` is small, so the
    bracket is regrouped as ``(s - 1) F_far + (F_far - 1) - (F_near - 1)``
    with ``s = sqrt(1 + b^2/p)``, avoiding the subtraction of nearly equal
    numbers. What cannot be regrouped away is that the bracket is an
    ``O(b^2/p)`` difference of two ``O(1)`` terms, so about ``log10(p/b^2)``
    digits are lost when ``b^2 << p``; the finite sum has no such loss.
    """
    HubbellParams(a, b, p, *HALF_CASE, sigma=sigma).validate()
    t_far = hyp2f1m1(-0.5, 0.5, 1.0, -a * a / (p + b * b), ctl)
    t_near = hyp2f1m1(-0.5, 0.5, 1.0, -a * a / p, ctl)
    stretch_m1 = math.expm1(0.5 * math.log1p(b * b / p))
    pref = sigma * a * math.sqrt(p) / FOUR_PI
    value = pref * (stretch_m1 * (1.0 + t_far.value) + (t_far.value - t_near.value))
    err = abs(pref) * ((1.0 + stretch_m1) * t_far.est_error + t_near.est_error)
    return EvalResult(
        value,
        t_far.terms_used + t_near.terms_used,
        err,
        t_far.converged and t_near.converged,
        Method.CLOSED_FORM,
    )


def eval_I(
    a: float, b: float, sigma: float = 1.0, ctl: SeriesControl = DEFAULT_CONTROL
) -> EvalResult:
    """Hubbell's plaque integral ``I(a, b)``.

    The geometric convention is ``0 < a <= b``; ``a > b`` is accepted with a
    ``UserWarning`` since the integral itself does not need the ordering.
    """
    if a > b:
        warnings.warn(
            f"plaque convention is 0 < a <= b, got a={a} > b={b}", UserWarning, stacklevel=2
        )
    return eval_h_lambda0(a, b, 1.0, sigma, ctl)


def eval_detector_response(
    a: float, b: float, ctl: SeriesControl = DEFAULT_CONTROL
) -> EvalResult:
    """Detector response ``h(a, b) = a b F2(1; 1/2, 1/2; 3/2, 3/2; -a^2, -b^2)``."""
    return eval_h_lambda0(a, b, 1.0, 1.0, ctl).scaled(FOUR_PI)

