"""Adaptive quadrature of the defining integrals, used as ground truth.

The integrator is the G7/K15 pair from :mod:`hubbell.quadrature`.
:func:`quad_I` and :func:`quad_h2d` use elementary integrands only, so they
share no numerical code with the series evaluators.
"""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Callable

from .integrals import FOUR_PI, HubbellParams
from .quadrature import DEFAULT_QCONTROL, QuadratureControl, adaptive_gk15
from .special import EvalResult, hyp2f1

__all__ = [
    "QuadratureControl",
    "adaptive_gk15",
    "quad_h_general",
    "quad_I",
    "quad_h2d",
]


def quad_h_general(params: HubbellParams, qctl: QuadratureControl = DEFAULT_QCONTROL) -> EvalResult:
    """Integrate the defining integral of ``H`` directly.

    For ``-1 < lam < 0`` the endpoint singularity ``x^lam`` is removed by
    ``x = t^(1/(lam+1))``, which turns ``x^lam dx`` into ``dt / (lam+1)``.
    """
    params.validate()
    a, p, lam = params.a, params.p, params.lam
    alpha, beta, gamma = params.alpha, params.beta, params.gamma

    inner_ok = True

    def smooth(x: float) -> float:
        nonlocal inner_ok
        u = x * x + p
        f = hyp2f1(alpha, beta, gamma, -a * a / u)
        inner_ok = inner_ok and f.converged
        return u ** (-alpha) * f.value

    if lam < 0:
        q = 1.0 / (lam + 1.0)
        res = adaptive_gk15(lambda t: smooth(t**q), 0.0, params.b ** (lam + 1.0), qctl)
        scale = q
    else:
        res = adaptive_gk15(lambda x: x**lam * smooth(x), 0.0, params.b, qctl)
        scale = 1.0
    res = res.scaled(scale * params.sigma * a / FOUR_PI)
    if not inner_ok:
        res = replace(res, converged=False)
    return res


def _plaque_integrand(a: float) -> Callable[[float], float]:
    def f(x: float) -> float:
        r = math.sqrt(x * x + 1.0)
        return math.atan(a / r) / r

    return f


def quad_I(a: float, b: float, sigma: float = 1.0, qctl: QuadratureControl = DEFAULT_QCONTROL) -> EvalResult:
    """``(sigma / 4 pi) int_0^b atan(a / sqrt(x^2+1)) / sqrt(x^2+1) dx``."""
    return adaptive_gk15(_plaque_integrand(a), 0.0, b, qctl).scaled(sigma / FOUR_PI)


def quad_h2d(a: float, b: float, qctl: QuadratureControl = DEFAULT_QCONTROL) -> EvalResult:
    """``int_0^a int_0^b dy dx / (1 + x^2 + y^2)``.

    The inner integral over ``y`` is done exactly, leaving
    ``int_0^a atan(b / sqrt(1+x^2)) / sqrt(1+x^2) dx``.
    """
    return adaptive_gk15(_plaque_integrand(b), 0.0, a, qctl)
