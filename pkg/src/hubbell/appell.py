"""Appell's hypergeometric function F2.

``F2(s; a1, a2; b1, b2; x, y) = sum_{m,n} (s)_{m+n} (a1)_m (a2)_n
/ ((b1)_m (b2)_n m! n!) x^m y^n``

Three routes are provided: the double series itself (the reference, valid for
``|x| + |y| < 1``), the reduction to a single 2F1 when ``a2 == b2``, and the
single-sum expansion obtained by repeatedly lowering the second numerator
parameter. The last one is what the Hubbell evaluator uses.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import DomainError, NotConvergedWarning
from .special import (
    DEFAULT_CONTROL,
    EvalResult,
    Method,
    NeumaierSum,
    SeriesControl,
    _is_nonpositive_integer,
    hyp2f1,
    pochhammer,
)

__all__ = [
    "F2Args",
    "f2_double_series",
    "f2_reduce_to_2f1",
    "f2_recurrence_step",
    "f2_finite_sum",
    "finite_sum_terms",
    "finite_sum_remainder",
]


@dataclass(frozen=True)
class F2Args:
    """Parameters and arguments of ``F2(sigma; a1, a2; b1, b2; x, y)``."""

    sigma: float
    a1: float
    a2: float
    b1: float
    b2: float
    x: float
    y: float

    def __post_init__(self):
        for name in ("b1", "b2"):
            if _is_nonpositive_integer(getattr(self, name)):
                raise DomainError(f"{name} must not be a non-positive integer")

    @property
    def in_series_domain(self) -> bool:
        return abs(self.x) + abs(self.y) < 1.0


def _positive_arguments(args: F2Args) -> tuple[float, F2Args]:
    """Map negative arguments to positive ones with the Euler-type transformations.

        F2(s; a1, a2; b1, b2; x, y)
          = (1-x)^-s      F2(s; b1-a1, a2; b1, b2; x/(x-1), y/(1-x))
          = (1-y)^-s      F2(s; a1, b2-a2; b1, b2; x/(1-y), y/(y-1))
          = (1-x-y)^-s    F2(s; b1-a1, b2-a2; b1, b2; x/(x+y-1), y/(x+y-1))

    Returns ``(log of the prefactor, transformed args)``. Each branch keeps
    ``|x| + |y| < 1`` and removes the alternation in sign of the terms.
    """
    s, a1, a2, b1, b2, x, y = (
        args.sigma, args.a1, args.a2, args.b1, args.b2, args.x, args.y,
    )
    if x < 0 and y < 0:
        d = 1.0 - x - y
        return -s * math.log(d), F2Args(s, b1 - a1, b2 - a2, b1, b2, -x / d, -y / d)
    if x < 0:
        d = 1.0 - x
        return -s * math.log(d), F2Args(s, b1 - a1, a2, b1, b2, -x / d, y / d)
    if y < 0:
        d = 1.0 - y
        return -s * math.log(d), F2Args(s, a1, b2 - a2, b1, b2, x / d, -y / d)
    return 0.0, args


def f2_double_series(
    args: F2Args, ctl: SeriesControl = DEFAULT_CONTROL, transform: bool = True
) -> EvalResult:
    """Sum the F2 double series over anti-diagonals ``m + n = s``.

    Each anti-diagonal is built from the previous one by a multiplicative
    update, so no Pochhammer symbol or factorial is ever formed on its own.
    ``terms_used`` counts anti-diagonals.

    With ``transform`` (the default) negative arguments are first mapped to
    positive ones (see :func:`_positive_arguments`); near the edge of the
    domain the untransformed alternating series loses several digits.
    """
    if not args.in_series_domain:
        raise DomainError(
            f"series domain |x|+|y| < 1 violated: |{args.x}|+|{args.y}| >= 1"
        )
    log_pref = 0.0
    if transform:
        log_pref, args = _positive_arguments(args)
    res = _sum_diagonals(args, ctl)
    return res.scaled(math.exp(log_pref)) if log_pref else res


def _sum_diagonals(args: F2Args, ctl: SeriesControl) -> EvalResult:
    s0, a1, a2, b1, b2, x, y = (
        args.sigma, args.a1, args.a2, args.b1, args.b2, args.x, args.y,
    )
    diag = np.ones(1)
    acc = NeumaierSum(1.0)
    prev_mag = 1.0
    passes = 0
    mag = 0.0
    for s in range(1, ctl.max_terms):
        n = np.arange(s, 0, -1, dtype=float)  # n = s - m for m = 0..s-1
        new = np.empty(s + 1)
        new[:s] = diag * ((s0 + s - 1) * y) * (a2 + n - 1) / ((b2 + n - 1) * n)
        new[s] = diag[-1] * (s0 + s - 1) * (a1 + s - 1) * x / ((b1 + s - 1) * s)
        diag = new
        acc.add(math.fsum(diag))
        mag = float(np.abs(diag).sum())
        total = acc.value
        if mag <= ctl.rel_tol * abs(total) and mag <= prev_mag:
            passes += 1
            if passes >= ctl.consecutive_passes:
                return EvalResult(total, s + 1, mag, True, Method.DOUBLE_SERIES)
        else:
            passes = 0
        prev_mag = mag
    warnings.warn(
        f"F2 double series did not converge in {ctl.max_terms} anti-diagonals",
        NotConvergedWarning,
        stacklevel=3,
    )
    return EvalResult(acc.value, ctl.max_terms, mag, False, Method.DOUBLE_SERIES)


def f2_reduce_to_2f1(args: F2Args, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """Degenerate case ``a2 == b2``: ``(1-y)^-sigma 2F1(sigma, a1; b1; x/(1-y))``."""
    if args.a2 != args.b2:
        raise DomainError(f"reduction needs a2 == b2, got a2={args.a2}, b2={args.b2}")
    if not args.y < 1.0:
        raise DomainError(f"reduction needs y < 1, got y={args.y}")
    inner = hyp2f1(args.sigma, args.a1, args.b1, args.x / (1.0 - args.y), ctl)
    return replace(inner.scaled((1.0 - args.y) ** (-args.sigma)), method=Method.CLOSED_FORM)


def f2_recurrence_step(
    args: F2Args, n: int, ctl: SeriesControl = DEFAULT_CONTROL
) -> EvalResult:
    """Right-hand side of the downward recurrence in the second numerator parameter.

    Returns

        F2(s; a1, a2; b1, b2; x, y)
          - (s*y/b2) * sum_{k=1..n} F2(s+1; a1, a2-k+1; b1, b2+1; x, y)

    which equals ``F2(s; a1, a2 - n; b1, b2; x, y)``. Every F2 on the right
    is summed as a double series; this is a check on the identity, not a
    production evaluator.
    """
    if n < 1 or int(n) != n:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    head = f2_double_series(args, ctl)
    corr = NeumaierSum()
    err = head.est_error
    terms = head.terms_used
    converged = head.converged
    for k in range(1, int(n) + 1):
        shifted = F2Args(args.sigma + 1, args.a1, args.a2 - k + 1, args.b1, args.b2 + 1, args.x, args.y)
        r = f2_double_series(shifted, ctl)
        corr.add(r.value)
        err += abs(args.sigma * args.y / args.b2) * r.est_error
        terms += r.terms_used
        converged = converged and r.converged
    value = head.value - args.sigma * args.y / args.b2 * corr.value
    return EvalResult(value, terms, err, converged, Method.RECURRENCE)


def _check_finite_sum_inputs(a, b, p, beta, gamma):
    if not a >= 0:
        raise DomainError("a >= 0 required")
    if not b > 0:
        raise DomainError("b > 0 required")
    if not p > 0:
        raise DomainError("p > 0 required")
    if not gamma > beta > 0:
        raise DomainError("gamma > beta > 0 required")


def finite_sum_terms(alpha, beta, gamma, lam, a, b, p, n, ctl=DEFAULT_CONTROL):
    """Yield the first ``n + 1`` summands of the finite-sum expansion.

    Summand ``k`` is ``(alpha)_k / ((3+lam)/2)_k * r^k * (1+b^2/p)^-alpha
    * 2F1(alpha+k, beta; gamma; -a^2/(p+b^2))`` with ``r = (b^2/p)/(1+b^2/p)``.
    Each 2F1 is evaluated independently.
    """
    ratio_b = b * b / p
    r = ratio_b / (1.0 + ratio_b)
    z = -a * a / (p + b * b)
    shift = (3.0 + lam) / 2.0
    coef = (1.0 + ratio_b) ** (-alpha)
    for k in range(n + 1):
        yield coef * hyp2f1(alpha + k, beta, gamma, z, ctl).value
        coef *= (alpha + k) / (shift + k) * r


def f2_finite_sum(
    alpha: float,
    beta: float,
    gamma: float,
    lam: float,
    a: float,
    b: float,
    p: float,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> EvalResult:
    """``F2(alpha; beta, (lam+1)/2; gamma, (lam+3)/2; -a^2/p, -b^2/p)`` as a single sum.

    The number of summands grows until ``consecutive_passes`` successive
    increments are each below ``rel_tol`` times the running sum. The sum is
    not restricted to ``a^2/p + b^2/p < 1``: its summands decay geometrically
    with ratio ``(b^2/p)/(1+b^2/p)`` for any positive ``a, b, p``.

    The inner 2F1 evaluations always run at full precision, so ``rel_tol``
    only controls the truncation of the outer sum.
    """
    _check_finite_sum_inputs(a, b, p, beta, gamma)
    inner = replace(ctl, rel_tol=min(ctl.rel_tol, DEFAULT_CONTROL.rel_tol))
    ratio_b = b * b / p
    r = ratio_b / (1.0 + ratio_b)
    z = -a * a / (p + b * b)
    shift = (3.0 + lam) / 2.0

    acc = NeumaierSum()
    coef = (1.0 + ratio_b) ** (-alpha)
    passes = 0
    term = 0.0
    for k in range(ctl.max_terms):
        term = coef * hyp2f1(alpha + k, beta, gamma, z, inner).value
        acc.add(term)
        total = acc.value
        if k > 0 and abs(term) < ctl.rel_tol * abs(total):
            passes += 1
            if passes >= ctl.consecutive_passes:
                return EvalResult(total, k + 1, abs(term), True, Method.FINITE_SUM)
        else:
            passes = 0
        coef *= (alpha + k) / (shift + k) * r
    warnings.warn(
        f"finite sum did not converge in {ctl.max_terms} terms (b^2/p = {ratio_b:g})",
        NotConvergedWarning,
        stacklevel=2,
    )
    return EvalResult(acc.value, ctl.max_terms, abs(term), False, Method.FINITE_SUM)


def finite_sum_remainder(alpha, beta, gamma, lam, a, b, p, n, ctl=DEFAULT_CONTROL) -> EvalResult:
    """Exact remainder after summands ``0..n`` of :func:`f2_finite_sum`.

    ``(alpha)_{n+1} / ((3+lam)/2)_{n+1} (b^2/p)^{n+1}
    * F2(alpha+n+1; beta, (lam+2n+3)/2; gamma, (lam+2n+5)/2; -a^2/p, -b^2/p)``,
    with the F2 summed as a double series, so ``(a^2 + b^2)/p < 1`` is needed.
    """
    x, y = -a * a / p, -b * b / p
    coef = pochhammer(alpha, n + 1) / pochhammer((3.0 + lam) / 2.0, n + 1) * (-y) ** (n + 1)
    args = F2Args(alpha + n + 1, beta, (lam + 2 * n + 3) / 2.0, gamma, (lam + 2 * n + 5) / 2.0, x, y)
    return f2_double_series(args, ctl).scaled(coef)
