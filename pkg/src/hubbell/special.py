"""Pochhammer symbols and the Gauss hypergeometric function 2F1.

Only real parameters and non-positive real arguments are supported, which
is everything the Hubbell integrals generate: the arguments are always of
the form ``-a**2 / (p + x**2)``.

Evaluation paths for ``2F1(a, b; c; z)``:

* ``-0.5 < z <= 0``: the Gauss power series directly, provided the
  alternating terms do not cancel badly (large ``a`` or ``b``).
* ``z <= -0.5`` (or the direct series was ill-conditioned): the Pfaff
  transformation ``(1 - z)**-a * 2F1(a, c - b; c; z / (z - 1))``.
* ``z < -INVERSION_THRESHOLD`` with ``a - b`` not close to an integer: the
  ``z -> 1/z`` connection formula, since the Pfaff argument is then too close
  to 1 for the series to be practical.
* ``z < -INVERSION_THRESHOLD`` with ``a - b`` near an integer, where the 1/z
  formula degenerates: Euler's integral, when ``c > b > 0`` (or ``c > a > 0``).
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace

from .exceptions import DomainError, NotConvergedWarning

__all__ = [
    "SeriesControl",
    "EvalResult",
    "Method",
    "pochhammer",
    "hyp2f1",
    "hyp2f1m1",
    "NeumaierSum",
]

# Pfaff is used at and below this argument.
PFAFF_SWITCH = -0.5
# Below -INVERSION_THRESHOLD the 1/z connection formula is tried first.
INVERSION_THRESHOLD = 20.0
# a - b must be at least this far from an integer for the 1/z formula.
INVERSION_MIN_GAP = 0.05
# Direct series with sum(|t|) / |sum| above this is compared against Pfaff.
MAX_AMPLIFICATION = 64.0
# Quadrature cannot resolve much below this; see the roundoff floor in gk15.
EULER_MIN_TOL = 1e-13

_TINY = 2.2250738585072014e-308  # smallest normal double
_RESCALE_BITS = 512
_BIG = 2.0**_RESCALE_BITS


class Method(str, enum.Enum):
    SERIES = "Series"
    PFAFF = "Pfaff"
    INVERSION = "Inversion"
    FINITE_SUM = "FiniteSum"
    CLOSED_FORM = "ClosedForm"
    QUADRATURE = "Quadrature"
    DOUBLE_SERIES = "DoubleSeries"
    RECURRENCE = "Recurrence"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class SeriesControl:
    """Stopping policy for every truncated series in the package.

    A series stops once ``consecutive_passes`` successive increments each
    satisfy ``|increment| <= rel_tol * |partial sum|``.
    """

    rel_tol: float = 1e-15
    max_terms: int = 10_000
    consecutive_passes: int = 2

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValueError(f"max_terms must be a positive integer, got {self.max_terms!r}")
        if int(self.consecutive_passes) != self.consecutive_passes or self.consecutive_passes < 1:
            raise ValueError(
                f"consecutive_passes must be a positive integer, got {self.consecutive_passes!r}"
            )


DEFAULT_CONTROL = SeriesControl()


@dataclass(frozen=True)
class EvalResult:
    """A computed value together with its convergence diagnostics.

    ``est_error`` is an absolute error estimate; for series it is the
    magnitude of the last increment added.
    """

    value: float
    terms_used: int
    est_error: float
    converged: bool
    method: Method

    def __float__(self) -> float:
        return float(self.value)

    def scaled(self, factor: float) -> "EvalResult":
        """Return a copy with value and error estimate multiplied by ``factor``."""
        return EvalResult(
            value=self.value * factor,
            terms_used=self.terms_used,
            est_error=self.est_error * abs(factor),
            converged=self.converged,
            method=self.method,
        )

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "terms_used": self.terms_used,
            "est_error": self.est_error,
            "converged": self.converged,
            "method": str(self.method),
        }


class NeumaierSum:
    """Running compensated sum (Kahan-Babuska-Neumaier)."""

    __slots__ = ("_sum", "_comp")

    def __init__(self, start: float = 0.0):
        self._sum = float(start)
        self._comp = 0.0

    def add(self, x: float) -> None:
        t = self._sum + x
        if abs(self._sum) >= abs(x):
            self._comp += (self._sum - t) + x
        else:
            self._comp += (x - t) + self._sum
        self._sum = t

    def scale(self, factor: float) -> None:
        self._sum *= factor
        self._comp *= factor

    @property
    def value(self) -> float:
        return self._sum + self._comp


def pochhammer(alpha: float, k: int) -> float:
    """Rising factorial ``(alpha)_k = alpha (alpha+1) ... (alpha+k-1)``.

    Computed as an iterated product, so poles of the Gamma function never
    enter. Overflow gives ``inf`` rather than an exception.
    """
    if k < 0 or int(k) != k:
        raise ValueError(f"k must be a non-negative integer, got {k!r}")
    result = 1.0
    for i in range(int(k)):
        result *= alpha + i
    return result


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def _near_integer_gap(x: float) -> float:
    return abs(x - round(x))


@dataclass
class _Series:
    # Actual sum is value * 2**shift.
    value: float
    shift: int
    last_term: float
    terms: int
    converged: bool
    abs_sum: float

    @property
    def amplification(self) -> float:
        if self.value == 0.0:
            return math.inf
        return self.abs_sum / abs(self.value)


def _taylor(
    a: float, b: float, c: float, z: float, ctl: SeriesControl, include_one: bool = True
) -> _Series:
    """Sum the Gauss series with binary rescaling to dodge overflow.

    With ``include_one=False`` the leading 1 is left out, giving ``2F1 - 1``
    without cancellation.
    """
    lead = 1.0 if include_one else 0.0
    acc = NeumaierSum(lead)
    term = 1.0
    abs_sum = lead
    shift = 0
    passes = 0
    for j in range(ctl.max_terms - 1):
        term *= (a + j) * (b + j) / ((c + j) * (j + 1)) * z
        acc.add(term)
        abs_sum += abs(term)
        if abs(term) > _BIG:
            down = 2.0**-_RESCALE_BITS
            term *= down
            acc.scale(down)
            abs_sum *= down
            shift += _RESCALE_BITS
        s = acc.value
        if term == 0.0:
            small = True
        else:
            nxt = abs((a + j + 1) * (b + j + 1) / ((c + j + 1) * (j + 2)) * z)
            small = abs(term) <= ctl.rel_tol * abs(s) and nxt < 1.0
        if small:
            passes += 1
            if passes >= ctl.consecutive_passes:
                return _Series(s, shift, abs(term), j + 2, True, abs_sum)
        else:
            passes = 0
    return _Series(acc.value, shift, abs(term), ctl.max_terms, False, abs_sum)


def _apply_factor(mantissa: float, shift: int, log_factor: float) -> float:
    """Return ``mantissa * 2**shift * exp(log_factor)`` without spurious over/underflow."""
    if mantissa == 0.0:
        return 0.0
    if shift == 0:
        try:
            f = math.exp(log_factor)
        except OverflowError:
            f = math.inf
        if _TINY <= f < math.inf:
            return mantissa * f
    m, e = math.frexp(mantissa)
    total = e + shift + log_factor / math.log(2.0)
    ip = math.floor(total)
    try:
        return math.ldexp(m * 2.0 ** (total - ip), int(ip))
    except OverflowError:
        return math.copysign(math.inf, m)


def _pfaff_series(a, b, c, z, ctl) -> _Series:
    return _taylor(a, c - b, c, z / (z - 1.0), ctl)


def _pfaff_finish(s: _Series, a: float, z: float) -> tuple[float, float, int, bool]:
    if s.shift == 0:
        pref = (1.0 - z) ** (-a)
        if _TINY <= pref < math.inf:
            return s.value * pref, s.last_term * pref, s.terms, s.converged
    log_pref = -a * math.log1p(-z)
    value = _apply_factor(s.value, s.shift, log_pref)
    err = _apply_factor(s.last_term, s.shift, log_pref)
    return value, err, s.terms, s.converged


def _pfaff(a, b, c, z, ctl) -> tuple[float, float, int, bool]:
    return _pfaff_finish(_pfaff_series(a, b, c, z, ctl), a, z)


def _log_abs_gamma(x: float) -> tuple[float, int]:
    """``(log|Gamma(x)|, sign)``; sign 0 marks a pole."""
    if _is_nonpositive_integer(x):
        return math.inf, 0
    sign = 1 if x > 0 or math.floor(x) % 2 == 0 else -1
    return math.lgamma(x), sign


def _inversion(a, b, c, z, ctl):
    """1/z connection formula; None when a term is ill-conditioned."""
    u = 1.0 / z
    log_mz = math.log(-z)
    lg_c, sg_c = _log_abs_gamma(c)
    total = 0.0
    err = 0.0
    terms = 0
    converged = True
    for p, q in ((a, b), (b, a)):
        # Gamma(c) Gamma(q-p) / (Gamma(q) Gamma(c-p)) (-z)^-p 2F1(p, p-c+1; p-q+1; 1/z)
        lg_qp, sg_qp = _log_abs_gamma(q - p)
        lg_q, sg_q = _log_abs_gamma(q)
        lg_cp, sg_cp = _log_abs_gamma(c - p)
        if sg_cp == 0 or sg_q == 0:
            continue  # reciprocal Gamma vanishes
        s = _taylor(p, p - c + 1.0, p - q + 1.0, u, ctl)
        if s.amplification > MAX_AMPLIFICATION:
            return None
        log_coef = lg_c + lg_qp - lg_q - lg_cp - p * log_mz
        sign = sg_c * sg_qp * sg_q * sg_cp
        total += sign * _apply_factor(s.value, s.shift, log_coef)
        err += _apply_factor(s.last_term, s.shift, log_coef)
        terms = max(terms, s.terms)
        converged = converged and s.converged
    return total, err, terms, converged


def _euler(a, b, c, z, ctl):
    """Euler's integral; None unless ``c > b > 0`` after an optional swap.

        Gamma(c) / (Gamma(b) Gamma(c-b)) int_0^1 t^(b-1) (1-t)^(c-b-1) (1-zt)^-a dt

    The range is cut at ``t0 = 1/|z|`` and ``1/2``. The endpoint powers are
    absorbed by ``t = u^(1/b)`` on ``[0, t0]`` and ``1 - t = v^(1/(c-b))`` on
    ``[1/2, 1]``; in between the mass can be spread evenly in ``log t``, so
    that piece is integrated in ``w = log t``.
    """
    from .quadrature import QuadratureControl, adaptive_gk15

    if not c > b > 0:
        a, b = b, a
        if not c > b > 0:
            return None
    d = c - b
    x = -z
    t0 = min(1.0 / x, 0.5)

    def integrand(t):
        return t ** (b - 1.0) * (1.0 - t) ** (d - 1.0) * math.exp(-a * math.log1p(x * t))

    def near_zero(u):
        t = u ** (1.0 / b)
        return (1.0 - t) ** (d - 1.0) * math.exp(-a * math.log1p(x * t)) / b

    def middle(w):
        t = math.exp(w)
        return integrand(t) * t

    def near_one(v):
        s = v ** (1.0 / d)
        return (1.0 - s) ** (b - 1.0) * math.exp(-a * math.log1p(x * (1.0 - s))) / d

    tol = max(ctl.rel_tol, EULER_MIN_TOL)
    qctl = QuadratureControl(abs_tol=_TINY, rel_tol=tol)
    parts = [
        adaptive_gk15(near_zero, 0.0, t0**b, qctl),
        adaptive_gk15(middle, math.log(t0), math.log(0.5), qctl),
        adaptive_gk15(near_one, 0.0, 0.5**d, qctl),
    ]
    coef = math.exp(math.lgamma(c) - math.lgamma(b) - math.lgamma(d))
    return (
        coef * math.fsum(r.value for r in parts),
        coef * sum(r.est_error for r in parts),
        sum(r.terms_used for r in parts),
        all(r.converged for r in parts),
    )


def hyp2f1(
    alpha: float,
    beta: float,
    gamma: float,
    z: float,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> EvalResult:
    """Gauss hypergeometric function ``2F1(alpha, beta; gamma; z)`` for ``z <= 0``.

    Parameters
    ----------
    alpha, beta, gamma : float
        Real parameters; ``gamma`` must not be a non-positive integer.
    z : float
        Argument, ``z <= 0``.
    ctl : SeriesControl
        Truncation policy.

    Returns
    -------
    EvalResult
        ``method`` records which evaluation path produced the value. When the
        term budget runs out the best partial value is returned with
        ``converged=False`` and a :class:`NotConvergedWarning` is issued.

    Raises
    ------
    DomainError
        If ``gamma`` is a non-positive integer, ``z > 0`` or any input is NaN.
    """
    alpha, beta, gamma, z = float(alpha), float(beta), float(gamma), float(z)
    if any(math.isnan(v) for v in (alpha, beta, gamma, z)):
        raise DomainError("hyp2f1 arguments must not be NaN")
    if _is_nonpositive_integer(gamma):
        raise DomainError(f"gamma must not be a non-positive integer, got {gamma}")
    if z > 0:
        raise DomainError(f"hyp2f1 supports z <= 0 only, got z={z}")
    if math.isinf(z):
        raise DomainError("hyp2f1 argument must be finite")

    if z == 0.0 or alpha == 0.0 or beta == 0.0:
        return EvalResult(1.0, 1, 0.0, True, Method.SERIES)

    result = None
    if _is_nonpositive_integer(alpha) or _is_nonpositive_integer(beta):
        # Terminating polynomial.
        s = _taylor(alpha, beta, gamma, z, ctl)
        result = (s.value, s.last_term, s.terms, s.converged, Method.SERIES)
    elif z > PFAFF_SWITCH:
        s = _taylor(alpha, beta, gamma, z, ctl)
        if s.converged and s.shift == 0:
            if s.amplification > MAX_AMPLIFICATION:
                pf = _pfaff_series(alpha, beta, gamma, z, ctl)
                if pf.converged and pf.amplification < s.amplification:
                    result = (*_pfaff_finish(pf, alpha, z), Method.PFAFF)
            if result is None:
                result = (s.value, s.last_term, s.terms, s.converged, Method.SERIES)
    elif z < -INVERSION_THRESHOLD:
        if _near_integer_gap(alpha - beta) >= INVERSION_MIN_GAP:
            inv = _inversion(alpha, beta, gamma, z, ctl)
            if inv is not None:
                result = (*inv, Method.INVERSION)
        if result is None:
            euler = _euler(alpha, beta, gamma, z, ctl)
            if euler is not None:
                result = (*euler, Method.QUADRATURE)

    if result is None:
        result = (*_pfaff(alpha, beta, gamma, z, ctl), Method.PFAFF)

    value, err, terms, converged, method = result
    if not converged:
        warnings.warn(
            f"2F1({alpha}, {beta}; {gamma}; {z}) did not converge in {ctl.max_terms} terms",
            NotConvergedWarning,
            stacklevel=2,
        )
    return EvalResult(value, terms, err, converged, method)


def hyp2f1_series(alpha, beta, gamma, z, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """Direct Gauss series, no transformation. Needs ``|z| < 1``."""
    if _is_nonpositive_integer(gamma):
        raise DomainError(f"gamma must not be a non-positive integer, got {gamma}")
    if not abs(z) < 1.0:
        raise DomainError(f"direct series needs |z| < 1, got z={z}")
    s = _taylor(float(alpha), float(beta), float(gamma), float(z), ctl)
    value = _apply_factor(s.value, s.shift, 0.0)
    err = _apply_factor(s.last_term, s.shift, 0.0)
    return EvalResult(value, s.terms, err, s.converged, Method.SERIES)


def hyp2f1_pfaff(alpha, beta, gamma, z, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """Pfaff-transformed series, forced regardless of ``z``. Needs ``z <= 0``."""
    if _is_nonpositive_integer(gamma):
        raise DomainError(f"gamma must not be a non-positive integer, got {gamma}")
    if z > 0:
        raise DomainError(f"hyp2f1 supports z <= 0 only, got z={z}")
    value, err, terms, converged = _pfaff(float(alpha), float(beta), float(gamma), float(z), ctl)
    return EvalResult(value, terms, err, converged, Method.PFAFF)


def hyp2f1m1(alpha, beta, gamma, z, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """``2F1(alpha, beta; gamma; z) - 1``, accurate when the result is small.

    Follows the same path choice as :func:`hyp2f1`. On the series path the
    leading 1 is never added; on the Pfaff path the prefactor contributes
    ``expm1(-alpha log1p(-z))``.
    """
    full = hyp2f1(alpha, beta, gamma, z, ctl)
    if z == 0.0 or alpha == 0.0 or beta == 0.0:
        return replace(full, value=0.0)
    if full.method is Method.SERIES:
        s = _taylor(float(alpha), float(beta), float(gamma), float(z), ctl, include_one=False)
        if s.shift == 0:
            return EvalResult(s.value, s.terms, s.last_term, s.converged, Method.SERIES)
    elif full.method is Method.PFAFF:
        w = z / (z - 1.0)
        s = _taylor(float(alpha), float(gamma - beta), float(gamma), w, ctl, include_one=False)
        pref = (1.0 - z) ** (-alpha)
        if s.shift == 0 and _TINY <= pref < math.inf:
            value = math.expm1(-alpha * math.log1p(-z)) + pref * s.value
            return EvalResult(value, s.terms, s.last_term * pref, s.converged, Method.PFAFF)
    return replace(full, value=full.value - 1.0)
