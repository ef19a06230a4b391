"""Adaptive Gauss-Kronrod quadrature (G7/K15 pair with global bisection).

The local error estimate is ``|K15 - G7|``, which is deliberately
pessimistic, floored at ``50 eps int|f|`` so that it never reports zero.
Subintervals are bisected, worst first, until the summed estimate meets
``max(abs_tol, rel_tol * |integral|)``.
"""

from __future__ import annotations

import heapq
import warnings
from dataclasses import dataclass
from typing import Callable

from .exceptions import NotConvergedWarning
from .special import EvalResult, Method, NeumaierSum

__all__ = ["QuadratureControl", "DEFAULT_QCONTROL", "gk15", "adaptive_gk15"]

# Kronrod abscissae on [-1, 1] (non-negative half); odd indices are the Gauss nodes.
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)

MAX_INTERVALS = 20_000


@dataclass(frozen=True)
class QuadratureControl:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_depth: int = 60

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol!r}")
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol!r}")
        if int(self.max_depth) != self.max_depth or self.max_depth < 1:
            raise ValueError(f"max_depth must be a positive integer, got {self.max_depth!r}")


DEFAULT_QCONTROL = QuadratureControl()


_ROUNDOFF = 50.0 * 2.220446049250313e-16


def gk15(f: Callable[[float], float], lo: float, hi: float) -> tuple[float, float]:
    """Kronrod estimate of ``int_lo^hi f`` and its local error bound."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    fc = f(mid)
    kron = fc * _WGK[7]
    gauss = fc * _WG[3]
    kabs = abs(fc) * _WGK[7]
    for i in range(7):
        dx = half * _XGK[i]
        f1 = f(mid - dx)
        f2 = f(mid + dx)
        kron += _WGK[i] * (f1 + f2)
        kabs += _WGK[i] * (abs(f1) + abs(f2))
        if i % 2 == 1:
            gauss += _WG[i // 2] * (f1 + f2)
    err = max(abs((kron - gauss) * half), _ROUNDOFF * kabs * abs(half))
    return kron * half, err


def adaptive_gk15(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    qctl: QuadratureControl = DEFAULT_QCONTROL,
) -> EvalResult:
    """Globally adaptive bisection with the G7/K15 pair.

    ``terms_used`` is the number of subintervals in the final partition.
    Intervals that reach ``max_depth`` are frozen; if the tolerance is still
    unmet the result comes back with ``converged=False``.
    """
    if hi == lo:
        return EvalResult(0.0, 0, 0.0, True, Method.QUADRATURE)
    k, e = gk15(f, lo, hi)
    # heap of (-error, lo, hi, depth, kronrod)
    heap = [(-e, lo, hi, 0, k)]
    frozen: list[tuple[float, float]] = []
    total_k = k
    total_err = e
    converged = False
    while True:
        if total_err <= max(qctl.abs_tol, qctl.rel_tol * abs(total_k)):
            converged = True
            break
        if not heap or len(heap) + len(frozen) >= MAX_INTERVALS:
            break
        neg_err, a, b, depth, kab = heapq.heappop(heap)
        if depth >= qctl.max_depth:
            frozen.append((kab, -neg_err))
            continue
        m = 0.5 * (a + b)
        k1, e1 = gk15(f, a, m)
        k2, e2 = gk15(f, m, b)
        heapq.heappush(heap, (-e1, a, m, depth + 1, k1))
        heapq.heappush(heap, (-e2, m, b, depth + 1, k2))
        total_k += k1 + k2 - kab
        total_err += e1 + e2 + neg_err

    value = NeumaierSum()
    err = 0.0
    for neg_err, _, _, _, kab in heap:
        value.add(kab)
        err -= neg_err
    for kab, e in frozen:
        value.add(kab)
        err += e
    if not converged:
        warnings.warn(
            f"quadrature on [{lo}, {hi}] stopped with error estimate {err:.3g}",
            NotConvergedWarning,
            stacklevel=2,
        )
    return EvalResult(value.value, len(heap) + len(frozen), err, converged, Method.QUADRATURE)
