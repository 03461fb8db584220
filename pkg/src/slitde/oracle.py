"""Independent reference values by globally adaptive Gauss-Kronrod quadrature.

Nothing here uses the double-exponential machinery. The integral is split
at the real parts of the singularities, endpoint singularities are smoothed
by square-root substitutions, infinite tails are folded onto finite panels
with ``x = 1/u``, and the panel with the largest error estimate is bisected
until the summed estimate drops below the tolerance.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .endpoint_maps import Kind
from .errors import DomainError, EvalError, NoConvergence
from .problems import Problem

__all__ = ["reference_integrate", "gk15", "MIN_TOL", "MAX_PANELS"]

MIN_TOL = 1e-10
MAX_PANELS = 1_000_000

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1];
# nodes listed from the outside in, the last one is the centre.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
# Gauss weights for the nodes _XGK[1], _XGK[3], _XGK[5], _XGK[7]
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_K_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_G_WEIGHTS = np.zeros(15)
_G_WEIGHTS[[1, 3, 5]] = _WG[:3]
_G_WEIGHTS[[13, 11, 9]] = _WG[:3]
_G_WEIGHTS[7] = _WG[3]


def gk15(g: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> tuple[float, float]:
    """Kronrod estimate and ``|Kronrod - Gauss|`` for ``g`` on ``[a, b]``.

    ``g`` is called once with the 15 nodes as an array.
    """
    half = 0.5 * (b - a)
    u = 0.5 * (a + b) + half * _NODES
    y = np.asarray(g(u), dtype=float)
    k = half * float(_K_WEIGHTS @ y)
    gauss = half * float(_G_WEIGHTS @ y)
    return k, abs(k - gauss)


@dataclass(frozen=True)
class _Segment:
    """A finite ``u``-interval and the integrand pulled back onto it."""

    lo: float
    hi: float
    g: Callable[[np.ndarray], np.ndarray]


def _vectorised(problem: Problem) -> Callable[..., np.ndarray]:
    f = problem.integrand
    if hasattr(f, "evaluate"):
        return lambda x, one_plus=None, one_minus=None: np.asarray(
            f.evaluate(x, one_plus, one_minus), dtype=float)

    def call(x, one_plus=None, one_minus=None):
        try:
            out = np.asarray(f(x), dtype=float)
            if out.shape == np.shape(x):
                return out
        except Exception:
            pass
        return np.array([f(float(xi)) for xi in np.ravel(x)], dtype=float)

    return call


def _breakpoints(problem: Problem) -> list[float]:
    lo, hi = problem.kind.bounds
    pts = sorted({s.delta for s in problem.singularities if lo < s.delta < hi})
    return pts


def _segments(problem: Problem) -> list[_Segment]:
    f = _vectorised(problem)
    kind = problem.kind.kind
    pts = _breakpoints(problem)
    segs: list[_Segment] = []

    def identity(a: float, b: float) -> None:
        segs.append(_Segment(a, b, lambda u: f(u)))

    def middle(points: list[float]) -> None:
        for a, b in zip(points[:-1], points[1:]):
            identity(a, b)

    def right_tail(x0: float) -> None:
        segs.append(_Segment(0.0, 1.0 / x0, lambda u: f(1.0 / u) / (u * u)))

    def left_tail(x0: float) -> None:
        segs.append(_Segment(0.0, -1.0 / x0, lambda u: f(-1.0 / u) / (u * u)))

    if kind is Kind.FINITE:
        inner = pts or [0.0]
        first, last = inner[0], inner[-1]
        # x = u^2 - 1 near -1 and x = 1 - u^2 near +1, with exact complements
        segs.append(_Segment(0.0, math.sqrt(first + 1.0),
                             lambda u: 2.0 * u * f(u * u - 1.0, u * u, 2.0 - u * u)))
        middle(inner)
        segs.append(_Segment(0.0, math.sqrt(1.0 - last),
                             lambda u: 2.0 * u * f(1.0 - u * u, 2.0 - u * u, u * u)))
    elif kind is Kind.REAL_LINE:
        lo = min(pts[0] if pts else 0.0, 0.0) - 1.0
        hi = max(pts[-1] if pts else 0.0, 0.0) + 1.0
        left_tail(lo)
        middle([lo, *pts, hi])
        right_tail(hi)
    else:
        inner = pts or [1.0]
        first = inner[0]
        tail = inner[-1] + 1.0
        segs.append(_Segment(0.0, math.sqrt(first), lambda u: 2.0 * u * f(u * u)))
        middle([*inner, tail])
        right_tail(tail)
    return segs


def reference_integrate(problem: Problem, tol: float, *, max_panels: int = MAX_PANELS) -> float:
    """Integral of ``problem`` to absolute accuracy ``tol``.

    Parameters
    ----------
    problem
        Any problem; its integrand is called with numpy arrays of nodes
        (scalar-only callables are evaluated point by point).
    tol
        Target for the summed embedded error estimate, at least ``1e-10``.
    max_panels
        Subdivision limit.

    Raises
    ------
    DomainError
        If ``tol < 1e-10``.
    NoConvergence
        If the panel limit is reached first; carries the best estimate,
        its error bound and the panel count.
    EvalError
        If the integrand is not finite at a node.
    """
    if not tol >= MIN_TOL:
        raise DomainError(f"tol must be >= {MIN_TOL:g}, got {tol!r}")
    heap: list[tuple[float, int, float, float, float, _Segment]] = []
    counter = 0
    err = 0.0

    def panel(seg: _Segment, a: float, b: float) -> tuple[float, float]:
        with np.errstate(all="ignore"):
            k, e = gk15(seg.g, a, b)
        if not (math.isfinite(k) and math.isfinite(e)):
            raise EvalError(0.5 * (a + b), math.nan, k)
        return k, e

    for seg in _segments(problem):
        k, e = panel(seg, seg.lo, seg.hi)
        heapq.heappush(heap, (-e, counter, k, seg.lo, seg.hi, seg))
        counter += 1
        err += e

    while True:
        if err <= tol:
            # the running sum drifts; confirm with an exact recount
            err = math.fsum(-item[0] for item in heap)
            if err <= tol:
                return math.fsum(item[2] for item in heap)
        if len(heap) >= max_panels:
            raise NoConvergence(math.fsum(item[2] for item in heap), err, len(heap))
        neg_e, _, k_old, a, b, seg = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            heapq.heappush(heap, (neg_e, counter, k_old, a, b, seg))
            raise NoConvergence(math.fsum(item[2] for item in heap), err, len(heap))
        err += neg_e
        for lo, hi in ((a, mid), (mid, b)):
            k, e = panel(seg, lo, hi)
            heapq.heappush(heap, (-e, counter, k, lo, hi, seg))
            counter += 1
            err += e
