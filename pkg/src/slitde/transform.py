"""The slit-domain map ``H`` and its cheap tanh approximation.

For ``m`` slit pairs the map from the strip ``|Im z| < pi/2`` onto the plane
with vertical slits has the closed form::

    H(z) = C sinh(z - T) + sum_j 2 D_j arctan(exp(z - b_j)) + D0

The approximate variant replaces ``arctan(e^u)`` by ``(pi/4)(tanh(2u/pi) + 1)``.
With ``m = 1`` and ``C = pi/2`` the map is the plain DE map ``(pi/2) sinh(t)``.

Everything here is evaluated on the real axis or on the upper strip boundary
through explicit real/imaginary formulas; no complex arctan is ever taken.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence

from .errors import DomainError, PoleError

__all__ = [
    "Variant",
    "TransformParams",
    "de_params",
    "h_new_eval",
    "h_new_deriv",
    "h_new2_eval",
    "h_new2_deriv",
    "h_eval",
    "h_deriv",
    "boundary_image",
    "slit_partial_fractions",
    "arctan_exp",
    "params_to_json",
    "params_from_json",
]

_HALF_PI = 0.5 * math.pi
_TWO_OVER_PI = 2.0 / math.pi
_EXP_MAX = 709.0


class Variant(str, Enum):
    EXACT = "exact"
    APPROX = "approx"


@dataclass(frozen=True)
class TransformParams:
    """Parameters of a solved map.

    ``a`` are the preimages of the slit tips, ``b`` those of the slit mouths
    (interleaved ``a1 < b1 < a2 < ... < b_{m-1} < a_m``), ``D`` the step
    heights and ``D0`` the left plateau.
    """

    C: float
    T: float
    a: tuple[float, ...]
    b: tuple[float, ...] = ()
    D: tuple[float, ...] = ()
    D0: float = 0.0
    variant: Variant = Variant.EXACT

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        object.__setattr__(self, "D", tuple(float(v) for v in self.D))
        object.__setattr__(self, "variant", Variant(self.variant))
        m = len(self.a)
        if m < 1:
            raise DomainError("at least one slit pair is required")
        if len(self.b) != m - 1 or len(self.D) != m - 1:
            raise DomainError(f"need {m - 1} mouths and step heights for m={m}")
        if not self.C > 0:
            raise DomainError(f"C must be positive, got {self.C!r}")
        ordered = [self.a[0]]
        for bj, ak in zip(self.b, self.a[1:]):
            ordered += [bj, ak]
        if any(not lo < hi for lo, hi in zip(ordered, ordered[1:])):
            raise DomainError("a and b must strictly interleave")
        if any(not d > 0 for d in self.D):
            raise DomainError("step heights D must be positive")

    @property
    def m(self) -> int:
        return len(self.a)

    def with_variant(self, variant: Variant | str) -> "TransformParams":
        return replace(self, variant=Variant(variant))


def de_params() -> TransformParams:
    """The DE map ``(pi/2) sinh(t)`` as a one-slit map."""
    return TransformParams(C=_HALF_PI, T=0.0, a=(0.0,))


def _sinh(u: float) -> float:
    if abs(u) > _EXP_MAX:
        return math.copysign(math.inf, u)
    return math.sinh(u)


def _cosh(u: float) -> float:
    if abs(u) > _EXP_MAX:
        return math.inf
    return math.cosh(u)


def _sech(u: float) -> float:
    e = math.exp(-abs(u))
    return 2.0 * e / (1.0 + e * e)


def arctan_exp(u: float) -> float:
    """``arctan(exp(u))`` without overflow for large ``u``."""
    if u > 0:
        return _HALF_PI - math.atan(math.exp(-u))
    return math.atan(math.exp(u))


def h_new_eval(p: TransformParams, t: float) -> float:
    """Closed-form ``H(t)`` on the real axis (exact arctan steps)."""
    total = p.C * _sinh(t - p.T) + p.D0
    for bj, dj in zip(p.b, p.D):
        total += 2.0 * dj * arctan_exp(t - bj)
    return total


def h_new_deriv(p: TransformParams, t: float) -> float:
    total = p.C * _cosh(t - p.T)
    for bj, dj in zip(p.b, p.D):
        total += dj * _sech(t - bj)
    return total


def h_new2_eval(p: TransformParams, t: float) -> float:
    """Approximate map with ``arctan(e^u)`` replaced by ``(pi/4)(tanh(2u/pi) + 1)``."""
    total = p.C * _sinh(t - p.T) + p.D0
    for bj, dj in zip(p.b, p.D):
        total += _HALF_PI * dj * (math.tanh(_TWO_OVER_PI * (t - bj)) + 1.0)
    return total


def h_new2_deriv(p: TransformParams, t: float) -> float:
    total = p.C * _cosh(t - p.T)
    for bj, dj in zip(p.b, p.D):
        total += dj * _sech(_TWO_OVER_PI * (t - bj)) ** 2
    return total


def h_eval(p: TransformParams, t: float) -> float:
    """Dispatch on ``p.variant``."""
    if p.variant is Variant.APPROX:
        return h_new2_eval(p, t)
    return h_new_eval(p, t)


def h_deriv(p: TransformParams, t: float) -> float:
    if p.variant is Variant.APPROX:
        return h_new2_deriv(p, t)
    return h_new_deriv(p, t)


def log_abs_tanh_half(u: float) -> float:
    """``log|tanh(u/2)|`` accurate for both small and large ``|u|``."""
    e = math.exp(-abs(u))
    return math.log(-math.expm1(-abs(u))) - math.log1p(e)


def boundary_image(p: TransformParams, x: float) -> tuple[float, float]:
    """Image of the upper strip boundary point ``x + i*pi/2``.

    The real part is a staircase through the plateau values; the imaginary
    part traces the slit edges and diverges at each mouth ``b_j``.
    """
    re = p.D0
    im = p.C * _cosh(x - p.T)
    for bj, dj in zip(p.b, p.D):
        if x == bj:
            raise PoleError(f"x={x!r} is the slit mouth b_j")
        if x > bj:
            re += math.pi * dj
        im -= dj * log_abs_tanh_half(x - bj)
    return re, im


def _log_abs_exp_diff(u: float, v: float) -> float:
    # log|e^{2u} - e^{2v}|
    hi = max(u, v)
    return 2.0 * hi + math.log(-math.expm1(-2.0 * abs(u - v)))


def slit_partial_fractions(
    a: Sequence[float], b: Sequence[float]
) -> tuple[float, list[float]]:
    """Partial-fraction coefficients of the map's derivative.

    Returns ``T`` and ``L`` with::

        prod_k cosh(z - a_k) / prod_j cosh(z - b_j)
            = cosh(z - T) + sum_j (L_j / 2) / cosh(z - b_j)

    The Lagrange coefficients are assembled as sign and log-magnitude so that
    ``e^{2a}`` never has to be formed explicitly.
    """
    a = [float(v) for v in a]
    b = [float(v) for v in b]
    if len(b) != len(a) - 1:
        raise DomainError("need len(b) == len(a) - 1")
    T = math.fsum(a) - math.fsum(b)
    L: list[float] = []
    for j, bj in enumerate(b):
        # L_j = e^{-T-b_j} l_j / 2,
        # l_j = -prod_k (A_k - B_j) / (B_j prod_{k != j} (B_k - B_j))
        sign = -1.0
        log_mag = -2.0 * bj
        for ak in a:
            if ak < bj:
                sign = -sign
            log_mag += _log_abs_exp_diff(ak, bj)
        for k, bk in enumerate(b):
            if k == j:
                continue
            if bk < bj:
                sign = -sign
            log_mag -= _log_abs_exp_diff(bk, bj)
        log_L = log_mag - T - bj - math.log(2.0)
        if log_L > _EXP_MAX:
            raise OverflowError(f"L_{j + 1} = exp({log_L:.1f}) is not representable")
        L.append(sign * math.exp(log_L))
    return T, L


_JSON_KEYS = ("variant", "C", "T", "a", "b", "D", "D0")


def _num(x: float) -> str:
    return format(float(x), ".17g")


def params_to_json(p: TransformParams) -> str:
    """Serialize with fixed key order and 17 significant digits per number."""

    def arr(xs: Sequence[float]) -> str:
        return "[" + ", ".join(_num(v) for v in xs) + "]"

    lines = [
        f'  "variant": "{p.variant.value}"',
        f'  "C": {_num(p.C)}',
        f'  "T": {_num(p.T)}',
        f'  "a": {arr(p.a)}',
        f'  "b": {arr(p.b)}',
        f'  "D": {arr(p.D)}',
        f'  "D0": {_num(p.D0)}',
    ]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def params_from_json(text: str) -> TransformParams:
    doc = json.loads(text)
    missing = [k for k in _JSON_KEYS if k not in doc]
    if missing:
        raise DomainError(f"params document lacks {missing}")
    return TransformParams(
        C=float(doc["C"]),
        T=float(doc["T"]),
        a=tuple(doc["a"]),
        b=tuple(doc["b"]),
        D=tuple(doc["D"]),
        D0=float(doc["D0"]),
        variant=Variant(doc["variant"]),
    )
