"""Outer maps from the strip plane onto the four integration intervals.

Each interval kind comes with a map ``psi`` that is composed with the inner
transformation ``H``; the integration variable is ``x = psi(H(t))``.

========================  ===========  ==================
interval                  kind         psi(w)
========================  ===========  ==================
(-1, 1)                   finite       tanh(w)
(-inf, inf)               real_line    sinh(w)
(0, inf)                  half_line    exp(w)
(0, inf), e^{-vx} weight  half_line_exp  log(exp(w) + 1)
========================  ===========  ==================
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .errors import DomainError, EmptySetError

__all__ = [
    "Kind",
    "IntervalKind",
    "FINITE",
    "REAL_LINE",
    "HALF_LINE",
    "Singularity",
    "MappedSingularity",
    "psi_eval",
    "psi_deriv",
    "psi_eval_complements",
    "psi_preimage",
    "psi_fixed_singularities",
    "collect_singularities",
    "DEDUP_TOL",
]

DEDUP_TOL = 1e-9
_EXP_MAX = 709.0


class Kind(str, Enum):
    FINITE = "finite"
    REAL_LINE = "real_line"
    HALF_LINE = "half_line"
    HALF_LINE_EXP = "half_line_exp"


@dataclass(frozen=True)
class IntervalKind:
    """Interval type; ``v`` is the decay rate of the ``e^{-vx}`` weight."""

    kind: Kind
    v: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.HALF_LINE_EXP:
            if self.v is None or not self.v > 0:
                raise DomainError(f"half_line_exp needs v > 0, got {self.v!r}")
            object.__setattr__(self, "v", float(self.v))
        elif self.v is not None:
            raise DomainError(f"{self.kind.value} takes no weight rate")

    @classmethod
    def exp_weight(cls, v: float) -> "IntervalKind":
        return cls(Kind.HALF_LINE_EXP, v)

    @property
    def bounds(self) -> tuple[float, float]:
        if self.kind is Kind.FINITE:
            return (-1.0, 1.0)
        if self.kind is Kind.REAL_LINE:
            return (-math.inf, math.inf)
        return (0.0, math.inf)

    def __str__(self) -> str:
        if self.kind is Kind.HALF_LINE_EXP:
            return f"{self.kind.value}(v={self.v:g})"
        return self.kind.value


FINITE = IntervalKind(Kind.FINITE)
REAL_LINE = IntervalKind(Kind.REAL_LINE)
HALF_LINE = IntervalKind(Kind.HALF_LINE)


@dataclass(frozen=True)
class Singularity:
    """A conjugate pair ``delta +- eps*i`` of integrand singularities."""

    delta: float
    eps: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.delta) and math.isfinite(self.eps)):
            raise DomainError("singularity coordinates must be finite")
        if not self.eps > 0:
            raise DomainError(f"singularity eps must be positive, got {self.eps!r}")


@dataclass(frozen=True)
class MappedSingularity:
    """Strip-plane representative ``delta_t + eps_t*i`` with ``0 < eps_t <= pi``."""

    delta_t: float
    eps_t: float

    def __post_init__(self) -> None:
        if not (0.0 < self.eps_t <= math.pi):
            raise DomainError(f"eps_t must lie in (0, pi], got {self.eps_t!r}")


def _sech2(w: float) -> float:
    e = math.exp(-2.0 * abs(w))
    return 4.0 * e / (1.0 + e) ** 2


def _softplus(w: float) -> float:
    if w > 0:
        return w + math.log1p(math.exp(-w))
    return math.log1p(math.exp(w))


def psi_eval(kind: IntervalKind, w: float) -> float:
    """Evaluate ``psi`` at a real point ``w``.

    Overflowing results (``sinh``/``exp`` beyond ~709) come back as ``inf``.
    """
    k = kind.kind
    if k is Kind.FINITE:
        return math.tanh(w)
    if k is Kind.REAL_LINE:
        if abs(w) > _EXP_MAX:
            return math.copysign(math.inf, w)
        return math.sinh(w)
    if k is Kind.HALF_LINE:
        return math.inf if w > _EXP_MAX else math.exp(w)
    return _softplus(w)


def psi_eval_complements(kind: IntervalKind, w: float) -> tuple[float, float, float]:
    """``(x, 1 + x, 1 - x)`` with ``x = psi(w)``.

    For the finite interval the complements are formed directly from ``w``
    so they keep full relative accuracy as ``x`` approaches an endpoint.
    """
    x = psi_eval(kind, w)
    if kind.kind is not Kind.FINITE:
        return x, 1.0 + x, 1.0 - x
    e = math.exp(-2.0 * abs(w))
    near, far = 2.0 * e / (1.0 + e), 2.0 / (1.0 + e)
    if w < 0:
        return x, near, far
    return x, far, near


def psi_deriv(kind: IntervalKind, w: float) -> float:
    """Derivative ``psi'(w)``; may underflow to 0 or overflow to ``inf`` in the tails."""
    k = kind.kind
    if k is Kind.FINITE:
        return _sech2(w)
    if k is Kind.REAL_LINE:
        return math.inf if abs(w) > _EXP_MAX else math.cosh(w)
    if k is Kind.HALF_LINE:
        return math.inf if w > _EXP_MAX else math.exp(w)
    if w >= 0:
        return 1.0 / (1.0 + math.exp(-w))
    e = math.exp(w)
    return e / (1.0 + e)


def _cexpm1(s: complex) -> complex:
    # exp(s) - 1 without cancellation for small |s|
    x, y = s.real, s.imag
    re = math.expm1(x) * math.cos(y) - 2.0 * math.sin(0.5 * y) ** 2
    im = math.exp(x) * math.sin(y)
    return complex(re, im)


def psi_preimage(kind: IntervalKind, s: complex) -> MappedSingularity:
    """Principal-branch preimage of a point ``s`` in the upper half plane.

    Raises
    ------
    DomainError
        If ``Im s <= 0``, ``s`` is outside the range of ``psi``, or the
        preimage does not land in ``0 < Im <= pi``.
    """
    s = complex(s)
    if not s.imag > 0:
        raise DomainError(f"preimage needs Im(s) > 0, got {s!r}")
    k = kind.kind
    if k is Kind.FINITE:
        if s == 1 or s == -1:
            raise DomainError("tanh never attains +-1")
        w = cmath.atanh(s)
    elif k is Kind.REAL_LINE:
        w = cmath.asinh(s)
    elif k is Kind.HALF_LINE:
        w = cmath.log(s)
    else:
        if s == 0:
            raise DomainError("log(exp(w) + 1) never attains 0")
        w = cmath.log(_cexpm1(s))
    if not (0.0 < w.imag <= math.pi):
        raise DomainError(f"preimage {w!r} of {s!r} is outside 0 < Im <= pi")
    return MappedSingularity(w.real, w.imag)


def psi_fixed_singularities(kind: IntervalKind) -> list[MappedSingularity]:
    """Singularities of ``psi`` itself, one representative per period."""
    k = kind.kind
    if k is Kind.FINITE:
        return [MappedSingularity(0.0, math.pi / 2)]
    if k is Kind.HALF_LINE_EXP:
        return [MappedSingularity(0.0, math.pi)]
    return []


def collect_singularities(
    kind: IntervalKind, sings: Iterable[Singularity]
) -> list[MappedSingularity]:
    """Map the integrand singularities to the strip plane and merge with those of ``psi``.

    The result is sorted by ``delta_t``. Entries whose ``delta_t`` agree to
    within ``DEDUP_TOL`` collapse to the one with the smaller ``eps_t``.
    """
    mapped = [psi_preimage(kind, complex(s.delta, s.eps)) for s in sings]
    mapped.extend(psi_fixed_singularities(kind))
    if not mapped:
        raise EmptySetError(f"no singularities for {kind}; the map is undetermined")
    mapped.sort(key=lambda ms: (ms.delta_t, ms.eps_t))
    merged: list[MappedSingularity] = []
    for ms in mapped:
        if merged and abs(ms.delta_t - merged[-1].delta_t) < DEDUP_TOL:
            if ms.eps_t < merged[-1].eps_t:
                merged[-1] = ms
            continue
        merged.append(ms)
    return merged
