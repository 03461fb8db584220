"""Fixing the shift ``T`` and solving for ``C``, ``a`` and ``b``.

``T`` balances the double-exponential decay rates at the two ends of the
interval. With ``T`` fixed, the remaining ``2m`` unknowns are pinned down by
requiring that the upper strip boundary reaches each slit tip exactly
(``Im H(a_k + i pi/2) = eps_t_k``) and turns there (zero derivative).

The unknowns are reparametrized as ``x = (log C, a1, log(b1 - a1),
log(a2 - b1), ...)`` so every ``x`` in R^{2m} decodes to a feasible,
correctly ordered configuration.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .endpoint_maps import IntervalKind, Kind, MappedSingularity
from .errors import ConvergenceError, DomainError
from .transform import (
    TransformParams,
    boundary_image,
    log_abs_tanh_half,
    slit_partial_fractions,
)

__all__ = [
    "DecaySpec",
    "Calibration",
    "choose_T",
    "decode",
    "encode",
    "residual",
    "fd_jacobian",
    "initial_guess",
    "solve_params",
    "ValidationReport",
    "validate_params",
    "beta2",
]

log = logging.getLogger(__name__)

TARGET_RESIDUAL = 1e-12
ACCEPT_RESIDUAL = 1e-10
MAX_ITER = 200
MAX_HALVINGS = 30
MAX_RESTARTS = 8


@dataclass(frozen=True)
class DecaySpec:
    """Endpoint behaviour of the integrand.

    ``finite``: ``f = O((1-x)^p)`` at 1 and ``O((1+x)^q)`` at -1, ``p, q > -1``.
    ``real_line``: ``O(|x|^r)`` at +inf and ``O(|x|^s)`` at -inf, ``r, s < -1``.
    ``half_line``: ``O(x^r)`` at inf (``r < -1``), ``O(x^q)`` at 0 (``q > -1``).
    ``half_line_exp``: weight ``e^{-vx}`` at inf (``v`` from the kind), ``O(x^q)`` at 0.
    """

    kind: IntervalKind
    p: float | None = None
    q: float | None = None
    r: float | None = None
    s: float | None = None

    def __post_init__(self) -> None:
        k = self.kind.kind
        need = {
            Kind.FINITE: ("p", "q"),
            Kind.REAL_LINE: ("r", "s"),
            Kind.HALF_LINE: ("r", "q"),
            Kind.HALF_LINE_EXP: ("q",),
        }[k]
        for name in ("p", "q", "r", "s"):
            value = getattr(self, name)
            if name in need:
                if value is None or not math.isfinite(value):
                    raise DomainError(f"{k.value} decay needs a finite {name}")
            elif value is not None:
                raise DomainError(f"{k.value} decay takes no exponent {name}")
        if self.p is not None and not self.p > -1:
            raise DomainError(f"p must exceed -1, got {self.p}")
        if self.q is not None and not self.q > -1:
            raise DomainError(f"q must exceed -1, got {self.q}")
        if self.r is not None and not self.r < -1:
            raise DomainError(f"r must be below -1, got {self.r}")
        if self.s is not None and not self.s < -1:
            raise DomainError(f"s must be below -1, got {self.s}")

    @property
    def v(self) -> float | None:
        return self.kind.v

    def rates(self) -> tuple[float, float]:
        """Per-unit-``C`` decay rates ``(right, left)`` of the transformed integrand.

        The transformed integrand decays like ``exp(-C*right*e^{t-T})`` as
        ``t -> +inf`` and ``exp(-C*left*e^{T-t})`` as ``t -> -inf``.
        """
        k = self.kind.kind
        if k is Kind.FINITE:
            return 1.0 + self.p, 1.0 + self.q
        if k is Kind.REAL_LINE:
            return -0.5 * (1.0 + self.r), -0.5 * (1.0 + self.s)
        if k is Kind.HALF_LINE:
            return -0.5 * (1.0 + self.r), 0.5 * (1.0 + self.q)
        return 0.5 * self.kind.v, 0.5 * (1.0 + self.q)


@dataclass(frozen=True)
class Calibration:
    T: float
    beta2_per_C: float
    right_rate: float
    left_rate: float

    def __post_init__(self) -> None:
        if not self.beta2_per_C > 0:
            raise DomainError("beta2_per_C must be positive")


def choose_T(spec: DecaySpec) -> Calibration:
    """Shift that equalizes the two decay rates, and the resulting ``beta2 / C``."""
    right, left = spec.rates()
    T = 0.5 * math.log(right / left)
    return Calibration(T=T, beta2_per_C=math.sqrt(right * left), right_rate=right, left_rate=left)


def beta2(p: TransformParams, cal: Calibration) -> float:
    """Decay coefficient of the transformed integrand for map ``p``.

    For a map solved with ``cal.T`` this is ``C * beta2_per_C``; for any
    other shift (the DE map uses ``T = 0``) the slower of the two ends wins.
    """
    if p.T == cal.T:
        return p.C * cal.beta2_per_C
    return p.C * min(cal.right_rate * math.exp(-p.T), cal.left_rate * math.exp(p.T))


def decode(x: Sequence[float]) -> tuple[float, list[float], list[float]]:
    """``x -> (C, a, b)``."""
    x = np.asarray(x, dtype=float)
    m = x.size // 2
    C = math.exp(x[0])
    pos = float(x[1])
    a = [pos]
    b: list[float] = []
    for j in range(1, m):
        pos += math.exp(x[2 * j])
        b.append(pos)
        pos += math.exp(x[2 * j + 1])
        a.append(pos)
    return C, a, b


def encode(C: float, a: Sequence[float], b: Sequence[float]) -> np.ndarray:
    x = [math.log(C), a[0]]
    for j, bj in enumerate(b):
        x += [math.log(bj - a[j]), math.log(a[j + 1] - bj)]
    return np.array(x, dtype=float)


def residual(
    x: Sequence[float],
    T: float,
    D: Sequence[float],
    eps_t: Sequence[float],
) -> np.ndarray:
    """Boundary conditions at the slit tips, in reparametrized coordinates.

    Rows ``0..m-1``: ``Im H(a_k + i pi/2) - eps_t_k``.
    Rows ``m..2m-1``: ``d/dx Im H(x + i pi/2)`` at ``x = a_k``.
    """
    C, a, b = decode(x)
    m = len(a)
    out = np.empty(2 * m)
    for k, ak in enumerate(a):
        height = C * math.cosh(ak - T)
        slope = C * math.sinh(ak - T)
        for bj, dj in zip(b, D):
            height -= dj * log_abs_tanh_half(ak - bj)
            slope -= dj / math.sinh(ak - bj)
        out[k] = height - eps_t[k]
        out[m + k] = slope
    return out


def fd_jacobian(fun, x: np.ndarray, f0: np.ndarray | None = None) -> np.ndarray:
    """Forward-difference Jacobian with step ``1e-6 * (1 + |x_i|)``."""
    x = np.asarray(x, dtype=float)
    if f0 is None:
        f0 = fun(x)
    J = np.empty((f0.size, x.size))
    for i in range(x.size):
        step = 1e-6 * (1.0 + abs(x[i]))
        xp = x.copy()
        xp[i] += step
        J[:, i] = (fun(xp) - f0) / (xp[i] - x[i])
    return J


def initial_guess(T: float, eps_t: Sequence[float], gap_scale: float = 1.0, c_scale: float = 1.0) -> np.ndarray:
    m = len(eps_t)
    C0 = 0.5 * min(eps_t) * c_scale
    a0 = [T + gap_scale * (k - (m + 1) / 2) for k in range(1, m + 1)]
    b0 = [0.5 * (lo + hi) for lo, hi in zip(a0, a0[1:])]
    return encode(C0, a0, b0)


def _restart_scales() -> list[tuple[float, float]]:
    combos = [(g, c) for g in (1.0, 0.5, 2.0) for c in (1.0, 0.25, 4.0)]
    return combos[: MAX_RESTARTS + 1]


@dataclass
class _NewtonResult:
    x: np.ndarray
    norm: float
    iterations: int


def _damped_newton(fun, x0: np.ndarray) -> _NewtonResult:
    x = np.array(x0, dtype=float)
    f = fun(x)
    norm = float(np.max(np.abs(f)))
    for it in range(MAX_ITER):
        if norm <= TARGET_RESIDUAL:
            return _NewtonResult(x, norm, it)
        J = fd_jacobian(fun, x, f)
        try:
            dx = np.linalg.solve(J, -f)
        except np.linalg.LinAlgError:
            dx = np.linalg.lstsq(J, -f, rcond=None)[0]
        if not np.all(np.isfinite(dx)):
            break
        lam = 1.0
        for _ in range(MAX_HALVINGS):
            trial = x + lam * dx
            try:
                with np.errstate(all="raise"):
                    ft = fun(trial)
            except (OverflowError, FloatingPointError, ValueError, ZeroDivisionError):
                ft = None
            if ft is not None and np.all(np.isfinite(ft)):
                tnorm = float(np.max(np.abs(ft)))
                if tnorm < norm:
                    x, f, norm = trial, ft, tnorm
                    break
            lam *= 0.5
        else:
            break
    return _NewtonResult(x, norm, MAX_ITER)


def solve_params(mapped: Sequence[MappedSingularity], cal: Calibration) -> TransformParams:
    """Solve for the slit map avoiding ``mapped`` with shift ``cal.T``.

    Raises
    ------
    ConvergenceError
        When no start (initial guess plus perturbed restarts) drives the
        residual below ``1e-10``.
    """
    mapped = list(mapped)
    m = len(mapped)
    if m < 1:
        raise DomainError("need at least one mapped singularity")
    deltas = [ms.delta_t for ms in mapped]
    if any(not lo < hi for lo, hi in zip(deltas, deltas[1:])):
        raise DomainError("mapped singularities must be strictly increasing in delta_t")
    eps_t = [ms.eps_t for ms in mapped]
    D = [(hi - lo) / math.pi for lo, hi in zip(deltas, deltas[1:])]
    T = cal.T
    if m == 1:
        return TransformParams(C=eps_t[0], T=T, a=(T,), D0=deltas[0])

    def fun(x: np.ndarray) -> np.ndarray:
        return residual(x, T, D, eps_t)

    best: _NewtonResult | None = None
    for gap_scale, c_scale in _restart_scales():
        x0 = initial_guess(T, eps_t, gap_scale, c_scale)
        try:
            res = _damped_newton(fun, x0)
        except (OverflowError, ValueError, ZeroDivisionError):
            continue
        log.debug("start (gap %.2f, C %.2f): residual %.3e after %d its",
                  gap_scale, c_scale, res.norm, res.iterations)
        if best is None or res.norm < best.norm:
            best = res
        if res.norm <= TARGET_RESIDUAL:
            break
    if best is None or not best.norm <= ACCEPT_RESIDUAL:
        raise ConvergenceError(
            f"slit map solve failed for m={m}",
            math.inf if best is None else best.norm,
        )
    C, a, b = decode(best.x)
    return TransformParams(C=C, T=T, a=tuple(a), b=tuple(b), D=tuple(D), D0=deltas[0])


@dataclass
class ValidationReport:
    telescoping_defect: float
    boundary_defects: list[float] = field(default_factory=list)
    slope_defects: list[float] = field(default_factory=list)
    slit_defects: list[float] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "telescoping_defect": self.telescoping_defect,
            "boundary_defects": list(self.boundary_defects),
            "slope_defects": list(self.slope_defects),
            "slit_defects": list(self.slit_defects),
        }


def validate_params(
    p: TransformParams, cal: Calibration, mapped: Sequence[MappedSingularity]
) -> ValidationReport:
    """Post-solve consistency checks; reports defects without judging them.

    * telescoping: ``|a1 - b1 + ... + a_m - T|``
    * boundary: ``|Im H(a_k + i pi/2) - eps_t_k|``
    * slope: ``|d/dx Im H(x + i pi/2)|`` at ``a_k``
    * slit: ``|C L_j - 2 D_j|`` from the partial-fraction expansion
    """
    T_prod, L = slit_partial_fractions(p.a, p.b)
    report = ValidationReport(telescoping_defect=abs(T_prod - cal.T))
    for ak, ms in zip(p.a, mapped):
        _, im = boundary_image(p, ak)
        report.boundary_defects.append(abs(im - ms.eps_t))
        slope = p.C * math.sinh(ak - p.T)
        for bj, dj in zip(p.b, p.D):
            slope -= dj / math.sinh(ak - bj)
        report.slope_defects.append(abs(slope))
    for Lj, dj in zip(L, p.D):
        report.slit_defects.append(abs(p.C * Lj - 2.0 * dj))
    return report
