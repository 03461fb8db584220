"""Trapezoidal rule on the transformed integrand.

The integral is approximated by::

    h * sum_{j=-n..n} f(psi(H(jh))) * psi'(H(jh)) * H'(jh)

with the mesh size ``h = log(pi^2 n / beta2) / n`` (strip half-width pi/2,
decay order 1).
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .calibration import Calibration, beta2, choose_T, solve_params
from .endpoint_maps import (
    Kind,
    collect_singularities,
    psi_deriv,
    psi_eval_complements,
    psi_preimage,
)
from .errors import DomainError, EvalError, SlitDEError
from .problems import Problem
from .transform import TransformParams, Variant, de_params, h_deriv, h_eval

__all__ = [
    "Method",
    "QuadratureResult",
    "SweepRecord",
    "mesh_size",
    "transformed_integrand",
    "integrate",
    "prepare",
    "sweep",
    "d_de",
]


class Method(str, Enum):
    DE = "de"
    NEW = "new"
    NEW2 = "new2"


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    n: int
    h: float
    nodes_skipped: int


@dataclass(frozen=True)
class SweepRecord:
    method: str
    n: int
    h: float | None
    value: float | None
    abs_error: float | None
    elapsed_ns: int
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    @property
    def elapsed_time(self) -> float:
        return self.elapsed_ns * 1e-9


def mesh_size(n: int, beta2: float) -> float:
    """``h = log(2 pi d gamma n / beta2) / (gamma n)`` with ``d = pi/2``, ``gamma = 1``."""
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if not beta2 > 0:
        raise DomainError(f"beta2 must be positive, got {beta2!r}")
    arg = math.pi**2 * n / beta2
    if not arg > math.e:
        raise DomainError(f"log argument pi^2 n / beta2 = {arg:.4g} <= e; n={n} is too small")
    return math.log(arg) / n


def _in_open_interval(problem: Problem, x: float) -> bool:
    lo, hi = problem.kind.bounds
    return lo < x < hi


def _node(problem: Problem, p: TransformParams, t: float) -> tuple[float, bool]:
    # returns (F(t), skipped)
    w = h_eval(p, t)
    dpsi = psi_deriv(problem.kind, w)
    if dpsi == 0.0 or not math.isfinite(dpsi):
        return 0.0, True
    x, one_plus, one_minus = psi_eval_complements(problem.kind, w)
    f = problem.integrand
    if hasattr(f, "evaluate"):
        if problem.kind.kind is Kind.FINITE and (one_plus == 0.0 or one_minus == 0.0):
            return 0.0, True
        fx = f.evaluate(x, one_plus, one_minus)
    else:
        if not _in_open_interval(problem, x):
            return 0.0, True
        fx = f(x)
    value = fx * dpsi * h_deriv(p, t)
    if not math.isfinite(value):
        raise EvalError(t, x, fx)
    return value, False


def transformed_integrand(problem: Problem, p: TransformParams, t: float) -> float:
    """``f(psi(H(t))) psi'(H(t)) H'(t)``; 0 in the numerical tails.

    A node is a tail node when ``psi'`` under- or overflows, or when the
    distance to a finite endpoint underflows. Integrands without an
    ``evaluate(x, one_plus, one_minus)`` method only see ``x`` and are also
    skipped once ``x`` rounds onto an endpoint. ``f`` is never called at a
    tail node.
    """
    return _node(problem, p, t)[0]


def integrate(
    problem: Problem,
    p: TransformParams,
    beta2: float,
    n: int,
    *,
    h: float | None = None,
) -> QuadratureResult:
    """Trapezoidal sum over ``2n + 1`` nodes.

    ``h`` overrides the prescribed mesh size (used for tail checks).
    """
    if h is None:
        h = mesh_size(n, beta2)
    elif n < 1 or not h > 0:
        raise DomainError("need n >= 1 and h > 0")
    terms: list[float] = []
    skipped = 0
    for j in range(n + 1):
        for t in ((0.0,) if j == 0 else (-j * h, j * h)):
            value, was_skipped = _node(problem, p, t)
            skipped += was_skipped
            terms.append(value)
    return QuadratureResult(value=h * math.fsum(terms), n=n, h=h, nodes_skipped=skipped)


def _params_for(problem: Problem, method: Method) -> tuple[TransformParams, float]:
    cal = choose_T(problem.decay)
    if method is Method.DE:
        p = de_params()
        return p, beta2(p, cal)
    mapped = collect_singularities(problem.kind, problem.singularities)
    p = solve_params(mapped, cal)
    if method is Method.NEW2:
        p = p.with_variant(Variant.APPROX)
    return p, beta2(p, cal)


def prepare(problem: Problem, method: Method | str) -> tuple[TransformParams, float]:
    """Map parameters and ``beta2`` for ``method`` on ``problem``."""
    return _params_for(problem, Method(method))


def sweep(problem: Problem, method: Method | str, n_list: Iterable[int]) -> list[SweepRecord]:
    """One record per ``n``; parameters are solved once and reused.

    Each record's time includes the one-off parameter solve. Failures are
    recorded per entry instead of aborting the sweep.
    """
    method = Method(method)
    n_values = sorted(set(int(n) for n in n_list))
    start = time.perf_counter_ns()
    try:
        p, b2 = _params_for(problem, method)
    except SlitDEError as exc:
        return [SweepRecord(method.value, n, None, None, None, 0, f"{type(exc).__name__}: {exc}")
                for n in n_values]
    solve_ns = time.perf_counter_ns() - start
    records = []
    for n in n_values:
        t0 = time.perf_counter_ns()
        try:
            res = integrate(problem, p, b2, n)
        except SlitDEError as exc:
            records.append(SweepRecord(method.value, n, None, None, None,
                                       solve_ns + time.perf_counter_ns() - t0,
                                       f"{type(exc).__name__}: {exc}"))
            continue
        elapsed = solve_ns + time.perf_counter_ns() - t0
        err = None if problem.reference is None else abs(res.value - problem.reference)
        records.append(SweepRecord(method.value, n, res.h, res.value, err, elapsed))
    return records


def d_de(problem: Problem) -> float:
    """Strip half-width of analyticity for the plain DE map.

    Minimum over the integrand's own singularities of
    ``Im asinh((2/pi) psi^{-1}(delta + eps i))``, capped at ``pi/2``.
    """
    if not problem.singularities:
        raise DomainError("d_DE needs at least one singularity")
    best = math.pi / 2
    for s in problem.singularities:
        w = psi_preimage(problem.kind, complex(s.delta, s.eps))
        z = cmath.asinh((2.0 / math.pi) * complex(w.delta_t, w.eps_t))
        best = min(best, z.imag)
    return best
