"""Benchmark integrands and JSON problem files.

Integrands are products of named kernels so that a problem file can describe
one without an expression interpreter. With ``L(x) = eps^2 + (x - delta)^2``
the kernels are:

================  ======================================
``exp_lorentz``   ``exp(coef * L(x)**power)``
``cos_lorentz``   ``cos(coef * L(x)**power)``
``lorentz_pow``   ``L(x)**power``
``log_one_minus`` ``log(1 - x)``
``one_plus_pow``  ``(1 + x)**power``
``x_pow``         ``x**power``
``exp_linear``    ``exp(rate * x)``
``const``         ``value``
================  ======================================

Kernels accept floats or numpy arrays.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

import numpy as np

from .calibration import DecaySpec
from .endpoint_maps import FINITE, HALF_LINE, REAL_LINE, IntervalKind, Kind, Singularity
from .errors import DomainError, ParseError, ValidationError

__all__ = [
    "Kernel",
    "KernelProduct",
    "Problem",
    "BUILTIN_IDS",
    "builtin",
    "problem_from_dict",
    "problem_to_dict",
    "load_problem",
    "resolve_problem",
]

_KERNEL_ARGS: dict[str, tuple[str, ...]] = {
    "exp_lorentz": ("delta", "eps", "coef", "power"),
    "cos_lorentz": ("delta", "eps", "coef", "power"),
    "lorentz_pow": ("delta", "eps", "power"),
    "log_one_minus": (),
    "one_plus_pow": ("power",),
    "x_pow": ("power",),
    "exp_linear": ("rate",),
    "const": ("value",),
}


@dataclass(frozen=True)
class Kernel:
    name: str
    args: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        if self.name not in _KERNEL_ARGS:
            raise DomainError(f"unknown kernel {self.name!r}")
        got = tuple(k for k, _ in self.args)
        if got != _KERNEL_ARGS[self.name]:
            raise DomainError(f"kernel {self.name} takes {_KERNEL_ARGS[self.name]}, got {got}")

    @classmethod
    def make(cls, name: str, **kw: float) -> "Kernel":
        order = _KERNEL_ARGS.get(name)
        if order is None:
            raise DomainError(f"unknown kernel {name!r}")
        missing = set(order) - set(kw)
        extra = set(kw) - set(order)
        if missing or extra:
            raise DomainError(f"kernel {name}: missing {sorted(missing)}, unexpected {sorted(extra)}")
        return cls(name, tuple((k, float(kw[k])) for k in order))

    def __call__(self, x, one_plus=None, one_minus=None):
        a = dict(self.args)
        n = self.name
        if n in ("exp_lorentz", "cos_lorentz", "lorentz_pow"):
            lor = a["eps"] ** 2 + (x - a["delta"]) ** 2
            if n == "lorentz_pow":
                return lor ** a["power"]
            arg = a["coef"] * lor ** a["power"]
            return np.exp(arg) if n == "exp_lorentz" else np.cos(arg)
        if n == "log_one_minus":
            return np.log(one_minus) if one_minus is not None else np.log1p(-x)
        if n == "one_plus_pow":
            return (1.0 + x if one_plus is None else one_plus) ** a["power"]
        if n == "x_pow":
            return x ** a["power"]
        if n == "exp_linear":
            return np.exp(a["rate"] * x)
        return a["value"] + 0.0 * x

    def to_dict(self) -> dict[str, Any]:
        return {"kernel": self.name, **dict(self.args)}


@dataclass(frozen=True)
class KernelProduct:
    """Callable product of kernels; compares equal by its factor list."""

    factors: tuple[Kernel, ...]

    def __call__(self, x):
        return self.evaluate(x)

    def evaluate(self, x, one_plus=None, one_minus=None):
        """Evaluate with optional accurate ``1 + x`` and ``1 - x``."""
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            out = 1.0
            for k in self.factors:
                out = out * k(x, one_plus, one_minus)
        if np.ndim(out) == 0:
            return float(out)
        return out


@dataclass(frozen=True)
class Problem:
    name: str
    kind: IntervalKind
    integrand: Callable[[float], float]
    singularities: tuple[Singularity, ...]
    decay: DecaySpec
    reference: float | None = None
    description: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "singularities", tuple(self.singularities))
        if self.decay.kind != self.kind:
            raise ValidationError("decay.kind must equal the problem's interval kind")


def _lor(name: str, delta: float, eps: float, **kw: float) -> Kernel:
    return Kernel.make(name, delta=delta, eps=eps, **kw)


def _p51() -> Problem:
    d1, e1 = -0.5, 1.0
    d2, e2 = 0.5, 0.5
    f = KernelProduct((
        _lor("exp_lorentz", d1, e1, coef=1.0, power=-1.0),
        Kernel.make("log_one_minus"),
        _lor("lorentz_pow", d2, e2, power=-1.0),
        Kernel.make("one_plus_pow", power=-0.5),
    ))
    return Problem(
        name="p51",
        kind=FINITE,
        integrand=f,
        singularities=(Singularity(d1, e1), Singularity(d2, e2)),
        decay=DecaySpec(FINITE, p=0.0, q=-0.5),
        reference=-2.04645,
        description="finite interval (-1, 1)",
    )


def _p52() -> Problem:
    s = [(-2.0, 1.0), (-1.0, 0.5), (1.0, 0.25), (2.0, 1.0)]
    f = KernelProduct((
        _lor("exp_lorentz", *s[0], coef=10.0, power=-1.0),
        _lor("cos_lorentz", *s[1], coef=10.0, power=-1.0),
        _lor("lorentz_pow", *s[2], power=-1.0),
        _lor("lorentz_pow", *s[3], power=-0.5),
    ))
    return Problem(
        name="p52",
        kind=REAL_LINE,
        integrand=f,
        singularities=tuple(Singularity(*ds) for ds in s),
        decay=DecaySpec(REAL_LINE, r=-3.0, s=-3.0),
        reference=15.0136,
        description="infinite interval (-inf, inf)",
    )


def _p53() -> Problem:
    s = [(0.3, 0.2), (0.5, 0.6), (0.8, 0.5), (1.2, 0.3)]
    f = KernelProduct((
        _lor("exp_lorentz", *s[0], coef=1.0 / 50.0, power=-1.5),
        _lor("exp_lorentz", *s[3], coef=1.0 / 20.0, power=-1.5),
        Kernel.make("x_pow", power=-0.5),
        _lor("lorentz_pow", *s[1], power=-0.5),
        _lor("lorentz_pow", *s[2], power=-0.5),
    ))
    return Problem(
        name="p53",
        kind=HALF_LINE,
        integrand=f,
        singularities=tuple(Singularity(*ds) for ds in s),
        decay=DecaySpec(HALF_LINE, r=-2.5, q=-0.5),
        reference=30.6929,
        description="semi-infinite interval (0, inf), algebraic decay",
    )


P54_SINGULARITIES = ((1.0, 0.1), (2.0, 0.5), (3.0, 0.3), (4.0, 0.5), (5.0, 0.2), (6.0, 0.5), (7.0, 0.1))
P54_COEFS = (0.8, 0.2, 0.5, 0.1, 0.5)


def _p54() -> Problem:
    kind = IntervalKind.exp_weight(0.2)
    s = P54_SINGULARITIES
    factors = [
        _lor("cos_lorentz", *s[0], coef=5.0, power=-1.0),
        _lor("cos_lorentz", *s[6], coef=10.0, power=-1.0),
    ]
    for (d, e), c in zip(s[1:6], P54_COEFS):
        factors.append(_lor("exp_lorentz", d, e, coef=c, power=-1.0))
    factors += [Kernel.make("exp_linear", rate=-0.2), Kernel.make("x_pow", power=-0.5)]
    return Problem(
        name="p54",
        kind=kind,
        integrand=KernelProduct(tuple(factors)),
        singularities=tuple(Singularity(*ds) for ds in s),
        decay=DecaySpec(kind, q=-0.5),
        reference=-0.3451,
        description="semi-infinite interval (0, inf), exponential weight e^{-x/5}",
    )


_BUILDERS = {"p51": _p51, "p52": _p52, "p53": _p53, "p54": _p54}
BUILTIN_IDS = tuple(_BUILDERS)


def builtin(problem_id: str) -> Problem:
    try:
        return _BUILDERS[problem_id]()
    except KeyError:
        raise KeyError(f"unknown built-in problem {problem_id!r}; choose from {BUILTIN_IDS}") from None


# --- JSON -----------------------------------------------------------------


def problem_to_dict(problem: Problem) -> dict[str, Any]:
    interval: dict[str, Any] = {"kind": problem.kind.kind.value}
    if problem.kind.v is not None:
        interval["v"] = problem.kind.v
    decay = {k: getattr(problem.decay, k) for k in ("p", "q", "r", "s") if getattr(problem.decay, k) is not None}
    if problem.kind.v is not None:
        decay["v"] = problem.kind.v
    integrand = problem.integrand
    if not isinstance(integrand, KernelProduct):
        raise ValidationError("only kernel-product integrands can be serialized")
    doc: dict[str, Any] = {
        "name": problem.name,
        "interval": interval,
        "singularities": [{"delta": s.delta, "eps": s.eps} for s in problem.singularities],
        "decay": decay,
        "integrand": [k.to_dict() for k in integrand.factors],
    }
    if problem.reference is not None:
        doc["reference"] = problem.reference
    return doc


def _number(obj: Mapping[str, Any], key: str, where: str) -> float:
    value = obj.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}.{key}: expected a number, got {value!r}")
    return float(value)


def problem_from_dict(doc: Mapping[str, Any]) -> Problem:
    """Build a problem from a parsed JSON document.

    Structural problems raise ``ParseError``; invariant violations
    (``eps <= 0``, exponents out of range) raise ``ValidationError``.
    """
    if not isinstance(doc, Mapping):
        raise ParseError("top level must be an object")
    name = doc.get("name")
    if not isinstance(name, str):
        raise ParseError("name: expected a string")
    interval = doc.get("interval")
    if not isinstance(interval, Mapping) or "kind" not in interval:
        raise ParseError("interval: expected an object with a 'kind'")
    try:
        kind_enum = Kind(interval["kind"])
    except ValueError:
        raise ParseError(f"interval.kind: unknown kind {interval['kind']!r}") from None
    try:
        if kind_enum is Kind.HALF_LINE_EXP:
            kind = IntervalKind.exp_weight(_number(interval, "v", "interval"))
        else:
            kind = IntervalKind(kind_enum)
    except DomainError as exc:
        raise ValidationError(f"interval: {exc}") from None

    raw_sings = doc.get("singularities", [])
    if not isinstance(raw_sings, list):
        raise ParseError("singularities: expected a list")
    sings = []
    for i, item in enumerate(raw_sings):
        if not isinstance(item, Mapping):
            raise ParseError(f"singularities[{i}]: expected an object")
        delta = _number(item, "delta", f"singularities[{i}]")
        eps = _number(item, "eps", f"singularities[{i}]")
        try:
            sings.append(Singularity(delta, eps))
        except DomainError as exc:
            raise ValidationError(f"singularities[{i}]: {exc}") from None

    decay_doc = doc.get("decay")
    if not isinstance(decay_doc, Mapping):
        raise ParseError("decay: expected an object")
    exps = {}
    for key in ("p", "q", "r", "s"):
        if key in decay_doc:
            exps[key] = _number(decay_doc, key, "decay")
    if "v" in decay_doc and kind.v is not None and _number(decay_doc, "v", "decay") != kind.v:
        raise ValidationError("decay.v disagrees with interval.v")
    try:
        decay = DecaySpec(kind, **exps)
    except DomainError as exc:
        raise ValidationError(f"decay: {exc}") from None

    integrand = _parse_integrand(doc.get("integrand"))
    reference = None
    if doc.get("reference") is not None:
        reference = _number(doc, "reference", "")
    return Problem(
        name=name,
        kind=kind,
        integrand=integrand,
        singularities=tuple(sings),
        decay=decay,
        reference=reference,
    )


def _parse_integrand(spec: Any) -> KernelProduct:
    if isinstance(spec, str):
        if spec not in _BUILDERS:
            raise ParseError(f"integrand: unknown built-in {spec!r}")
        return builtin(spec).integrand
    if not isinstance(spec, list) or not spec:
        raise ParseError("integrand: expected a built-in id or a non-empty list of kernels")
    factors = []
    for i, item in enumerate(spec):
        if not isinstance(item, Mapping) or "kernel" not in item:
            raise ParseError(f"integrand[{i}]: expected an object with a 'kernel'")
        args = {k: _number(item, k, f"integrand[{i}]") for k in item if k != "kernel"}
        try:
            factors.append(Kernel.make(item["kernel"], **args))
        except DomainError as exc:
            raise ParseError(f"integrand[{i}]: {exc}") from None
    return KernelProduct(tuple(factors))


def load_problem(path: str | Path) -> Problem:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return problem_from_dict(doc)


def resolve_problem(ref: str) -> Problem:
    """A built-in id or a path to a problem file."""
    if ref in _BUILDERS:
        return builtin(ref)
    return load_problem(ref)
