"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SlitDEError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SlitDEError, ValueError):
    """An argument lies outside the domain of an operation."""


class EmptySetError(SlitDEError, ValueError):
    """No singularities are left to build a map from."""


class PoleError(SlitDEError, ValueError):
    """Evaluation requested exactly at a slit mouth."""


class ConvergenceError(SlitDEError, RuntimeError):
    """The parameter solver failed to reach its residual target."""

    def __init__(self, message: str, best_residual: float) -> None:
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


class EvalError(SlitDEError, ArithmeticError):
    """The integrand returned a non-finite value at an interior node."""

    def __init__(self, t: float, x: float, value: float) -> None:
        super().__init__(f"integrand is {value!r} at t={t!r} (x={x!r})")
        self.t = t
        self.x = x
        self.value = value


class ParseError(SlitDEError, ValueError):
    """A problem description file could not be parsed."""


class ValidationError(SlitDEError, ValueError):
    """A parsed problem violates an invariant."""


class NoConvergence(SlitDEError, RuntimeError):
    """The adaptive reference integrator hit its panel limit."""

    def __init__(self, estimate: float, error: float, panels: int) -> None:
        super().__init__(
            f"no convergence after {panels} panels: "
            f"estimate {estimate!r}, error bound {error:.3e}"
        )
        self.estimate = estimate
        self.error = error
        self.panels = panels
