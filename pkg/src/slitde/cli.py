"""Command-line front end.

Subcommands::

    slitde list
    slitde solve <problem> [--method new|new2] [--out params.json]
    slitde integrate <problem> --method de|new|new2 --n K
    slitde sweep <problem> [--methods de,new,new2] --n-min A --n-max B [--step S]
                 [--csv out.csv] [--svg out.svg]
    slitde oracle <problem> [--tol T]

``<problem>`` is a built-in id (see ``list``) or a path to a problem JSON
file. Exit codes: 0 success, 2 usage error, 3 the map solver or the
reference integrator did not converge, 4 integrand evaluation or problem
file error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .calibration import choose_T, validate_params
from .endpoint_maps import collect_singularities
from .errors import (
    ConvergenceError,
    DomainError,
    EmptySetError,
    EvalError,
    NoConvergence,
    ParseError,
    ValidationError,
)
from .oracle import MIN_TOL, reference_integrate
from .problems import BUILTIN_IDS, builtin, resolve_problem
from .quadrature import Method, integrate, prepare, sweep
from .report import render_svg, write_csv
from .transform import params_to_json

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3
EXIT_EVAL = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # report usage problems as exceptions so run() can return an exit code
    def error(self, message: str):
        raise _UsageError(f"{self.prog}: error: {message}")


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _methods(text: str) -> list[Method]:
    try:
        return [Method(m.strip()) for m in text.split(",") if m.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"methods must be drawn from de,new,new2; got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slitde", description="DE quadrature with slit-domain inner maps.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="list the built-in problems")

    p = sub.add_parser("solve", help="solve for the map parameters and report defects")
    p.add_argument("problem")
    p.add_argument("--method", choices=["new", "new2"], default="new")
    p.add_argument("--out", type=Path, help="write the parameters as JSON")

    p = sub.add_parser("integrate", help="one trapezoidal sum")
    p.add_argument("problem")
    p.add_argument("--method", choices=[m.value for m in Method], required=True)
    p.add_argument("--n", type=_positive_int, required=True)

    p = sub.add_parser("sweep", help="errors over a range of n")
    p.add_argument("problem")
    p.add_argument("--methods", type=_methods, default=[Method.DE, Method.NEW, Method.NEW2])
    p.add_argument("--n-min", type=_positive_int, required=True)
    p.add_argument("--n-max", type=_positive_int, required=True)
    p.add_argument("--step", type=_positive_int, default=10)
    p.add_argument("--csv", type=Path)
    p.add_argument("--svg", type=Path)

    p = sub.add_parser("oracle", help="adaptive Gauss-Kronrod reference value")
    p.add_argument("problem")
    p.add_argument("--tol", type=float, default=1e-10)
    return parser


def _load(ref: str):
    try:
        return resolve_problem(ref)
    except OSError as exc:
        raise _UsageError(f"cannot read problem {ref!r}: {exc.strerror or exc}") from None


def _cmd_list(args, out) -> int:
    for pid in BUILTIN_IDS:
        pr = builtin(pid)
        ref = "" if pr.reference is None else f"  reference {pr.reference:g}"
        print(f"{pid}  {pr.kind}  {len(pr.singularities)} singularities{ref}  {pr.description}", file=out)
    return EXIT_OK


def _cmd_solve(args, out) -> int:
    problem = _load(args.problem)
    params, b2 = prepare(problem, args.method)
    cal = choose_T(problem.decay)
    report = validate_params(params, cal, collect_singularities(problem.kind, problem.singularities))
    text = params_to_json(params)
    if args.out is not None:
        args.out.write_text(text + "\n", encoding="utf-8")
    print(text.rstrip(), file=out)
    print(f"beta2: {b2:.17g}", file=out)
    for key, value in report.as_dict().items():
        if isinstance(value, list):
            value = "[" + ", ".join(f"{v:.3e}" for v in value) + "]"
        else:
            value = f"{value:.3e}"
        print(f"{key}: {value}", file=out)
    return EXIT_OK


def _cmd_integrate(args, out) -> int:
    problem = _load(args.problem)
    params, b2 = prepare(problem, args.method)
    res = integrate(problem, params, b2, args.n)
    print(f"value: {res.value:.17g}", file=out)
    print(f"h: {res.h:.17g}", file=out)
    if problem.reference is None:
        print("abs_error: n/a", file=out)
    else:
        print(f"abs_error: {abs(res.value - problem.reference):.3e}", file=out)
    return EXIT_OK


def _cmd_sweep(args, out) -> int:
    if args.n_min > args.n_max:
        raise _UsageError("--n-min must not exceed --n-max")
    problem = _load(args.problem)
    n_list = list(range(args.n_min, args.n_max + 1, args.step))
    if n_list[-1] != args.n_max:
        n_list.append(args.n_max)
    records = []
    for method in args.methods:
        records.extend(sweep(problem, method, n_list))
    if args.csv is not None:
        with args.csv.open("w", encoding="utf-8", newline="") as fh:
            write_csv(records, fh)
    else:
        write_csv(records, out)
    if args.svg is not None:
        args.svg.write_text(render_svg(records, title=problem.name), encoding="utf-8")
    for r in records:
        if r.failed:
            print(f"{r.method} n={r.n}: {r.error}", file=sys.stderr)
    return EXIT_OK


def _cmd_oracle(args, out) -> int:
    if not args.tol >= MIN_TOL:
        raise _UsageError(f"--tol must be >= {MIN_TOL:g}")
    problem = _load(args.problem)
    value = reference_integrate(problem, args.tol)
    print(f"value: {value:.17g}", file=out)
    return EXIT_OK


_COMMANDS = {
    "list": _cmd_list,
    "solve": _cmd_solve,
    "integrate": _cmd_integrate,
    "sweep": _cmd_sweep,
    "oracle": _cmd_oracle,
}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    """Execute one command and return its exit code."""
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (ConvergenceError, NoConvergence) as exc:
        print(f"slitde: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (EvalError, ParseError, ValidationError) as exc:
        print(f"slitde: {exc}", file=sys.stderr)
        return EXIT_EVAL
    except (DomainError, EmptySetError) as exc:
        print(f"slitde: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
