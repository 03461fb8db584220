"""Acceptance criteria, one test each, at the stated tolerances.

Every test records a single PASS/FAIL line (shown in the pytest terminal
summary, or on stdout when run as a script).
"""

import math
import time

import numpy as np
import pytest

from slitde.calibration import DecaySpec, choose_T, solve_params, validate_params
from slitde.endpoint_maps import FINITE, collect_singularities
from slitde.oracle import reference_integrate
from slitde.problems import BUILTIN_IDS, Kernel, KernelProduct, Problem, builtin
from slitde.quadrature import Method, d_de, integrate, prepare
from slitde.transform import (
    TransformParams,
    Variant,
    h_new2_deriv,
    h_new2_eval,
    h_new_deriv,
    h_new_eval,
    slit_partial_fractions,
)

# 30-digit values from mpmath's quadrature, used where the error floor of
# 1e-13 must be resolved
P51_EXACT = -2.04645081160694749306251417254
P52_EXACT = 15.0133619876062770101030470326

RESULTS: list[str] = []


def record(name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def _new(pid, n, method="new"):
    pr = builtin(pid)
    p, b2 = prepare(pr, method)
    return pr, p, b2, integrate(pr, p, b2, n)


def _best_within(pid, target, n_max):
    """Smallest |value - target| over n = 10, 20, ..., n_max, and its n."""
    pr = builtin(pid)
    p, b2 = prepare(pr, "new")
    return min((abs(integrate(pr, p, b2, n).value - target), n) for n in range(10, n_max + 1, 10))


def test_p51_value():
    pr = builtin("p51")
    start = time.perf_counter()
    p, b2 = prepare(pr, "new")
    res = integrate(pr, p, b2, 60)
    wall = time.perf_counter() - start
    err = abs(res.value - pr.reference)
    exact = reference_integrate(pr, 1e-10)
    de_p, de_b2 = prepare(pr, "de")
    de_err = abs(integrate(pr, de_p, de_b2, 60).value - exact)
    new_err = abs(res.value - exact)
    ok = err <= 5e-5 and wall < 1.0 and de_err >= 10 * new_err
    record("p51 value", ok,
           f"New n=60 value {res.value:.10f}, |err vs -2.04645| {err:.2e} (<=5e-5); "
           f"solve+sum {wall * 1e3:.1f} ms (<1 s); vs oracle: DE {de_err:.2e}, New {new_err:.2e}, "
           f"ratio {de_err / max(new_err, 1e-300):.1e} (>=10)")


def test_p51_parameters():
    pr = builtin("p51")
    p, b2 = prepare(pr, "new")
    d = d_de(pr)
    ok = abs(b2 / 0.252 - 1) <= 0.05 and abs(d - 0.346) <= 1e-3
    record("p51 parameters", ok, f"beta2(New) {b2:.5f} (0.252 +-5%); d_DE {d:.5f} (0.346 +-0.001)")


def test_p52_value():
    pr, p, b2, res = _new("p52", 150)
    err = abs(res.value - pr.reference)
    d = d_de(pr)
    ok = err <= 5e-4 and abs(d - 0.0976) <= 5e-4 and b2 == p.C
    record("p52 value", ok,
           f"New n=150 value {res.value:.10f}, |err vs 15.0136| {err:.2e} (<=5e-4); "
           f"d_DE {d:.5f} (0.0976 +-5e-4); beta2 {b2:.6e} == C {p.C:.6e}")


def test_p54_value():
    pr = builtin("p54")
    _, b2 = prepare(pr, "new")
    err, n = _best_within("p54", pr.reference, 300)
    d = d_de(pr)
    ok = err <= 5e-4 and abs(d - 0.0139) <= 5e-4 and abs(b2 / 1.85e-6 - 1) <= 0.10
    record("p54 value", ok,
           f"New best over n<=300: |err vs -0.3451| {err:.2e} at n={n} (<=5e-4); "
           f"d_DE {d:.5f} (0.0139 +-5e-4); beta2 {b2:.4e} (1.85e-6 +-10%)")


def test_p53_value():
    oracle = reference_integrate(builtin("p53"), 1e-10)
    o_err = abs(oracle - 30.6929)
    n_err, n = _best_within("p53", 30.6929, 300)
    ok = o_err <= 5e-5 and n_err <= 5e-3
    record("p53 value", ok,
           f"oracle {oracle:.10f}, |err vs 30.6929| {o_err:.2e} (<=5e-5); "
           f"New best over n<=300: |err| {n_err:.2e} at n={n} (<=5e-3)")


def _random_interleaved(rng, m):
    pts = np.sort(rng.uniform(-3.0, 3.0, 2 * m - 1))
    return list(pts[0::2]), list(pts[1::2])


def test_structural_invariants():
    failures = []

    # telescoping, boundary interpolation and slit consistency on every built-in
    worst = {"telescoping": 0.0, "boundary": 0.0, "slit_rel": 0.0}
    for pid in BUILTIN_IDS:
        pr = builtin(pid)
        mapped = collect_singularities(pr.kind, pr.singularities)
        cal = choose_T(pr.decay)
        p = solve_params(mapped, cal)
        rep = validate_params(p, cal, mapped)
        worst["telescoping"] = max(worst["telescoping"], rep.telescoping_defect)
        worst["boundary"] = max(worst["boundary"], *rep.boundary_defects, *rep.slope_defects)
        for defect, dj in zip(rep.slit_defects, p.D):
            worst["slit_rel"] = max(worst["slit_rel"], defect / (2 * dj))
    if worst["telescoping"] > 1e-8:
        failures.append("telescoping")
    if worst["boundary"] > 1e-8:
        failures.append("boundary")
    if worst["slit_rel"] > 1e-6:
        failures.append("slit")

    # partial-fraction identity: 50 configurations x 100 points
    rng = np.random.default_rng(12345)
    pf_worst = 0.0
    for _ in range(50):
        a, b = _random_interleaved(rng, int(rng.integers(2, 7)))
        T, L = slit_partial_fractions(a, b)
        for t in rng.uniform(-5.0, 5.0, 100):
            lhs = math.exp(sum(math.log(math.cosh(t - x)) for x in a) - sum(math.log(math.cosh(t - x)) for x in b))
            rhs = math.cosh(t - T) + sum(0.5 * Lj / math.cosh(t - bj) for Lj, bj in zip(L, b))
            pf_worst = max(pf_worst, abs(rhs - lhs) / abs(lhs))
    if pf_worst > 1e-10:
        failures.append("partial fractions")

    # DE reduction, bit for bit, on a singularity-free symmetric problem
    one = Problem("one", FINITE, KernelProduct((Kernel.make("const", value=1.0),)), (),
                  DecaySpec(FINITE, p=0.5, q=0.5))
    p_new, b_new = prepare(one, Method.NEW)
    p_de, b_de = prepare(one, Method.DE)
    de_equal = b_new == b_de and all(
        integrate(one, p_new, b_new, n) == integrate(one, p_de, b_de, n) for n in (10, 25, 40)
    )
    if not de_equal:
        failures.append("DE reduction")

    # monotone H_New on a 10^4 grid for every solved built-in
    grid = np.linspace(-20.0, 20.0, 10_000)
    min_deriv = math.inf
    for pid in BUILTIN_IDS:
        p, _ = prepare(builtin(pid), "new")
        min_deriv = min(min_deriv, min(h_new_deriv(p, t) for t in grid))
    if not min_deriv > 0:
        failures.append("monotone")

    # New / New2 single-term agreement at u = 0 and in both limits; centring
    # the sinh shift on the evaluation point isolates the j-term
    D = 0.37

    def pair(T):
        exact = TransformParams(C=1e-300, T=T, a=(-1.0, 1.0), b=(0.0,), D=(D,))
        return exact, exact.with_variant(Variant.APPROX)

    exact, approx = pair(0.0)
    agree = (
        h_new_eval(exact, 0.0) == h_new2_eval(approx, 0.0)
        and h_new_deriv(exact, 0.0) == h_new2_deriv(approx, 0.0)
    )
    for u, limit in ((-800.0, 0.0), (800.0, math.pi * D)):
        exact, approx = pair(u)
        agree = agree and h_new_eval(exact, u) == h_new2_eval(approx, u) == limit
    if not agree:
        failures.append("New/New2 agreement")

    record("structural invariants", not failures,
           f"telescoping {worst['telescoping']:.1e}, boundary/slope {worst['boundary']:.1e} (<=1e-8), "
           f"slit rel {worst['slit_rel']:.1e} (<=1e-6), partial fractions {pf_worst:.1e} (<=1e-10), "
           f"DE bit-equal {de_equal}, min H' {min_deriv:.1e} (>0), New/New2 agree {agree}"
           + (f"; failed: {', '.join(failures)}" if failures else ""))


def test_convergence_shape():
    ns = [10, 20, 40, 80]
    lines, ok = [], True
    for pid, exact in (("p51", P51_EXACT), ("p52", P52_EXACT)):
        pr = builtin(pid)
        p, b2 = prepare(pr, "new")
        errs = [abs(integrate(pr, p, b2, n).value - exact) for n in ns]
        for e0, e1 in zip(errs, errs[1:]):
            if e0 > 1e-13 and not e1 <= e0:
                ok = False
        lines.append(f"{pid} " + " ".join(f"{e:.1e}" for e in errs))
    record("convergence shape", ok, "; ".join(lines) + " (non-increasing above 1e-13)")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
