import dataclasses
import math

import numpy as np
import pytest

from slitde.calibration import DecaySpec
from slitde.endpoint_maps import FINITE, HALF_LINE, REAL_LINE, IntervalKind, Singularity
from slitde.errors import DomainError, EvalError, NoConvergence
from slitde.oracle import MAX_PANELS, gk15, reference_integrate
from slitde.problems import BUILTIN_IDS, Kernel, KernelProduct, Problem, builtin
from slitde.quadrature import integrate, prepare


def test_gauss_part_is_seven_point_legendre():
    from slitde import oracle

    x, w = np.polynomial.legendre.leggauss(7)
    mask = oracle._G_WEIGHTS > 0
    assert np.allclose(np.sort(oracle._NODES[mask]), x, rtol=0, atol=1e-15)
    assert np.allclose(oracle._G_WEIGHTS[mask][np.argsort(oracle._NODES[mask])], w, rtol=0, atol=1e-15)
    assert oracle._K_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)


@pytest.mark.parametrize("degree", range(0, 23))
def test_kronrod_exact_for_polynomials(degree):
    # the 15-point Kronrod rule integrates degree <= 22 exactly
    k, _ = gk15(lambda u: u**degree, -1.0, 1.0)
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert k == pytest.approx(exact, abs=1e-15)


def test_gauss_exact_to_degree_13():
    k, err = gk15(lambda u: 3 * u**13 - u**6 + 2.0, 0.0, 2.0)
    assert err < 1e-15 * abs(k)


def _one():
    return Problem("one", FINITE, KernelProduct((Kernel.make("const", value=1.0),)), (),
                   DecaySpec(FINITE, p=0.0, q=0.0))


def test_constant():
    assert reference_integrate(_one(), 1e-10) == pytest.approx(2.0, abs=1e-14)


def test_p51_printed_digits():
    assert reference_integrate(builtin("p51"), 1e-8) == pytest.approx(-2.04645, abs=5e-6)


def test_p52_printed_digits():
    assert reference_integrate(builtin("p52"), 1e-8) == pytest.approx(15.0136, abs=5e-5)


def test_scalar_only_callable():
    pr = dataclasses.replace(_one(), integrand=lambda x: float(math.sqrt(1.0 - x * x)))
    assert reference_integrate(pr, 1e-10) == pytest.approx(math.pi / 2, abs=1e-10)


def test_endpoint_singularities_and_tails():
    # int_0^inf x^{-1/2} e^{-x} dx = sqrt(pi), int_R 1/(1+x^2) = pi
    k = IntervalKind.exp_weight(1.0)
    gamma = Problem("g", k, KernelProduct((Kernel.make("x_pow", power=-0.5), Kernel.make("exp_linear", rate=-1.0))),
                    (), DecaySpec(k, q=-0.5))
    assert reference_integrate(gamma, 1e-10) == pytest.approx(math.sqrt(math.pi), abs=1e-10)
    lor = Problem("l", REAL_LINE, KernelProduct((Kernel.make("lorentz_pow", delta=0.0, eps=1.0, power=-1.0),)),
                  (Singularity(0.0, 1.0),), DecaySpec(REAL_LINE, r=-2.0, s=-2.0))
    assert reference_integrate(lor, 1e-10) == pytest.approx(math.pi, abs=1e-10)
    beta = Problem("b", HALF_LINE, KernelProduct((Kernel.make("x_pow", power=-0.5),
                                                  Kernel.make("one_plus_pow", power=-1.0))),
                   (), DecaySpec(HALF_LINE, r=-1.5, q=-0.5))
    assert reference_integrate(beta, 1e-10) == pytest.approx(math.pi, abs=1e-10)


def test_tolerance_precondition():
    with pytest.raises(DomainError):
        reference_integrate(_one(), 1e-11)


def test_panel_limit():
    with pytest.raises(NoConvergence) as exc:
        reference_integrate(builtin("p54"), 1e-10, max_panels=20)
    assert exc.value.panels >= 20
    assert math.isfinite(exc.value.estimate) and exc.value.error > 1e-10
    assert MAX_PANELS == 1_000_000


def test_nan_integrand():
    pr = dataclasses.replace(_one(), integrand=lambda x: np.full_like(np.asarray(x, dtype=float), np.nan))
    with pytest.raises(EvalError):
        reference_integrate(pr, 1e-8)


@pytest.mark.parametrize("pid", BUILTIN_IDS)
def test_halving_tol_is_consistent(pid):
    pr = builtin(pid)
    coarse = reference_integrate(pr, 1e-8)
    fine = reference_integrate(pr, 5e-9)
    assert abs(fine - coarse) <= 1e-8


@pytest.mark.parametrize("pid, n", [("p51", 100), ("p52", 300), ("p53", 200), ("p54", 4000)])
def test_agrees_with_slit_map_quadrature(pid, n):
    tol = 1e-10
    pr = builtin(pid)
    p, b2 = prepare(pr, "new")
    assert reference_integrate(pr, tol) == pytest.approx(integrate(pr, p, b2, n).value, abs=10 * tol)
