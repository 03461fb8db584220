"""Double-exponential quadrature with slit-domain inner transformations.

The integral of ``f`` over an interval is computed as a trapezoidal sum in
the variable ``t`` of ``x = psi(H(t))``. ``psi`` is the classical
interval map (tanh, sinh, exp, log(exp+1)). ``H`` maps the strip
``|Im t| < pi/2`` conformally onto the plane minus vertical slits ending
at the mapped singularities of ``f``, so the transformed integrand is
analytic in the full strip.
"""

from .calibration import (
    Calibration,
    DecaySpec,
    ValidationReport,
    beta2,
    choose_T,
    solve_params,
    validate_params,
)
from .endpoint_maps import (
    FINITE,
    HALF_LINE,
    REAL_LINE,
    IntervalKind,
    Kind,
    MappedSingularity,
    Singularity,
    collect_singularities,
    psi_deriv,
    psi_eval,
    psi_preimage,
)
from .errors import (
    ConvergenceError,
    DomainError,
    EmptySetError,
    EvalError,
    NoConvergence,
    ParseError,
    PoleError,
    SlitDEError,
    ValidationError,
)
from .oracle import reference_integrate
from .problems import BUILTIN_IDS, Kernel, KernelProduct, Problem, builtin, load_problem
from .quadrature import Method, QuadratureResult, SweepRecord, d_de, integrate, mesh_size, prepare, sweep
from .transform import (
    TransformParams,
    Variant,
    de_params,
    h_deriv,
    h_eval,
    params_from_json,
    params_to_json,
    slit_partial_fractions,
)

__version__ = "0.1.0"
