"""Time-fractional diffusion with a time-dependent diffusivity.

Direct solves of the spectral mode system, boundary-flux synthesis, and
recovery of the diffusivity from single-point flux data by a monotone
fixed-point iteration.
"""

from ._backend import backend_name
from .direct import (
    CoefficientSamples,
    FluxTrace,
    ModeTrace,
    add_noise,
    analytic_mode_solution,
    flux_trace,
    solve_direct,
    solve_mode,
)
from .domains import (
    AssumptionReport,
    EigenSystem,
    Mode,
    ProblemData,
    build_interval,
    build_square,
    project,
    sign_normalize,
    validate_assumptions,
)
from .fracops import TimeGrid, L1Weights, caputo_l1, l1_weights, rl_integral
from .inverse import (
    AssumptionError,
    InverseConfig,
    ReconstructionResult,
    WellDefinednessError,
    apply_K,
    initial_guess,
    l2_norm,
    reconstruct,
)
from .special import MlParams, gamma, mittag_leffler, ml_kernel, ml_relaxation

__version__ = "0.1.0"

__all__ = [
    "AssumptionError",
    "AssumptionReport",
    "CoefficientSamples",
    "EigenSystem",
    "FluxTrace",
    "InverseConfig",
    "L1Weights",
    "MlParams",
    "Mode",
    "ModeTrace",
    "ProblemData",
    "ReconstructionResult",
    "TimeGrid",
    "WellDefinednessError",
    "add_noise",
    "analytic_mode_solution",
    "apply_K",
    "backend_name",
    "build_interval",
    "build_square",
    "caputo_l1",
    "flux_trace",
    "gamma",
    "initial_guess",
    "l1_weights",
    "l2_norm",
    "mittag_leffler",
    "ml_kernel",
    "ml_relaxation",
    "project",
    "reconstruct",
    "rl_integral",
    "sign_normalize",
    "solve_direct",
    "solve_mode",
    "validate_assumptions",
]
