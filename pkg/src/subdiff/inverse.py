"""Recovery of the diffusivity from single-point flux data.

The operator

    K psi(t) = g(t) / sum_n u_n(t; psi) d_n

is monotone on positive candidates and has the true coefficient as a fixed
point, so iterating K from the admissible lower bound

    a0(t) = g(t) / [ sum_n b_n d_n + I^alpha( sum_n F_n d_n )(t) ]

produces a pointwise nondecreasing sequence converging to it.  Noisy data
reuse the same operator with the perturbed flux in the numerator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .direct import CoefficientSamples, FluxTrace, add_noise, solve_direct
from .domains import EigenSystem, ProblemData, validate_assumptions
from .fracops import TimeGrid, rl_integral

__all__ = [
    "AssumptionError",
    "WellDefinednessError",
    "InverseConfig",
    "ReconstructionResult",
    "l2_norm",
    "initial_guess",
    "apply_K",
    "reconstruct",
]

# positivity floor for flux denominators; below this the update would
# manufacture huge coefficients out of roundoff
_DENOM_FLOOR = 1e-14


class WellDefinednessError(RuntimeError):
    """A flux denominator lost positivity: the data violate the
    assumptions or the grid is too coarse."""


class AssumptionError(RuntimeError):
    """The projected data fail the sign/positivity assumptions the
    monotone iteration relies on."""


@dataclass(frozen=True)
class InverseConfig:
    """Iteration controls for the fixed-point reconstruction."""

    epsilon0: float = 1e-6
    max_iters: int = 200
    alpha: float = 0.9
    delta: float = 0.0
    seed: int = 0
    record_iterates: bool = False

    def __post_init__(self) -> None:
        if self.epsilon0 <= 0.0:
            raise ValueError(f"epsilon0 must be positive, got {self.epsilon0}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.delta < 0.0:
            raise ValueError(f"delta must be nonnegative, got {self.delta}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class ReconstructionResult:
    """Final iterate plus convergence diagnostics."""

    a_rec: CoefficientSamples
    iterates: Optional[list[CoefficientSamples]]
    n_iters: int
    converged: bool
    history: np.ndarray  # per-iteration L2 increments


def l2_norm(f: np.ndarray, grid: TimeGrid) -> float:
    """Composite-trapezoid L2[0, T] norm of node samples."""
    f = np.asarray(f, dtype=float)
    if not grid.conforms(f):
        raise ValueError("l2_norm: samples do not match the grid")
    return float(np.sqrt(np.trapezoid(f * f, dx=grid.tau)))


def _flux_values(g) -> np.ndarray:
    return np.asarray(getattr(g, "g", g), dtype=float)


def initial_guess(
    g: FluxTrace, es: EigenSystem, pd: ProblemData, alpha: float
) -> CoefficientSamples:
    """Admissible-set lower bound a0 = g / (du0/dn + I^alpha dF/dn at x0)."""
    gv = _flux_values(g)
    if np.any(gv <= 0.0):
        raise ValueError("initial_guess: flux data must be positive everywhere")
    d = es.flux
    denom = float(pd.b @ d) + rl_integral(d @ pd.Fmat, alpha, pd.grid)
    if np.min(denom) <= _DENOM_FLOOR:
        raise WellDefinednessError(
            "initial guess denominator du0/dn + I^alpha dF/dn is not "
            "positive; the projected data violate the sign assumptions"
        )
    return CoefficientSamples(values=gv / denom, grid=pd.grid)


def apply_K(
    psi: CoefficientSamples,
    g: FluxTrace,
    es: EigenSystem,
    pd: ProblemData,
    alpha: float,
) -> CoefficientSamples:
    """One application of the fixed-point operator: g over the modeled flux
    denominator sum_n u_n(t; psi) d_n."""
    gv = _flux_values(g)
    mt = solve_direct(es, pd, psi, alpha)
    denom = es.flux @ mt.U
    if np.min(denom) <= _DENOM_FLOOR:
        k = int(np.argmin(denom))
        raise WellDefinednessError(
            f"flux denominator lost positivity at node {k} "
            f"(value {denom[k]:.3e}); data violate the assumptions or the "
            "grid is too coarse"
        )
    return CoefficientSamples(values=gv / denom, grid=psi.grid)


def reconstruct(
    g: FluxTrace,
    es: EigenSystem,
    pd: ProblemData,
    cfg: InverseConfig,
    start: Optional[CoefficientSamples] = None,
    skip_validation: bool = False,
) -> ReconstructionResult:
    """Monotone fixed-point iteration with trapezoid-L2 stopping.

    The iteration starts from the admissible lower bound unless an explicit
    start is supplied; cfg.delta > 0 perturbs the flux multiplicatively
    (seeded) before anything else, which is the noisy-data variant of the
    operator.  The data assumptions are checked up front unless the caller
    explicitly overrides (some workable data, e.g. the square-domain bubble,
    carry harmless small negative projections).  Non-convergence within
    max_iters is reported through the result, not raised.
    """
    if not isinstance(g, FluxTrace):
        g = FluxTrace(_flux_values(g), pd.grid)
    if cfg.delta > 0.0:
        g = add_noise(g, cfg.delta, cfg.seed)
    if not skip_validation:
        report = validate_assumptions(pd, es, g)
        if not report.direct_ok:
            raise AssumptionError(
                "data fail the sign/positivity assumptions (pass "
                "skip_validation=True to iterate anyway):\n" + report.summary()
            )
    a_cur = start if start is not None else initial_guess(g, es, pd, cfg.alpha)
    iterates = [a_cur] if cfg.record_iterates else None
    history: list[float] = []
    converged = False
    n_iters = 0
    for _ in range(cfg.max_iters):
        a_next = apply_K(a_cur, g, es, pd, cfg.alpha)
        inc = l2_norm(a_next.values - a_cur.values, pd.grid)
        history.append(inc)
        n_iters += 1
        a_cur = a_next
        if iterates is not None:
            iterates.append(a_cur)
        if inc <= cfg.epsilon0:
            converged = True
            break
    return ReconstructionResult(
        a_rec=a_cur,
        iterates=iterates,
        n_iters=n_iters,
        converged=converged,
        history=np.array(history),
    )
