"""Direct solves of the per-mode fractional ODEs and flux assembly.

Each retained mode n satisfies

    D^alpha u_n(t) + lam_n a(t) u_n(t) = F_n(t),   u_n(0) = b_n,

marched by the implicit L1 scheme with the coefficient evaluated at the
implicit node (unconditionally solvable, sign- and order-preserving).  For
constant coefficients the Mittag-Leffler representation provides an
independent oracle, evaluated with the same singularity-exact product
quadrature idea as the fractional integral: the kernel moments over each
panel come from closed antiderivatives, never from sampling the singular
kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._backend import l1_solve_mode
from .domains import EigenSystem, ProblemData
from .fracops import TimeGrid, l1_weights
from .special import MlParams, mittag_leffler

__all__ = [
    "CoefficientSamples",
    "ModeTrace",
    "FluxTrace",
    "solve_mode",
    "analytic_mode_solution",
    "solve_direct",
    "flux_trace",
    "add_noise",
]


@dataclass(frozen=True)
class CoefficientSamples:
    """A strictly positive diffusivity sampled on the grid nodes."""

    values: np.ndarray
    grid: TimeGrid

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if not self.grid.conforms(values):
            raise ValueError(
                f"CoefficientSamples: expected {self.grid.Nt + 1} samples, "
                f"got shape {values.shape}"
            )
        if not np.all(values > 0.0):
            raise ValueError(
                "CoefficientSamples: the diffusivity must be positive at "
                "every node"
            )


@dataclass(frozen=True)
class ModeTrace:
    """Per-mode solution samples U[n, k] = u_n(t_k)."""

    U: np.ndarray
    grid: TimeGrid


@dataclass(frozen=True)
class FluxTrace:
    """Boundary flux samples g(t_k) = a(t_k) du/dn(x0, t_k)."""

    g: np.ndarray
    grid: TimeGrid
    kind: str = "exact"
    delta: float = 0.0
    seed: Optional[int] = None


def solve_mode(
    lam: float,
    a: CoefficientSamples,
    Fn: np.ndarray,
    bn: float,
    alpha: float,
) -> np.ndarray:
    """March one mode with the implicit L1 scheme.

    Returns the Nt+1 node values; u(0) = bn exactly.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"solve_mode: alpha must lie in (0, 1), got {alpha}")
    if lam <= 0.0:
        raise ValueError(f"solve_mode: lam must be positive, got {lam}")
    grid = a.grid
    Fn = np.ascontiguousarray(Fn, dtype=float)
    if not grid.conforms(Fn):
        raise ValueError("solve_mode: source samples do not match the grid")
    w = l1_weights(alpha, grid.Nt).b
    return l1_solve_mode(
        w,
        float(lam),
        np.ascontiguousarray(a.values),
        Fn,
        float(bn),
        grid.tau ** (-alpha),
    )


def _ml_table(alpha: float, beta: float, lam_eff: float, grid: TimeGrid) -> np.ndarray:
    p = MlParams(alpha, beta)
    t = grid.nodes
    return np.array([mittag_leffler(p, -lam_eff * tk**alpha) for tk in t])


def analytic_mode_solution(
    lam: float,
    a_const: float,
    Fn: np.ndarray,
    bn: float,
    alpha: float,
    grid: TimeGrid,
) -> np.ndarray:
    """Constant-coefficient mode solution from its Mittag-Leffler form.

    u(t) = bn E_{alpha,1}(-lam a t^alpha)
         + int_0^t F(s) (t-s)^(alpha-1) E_{alpha,alpha}(-lam a (t-s)^alpha) ds

    The convolution integrates the singular kernel exactly against the
    piecewise-linear interpolant of Fn: panel moments of the kernel and of
    u * kernel follow from the antiderivative identities
    d/du E_{alpha,1}(-c u^alpha) = -c u^(alpha-1) E_{alpha,alpha}(-c u^alpha)
    and int_0^u E_{alpha,1}(-c s^alpha) ds = u E_{alpha,2}(-c u^alpha).

    Serves as the oracle for solve_mode; alpha = 1 is allowed and reduces
    to classical exponential relaxation.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(
            f"analytic_mode_solution: alpha must lie in (0, 1], got {alpha}"
        )
    if lam <= 0.0 or a_const <= 0.0:
        raise ValueError("analytic_mode_solution: lam and a_const must be positive")
    Fn = np.asarray(Fn, dtype=float)
    if not grid.conforms(Fn):
        raise ValueError("analytic_mode_solution: source samples do not match grid")
    lam_eff = lam * a_const
    E1 = _ml_table(alpha, 1.0, lam_eff, grid)
    u = bn * E1
    if np.any(Fn != 0.0):
        Nt, tau = grid.Nt, grid.tau
        t = grid.nodes
        E2 = _ml_table(alpha, 2.0, lam_eff, grid)
        # panel moments over u in [(m-1) tau, m tau], m = 1..Nt
        A = -np.diff(E1) / lam_eff
        tE1 = t * E1
        tE2 = t * E2
        B = (-np.diff(tE1) + np.diff(tE2)) / lam_eff
        sigma = np.diff(Fn) / tau
        conv_f = np.convolve(A, Fn[:Nt])[:Nt]
        conv_s = np.convolve(t[1:] * A - B, sigma)[:Nt]
        u = u.copy()
        u[1:] += conv_f + conv_s
    return u


def solve_direct(
    es: EigenSystem, pd: ProblemData, a: CoefficientSamples, alpha: float
) -> ModeTrace:
    """Solve every retained mode; silent modes (b_n = 0, F_n = 0) stay zero."""
    if pd.grid is not a.grid and pd.grid != a.grid:
        raise ValueError("solve_direct: ProblemData and coefficient grids differ")
    U = np.zeros((len(es), a.grid.Nt + 1))
    for i, mode in enumerate(es.modes):
        bn = pd.b[i]
        Fn = pd.Fmat[i]
        if bn == 0.0 and not np.any(Fn != 0.0):
            continue
        U[i] = solve_mode(mode.lam, a, Fn, bn, alpha)
    return ModeTrace(U=U, grid=a.grid)


def flux_trace(es: EigenSystem, mt: ModeTrace, a: CoefficientSamples) -> FluxTrace:
    """Assemble g(t_k) = a(t_k) * sum_n u_n(t_k) d_n."""
    if mt.U.shape != (len(es), a.grid.Nt + 1):
        raise ValueError("flux_trace: trace shape does not match system/grid")
    g = a.values * (es.flux @ mt.U)
    return FluxTrace(g=g, grid=a.grid, kind="exact")


def add_noise(g: FluxTrace, delta: float, seed: int) -> FluxTrace:
    """Multiplicative uniform noise: g_delta = (1 + zeta * delta) g.

    zeta is i.i.d. uniform on [-1, 1] from the seeded generator, so
    max |(g - g_delta) / g| <= delta and a fixed seed reproduces the trace
    bit for bit.
    """
    if delta < 0.0:
        raise ValueError(f"add_noise: delta must be nonnegative, got {delta}")
    if delta == 0.0:
        return FluxTrace(g=g.g.copy(), grid=g.grid, kind="exact")
    zeta = np.random.default_rng(seed).uniform(-1.0, 1.0, g.g.shape[0])
    return FluxTrace(
        g=(1.0 + zeta * delta) * g.g,
        grid=g.grid,
        kind=f"noisy(delta={delta}, seed={seed})",
        delta=delta,
        seed=seed,
    )
