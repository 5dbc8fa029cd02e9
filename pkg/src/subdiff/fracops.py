"""Discrete fractional calculus on uniform time grids.

Provides the L1 discretization of the Caputo derivative of order
alpha in (0, 1),

    D^alpha u(t_N) ~ tau^(-alpha) * sum_{j=0}^{N-1} b_j (u_{N-j} - u_{N-j-1}),
    b_j = ((j+1)^(1-alpha) - j^(1-alpha)) / Gamma(2-alpha),

and the Riemann-Liouville fractional integral evaluated by a product rule
that integrates the (t-s)^(alpha-1) kernel exactly against piecewise-linear
data, so the kernel singularity costs no accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .special import gamma

__all__ = ["TimeGrid", "L1Weights", "l1_weights", "caputo_l1", "rl_integral"]


@dataclass(frozen=True)
class TimeGrid:
    """Uniform partition of [0, T] into Nt steps (Nt+1 nodes)."""

    T: float
    Nt: int
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.T <= 0.0:
            raise ValueError(f"TimeGrid: horizon T must be positive, got {self.T}")
        if self.Nt < 2:
            raise ValueError(f"TimeGrid: need Nt >= 2 steps, got {self.Nt}")
        object.__setattr__(self, "nodes", np.linspace(0.0, self.T, self.Nt + 1))

    @property
    def tau(self) -> float:
        return self.T / self.Nt

    def conforms(self, samples: np.ndarray) -> bool:
        return samples.ndim == 1 and samples.shape[0] == self.Nt + 1


@dataclass(frozen=True)
class L1Weights:
    """L1 weight sequence b_j, strictly decreasing and positive."""

    alpha: float
    b: np.ndarray


def l1_weights(alpha: float, n: int) -> L1Weights:
    """First n L1 weights for Caputo order alpha in (0, 1)."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"l1_weights: alpha must lie in (0, 1), got {alpha}")
    if n < 1:
        raise ValueError(f"l1_weights: need n >= 1, got {n}")
    j = np.arange(n + 1, dtype=float)
    b = np.diff(j ** (1.0 - alpha)) / gamma(2.0 - alpha)
    return L1Weights(alpha=alpha, b=b)


def _check_samples(samples: np.ndarray, grid: TimeGrid, who: str) -> np.ndarray:
    samples = np.asarray(samples, dtype=float)
    if not grid.conforms(samples):
        raise ValueError(
            f"{who}: expected {grid.Nt + 1} samples on the grid, "
            f"got shape {samples.shape}"
        )
    return samples


def caputo_l1(samples: np.ndarray, alpha: float, grid: TimeGrid) -> np.ndarray:
    """L1 approximation of the Caputo derivative at every node.

    The node t_0 carries 0 by convention (the scheme defines the
    derivative from t_1 on).
    """
    u = _check_samples(samples, grid, "caputo_l1")
    b = l1_weights(alpha, grid.Nt).b
    du = np.diff(u)
    # D(t_k) = tau^-alpha * sum_{j<k} b_j du_{k-1-j}: one linear convolution
    conv = np.convolve(b, du)[: grid.Nt]
    out = np.empty(grid.Nt + 1)
    out[0] = 0.0
    out[1:] = grid.tau ** (-alpha) * conv
    return out


def rl_integral(samples: np.ndarray, alpha: float, grid: TimeGrid) -> np.ndarray:
    """Riemann-Liouville integral I^alpha of piecewise-linear samples.

    Exact kernel moments per panel make the rule exact for affine data;
    the value at t_0 is 0.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"rl_integral: alpha must lie in (0, 1), got {alpha}")
    u = _check_samples(samples, grid, "rl_integral")
    Nt, tau = grid.Nt, grid.tau
    t = grid.nodes
    # panel kernel moments over u in [(m-1) tau, m tau], m = 1..Nt:
    #   P_m = int u^(alpha-1) du,  Q_m = int u^alpha du
    powa = t**alpha
    P = np.diff(powa) / alpha
    Q = np.diff(t * powa) / (alpha + 1.0)
    sigma = np.diff(u) / tau
    # I(t_k) = 1/Gamma(alpha) * sum_{m=1}^{k}
    #          [(u_{k-m} + sigma_{k-m} * m tau) P_m - sigma_{k-m} Q_m]
    conv_u = np.convolve(P, u[:Nt])[:Nt]
    conv_s = np.convolve(t[1:] * P - Q, sigma)[:Nt]
    out = np.empty(Nt + 1)
    out[0] = 0.0
    out[1:] = (conv_u + conv_s) / gamma(alpha)
    return out
