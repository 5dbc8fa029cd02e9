"""Shared fixtures and independent numeric oracles.

The oracles here deliberately avoid the library's own evaluation paths:
erfc comes from composite Gauss-Legendre quadrature, derivatives from
central differences, integrals from quadrature of closed forms.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from subdiff import TimeGrid, build_interval, project


def erfc_scaled(x: float) -> float:
    """e^(x^2) erfc(x) for x >= 0 by quadrature of exp(-2xu - u^2).

    The substitution u = s - x removes both overflow and cancellation:
    e^(x^2) erfc(x) = (2/sqrt(pi)) * int_0^inf exp(-2xu - u^2) du.
    """
    nodes, weights = np.polynomial.legendre.leggauss(10)
    total = 0.0
    width = 9.0  # exp(-u^2) < 1e-35 past u = 9 even at x = 0
    panels = 80
    h = width / panels
    for i in range(panels):
        lo = i * h
        u = lo + (nodes + 1.0) * (h / 2.0)
        total += np.sum(weights * np.exp(-2.0 * x * u - u * u)) * (h / 2.0)
    return 2.0 / math.sqrt(math.pi) * total


def smile(t: np.ndarray) -> np.ndarray:
    """The nonsmooth 'smile' coefficient with closed outer brackets."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    left = t <= 1.0 / 3.0
    right = t >= 2.0 / 3.0
    mid = ~(left | right)
    out[left] = 0.8 * np.sin(3.0 * np.pi * t[left]) + 1.5
    out[mid] = -0.5 * np.sin(3.0 * np.pi * t[mid] - np.pi) + 0.6
    out[right] = 0.8 * np.sin(3.0 * np.pi * t[right] - 2.0 * np.pi) + 1.5
    return out


def a_smooth(t: np.ndarray) -> np.ndarray:
    return np.sin(5.0 * np.pi * t) + 1.3


@pytest.fixture(scope="session")
def grid1000() -> TimeGrid:
    return TimeGrid(1.0, 1000)


@pytest.fixture(scope="session")
def interval_system():
    return build_interval(32, 0.0)


@pytest.fixture(scope="session")
def interval_problem(interval_system, grid1000):
    pd = project(
        interval_system, "neg_sin_pi_x", ("neg_sin_pi_x", "t_plus_1"), grid1000
    )
    return interval_system, pd, grid1000
