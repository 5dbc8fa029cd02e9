"""Pure-Python (numpy) fallback for the L1 time-stepping kernel.

Mirrors subdiff._kernels exactly; the per-step history sum becomes a BLAS
dot against the reversed solution prefix.
"""

from __future__ import annotations

import numpy as np


def l1_solve_mode(
    w: np.ndarray,
    lam: float,
    a: np.ndarray,
    F: np.ndarray,
    u0: float,
    tau_neg_alpha: float,
) -> np.ndarray:
    """March the implicit L1 scheme for one mode (see subdiff._kernels)."""
    Nt = a.shape[0] - 1
    c = np.diff(w)
    u = np.empty(Nt + 1)
    u[0] = u0
    for k in range(1, Nt + 1):
        # sum_{j=1}^{k-1} (w_j - w_{j-1}) u_{k-j}
        hist = c[: k - 1] @ u[k - 1 : 0 : -1]
        num = F[k] + tau_neg_alpha * (w[k - 1] * u0 - hist)
        u[k] = num / (tau_neg_alpha * w[0] + lam * a[k])
    return u
