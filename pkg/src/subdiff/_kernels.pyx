# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled L1 time-stepping kernel.

The implicit L1 update carries a full history sum per step, so one mode
solve is O(Nt^2); reconstruction repeats it once per mode per fixed-point
sweep, which makes this loop the runtime hot spot.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def l1_solve_mode(
    double[::1] w,
    double lam,
    double[::1] a,
    double[::1] F,
    double u0,
    double tau_neg_alpha,
):
    """March the implicit L1 scheme for one mode.

    Solves D^alpha u + lam * a(t) u = F(t), u(0) = u0 on the uniform grid
    carrying Nt+1 nodes; w holds the Nt L1 weights, tau_neg_alpha is
    tau**(-alpha).  Returns the Nt+1 node values.
    """
    cdef Py_ssize_t Nt = a.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(Nt + 1, dtype=np.float64)
    cdef double[::1] u = out
    cdef double[::1] c = np.diff(np.asarray(w))
    cdef Py_ssize_t k, j
    cdef double hist, num

    u[0] = u0
    for k in range(1, Nt + 1):
        hist = 0.0
        for j in range(1, k):
            hist += c[j - 1] * u[k - j]
        num = F[k] + tau_neg_alpha * (w[k - 1] * u0 - hist)
        u[k] = num / (tau_neg_alpha * w[0] + lam * a[k])
    return out
