"""Compiled inner loops for translation-lattice sums."""
import math

import numba
import numpy as np


@numba.njit(cache=True)
def windowed_lattice_sums(pts, rest2, shifts, lam, s, radius, width, cutoff):
    """Smoothly windowed lattice sums of ``y (|y|^2 + rest2)^(-s/2)``.

    For every point ``i`` and shift ``j`` this accumulates, over lattice
    vectors ``l`` with ``rho = |pts[i] + shifts[j] + lam[l]| <= cutoff``,
    the weight ``w = 0.5 erfc((rho - radius) / width) (rho^2 + rest2[i])^(-s/2)``.

    Returns
    -------
    ndarray, shape (P, M, d + 1)
        Entry 0 is ``sum w``; entries ``1..d`` are ``sum y_a w``.  Each
        entry is accumulated sequentially in lattice order, so the result
        is deterministic.
    """
    P, d = pts.shape
    M = shifts.shape[0]
    L = lam.shape[0]
    out = np.zeros((P, M, d + 1))
    y = np.empty(d)
    acc = np.empty(d + 1)
    for i in range(P):
        for j in range(M):
            for a in range(d + 1):
                acc[a] = 0.0
            for l in range(L):
                r2 = 0.0
                for a in range(d):
                    y[a] = pts[i, a] + shifts[j, a] + lam[l, a]
                    r2 += y[a] * y[a]
                rho = math.sqrt(r2)
                if rho > cutoff:
                    continue
                w = 0.5 * math.erfc((rho - radius) / width) * (r2 + rest2[i]) ** (-0.5 * s)
                acc[0] += w
                for a in range(d):
                    acc[a + 1] += y[a] * w
            for a in range(d + 1):
                out[i, j, a] = acc[a]
    return out
