"""Brute-force grid oracles for the acceptance suite.

Deliberately independent of the library objective code: each kernel
re-derives the absolute-loss and truncated objectives from scratch in a
fused scan over the grid, so solver and oracle cannot share a bug.
Compiled with numba because a 2000 x 2000 grid times 100 samples is a
~10^9-element sweep.
"""

import numpy as np
from numba import njit

LOG2 = float(np.log(2.0))


@njit(cache=True)
def grid_minima_d1(axis, X, y, alpha, saturating):
    """Minimum of (absolute loss, truncated loss) over a 1-D grid."""
    n = X.shape[0]
    best_l1 = np.inf
    best_tr = np.inf
    for i in range(axis.shape[0]):
        w0 = axis[i]
        s1 = 0.0
        s2 = 0.0
        for k in range(n):
            a = abs(y[k] - X[k, 0] * w0)
            s1 += a
            z = alpha * a
            if saturating:
                s2 += LOG2 if z >= 1.0 else -np.log1p(-z + 0.5 * z * z)
            else:
                s2 += np.log1p(z + 0.5 * z * z)
        v1 = s1 / n
        v2 = s2 / (n * alpha)
        if v1 < best_l1:
            best_l1 = v1
        if v2 < best_tr:
            best_tr = v2
    return best_l1, best_tr


@njit(cache=True)
def grid_minima_d2(axis, X, y, alpha, radius, saturating):
    """Minimum of (absolute loss, truncated loss) over a 2-D grid in the ball."""
    n = X.shape[0]
    best_l1 = np.inf
    best_tr = np.inf
    r2 = radius * radius
    for i in range(axis.shape[0]):
        w0 = axis[i]
        for j in range(axis.shape[0]):
            w1 = axis[j]
            if w0 * w0 + w1 * w1 > r2:
                continue
            s1 = 0.0
            s2 = 0.0
            for k in range(n):
                a = abs(y[k] - X[k, 0] * w0 - X[k, 1] * w1)
                s1 += a
                z = alpha * a
                if saturating:
                    s2 += LOG2 if z >= 1.0 else -np.log1p(-z + 0.5 * z * z)
                else:
                    s2 += np.log1p(z + 0.5 * z * z)
            v1 = s1 / n
            v2 = s2 / (n * alpha)
            if v1 < best_l1:
                best_l1 = v1
            if v2 < best_tr:
                best_tr = v2
    return best_l1, best_tr


def grid_minima(X, y, alpha, radius, saturating, resolution):
    axis = np.linspace(-radius, radius, resolution)
    if X.shape[1] == 1:
        return grid_minima_d1(axis, X, y, alpha, saturating)
    return grid_minima_d2(axis, X, y, alpha, radius, saturating)
