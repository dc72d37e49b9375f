"""Numba-compiled twin of the greedy selection recursion.

Importing this module requires numba; :mod:`cirbo.accel` guards the
import. No fastmath: results must be reproducible and match the numpy
fallback to rounding error.
"""
from __future__ import annotations

import numpy as np
from numba import njit

_SQRT5 = np.sqrt(5.0)


@njit(cache=True)
def _kernel_value(X, a, b, ls, sv, family):
    """Covariance between rows a and b of X."""
    sq = 0.0
    for t in range(X.shape[1]):
        dt = (X[a, t] - X[b, t]) / ls[t]
        sq += dt * dt
    if family == 0:
        return sv * np.exp(-0.5 * sq)
    r = np.sqrt(sq)
    sr = _SQRT5 * r
    return sv * (1.0 + sr + sr * sr / 3.0) * np.exp(-sr)


@njit(cache=True)
def greedy(X, log_q, m, family, ls, sv, tie_tol, var_floor):
    """Incremental-Cholesky greedy MAP; mirrors accel._greedy_numpy."""
    n = X.shape[0]
    cond_var = np.full(n, sv)
    # cis[i, j]: row i of the partial Cholesky, candidate-major for locality
    cis = np.zeros((n, m))
    indices = np.zeros(m, dtype=np.int64)
    gains = np.zeros(m)
    selected = np.zeros(n, dtype=np.bool_)
    g = np.zeros(n)
    count = 0
    degenerate = False
    for j in range(m):
        mxv = -np.inf
        mxg = -np.inf
        for i in range(n):
            if selected[i]:
                g[i] = -np.inf
                continue
            v = cond_var[i]
            if v > mxv:
                mxv = v
            if v > 0.0:
                g[i] = 0.5 * np.log(v) + log_q[i]
            else:
                g[i] = -np.inf
            if g[i] > mxg:
                mxg = g[i]
        if mxv < var_floor:
            degenerate = True
            break
        best = -1
        for i in range(n):
            if g[i] >= mxg - tie_tol:
                best = i
                break
        vb = cond_var[best]
        sb = np.sqrt(vb)
        indices[j] = best
        gains[j] = 0.5 * np.log(vb) + log_q[best]
        for i in range(n):
            kv = _kernel_value(X, best, i, ls, sv, family)
            acc = 0.0
            for t in range(j):
                acc += cis[best, t] * cis[i, t]
            e = (kv - acc) / sb
            cis[i, j] = e
            nv = cond_var[i] - e * e
            cond_var[i] = nv if nv > 0.0 else 0.0
        selected[best] = True
        count += 1
    return indices[:count].copy(), gains[:count].copy(), degenerate
