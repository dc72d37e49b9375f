"""Backend dispatch for the greedy selection kernel.

The O(M^2 N) greedy determinant maximisation is the one genuinely hot
loop in the package. It ships in two interchangeable implementations:

* a numba ``@njit`` version (default whenever numba imports), and
* a pure-numpy fallback.

``CIR_BO_BACKEND`` (``"numba"`` or ``"numpy"``) forces one of them; the
``backend=`` keyword on callers overrides the environment. Both
implementations run the same recursion in the same order and are
covered by a parity test; neither uses fastmath or threading, so runs
are reproducible bit-for-bit on a given backend.
"""
from __future__ import annotations

import os

import numpy as np

from .kernels import MATERN52, SQUARED_EXPONENTIAL, KernelSpec

ENV_VAR = "CIR_BO_BACKEND"
BACKENDS = ("numba", "numpy")

_SQRT5 = np.sqrt(5.0)
_FAMILY_CODES = {SQUARED_EXPONENTIAL: 0, MATERN52: 1}

try:
    from . import _greedy_numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    _greedy_numba = None
    NUMBA_AVAILABLE = False


def default_backend() -> str:
    return "numba" if NUMBA_AVAILABLE else "numpy"


def resolve_backend(backend: str | None = None) -> str:
    """Pick the backend: explicit argument, else env var, else default."""
    name = backend or os.environ.get(ENV_VAR) or default_backend()
    name = name.strip().lower()
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise RuntimeError(
            "numba backend requested but numba is not importable; "
            f"set {ENV_VAR}=numpy or install numba"
        )
    return name


def _kernel_rows_numpy(X: np.ndarray, i: int, ls: np.ndarray, sv: float,
                       family: int) -> np.ndarray:
    diff = (X - X[i]) / ls
    sq = np.sum(diff * diff, axis=1)
    if family == 0:
        return sv * np.exp(-0.5 * sq)
    r = np.sqrt(sq)
    sr = _SQRT5 * r
    return sv * (1.0 + sr + sr * sr / 3.0) * np.exp(-sr)


def _greedy_numpy(X: np.ndarray, log_q: np.ndarray, m: int, family: int,
                  ls: np.ndarray, sv: float, tie_tol: float,
                  var_floor: float) -> tuple[np.ndarray, np.ndarray, bool]:
    n = X.shape[0]
    cond_var = np.full(n, sv)
    cis = np.zeros((m, n))
    indices = np.zeros(m, dtype=np.int64)
    gains = np.zeros(m)
    selected = np.zeros(n, dtype=bool)
    for j in range(m):
        avail = np.where(selected, -np.inf, cond_var)
        if np.max(avail) < var_floor:
            return indices[:j].copy(), gains[:j].copy(), True
        with np.errstate(divide="ignore"):
            g = 0.5 * np.log(np.maximum(avail, 0.0)) + log_q
        best = int(np.argmax(g >= np.max(g) - tie_tol))
        vb = cond_var[best]
        indices[j] = best
        gains[j] = 0.5 * np.log(vb) + log_q[best]
        row = _kernel_rows_numpy(X, best, ls, sv, family)
        if j > 0:
            e = (row - cis[:j, best] @ cis[:j]) / np.sqrt(vb)
        else:
            e = row / np.sqrt(vb)
        cis[j] = e
        cond_var -= e * e
        np.maximum(cond_var, 0.0, out=cond_var)
        selected[best] = True
    return indices, gains, False


def greedy_select(X: np.ndarray, log_q: np.ndarray, m: int, kernel: KernelSpec,
                  tie_tol: float = 1e-12, var_floor: float = 1e-12,
                  backend: str | None = None) -> tuple[np.ndarray, np.ndarray, bool]:
    """Greedily pick up to ``m`` rows of X maximising the weighted log-det.

    Returns ``(indices, gains, degenerate)`` where ``gains[j]`` is the
    increment ``0.5 * log(conditional variance) + log_q`` realised at step
    j and ``degenerate`` flags an early stop (every remaining conditional
    variance fell below ``var_floor``).
    """
    X = np.ascontiguousarray(np.asarray(X, dtype=float))
    log_q = np.ascontiguousarray(np.asarray(log_q, dtype=float))
    if X.ndim != 2:
        raise ValueError("candidates must be a 2-d array")
    if log_q.shape != (X.shape[0],):
        raise ValueError("log_q must have one entry per candidate")
    if not 1 <= m <= X.shape[0]:
        raise ValueError(f"m must be in [1, {X.shape[0]}], got {m}")
    family = _FAMILY_CODES[kernel.family]
    ls = np.ascontiguousarray(kernel.lengthscales)
    if X.shape[1] != ls.size:
        raise ValueError("candidate dimension does not match kernel")
    name = resolve_backend(backend)
    if name == "numba":
        idx, gains, degen = _greedy_numba.greedy(
            X, log_q, m, family, ls, kernel.signal_variance, tie_tol, var_floor
        )
        return np.asarray(idx), np.asarray(gains), bool(degen)
    return _greedy_numpy(X, log_q, m, family, ls, kernel.signal_variance,
                         tie_tol, var_floor)
