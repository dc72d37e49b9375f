"""Greedy MAP inference for quality-weighted determinantal selection.

A kernel matrix K over N candidates and per-point quality weights q
define the weighted matrix L = diag(q) K diag(q). Greedy MAP picks, at
each step, the candidate maximising the log-determinant increment

    gain(z) = 0.5 * log sigma^2_j(z) + log q_z,

where sigma^2_j(z) is the conditional (posterior predictive, noise
free) variance of z given the points already selected. The recursion
updates conditional variances through an incremental Cholesky row per
step, so selecting M of N points costs O(M^2 N) time and O(MN) memory
and never materialises the N x N kernel matrix.

Unit quality weights recover pure conditional-variance reduction:
greedy posterior-variance maximisation of a noise-free GP.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from . import accel
from .gp import chol_with_jitter
from .kernels import KernelSpec, gram

# Maximum number of subsets exhaustive_map will enumerate.
EXHAUSTIVE_BUDGET = 1_000_000

TIE_TOL = 1e-12
VAR_FLOOR = 1e-12


@dataclass
class QualityWeights:
    """Log quality weights, one per candidate."""

    log_q: np.ndarray

    def __post_init__(self) -> None:
        self.log_q = np.asarray(self.log_q, dtype=float).reshape(-1)
        if not np.all(np.isfinite(self.log_q)):
            raise ValueError("log quality weights must be finite")


@dataclass
class SelectionResult:
    """Outcome of a greedy selection run."""

    indices: np.ndarray
    gains: np.ndarray
    final_log_det: float
    degenerate: bool = False

    def __len__(self) -> int:
        return len(self.indices)


def greedy_map(kernel: KernelSpec, candidates: np.ndarray, m: int,
               quality: QualityWeights | None = None,
               backend: str | None = None) -> SelectionResult:
    """Select up to m candidate rows by greedy weighted log-det gain.

    Ties in gain (within 1e-12) resolve to the lowest candidate index.
    If every remaining conditional variance drops below 1e-12 the
    selection stops early and the result is flagged degenerate.
    ``final_log_det`` is the accumulated sum of gains, i.e. half the log
    determinant of the selected weighted kernel submatrix.
    """
    candidates = np.atleast_2d(np.asarray(candidates, dtype=float))
    n = candidates.shape[0]
    if quality is None:
        log_q = np.zeros(n)
    else:
        log_q = quality.log_q
        if log_q.size != n:
            raise ValueError("quality weights must match candidate count")
    indices, gains, degenerate = accel.greedy_select(
        candidates, log_q, m, kernel, tie_tol=TIE_TOL, var_floor=VAR_FLOOR,
        backend=backend,
    )
    return SelectionResult(indices=indices, gains=gains,
                           final_log_det=float(np.sum(gains)),
                           degenerate=degenerate)


def conditional_variance(kernel: KernelSpec, selected: np.ndarray,
                         z: np.ndarray) -> float:
    """Noise-free posterior variance of z given the selected points.

    Reference implementation by dense factorisation: independent of the
    greedy recursion, O(|S|^3), for oracle checks and small problems.
    Returns k(z, z) for an empty selection; clamps small negative
    round-off to zero.
    """
    z = np.asarray(z, dtype=float).reshape(1, -1)
    prior = float(gram(kernel, z)[0, 0])
    selected = np.asarray(selected, dtype=float)
    if selected.size == 0:
        return prior
    selected = np.atleast_2d(selected)
    K = gram(kernel, selected)
    L, _ = chol_with_jitter(K, kernel.signal_variance)
    v = solve_triangular(L, gram(kernel, selected, z), lower=True)
    return max(prior - float(np.sum(v * v)), 0.0)


def exhaustive_map(kernel: KernelSpec, candidates: np.ndarray, m: int,
                   quality: QualityWeights | None = None) -> tuple[np.ndarray, float]:
    """Exact MAP subset by enumeration: argmax over |S|=m of log|L_S|.

    Returns the winning index tuple (lexicographically first among
    exact ties) and its full log determinant log|L_S|. Refuses
    instances with more than EXHAUSTIVE_BUDGET subsets.
    """
    candidates = np.atleast_2d(np.asarray(candidates, dtype=float))
    n = candidates.shape[0]
    if not 1 <= m <= n:
        raise ValueError(f"m must be in [1, {n}], got {m}")
    n_subsets = math.comb(n, m)
    if n_subsets > EXHAUSTIVE_BUDGET:
        raise ValueError(
            f"C({n}, {m}) = {n_subsets} subsets exceeds the enumeration "
            f"budget of {EXHAUSTIVE_BUDGET}"
        )
    log_q = np.zeros(n) if quality is None else quality.log_q
    K = gram(kernel, candidates)
    best_idx: tuple[int, ...] | None = None
    best_logdet = -np.inf
    for subset in itertools.combinations(range(n), m):
        idx = list(subset)
        sign, logdet = np.linalg.slogdet(K[np.ix_(idx, idx)])
        if sign <= 0:
            continue
        logdet += 2.0 * float(np.sum(log_q[idx]))
        if logdet > best_logdet:
            best_logdet = logdet
            best_idx = subset
    if best_idx is None:
        raise ValueError("no subset produced a positive-definite submatrix")
    return np.asarray(best_idx, dtype=np.int64), float(best_logdet)
