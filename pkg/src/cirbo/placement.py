"""Inducing point placement strategies.

Four strategies over a candidate set (normally the queried inputs):

* ``cvr``: greedy conditional-variance reduction, the unit-quality
  determinantal selection.
* ``cir``: conditional information reduction, blending diversity with a
  per-candidate quality weight derived from the information each
  observation carries about the posterior maximum. ``alpha`` trades the
  two off; ``alpha=0`` collapses to ``cvr`` exactly and ``alpha=1``
  degenerates to quality-only top-M selection.
* ``kmeans``: k-means++ centroids of the candidates in the
  unit-standardised box (centroids need not be candidates).
* ``uniform``: uniform random points in the box.

Whenever the candidate pool is no larger than the requested size, every
strategy returns the full pool unchanged: extra inducing points would
add capacity the data cannot use.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .dpp import QualityWeights, SelectionResult, greedy_map
from .gp import Box
from .kernels import KernelSpec, gram_diag
from .maxvalue import gumbel_sample_maxima, moment_match, pointwise_ig, quality_weights
from .seeding import as_seed_sequence

STRATEGIES = ("cir", "cvr", "kmeans", "uniform")
PRIOR_MEAN_MODES = ("previous-posterior", "observed-values", "zero")

GRID_SIZE = 512  # quasi-random domain points added to the max-value grid
KMEANS_ITERS = 50


@dataclass
class PlacementConfig:
    """Knobs of a placement strategy."""

    strategy: str = "cir"
    m: int = 128
    alpha: float = 0.5
    gumbel_samples: int = 10
    prior_mean_mode: str = "previous-posterior"

    def __post_init__(self) -> None:
        self.strategy = self.strategy.strip().lower()
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; "
                             f"expected one of {STRATEGIES}")
        self.m = int(self.m)
        if self.m < 1:
            raise ValueError("m must be positive")
        self.alpha = float(self.alpha)
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        self.gumbel_samples = int(self.gumbel_samples)
        if self.gumbel_samples < 1:
            raise ValueError("gumbel_samples must be positive")
        if self.prior_mean_mode not in PRIOR_MEAN_MODES:
            raise ValueError(f"unknown prior_mean_mode {self.prior_mean_mode!r}; "
                             f"expected one of {PRIOR_MEAN_MODES}")


@dataclass
class PlacementResult:
    """Selected inducing points plus selection diagnostics."""

    points: np.ndarray
    indices: np.ndarray | None = None
    selection: SelectionResult | None = None
    warnings: list[str] = field(default_factory=list)


def sobol_grid(box: Box, n: int = GRID_SIZE) -> np.ndarray:
    """Deterministic quasi-random points covering the box (n a power of 2)."""
    m = int(n).bit_length() - 1
    if 2 ** m != n:
        raise ValueError("grid size must be a power of two")
    u = qmc.Sobol(d=box.dim, scramble=False).random_base2(m)
    return box.lower + u * box.width


def kmeans_centroids(X: np.ndarray, k: int, box: Box,
                     rng: np.random.Generator,
                     iters: int = KMEANS_ITERS) -> np.ndarray:
    """k-means++ seeding plus Lloyd iterations in the unit-scaled box."""
    Xs = (np.asarray(X, dtype=float) - box.lower) / box.width
    n = Xs.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}]")
    centers = np.empty((k, Xs.shape[1]))
    centers[0] = Xs[rng.integers(n)]
    d2 = np.sum((Xs - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = float(np.sum(d2))
        if total <= 0:
            centers[j:] = Xs[rng.integers(n, size=k - j)]
            break
        centers[j] = Xs[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((Xs - centers[j]) ** 2, axis=1))
    xx = np.sum(Xs * Xs, axis=1)
    assign = np.full(n, -1, dtype=np.int64)
    for _iteration in range(iters):
        dists = xx[:, None] - 2.0 * (Xs @ centers.T) + np.sum(centers * centers, axis=1)
        new_assign = np.argmin(dists, axis=1)
        if np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for j in range(k):
            members = Xs[assign == j]
            if len(members):
                centers[j] = members.mean(axis=0)
    return box.lower + centers * box.width


def _prior_moments(mode: str, X: np.ndarray, y: np.ndarray, kernel: KernelSpec,
                   previous_model, grid: np.ndarray,
                   warnings: list[str]) -> tuple[np.ndarray, ...]:
    """Predictive moments at candidates and grid under the prior-mean mode."""
    prior_sd = float(np.sqrt(kernel.signal_variance))
    sd_floor = 1e-9 * prior_sd
    if mode == "previous-posterior" and previous_model is None:
        warnings.append(
            "prior_mean_mode=previous-posterior with no previous model; "
            "falling back to observed-values"
        )
        mode = "observed-values"
    if mode == "previous-posterior":
        mu_c, var_c = previous_model.predict(X)
        mu_g, var_g = previous_model.predict(grid)
        sd_c = np.maximum(np.sqrt(np.maximum(var_c, 0.0)), sd_floor)
        sd_g = np.maximum(np.sqrt(np.maximum(var_g, 0.0)), sd_floor)
    elif mode == "observed-values":
        mu_c = np.asarray(y, dtype=float)
        sd_c = np.full(len(X), prior_sd)
        mu_g = np.full(len(grid), float(np.mean(y)))
        sd_g = np.full(len(grid), prior_sd)
    else:  # zero
        mu_c = np.zeros(len(X))
        sd_c = np.full(len(X), prior_sd)
        mu_g = np.zeros(len(grid))
        sd_g = np.full(len(grid), prior_sd)
    return mu_c, sd_c, mu_g, sd_g


def select_inducing(config: PlacementConfig, X: np.ndarray, y: np.ndarray,
                    box: Box, kernel: KernelSpec, previous_model=None,
                    seed=0) -> PlacementResult:
    """Choose inducing point locations for the next model fit.

    ``X``/``y`` are the queried inputs and their (raw scale) observed
    values; they form the candidate pool for the data-based strategies.
    ``previous_model`` supplies predictive moments for the
    ``previous-posterior`` prior-mean mode and may be None (first step),
    which falls back to ``observed-values`` with a warning recorded on
    the result.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).reshape(-1)
    if X.shape[0] != y.size:
        raise ValueError("candidate inputs and values disagree in length")
    if X.shape[1] != box.dim:
        raise ValueError("candidate dimension does not match box")
    n = X.shape[0]
    warnings: list[str] = []

    if n <= config.m:
        return PlacementResult(points=X.copy(), indices=np.arange(n),
                               warnings=warnings)

    ss = as_seed_sequence(seed)
    s_gumbel, s_rng = ss.spawn(2)

    if config.strategy == "uniform":
        rng = np.random.default_rng(s_rng)
        return PlacementResult(points=box.sample(rng, config.m),
                               warnings=warnings)
    if config.strategy == "kmeans":
        rng = np.random.default_rng(s_rng)
        points = kmeans_centroids(X, config.m, box, rng)
        return PlacementResult(points=points, warnings=warnings)
    if config.strategy == "cvr" or (config.strategy == "cir" and config.alpha == 0.0):
        sel = greedy_map(kernel, X, config.m)
        return PlacementResult(points=X[sel.indices], indices=sel.indices,
                               selection=sel, warnings=warnings)

    # cir with alpha > 0: max-value quality weights
    grid = sobol_grid(box, GRID_SIZE)
    mu_c, sd_c, mu_g, sd_g = _prior_moments(
        config.prior_mean_mode, X, y, kernel, previous_model, grid, warnings
    )
    all_mu = np.concatenate([mu_c, mu_g])
    all_sd = np.concatenate([sd_c, sd_g])
    raw = gumbel_sample_maxima(all_mu, all_sd, config.gumbel_samples, s_gumbel)
    moments = moment_match(raw, sigma_floor=1e-6 * np.sqrt(kernel.signal_variance))
    k_diag = gram_diag(kernel, X)

    if config.alpha == 1.0:
        # Quality-only limit: rank by the per-point quality exponent.
        ig = pointwise_ig(mu_c, sd_c, moments)
        scores = ig / (2.0 * config.m) - 0.5 * np.log(k_diag)
        order = np.lexsort((np.arange(n), -scores))
        chosen = np.sort(order[:config.m])
        return PlacementResult(points=X[chosen], indices=chosen,
                               warnings=warnings)

    q = quality_weights(mu_c, sd_c, k_diag, moments, config.alpha, config.m)
    sel = greedy_map(kernel, X, config.m, quality=q)
    return PlacementResult(points=X[sel.indices], indices=sel.indices,
                           selection=sel, warnings=warnings)
