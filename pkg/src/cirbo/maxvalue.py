"""Max-value machinery: Gumbel sampling, moment matching, pointwise gain.

The global-maximum distribution of a GP posterior restricted to a
finite grid is approximated by a Gumbel fit to the product of marginal
CDFs (independence approximation). Three quantiles of that product CDF
are located by bisection and a two-parameter Gumbel is anchored on
them: the scale from the interquartile range, the location from the
median. Sampling the fitted Gumbel is O(grid size) per batch of
samples.

Downstream, the samples are moment-matched to a Gaussian and the
information gain of observing a candidate z about the maximum f* is
the closed form

    g(gamma) = gamma * phi(gamma) / (2 Phi(gamma)) - log Phi(gamma),

with gamma_z = (mu* - mean_z) / sd_z. Note the direction: information
concentrates on candidates whose predicted value approaches the
sampled maximum. The ``literal_direction`` flag flips gamma's sign for
ablation against the opposite convention and is not used anywhere in
the package itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr

from .dpp import QualityWeights

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

GUMBEL_QUANTILES = (0.25, 0.5, 0.75)
BISECT_TOL = 1e-9
DEFAULT_SAMPLE_COUNT = 10


@dataclass
class MaxValueMoments:
    """Gaussian moment-match of sampled posterior maxima."""

    mu_star: float
    sigma_star: float
    raw_samples: np.ndarray


def _log_prod_cdf(y: float, means: np.ndarray, sds: np.ndarray) -> float:
    """log P(max_i f_i <= y) under independent Gaussian marginals."""
    return float(np.sum(log_ndtr((y - means) / sds)))


def _bisect_quantile(target: float, lo: float, hi: float,
                     means: np.ndarray, sds: np.ndarray) -> float:
    log_target = math.log(target)
    while hi - lo > BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if _log_prod_cdf(mid, means, sds) < log_target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fit_gumbel(means: np.ndarray, sds: np.ndarray) -> tuple[float, float, np.ndarray]:
    """Fit Gumbel(a, b) to the product-CDF max distribution.

    Returns (location a, scale b, the three fitted quantile ordinates).
    The bracket spans [min mean - 5 max sd, max mean + 5 max sd] and is
    widened once (to 10 max sd) if the quantiles fall outside; a
    bracket that still fails raises RuntimeError.
    """
    means = np.asarray(means, dtype=float).reshape(-1)
    sds = np.asarray(sds, dtype=float).reshape(-1)
    if means.size != sds.size or means.size < 2:
        raise ValueError("need at least two grid moments")
    if np.any(sds <= 0) or not (np.all(np.isfinite(means)) and np.all(np.isfinite(sds))):
        raise ValueError("grid moments must be finite with positive sds")
    max_sd = float(np.max(sds))
    for margin in (5.0, 10.0):
        lo = float(np.min(means)) - margin * max_sd
        hi = float(np.max(means)) + margin * max_sd
        if (_log_prod_cdf(lo, means, sds) <= math.log(GUMBEL_QUANTILES[0])
                and _log_prod_cdf(hi, means, sds) >= math.log(GUMBEL_QUANTILES[-1])):
            break
    else:
        raise RuntimeError("could not bracket the max-distribution quantiles")
    y25, y50, y75 = (_bisect_quantile(r, lo, hi, means, sds)
                     for r in GUMBEL_QUANTILES)
    b = (y75 - y25) / (math.log(-math.log(0.25)) - math.log(-math.log(0.75)))
    a = y50 + b * math.log(-math.log(0.5))
    return a, b, np.array([y25, y50, y75])


def gumbel_sample_maxima(means: np.ndarray, sds: np.ndarray, s: int,
                         seed: int) -> np.ndarray:
    """Draw s approximate posterior-maximum values.

    Fits the Gumbel to the grid's product CDF and inverts it at s
    uniform variates from ``default_rng(seed)``.
    """
    if s < 1:
        raise ValueError("sample count must be positive")
    a, b, _ = fit_gumbel(means, sds)
    rng = np.random.default_rng(seed)
    u = np.clip(rng.uniform(size=s), 1e-16, 1.0 - 1e-16)
    return a - b * np.log(-np.log(u))


def moment_match(samples: np.ndarray, sigma_floor: float = 1e-6) -> MaxValueMoments:
    """Gaussian moments of max-value samples.

    The standard deviation is the unbiased estimate, floored at
    ``sigma_floor`` (callers pass 1e-6 times the kernel's signal sd) so
    downstream gammas stay finite even for constant samples.
    """
    samples = np.asarray(samples, dtype=float).reshape(-1)
    if samples.size < 1:
        raise ValueError("need at least one sample")
    if not np.all(np.isfinite(samples)):
        raise ValueError("samples must be finite")
    mu = float(np.mean(samples))
    if samples.size > 1:
        sd = float(np.std(samples, ddof=1))
    else:
        sd = 0.0
    return MaxValueMoments(mu_star=mu, sigma_star=max(sd, sigma_floor),
                           raw_samples=samples)


def pointwise_ig(mean_z, sd_z, moments: MaxValueMoments,
                 literal_direction: bool = False):
    """Information gain of observing z about the moment-matched maximum.

    Vectorised over ``mean_z`` / ``sd_z``. ``sd_z`` must be positive.
    Evaluated in log space throughout, so extreme gammas (|gamma| in the
    hundreds) stay finite: for gamma << 0 the expression approaches its
    asymptote -gamma^2/2 smoothly rather than overflowing.
    """
    mean_z = np.asarray(mean_z, dtype=float)
    sd_z = np.asarray(sd_z, dtype=float)
    if np.any(sd_z <= 0):
        raise ValueError("sd_z must be positive")
    gamma = (moments.mu_star - mean_z) / sd_z
    if literal_direction:
        gamma = -gamma
    log_cdf = log_ndtr(gamma)
    log_pdf = -0.5 * gamma * gamma - _LOG_SQRT_2PI
    ratio = np.exp(log_pdf - log_cdf)  # phi/Phi, stable for gamma << 0
    g = 0.5 * gamma * ratio - log_cdf
    g = np.maximum(g, 0.0)
    return float(g) if g.ndim == 0 else g


def quality_weights(mean_z: np.ndarray, sd_z: np.ndarray, k_diag: np.ndarray,
                    moments: MaxValueMoments, alpha: float, m: int,
                    literal_direction: bool = False) -> QualityWeights:
    """Per-candidate log quality weights for the blended criterion.

    log q_z = alpha * IG(y_z; f*) / (2 M (1 - alpha)) - 0.5 log k(z, z).

    ``alpha`` must lie strictly inside (0, 1); the boundary cases are
    separate selection paths, not weighted determinantal problems.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    if m < 1:
        raise ValueError("m must be positive")
    k_diag = np.asarray(k_diag, dtype=float)
    if np.any(k_diag <= 0):
        raise ValueError("prior variances must be positive")
    ig = pointwise_ig(mean_z, sd_z, moments, literal_direction=literal_direction)
    log_q = alpha * ig / (2.0 * m * (1.0 - alpha)) - 0.5 * np.log(k_diag)
    return QualityWeights(log_q=np.asarray(log_q, dtype=float))
