"""Gaussian process regression: exact and sparse (collapsed variational).

The sparse model is the collapsed-bound formulation: the optimal
Gaussian density over inducing outputs is analytic, so fitting a model
for fixed hyperparameters is a deterministic linear-algebra routine and
the evidence lower bound (ELBO) can be maximised directly over
hyperparameters with a derivative-free search. The bound never exceeds
the exact log marginal likelihood and tightens as inducing points are
added; with Z equal to the training inputs it recovers exact GP
regression.

All models here are zero-mean. Callers that need a non-zero prior mean
shift their targets.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve, solve_triangular
from scipy.optimize import minimize

from .errors import SingularModelError
from .kernels import KernelSpec, gram, gram_diag

# Jitter ladder: multiples of signal variance added to Gram diagonals,
# escalating tenfold on factorisation failure.
JITTER_START = 1e-10
JITTER_MAX = 1e-4

_LOG2PI = math.log(2.0 * math.pi)


@dataclass
class Box:
    """Axis-aligned search domain."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        self.lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        self.upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if self.lower.shape != self.upper.shape or self.lower.ndim != 1:
            raise ValueError("box bounds must be matching 1-d arrays")
        if not (np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper))):
            raise ValueError("box bounds must be finite")
        if np.any(self.upper <= self.lower):
            raise ValueError("box upper bounds must exceed lower bounds")

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, X: np.ndarray, atol: float = 1e-9) -> bool:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return bool(
            np.all(X >= self.lower - atol) and np.all(X <= self.upper + atol)
        )

    def clip(self, X: np.ndarray) -> np.ndarray:
        return np.clip(X, self.lower, self.upper)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """n uniform points, shape (n, d)."""
        return rng.uniform(self.lower, self.upper, size=(n, self.dim))


@dataclass
class Dataset:
    """Regression data confined to a box domain."""

    X: np.ndarray
    y: np.ndarray
    box: Box

    def __post_init__(self) -> None:
        self.X = np.atleast_2d(np.asarray(self.X, dtype=float))
        self.y = np.asarray(self.y, dtype=float).reshape(-1)
        if self.X.ndim != 2 or self.X.shape[0] != self.y.size:
            raise ValueError("X must be (n, d) with one target per row")
        if self.X.shape[0] == 0:
            raise ValueError("dataset must contain at least one observation")
        if self.X.shape[1] != self.box.dim:
            raise ValueError("data dimension does not match box dimension")
        if not (np.all(np.isfinite(self.X)) and np.all(np.isfinite(self.y))):
            raise ValueError("dataset contains non-finite values")
        if not self.box.contains(self.X):
            raise ValueError("dataset rows fall outside the declared box")

    @property
    def n(self) -> int:
        return self.X.shape[0]


def chol_with_jitter(K: np.ndarray, signal_variance: float) -> tuple[np.ndarray, float]:
    """Cholesky of K plus an escalating diagonal jitter.

    Jitter starts at JITTER_START * signal_variance and grows tenfold up
    to JITTER_MAX * signal_variance; the level that succeeded is
    returned alongside the factor. Raises SingularModelError when even
    the largest jitter fails.
    """
    n = K.shape[0]
    eye = np.eye(n)
    level = JITTER_START
    while True:
        jitter = level * signal_variance
        try:
            L = np.linalg.cholesky(K + jitter * eye)
            return L, jitter
        except np.linalg.LinAlgError:
            if level >= JITTER_MAX:
                raise SingularModelError(
                    f"Cholesky failed at maximum jitter {jitter:.3e}"
                ) from None
            level *= 10.0


@dataclass
class ExactModel:
    """Exact GP regression posterior."""

    kernel: KernelSpec
    X: np.ndarray
    y: np.ndarray
    L: np.ndarray = field(repr=False)
    alpha: np.ndarray = field(repr=False)
    jitter: float
    log_marginal: float

    @property
    def n(self) -> int:
        return self.X.shape[0]

    def predict(self, Xq: np.ndarray, full_cov: bool = False):
        """Posterior mean and variance (or full covariance) of f at Xq."""
        Kqx = gram(self.kernel, Xq, self.X)
        mean = Kqx @ self.alpha
        v = solve_triangular(self.L, Kqx.T, lower=True)
        if full_cov:
            cov = gram(self.kernel, Xq) - v.T @ v
            return mean, cov
        var = gram_diag(self.kernel, Xq) - np.sum(v * v, axis=0)
        return mean, np.maximum(var, 0.0)


@dataclass
class SparseModel:
    """Collapsed-bound sparse GP posterior over M inducing points."""

    kernel: KernelSpec
    Z: np.ndarray
    L: np.ndarray = field(repr=False)    # chol(K_MM + jitter I)
    L_B: np.ndarray = field(repr=False)  # chol(I + A A^T)
    c: np.ndarray = field(repr=False)
    jitter: float
    elbo: float
    n_data: int

    @property
    def m(self) -> int:
        return self.Z.shape[0]

    def predict(self, Xq: np.ndarray, full_cov: bool = False):
        """Posterior mean and variance (or full covariance) of f at Xq.

        Cost is O(Q M^2) for Q query points.
        """
        Kus = gram(self.kernel, self.Z, Xq)
        tmp1 = solve_triangular(self.L, Kus, lower=True)
        tmp2 = solve_triangular(self.L_B, tmp1, lower=True)
        mean = tmp2.T @ self.c
        if full_cov:
            cov = gram(self.kernel, Xq) - tmp1.T @ tmp1 + tmp2.T @ tmp2
            return mean, cov
        var = gram_diag(self.kernel, Xq) - np.sum(tmp1 * tmp1, axis=0) \
            + np.sum(tmp2 * tmp2, axis=0)
        return mean, np.maximum(var, 0.0)

    def inducing_moments(self) -> tuple[np.ndarray, np.ndarray]:
        """Mean m_u and a factor W (with S_u = W W^T) of q(u)."""
        m_u = self.L @ solve_triangular(self.L_B, self.c, lower=True, trans="T")
        W = solve_triangular(self.L_B, self.L.T, lower=True).T
        return m_u, W


def exact_posterior(data: Dataset, kernel: KernelSpec) -> ExactModel:
    """Fit an exact GP regression model (dense O(N^3) factorisation)."""
    if kernel.dim != data.X.shape[1]:
        raise ValueError("kernel dimension does not match data")
    K = gram(kernel, data.X)
    L, jitter = chol_with_jitter(K + kernel.noise_variance * np.eye(data.n),
                                 kernel.signal_variance)
    alpha = cho_solve((L, True), data.y)
    log_marginal = (
        -0.5 * data.y @ alpha
        - np.sum(np.log(np.diag(L)))
        - 0.5 * data.n * _LOG2PI
    )
    return ExactModel(kernel=kernel, X=data.X, y=data.y, L=L, alpha=alpha,
                      jitter=jitter, log_marginal=float(log_marginal))


def exact_log_marginal(data: Dataset, kernel: KernelSpec) -> float:
    return exact_posterior(data, kernel).log_marginal


# Noise floor (relative to signal variance) keeping the collapsed bound
# finite when a zero-noise kernel is passed in.
NOISE_FLOOR = 1e-12


def sparse_fit(data: Dataset, Z: np.ndarray, kernel: KernelSpec) -> SparseModel:
    """Fit the collapsed-bound sparse model for fixed hyperparameters."""
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    if Z.shape[1] != data.X.shape[1]:
        raise ValueError("inducing points do not match data dimension")
    if Z.shape[0] == 0:
        raise ValueError("need at least one inducing point")
    if kernel.dim != data.X.shape[1]:
        raise ValueError("kernel dimension does not match data")
    n = data.n
    sigma2 = max(kernel.noise_variance, NOISE_FLOOR * kernel.signal_variance)
    sigma = math.sqrt(sigma2)

    Kmm = gram(kernel, Z)
    L, jitter = chol_with_jitter(Kmm, kernel.signal_variance)
    Kmn = gram(kernel, Z, data.X)
    A = solve_triangular(L, Kmn, lower=True) / sigma
    B = np.eye(Z.shape[0]) + A @ A.T
    L_B = np.linalg.cholesky(B)
    Ay = A @ data.y
    c = solve_triangular(L_B, Ay, lower=True) / sigma

    kdiag = gram_diag(kernel, data.X)
    trace_term = np.sum(kdiag) / sigma2 - np.sum(A * A)
    elbo = (
        -0.5 * n * _LOG2PI
        - np.sum(np.log(np.diag(L_B)))
        - 0.5 * n * math.log(sigma2)
        - 0.5 * (data.y @ data.y) / sigma2
        + 0.5 * (c @ c)
        - 0.5 * trace_term
    )
    return SparseModel(kernel=kernel, Z=Z, L=L, L_B=L_B, c=c, jitter=jitter,
                       elbo=float(elbo), n_data=n)


def _pack(kernel: KernelSpec) -> np.ndarray:
    nv = max(kernel.noise_variance, 1e-10 * kernel.signal_variance)
    return np.log(np.concatenate([
        kernel.lengthscales,
        [kernel.signal_variance, nv],
    ]))


def _unpack(theta: np.ndarray, template: KernelSpec) -> KernelSpec:
    d = template.dim
    return template.with_params(
        lengthscales=np.exp(theta[:d]),
        signal_variance=float(np.exp(theta[d])),
        noise_variance=float(np.exp(theta[d + 1])),
    )


def fit_hyperparameters(data: Dataset, Z: np.ndarray | None, init: KernelSpec,
                        budget: int) -> KernelSpec:
    """Maximise the fitting objective over hyperparameters.

    The objective is the collapsed-bound ELBO for the given inducing set,
    or the exact log marginal likelihood when ``Z`` is None. The search
    is a deterministic Nelder-Mead simplex in log-parameter space,
    multi-started from three fixed scalings of the incumbent
    lengthscales (x0.5, x1, x2). ``budget`` counts objective
    evaluations; the incumbent costs the first one, the rest are split
    evenly across the starts. Always returns a kernel scoring at least
    as well as ``init``; ``budget=1`` returns ``init`` unchanged.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if init.dim != data.X.shape[1]:
        raise ValueError("init kernel dimension does not match data")

    def score(theta: np.ndarray) -> float:
        if np.any(np.abs(theta) > 30.0):
            return -np.inf
        kernel = _unpack(theta, init)
        try:
            if Z is None:
                return exact_log_marginal(data, kernel)
            return sparse_fit(data, Z, kernel).elbo
        except (SingularModelError, FloatingPointError):
            return -np.inf

    theta0 = _pack(init)
    best_theta = theta0
    best_score = score(theta0)
    if budget == 1:
        return init

    remaining = budget - 1
    scalings = (0.5, 1.0, 2.0)
    allocation = [remaining // 3 + (1 if i < remaining % 3 else 0)
                  for i in range(3)]

    tracker = {"theta": best_theta, "score": best_score}

    def negative(theta: np.ndarray) -> float:
        s = score(theta)
        if s > tracker["score"]:
            tracker["score"] = s
            tracker["theta"] = theta.copy()
        return -s if np.isfinite(s) else 1e300

    d = theta0.size
    for scale, fev in zip(scalings, allocation):
        if fev <= 0:
            continue
        start = theta0.copy()
        start[:init.dim] += math.log(scale)
        if fev < d + 2:
            negative(start)  # budget too small for a simplex; just probe
            continue
        minimize(negative, start, method="Nelder-Mead",
                 options={"maxfev": fev, "xatol": 1e-4, "fatol": 1e-7})
    if tracker["score"] <= best_score:
        return init
    return _unpack(tracker["theta"], init)
