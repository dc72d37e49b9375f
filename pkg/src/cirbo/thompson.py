"""Decoupled pathwise posterior sampling and batch proposal.

Posterior function draws are built as prior draw plus data correction:
the prior is a random Fourier feature expansion of the stationary
kernel, and the correction interpolates the residual between the
sampled inducing outputs (or noisy targets, for exact models) and the
prior draw at those anchors. Each draw is a cheap differentiable
function that can be maximised with a gradient-based local optimiser,
so proposing a batch of B points costs B independent draws and local
ascents instead of B dense posterior conditionings.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve
from scipy.optimize import minimize

from .gp import Box, ExactModel, SparseModel
from .kernels import MATERN52, KernelSpec, gram, grad_wrt_x
from .seeding import as_seed_sequence

DEFAULT_FEATURES = 100
DEFAULT_PROBES = 1000
DEFAULT_MAX_ITERS = 100
DUPLICATE_TOL = 1e-9
JITTER_SCALE = 1e-6  # duplicate jitter width as a fraction of box width


@dataclass
class FourierBasis:
    """Random Fourier feature expansion of a stationary kernel prior."""

    frequencies: np.ndarray  # (F, d)
    phases: np.ndarray       # (F,)
    amplitude: float

    @property
    def n_features(self) -> int:
        return self.frequencies.shape[0]

    def features(self, X: np.ndarray) -> np.ndarray:
        """Feature matrix, shape (n, F)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.amplitude * np.cos(X @ self.frequencies.T + self.phases)


def sample_basis(kernel: KernelSpec, f: int, seed) -> FourierBasis:
    """Draw an F-feature basis whose feature covariance approximates k.

    Frequencies follow the kernel's spectral density: Gaussian for the
    squared-exponential family; for Matern-5/2 a multivariate t with 5
    degrees of freedom, realised as Gaussian over a shared per-feature
    chi-square mixing variable.
    """
    if f < 1:
        raise ValueError("feature count must be positive")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((f, kernel.dim))
    if kernel.family == MATERN52:
        g = rng.chisquare(5.0, size=f)
        z = z * np.sqrt(5.0 / g)[:, None]
    frequencies = z / kernel.lengthscales
    phases = rng.uniform(0.0, 2.0 * np.pi, size=f)
    amplitude = float(np.sqrt(2.0 * kernel.signal_variance / f))
    return FourierBasis(frequencies=frequencies, phases=phases, amplitude=amplitude)


@dataclass
class PathwiseSample:
    """One posterior function draw: callable and differentiable."""

    kernel: KernelSpec
    basis: FourierBasis
    weights: np.ndarray   # (F,) prior weights
    anchors: np.ndarray   # (m, d) correction sites
    nu: np.ndarray        # (m,) correction coefficients

    def __call__(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        values = self.basis.features(X) @ self.weights
        values += gram(self.kernel, X, self.anchors) @ self.nu
        return values

    def value_and_grad(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        x = np.asarray(x, dtype=float).reshape(-1)
        phase = self.basis.frequencies @ x + self.basis.phases
        cw = self.basis.amplitude * np.cos(phase) @ self.weights
        grad = -self.basis.amplitude * (
            (np.sin(phase) * self.weights) @ self.basis.frequencies
        )
        kvec = gram(self.kernel, x[None, :], self.anchors)[0]
        value = float(cw + kvec @ self.nu)
        grad = grad + grad_wrt_x(self.kernel, x, self.anchors).T @ self.nu
        return value, grad


def draw_sample(model: SparseModel | ExactModel, basis: FourierBasis,
                seed) -> PathwiseSample:
    """Draw one posterior sample path from the model.

    Sparse models correct the prior draw through sampled inducing
    outputs; exact models through the noisy targets. Both corrections
    interpolate at the anchor set, so the draw's distribution matches
    the model posterior up to the finite-feature prior approximation.
    """
    rng = np.random.default_rng(seed)
    w = rng.standard_normal(basis.n_features)
    if isinstance(model, SparseModel):
        m_u, W = model.inducing_moments()
        u = m_u + W @ rng.standard_normal(model.m)
        resid = u - basis.features(model.Z) @ w
        nu = cho_solve((model.L, True), resid)
        return PathwiseSample(kernel=model.kernel, basis=basis, weights=w,
                              anchors=model.Z, nu=nu)
    if isinstance(model, ExactModel):
        noise_sd = np.sqrt(model.kernel.noise_variance)
        eps = noise_sd * rng.standard_normal(model.n)
        resid = model.y - basis.features(model.X) @ w - eps
        nu = cho_solve((model.L, True), resid)
        return PathwiseSample(kernel=model.kernel, basis=basis, weights=w,
                              anchors=model.X, nu=nu)
    raise TypeError(f"unsupported model type {type(model).__name__}")


def maximize_sample(sample: PathwiseSample, box: Box, seed,
                    n_probes: int = DEFAULT_PROBES,
                    max_iters: int = DEFAULT_MAX_ITERS) -> tuple[np.ndarray, float]:
    """Maximise a sample path: random probes, then bounded local ascent.

    The best of ``n_probes`` uniform probes seeds an L-BFGS-B run with
    analytic gradients, stopping on |delta f| < 1e-8 or ``max_iters``
    iterations. The returned value never falls below the best probe and
    the returned point lies in the box.
    """
    rng = np.random.default_rng(seed)
    probes = box.sample(rng, n_probes)
    values = sample(probes)
    best = int(np.argmax(values))
    x0, f0 = probes[best], float(values[best])

    def negated(x: np.ndarray) -> tuple[float, np.ndarray]:
        value, grad = sample.value_and_grad(x)
        return -value, -grad

    res = minimize(negated, x0, method="L-BFGS-B", jac=True,
                   bounds=list(zip(box.lower, box.upper)),
                   options={"maxiter": max_iters, "ftol": 1e-8})
    if np.isfinite(res.fun) and -res.fun >= f0:
        return box.clip(res.x), float(-res.fun)
    return x0, f0


def propose_batch(model: SparseModel | ExactModel, box: Box, b: int, f: int,
                  seed) -> np.ndarray:
    """Propose b query points via independent pathwise draws.

    Each batch member gets its own basis, path draw and probe stream,
    all spawned from ``seed``, so the batch is reproducible bit for bit.
    Near-duplicate proposals (within 1e-9 in every coordinate) are
    jittered by uniform noise of width 1e-6 of the box width and clipped
    back inside.
    """
    if b < 1:
        raise ValueError("batch size must be positive")
    ss = as_seed_sequence(seed)
    jitter_seed, *member_seeds = ss.spawn(1 + 3 * b)
    points = np.empty((b, box.dim))
    for i in range(b):
        basis = sample_basis(model.kernel, f, member_seeds[3 * i])
        sample = draw_sample(model, basis, member_seeds[3 * i + 1])
        x, _ = maximize_sample(sample, box, member_seeds[3 * i + 2])
        points[i] = x
    jitter_rng = np.random.default_rng(jitter_seed)
    width = JITTER_SCALE * box.width
    for i in range(b):
        for j in range(i):
            if np.max(np.abs(points[i] - points[j])) < DUPLICATE_TOL:
                points[i] = box.clip(
                    points[i] + jitter_rng.uniform(-0.5, 0.5, box.dim) * width
                )
                break
    return points
