"""Shared builders for the test suite."""
from __future__ import annotations

import numpy as np

from cirbo import Box, Dataset, KernelSpec, isotropic

UNIT_BOX_2D = Box(np.zeros(2), np.ones(2))


def unit_box(dim: int) -> Box:
    return Box(np.zeros(dim), np.ones(dim))


def random_kernel(rng: np.random.Generator, dim: int,
                  family: str | None = None,
                  noise: float = 0.0) -> KernelSpec:
    """A random, well-conditioned kernel for property tests."""
    if family is None:
        family = ("squared-exponential", "matern52")[int(rng.integers(2))]
    return KernelSpec(
        family=family,
        lengthscales=rng.uniform(0.2, 1.5, dim),
        signal_variance=float(rng.uniform(0.5, 3.0)),
        noise_variance=noise,
    )


def random_dataset(rng: np.random.Generator, n: int, dim: int,
                   noise_sd: float = 0.1) -> Dataset:
    """Random inputs in the unit box with a smooth synthetic response."""
    box = unit_box(dim)
    X = rng.uniform(size=(n, dim))
    y = np.sin(3.0 * X.sum(axis=1)) + noise_sd * rng.normal(size=n)
    return Dataset(X, y, box)


def sine_dataset(n: int = 50, noise_sd: float = 0.05,
                 seed: int = 0) -> Dataset:
    """1-d sine data on [0, 1], evenly filled, fixed seed."""
    rng = np.random.default_rng(seed)
    X = np.linspace(0.0, 1.0, n).reshape(-1, 1)
    y = np.sin(6.0 * X[:, 0]) + noise_sd * rng.normal(size=n)
    return Dataset(X, y, unit_box(1))


def sample_gp_targets(rng: np.random.Generator, X: np.ndarray,
                      kernel: KernelSpec, noise_sd: float) -> np.ndarray:
    """Draw targets from the kernel's own prior (dense, for small N)."""
    from cirbo import gram

    K = gram(kernel, X) + (noise_sd ** 2 + 1e-12) * np.eye(len(X))
    L = np.linalg.cholesky(K)
    return L @ rng.normal(size=len(X))
