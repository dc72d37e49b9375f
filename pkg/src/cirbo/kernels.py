"""Stationary covariance functions with ARD lengthscales.

Two families are supported: the squared-exponential kernel and the
Matern-5/2 kernel. A kernel is described by a :class:`KernelSpec`
(family, per-dimension lengthscales, signal variance, noise variance);
the functions here turn specs into Gram matrices, prior variances and
input-space gradients. All heavy lifting is plain numpy so that BLAS
does the work.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

SQUARED_EXPONENTIAL = "squared-exponential"
MATERN52 = "matern52"
FAMILIES = (SQUARED_EXPONENTIAL, MATERN52)

# accepted spellings -> canonical family name
_ALIASES = {
    "squared-exponential": SQUARED_EXPONENTIAL,
    "se": SQUARED_EXPONENTIAL,
    "rbf": SQUARED_EXPONENTIAL,
    "matern52": MATERN52,
    "matern-5/2": MATERN52,
    "matern-52": MATERN52,
}

_SQRT5 = np.sqrt(5.0)


def canonical_family(name: str) -> str:
    """Map a family spelling onto its canonical name, or raise ValueError."""
    try:
        return _ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(
            f"unknown kernel family {name!r}; expected one of {sorted(set(_ALIASES))}"
        ) from None


@dataclass
class KernelSpec:
    """Hyperparameters of a stationary ARD kernel.

    Parameters
    ----------
    family:
        ``"squared-exponential"`` or ``"matern52"`` (aliases accepted).
    lengthscales:
        Positive per-dimension lengthscales, shape (d,). A scalar is
        broadcast when ``dim`` is given to :func:`isotropic`.
    signal_variance:
        Prior variance k(x, x), strictly positive.
    noise_variance:
        Observation noise variance, non-negative.
    """

    family: str
    lengthscales: np.ndarray
    signal_variance: float
    noise_variance: float

    def __post_init__(self) -> None:
        self.family = canonical_family(self.family)
        ls = np.atleast_1d(np.asarray(self.lengthscales, dtype=float))
        if ls.ndim != 1 or ls.size == 0:
            raise ValueError("lengthscales must be a non-empty 1-d array")
        if not np.all(np.isfinite(ls)) or np.any(ls <= 0):
            raise ValueError("lengthscales must be finite and positive")
        self.lengthscales = ls
        self.signal_variance = float(self.signal_variance)
        self.noise_variance = float(self.noise_variance)
        if not np.isfinite(self.signal_variance) or self.signal_variance <= 0:
            raise ValueError("signal_variance must be finite and positive")
        if not np.isfinite(self.noise_variance) or self.noise_variance < 0:
            raise ValueError("noise_variance must be finite and non-negative")

    @property
    def dim(self) -> int:
        return self.lengthscales.size

    def with_params(self, **kwargs) -> "KernelSpec":
        """Return a copy with some fields replaced."""
        return replace(self, **kwargs)


def isotropic(family: str, dim: int, lengthscale: float,
              signal_variance: float = 1.0, noise_variance: float = 0.0) -> KernelSpec:
    """Convenience constructor with one shared lengthscale."""
    return KernelSpec(family, np.full(dim, float(lengthscale)),
                      signal_variance, noise_variance)


def _check_inputs(kernel: KernelSpec, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2:
        raise ValueError(f"inputs must be 2-d (n, d), got shape {X.shape}")
    if X.shape[1] != kernel.dim:
        raise ValueError(
            f"input dimension {X.shape[1]} does not match kernel dimension {kernel.dim}"
        )
    if not np.all(np.isfinite(X)):
        raise ValueError("inputs contain non-finite coordinates")
    return X


def _scaled_sqdist(A: np.ndarray, B: np.ndarray, ls: np.ndarray) -> np.ndarray:
    """Pairwise squared distance of lengthscale-scaled inputs, clamped at 0."""
    As = A / ls
    Bs = B / ls
    aa = np.sum(As * As, axis=1)
    bb = np.sum(Bs * Bs, axis=1)
    sq = aa[:, None] + bb[None, :] - 2.0 * (As @ Bs.T)
    return np.maximum(sq, 0.0)


def gram(kernel: KernelSpec, A: np.ndarray, B: np.ndarray | None = None) -> np.ndarray:
    """Gram matrix k(A, B) without noise. B defaults to A."""
    A = _check_inputs(kernel, A)
    symmetric = B is None
    B = A if symmetric else _check_inputs(kernel, B)
    sq = _scaled_sqdist(A, B, kernel.lengthscales)
    if symmetric:
        # The expanded-form distances leave ~1e-16 residue at zero lag;
        # pin the diagonal so k(x, x) is exactly the signal variance.
        np.fill_diagonal(sq, 0.0)
    if kernel.family == SQUARED_EXPONENTIAL:
        return kernel.signal_variance * np.exp(-0.5 * sq)
    r = np.sqrt(sq)
    sr = _SQRT5 * r
    return kernel.signal_variance * (1.0 + sr + sr * sr / 3.0) * np.exp(-sr)


def gram_diag(kernel: KernelSpec, A: np.ndarray) -> np.ndarray:
    """Prior variances k(x, x) for each row of A."""
    A = _check_inputs(kernel, A)
    return np.full(A.shape[0], kernel.signal_variance)


def grad_wrt_x(kernel: KernelSpec, x: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Gradients d k(x, z_i) / d x, shape (len(Z), d).

    For Matern-5/2 the radial form has a removable r=0 singularity; the
    algebra below cancels it analytically, so the gradient is exact and
    finite everywhere (it is 0 at x == z).
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    Z = _check_inputs(kernel, Z)
    if x.size != kernel.dim:
        raise ValueError("query point dimension mismatch")
    ls2 = kernel.lengthscales ** 2
    diff = x[None, :] - Z            # (m, d)
    if kernel.family == SQUARED_EXPONENTIAL:
        k = gram(kernel, x[None, :], Z)[0]          # (m,)
        return -k[:, None] * diff / ls2[None, :]
    sq = np.sum(diff * diff / ls2[None, :], axis=1)
    r = np.sqrt(np.maximum(sq, 0.0))
    sr = _SQRT5 * r
    # dk/dr * (1/r) stays finite: k'(r)/r = -(5 sv / 3) (1 + sr) exp(-sr)
    coef = -(5.0 * kernel.signal_variance / 3.0) * (1.0 + sr) * np.exp(-sr)
    return coef[:, None] * diff / ls2[None, :]
