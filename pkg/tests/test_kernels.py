"""Kernel algebra: values, symmetry, positive semi-definiteness, gradients."""
from __future__ import annotations

import math

import numpy as np
import pytest

from cirbo import KernelSpec, gram, gram_diag, isotropic
from cirbo.kernels import FAMILIES, canonical_family, grad_wrt_x

from helpers import random_kernel


def test_se_zero_lag_is_exactly_one():
    kernel = isotropic("squared-exponential", 3, 0.7)
    x = np.array([[0.3, -1.2, 4.0]])
    assert gram(kernel, x, x) == np.array([[1.0]])


def test_matern_zero_lag_equals_signal_variance():
    kernel = isotropic("matern52", 2, 0.4, signal_variance=2.5)
    x = np.array([[0.1, 0.9]])
    assert gram(kernel, x, x)[0, 0] == 2.5


def test_se_unit_lengthscale_known_value():
    kernel = isotropic("squared-exponential", 1, 1.0)
    value = gram(kernel, np.array([[0.0]]), np.array([[1.0]]))[0, 0]
    assert value == pytest.approx(math.exp(-0.5), abs=1e-15)


def test_gram_symmetric_and_psd_on_random_sets():
    rng = np.random.default_rng(0)
    for _ in range(100):
        dim = int(rng.integers(1, 7))
        n = int(rng.integers(2, 21))
        kernel = random_kernel(rng, dim)
        X = rng.uniform(-2.0, 2.0, size=(n, dim))
        K = gram(kernel, X)
        assert np.allclose(K, K.T, atol=1e-12)
        jittered = K + 1e-8 * kernel.signal_variance * np.eye(n)
        assert np.linalg.eigvalsh(jittered).min() >= 0.0


def test_gram_diag_matches_dense_diagonal():
    rng = np.random.default_rng(1)
    kernel = random_kernel(rng, 4)
    X = rng.uniform(size=(9, 4))
    assert np.array_equal(gram_diag(kernel, X), np.diag(gram(kernel, X)))
    assert np.all(gram_diag(kernel, X) == kernel.signal_variance)


def test_anisotropic_lengthscales_scale_per_dimension():
    kernel = KernelSpec("squared-exponential", np.array([1.0, 1e6]), 1.0, 0.0)
    a = np.array([[0.0, 0.0]])
    along_short = gram(kernel, a, np.array([[1.0, 0.0]]))[0, 0]
    along_long = gram(kernel, a, np.array([[0.0, 1.0]]))[0, 0]
    assert along_short == pytest.approx(math.exp(-0.5), abs=1e-12)
    assert along_long == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("family", FAMILIES)
def test_grad_wrt_x_matches_finite_differences(family):
    rng = np.random.default_rng(2)
    kernel = random_kernel(rng, 3, family=family)
    Z = rng.uniform(size=(6, 3))
    x = rng.uniform(size=3)
    analytic = grad_wrt_x(kernel, x, Z)
    eps = 1e-6
    numeric = np.empty_like(analytic)
    for d in range(3):
        hi, lo = x.copy(), x.copy()
        hi[d] += eps
        lo[d] -= eps
        numeric[:, d] = (
            gram(kernel, hi[None, :], Z)[0] - gram(kernel, lo[None, :], Z)[0]
        ) / (2 * eps)
    assert np.allclose(analytic, numeric, rtol=1e-5, atol=1e-7)


def test_family_aliases_canonicalise():
    assert canonical_family("rbf") == "squared-exponential"
    assert canonical_family("SE") == "squared-exponential"
    assert canonical_family("Matern-5/2") == "matern52"
    assert canonical_family("matern52") == "matern52"
    with pytest.raises(ValueError):
        canonical_family("cubic")


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(lengthscales=np.array([0.0]), signal_variance=1.0, noise_variance=0.0),
        dict(lengthscales=np.array([1.0]), signal_variance=0.0, noise_variance=0.0),
        dict(lengthscales=np.array([1.0]), signal_variance=1.0, noise_variance=-1.0),
    ],
)
def test_invalid_parameters_rejected(kwargs):
    with pytest.raises(ValueError):
        KernelSpec(family="squared-exponential", **kwargs)


def test_with_params_returns_updated_copy():
    kernel = isotropic("matern52", 2, 0.5, signal_variance=1.0,
                       noise_variance=0.1)
    updated = kernel.with_params(signal_variance=2.0)
    assert updated.signal_variance == 2.0
    assert updated.noise_variance == 0.1
    assert kernel.signal_variance == 1.0


def test_dimension_mismatch_rejected():
    kernel = isotropic("squared-exponential", 2, 0.5)
    with pytest.raises(ValueError):
        gram(kernel, np.zeros((3, 4)))


def test_non_finite_inputs_rejected():
    kernel = isotropic("squared-exponential", 1, 0.5)
    with pytest.raises(ValueError):
        gram(kernel, np.array([[np.nan]]))
