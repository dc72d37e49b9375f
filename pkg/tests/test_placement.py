"""Inducing-point placement strategies."""
from __future__ import annotations

import numpy as np
import pytest

from cirbo import (
    PlacementConfig,
    exact_posterior,
    greedy_map,
    isotropic,
    kmeans_centroids,
    select_inducing,
)
from cirbo.gp import Box, Dataset
from cirbo.placement import sobol_grid

from helpers import random_dataset, random_kernel, unit_box


def make_instance(seed: int, n: int = 60, dim: int = 2):
    rng = np.random.default_rng(seed)
    data = random_dataset(rng, n, dim)
    kernel = random_kernel(rng, dim, noise=0.05)
    return data.X, data.y, data.box, kernel


# ----------------------------------------------------------- small pools


@pytest.mark.parametrize("strategy", ["cir", "cvr", "kmeans", "uniform"])
def test_pool_no_larger_than_budget_returns_everything(strategy):
    X, y, box, kernel = make_instance(0, n=5)
    config = PlacementConfig(strategy=strategy, m=10)
    result = select_inducing(config, X, y, box, kernel, seed=1)
    assert np.array_equal(result.indices, np.arange(5))
    assert np.array_equal(result.points, X)


# ------------------------------------------------------------ equivalences


def test_alpha_zero_is_exactly_conditional_variance_reduction():
    for seed in range(6):
        X, y, box, kernel = make_instance(seed)
        cir = select_inducing(PlacementConfig(strategy="cir", m=12, alpha=0.0),
                              X, y, box, kernel, seed=seed)
        cvr = select_inducing(PlacementConfig(strategy="cvr", m=12),
                              X, y, box, kernel, seed=seed)
        assert np.array_equal(cir.indices, cvr.indices)


def test_zero_prior_mean_mode_reduces_to_unit_quality_selection():
    # With a stationary kernel and zero prior mean, every candidate gets
    # the same quality weight, and constant weights never change the
    # greedy selection order.
    for seed in range(4):
        X, y, box, kernel = make_instance(seed)
        config = PlacementConfig(strategy="cir", m=10, alpha=0.5,
                                 prior_mean_mode="zero")
        result = select_inducing(config, X, y, box, kernel, seed=seed)
        unit = greedy_map(kernel, X, 10)
        assert np.array_equal(result.indices, unit.indices)


def test_previous_posterior_without_model_falls_back_with_warning():
    X, y, box, kernel = make_instance(3)
    base = PlacementConfig(strategy="cir", m=10, alpha=0.5)
    result = select_inducing(base, X, y, box, kernel,
                             previous_model=None, seed=9)
    assert any("previous" in w and "observed-values" in w
               for w in result.warnings)
    observed = PlacementConfig(strategy="cir", m=10, alpha=0.5,
                               prior_mean_mode="observed-values")
    explicit = select_inducing(observed, X, y, box, kernel, seed=9)
    assert explicit.warnings == []
    assert np.array_equal(result.indices, explicit.indices)


def test_quality_only_limit_with_flat_quality_keeps_lowest_indices():
    X, y, box, kernel = make_instance(4)
    config = PlacementConfig(strategy="cir", m=8, alpha=1.0,
                             prior_mean_mode="zero")
    result = select_inducing(config, X, y, box, kernel, seed=2)
    assert np.array_equal(result.indices, np.arange(8))


# -------------------------------------------------------- focusing effect


def test_quality_tilt_never_defocuses_from_high_mean_regions():
    # Raising alpha strengthens the pull toward candidates predicted to
    # score near the maximum; the number of selected points landing in
    # the top decile of the posterior mean must not systematically drop.
    violations = 0
    for seed in range(10):
        rng = np.random.default_rng(200 + seed)
        box = unit_box(2)
        X = box.sample(rng, 250)
        f = -np.sum((X - np.array([0.6, 0.3])) ** 2, axis=1) * 4.0
        y = f + 0.1 * rng.normal(size=250)
        kernel = isotropic("matern52", 2, 0.3,
                           signal_variance=float(np.var(y)),
                           noise_variance=0.05)
        model = exact_posterior(Dataset(X, y, box), kernel)
        mean, _ = model.predict(X)
        top = set(np.argsort(mean)[-25:])
        counts = {}
        for alpha in (0.1, 0.9):
            config = PlacementConfig(strategy="cir", m=50, alpha=alpha)
            result = select_inducing(config, X, y, box, kernel,
                                     previous_model=model, seed=seed)
            counts[alpha] = len(top.intersection(result.indices.tolist()))
        if counts[0.9] < counts[0.1]:
            violations += 1
    assert violations <= 2


# ------------------------------------------------------- budget and bounds


@pytest.mark.parametrize("strategy", ["cir", "cvr", "kmeans", "uniform"])
def test_budget_and_box_respected(strategy):
    X, y, box, kernel = make_instance(5, n=80, dim=3)
    config = PlacementConfig(strategy=strategy, m=20, alpha=0.5)
    result = select_inducing(config, X, y, box, kernel, seed=3)
    assert result.points.shape == (20, 3)
    assert np.all(result.points >= box.lower - 1e-12)
    assert np.all(result.points <= box.upper + 1e-12)
    if result.indices is not None:
        assert len(np.unique(result.indices)) == 20
        assert np.array_equal(result.points, X[result.indices])


@pytest.mark.parametrize("strategy", ["cir", "cvr", "kmeans", "uniform"])
def test_selection_is_seed_deterministic(strategy):
    X, y, box, kernel = make_instance(6, n=70)
    config = PlacementConfig(strategy=strategy, m=15, alpha=0.5)
    a = select_inducing(config, X, y, box, kernel, seed=11)
    b = select_inducing(config, X, y, box, kernel, seed=11)
    assert np.array_equal(a.points, b.points)


def test_uniform_differs_across_seeds():
    X, y, box, kernel = make_instance(7)
    config = PlacementConfig(strategy="uniform", m=15)
    a = select_inducing(config, X, y, box, kernel, seed=1)
    b = select_inducing(config, X, y, box, kernel, seed=2)
    assert not np.array_equal(a.points, b.points)


def test_single_max_value_draw_is_allowed():
    X, y, box, kernel = make_instance(8)
    config = PlacementConfig(strategy="cir", m=10, alpha=0.5,
                             gumbel_samples=1)
    result = select_inducing(config, X, y, box, kernel, seed=4)
    assert result.points.shape[0] == 10


# ------------------------------------------------------------------ kmeans


def test_kmeans_recovers_well_separated_clusters():
    rng = np.random.default_rng(40)
    centers = np.array([[0.1, 0.1], [0.9, 0.9], [0.1, 0.9]])
    X = np.concatenate([c + 0.01 * rng.normal(size=(30, 2)) for c in centers])
    box = unit_box(2)
    got = kmeans_centroids(X, 3, box, np.random.default_rng(0))
    got = got[np.lexsort(got.T[::-1])]
    want = centers[np.lexsort(centers.T[::-1])]
    assert np.allclose(got, want, atol=0.02)


def test_kmeans_handles_fully_duplicated_candidates():
    X = np.tile(np.array([[0.4, 0.7]]), (25, 1))
    got = kmeans_centroids(X, 3, unit_box(2), np.random.default_rng(1))
    assert got.shape == (3, 2)
    assert np.allclose(got, [0.4, 0.7])


def test_kmeans_k_bounds():
    X = np.random.default_rng(2).uniform(size=(10, 2))
    with pytest.raises(ValueError):
        kmeans_centroids(X, 0, unit_box(2), np.random.default_rng(0))
    with pytest.raises(ValueError):
        kmeans_centroids(X, 11, unit_box(2), np.random.default_rng(0))


# ------------------------------------------------------------------- sobol


def test_sobol_grid_covers_the_box():
    box = Box(np.array([-1.0, 2.0]), np.array([1.0, 6.0]))
    grid = sobol_grid(box, 64)
    assert grid.shape == (64, 2)
    assert np.all(grid >= box.lower) and np.all(grid <= box.upper)
    # deterministic low-discrepancy sequence: first point is the origin corner
    assert np.allclose(grid[0], box.lower)


def test_sobol_grid_requires_power_of_two():
    with pytest.raises(ValueError):
        sobol_grid(unit_box(2), 100)


# -------------------------------------------------------------- validation


def test_config_validation():
    with pytest.raises(ValueError):
        PlacementConfig(strategy="grid")
    with pytest.raises(ValueError):
        PlacementConfig(m=0)
    with pytest.raises(ValueError):
        PlacementConfig(alpha=1.5)
    with pytest.raises(ValueError):
        PlacementConfig(alpha=-0.1)
    with pytest.raises(ValueError):
        PlacementConfig(gumbel_samples=0)
    with pytest.raises(ValueError):
        PlacementConfig(prior_mean_mode="gp")
    assert PlacementConfig(strategy=" CVR ").strategy == "cvr"


def test_select_inducing_validates_shapes():
    X, y, box, kernel = make_instance(9)
    config = PlacementConfig(strategy="cvr", m=5)
    with pytest.raises(ValueError):
        select_inducing(config, X, y[:-1], box, kernel)
    with pytest.raises(ValueError):
        select_inducing(config, X[:, :1], y, box, kernel)
