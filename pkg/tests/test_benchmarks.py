"""Benchmark objectives against independently coded reference forms.

The references below are the standard minimisation-convention formulas,
written as plain scalar loops; the package negates them into
maximisation form, so ``evaluate == -reference`` everywhere.
"""
from __future__ import annotations

import dataclasses
import math

import numpy as np
import pytest

from cirbo.benchmarks import REGISTRY, evaluate, get, names, noisy_evaluate


def hartmann6_min(x):
    alpha = [1.0, 1.2, 3.0, 3.2]
    A = [
        [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
    ]
    P = [
        [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
        [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
        [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
        [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
    ]
    total = 0.0
    for i in range(4):
        inner = sum(A[i][j] * (x[j] - P[i][j]) ** 2 for j in range(6))
        total -= alpha[i] * math.exp(-inner)
    return total


def shekel4_min(x):
    C = [
        [4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0],
        [4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6],
        [4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0],
        [4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6],
    ]
    beta = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5]
    total = 0.0
    for i in range(10):
        denom = beta[i] + sum((x[j] - C[j][i]) ** 2 for j in range(4))
        total -= 1.0 / denom
    return total


def michalewicz5_min(x):
    total = 0.0
    for i, xi in enumerate(x, start=1):
        total -= math.sin(xi) * math.sin(i * xi * xi / math.pi) ** 20
    return total


def ackley4_min(x):
    d = len(x)
    s1 = sum(xi * xi for xi in x) / d
    s2 = sum(math.cos(2.0 * math.pi * xi) for xi in x) / d
    return (-20.0 * math.exp(-0.2 * math.sqrt(s1)) - math.exp(s2)
            + 20.0 + math.e)


def loggp2_min(x):
    u = 4.0 * x[0] - 2.0
    v = 4.0 * x[1] - 2.0
    f1 = 1.0 + (u + v + 1.0) ** 2 * (
        19.0 - 14.0 * u + 3.0 * u * u - 14.0 * v + 6.0 * u * v + 3.0 * v * v
    )
    f2 = 30.0 + (2.0 * u - 3.0 * v) ** 2 * (
        18.0 - 32.0 * u + 12.0 * u * u + 48.0 * v - 36.0 * u * v + 27.0 * v * v
    )
    return (math.log(f1 * f2) - 8.693) / 2.427


REFERENCES = {
    "hartmann6": hartmann6_min,
    "shekel4": shekel4_min,
    "michalewicz5": michalewicz5_min,
    "ackley4": ackley4_min,
    "loggp2": loggp2_min,
}


@pytest.mark.parametrize("name", sorted(REFERENCES))
def test_evaluate_negates_the_reference_form(name):
    obj = get(name)
    rng = np.random.default_rng(50)
    X = obj.box.sample(rng, 100)
    got = obj.evaluate(X)
    want = np.array([-REFERENCES[name](x) for x in X])
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-10)


@pytest.mark.parametrize("name", sorted(REFERENCES))
def test_recorded_optimum_is_attained_and_unbeaten(name):
    obj = get(name)
    assert obj.box.contains(obj.optimiser)
    assert abs(obj.evaluate_one(obj.optimiser) - obj.optimum_value) <= 1e-4
    rng = np.random.default_rng(51)
    X = obj.box.sample(rng, 500)
    assert float(np.max(obj.evaluate(X))) <= obj.optimum_value + 1e-9


def test_noise_variance_table():
    assert get("hartmann6").noise_variance == 0.5
    for name in ("shekel4", "michalewicz5", "ackley4", "loggp2"):
        assert get(name).noise_variance == 0.1


def test_zero_noise_objective_reproduces_clean_values():
    obj = dataclasses.replace(get("loggp2"), noise_variance=0.0)
    rng = np.random.default_rng(52)
    X = obj.box.sample(rng, 40)
    assert np.array_equal(obj.noisy(X, np.random.default_rng(0)),
                          obj.evaluate(X))


def test_observation_noise_has_the_declared_variance():
    obj = get("hartmann6")
    x = np.tile(obj.optimiser, (100_000, 1))
    rng = np.random.default_rng(53)
    noise = obj.noisy(x, rng) - obj.evaluate(x)
    assert abs(float(np.var(noise)) - 0.5) < 0.03 * 0.5
    assert abs(float(np.mean(noise))) < 0.01


def test_noisy_evaluate_is_seed_reproducible():
    x = np.full(4, 5.0)
    a = noisy_evaluate("shekel4", x, seed=7)
    b = noisy_evaluate("shekel4", x, seed=7)
    c = noisy_evaluate("shekel4", x, seed=8)
    assert a == b
    assert a != c
    assert a != evaluate("shekel4", x)


def test_registry_contents_and_lookup():
    assert names() == tuple(REGISTRY)
    assert set(names()) == set(REFERENCES)
    assert get(" HARTMANN6 ").name == "hartmann6"
    with pytest.raises(ValueError, match="unknown objective"):
        get("rosenbrock")


def test_evaluate_validates_inputs():
    obj = get("ackley4")
    with pytest.raises(ValueError):
        obj.evaluate(np.zeros((3, 2)))
    with pytest.raises(ValueError):
        obj.evaluate(np.array([[0.0, np.nan, 0.0, 0.0]]))


def test_evaluate_one_matches_the_batched_form():
    obj = get("michalewicz5")
    x = np.full(5, 1.1)
    assert obj.evaluate_one(x) == float(obj.evaluate(x[None, :])[0])
