"""Synthetic benchmark objectives (maximisation convention).

Every objective is the negation of its standard minimisation form, so
the optimisation loop always maximises. Noisy evaluations add Gaussian
noise with the per-objective default variance. True optima and
optimisers ship in ``benchmark_optima.json``; they were refined
numerically (multi-start gradient descent on the analytic forms) so
that regret bookkeeping never goes negative against a rounded
literature constant.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .gp import Box

_SHEKEL_C = np.array([
    [4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0],
    [4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6],
    [4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0],
    [4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6],
])
_SHEKEL_BETA = 0.1 * np.array([1.0, 2.0, 2.0, 4.0, 4.0, 6.0, 3.0, 7.0, 5.0, 5.0])

_HARTMANN_A = np.array([
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
])
_HARTMANN_P = 1e-4 * np.array([
    [1312.0, 1696.0, 5569.0, 124.0, 8283.0, 5886.0],
    [2329.0, 4135.0, 8307.0, 3736.0, 1004.0, 9991.0],
    [2348.0, 1451.0, 3522.0, 2883.0, 3047.0, 6650.0],
    [4047.0, 8828.0, 8732.0, 5743.0, 1091.0, 381.0],
])
_HARTMANN_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])


def _hartmann6(X: np.ndarray) -> np.ndarray:
    inner = np.sum(
        _HARTMANN_A[None, :, :] * (X[:, None, :] - _HARTMANN_P[None, :, :]) ** 2,
        axis=2,
    )
    return np.exp(-inner) @ _HARTMANN_ALPHA


def _shekel4(X: np.ndarray) -> np.ndarray:
    diff2 = np.sum((X[:, :, None] - _SHEKEL_C[None, :, :]) ** 2, axis=1)
    return np.sum(1.0 / (diff2 + _SHEKEL_BETA[None, :]), axis=1)


def _michalewicz5(X: np.ndarray, steepness: int = 10) -> np.ndarray:
    i = np.arange(1, X.shape[1] + 1)
    terms = np.sin(X) * np.sin(i * X * X / np.pi) ** (2 * steepness)
    return np.sum(terms, axis=1)


def _ackley4(X: np.ndarray) -> np.ndarray:
    a, b, c = 20.0, 0.2, 2.0 * np.pi
    d = X.shape[1]
    term1 = -a * np.exp(-b * np.sqrt(np.mean(X * X, axis=1)))
    term2 = -np.exp(np.mean(np.cos(c * X), axis=1))
    return -(term1 + term2 + a + np.e)


def _loggp2(X: np.ndarray) -> np.ndarray:
    # standardised logarithmic form on the unit square
    xb = 4.0 * X - 2.0
    x1, x2 = xb[:, 0], xb[:, 1]
    f1 = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2
    )
    f2 = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2
    )
    return -(np.log(f1 * f2) - 8.693) / 2.427


@dataclass(frozen=True)
class Objective:
    """A noisy maximisation benchmark."""

    name: str
    box: Box
    noise_variance: float
    optimum_value: float
    optimiser: np.ndarray
    _fn: callable

    @property
    def dim(self) -> int:
        return self.box.dim

    def evaluate(self, X: np.ndarray) -> np.ndarray:
        """Noise-free values, vectorised over rows."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.dim:
            raise ValueError(f"{self.name} expects {self.dim}-d inputs")
        if not np.all(np.isfinite(X)):
            raise ValueError("inputs contain non-finite coordinates")
        return self._fn(X)

    def evaluate_one(self, x: np.ndarray) -> float:
        return float(self.evaluate(np.asarray(x, dtype=float)[None, :])[0])

    def noisy(self, X: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        values = self.evaluate(X)
        return values + np.sqrt(self.noise_variance) * rng.standard_normal(values.shape)


_SPECS = {
    "hartmann6": (_hartmann6, 6, (0.0, 1.0), 0.5),
    "shekel4": (_shekel4, 4, (0.0, 10.0), 0.1),
    "michalewicz5": (_michalewicz5, 5, (0.0, np.pi), 0.1),
    "ackley4": (_ackley4, 4, (-32.768, 32.768), 0.1),
    "loggp2": (_loggp2, 2, (0.0, 1.0), 0.1),
}


def _load_optima() -> dict:
    text = resources.files("cirbo").joinpath("benchmark_optima.json").read_text()
    return json.loads(text)


_OPTIMA = _load_optima()

REGISTRY: dict[str, Objective] = {}
for _name, (_fn, _dim, (_lo, _hi), _noise) in _SPECS.items():
    _entry = _OPTIMA[_name]
    REGISTRY[_name] = Objective(
        name=_name,
        box=Box(np.full(_dim, _lo), np.full(_dim, _hi)),
        noise_variance=_noise,
        optimum_value=float(_entry["optimum"]),
        optimiser=np.asarray(_entry["optimiser"], dtype=float),
        _fn=_fn,
    )


def names() -> tuple[str, ...]:
    return tuple(REGISTRY)


def get(name: str) -> Objective:
    try:
        return REGISTRY[name.strip().lower()]
    except KeyError:
        raise ValueError(
            f"unknown objective {name!r}; expected one of {sorted(REGISTRY)}"
        ) from None


def evaluate(name: str, x: np.ndarray) -> float:
    """Noise-free value at a single point."""
    return get(name).evaluate_one(x)


def noisy_evaluate(name: str, x: np.ndarray, seed) -> float:
    """One noisy observation at a single point, reproducible from seed."""
    obj = get(name)
    rng = np.random.default_rng(seed)
    return float(obj.noisy(np.asarray(x, dtype=float)[None, :], rng)[0])
