"""Batch Bayesian optimisation driver.

One run executes: initial uniform batch, then per step (1) reselect
inducing points on all queried data, (2) refit hyperparameters by
bound maximisation warm-started from the incumbent kernel, (3) fit the
sparse model (or exact GP for the ``exact`` baseline strategy), (4)
record the believed best (argmax of the posterior mean over queried
inputs) and its simple regret, (5) propose the next batch by pathwise
posterior sampling, (6) evaluate it noisily. Every random draw comes
from named child streams of one seed sequence, so a (config, seed)
pair pins the whole trajectory.

Targets are centred by their running mean before fitting (models are
zero-mean); the shift is added back onto every reported prediction.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import benchmarks
from .gp import Dataset, ExactModel, SparseModel, exact_posterior, fit_hyperparameters, sparse_fit
from .kernels import KernelSpec, canonical_family
from .placement import PRIOR_MEAN_MODES, STRATEGIES, PlacementConfig, select_inducing
from .thompson import propose_batch

LOOP_STRATEGIES = STRATEGIES + ("exact",)

CSV_COLUMNS = ("step", "n", "believed_best_value", "simple_regret",
               "t_place_ms", "t_fit_ms", "t_acq_ms")
TIMING_COLUMNS = ("t_place_ms", "t_fit_ms", "t_acq_ms")


@dataclass
class ExperimentConfig:
    """Everything that defines a run family (seeds pick the member)."""

    objective: str
    total_budget: int
    batch_size: int
    strategy: str = "cir"
    m: int = 128
    alpha: float = 0.5
    gumbel_samples: int = 10
    prior_mean_mode: str = "previous-posterior"
    kernel_family: str = "matern52"
    feature_count: int = 100
    hyper_budget: int = 60
    seeds: tuple[int, ...] = (0,)

    def __post_init__(self) -> None:
        benchmarks.get(self.objective)  # validates the name
        self.objective = self.objective.strip().lower()
        self.total_budget = int(self.total_budget)
        self.batch_size = int(self.batch_size)
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
        if self.total_budget % self.batch_size != 0:
            raise ValueError(
                f"total_budget {self.total_budget} is not a multiple of "
                f"batch_size {self.batch_size}"
            )
        if self.total_budget < 2 * self.batch_size:
            raise ValueError("total_budget must cover the initial batch plus "
                             "at least one step")
        self.strategy = self.strategy.strip().lower()
        if self.strategy not in LOOP_STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; expected "
                             f"one of {LOOP_STRATEGIES}")
        self.m = int(self.m)
        self.alpha = float(self.alpha)
        self.gumbel_samples = int(self.gumbel_samples)
        self.prior_mean_mode = self.prior_mean_mode.strip().lower()
        if self.strategy != "exact":
            # delegate knob validation to the placement config
            self.placement_config()
        elif self.m < 1 or not 0.0 <= self.alpha <= 1.0:
            raise ValueError("m must be positive and alpha in [0, 1]")
        self.kernel_family = canonical_family(self.kernel_family)
        self.feature_count = int(self.feature_count)
        if self.feature_count < 1:
            raise ValueError("feature_count must be positive")
        self.hyper_budget = int(self.hyper_budget)
        if self.hyper_budget < 1:
            raise ValueError("hyper_budget must be positive")
        self.seeds = tuple(int(s) for s in self.seeds)
        if not self.seeds:
            raise ValueError("at least one seed is required")

    @property
    def steps(self) -> int:
        return self.total_budget // self.batch_size - 1

    def placement_config(self) -> PlacementConfig:
        if self.strategy == "exact":
            raise ValueError("the exact baseline has no placement config")
        return PlacementConfig(strategy=self.strategy, m=self.m,
                               alpha=self.alpha,
                               gumbel_samples=self.gumbel_samples,
                               prior_mean_mode=self.prior_mean_mode)

    def family_dict(self) -> dict:
        """Fields identifying the run family (everything but the seeds)."""
        return {
            "objective": self.objective,
            "total_budget": self.total_budget,
            "batch_size": self.batch_size,
            "strategy": self.strategy,
            "m": self.m,
            "alpha": self.alpha,
            "gumbel_samples": self.gumbel_samples,
            "prior_mean_mode": self.prior_mean_mode,
            "kernel_family": self.kernel_family,
            "feature_count": self.feature_count,
            "hyper_budget": self.hyper_budget,
        }


def config_digest(config: ExperimentConfig) -> str:
    """Stable 12-hex-digit digest of the run family."""
    import hashlib

    blob = json.dumps(config.family_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


@dataclass
class StepRecord:
    step: int
    n: int
    believed_best_value: float
    simple_regret: float
    t_place_ms: float
    t_fit_ms: float
    t_acq_ms: float


@dataclass
class RunRecord:
    """Everything one run produced."""

    config: ExperimentConfig
    seed: int
    steps: list[StepRecord] = field(default_factory=list)
    X: np.ndarray | None = None
    y: np.ndarray | None = None
    warnings: list[str] = field(default_factory=list)
    error: str | None = None

    @property
    def final_regret(self) -> float:
        if not self.steps:
            return float("nan")
        return self.steps[-1].simple_regret


@dataclass
class _ShiftedModel:
    """Read-only view adding the target shift back onto predictions."""

    model: SparseModel | ExactModel
    shift: float

    def predict(self, Xq, full_cov: bool = False):
        mean, var = self.model.predict(Xq, full_cov=full_cov)
        return mean + self.shift, var


def initial_kernel(family: str, box, y: np.ndarray) -> KernelSpec:
    """Deterministic starting guess for the first hyperparameter fit."""
    signal = max(float(np.var(y)), 1e-6)
    return KernelSpec(
        family=family,
        lengthscales=0.2 * box.width,
        signal_variance=signal,
        noise_variance=0.2 * signal,
    )


def run(config: ExperimentConfig, seed: int) -> RunRecord:
    """Execute one optimisation run; exceptions land in record.error."""
    record = RunRecord(config=config, seed=seed)
    objective = benchmarks.get(config.objective)
    box = objective.box
    steps = config.steps
    b = config.batch_size

    ss = np.random.SeedSequence(seed)
    s_design, s_noise, s_place, s_acq = ss.spawn(4)
    place_seeds = s_place.spawn(steps)
    acq_seeds = s_acq.spawn(steps)
    noise_rng = np.random.default_rng(s_noise)

    try:
        X = box.sample(np.random.default_rng(s_design), b)
        y = objective.noisy(X, noise_rng)
        kernel = initial_kernel(config.kernel_family, box, y)
        previous_view = None
        for step in range(1, steps + 1):
            t0 = time.perf_counter()
            if config.strategy == "exact":
                Z = None
            else:
                placed = select_inducing(
                    config.placement_config(), X, y, box, kernel,
                    previous_model=previous_view, seed=place_seeds[step - 1],
                )
                record.warnings.extend(placed.warnings)
                Z = placed.points
            t1 = time.perf_counter()

            shift = float(np.mean(y))
            data = Dataset(X, y - shift, box)
            kernel = fit_hyperparameters(data, Z, kernel, config.hyper_budget)
            if Z is None:
                model = exact_posterior(data, kernel)
            else:
                model = sparse_fit(data, Z, kernel)
            mean_at_queries, _ = model.predict(X)
            best = int(np.argmax(mean_at_queries))
            believed_value = float(mean_at_queries[best]) + shift
            regret = objective.optimum_value - objective.evaluate_one(X[best])
            t2 = time.perf_counter()

            batch = propose_batch(model, box, b, config.feature_count,
                                  acq_seeds[step - 1])
            t3 = time.perf_counter()

            y_new = objective.evaluate(batch) + np.sqrt(
                objective.noise_variance
            ) * noise_rng.standard_normal(b)
            X = np.vstack([X, batch])
            y = np.concatenate([y, y_new])
            previous_view = _ShiftedModel(model, shift)

            record.steps.append(StepRecord(
                step=step, n=X.shape[0],
                believed_best_value=believed_value,
                simple_regret=float(regret),
                t_place_ms=(t1 - t0) * 1e3,
                t_fit_ms=(t2 - t1) * 1e3,
                t_acq_ms=(t3 - t2) * 1e3,
            ))
        record.X, record.y = X, y
    except Exception as exc:  # noqa: BLE001 - runs must fail closed, recorded
        record.error = f"{type(exc).__name__}: {exc}"
    return record


def aggregate_curves(curves: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Mean curve and 95% normal CI half-widths across runs.

    Requires at least two curves of equal length; the half-width is
    1.96 * sd / sqrt(R) with the unbiased standard deviation.
    """
    if len(curves) < 2:
        raise ValueError("aggregation requires at least two runs")
    stacked = np.vstack([np.asarray(c, dtype=float) for c in curves])
    if any(len(c) != stacked.shape[1] for c in curves):
        raise ValueError("curves must have equal length")
    mean = np.mean(stacked, axis=0)
    sd = np.std(stacked, axis=0, ddof=1)
    halfwidth = 1.96 * sd / np.sqrt(stacked.shape[0])
    return mean, halfwidth


def aggregate(records: list[RunRecord]) -> tuple[np.ndarray, np.ndarray]:
    """Aggregate the simple-regret curves of completed runs."""
    for r in records:
        if r.error is not None:
            raise ValueError(f"cannot aggregate errored run (seed {r.seed})")
    curves = [np.array([s.simple_regret for s in r.steps]) for r in records]
    return aggregate_curves(curves)


def write_run_csv(record: RunRecord, path) -> None:
    """Write the per-step CSV. Floats use repr for exact round-trips."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for s in record.steps:
            writer.writerow([
                s.step, s.n,
                repr(s.believed_best_value), repr(s.simple_regret),
                f"{s.t_place_ms:.3f}", f"{s.t_fit_ms:.3f}", f"{s.t_acq_ms:.3f}",
            ])


def write_sidecar(record: RunRecord, path) -> None:
    """Write the JSON sidecar: full config, seed, digest, run status."""
    payload = {
        "config": record.config.family_dict(),
        "config_digest": config_digest(record.config),
        "seed": record.seed,
        "steps_completed": len(record.steps),
        "warnings": record.warnings,
        "error": record.error,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
