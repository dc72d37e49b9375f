"""Batch Bayesian optimisation with sparse GP surrogates.

The package implements high-throughput batch optimisation where the
surrogate's inducing points are re-placed every step by weighted
determinantal selection: diversity from conditional variances, quality
from the information each candidate carries about the posterior
maximum. A numba-accelerated greedy selector (with a numpy fallback,
see :mod:`cirbo.accel`), collapsed-bound sparse GP fitting, pathwise
Thompson batch proposals and a benchmark harness round it out.
"""
from .benchmarks import Objective, evaluate, noisy_evaluate
from .dpp import QualityWeights, SelectionResult, conditional_variance, exhaustive_map, greedy_map
from .gp import (Box, Dataset, ExactModel, SparseModel, exact_log_marginal,
                 exact_posterior, fit_hyperparameters, sparse_fit)
from .kernels import KernelSpec, gram, gram_diag, isotropic
from .loop import ExperimentConfig, RunRecord, StepRecord, aggregate, aggregate_curves, run
from .maxvalue import (MaxValueMoments, fit_gumbel, gumbel_sample_maxima,
                       moment_match, pointwise_ig, quality_weights)
from .placement import PlacementConfig, PlacementResult, kmeans_centroids, select_inducing
from .thompson import FourierBasis, PathwiseSample, draw_sample, maximize_sample, propose_batch

__version__ = "0.1.0"

__all__ = [
    "Box", "Dataset", "ExactModel", "ExperimentConfig", "FourierBasis",
    "KernelSpec", "MaxValueMoments", "Objective", "PathwiseSample",
    "PlacementConfig", "PlacementResult", "QualityWeights", "RunRecord",
    "SelectionResult", "SparseModel", "StepRecord", "aggregate",
    "aggregate_curves", "conditional_variance", "draw_sample", "evaluate",
    "exact_log_marginal", "exact_posterior", "exhaustive_map",
    "fit_gumbel", "fit_hyperparameters", "gram", "gram_diag", "greedy_map",
    "gumbel_sample_maxima", "isotropic", "kmeans_centroids", "maximize_sample",
    "moment_match", "noisy_evaluate", "pointwise_ig", "propose_batch",
    "quality_weights", "run", "select_inducing", "sparse_fit",
]
