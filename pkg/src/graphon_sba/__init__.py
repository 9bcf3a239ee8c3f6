"""Graphon estimation by stochastic blockmodel approximation."""

from .baselines import BaselineEstimate, largest_gap, usvt
from .distance import (
    FULL,
    NeighborhoodPolicy,
    SliceDistanceKernel,
    estimate_distance,
    exact_distance,
    slice_products,
)
from .errors import ConfigError, ContractError, DomainError
from .graphon import (
    BlockGraphon,
    FormulaGraphon,
    Graphon,
    GraphSampleSet,
    apply_mask,
    eval_graphon,
    reference_blockmodel,
    random_blockmodel,
    sample_graphs,
    sample_labels,
)
from .harness import ExperimentConfig, TrialResult, run_experiment
from .metrics import mae, mse
from .model_selection import DeltaGrid, cv_risk, default_grid, select_delta
from .sba import Blocking, EstimatedGraphon, cluster, estimate_block_probabilities, predict

__all__ = [
    "BaselineEstimate", "largest_gap", "usvt",
    "FULL", "NeighborhoodPolicy", "SliceDistanceKernel", "estimate_distance", "exact_distance",
    "slice_products",
    "ConfigError", "ContractError", "DomainError",
    "BlockGraphon", "FormulaGraphon", "Graphon", "GraphSampleSet", "apply_mask", "eval_graphon",
    "reference_blockmodel", "random_blockmodel", "sample_graphs", "sample_labels",
    "ExperimentConfig", "TrialResult", "run_experiment",
    "mae", "mse",
    "DeltaGrid", "cv_risk", "default_grid", "select_delta",
    "Blocking", "EstimatedGraphon", "cluster", "estimate_block_probabilities", "predict",
]
