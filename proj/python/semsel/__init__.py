"""Relevance-aware sensor selection for multi-view classification."""

from ._core import (
    CalibrationStats,
    ConfigError,
    Environment,
    ExperimentConfig,
    GmModel,
    ModelParams,
    build_model,
    conditional_accuracy_lb,
    expected_margin,
    oracle_gap_csv,
    posterior_estimate,
    prepare_environment,
    select,
    selftest,
    surrogate,
    sweep_csv,
    validate_bound_csv,
)

__all__ = [
    "CalibrationStats",
    "ConfigError",
    "Environment",
    "ExperimentConfig",
    "GmModel",
    "ModelParams",
    "build_model",
    "conditional_accuracy_lb",
    "expected_margin",
    "oracle_gap_csv",
    "posterior_estimate",
    "prepare_environment",
    "select",
    "selftest",
    "surrogate",
    "sweep_csv",
    "validate_bound_csv",
]
