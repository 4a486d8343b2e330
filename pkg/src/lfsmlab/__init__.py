"""Simulation and estimation toolkit for linear fractional stable motion.

The public surface groups into:

  * stable / model: stable variate generation and deterministic model
    quantities (kernel, norms, characteristic function),
  * stats: increments, power variations, empirical characteristic
    function, the log-ratio Hurst estimator,
  * contrast / classic: the minimal contrast fit of (sigma, alpha, H)
    and the two-point closed-form alternative,
  * inference: bootstrap and subsampling confidence regions,
  * simulate: synthetic path generation,
  * limits: numeric limit-theory oracles for property testing,
  * cli: command-line entry points and the Monte Carlo runner.
"""

from .errors import (
    ConfigurationError,
    DegenerateIncrementsError,
    EstimationFailedError,
    InsufficientDataError,
    LfsmError,
    LogDomainError,
    ParameterError,
    ResourceLimitError,
    UnreliableRegionError,
)
from .stable import RngStream, StableLaw, a_p_constant, sample_sas
from .model import (
    KernelSpec,
    LfsmParams,
    Regime,
    alpha_norm,
    beta_coeff,
    kernel_h,
    q_factor,
    regime_of,
    theo_charfn,
)
from .stats import (
    HurstEstimate,
    IncrementSeries,
    SamplePath,
    emp_charfn,
    estimate_H,
    increments,
    power_variation,
)
from .contrast import (
    EstimateResult,
    EstimatorConfig,
    OptimizerSettings,
    estimate_mce,
    fit_theta,
    nelder_mead,
    objective_F,
    quad_rule,
    weight_w,
)
from .classic import (
    TwoPointConfig,
    closed_form_alpha,
    closed_form_sigma,
    estimate_classic,
    select_k_hat,
)
from .inference import ConfidenceRegion, bootstrap_ci, subsample_ci
from .simulate import SimConfig, self_similarity_check, simulate_lfsm
from .cli import ExperimentSpec, ResultTable, main, run_montecarlo

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError", "DegenerateIncrementsError", "EstimationFailedError",
    "InsufficientDataError", "LfsmError", "LogDomainError", "ParameterError",
    "ResourceLimitError", "UnreliableRegionError",
    "RngStream", "StableLaw", "a_p_constant", "sample_sas",
    "KernelSpec", "LfsmParams", "Regime", "alpha_norm", "beta_coeff",
    "kernel_h", "q_factor", "regime_of", "theo_charfn",
    "HurstEstimate", "IncrementSeries", "SamplePath", "emp_charfn",
    "estimate_H", "increments", "power_variation",
    "EstimateResult", "EstimatorConfig", "OptimizerSettings", "estimate_mce",
    "fit_theta", "nelder_mead", "objective_F", "quad_rule", "weight_w",
    "TwoPointConfig", "closed_form_alpha", "closed_form_sigma",
    "estimate_classic", "select_k_hat",
    "ConfidenceRegion", "bootstrap_ci", "subsample_ci",
    "SimConfig", "self_similarity_check", "simulate_lfsm",
    "ExperimentSpec", "ResultTable", "main", "run_montecarlo",
]
