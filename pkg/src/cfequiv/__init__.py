"""Characteristic-function equivalence tests.

Equivalence (neighborhood-of-model) testing of symmetry about the origin,
two-sample homogeneity, and independence, built on weighted L2 distances
between characteristic functions.  Rejecting the null certifies that the law
of the data lies within a margin Delta of the hypothesized model.
"""

from ._backend import BACKEND_NAME, USING_COMPILED
from .decision import (
    EquivalenceConfig,
    Hypothesis,
    TestReport,
    ThresholdProvenance,
    decide,
    normal_quantile,
    run_test,
)
from .estimators import (
    IndependenceComponents,
    homogeneity_stat,
    independence_stat,
    independence_stat_bruteforce,
    symmetry_stat,
)
from .exceptions import (
    CfequivError,
    ConfigError,
    DataError,
    InputDomainError,
    InsufficientSampleError,
    NumericalError,
    ShapeError,
    UnsupportedKernelError,
)
from .kernels import GramPair, KernelFamily, KernelSpec, eval_kernel, gram_cross, gram_diff, gram_sum
from .samplers import BenchmarkSpec, RngStream, Scenario
from .sim import CellResult, ExperimentConfig, ExperimentResult, read_sample_csv, run_experiment, write_results_csv
from .thresholds import (
    ThresholdResult,
    closed_form_homogeneity_mixture,
    closed_form_independence_gauss,
    closed_form_symmetry_mixture,
    ecf_distance_quadrature,
    independence_gauss_quadrature,
    threshold_gaussian_shift_quadrature,
    threshold_random_approx,
    threshold_random_approx_batch,
)
from .variance import homogeneity_var, independence_var_jackknife, symmetry_var

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "USING_COMPILED",
    "BenchmarkSpec",
    "CellResult",
    "CfequivError",
    "ConfigError",
    "DataError",
    "EquivalenceConfig",
    "ExperimentConfig",
    "ExperimentResult",
    "GramPair",
    "Hypothesis",
    "IndependenceComponents",
    "InputDomainError",
    "InsufficientSampleError",
    "KernelFamily",
    "KernelSpec",
    "NumericalError",
    "RngStream",
    "Scenario",
    "ShapeError",
    "TestReport",
    "ThresholdProvenance",
    "ThresholdResult",
    "UnsupportedKernelError",
    "closed_form_homogeneity_mixture",
    "closed_form_independence_gauss",
    "closed_form_symmetry_mixture",
    "decide",
    "ecf_distance_quadrature",
    "eval_kernel",
    "gram_cross",
    "gram_diff",
    "gram_sum",
    "homogeneity_stat",
    "homogeneity_var",
    "independence_gauss_quadrature",
    "independence_stat",
    "independence_stat_bruteforce",
    "independence_var_jackknife",
    "normal_quantile",
    "read_sample_csv",
    "run_experiment",
    "run_test",
    "symmetry_stat",
    "symmetry_var",
    "threshold_gaussian_shift_quadrature",
    "threshold_random_approx",
    "threshold_random_approx_batch",
    "write_results_csv",
]
