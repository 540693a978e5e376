"""Dependence measures for paired random objects in (semi)metric spaces of
negative type: metric covariance (signed, trace-of-cross-covariance),
HSIC and distance covariance (nonnegative, squared Hilbert-Schmidt norm),
permutation independence tests, exact finite-support oracles with Mercer
decompositions, and the simulation scenarios on which metric covariance is
provably blind while HSIC is not.
"""

from .estimators import (
    CrossCovEstimate,
    TestResult,
    centered_grams,
    dcov_vstat,
    double_center,
    hsic_vstat,
    mcov_plugin,
    mcov_trace,
    permutation_test,
)
from .kernels import (
    DistanceInducedKernel,
    EuclideanSquared,
    ExplicitSemimetric,
    GaussianKernel,
    InputError,
    KernelInducedSemimetric,
    LinearKernel,
    MaternKernel,
    NegativeTypeResult,
    distance_matrix,
    gram_matrix,
    induced_kernel,
    induced_semimetric,
    kernel_eval,
    median_heuristic,
    parse_kernel,
    parse_semimetric,
    resolve_bandwidth,
    semimetric_eval,
    validate_negative_type,
)
from .oracle import (
    DiscreteJoint,
    HsicDecomposition,
    McovDecomposition,
    MercerSystem,
    cancellation_joint,
    empirical_joint,
    exact_dcov,
    exact_hsic,
    exact_mcov,
    mercer_basis,
    mercer_hsic_decomposition,
    mercer_mcov_decomposition,
    product_joint,
)
from .scenarios import (
    PowerReport,
    gen_coupled_mixture,
    gen_independent_normal,
    gen_orthogonal_linear,
    norm_distribution_check,
    power_study,
)

__version__ = "0.1.0"

__all__ = [
    "CrossCovEstimate",
    "DiscreteJoint",
    "DistanceInducedKernel",
    "EuclideanSquared",
    "ExplicitSemimetric",
    "GaussianKernel",
    "HsicDecomposition",
    "InputError",
    "KernelInducedSemimetric",
    "LinearKernel",
    "MaternKernel",
    "McovDecomposition",
    "MercerSystem",
    "NegativeTypeResult",
    "PowerReport",
    "TestResult",
    "cancellation_joint",
    "centered_grams",
    "dcov_vstat",
    "distance_matrix",
    "double_center",
    "empirical_joint",
    "exact_dcov",
    "exact_hsic",
    "exact_mcov",
    "gen_coupled_mixture",
    "gen_independent_normal",
    "gen_orthogonal_linear",
    "gram_matrix",
    "hsic_vstat",
    "induced_kernel",
    "induced_semimetric",
    "kernel_eval",
    "mcov_plugin",
    "mcov_trace",
    "median_heuristic",
    "mercer_basis",
    "mercer_hsic_decomposition",
    "mercer_mcov_decomposition",
    "norm_distribution_check",
    "parse_kernel",
    "parse_semimetric",
    "permutation_test",
    "power_study",
    "product_joint",
    "resolve_bandwidth",
    "semimetric_eval",
    "validate_negative_type",
]
