"""Discrete and continuum fractional Laplacians on periodic chains and strings."""

from .chain import (
    ChainSpec,
    DispersionTable,
    DisplacementField,
    Method,
    SymbolRow,
    apply,
    asymptotic_element,
    build_symbol_row,
    dispersion,
    elastic_energy,
    element_infinite,
    element_infinite_quadrature,
    element_periodic_imagesum,
    element_periodic_spectral,
    laplacian_matrix,
    normalized_frequency,
)
from .continuum import (
    ConvergenceReport,
    KernelSpec,
    convergence_study,
    extrapolated_eigenvalue,
    integer_order_check,
    periodic_eigenvalue,
    periodic_kernel_imagesum,
    periodic_kernel_regularized,
    periodic_kernel_zeta,
    riesz_kernel_infinite,
    riesz_kernel_regularized,
    scaling_constants,
    verify_eigen_by_convolution,
    zero_string_limit_check,
)
from .errors import AlignmentError, ConvergenceError, DimensionMismatch, DomainError, PoleError
from .specfun import (
    FracOrder,
    SignedLogValue,
    gamma,
    gamma_ratio,
    generalized_binomial,
    hurwitz_zeta,
    hurwitz_zeta_abs,
    shifted_binomial,
)

__version__ = "0.1.0"
