"""Exact first-hitting-time densities of Bessel processes started above the target level."""
from .density import (
    AsymptoticLaw,
    DensityTerms,
    asymptotic_density,
    asymptotic_law,
    density,
    density_terms,
    mass_breakdown,
    phi_terms,
    psi_terms,
    total_mass,
)
from .errors import (
    AccuracyWarning,
    BranchCutError,
    CertificationError,
    ConvergenceError,
    DomainError,
    EvaluationError,
    PoleError,
    UnsupportedOrderError,
)
from .hitting_kernels import Case, HittingProblem, L_kernel, L_smallx_constant, q_kernel, tilted_tail
from .ratio_theorem import RatioDecomposition, ratio_decomposed, ratio_direct, ratio_integrand
from .macdonald_zeros import MacdonaldZeroSet, certify_zeros, find_zeros, zero_count

__all__ = [
    "AccuracyWarning",
    "AsymptoticLaw",
    "BranchCutError",
    "Case",
    "CertificationError",
    "ConvergenceError",
    "DensityTerms",
    "DomainError",
    "EvaluationError",
    "HittingProblem",
    "L_kernel",
    "L_smallx_constant",
    "MacdonaldZeroSet",
    "PoleError",
    "RatioDecomposition",
    "UnsupportedOrderError",
    "asymptotic_density",
    "asymptotic_law",
    "certify_zeros",
    "density",
    "density_terms",
    "find_zeros",
    "mass_breakdown",
    "phi_terms",
    "psi_terms",
    "q_kernel",
    "ratio_decomposed",
    "ratio_direct",
    "ratio_integrand",
    "tilted_tail",
    "total_mass",
    "zero_count",
]
