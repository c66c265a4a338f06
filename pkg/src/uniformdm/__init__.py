"""Uniform (Hilbert-Schmidt) random density matrices.

Samplers for the flat ensemble of density matrices by three independent
constructions (Ginibre normalization, purification, spectrum rejection with
a Haar eigenbasis), closed-form moments and eigenvalue densities, and the
statistical machinery to verify one against the other.
"""

from .linalg import (
    EigenDecomposition,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    check_density_matrix,
    check_hermitian,
    check_spectrum,
    check_unitary,
    compose_from_spectrum,
    hermitian_eigen,
    hs_inner,
    partial_trace_right,
    project_traceless,
    purity,
)
from .measure import (
    EnsembleMoments,
    covariance_constant,
    covariance_from_overlap,
    eig_density,
    eig_density_normalization,
    eig_density_simplex_integral,
    ensemble_moments,
    expected_purity,
    gue_joint_density_unnormalized,
    lambda_max_cdf_d2,
    lambda_max_pdf_d2,
    mean_density,
    overlap_sq_moment,
    vandermonde_sq,
)
from .samplers import (
    RngStream,
    rejection_acceptance_probe,
    sample_density_bloch,
    sample_density_fixed_basis,
    sample_density_hs,
    sample_density_purified,
    sample_density_spectral,
    sample_ginibre,
    sample_gue,
    sample_haar_unitary,
    sample_pure_uniform,
    sample_spectrum_rejection,
)
from .stats import (
    DEFAULT_SEED,
    KsReport,
    MonteCarloReport,
    SuiteResult,
    entangled_fraction,
    ks_one_sample,
    ks_two_sample,
    mc_covariance_check,
    mc_mean_matrix,
    mc_mean_reports,
    mc_purity_report,
    partial_transpose_right,
    ppt_is_entangled,
    run_verification_suite,
    unitary_invariance_test,
)

__version__ = "0.1.0"

__all__ = [
    "EigenDecomposition",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "check_density_matrix",
    "check_hermitian",
    "check_spectrum",
    "check_unitary",
    "compose_from_spectrum",
    "hermitian_eigen",
    "hs_inner",
    "partial_trace_right",
    "project_traceless",
    "purity",
    "EnsembleMoments",
    "covariance_constant",
    "covariance_from_overlap",
    "eig_density",
    "eig_density_normalization",
    "eig_density_simplex_integral",
    "ensemble_moments",
    "expected_purity",
    "gue_joint_density_unnormalized",
    "lambda_max_cdf_d2",
    "lambda_max_pdf_d2",
    "mean_density",
    "overlap_sq_moment",
    "vandermonde_sq",
    "RngStream",
    "rejection_acceptance_probe",
    "sample_density_bloch",
    "sample_density_fixed_basis",
    "sample_density_hs",
    "sample_density_purified",
    "sample_density_spectral",
    "sample_ginibre",
    "sample_gue",
    "sample_haar_unitary",
    "sample_pure_uniform",
    "sample_spectrum_rejection",
    "DEFAULT_SEED",
    "KsReport",
    "MonteCarloReport",
    "SuiteResult",
    "entangled_fraction",
    "ks_one_sample",
    "ks_two_sample",
    "mc_covariance_check",
    "mc_mean_matrix",
    "mc_mean_reports",
    "mc_purity_report",
    "partial_transpose_right",
    "ppt_is_entangled",
    "run_verification_suite",
    "unitary_invariance_test",
]
