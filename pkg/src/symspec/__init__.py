"""Higher-order spectral estimation with permutation-symmetric windows and kernels."""
from .cumulants import (
    CumulantGrid,
    MomentCache,
    SetPartition,
    cumulant_from_moments,
    cumulant_grid,
    estimate_cumulant,
    orbit_discrepancy,
    sample_moment,
    set_partitions,
)
from .errors import (
    CapacityError,
    InsufficientDataError,
    SymmetryError,
    SymspecError,
    ValidationError,
)
from .kernels import (
    QuadFormDiag,
    bessel_j2,
    default_beta,
    diagonalize_quadratic_form,
    flat_top_conical,
    flat_top_pyramidal,
    form_matrix,
    gabr_rao_lag_window,
    optimal_alpha,
    optimal_kernel,
    optimal_lag_window,
    quadratic_form,
)
from .permgroup import (
    Order,
    Permutation,
    closure,
    compose,
    enumerate_group,
    format_cycles,
    identity,
    inverse,
    parse_cycles,
    permutation_matrix,
)
from .representation import (
    Domain,
    RepMatrix,
    SymmetryOrbit,
    VerificationReport,
    domain_matrix,
    freq_rep_matrix,
    rep_matrix,
    symmetry_orbit,
    verify_representation,
)
from .spectra import (
    FrequencyGrid,
    SpectralEstimate,
    kernel_convolution_estimate,
    lag_window_estimate,
    periodogram,
    spectral_symmetry_check,
)
from .symmetrize import (
    Combiner,
    CombinerKind,
    SymmetryReport,
    WindowFunction,
    apply_arg_transform,
    check_symmetry,
    normalize_at_origin,
    product_window_univariate,
    projected_symmetrize,
    symmetrize,
)
from .synth import SynthKind, SynthSpec, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "CumulantGrid",
    "MomentCache",
    "SetPartition",
    "cumulant_from_moments",
    "cumulant_grid",
    "estimate_cumulant",
    "orbit_discrepancy",
    "sample_moment",
    "set_partitions",
    "CapacityError",
    "InsufficientDataError",
    "SymmetryError",
    "SymspecError",
    "ValidationError",
    "QuadFormDiag",
    "bessel_j2",
    "default_beta",
    "diagonalize_quadratic_form",
    "flat_top_conical",
    "flat_top_pyramidal",
    "form_matrix",
    "gabr_rao_lag_window",
    "optimal_alpha",
    "optimal_kernel",
    "optimal_lag_window",
    "quadratic_form",
    "Order",
    "Permutation",
    "closure",
    "compose",
    "enumerate_group",
    "format_cycles",
    "identity",
    "inverse",
    "parse_cycles",
    "permutation_matrix",
    "Domain",
    "RepMatrix",
    "SymmetryOrbit",
    "VerificationReport",
    "domain_matrix",
    "freq_rep_matrix",
    "rep_matrix",
    "symmetry_orbit",
    "verify_representation",
    "FrequencyGrid",
    "SpectralEstimate",
    "kernel_convolution_estimate",
    "lag_window_estimate",
    "periodogram",
    "spectral_symmetry_check",
    "Combiner",
    "CombinerKind",
    "SymmetryReport",
    "WindowFunction",
    "apply_arg_transform",
    "check_symmetry",
    "normalize_at_origin",
    "product_window_univariate",
    "projected_symmetrize",
    "symmetrize",
    "SynthKind",
    "SynthSpec",
    "generate_synthetic",
    "__version__",
]
