"""Exact and certified spectrality analysis for infinite convolutions.

The package builds measures as infinite convolutions of digit sets along
scale sequences, searches for integer spectra of the finite levels,
evaluates transforms and completeness functions with certified error
radii, and combines exact decision branches into a spectrality verdict.
"""

from .cyclotomic import cyclotomic, cyclotomic_orders, euler_phi
from .hadamard import (
    AdmissiblePair,
    find_spectra,
    is_admissible,
    normalize_pair,
    transform_pair,
)
from .mask import (
    IrrationalZeroPresent,
    MaskZeros,
    RationalZeroSet,
    mask_zero_set,
    rational_zeros,
)
from .measures import (
    AffineMap,
    AtomicMeasure,
    ComplexInterval,
    convolve,
    frac_str,
    mixture,
    parse_frac,
    pushforward,
)
from .words import (
    BernoulliSpec,
    BernoulliTail,
    EnumerationTail,
    MonteCarloSummary,
    PeriodicTail,
    SymbolicWord,
    monte_carlo_spectrality,
    pattern_frequency,
    sample_word,
)
from .convolution import (
    ConstantExponents,
    ConvolutionSpec,
    DepthLimitError,
    ExplicitExponents,
    PeriodicExponents,
    PiecewiseConstantDensity,
    SparseInsertionSpec,
    SpecialFamily,
    UnboundedExponents,
    density_consecutive,
    detect_special,
    overlap_mass,
    zero_set_window,
)
from .spectrality import (
    CandidateSpectrum,
    EquiPositivityCertificate,
    EquiPositivityFailure,
    IZVerdict,
    QReport,
    SpectralReport,
    VerdictBudget,
    WindowCertificate,
    candidate_spectrum,
    classify_special,
    equi_positive_check,
    gcd_condition,
    iz_finite,
    iz_weak_limit,
    q_exact_discrete,
    q_partial,
    spectral_verdict,
    tail_difference_gcd,
    translate_disjoint_window,
)
from .catalog import example_ids, run_example

__version__ = "0.1.0"

__all__ = [
    "AdmissiblePair",
    "AffineMap",
    "AtomicMeasure",
    "BernoulliSpec",
    "BernoulliTail",
    "CandidateSpectrum",
    "ComplexInterval",
    "ConstantExponents",
    "ConvolutionSpec",
    "DepthLimitError",
    "EnumerationTail",
    "EquiPositivityCertificate",
    "EquiPositivityFailure",
    "ExplicitExponents",
    "IZVerdict",
    "IrrationalZeroPresent",
    "MaskZeros",
    "MonteCarloSummary",
    "PeriodicExponents",
    "PeriodicTail",
    "PiecewiseConstantDensity",
    "QReport",
    "RationalZeroSet",
    "SparseInsertionSpec",
    "SpecialFamily",
    "SpectralReport",
    "SymbolicWord",
    "UnboundedExponents",
    "VerdictBudget",
    "WindowCertificate",
    "candidate_spectrum",
    "classify_special",
    "convolve",
    "cyclotomic",
    "cyclotomic_orders",
    "density_consecutive",
    "detect_special",
    "equi_positive_check",
    "euler_phi",
    "example_ids",
    "find_spectra",
    "frac_str",
    "gcd_condition",
    "is_admissible",
    "iz_finite",
    "iz_weak_limit",
    "mask_zero_set",
    "mixture",
    "monte_carlo_spectrality",
    "normalize_pair",
    "overlap_mass",
    "parse_frac",
    "pattern_frequency",
    "pushforward",
    "q_exact_discrete",
    "q_partial",
    "rational_zeros",
    "run_example",
    "sample_word",
    "spectral_verdict",
    "tail_difference_gcd",
    "transform_pair",
    "translate_disjoint_window",
    "zero_set_window",
]
