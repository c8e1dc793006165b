"""Boolean multireference alignment lab.

Simulate the cyclic shift-and-flip channel, decode with MAP, compute exact
distinguishing orders and error exponents, and sweep small lengths
exhaustively.
"""

from .signals import (
    BooleanSignal,
    DeletionPattern,
    ObservationModel,
    ShiftDistribution,
    SignedSignal,
    cyclic_shift,
    draw_shift,
    make_rng,
    restrict,
    sample_observation,
    signed,
    signed_weight,
    snr,
)
from .autocorr import (
    NotFound,
    OrbitCatalog,
    autocorr_sq_diff,
    autocorrelation,
    canonical_rotation,
    class_min_order,
    min_order,
    necklace_count,
    orbit_representatives,
    pair_table,
    signed_autocorrelation,
)
from .observation import (
    EpsilonExpansion,
    HammingProfile,
    chi2_term,
    conditional_distribution,
    derivative_order,
    epsilon_expansion,
    hamming_profile,
)
from .exponent import (
    ExponentReport,
    chernoff_information,
    class_exponent,
    expansion_convergence,
    leading_term,
)
from .decoder import (
    DecodeProblem,
    ExponentFit,
    TrialPoint,
    TrialSeries,
    auto_n_grid,
    exponent_fit,
    log_likelihood,
    map_decode,
    monte_carlo_pe,
    run_series,
    wilson_interval,
)
from .atlas import (
    AtlasRow,
    check_row,
    check_witness_construction,
    classify_branch,
    construct_witnesses,
    identity_sweep,
    verify_length,
)

__version__ = "0.1.0"

__all__ = [
    "BooleanSignal",
    "SignedSignal",
    "ShiftDistribution",
    "DeletionPattern",
    "ObservationModel",
    "cyclic_shift",
    "restrict",
    "sample_observation",
    "snr",
    "signed",
    "signed_weight",
    "make_rng",
    "draw_shift",
    "NotFound",
    "OrbitCatalog",
    "autocorrelation",
    "signed_autocorrelation",
    "autocorr_sq_diff",
    "min_order",
    "class_min_order",
    "orbit_representatives",
    "necklace_count",
    "canonical_rotation",
    "pair_table",
    "HammingProfile",
    "EpsilonExpansion",
    "conditional_distribution",
    "hamming_profile",
    "epsilon_expansion",
    "derivative_order",
    "chi2_term",
    "chernoff_information",
    "leading_term",
    "class_exponent",
    "expansion_convergence",
    "ExponentReport",
    "DecodeProblem",
    "TrialPoint",
    "TrialSeries",
    "log_likelihood",
    "map_decode",
    "monte_carlo_pe",
    "run_series",
    "exponent_fit",
    "ExponentFit",
    "auto_n_grid",
    "wilson_interval",
    "AtlasRow",
    "verify_length",
    "check_row",
    "check_witness_construction",
    "classify_branch",
    "construct_witnesses",
    "identity_sweep",
]
