"""Exact spectral analysis of the random-scan single-site sampler on 1-D color chains.

The package builds the reversible transition kernel for a nearest-neighbor
agreement energy at temperature T, computes its spectrum exactly at small
sizes, bounds the spectral gap through canonical-path congestion, and
evaluates the closed-form eigenvalue bounds that the congestion argument
yields, together with independent comparison bounds and a certified
total-variation decay envelope.
"""

from .model import (
    DENSE_SOLVE_BUDGET,
    EXACT_STATES_BUDGET,
    KAPPA_BUDGET,
    BudgetExceededError,
    Configuration,
    GibbsMeasure,
    ModelSpec,
    colors_to_string,
    config_from_colors,
    config_from_rank,
    decode_rank,
    encode_rank,
    energy,
    rank_roundtrip,
    stationary_measure,
    string_to_colors,
)
from .kernel import (
    SparseKernel,
    bond_score,
    build_kernel,
    check_detailed_balance,
    check_irreducible,
    check_stationarity,
    conditional_probability,
    coordinate_text,
    transition_probability,
    write_coordinate_text,
)
from .spectral import Spectrum, spectrum, spectrum_to_json, symmetrize
from .paths import (
    CertificateSummary,
    EdgeCertificate,
    EdgeLoad,
    KappaResult,
    PathRecord,
    SliceIdentityReport,
    WorstFactors,
    boundary_edge_bound,
    canonical_path,
    certify_all_edges,
    edge_load_at,
    edge_local_factors,
    kappa_closed_form,
    kappa_exact,
    kappa_report,
    kappa_report_json,
    per_edge_certificate,
    verify_slice_identities,
    worst_alpha_beta,
)
from .bounds import (
    BoundReport,
    IngrassiaParams,
    assemble_report,
    corollary_gate,
    crossover_n,
    ds_tv_envelope,
    ingrassia_beta1_bound,
    ingrassia_lambda_min_bound,
    report_to_dict,
    report_to_json,
    theorem2_bound,
    theorem3_bound,
    theta,
)
from .chain import (
    TvCurve,
    make_rng,
    propagate,
    simulate,
    simulate_trajectory,
    tv_curve,
    tv_distance,
)
from .serialize import canonical_csv, canonical_json, format_float

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "BoundReport",
    "CertificateSummary",
    "Configuration",
    "DENSE_SOLVE_BUDGET",
    "EXACT_STATES_BUDGET",
    "EdgeCertificate",
    "EdgeLoad",
    "GibbsMeasure",
    "IngrassiaParams",
    "KAPPA_BUDGET",
    "KappaResult",
    "ModelSpec",
    "PathRecord",
    "SliceIdentityReport",
    "SparseKernel",
    "Spectrum",
    "TvCurve",
    "WorstFactors",
    "assemble_report",
    "bond_score",
    "boundary_edge_bound",
    "build_kernel",
    "canonical_csv",
    "canonical_json",
    "canonical_path",
    "certify_all_edges",
    "check_detailed_balance",
    "check_irreducible",
    "check_stationarity",
    "colors_to_string",
    "conditional_probability",
    "config_from_colors",
    "config_from_rank",
    "coordinate_text",
    "corollary_gate",
    "crossover_n",
    "decode_rank",
    "ds_tv_envelope",
    "edge_load_at",
    "edge_local_factors",
    "encode_rank",
    "energy",
    "format_float",
    "ingrassia_beta1_bound",
    "ingrassia_lambda_min_bound",
    "kappa_closed_form",
    "kappa_exact",
    "kappa_report",
    "kappa_report_json",
    "make_rng",
    "per_edge_certificate",
    "propagate",
    "rank_roundtrip",
    "report_to_dict",
    "report_to_json",
    "simulate",
    "simulate_trajectory",
    "spectrum",
    "spectrum_to_json",
    "stationary_measure",
    "string_to_colors",
    "symmetrize",
    "theorem2_bound",
    "theorem3_bound",
    "theta",
    "transition_probability",
    "tv_curve",
    "tv_distance",
    "verify_slice_identities",
    "worst_alpha_beta",
    "write_coordinate_text",
]
