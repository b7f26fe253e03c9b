"""Geometry of classical, quantum and no-signalling sets in small Bell scenarios."""

from .scenario import (
    Scenario,
    Behaviour,
    CorrelatorTable,
    BellFunctional,
    DeterministicPoint,
    NegativeCellError,
    SignallingError,
    NoSignallingReport,
    corr_to_prob,
    prob_to_corr,
    check_no_signalling,
    corr_direction,
    enumerate_deterministic,
    deterministic_strategies,
    deterministic_matrix,
    bell_value,
    behaviour_to_json,
    behaviour_from_json,
    functional_to_json,
    functional_from_json,
    correlator_table_to_json,
    correlator_table_from_json,
    scenario_to_json,
    scenario_from_json,
)
from .exactnum import Quad, sqrt2, sqrt5
from .lp import LPError, LPResult, solve_lp, solve_lp_exact
from .polytope import (
    PolyFace,
    VisibilityReport,
    affine_dimension,
    bierhorst_decompose,
    chsh_functional,
    chsh_scan,
    chsh_variants,
    face_dimension,
    fine_membership,
    local_bound,
    local_face,
    local_membership,
    noise_thresholds,
    ns_bound,
    ns_face,
    ns_vertices,
    pr_box,
    pr_variants,
    separating_functional,
    visibilities,
)
from .quantum import (
    QubitRealization,
    SeesawResult,
    TlmReport,
    b6_family,
    b6_family_correlators,
    realization_to_behaviour,
    seesaw_lower_bound,
    sos_gap_expansion,
    tlm_check,
    tlm_ray_max,
    verify_sos_b6,
)
from .npa import (
    canonical_level,
    default_level,
    moment_structure,
    npa_feasibility_margin,
    npa_ray_max,
    npa_upper_bound,
)
from .faces import (
    CLASS_LABELS,
    ExposureCertificate,
    FaceReport,
    classify,
    exposing_functional,
    flat_region_certificate,
    hardy_exposure_lp,
    tangent_bell_search,
)
from .multiparty import (
    BRANCHES,
    GhzFaceParams,
    ghz_face_point,
    mermin_witness,
    modulated_chsh,
    modulated_realization,
    ww_eigenvalues,
    ww_face,
    ww_family_behaviour,
    ww_observables,
)
from . import zoo

__version__ = "0.1.0"

__all__ = [
    "Scenario", "Behaviour", "CorrelatorTable", "BellFunctional",
    "DeterministicPoint", "NegativeCellError", "SignallingError",
    "NoSignallingReport",
    "corr_to_prob", "prob_to_corr", "check_no_signalling", "corr_direction",
    "enumerate_deterministic", "deterministic_strategies",
    "deterministic_matrix", "bell_value",
    "behaviour_to_json", "behaviour_from_json",
    "functional_to_json", "functional_from_json",
    "correlator_table_to_json", "correlator_table_from_json",
    "scenario_to_json", "scenario_from_json",
    "Quad", "sqrt2", "sqrt5",
    "LPError", "LPResult", "solve_lp", "solve_lp_exact",
    "PolyFace", "VisibilityReport", "affine_dimension", "bierhorst_decompose",
    "chsh_functional", "chsh_scan", "chsh_variants", "face_dimension",
    "fine_membership", "local_bound", "local_face", "local_membership",
    "noise_thresholds", "ns_bound", "ns_face", "ns_vertices", "pr_box",
    "pr_variants", "separating_functional", "visibilities",
    "QubitRealization", "SeesawResult", "TlmReport", "b6_family",
    "b6_family_correlators", "realization_to_behaviour", "seesaw_lower_bound",
    "sos_gap_expansion", "tlm_check", "tlm_ray_max", "verify_sos_b6",
    "canonical_level", "default_level", "moment_structure",
    "npa_feasibility_margin", "npa_ray_max", "npa_upper_bound",
    "CLASS_LABELS", "ExposureCertificate", "FaceReport", "classify",
    "exposing_functional", "flat_region_certificate", "hardy_exposure_lp",
    "tangent_bell_search",
    "BRANCHES", "GhzFaceParams", "ghz_face_point", "mermin_witness",
    "modulated_chsh", "modulated_realization", "ww_eigenvalues", "ww_face",
    "ww_family_behaviour", "ww_observables",
    "zoo",
]
