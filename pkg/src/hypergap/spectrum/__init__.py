"""Dirichlet spectrum of the sectors: gap, path homotopy, comparison checks, Hessian probe."""

from .errors import InvalidRegime, InvariantViolation, PreconditionError
from .gap import (
    ANGULAR,
    RADIAL,
    GapReport,
    LargeGapVerdict,
    ShihCertificate,
    angular_problem,
    condition_bound_c,
    fundamental_gap,
    large_gap_regime,
    large_gap_threshold,
    normalized_gap_sandwich,
    rough_gap_bounds,
    shih_c2_bound,
    shih_report,
)
from .hessian import (
    HessianProbe,
    frame_hessian,
    log_concavity_probe,
    positive_points,
    validate_frame_hessian,
)
from .path import (
    EnvelopeVerdict,
    Envelopes,
    PathIdentity,
    PathSample,
    delta_sweep,
    envelope_constants,
    gap_path,
    path_gap_identity,
    ratio_max_bound,
    sturm_envelopes,
)
from .sturm import (
    BracketCheck,
    SolutionComparison,
    ZeroComparison,
    alternative_lemma_proof_check,
    first_zero,
    sturm_compare_i,
    sturm_compare_ii,
)
