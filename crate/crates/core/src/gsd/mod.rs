//! Ground-state domination diagnostics: intrinsic ratios, weighted norms, box scans,
//! ground-state bounds, intrinsic operator norms and classifier cross-checks.

pub mod bounds;
pub mod equivalence;
pub mod lemma;
pub mod opnorm;
pub mod ratio;
pub mod scan;

pub use bounds::{gs_bound_check, gs_integrability, BoundReport, IntegrabilityReport};
pub use equivalence::{equivalence_consistency, EquivalenceReport};
pub use lemma::{lemma_consistency_check, two_to_infinity_bound, LemmaReport, VACUOUS_SLACK};
pub use opnorm::{intrinsic_norm_2p, mixed_norm_power, NormEstimate};
pub use ratio::{
    intrinsic_ratio, ratio_from_semigroup, weighted_lp_norm, Exponent, IntrinsicRatio, PHI_FLOOR,
    WINDOW,
};
pub use scan::{
    box_trend, gsd_scan, make_coherent, solve_box, BoxRun, BoxState, GsdOptions, GsdReport, NRule,
    NormEntry, Verdict, VerdictEntry,
};
