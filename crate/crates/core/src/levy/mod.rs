//! Symmetric Lévy processes: jump profiles, characteristic exponents and the model catalog.

pub mod checks;
pub mod model;
pub mod profile;
pub mod symbol;

pub use checks::{
    comparability_check, jump_paring_ratio, jump_paring_verdict, minimal_integrability_time,
    ComparabilityReport, JumpParingReport,
};
pub use model::{catalog, CatalogEntry, LevyModel, ModelParams, SamplerFlags};
pub use profile::{GrowthOrder, JumpProfile, TailFamily};
pub use symbol::{stable_density_constant, ClosedForm, JumpPart, LevySymbol};
