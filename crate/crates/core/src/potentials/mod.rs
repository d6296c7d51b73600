//! Potential families, local suprema and the growth-order contractivity classifier.

pub mod classify;
pub mod potential;

pub use classify::{borderline_ratio, classify_contractivity, ContractivityVerdict, RatioLimit};
pub use potential::{Potential, PotentialFamily};
