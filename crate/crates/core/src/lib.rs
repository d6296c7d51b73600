//! Numerical toolkit for Schrödinger operators `H = ψ(-i∇) + V` driven by symmetric Lévy processes:
//! spectral propagation, Feynman-Kac Monte Carlo and ground-state domination diagnostics.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod gsd;
pub mod levy;
pub mod mc;
pub mod potentials;
pub mod quad;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type LevyModel64 = levy::LevyModel<f64>;
pub type LevySymbol64 = levy::LevySymbol<f64>;
pub type JumpProfile64 = levy::JumpProfile<f64>;
pub type Potential64 = potentials::Potential<f64>;
pub type Grid64 = grid::Grid<f64>;
pub type Field64 = grid::Field<f64>;
pub type SymbolTable64 = grid::SymbolTable<f64>;
