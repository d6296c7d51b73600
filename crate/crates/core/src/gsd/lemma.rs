use serde::Serialize;

use super::opnorm::intrinsic_norm_2p;
use super::ratio::{intrinsic_ratio, weighted_lp_norm, Exponent};
use crate::error::{Error, Result};
use crate::grid::{potential_on_grid, SpectralResult, SymbolTable};
use crate::potentials::Potential;
use crate::scalar::Real;

/// Right side exceeding the left by more than this makes the check uninformative.
pub const VACUOUS_SLACK: f64 = 1e6;

/// Both sides of `C_{2,p,t+t_b} ≤ ‖e^{-t_b H}‖_{2,∞} e^{λ₀ t_b} ‖u_t‖_{L^p(μ)}`.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub t: f64,
    pub t_b: f64,
    pub p: Exponent,
    pub left: f64,
    pub left_converged: bool,
    pub kernel_bound: f64,
    pub u_norm: f64,
    pub right: f64,
    /// `right / left`
    pub slack: f64,
    pub holds: bool,
    pub vacuous: bool,
}

/// `‖e^{-t_b H}‖_{2,∞} ≤ e^{t_b max(0, -min V)} (Σ_k e^{-2 t_b ψ_k} / (2R)^d)^{1/2}`.
pub fn two_to_infinity_bound<T: Real>(table: &SymbolTable<T>, pot: &Potential<T>, t_b: f64) -> f64 {
    let grid = table.grid;
    let vol = (2.0 * grid.r_box.as_f64()).powi(grid.dim as i32);
    let sum: f64 = table
        .psi
        .iter()
        .map(|p| (-2.0 * t_b * p.as_f64()).exp())
        .sum();
    let min_v = potential_on_grid(pot, &grid)
        .iter()
        .fold(f64::INFINITY, |a, v| a.min(v.as_f64()));
    (t_b * (-min_v).max(0.0)).exp() * (sum / vol).sqrt()
}

#[allow(clippy::too_many_arguments)]
pub fn lemma_consistency_check<T: Real>(
    spec: &SpectralResult<T>,
    table: &SymbolTable<T>,
    pot: &Potential<T>,
    t: f64,
    t_b: f64,
    p: Exponent,
    window: f64,
    dt: f64,
) -> Result<LemmaReport> {
    let dim = table.grid.dim;
    if !pot.kato_confining_check(dim).0 {
        return Err(Error::Precondition("potential is not confining".into()));
    }
    let left = intrinsic_norm_2p(spec, table, pot, t + t_b, p, window, dt)?;
    let steps = ((t / dt).ceil() as usize).max(1);
    let u = intrinsic_ratio(spec, table, pot, T::lit(t), steps)?;
    let u_norm = weighted_lp_norm(&u.field, &spec.phi0, p, T::lit(window))?.as_f64();
    let kernel_bound = two_to_infinity_bound(table, pot, t_b);
    let right = kernel_bound * (spec.lambda0.as_f64() * t_b).exp() * u_norm;
    let slack = right / left.value;
    Ok(LemmaReport {
        t,
        t_b,
        p,
        left: left.value,
        left_converged: left.converged,
        kernel_bound,
        u_norm,
        right,
        slack,
        holds: left.value <= right * (1.0 + 1e-9),
        vacuous: slack > VACUOUS_SLACK,
    })
}
