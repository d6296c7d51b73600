use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::grid::{propagate_semigroup, Field, SpectralResult, SymbolTable};
use crate::potentials::Potential;
use crate::scalar::Real;

/// Nodes where `φ₀` is below this are excluded from intrinsic ratios.
pub const PHI_FLOOR: f64 = 1e-300;

/// Default diagnostic window as a fraction of the box half-width.
pub const WINDOW: f64 = 0.75;

/// Exponent of an `L^p(μ)` norm, `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(pub f64);

impl Exponent {
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(invalid("p", "norm exponent must be at least 1"));
        }
        Ok(Self(p))
    }

    pub fn is_infinite(&self) -> bool {
        self.0.is_infinite()
    }

    /// `inf` for `p = ∞`, the number otherwise.
    pub fn label(&self) -> String {
        if self.is_infinite() {
            "inf".into()
        } else {
            format!("{}", self.0)
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

/// `u_t = e^{λ₀ t} T_t 1 / φ₀` with the nodes where `φ₀` underflows set to 0 and listed.
#[derive(Debug, Clone, Serialize)]
pub struct IntrinsicRatio<T> {
    pub field: Field<T>,
    pub excluded: Vec<usize>,
}

/// Build `u_t` from an already propagated `T_t 1`.
pub fn ratio_from_semigroup<T: Real>(
    spec: &SpectralResult<T>,
    t_t_one: &Field<T>,
    t: T,
) -> IntrinsicRatio<T> {
    let shift = (spec.lambda0 * t).exp();
    let mut excluded = Vec::new();
    let values = t_t_one
        .values
        .iter()
        .zip(&spec.phi0.values)
        .enumerate()
        .map(|(i, (&f, &phi))| {
            if phi < T::lit(PHI_FLOOR) {
                excluded.push(i);
                T::zero()
            } else {
                shift * f / phi
            }
        })
        .collect();
    let field = Field {
        grid: spec.phi0.grid,
        values,
        label: "u_t".into(),
        time: Some(t),
    };
    IntrinsicRatio { field, excluded }
}

/// `u_t = e^{λ₀ t} T_t 1 / φ₀` with `T_t 1` from the splitting propagator.
pub fn intrinsic_ratio<T: Real>(
    spec: &SpectralResult<T>,
    table: &SymbolTable<T>,
    pot: &Potential<T>,
    t: T,
    steps: usize,
) -> Result<IntrinsicRatio<T>> {
    let grid = spec.phi0.grid;
    if grid != table.grid {
        return Err(Error::GridMismatch(
            "ground state and symbol table differ".into(),
        ));
    }
    let one = Field::constant(grid, T::one(), "one");
    let t_one = if t == T::zero() {
        one
    } else {
        propagate_semigroup(&one, table, pot, t, steps)?
    };
    Ok(ratio_from_semigroup(spec, &t_one, t))
}

/// Indices of the window `|x| ≤ fraction · R`.
pub fn window_nodes<T: Real>(field: &Field<T>, fraction: T) -> Result<Vec<usize>> {
    if !(fraction > T::zero() && fraction <= T::one()) {
        return Err(invalid("window", "window fraction must lie in (0, 1]"));
    }
    let nodes = field.grid.window(fraction);
    if nodes.is_empty() {
        return Err(Error::EmptyWindow);
    }
    Ok(nodes)
}

/// `‖f‖_{L^p(μ)}` with `μ ∝ φ₀²` normalised to a probability measure on the window.
pub fn weighted_lp_norm<T: Real>(
    f: &Field<T>,
    phi0: &Field<T>,
    p: Exponent,
    window: T,
) -> Result<T> {
    if f.grid != phi0.grid {
        return Err(Error::GridMismatch(
            "f and φ₀ live on different grids".into(),
        ));
    }
    let nodes = window_nodes(f, window)?;
    lp_on_nodes(&f.values, &phi0.values, &nodes, p)
}

/// Weighted norm restricted to `nodes`, computed in log space.
pub(crate) fn lp_on_nodes<T: Real>(f: &[T], phi0: &[T], nodes: &[usize], p: Exponent) -> Result<T> {
    let live: Vec<usize> = nodes
        .iter()
        .copied()
        .filter(|&i| phi0[i] > T::zero())
        .collect();
    if live.is_empty() {
        return Err(Error::EmptyWindow);
    }
    if p.is_infinite() {
        return Ok(live.iter().map(|&i| f[i].abs()).fold(T::zero(), T::max));
    }
    let pp = T::lit(p.0);
    let log_den = log_sum_exp(live.iter().map(|&i| T::lit(2.0) * phi0[i].ln()));
    let log_num = log_sum_exp(
        live.iter()
            .filter(|&&i| f[i] != T::zero())
            .map(|&i| pp * f[i].abs().ln() + T::lit(2.0) * phi0[i].ln()),
    );
    Ok(((log_num - log_den) / pp).exp())
}

pub(crate) fn log_sum_exp<T: Real>(terms: impl Iterator<Item = T>) -> T {
    let terms: Vec<T> = terms.collect();
    let max = terms.iter().copied().fold(T::neg_infinity(), T::max);
    if !max.is_finite() {
        return max;
    }
    max + terms
        .iter()
        .fold(T::zero(), |a, &x| a + (x - max).exp())
        .ln()
}
