use serde::Serialize;

use super::ratio::window_nodes;
use crate::error::{invalid, Error, Result};
use crate::grid::{Field, SpectralResult};
use crate::levy::LevyModel;
use crate::potentials::Potential;
use crate::scalar::{norm, Real};

/// Two-sided comparison of `φ₀` with `ν` and `ν / V_r*` on an annulus.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub r: f64,
    pub window: (f64, f64),
    /// `sup φ₀ / ν`
    pub upper: f64,
    /// `inf φ₀ V_r* / ν`
    pub lower: f64,
    /// `sup / inf` of `φ₀ V_r* / ν` over the annulus
    pub spread: f64,
    pub spread_cap: f64,
    pub passes: bool,
}

/// Check `φ₀ ≲ ν` and `φ₀ ≳ ν / V_r*` on the annulus `lo ≤ |x| ≤ hi`.
pub fn gs_bound_check<T: Real>(
    spec: &SpectralResult<T>,
    model: &LevyModel<T>,
    pot: &Potential<T>,
    r: T,
    window: (T, T),
    spread_cap: f64,
) -> Result<BoundReport> {
    if model.profile().is_none() {
        return Err(Error::Precondition(
            "proposition hypotheses not met: the model has no jump part".into(),
        ));
    }
    let (lo, hi) = window;
    let grid = spec.phi0.grid;
    if !(lo > T::zero() && lo < hi) {
        return Err(invalid("window", "need 0 < R_lo < R_hi"));
    }
    if hi > T::lit(super::ratio::WINDOW) * grid.r_box {
        return Err(invalid(
            "window",
            "annulus reaches into the boundary buffer",
        ));
    }
    let mut upper = T::zero();
    let mut lower = T::infinity();
    let mut lower_max = T::zero();
    let mut count = 0;
    for (i, &phi) in spec.phi0.values.iter().enumerate() {
        let x = grid.point(i);
        let rho = norm(&x);
        if rho < lo || rho > hi {
            continue;
        }
        count += 1;
        let nu = model.eval_density(&x)?;
        let v_star = pot.sup_ball(&x, r)?;
        upper = upper.max(phi / nu);
        let q = phi * v_star / nu;
        lower = lower.min(q);
        lower_max = lower_max.max(q);
    }
    if count == 0 {
        return Err(Error::EmptyWindow);
    }
    let spread = (lower_max / lower).as_f64();
    let (upper, lower) = (upper.as_f64(), lower.as_f64());
    Ok(BoundReport {
        r: r.as_f64(),
        window: (lo.as_f64(), hi.as_f64()),
        upper,
        lower,
        spread,
        spread_cap,
        passes: upper.is_finite() && lower > 0.0 && spread <= spread_cap,
    })
}

/// `∫ φ₀^{1-δ}` over the window, with the share contributed by the outer half of the window.
#[derive(Debug, Clone, Serialize)]
pub struct IntegrabilityReport {
    pub delta: f64,
    pub value: f64,
    /// value on the half-size window, for a box-truncation check
    pub inner_value: f64,
    pub converged: bool,
}

pub fn gs_integrability<T: Real>(
    phi0: &Field<T>,
    delta: T,
    window: T,
) -> Result<IntegrabilityReport> {
    if !(delta > T::zero() && delta < T::one()) {
        return Err(invalid("delta", "delta must lie in (0, 1)"));
    }
    let power = T::one() - delta;
    let sum = |nodes: &[usize]| -> T {
        phi0.grid.cell()
            * nodes.iter().fold(T::zero(), |a, &i| {
                a + phi0.values[i].max(T::zero()).powf(power)
            })
    };
    let value = sum(&window_nodes(phi0, window)?);
    let inner_value = sum(&window_nodes(phi0, window / T::lit(2.0))?);
    let (value, inner_value) = (value.as_f64(), inner_value.as_f64());
    Ok(IntegrabilityReport {
        delta: delta.as_f64(),
        value,
        inner_value,
        converged: value.is_finite() && (value - inner_value).abs() <= 1e-2 * value,
    })
}
