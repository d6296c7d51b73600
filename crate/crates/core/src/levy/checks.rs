use serde::Serialize;

use super::profile::JumpProfile;
use super::symbol::LevySymbol;
use crate::error::{invalid, Error, Result};
use crate::quad::{self, QuadSpec};
use crate::scalar::{unit_sphere_area, Real};

/// Outcome of the jump-paring verifier on a list of radii.
#[derive(Debug, Clone, Serialize)]
pub struct JumpParingReport {
    /// `(|x|, I(x)/g(|x|))`
    pub ratios: Vec<(f64, f64)>,
    /// growth factor of the ratio per doubling of the radius, between consecutive samples
    pub growth_per_doubling: Vec<f64>,
    pub passes: bool,
    /// first radius at which the divergence heuristic fired
    pub diverged_at: Option<f64>,
}

fn paring_spec() -> QuadSpec {
    QuadSpec {
        rel_tol: 1e-9,
        abs_tol: 0.0,
        max_subdivisions: 4000,
    }
}

/// `I(x)/g(|x|)` with `I(x) = ∫_{|x-y|>1, |y|>1} g(|x-y|) g(|y|) dy`.
pub fn jump_paring_ratio<T: Real>(profile: &JumpProfile<T>, radii: &[T]) -> Result<Vec<(T, T)>> {
    radii
        .iter()
        .map(|&x| {
            if !(x >= T::lit(2.0)) {
                return Err(invalid("radius", "jump-paring radii must be at least 2"));
            }
            let value = if profile.dim == 1 {
                paring_1d(profile, x)?
            } else {
                paring_nd(profile, x)?
            };
            Ok((x, value))
        })
        .collect()
}

fn paring_1d<T: Real>(profile: &JumpProfile<T>, x: T) -> Result<T> {
    let spec = paring_spec();
    let lx = profile.log_eval(x);
    // y < -1 and y > x + 1 contribute equally
    let outer = quad::integrate_to_infinity(
        |s: T| (profile.log_eval(x + s) + profile.log_eval(s) - lx).exp(),
        T::one(),
        &spec,
    )?;
    let half = x / T::lit(2.0);
    let middle = quad::integrate(
        |y: T| (profile.log_eval(x - y) + profile.log_eval(y) - lx).exp(),
        T::one(),
        half,
        &spec,
    )?;
    Ok(T::lit(2.0) * (outer.value + middle.value))
}

fn paring_nd<T: Real>(profile: &JumpProfile<T>, x: T) -> Result<T> {
    let dim = profile.dim;
    let spec = paring_spec();
    let lx = profile.log_eval(x);
    let sphere = T::lit(unit_sphere_area(dim - 1));
    let pi = T::PI();
    let radial = |r: T| -> T {
        // |x - y| > 1  ⇔  cos θ < (x² + r² - 1) / (2 x r)
        let c = (x * x + r * r - T::one()) / (T::lit(2.0) * x * r);
        if c <= -T::one() {
            return T::zero();
        }
        let theta_min = if c >= T::one() { T::zero() } else { c.acos() };
        let inner = quad::integrate(
            |th: T| {
                let dist = (x * x + r * r - T::lit(2.0) * x * r * th.cos())
                    .max(T::zero())
                    .sqrt();
                th.sin().powi(dim as i32 - 2)
                    * (profile.log_eval(dist) + profile.log_eval(r) - lx).exp()
            },
            theta_min,
            pi,
            &spec,
        )
        .map(|e| e.value)
        .unwrap_or_else(|_| T::nan());
        sphere * r.powi(dim as i32 - 1) * inner
    };
    let breaks = [T::one(), x - T::one(), x + T::one(), T::lit(2.0) * x];
    let body = quad::integrate_panels(radial, &breaks, &spec)?;
    let tail = quad::integrate_to_infinity(radial, T::lit(2.0) * x, &spec)?;
    let total = body.value + tail.value;
    if !total.is_finite() {
        return Err(Error::Quadrature { residual: f64::NAN });
    }
    Ok(total)
}

/// Apply the doubling heuristic: fail once the ratio grows by more than 10× per radius doubling
/// on two consecutive sample intervals.
pub fn jump_paring_verdict<T: Real>(ratios: &[(T, T)]) -> JumpParingReport {
    let ratios: Vec<(f64, f64)> = ratios
        .iter()
        .map(|(r, v)| (r.as_f64(), v.as_f64()))
        .collect();
    let mut growth = Vec::new();
    let mut streak = 0;
    let mut diverged_at = None;
    for w in ratios.windows(2) {
        let ((r1, v1), (r2, v2)) = (w[0], w[1]);
        let f = (v2 / v1).powf(1.0 / (r2 / r1).log2());
        growth.push(f);
        if !f.is_finite() || f > 10.0 {
            streak += 1;
            if streak >= 2 && diverged_at.is_none() {
                diverged_at = Some(r2);
            }
        } else {
            streak = 0;
        }
    }
    let finite = ratios.iter().all(|(_, v)| v.is_finite());
    JumpParingReport {
        passes: finite && diverged_at.is_none(),
        ratios,
        growth_per_doubling: growth,
        diverged_at,
    }
}

/// Outcome of the `g(r)/g(r+1)` band check.
#[derive(Debug, Clone, Serialize)]
pub struct ComparabilityReport {
    pub passes: bool,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub min_at: f64,
    pub max_at: f64,
}

/// Sample `g(r)/g(r+1)` and decide whether it stays in a bounded band: the largest value over the
/// second half of the radii may not exceed twice the largest over the first half.
pub fn comparability_check<T: Real>(
    profile: &JumpProfile<T>,
    radii: &[T],
) -> Result<ComparabilityReport> {
    if radii.is_empty() {
        return Err(invalid("radii", "need at least one radius"));
    }
    if radii.iter().any(|r| !(*r >= T::one())) {
        return Err(invalid("radii", "comparability radii must be at least 1"));
    }
    let values: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| {
            (
                r.as_f64(),
                (profile.log_eval(r) - profile.log_eval(r + T::one()))
                    .exp()
                    .as_f64(),
            )
        })
        .collect();
    let (mut min, mut max) = ((f64::INFINITY, 0.0), (f64::NEG_INFINITY, 0.0));
    for &(r, v) in &values {
        if v < min.0 {
            min = (v, r);
        }
        if v > max.0 {
            max = (v, r);
        }
    }
    let split = values.len().div_ceil(2);
    let peak = |s: &[(f64, f64)]| s.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
    let first = peak(&values[..split]);
    let second = if split < values.len() {
        peak(&values[split..])
    } else {
        first
    };
    let finite = values.iter().all(|(_, v)| v.is_finite());
    Ok(ComparabilityReport {
        passes: finite && second <= 2.0 * first,
        min_ratio: min.0,
        max_ratio: max.0,
        min_at: min.1,
        max_at: max.1,
    })
}

/// Tabulated `|S^{d-1}| k^{d-1} w` and `ψ(k)` on a fixed radial frequency rule up to `10⁴`.
struct FrequencyRule {
    weights: Vec<f64>,
    psi: Vec<f64>,
    /// node index where each decade cutoff `10², 10³, 10⁴` ends
    cut: [usize; 3],
}

impl FrequencyRule {
    fn new<T: Real>(symbol: &LevySymbol<T>) -> Result<Self> {
        let d = symbol.dim();
        let area = unit_sphere_area(d);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let (x32, w32) = quad::gauss_legendre(32);
        for (x, w) in x32.iter().zip(&w32) {
            let k = 0.5 * (x + 1.0);
            nodes.push(k);
            weights.push(0.5 * w * area * k.powi(d as i32 - 1));
        }
        let (x16, w16) = quad::gauss_legendre(16);
        let mut cut = [0; 3];
        let step = std::f64::consts::LN_10 / 4.0;
        for j in 0..16 {
            let (a, b) = (j as f64 * step, (j + 1) as f64 * step);
            for (x, w) in x16.iter().zip(&w16) {
                let u = a + 0.5 * (b - a) * (x + 1.0);
                let k = u.exp();
                nodes.push(k);
                weights.push(0.5 * (b - a) * w * area * k.powi(d as i32));
            }
            match j {
                7 => cut[0] = nodes.len(),
                11 => cut[1] = nodes.len(),
                15 => cut[2] = nodes.len(),
                _ => {}
            }
        }
        let psi = nodes
            .iter()
            .map(|&k| symbol.eval_radial(T::lit(k)).map(|v| v.as_f64()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { weights, psi, cut })
    }

    fn converges(&self, t: f64) -> bool {
        let partial = |n: usize| -> f64 {
            (0..n)
                .map(|i| self.weights[i] * (-t * self.psi[i]).exp())
                .sum()
        };
        let (i2, i3, i4) = (
            partial(self.cut[0]),
            partial(self.cut[1]),
            partial(self.cut[2]),
        );
        let (d1, d2) = (i3 - i2, i4 - i3);
        d1 <= f64::MIN_POSITIVE || d2 < d1
    }
}

/// Estimate `inf{t : e^{-tψ} ∈ L¹}` by bisection on a cutoff-increment divergence test.
/// Returns 0 when the integral already converges at `t = tol`.
pub fn minimal_integrability_time<T: Real>(symbol: &LevySymbol<T>, tol: T) -> Result<T> {
    let tol = tol.as_f64();
    if !(tol > 0.0) {
        return Err(invalid("tol", "tolerance must be positive"));
    }
    let rule = FrequencyRule::new(symbol)?;
    if rule.converges(tol) {
        return Ok(T::zero());
    }
    let mut hi = 1.0;
    while !rule.converges(hi) {
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::Undetermined(
                "no convergence up to t = 1e3 on cutoffs up to 1e4".into(),
            ));
        }
    }
    let mut lo = tol;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if rule.converges(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(T::lit(0.5 * (lo + hi)))
}
