use serde::Serialize;

use super::profile::{JumpProfile, TailFamily};
use crate::error::{invalid, Result};
use crate::quad::{self, QuadSpec};
use crate::scalar::{gamma, norm, unit_sphere_area, Real};

/// Closed-form characteristic exponents of the jump part (diffusion `a|ξ|²` is added separately).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForm<T> {
    /// `|ξ|^α`
    Stable {
        alpha: T,
    },
    /// `(|ξ|² + m^{2/α})^{α/2} - m`
    Relativistic {
        alpha: T,
        mass: T,
    },
    /// `|ξ|^α`, combined with a nonzero diffusion coefficient.
    JumpDiffusion {
        alpha: T,
    },
    /// `log(1 + |ξ|^α)`
    GeometricStable {
        alpha: T,
    },
    /// One-dimensional exponentially tempered stable exponent with rate `c`.
    Tempered {
        alpha: T,
        rate: T,
    },
    None,
}

/// Jump part of the Lévy measure: `ν(z) = scale · g(|z|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpPart<T> {
    pub profile: JumpProfile<T>,
    pub scale: T,
}

/// Isotropic characteristic exponent `ψ(ξ) = a|ξ|² + ∫ (1 - cos ξ·z) ν(z) dz`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevySymbol<T> {
    dim: usize,
    diffusion: T,
    closed_form: ClosedForm<T>,
    jumps: Option<JumpPart<T>>,
    quad: QuadSpec,
    /// oscillation periods integrated explicitly before the asymptotic tail correction
    periods: usize,
}

/// Normalisation of the isotropic stable Lévy density whose exponent is exactly `|ξ|^α`.
pub fn stable_density_constant(dim: usize, alpha: f64) -> f64 {
    let d = dim as f64;
    alpha * 2f64.powf(alpha - 1.0) * gamma((d + alpha) / 2.0)
        / (std::f64::consts::PI.powf(d / 2.0) * gamma(1.0 - alpha / 2.0))
}

/// Spherical average of `cos(z θ₁)` over the unit sphere in `d` dimensions, returned as `1 - A_d(z)`.
pub(crate) fn one_minus_spherical_cos<T: Real>(dim: usize, z: T) -> T {
    let z = z.abs();
    if dim == 1 {
        let s = (z * T::lit(0.5)).sin();
        return T::lit(2.0) * s * s;
    }
    if z < T::lit(0.1) {
        // Σ_{j≥1} (-1)^{j+1} c_j z^{2j}, c_1 = 1/(2d), c_{j+1} = c_j / (4 (j+1)(j + d/2))
        let half_d = T::lit(dim as f64 / 2.0);
        let z2 = z * z;
        let mut c = T::one() / (T::lit(2.0) * T::from_usize_lossy(dim));
        let mut term = c * z2;
        let mut sum = T::zero();
        let mut sign = T::one();
        for j in 1..12 {
            sum += sign * term;
            let jj = T::from_usize_lossy(j);
            c /= T::lit(4.0) * (jj + T::one()) * (jj + half_d);
            term = c * z2.powi(j as i32 + 1);
            sign = -sign;
            if term < T::epsilon() * sum.abs() * T::lit(1e-3) {
                break;
            }
        }
        return sum;
    }
    if dim == 3 {
        return T::one() - z.sin() / z;
    }
    if z > T::lit(25.0) {
        return T::one() - spherical_cos_asymptotic(dim, z);
    }
    // ∫_0^π cos(z cos θ) sin^{d-2}θ dθ / ∫_0^π sin^{d-2}θ dθ by Gauss-Legendre
    let (nodes, weights) = quad::gauss_legendre(64);
    let half_pi = T::FRAC_PI_2();
    let mut num = T::zero();
    let mut den = T::zero();
    for (x, w) in nodes.iter().zip(&weights) {
        let theta = half_pi * (T::lit(*x) + T::one());
        let s = theta.sin().powi(dim as i32 - 2);
        let w = T::lit(*w) * s;
        num += w * (T::one() - (z * theta.cos()).cos());
        den += w;
    }
    num / den
}

/// `A_d(z) = Γ(ν+1) (2/z)^ν J_ν(z)` with `ν = d/2 - 1`, using Hankel's expansion of `J_ν` (z ≥ 25).
fn spherical_cos_asymptotic<T: Real>(dim: usize, z: T) -> T {
    let nu = dim as f64 / 2.0 - 1.0;
    let mu = 4.0 * nu * nu;
    let zf = z.as_f64();
    let (mut p, mut q) = (0.0, 0.0);
    let mut a = 1.0;
    for k in 0..40 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= (mu - odd * odd) / (k as f64 * 8.0 * zf);
        }
        if a == 0.0 || (k > 2 && a.abs() < 1e-17) {
            break;
        }
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
    }
    let omega = zf - (nu / 2.0 + 0.25) * std::f64::consts::PI;
    let j = (2.0 / (std::f64::consts::PI * zf)).sqrt() * (p * omega.cos() - q * omega.sin());
    T::lit(gamma(nu + 1.0) * (2.0 / zf).powf(nu) * j)
}

impl<T: Real> LevySymbol<T> {
    pub fn new(
        dim: usize,
        diffusion: T,
        closed_form: ClosedForm<T>,
        jumps: Option<JumpPart<T>>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim", "dimension must be at least 1"));
        }
        if !(diffusion >= T::zero()) {
            return Err(invalid(
                "diffusion",
                "diffusion coefficient must be non-negative",
            ));
        }
        if let Some(j) = &jumps {
            if j.profile.dim != dim {
                return Err(invalid("dim", "profile and symbol dimensions differ"));
            }
            if !(j.scale > T::zero()) {
                return Err(invalid("scale", "jump scale must be positive"));
            }
        }
        let stable_alpha = match closed_form {
            ClosedForm::Stable { alpha } | ClosedForm::JumpDiffusion { alpha } => Some(alpha),
            _ => None,
        };
        if let Some(alpha) = stable_alpha {
            match &jumps {
                Some(JumpPart { profile, .. })
                    if profile.alpha == alpha
                        && matches!(profile.tail, TailFamily::Polynomial { gamma } if gamma == alpha) =>
                    {}
                _ => {
                    return Err(invalid(
                        "closed_form",
                        "stable exponent requires a polynomial profile with gamma = alpha",
                    ))
                }
            }
        }
        if matches!(closed_form, ClosedForm::Stable { .. }) && diffusion != T::zero() {
            return Err(invalid(
                "diffusion",
                "stable tag has no diffusion part; use jump_diffusion",
            ));
        }
        if matches!(closed_form, ClosedForm::Tempered { .. }) && dim != 1 {
            return Err(invalid(
                "closed_form",
                "tempered closed form is one-dimensional",
            ));
        }
        if closed_form != ClosedForm::None && jumps.is_none() {
            return Err(invalid(
                "closed_form",
                "closed-form jump exponent without a jump part",
            ));
        }
        Ok(Self {
            dim,
            diffusion,
            closed_form,
            jumps,
            quad: QuadSpec::default(),
            periods: 64,
        })
    }

    /// Pure diffusion `ψ(ξ) = a|ξ|²`.
    pub fn gaussian(dim: usize, diffusion: T) -> Result<Self> {
        if !(diffusion > T::zero()) {
            return Err(invalid("diffusion", "pure diffusion needs a > 0"));
        }
        Self::new(dim, diffusion, ClosedForm::None, None)
    }

    pub fn with_quadrature(mut self, quad: QuadSpec, periods: usize) -> Self {
        self.quad = quad;
        self.periods = periods.max(1);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diffusion(&self) -> T {
        self.diffusion
    }

    pub fn closed_form(&self) -> &ClosedForm<T> {
        &self.closed_form
    }

    pub fn jumps(&self) -> Option<&JumpPart<T>> {
        self.jumps.as_ref()
    }

    pub fn is_pure_diffusion(&self) -> bool {
        self.jumps.is_none()
    }

    /// `ψ(ξ)`.
    pub fn eval(&self, xi: &[T]) -> Result<T> {
        if xi.len() != self.dim {
            return Err(invalid(
                "xi",
                format!("expected a point in dimension {}", self.dim),
            ));
        }
        self.eval_radial(norm(xi))
    }

    /// `ψ` as a function of `|ξ|`.
    pub fn eval_radial(&self, k: T) -> Result<T> {
        let k = k.abs();
        if k == T::zero() {
            return Ok(T::zero());
        }
        let gauss = self.diffusion * k * k;
        let jump = match (&self.closed_form, &self.jumps) {
            (ClosedForm::None, Some(_)) => self.jump_integral(k)?,
            (ClosedForm::None, None) => T::zero(),
            (cf, _) => closed_jump(cf, k),
        };
        Ok(gauss + jump)
    }

    /// `ψ(|ξ| = k)` from the Lévy-Khintchin integral, ignoring any closed form.
    pub fn eval_quadrature(&self, k: T) -> Result<T> {
        let k = k.abs();
        if k == T::zero() {
            return Ok(T::zero());
        }
        let jump = if self.jumps.is_some() {
            self.jump_integral(k)?
        } else {
            T::zero()
        };
        Ok(self.diffusion * k * k + jump)
    }

    /// `∫ (1 - cos ξ·z) ν(z) dz` with `|ξ| = k > 0`.
    fn jump_integral(&self, k: T) -> Result<T> {
        let JumpPart { profile, scale } = self.jumps.expect("jump part present");
        let dim = self.dim;
        let alpha = profile.alpha;
        let area = T::lit(unit_sphere_area(dim));
        let two_pi = T::TAU();
        let period = two_pi / k;

        // (0, r0]: series of 1 - A_d(kr) integrated against r^{-1-α}
        let r0 = T::one().min(T::lit(0.01) / k);
        let inner = {
            let half_d = T::lit(dim as f64 / 2.0);
            let mut c = T::one() / (T::lit(2.0) * T::from_usize_lossy(dim));
            let mut sum = T::zero();
            let mut sign = T::one();
            for j in 1..30 {
                let jj = T::from_usize_lossy(j);
                let p = T::lit(2.0) * jj - alpha;
                let term = c * k.powi(2 * j as i32) * r0.powf(p) / p;
                sum += sign * term;
                if term.abs() <= T::epsilon() * sum.abs() * T::lit(1e-2) {
                    break;
                }
                c /= T::lit(4.0) * (jj + T::one()) * (jj + half_d);
                sign = -sign;
            }
            sum
        };

        // [r0, 1]: log-variable near the singularity, then one panel per period
        let mut middle = T::zero();
        if r0 < T::one() {
            let r1 = T::one().min(period);
            let est = quad::integrate(
                |u: T| {
                    let r = u.exp();
                    (-alpha * u).exp() * one_minus_spherical_cos(dim, k * r)
                },
                r0.ln(),
                r1.ln(),
                &self.quad,
            )?;
            middle += est.value;
            if r1 < T::one() {
                let breaks = period_breaks(r1, T::one(), period);
                let est = quad::integrate_panels(
                    |r: T| r.powf(-T::one() - alpha) * one_minus_spherical_cos(dim, k * r),
                    &breaks,
                    &self.quad,
                )?;
                middle += est.value;
            }
        }

        // [1, ∞): explicit periods, then the non-oscillatory remainder with an asymptotic correction
        let d_minus_one = (dim - 1) as i32;
        let outer_integrand =
            |r: T| r.powi(d_minus_one) * profile.eval(r) * one_minus_spherical_cos(dim, k * r);
        let osc_end = T::one() + T::from_usize_lossy(self.periods) * period;
        let threshold = profile.tail_threshold_radius(T::lit(1e-16), T::lit(1e12));
        let polynomial = matches!(profile.tail, TailFamily::Polynomial { .. });
        let outer = match threshold {
            Some(thr) if thr <= osc_end && !polynomial => {
                let breaks = period_breaks(T::one(), thr, period);
                quad::integrate_panels(outer_integrand, &breaks, &self.quad)?.value
            }
            _ => {
                let breaks = period_breaks(T::one(), osc_end, period);
                let body = quad::integrate_panels(outer_integrand, &breaks, &self.quad)?.value;
                let mass = match profile.tail {
                    TailFamily::Polynomial { gamma } => osc_end.powf(-gamma) / gamma,
                    _ => {
                        quad::integrate_to_infinity(
                            |r: T| r.powi(d_minus_one) * profile.eval(r),
                            osc_end,
                            &self.quad,
                        )?
                        .value
                    }
                };
                let cos_tail = if dim == 1 {
                    // ∫_R^∞ cos(kr) g dr by integration by parts
                    let r = osc_end;
                    let g = profile.eval(r);
                    let (l1, l2) = profile.log_derivatives(r);
                    let g1 = g * l1;
                    let g2 = g * (l2 + l1 * l1);
                    let (s, c) = (k * r).sin_cos();
                    -g * s / k - g1 * c / (k * k) + g2 * s / (k * k * k)
                } else {
                    T::zero()
                };
                body + mass - cos_tail
            }
        };

        Ok(scale * area * (inner + middle + outer))
    }
}

fn period_breaks<T: Real>(a: T, b: T, period: T) -> Vec<T> {
    let mut breaks = vec![a];
    let mut x = a + period;
    while x < b {
        breaks.push(x);
        x += period;
    }
    breaks.push(b);
    breaks
}

fn closed_jump<T: Real>(cf: &ClosedForm<T>, k: T) -> T {
    match *cf {
        ClosedForm::Stable { alpha } | ClosedForm::JumpDiffusion { alpha } => k.powf(alpha),
        ClosedForm::Relativistic { alpha, mass } => {
            if mass == T::zero() {
                k.powf(alpha)
            } else {
                let m_pow = mass.powf(T::lit(2.0) / alpha);
                mass * ((alpha / T::lit(2.0)) * (k * k / m_pow).ln_1p()).exp_m1()
            }
        }
        ClosedForm::GeometricStable { alpha } => k.powf(alpha).ln_1p(),
        ClosedForm::Tempered { alpha, rate } => {
            if (alpha - T::one()).abs() < T::lit(1e-12) {
                T::lit(2.0) / T::PI()
                    * (k * (k / rate).atan() - rate / T::lit(2.0) * (k * k / (rate * rate)).ln_1p())
            } else {
                let base = (rate * rate + k * k).powf(alpha / T::lit(2.0))
                    * (alpha * (k / rate).atan()).cos()
                    - rate.powf(alpha);
                base / (T::FRAC_PI_2() * alpha).cos()
            }
        }
        ClosedForm::None => unreachable!("closed_jump called without a closed form"),
    }
}

impl<T: Real> std::ops::Deref for JumpPart<T> {
    type Target = JumpProfile<T>;
    fn deref(&self) -> &JumpProfile<T> {
        &self.profile
    }
}
