use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::levy::{ClosedForm, JumpProfile, LevyModel, TailFamily};
use crate::quad::{self, QuadSpec};
use crate::scalar::{unit_sphere_area, Real};

/// Treatment of jumps shorter than `ε` in the compound-Poisson sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SmallJumps {
    #[default]
    GaussianCorrection,
    Drop,
}

/// Monte Carlo controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McConfig {
    pub n_paths: usize,
    pub dt: f64,
    pub epsilon: f64,
    pub seed: u64,
    pub small_jumps: SmallJumps,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_paths: 100_000,
            dt: 1e-3,
            epsilon: 0.25,
            seed: 0,
            small_jumps: SmallJumps::GaussianCorrection,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths == 0 {
            return Err(invalid("n_paths", "need at least one path"));
        }
        if !(self.dt > 0.0) {
            return Err(invalid("dt", "time step must be positive"));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(invalid("epsilon", "small-jump cutoff must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Per-coordinate variance of the jumps shorter than `ε`: `(1/d) ∫_{|y|<ε} |y|² ν(y) dy`.
pub fn small_jump_variance(dim: usize, alpha: f64, scale: f64, eps: f64) -> f64 {
    scale * unit_sphere_area(dim) * eps.powf(2.0 - alpha) / (dim as f64 * (2.0 - alpha))
}

/// Law of the jump length conditioned on `|z| > ε`, density `∝ r^{d-1} g(r)`.
#[derive(Debug, Clone)]
struct RadialLaw {
    eps: f64,
    alpha: f64,
    /// `∫_ε^1 r^{-1-α} dr`
    inner_mass: f64,
    /// `∫_1^∞ r^{d-1} g(r) dr`
    outer_mass: f64,
    tail: TailLaw,
}

#[derive(Debug, Clone)]
enum TailLaw {
    Polynomial {
        gamma: f64,
    },
    /// cumulative mass table on `[1, r_end]`
    Table {
        r: Vec<f64>,
        cdf: Vec<f64>,
    },
}

impl RadialLaw {
    fn new(profile: &JumpProfile<f64>, eps: f64) -> Result<Self> {
        let alpha = profile.alpha;
        let inner_mass = (eps.powf(-alpha) - 1.0) / alpha;
        let d = profile.dim as i32;
        let (outer_mass, tail) = match profile.tail {
            TailFamily::Polynomial { gamma } => (1.0 / gamma, TailLaw::Polynomial { gamma }),
            _ => {
                let r_end = profile
                    .tail_threshold_radius(1e-18, 1e9)
                    .ok_or_else(|| Error::Precondition("jump tail does not decay".into()))?;
                let cells = 4096;
                let spec = QuadSpec {
                    rel_tol: 1e-10,
                    abs_tol: 0.0,
                    max_subdivisions: 200,
                };
                let mut r = Vec::with_capacity(cells + 1);
                let mut cdf = Vec::with_capacity(cells + 1);
                r.push(1.0);
                cdf.push(0.0);
                for i in 1..=cells {
                    let (a, b) = (r[i - 1], 1.0 + (r_end - 1.0) * i as f64 / cells as f64);
                    let mass =
                        quad::integrate(|x: f64| x.powi(d - 1) * profile.eval(x), a, b, &spec)?
                            .value;
                    r.push(b);
                    cdf.push(cdf[i - 1] + mass);
                }
                (cdf[cells], TailLaw::Table { r, cdf })
            }
        };
        Ok(Self {
            eps,
            alpha,
            inner_mass,
            outer_mass,
            tail,
        })
    }

    fn total(&self) -> f64 {
        self.inner_mass + self.outer_mass
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        let u = rng.random::<f64>() * self.total();
        if u < self.inner_mass {
            return (self.eps.powf(-self.alpha) - self.alpha * u).powf(-1.0 / self.alpha);
        }
        let v = u - self.inner_mass;
        match &self.tail {
            // survival r^{-γ} beyond 1
            TailLaw::Polynomial { gamma } => {
                (1.0 - v * gamma).max(f64::MIN_POSITIVE).powf(-1.0 / gamma)
            }
            TailLaw::Table { r, cdf } => {
                let i = cdf.partition_point(|&c| c < v).clamp(1, cdf.len() - 1);
                let w = (v - cdf[i - 1]) / (cdf[i] - cdf[i - 1]).max(f64::MIN_POSITIVE);
                r[i - 1] + w.clamp(0.0, 1.0) * (r[i] - r[i - 1])
            }
        }
    }
}

#[derive(Debug, Clone)]
enum JumpSampler {
    None,
    /// `dt^{1/α}` times a standard symmetric α-stable variate (`E e^{iξX} = e^{-|ξ|^α}`)
    Stable {
        alpha: f64,
        scale: f64,
    },
    CompoundPoisson {
        poisson: Option<Poisson<f64>>,
        radial: RadialLaw,
        small_sd: f64,
    },
}

/// Draws increments `X_{t+dt} - X_t` of a Lévy model.
#[derive(Debug, Clone)]
pub struct IncrementSampler {
    pub dim: usize,
    pub dt: f64,
    diffusion_sd: f64,
    jumps: JumpSampler,
}

impl IncrementSampler {
    pub fn new<T: Real>(model: &LevyModel<T>, dt: f64, cfg: &McConfig) -> Result<Self> {
        cfg.validate()?;
        if !(dt > 0.0) {
            return Err(invalid("dt", "time step must be positive"));
        }
        let dim = model.dim;
        let diffusion_sd = (2.0 * model.diffusion().as_f64() * dt).sqrt();
        let jumps = match (model.symbol.closed_form(), model.symbol.jumps()) {
            (_, None) => JumpSampler::None,
            (ClosedForm::Stable { alpha } | ClosedForm::JumpDiffusion { alpha }, Some(_))
                if model.samplers.exact_stable =>
            {
                let alpha = alpha.as_f64();
                JumpSampler::Stable {
                    alpha,
                    scale: dt.powf(1.0 / alpha),
                }
            }
            (_, Some(part)) if model.samplers.compound_poisson => {
                let p = part.profile;
                let profile = JumpProfile::new(dim, p.alpha.as_f64(), tail_to_f64(p.tail))?;
                let scale = part.scale.as_f64();
                let radial = RadialLaw::new(&profile, cfg.epsilon)?;
                let rate = scale * unit_sphere_area(dim) * radial.total() * dt;
                let poisson = if rate > 0.0 {
                    Some(Poisson::new(rate).map_err(|e| invalid("rate", e.to_string()))?)
                } else {
                    None
                };
                let small_sd = match cfg.small_jumps {
                    SmallJumps::GaussianCorrection => {
                        (small_jump_variance(dim, profile.alpha, scale, cfg.epsilon) * dt).sqrt()
                    }
                    SmallJumps::Drop => 0.0,
                };
                JumpSampler::CompoundPoisson {
                    poisson,
                    radial,
                    small_sd,
                }
            }
            _ => {
                return Err(Error::Precondition(format!(
                    "no path sampler for model '{}'",
                    model.id
                )));
            }
        };
        Ok(Self {
            dim,
            dt,
            diffusion_sd,
            jumps,
        })
    }

    /// Add one increment to `x`.
    pub fn step<R: Rng>(&self, rng: &mut R, x: &mut [f64]) {
        if self.diffusion_sd > 0.0 {
            for xi in x.iter_mut() {
                let z: f64 = StandardNormal.sample(rng);
                *xi += self.diffusion_sd * z;
            }
        }
        match &self.jumps {
            JumpSampler::None => {}
            JumpSampler::Stable { alpha, scale } => {
                if self.dim == 1 {
                    x[0] += scale * symmetric_stable(rng, *alpha);
                } else {
                    // sub-Gaussian: √A · N(0, 2I) with A positive (α/2)-stable
                    let a = positive_stable(rng, alpha / 2.0).sqrt();
                    for xi in x.iter_mut() {
                        let z: f64 = StandardNormal.sample(rng);
                        *xi += scale * a * std::f64::consts::SQRT_2 * z;
                    }
                }
            }
            JumpSampler::CompoundPoisson {
                poisson,
                radial,
                small_sd,
            } => {
                if *small_sd > 0.0 {
                    for xi in x.iter_mut() {
                        let z: f64 = StandardNormal.sample(rng);
                        *xi += small_sd * z;
                    }
                }
                let count = poisson.as_ref().map_or(0.0, |p| p.sample(rng)) as usize;
                for _ in 0..count {
                    let r = radial.sample(rng);
                    if self.dim == 1 {
                        x[0] += if rng.random::<bool>() { r } else { -r };
                    } else {
                        let dir: Vec<f64> =
                            (0..self.dim).map(|_| StandardNormal.sample(rng)).collect();
                        let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                        for (xi, u) in x.iter_mut().zip(&dir) {
                            *xi += r * u / norm;
                        }
                    }
                }
            }
        }
    }
}

fn tail_to_f64<T: Real>(tail: TailFamily<T>) -> TailFamily<f64> {
    match tail {
        TailFamily::Polynomial { gamma } => TailFamily::Polynomial {
            gamma: gamma.as_f64(),
        },
        TailFamily::StretchedExponential { c, beta } => TailFamily::StretchedExponential {
            c: c.as_f64(),
            beta: beta.as_f64(),
        },
        TailFamily::Exponential { c, gamma } => TailFamily::Exponential {
            c: c.as_f64(),
            gamma: gamma.as_f64(),
        },
        TailFamily::GaussianTail => TailFamily::GaussianTail,
    }
}

/// Chambers-Mallows-Stuck draw with `E e^{iθX} = e^{-|θ|^α}`.
pub fn symmetric_stable<R: Rng>(rng: &mut R, alpha: f64) -> f64 {
    let v = std::f64::consts::PI * (rng.random::<f64>() - 0.5);
    if (alpha - 1.0).abs() < 1e-12 {
        return v.tan();
    }
    let w: f64 = Exp1.sample(rng);
    (alpha * v).sin() / v.cos().powf(1.0 / alpha)
        * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Kanter draw with Laplace transform `E e^{-λA} = e^{-λ^a}`, `0 < a < 1`.
pub fn positive_stable<R: Rng>(rng: &mut R, a: f64) -> f64 {
    let u = std::f64::consts::PI * rng.random::<f64>();
    let w: f64 = Exp1.sample(rng);
    let k =
        ((1.0 - a) * u).sin() * (a * u).sin().powf(a / (1.0 - a)) / u.sin().powf(1.0 / (1.0 - a));
    (k / w).powf((1.0 - a) / a)
}
