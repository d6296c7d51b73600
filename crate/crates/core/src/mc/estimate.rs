use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::sampler::{IncrementSampler, McConfig};
use crate::error::{invalid, Result};
use crate::levy::LevyModel;
use crate::potentials::Potential;
use crate::scalar::Real;

/// Independent stream for path `index`: same seed, stream id = path index.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Number of steps covering `[0, t]`; the step is `t / steps`.
pub fn step_count(t: f64, dt: f64) -> Result<usize> {
    if !(t > 0.0) {
        return Err(invalid("t", "time must be positive"));
    }
    Ok(((t / dt).round() as usize).max(1))
}

/// Mean and standard error of a Monte Carlo sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleStats {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

impl SampleStats {
    /// Two-pass statistics shifted by the first sample, so constant samples give exact zero error.
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        let shift = xs[0];
        let mean = shift + xs.iter().map(|x| x - shift).sum::<f64>() / n as f64;
        let var = if n > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        let stderr = if xs.iter().all(|&x| x == shift) {
            0.0
        } else {
            (var / n as f64).sqrt()
        };
        let mean = if stderr == 0.0 { shift } else { mean };
        Self { mean, stderr, n }
    }
}

/// Feynman-Kac estimate record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub model: String,
    pub potential: String,
    pub x0: Vec<f64>,
    pub t: f64,
    pub mean: f64,
    pub stderr: f64,
    pub n_paths: usize,
    pub dt: f64,
    pub epsilon: f64,
    pub seed: u64,
}

/// Positions `X_0 = x0, X_dt, …, X_t`.
pub fn simulate_path<T: Real>(
    model: &LevyModel<T>,
    x0: &[T],
    t: f64,
    cfg: &McConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Vec<T>>> {
    check_point(model, x0)?;
    let steps = step_count(t, cfg.dt)?;
    let sampler = IncrementSampler::new(model, t / steps as f64, cfg)?;
    let mut x: Vec<f64> = x0.iter().map(|v| v.as_f64()).collect();
    let mut path = Vec::with_capacity(steps + 1);
    path.push(x0.to_vec());
    for _ in 0..steps {
        sampler.step(rng, &mut x);
        path.push(x.iter().map(|&v| T::lit(v)).collect());
    }
    Ok(path)
}

fn check_point<T: Real>(model: &LevyModel<T>, x0: &[T]) -> Result<()> {
    if x0.len() != model.dim {
        return Err(invalid(
            "x0",
            format!("expected a point in dimension {}", model.dim),
        ));
    }
    Ok(())
}

/// `exp(-Σ_k V(X_{k·dt}) dt)` for every potential, on common paths, at each refinement level.
///
/// Paths are simulated at the finest step `cfg.dt`; level `j` uses every `2^j`-th node with step
/// `2^j · dt`. Result is indexed `[level][potential][path]`.
fn functionals<T: Real>(
    model: &LevyModel<T>,
    pots: &[&Potential<T>],
    x0: &[T],
    t: f64,
    cfg: &McConfig,
    levels: usize,
) -> Result<Vec<Vec<Vec<f64>>>> {
    check_point(model, x0)?;
    let steps = step_count(t, cfg.dt)?;
    let coarsest = 1usize << (levels - 1);
    if steps % coarsest != 0 {
        return Err(invalid(
            "dt",
            "step count must be divisible by 2^(levels-1)",
        ));
    }
    let dt = t / steps as f64;
    let sampler = IncrementSampler::new(model, dt, cfg)?;
    let start: Vec<f64> = x0.iter().map(|v| v.as_f64()).collect();
    let per_path: Vec<Vec<f64>> = (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i);
            let mut x = start.clone();
            let mut point = vec![T::zero(); x.len()];
            // integrals[level * pots + p]
            let mut integrals = vec![0.0; levels * pots.len()];
            for k in 0..steps {
                for (slot, xi) in point.iter_mut().zip(&x) {
                    *slot = T::lit(*xi);
                }
                for (p, pot) in pots.iter().enumerate() {
                    let v = pot.eval(&point).as_f64();
                    for level in 0..levels {
                        let stride = 1usize << level;
                        if k % stride == 0 {
                            integrals[level * pots.len() + p] += v * dt * stride as f64;
                        }
                    }
                }
                sampler.step(&mut rng, &mut x);
            }
            integrals.into_iter().map(|s| (-s).exp()).collect()
        })
        .collect();
    Ok((0..levels)
        .map(|level| {
            (0..pots.len())
                .map(|p| {
                    per_path
                        .iter()
                        .map(|row| row[level * pots.len() + p])
                        .collect()
                })
                .collect()
        })
        .collect())
}

fn record<T: Real>(
    model: &LevyModel<T>,
    pot: &Potential<T>,
    x0: &[T],
    t: f64,
    cfg: &McConfig,
    dt: f64,
    xs: &[f64],
) -> McEstimate {
    let s = SampleStats::from_samples(xs);
    McEstimate {
        model: model.id.clone(),
        potential: pot.describe(),
        x0: x0.iter().map(|v| v.as_f64()).collect(),
        t,
        mean: s.mean,
        stderr: s.stderr,
        n_paths: s.n,
        dt,
        epsilon: cfg.epsilon,
        seed: cfg.seed,
    }
}

/// Monte Carlo estimate of `T_t 1(x0) = E^{x0}[exp(-∫_0^t V(X_s) ds)]`.
pub fn fk_estimate<T: Real>(
    model: &LevyModel<T>,
    pot: &Potential<T>,
    x0: &[T],
    t: f64,
    cfg: &McConfig,
) -> Result<McEstimate> {
    Ok(fk_estimate_common(model, &[pot], x0, t, cfg)?.remove(0))
}

/// Estimates for several potentials on the same simulated paths.
pub fn fk_estimate_common<T: Real>(
    model: &LevyModel<T>,
    pots: &[&Potential<T>],
    x0: &[T],
    t: f64,
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    let values = functionals(model, pots, x0, t, cfg, 1)?;
    let dt = t / step_count(t, cfg.dt)? as f64;
    Ok(pots
        .iter()
        .zip(&values[0])
        .map(|(pot, xs)| record(model, pot, x0, t, cfg, dt, xs))
        .collect())
}

/// Estimates with steps `dt, 2dt, …, 2^{levels-1} dt` on common paths, finest first.
pub fn fk_refinement<T: Real>(
    model: &LevyModel<T>,
    pot: &Potential<T>,
    x0: &[T],
    t: f64,
    cfg: &McConfig,
    levels: usize,
) -> Result<Vec<McEstimate>> {
    if levels == 0 {
        return Err(invalid("levels", "need at least one level"));
    }
    let values = functionals(model, &[pot], x0, t, cfg, levels)?;
    let dt = t / step_count(t, cfg.dt)? as f64;
    Ok(values
        .iter()
        .enumerate()
        .map(|(level, v)| record(model, pot, x0, t, cfg, dt * (1u64 << level) as f64, &v[0]))
        .collect())
}

/// Positions `X_t` of `cfg.n_paths` independent paths started at `x0`.
pub fn sample_endpoints<T: Real>(
    model: &LevyModel<T>,
    x0: &[T],
    t: f64,
    cfg: &McConfig,
) -> Result<Vec<Vec<f64>>> {
    check_point(model, x0)?;
    let steps = step_count(t, cfg.dt)?;
    let sampler = IncrementSampler::new(model, t / steps as f64, cfg)?;
    let start: Vec<f64> = x0.iter().map(|v| v.as_f64()).collect();
    Ok((0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(cfg.seed, i);
            let mut x = start.clone();
            for _ in 0..steps {
                sampler.step(&mut rng, &mut x);
            }
            x
        })
        .collect())
}
