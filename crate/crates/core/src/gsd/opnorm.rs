use serde::Serialize;

use super::ratio::{window_nodes, Exponent};
use crate::error::{invalid, Result};
use crate::grid::{potential_on_grid, SpectralResult, StrangStep, SymbolTable};
use crate::potentials::Potential;
use crate::scalar::Real;

/// Lower estimate of an operator norm from the nonlinear power method.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

fn lp(w: &[f64], f: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return f.iter().fold(0.0, |a, x| a.max(x.abs()));
    }
    let scale = f.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale
        * w.iter()
            .zip(f)
            .map(|(wi, x)| wi * (x.abs() / scale).powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
}

/// `‖K‖_{L²(w) → L^p(w)}` for `K` self-adjoint in `L²(w)`, `w` a probability vector, `2 ≤ p < ∞`.
///
/// Boyd's iteration `f ← K J_p(K f)`, renormalised in `L²(w)`, from each start; the largest value wins.
pub fn mixed_norm_power(
    apply: &dyn Fn(&[f64]) -> Result<Vec<f64>>,
    weights: &[f64],
    p: f64,
    starts: &[Vec<f64>],
    tol: f64,
    max_iter: usize,
) -> Result<NormEstimate> {
    if !(p >= 2.0 && p.is_finite()) {
        return Err(invalid("p", "mixed-norm power method needs 2 <= p < inf"));
    }
    let mut best = NormEstimate {
        value: 0.0,
        converged: true,
        iterations: 0,
    };
    for start in starts {
        let mut f = start.clone();
        let n2 = lp(weights, &f, 2.0);
        f.iter_mut().for_each(|x| *x /= n2);
        let mut value = 0.0;
        let mut converged = false;
        let mut iterations = 0;
        while iterations < max_iter {
            iterations += 1;
            let g = apply(&f)?;
            let next = lp(weights, &g, p);
            let done = value > 0.0 && (next - value).abs() <= tol * next;
            value = value.max(next);
            if done {
                converged = true;
                break;
            }
            let scale = g.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            if scale == 0.0 {
                converged = true;
                break;
            }
            let dual: Vec<f64> = g
                .iter()
                .map(|x| x.signum() * (x.abs() / scale).powf(p - 1.0))
                .collect();
            let k = apply(&dual)?;
            let n2 = lp(weights, &k, 2.0);
            if n2 == 0.0 {
                converged = true;
                break;
            }
            f = k.into_iter().map(|x| x / n2).collect();
        }
        if value > best.value {
            best = NormEstimate {
                value,
                converged,
                iterations,
            };
        }
        best.converged &= converged;
    }
    Ok(best)
}

/// Starting vectors: the constant and point masses at the window centre, middle and edge.
fn starts(len: usize, marks: &[usize]) -> Vec<Vec<f64>> {
    let mut out = vec![vec![1.0; len]];
    for &m in marks {
        let mut v = vec![0.0; len];
        v[m] = 1.0;
        out.push(v);
    }
    out
}

/// `C_{2,p,t} = ‖e^{-tH̃}‖_{L²(μ)→L^p(μ)}` for the ground-state transformed semigroup restricted to the window.
pub fn intrinsic_norm_2p<T: Real>(
    spec: &SpectralResult<T>,
    table: &SymbolTable<T>,
    pot: &Potential<T>,
    t: f64,
    p: Exponent,
    window: f64,
    dt: f64,
) -> Result<NormEstimate> {
    if p.is_infinite() {
        return Err(invalid("p", "p must be finite"));
    }
    if !(t >= 0.0) {
        return Err(invalid("t", "time must be non-negative"));
    }
    let phi = &spec.phi0;
    let nodes = window_nodes(phi, T::lit(window))?;
    let phi_w: Vec<f64> = nodes.iter().map(|&i| phi.values[i].as_f64()).collect();
    let z: f64 = phi_w.iter().map(|x| x * x).sum();
    let weights: Vec<f64> = phi_w.iter().map(|x| x * x / z).collect();
    let grid = phi.grid;
    let v = potential_on_grid(pot, &grid);
    let steps = if t > 0.0 { (t / dt).ceil() as usize } else { 0 };
    let step = if steps > 0 {
        Some(StrangStep::new(table, &v, T::lit(t / steps as f64))?)
    } else {
        None
    };
    let shift = (spec.lambda0.as_f64() * t).exp();
    let apply = |f: &[f64]| -> Result<Vec<f64>> {
        let Some(step) = &step else {
            return Ok(f.to_vec());
        };
        let mut full = vec![T::zero(); grid.len()];
        for ((&i, &fi), &pi) in nodes.iter().zip(f).zip(&phi_w) {
            full[i] = T::lit(fi * pi);
        }
        for _ in 0..steps {
            step.apply(&mut full)?;
        }
        Ok(nodes
            .iter()
            .zip(&phi_w)
            .map(|(&i, &pi)| shift * full[i].as_f64() / pi)
            .collect())
    };
    let len = nodes.len();
    let edge = (0..len)
        .min_by(|&a, &b| phi_w[a].total_cmp(&phi_w[b]))
        .unwrap_or(0);
    let centre = (0..len)
        .max_by(|&a, &b| phi_w[a].total_cmp(&phi_w[b]))
        .unwrap_or(0);
    let middle = (0..len)
        .min_by(|&a, &b| {
            let target = (phi_w[edge] * phi_w[centre]).sqrt();
            (phi_w[a] - target)
                .abs()
                .total_cmp(&(phi_w[b] - target).abs())
        })
        .unwrap_or(0);
    mixed_norm_power(
        &apply,
        &weights,
        p.0,
        &starts(len, &[centre, middle, edge]),
        1e-8,
        500,
    )
}
