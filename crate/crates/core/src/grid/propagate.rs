use std::collections::BTreeMap;

use rayon::prelude::*;

use super::fft::SpectralOps;
use super::field::Field;
use super::mesh::Grid;
use crate::error::{invalid, Error, Result};
use crate::levy::LevySymbol;
use crate::potentials::Potential;
use crate::scalar::Real;

/// Relative size below which negative values are treated as FFT ringing and clipped.
pub const RINGING_TOL: f64 = 1e-12;

/// `ψ(ξ_k)` tabulated on the frequency slots of a grid, with the planned transforms.
#[derive(Debug, Clone)]
pub struct SymbolTable<T: Real> {
    pub grid: Grid<T>,
    pub psi: Vec<T>,
    /// diffusion coefficient when the symbol is exactly `a|ξ|²`
    pub pure_diffusion: Option<T>,
    pub ops: SpectralOps<T>,
}

impl<T: Real> SymbolTable<T> {
    pub fn new(symbol: &LevySymbol<T>, grid: Grid<T>) -> Result<Self> {
        if symbol.dim() != grid.dim {
            return Err(Error::GridMismatch(format!(
                "symbol in d={} on a d={} grid",
                symbol.dim(),
                grid.dim
            )));
        }
        // ψ is radial, so evaluate once per distinct Σ k_i²
        let mut idx = vec![0; grid.dim];
        let keys: Vec<u64> = (0..grid.len())
            .map(|flat| {
                grid.multi_index(flat, &mut idx);
                idx.iter()
                    .map(|&k| grid.signed_index(k).pow(2) as u64)
                    .sum()
            })
            .collect();
        let mut distinct: Vec<u64> = keys.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let values = distinct
            .par_iter()
            .map(|&s| symbol.eval_radial(T::lit((s as f64).sqrt()) * grid.dk()))
            .collect::<Result<Vec<T>>>()?;
        let cache: BTreeMap<u64, T> = distinct.into_iter().zip(values).collect();
        let psi = keys.iter().map(|s| cache[s]).collect();
        let pure_diffusion = symbol.is_pure_diffusion().then(|| symbol.diffusion());
        Ok(Self {
            grid,
            psi,
            pure_diffusion,
            ops: SpectralOps::new(grid),
        })
    }

    /// `ψ` at the largest resolved frequency along an axis.
    pub fn psi_at_max_frequency(&self) -> T {
        let stride = self.grid.n.pow(self.grid.dim as u32 - 1);
        self.psi[(self.grid.n / 2 - 1) * stride]
    }

    /// Multiplier `e^{-tψ}`.
    pub fn decay(&self, t: T) -> Vec<T> {
        self.psi.iter().map(|&p| (-t * p).exp()).collect()
    }
}

/// Clip negative values of magnitude at most `RINGING_TOL · max`; larger negatives are an error.
pub fn ringing_guard<T: Real>(values: &mut [T]) -> Result<()> {
    let max = values.iter().copied().fold(T::zero(), T::max);
    let min = values.iter().copied().fold(T::zero(), T::min);
    if min < T::zero() {
        if -min > T::lit(RINGING_TOL) * max {
            return Err(Error::Ringing {
                ratio: (min / max).as_f64(),
            });
        }
        values.iter_mut().for_each(|v| *v = v.max(T::zero()));
    }
    Ok(())
}

/// `L f = F^{-1}[-ψ F f]`.
pub fn apply_generator<T: Real>(f: &Field<T>, table: &SymbolTable<T>) -> Result<Field<T>> {
    check_grid(&f.grid, &table.grid)?;
    let neg: Vec<T> = table.psi.iter().map(|&p| -p).collect();
    let (values, _) = table.ops.apply_multiplier(&f.values, &neg);
    Ok(Field {
        grid: f.grid,
        values,
        label: format!("L[{}]", f.label),
        time: f.time,
    })
}

/// `H f = -L f + V f`.
pub fn apply_hamiltonian<T: Real>(
    f: &Field<T>,
    table: &SymbolTable<T>,
    v: &[T],
) -> Result<Field<T>> {
    check_grid(&f.grid, &table.grid)?;
    let (mut values, _) = table.ops.apply_multiplier(&f.values, &table.psi);
    values
        .iter_mut()
        .zip(v)
        .zip(&f.values)
        .for_each(|((h, &vi), &fi)| *h += vi * fi);
    Ok(Field {
        grid: f.grid,
        values,
        label: format!("H[{}]", f.label),
        time: f.time,
    })
}

/// Transition density `p(t, ·)` centred at the origin, by Fourier inversion of `e^{-tψ}`.
pub fn heat_kernel<T: Real>(table: &SymbolTable<T>, t: T) -> Result<Field<T>> {
    if !(t > T::zero()) {
        return Err(invalid("t", "time must be positive"));
    }
    let tail = (-t * table.psi_at_max_frequency()).exp();
    if tail > T::lit(1e-12) {
        return Err(Error::Aliasing {
            tail: tail.as_f64(),
        });
    }
    let grid = table.grid;
    // continuous kernel = (2R)^{-d} Σ_k e^{-tψ_k} e^{iξ_k·x}; the node at index N/2 is the origin
    let mut spec: Vec<rustfft::num_complex::Complex<T>> = Vec::with_capacity(grid.len());
    let mut idx = vec![0; grid.dim];
    let cell = grid.cell();
    for (flat, &p) in table.psi.iter().enumerate() {
        grid.multi_index(flat, &mut idx);
        // shift by N/2 in every axis: e^{iπ k} = (-1)^k
        let parity: usize = idx.iter().sum();
        let sign = if parity.is_multiple_of(2) {
            T::one()
        } else {
            -T::one()
        };
        spec.push(rustfft::num_complex::Complex::new(
            sign * (-t * p).exp() / cell,
            T::zero(),
        ));
    }
    let (mut values, _) = table.ops.inverse(spec);
    ringing_guard(&mut values)?;
    Ok(Field {
        grid,
        values,
        label: "heat_kernel".into(),
        time: Some(t),
    })
}

/// Free step of the splitting scheme.
#[derive(Debug, Clone)]
enum FreeStep<T> {
    Multiplier(Vec<T>),
    /// per-axis positive convolution weights for offsets `-J..=J`
    Gaussian(Vec<T>),
}

/// One Strang step `e^{-Δt V/2} e^{-Δt ψ} e^{-Δt V/2}`, reusable across steps.
#[derive(Debug, Clone)]
pub struct StrangStep<'a, T: Real> {
    table: &'a SymbolTable<T>,
    half_v: Vec<T>,
    free: FreeStep<T>,
    pub dt: T,
}

fn gaussian_weights<T: Real>(grid: &Grid<T>, a: T, dt: T) -> Vec<T> {
    let h = grid.h().as_f64();
    let var4 = 4.0 * a.as_f64() * dt.as_f64();
    let n = grid.n;
    // weights below e^{-140} of the centre are dropped
    let reach = ((var4 * 140.0).sqrt() / h).ceil() as usize;
    let j_max = reach.min(n / 2);
    let period = 2.0 * grid.r_box.as_f64();
    let images: i64 = if j_max == n / 2 { 3 } else { 0 };
    let mut w: Vec<f64> = (-(j_max as i64)..=j_max as i64)
        .map(|j| {
            if j_max == n / 2 && j == j_max as i64 {
                // offsets ±N/2 coincide on the periodic grid
                return 0.0;
            }
            (-images..=images)
                .map(|m| {
                    let x = j as f64 * h + m as f64 * period;
                    (-x * x / var4).exp()
                })
                .sum()
        })
        .collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
    w.into_iter().map(T::lit).collect()
}

fn convolve_axes<T: Real>(grid: &Grid<T>, values: &mut [T], weights: &[T]) {
    let n = grid.n;
    let j_max = (weights.len() / 2) as i64;
    let mut line = vec![T::zero(); n];
    let mut out = vec![T::zero(); n];
    for axis in 0..grid.dim {
        let stride = n.pow((grid.dim - 1 - axis) as u32);
        let block = stride * n;
        for base in (0..values.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = values[start + j * stride];
                }
                for (i, o) in out.iter_mut().enumerate() {
                    let mut acc = T::zero();
                    for (w, j) in weights.iter().zip(-j_max..=j_max) {
                        let src = (i as i64 - j).rem_euclid(n as i64) as usize;
                        acc += *w * line[src];
                    }
                    *o = acc;
                }
                for (j, slot) in out.iter().enumerate() {
                    values[start + j * stride] = *slot;
                }
            }
        }
    }
}

impl<'a, T: Real> StrangStep<'a, T> {
    pub fn new(table: &'a SymbolTable<T>, v: &[T], dt: T) -> Result<Self> {
        if !(dt > T::zero()) {
            return Err(invalid("dt", "time step must be positive"));
        }
        if v.len() != table.grid.len() {
            return Err(Error::GridMismatch(
                "potential values do not match the grid".into(),
            ));
        }
        let half = dt / T::lit(2.0);
        let half_v = v.iter().map(|&vi| (-half * vi).exp()).collect();
        let free = match table.pure_diffusion {
            Some(a) => FreeStep::Gaussian(gaussian_weights(&table.grid, a, dt)),
            None => FreeStep::Multiplier(table.decay(dt)),
        };
        Ok(Self {
            table,
            half_v,
            free,
            dt,
        })
    }

    pub fn apply(&self, values: &mut Vec<T>) -> Result<()> {
        values
            .iter_mut()
            .zip(&self.half_v)
            .for_each(|(f, &w)| *f *= w);
        match &self.free {
            FreeStep::Multiplier(m) => {
                let (out, _) = self.table.ops.apply_multiplier(values, m);
                *values = out;
            }
            FreeStep::Gaussian(w) => convolve_axes(&self.table.grid, values, w),
        }
        values
            .iter_mut()
            .zip(&self.half_v)
            .for_each(|(f, &w)| *f *= w);
        ringing_guard(values)
    }
}

/// Potential values on the nodes.
pub fn potential_on_grid<T: Real>(pot: &Potential<T>, grid: &Grid<T>) -> Vec<T> {
    (0..grid.len()).map(|i| pot.eval(&grid.point(i))).collect()
}

/// `T_t f ≈ (e^{-Δt V/2} e^{-Δt ψ} e^{-Δt V/2})^{steps} f`.
pub fn propagate_semigroup<T: Real>(
    f: &Field<T>,
    table: &SymbolTable<T>,
    pot: &Potential<T>,
    t: T,
    steps: usize,
) -> Result<Field<T>> {
    check_grid(&f.grid, &table.grid)?;
    if steps == 0 {
        return Err(invalid("steps", "need at least one step"));
    }
    if !(t > T::zero()) {
        return Err(invalid("t", "time must be positive"));
    }
    let v = potential_on_grid(pot, &f.grid);
    let step = StrangStep::new(table, &v, t / T::from_usize_lossy(steps))?;
    let mut values = f.values.clone();
    for _ in 0..steps {
        step.apply(&mut values)?;
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonConvergence {
            iterations: steps,
            reason: "overflow during propagation".into(),
        });
    }
    Ok(Field {
        grid: f.grid,
        values,
        label: format!("T_t[{}]", f.label),
        time: Some(t),
    })
}

pub(crate) fn check_grid<T: Real>(a: &Grid<T>, b: &Grid<T>) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch(
            "field and symbol table live on different grids".into(),
        ));
    }
    Ok(())
}
