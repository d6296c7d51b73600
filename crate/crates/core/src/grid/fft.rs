use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::mesh::Grid;
use crate::scalar::Real;

/// Planned forward/inverse `d`-dimensional DFTs for one grid.
#[derive(Clone)]
pub struct SpectralOps<T: Real> {
    pub grid: Grid<T>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for SpectralOps<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralOps")
            .field("grid", &self.grid)
            .finish()
    }
}

impl<T: Real> SpectralOps<T> {
    pub fn new(grid: Grid<T>) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.n);
        let inverse = planner.plan_fft_inverse(grid.n);
        Self {
            grid,
            forward,
            inverse,
        }
    }

    fn transform(&self, data: &mut [Complex<T>], plan: &Arc<dyn Fft<T>>) {
        let n = self.grid.n;
        // last axis is contiguous
        data.par_chunks_mut(n).for_each(|line| plan.process(line));
        let mut line = vec![Complex::new(T::zero(), T::zero()); n];
        for axis in 0..self.grid.dim.saturating_sub(1) {
            let stride = n.pow((self.grid.dim - 1 - axis) as u32);
            let block = stride * n;
            for base in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for (j, slot) in line.iter_mut().enumerate() {
                        *slot = data[start + j * stride];
                    }
                    plan.process(&mut line);
                    for (j, slot) in line.iter().enumerate() {
                        data[start + j * stride] = *slot;
                    }
                }
            }
        }
    }

    /// Unnormalised forward DFT of real nodal values.
    pub fn forward(&self, values: &[T]) -> Vec<Complex<T>> {
        let mut data: Vec<Complex<T>> =
            values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.transform(&mut data, &self.forward);
        data
    }

    /// Inverse DFT scaled by `1/N^d`; returns the real part and the largest imaginary residue.
    pub fn inverse(&self, mut data: Vec<Complex<T>>) -> (Vec<T>, T) {
        self.transform(&mut data, &self.inverse);
        let scale = T::one() / T::from_usize_lossy(data.len());
        let mut residue = T::zero();
        let values = data
            .into_iter()
            .map(|c| {
                residue = residue.max((c.im * scale).abs());
                c.re * scale
            })
            .collect();
        (values, residue)
    }

    /// `F^{-1}[m · F f]` for a real multiplier table `m` in FFT slot order.
    pub fn apply_multiplier(&self, values: &[T], multiplier: &[T]) -> (Vec<T>, T) {
        let mut spec = self.forward(values);
        spec.iter_mut().zip(multiplier).for_each(|(c, &m)| *c *= m);
        self.inverse(spec)
    }
}
