use serde::Serialize;

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Uniform periodic box `[-R, R)^d` with `N` nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid<T> {
    pub dim: usize,
    pub r_box: T,
    pub n: usize,
}

impl<T: Real> Grid<T> {
    pub fn new(dim: usize, r_box: T, n: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("d", "dimension must be at least 1"));
        }
        if !(r_box > T::zero()) || !r_box.is_finite() {
            return Err(invalid("r_box", "box half-width must be positive"));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(invalid(
                "n",
                "nodes per axis must be a power of two, at least 8",
            ));
        }
        if n.checked_pow(dim as u32)
            .is_none_or(|total| total > 1 << 28)
        {
            return Err(invalid("n", "grid has too many nodes"));
        }
        Ok(Self { dim, r_box, n })
    }

    /// Spacing `h = 2R/N`.
    pub fn h(&self) -> T {
        T::lit(2.0) * self.r_box / T::from_usize_lossy(self.n)
    }

    /// Cell volume `h^d`.
    pub fn cell(&self) -> T {
        self.h().powi(self.dim as i32)
    }

    /// Total node count `N^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `x_j = -R + j h`.
    pub fn coord(&self, j: usize) -> T {
        -self.r_box + T::from_usize_lossy(j) * self.h()
    }

    pub fn coords(&self) -> Vec<T> {
        (0..self.n).map(|j| self.coord(j)).collect()
    }

    /// Per-axis indices of a row-major flat index (last axis fastest).
    pub fn multi_index(&self, mut flat: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = flat % self.n;
            flat /= self.n;
        }
    }

    /// Node coordinates of a flat index.
    pub fn point(&self, flat: usize) -> Vec<T> {
        let mut idx = vec![0; self.dim];
        self.multi_index(flat, &mut idx);
        idx.into_iter().map(|j| self.coord(j)).collect()
    }

    /// Signed discrete frequency index of FFT slot `k`: `0, 1, …, N/2-1, -N/2, …, -1`.
    pub fn signed_index(&self, k: usize) -> i64 {
        if k < self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    /// Fundamental frequency `2π / (2R)`.
    pub fn dk(&self) -> T {
        T::PI() / self.r_box
    }

    /// `ξ_k` for FFT slot `k`; the Nyquist slot is `-π/h`.
    pub fn frequency(&self, k: usize) -> T {
        T::lit(self.signed_index(k) as f64) * self.dk()
    }

    /// Largest positive resolved frequency `π/h · (1 - 2/N)`.
    pub fn max_resolved_frequency(&self) -> T {
        T::PI() / self.h() * (T::one() - T::lit(2.0) / T::from_usize_lossy(self.n))
    }

    /// `|ξ|` at every flat frequency slot, row-major like the nodes.
    pub fn frequency_norms(&self) -> Vec<T> {
        let mut idx = vec![0; self.dim];
        (0..self.len())
            .map(|flat| {
                self.multi_index(flat, &mut idx);
                let s: i64 = idx.iter().map(|&k| self.signed_index(k).pow(2)).sum();
                T::lit(s as f64).sqrt() * self.dk()
            })
            .collect()
    }

    /// Flat indices of nodes with `|x| ≤ fraction · R`.
    pub fn window(&self, fraction: T) -> Vec<usize> {
        let limit = fraction * self.r_box;
        (0..self.len())
            .filter(|&flat| crate::scalar::norm(&self.point(flat)) <= limit)
            .collect()
    }
}
