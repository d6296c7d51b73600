use serde::Serialize;

use super::mesh::Grid;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Real values on the nodes of a grid, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Field<T> {
    pub grid: Grid<T>,
    pub values: Vec<T>,
    pub label: String,
    pub time: Option<T>,
}

impl<T: Real> Field<T> {
    pub fn new(grid: Grid<T>, values: Vec<T>, label: &str) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Precondition(format!(
                "field '{label}' has non-finite values"
            )));
        }
        Ok(Self {
            grid,
            values,
            label: label.to_string(),
            time: None,
        })
    }

    pub fn constant(grid: Grid<T>, c: T, label: &str) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
            label: label.to_string(),
            time: None,
        }
    }

    /// Sample `f` at every node.
    pub fn from_fn(grid: Grid<T>, label: &str, f: impl Fn(&[T]) -> T) -> Self {
        let values = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        Self {
            grid,
            values,
            label: label.to_string(),
            time: None,
        }
    }

    pub fn with_time(mut self, t: T) -> Self {
        self.time = Some(t);
        self
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    /// `h^d Σ f`.
    pub fn mass(&self) -> T {
        self.grid.cell() * self.values.iter().fold(T::zero(), |a, &v| a + v)
    }

    /// Discrete `L²` norm `(h^d Σ f²)^{1/2}`.
    pub fn l2_norm(&self) -> T {
        (self.grid.cell() * self.values.iter().fold(T::zero(), |a, &v| a + v * v)).sqrt()
    }

    /// `h^d Σ f g`.
    pub fn dot(&self, other: &Self) -> T {
        self.grid.cell()
            * self
                .values
                .iter()
                .zip(&other.values)
                .fold(T::zero(), |a, (&x, &y)| a + x * y)
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn scale(&mut self, c: T) {
        self.values.iter_mut().for_each(|v| *v *= c);
    }

    /// Value at the node closest to `x`.
    pub fn value_near(&self, x: &[T]) -> T {
        let g = &self.grid;
        let mut flat = 0;
        for &xi in x {
            let j = ((xi + g.r_box) / g.h())
                .round()
                .to_i64()
                .unwrap_or(0)
                .rem_euclid(g.n as i64) as usize;
            flat = flat * g.n + j;
        }
        self.values[flat]
    }
}
