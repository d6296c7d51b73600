use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::field::Field;
use super::mesh::Grid;
use super::propagate::{potential_on_grid, SymbolTable};
use crate::error::{Error, Result};
use crate::potentials::Potential;
use crate::scalar::Real;

/// Largest grid accepted by the dense eigensolver.
pub const DENSE_CAP: usize = 1024;

/// Two lowest eigenpairs of the dense Hamiltonian matrix.
#[derive(Debug, Clone, Serialize)]
pub struct DenseSpectrum {
    pub lambda0: f64,
    pub lambda1: f64,
    pub phi0: Field<f64>,
    /// `max |H_ij - H_ji|`
    pub asymmetry: f64,
}

/// Node-basis matrix of the Fourier multiplier `ψ` (the generator `L` is its negative).
pub fn multiplier_matrix<T: Real>(table: &SymbolTable<T>) -> Result<DMatrix<f64>> {
    let grid = table.grid;
    if grid.dim != 1 {
        return Err(Error::Precondition(
            "dense matrices are one-dimensional".into(),
        ));
    }
    let n = grid.n;
    if n > DENSE_CAP {
        return Err(Error::SizeCap(format!("N = {n} exceeds {DENSE_CAP}")));
    }
    // circulant first column c_m = (1/N) Σ_k ψ_k e^{2πikm/N}
    let spec = table
        .psi
        .iter()
        .map(|&p| rustfft::num_complex::Complex::new(p, T::zero()))
        .collect();
    let (col, _) = table.ops.inverse(spec);
    let col: Vec<f64> = col.into_iter().map(|c| c.as_f64()).collect();
    Ok(DMatrix::from_fn(n, n, |i, j| col[(i + n - j) % n]))
}

/// `H = ψ(-i∇) + V` as a dense matrix.
pub fn hamiltonian_matrix<T: Real>(
    table: &SymbolTable<T>,
    pot: &Potential<T>,
) -> Result<DMatrix<f64>> {
    let mut h = multiplier_matrix(table)?;
    for (i, v) in potential_on_grid(pot, &table.grid).into_iter().enumerate() {
        h[(i, i)] += v.as_f64();
    }
    Ok(h)
}

/// Independent eigen-oracle: dense symmetric eigendecomposition of `H`.
pub fn dense_oracle<T: Real>(table: &SymbolTable<T>, pot: &Potential<T>) -> Result<DenseSpectrum> {
    let h = hamiltonian_matrix(table, pot)?;
    let n = h.nrows();
    let mut asymmetry = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            asymmetry = asymmetry.max((h[(i, j)] - h[(j, i)]).abs());
        }
    }
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let (i0, i1) = (order[0], order[1]);
    let g = table.grid;
    let grid = Grid::new(1, g.r_box.as_f64(), g.n)?;
    let mut phi: Vec<f64> = eig.eigenvectors.column(i0).iter().copied().collect();
    let sum: f64 = phi.iter().sum();
    let norm = (grid.h() * phi.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let sign = if sum < 0.0 { -1.0 } else { 1.0 };
    phi.iter_mut().for_each(|x| *x *= sign / norm);
    Ok(DenseSpectrum {
        lambda0: eig.eigenvalues[i0],
        lambda1: eig.eigenvalues[i1],
        phi0: Field::new(grid, phi, "phi0_dense")?,
        asymmetry,
    })
}
