//! Periodic-box discretisation of `H = ψ(-i∇) + V`: heat kernels, splitting propagation,
//! ground states and a dense eigen-oracle.

pub mod dense;
pub mod fft;
pub mod field;
pub mod ground_state;
pub mod io;
pub mod mesh;
pub mod propagate;

pub use dense::{dense_oracle, hamiltonian_matrix, multiplier_matrix, DenseSpectrum};
pub use fft::SpectralOps;
pub use field::Field;
pub use ground_state::{ground_state, ground_state_with, GroundStateOptions, SpectralResult};
pub use mesh::Grid;
pub use propagate::{
    apply_generator, apply_hamiltonian, heat_kernel, potential_on_grid, propagate_semigroup,
    ringing_guard, StrangStep, SymbolTable,
};
