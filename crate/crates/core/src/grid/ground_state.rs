use serde::Serialize;

use super::field::Field;
use super::propagate::{apply_hamiltonian, potential_on_grid, StrangStep, SymbolTable};
use crate::error::{invalid, Error, Result};
use crate::potentials::Potential;
use crate::scalar::Real;

/// Lowest eigenpair of the discretised Hamiltonian.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralResult<T> {
    pub lambda0: T,
    pub phi0: Field<T>,
    /// `‖Hφ₀ - λ₀φ₀‖₂`
    pub residual: T,
    pub iterations: usize,
    /// imaginary-time step in use at convergence
    pub dt: T,
}

/// Iteration controls for [`ground_state_with`].
#[derive(Debug, Clone, Copy)]
pub struct GroundStateOptions<T> {
    pub tol: T,
    pub max_steps: usize,
    /// initial step; defaults to `0.1 / max(1, max V)^{1/2}`
    pub dt0: Option<T>,
    /// imaginary time between convergence checks
    pub check_time: T,
    /// extra imaginary time run after convergence so that the tails of `φ₀` settle in relative terms
    pub polish_time: T,
}

impl<T: Real> GroundStateOptions<T> {
    pub fn new(tol: T) -> Self {
        Self {
            tol,
            max_steps: 4_000_000,
            dt0: None,
            check_time: T::lit(0.25),
            polish_time: T::zero(),
        }
    }
}

pub fn ground_state<T: Real>(
    table: &SymbolTable<T>,
    pot: &Potential<T>,
    tol: T,
) -> Result<SpectralResult<T>> {
    ground_state_with(table, pot, GroundStateOptions::new(tol))
}

fn normalize<T: Real>(f: &mut Field<T>) -> Result<()> {
    let norm = f.l2_norm();
    if !(norm > T::zero()) || !norm.is_finite() {
        return Err(Error::NonConvergence {
            iterations: 0,
            reason: "iterate vanished or overflowed".into(),
        });
    }
    f.scale(T::one() / norm);
    Ok(())
}

/// Rayleigh quotient and residual of a normalised iterate.
fn rayleigh<T: Real>(f: &Field<T>, table: &SymbolTable<T>, v: &[T]) -> Result<(T, T)> {
    let hf = apply_hamiltonian(f, table, v)?;
    let lambda = f.dot(&hf);
    let mut r = hf;
    r.values
        .iter_mut()
        .zip(&f.values)
        .for_each(|(h, &x)| *h -= lambda * x);
    Ok((lambda, r.l2_norm()))
}

/// Imaginary-time power iteration with Strang steps; the step is halved whenever the residual
/// stops improving above `10·tol`.
pub fn ground_state_with<T: Real>(
    table: &SymbolTable<T>,
    pot: &Potential<T>,
    opts: GroundStateOptions<T>,
) -> Result<SpectralResult<T>> {
    let tol = opts.tol;
    if !(tol > T::zero()) {
        return Err(invalid("tol", "tolerance must be positive"));
    }
    let grid = table.grid;
    let v = potential_on_grid(pot, &grid);
    let vmax = v.iter().copied().fold(T::neg_infinity(), T::max);
    let mut dt = opts
        .dt0
        .unwrap_or_else(|| T::lit(0.1) / vmax.max(T::one()).sqrt());
    // a sampled heat kernel narrower than one cell stops diffusing, so pure diffusion keeps dt above that
    let dt_floor = table
        .pure_diffusion
        .map_or(T::zero(), |a| grid.h() * grid.h() / (T::lit(2.0) * a));
    let halve = |dt: T, iterations: usize, residual: T| -> Result<T> {
        if dt <= dt_floor {
            return Err(Error::NonConvergence {
                iterations,
                reason: format!(
                    "residual {} at the smallest step this grid resolves",
                    residual.as_f64()
                ),
            });
        }
        Ok((dt / T::lit(2.0)).max(dt_floor))
    };
    let mut phi = Field::new(
        grid,
        v.iter().map(|&x| T::one() / (T::one() + x.abs())).collect(),
        "phi0",
    )?;
    normalize(&mut phi)?;

    let mut iterations = 0;
    let mut lambda_prev = T::infinity();
    let mut residual_prev = T::infinity();
    let mut flat_checks = 0;
    loop {
        let step = StrangStep::new(table, &v, dt)?;
        let block = (opts.check_time / dt).ceil().to_usize().unwrap_or(1).max(1);
        loop {
            for _ in 0..block {
                step.apply(&mut phi.values)?;
                normalize(&mut phi)?;
            }
            iterations += block;
            let (lambda, residual) = rayleigh(&phi, table, &v)?;
            if !lambda.is_finite() {
                return Err(Error::NonConvergence {
                    iterations,
                    reason: "Rayleigh quotient is not finite".into(),
                });
            }
            let ten_tol = T::lit(10.0) * tol;
            if (lambda - lambda_prev).abs() < tol && residual < ten_tol {
                let polish = (opts.polish_time / dt).ceil().to_usize().unwrap_or(0);
                for _ in 0..polish {
                    step.apply(&mut phi.values)?;
                    normalize(&mut phi)?;
                }
                iterations += polish;
                let (lambda, residual) = if polish > 0 {
                    rayleigh(&phi, table, &v)?
                } else {
                    (lambda, residual)
                };
                if residual >= ten_tol {
                    // the pre-polish check passed transiently; the step size limits the residual
                    flat_checks = 0;
                    lambda_prev = lambda;
                    residual_prev = T::infinity();
                    dt = halve(dt, iterations, residual)?;
                    break;
                }
                let sum = phi.values.iter().fold(T::zero(), |a, &x| a + x);
                if sum < T::zero() {
                    phi.scale(-T::one());
                }
                let mut phi0 = phi.with_time(T::zero());
                phi0.label = "phi0".into();
                super::propagate::ringing_guard(&mut phi0.values)?;
                return Ok(SpectralResult {
                    lambda0: lambda,
                    phi0,
                    residual,
                    iterations,
                    dt,
                });
            }
            if iterations >= opts.max_steps {
                return Err(Error::NonConvergence {
                    iterations,
                    reason: format!("residual {} after the step cap", residual.as_f64()),
                });
            }
            let stalled =
                residual >= ten_tol && (residual_prev - residual).abs() <= T::lit(1e-3) * residual;
            flat_checks = if stalled { flat_checks + 1 } else { 0 };
            lambda_prev = lambda;
            residual_prev = residual;
            if flat_checks >= 2 {
                flat_checks = 0;
                residual_prev = T::infinity();
                dt = halve(dt, iterations, residual)?;
                break;
            }
        }
    }
}
