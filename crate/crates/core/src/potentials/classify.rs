use serde::Serialize;

use super::potential::Potential;
use crate::error::{invalid, Error, Result};
use crate::levy::{JumpProfile, LevyModel};
use crate::scalar::Real;

/// Asymptotic behaviour of `V / |log ν|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioLimit {
    TendsToInfinity,
    BoundedBelowPositive,
    TendsToZero,
    OscillatesUnknown,
}

/// Contractivity classification of a (potential, model) pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractivityVerdict {
    /// `L^p`-GSD for every p, equivalently ISC and IUC
    pub gsd_all_p: bool,
    /// `L^p`-AGSD for every p, equivalently IHC and AIUC
    pub agsd_all_p: bool,
    pub limit: RatioLimit,
    /// `(C, R)` with `V ≥ C |log ν|` sampled on `|x| ≥ R`
    pub witness: Option<(f64, f64)>,
}

/// `V(x) / |log ν(x)|` for `|x| ≥ 2`.
pub fn borderline_ratio<T: Real>(pot: &Potential<T>, model: &LevyModel<T>, x: &[T]) -> Result<T> {
    if !(crate::scalar::norm(x) >= T::lit(2.0)) {
        return Err(invalid("x", "borderline ratio needs |x| >= 2"));
    }
    let nu = model.eval_density(x)?;
    if nu >= T::one() {
        return Err(invalid("x", "density is not below 1 at this point"));
    }
    Ok(pot.eval(x) / nu.ln().abs())
}

fn check_profile<T: Real>(profile: &JumpProfile<T>) -> Result<()> {
    if !profile.is_jump_paring_family() {
        return Err(Error::Precondition(format!(
            "profile {} is outside the jump-paring class",
            profile.describe()
        )));
    }
    Ok(())
}

/// Symbolic comparison of the growth orders of `V` and `|log ν|`.
pub fn classify_contractivity<T: Real>(
    pot: &Potential<T>,
    model: &LevyModel<T>,
) -> Result<ContractivityVerdict> {
    let profile = model
        .profile()
        .ok_or_else(|| Error::Precondition("model has no jump part".into()))?;
    check_profile(profile)?;
    let Some(v_order) = pot.growth_order() else {
        return Ok(ContractivityVerdict {
            gsd_all_p: false,
            agsd_all_p: false,
            limit: RatioLimit::OscillatesUnknown,
            witness: None,
        });
    };
    if v_order.lex_sign() < 0 {
        return Err(Error::Precondition(
            "potential is not eventually non-decreasing".into(),
        ));
    }
    let diff = v_order.sub(&profile.log_decay_order());
    let verdict = match diff.lex_sign() {
        1 => ContractivityVerdict {
            gsd_all_p: true,
            agsd_all_p: true,
            limit: RatioLimit::TendsToInfinity,
            witness: None,
        },
        0 => {
            let radius = 10.0;
            let dim = model.dim;
            let c = (0..12)
                .map(|j| {
                    let mut x = vec![T::zero(); dim];
                    x[0] = T::lit(radius * 2f64.powi(j));
                    borderline_ratio(pot, model, &x).map(|v| v.as_f64())
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            ContractivityVerdict {
                gsd_all_p: false,
                agsd_all_p: true,
                limit: RatioLimit::BoundedBelowPositive,
                witness: Some((c, radius)),
            }
        }
        _ => ContractivityVerdict {
            gsd_all_p: false,
            agsd_all_p: false,
            limit: RatioLimit::TendsToZero,
            witness: None,
        },
    };
    Ok(verdict)
}
