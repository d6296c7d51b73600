use serde::Serialize;

use super::ratio::Exponent;
use super::scan::{gsd_scan, GsdOptions, GsdReport, Verdict};
use crate::error::{Error, Result};
use crate::levy::LevyModel;
use crate::potentials::{classify_contractivity, ContractivityVerdict, Potential};
use crate::scalar::Real;

/// Agreement between the growth-order classifier and a numerical scan.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub classifier: ContractivityVerdict,
    pub scan: GsdReport,
    pub disagreements: Vec<String>,
    /// `(t, p)` pairs with an inconclusive verdict
    pub inconclusive: Vec<(f64, Exponent)>,
    pub agree: bool,
}

pub fn equivalence_consistency<T: Real>(
    model: &LevyModel<T>,
    pot: &Potential<T>,
    t_list: &[f64],
    p_list: &[Exponent],
    box_list: &[f64],
    opts: &GsdOptions,
) -> Result<EquivalenceReport> {
    if model.is_pure_diffusion() {
        return Err(Error::Precondition(
            "the equivalences require a jump model".into(),
        ));
    }
    let classifier = classify_contractivity(pot, model)?;
    let scan = gsd_scan(model, pot, t_list, p_list, box_list, opts)?;
    let mut disagreements = Vec::new();
    let inconclusive: Vec<(f64, Exponent)> = scan
        .verdicts
        .iter()
        .filter(|v| v.verdict == Verdict::Inconclusive)
        .map(|v| (v.t, v.p))
        .collect();

    let divergent: Vec<_> = scan
        .verdicts
        .iter()
        .filter(|v| v.verdict == Verdict::Divergent)
        .collect();
    let all_finite = scan.verdicts.iter().all(|v| v.verdict == Verdict::Finite);
    if classifier.gsd_all_p {
        for v in &divergent {
            disagreements.push(format!(
                "gsd_all_p = true but divergent at t={}, p={}",
                v.t,
                v.p.label()
            ));
        }
    } else if all_finite {
        disagreements.push("gsd_all_p = false but every scanned (t, p) is finite".into());
    }

    let t_max = t_list.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let late: Vec<_> = scan.verdicts.iter().filter(|v| v.t == t_max).collect();
    if classifier.agsd_all_p {
        for v in late.iter().filter(|v| v.verdict == Verdict::Divergent) {
            disagreements.push(format!(
                "agsd_all_p = true but divergent at the largest t={}, p={}",
                v.t,
                v.p.label()
            ));
        }
    } else if late.iter().all(|v| v.verdict == Verdict::Finite) {
        disagreements.push(format!(
            "agsd_all_p = false but every p is finite at t={t_max}"
        ));
    }
    let agree = disagreements.is_empty();
    Ok(EquivalenceReport {
        classifier,
        scan,
        disagreements,
        inconclusive,
        agree,
    })
}
