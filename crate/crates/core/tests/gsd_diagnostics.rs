use levylab::grid::{
    ground_state_with, propagate_semigroup, Field, Grid, GroundStateOptions, SpectralResult,
    SymbolTable,
};
use levylab::gsd::{
    equivalence_consistency, gs_bound_check, gs_integrability, intrinsic_norm_2p, intrinsic_ratio,
    lemma_consistency_check, make_coherent, mixed_norm_power, weighted_lp_norm, Exponent,
    GsdOptions, NRule, Verdict, VerdictEntry,
};
use levylab::levy::{LevyModel, ModelParams};
use levylab::potentials::Potential;
use levylab::Error;
use proptest::prelude::*;

fn model(id: &str) -> LevyModel<f64> {
    LevyModel::from_catalog(id, 1, &ModelParams::new()).unwrap()
}

fn solve(
    id: &str,
    pot: &Potential<f64>,
    r_box: f64,
    n: usize,
) -> (SymbolTable<f64>, SpectralResult<f64>) {
    let table = SymbolTable::new(&model(id).symbol, Grid::new(1, r_box, n).unwrap()).unwrap();
    let mut opts = GroundStateOptions::new(1e-6);
    opts.polish_time = 5.0;
    let spec = ground_state_with(&table, pot, opts).unwrap();
    (table, spec)
}

fn cauchy_potential() -> Potential<f64> {
    Potential::power_log_loglog(2.0, 0.0, 0.0)
}

// composite Simpson on [a, b] with an even number of panels
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let inner: f64 = (1..panels)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn harmonic_phi(grid: Grid<f64>) -> Field<f64> {
    let c = std::f64::consts::PI.powf(-0.25);
    Field::from_fn(grid, "phi0", |x| c * (-0.5 * x[0] * x[0]).exp())
}

#[test]
fn weighted_norm_examples() {
    let grid = Grid::new(1, 8.0, 4096).unwrap();
    let phi = harmonic_phi(grid);
    let one = Field::constant(grid, 1.0, "one");
    for p in [2.5, 3.0, 10.0, f64::INFINITY] {
        let n = weighted_lp_norm(&one, &phi, Exponent::new(p).unwrap(), 0.75).unwrap();
        assert!((n - 1.0).abs() < 1e-13, "p={p}: {n}");
    }
    let half = Field::from_fn(
        grid,
        "indicator",
        |x| if x[0].abs() <= 3.0 { 1.0 } else { 0.0 },
    );
    assert_eq!(
        weighted_lp_norm(&half, &phi, Exponent::INFINITY, 0.75).unwrap(),
        1.0
    );

    // f = 1/φ₀, p = 3: the node sum is a midpoint rule on [-6 - h/2, 6 + h/2]
    let inv = Field::from_fn(grid, "inv", |x| {
        std::f64::consts::PI.powf(0.25) * (0.5 * x[0] * x[0]).exp()
    });
    let numeric = weighted_lp_norm(&inv, &phi, Exponent::new(3.0).unwrap(), 0.75).unwrap();
    let edge = 6.0 + 0.5 * grid.h();
    let c = std::f64::consts::PI.powf(-0.25);
    let phi_exact = |x: f64| c * (-0.5 * x * x).exp();
    let num = simpson(|x| phi_exact(x).powi(-1), -edge, edge, 200_000);
    let den = simpson(|x| phi_exact(x).powi(2), -edge, edge, 200_000);
    let oracle = (num / den).powf(1.0 / 3.0);
    assert!(
        (numeric / oracle - 1.0).abs() < 1e-4,
        "{numeric} vs {oracle}"
    );
}

#[test]
fn ratio_at_time_zero_is_reciprocal() {
    let pot = Potential::quadratic();
    let (table, spec) = solve("brownian", &pot, 8.0, 256);
    let u = intrinsic_ratio(&spec, &table, &pot, 0.0, 1).unwrap();
    for (ui, phi) in u.field.values.iter().zip(&spec.phi0.values) {
        if *phi >= 1e-300 {
            assert!((ui * phi - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn harmonic_ratio_follows_mehler() {
    let pot = Potential::quadratic();
    let (table, spec) = solve("brownian", &pot, 8.0, 512);
    let t = 0.5;
    let u = intrinsic_ratio(&spec, &table, &pot, t, 500).unwrap();
    let exact = 4.0 * (1.0 - (2.0 * t).tanh()) / 2.0;
    let got = u.field.value_near(&[2.0]).ln() - u.field.value_near(&[0.0]).ln();
    assert!((got / exact - 1.0).abs() < 0.02, "{got} vs {exact}");
    assert!((exact - 0.4768).abs() < 1e-4);
}

#[test]
fn ground_state_is_stationary() {
    let pot = cauchy_potential();
    let (table, spec) = solve("stable", &pot, 12.0, 512);
    let t = 0.5;
    let out = propagate_semigroup(&spec.phi0, &table, &pot, t, 500).unwrap();
    let shift = (-spec.lambda0 * t).exp();
    let err = out
        .values
        .iter()
        .zip(&spec.phi0.values)
        .fold(0.0f64, |a, (o, p)| a.max((o - shift * p).abs()));
    assert!(err < 1e-5 * spec.phi0.max(), "{err}");
}

#[test]
fn identity_norm_is_point_mass_extremal() {
    let n = 4;
    let weights = vec![0.25; n];
    let starts: Vec<Vec<f64>> = vec![
        vec![1.0; n],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 1.0, 0.0],
    ];
    let est = mixed_norm_power(
        &|f: &[f64]| Ok(f.to_vec()),
        &weights,
        4.0,
        &starts,
        1e-10,
        100,
    )
    .unwrap();
    assert!((est.value - 4f64.powf(0.25)).abs() < 1e-10, "{}", est.value);
    assert!((est.value - std::f64::consts::SQRT_2).abs() < 1e-5);
    assert!(mixed_norm_power(
        &|f: &[f64]| Ok(f.to_vec()),
        &weights,
        1.5,
        &starts,
        1e-10,
        100
    )
    .is_err());
}

#[test]
fn intrinsic_norm_at_time_zero() {
    // identity on L²(w) → L^p(w): max over nodes of w_i^{1/p - 1/2}
    let pot = Potential::quadratic();
    let (table, spec) = solve("brownian", &pot, 8.0, 256);
    let p = 4.0;
    let est = intrinsic_norm_2p(
        &spec,
        &table,
        &pot,
        0.0,
        Exponent::new(p).unwrap(),
        0.75,
        1e-3,
    )
    .unwrap();
    let nodes = table.grid.window(0.75);
    let total: f64 = nodes.iter().map(|&i| spec.phi0.values[i].powi(2)).sum();
    let oracle = nodes
        .iter()
        .map(|&i| (spec.phi0.values[i].powi(2) / total).powf(1.0 / p - 0.5))
        .fold(0.0, f64::max);
    assert!(
        (est.value / oracle - 1.0).abs() < 1e-6,
        "{} vs {oracle}",
        est.value
    );
}

#[test]
fn harmonic_intrinsic_norm_resolution_and_boxes() {
    let pot = Potential::quadratic();
    let p = Exponent::new(4.0).unwrap();
    let at = |r_box: f64, n: usize, t: f64| {
        let (table, spec) = solve("brownian", &pot, r_box, n);
        intrinsic_norm_2p(&spec, &table, &pot, t, p, 0.75, 1e-3).unwrap()
    };
    let coarse = at(8.0, 256, 0.35);
    let fine = at(8.0, 512, 0.35);
    assert!(coarse.value.is_finite());
    assert!(
        (coarse.value / fine.value - 1.0).abs() < 0.01,
        "{} vs {}",
        coarse.value,
        fine.value
    );

    let small = at(8.0, 256, 0.2);
    let large = at(12.0, 512, 0.2);
    assert!(
        large.value > 10.0 * small.value,
        "{} vs {}",
        small.value,
        large.value
    );
}

#[test]
fn lemma_examples() {
    let pot = Potential::quadratic();
    let (table, spec) = solve("brownian", &pot, 8.0, 512);
    let rep = lemma_consistency_check(
        &spec,
        &table,
        &pot,
        0.35,
        0.1,
        Exponent::new(4.0).unwrap(),
        0.75,
        1e-3,
    )
    .unwrap();
    assert!(rep.holds && rep.slack >= 1.0, "{rep:?}");
    assert!(!rep.vacuous);

    let (table, spec) = solve("stable", &cauchy_potential(), 12.0, 512);
    let flat = Potential::constant(0.0);
    let err = lemma_consistency_check(
        &spec,
        &table,
        &flat,
        0.35,
        0.1,
        Exponent::new(4.0).unwrap(),
        0.75,
        1e-3,
    );
    assert!(matches!(err, Err(Error::Precondition(_))));

    let quad = Potential::quadratic();
    let (table, spec) = solve("stable", &quad, 12.0, 512);
    let rep = lemma_consistency_check(
        &spec,
        &table,
        &quad,
        0.25,
        0.1,
        Exponent::new(3.0).unwrap(),
        0.75,
        1e-3,
    )
    .unwrap();
    assert!(rep.holds, "{rep:?}");
}

#[test]
fn ground_state_bounds_for_cauchy() {
    let pot = cauchy_potential();
    let cauchy = model("stable");
    let (_, spec) = solve("stable", &pot, 16.0, 1024);
    let rep = gs_bound_check(&spec, &cauchy, &pot, 0.5, (6.0, 10.0), 1e3).unwrap();
    assert!(rep.passes && rep.spread <= 1e3, "{rep:?}");
    let a = gs_bound_check(&spec, &cauchy, &pot, 0.5, (6.0, 8.0), 1e3).unwrap();
    let b = gs_bound_check(&spec, &cauchy, &pot, 0.5, (8.0, 10.0), 1e3).unwrap();
    let ratio = a.upper / b.upper;
    assert!((0.1..=10.0).contains(&ratio), "{} vs {}", a.upper, b.upper);

    let (_, spec) = solve("brownian", &Potential::quadratic(), 8.0, 256);
    let err = gs_bound_check(
        &spec,
        &model("brownian"),
        &Potential::quadratic(),
        0.5,
        (2.0, 4.0),
        1e3,
    )
    .unwrap_err();
    assert!(
        err.to_string().contains("proposition hypotheses not met"),
        "{err}"
    );
}

#[test]
fn integrability_examples() {
    let pot = Potential::quadratic();
    let (_, spec) = solve("brownian", &pot, 8.0, 512);
    let rep = gs_integrability(&spec.phi0, 0.5, 0.75).unwrap();
    let half = 2.0 * std::f64::consts::PI.powf(0.375);
    assert!((rep.value - half).abs() < 1e-3, "{}", rep.value);
    assert!((half - 3.0726).abs() < 1e-3);
    let rep = gs_integrability(&spec.phi0, 1e-6, 0.75).unwrap();
    let limit = std::f64::consts::PI.powf(-0.25) * (2.0 * std::f64::consts::PI).sqrt();
    assert!((rep.value - limit).abs() < 1e-3, "{}", rep.value);
    assert!(gs_integrability(&spec.phi0, 1.0, 0.75).is_err());

    let quad = Potential::quadratic();
    let values: Vec<f64> = [16.0, 24.0]
        .iter()
        .map(|&r| {
            let (_, spec) = solve("stable", &quad, r, 1024);
            gs_integrability(&spec.phi0, 0.5, 0.75).unwrap().value
        })
        .collect();
    assert!(values.iter().all(|v| v.is_finite()));
    assert!((values[1] / values[0] - 1.0).abs() < 0.02, "{values:?}");
}

fn entry(p: f64, verdict: Verdict) -> VerdictEntry {
    let p = if p.is_infinite() {
        Exponent::INFINITY
    } else {
        Exponent::new(p).unwrap()
    };
    VerdictEntry {
        t: 1.0,
        p,
        verdict,
        growth: Vec::new(),
    }
}

#[test]
fn coherence_in_p() {
    use Verdict::*;
    let run = |vs: &[(f64, Verdict)]| {
        let mut e: Vec<VerdictEntry> = vs.iter().map(|&(p, v)| entry(p, v)).collect();
        make_coherent(&mut e);
        e.iter().map(|x| x.verdict).collect::<Vec<_>>()
    };
    assert_eq!(
        run(&[
            (3.0, Inconclusive),
            (4.0, Finite),
            (f64::INFINITY, Inconclusive)
        ]),
        [Finite, Finite, Inconclusive]
    );
    assert_eq!(
        run(&[
            (3.0, Inconclusive),
            (4.0, Divergent),
            (f64::INFINITY, Inconclusive)
        ]),
        [Inconclusive, Divergent, Divergent]
    );
    assert_eq!(
        run(&[(3.0, Divergent), (4.0, Finite), (f64::INFINITY, Finite)]),
        [Inconclusive, Inconclusive, Inconclusive]
    );
    assert_eq!(run(&[(3.0, Finite), (4.0, Divergent)]), [Finite, Divergent]);
}

#[test]
fn equivalence_for_polynomial_tail() {
    let ps = [
        Exponent::new(3.0).unwrap(),
        Exponent::new(4.0).unwrap(),
        Exponent::INFINITY,
    ];
    let opts = GsdOptions::default();
    let rep = equivalence_consistency(
        &model("stable"),
        &cauchy_potential(),
        &[0.25, 0.5],
        &ps,
        &[12.0, 16.0, 24.0],
        &opts,
    )
    .unwrap();
    assert!(rep.classifier.gsd_all_p && rep.classifier.agsd_all_p);
    assert!(rep.agree, "{:?}", rep.scan.verdicts);
    assert!(rep
        .scan
        .verdicts
        .iter()
        .all(|v| v.verdict == Verdict::Finite));
    for v in &rep.scan.verdicts {
        if v.p.is_infinite() {
            continue;
        }
        assert!(rep.scan.verdict(v.t, Exponent::INFINITY).is_some());
    }

    let err = equivalence_consistency(
        &model("brownian"),
        &Potential::quadratic(),
        &[0.5],
        &ps,
        &[8.0, 12.0],
        &opts,
    );
    assert!(matches!(err, Err(Error::Precondition(_))));
}

#[test]
fn scan_rejects_bad_boxes() {
    let opts = GsdOptions {
        n_rule: NRule::Fixed(64),
        ..Default::default()
    };
    let p = [Exponent::INFINITY];
    let scan = |boxes: &[f64]| {
        levylab::gsd::gsd_scan(
            &model("stable"),
            &cauchy_potential(),
            &[0.5],
            &p,
            boxes,
            &opts,
        )
    };
    assert!(scan(&[]).is_err());
    assert!(scan(&[8.0, 8.0]).is_err());
    assert_eq!(NRule::Spacing(0.0235).nodes(8.0), 1024);
    assert_eq!(NRule::Spacing(0.0235).nodes(24.0), 2048);
}

proptest! {
    #[test]
    fn norm_is_monotone_in_p(values in prop::collection::vec(0.0f64..5.0, 64), p in 2.0f64..8.0, dp in 0.0f64..8.0) {
        let grid = Grid::new(1, 4.0, 64).unwrap();
        let phi = harmonic_phi(grid);
        let f = Field::new(grid, values, "f").unwrap();
        let lo = weighted_lp_norm(&f, &phi, Exponent::new(p).unwrap(), 1.0).unwrap();
        let hi = weighted_lp_norm(&f, &phi, Exponent::new(p + dp).unwrap(), 1.0).unwrap();
        let top = weighted_lp_norm(&f, &phi, Exponent::INFINITY, 1.0).unwrap();
        prop_assert!(lo <= hi * (1.0 + 1e-12));
        prop_assert!(hi <= top * (1.0 + 1e-12));
    }
}
