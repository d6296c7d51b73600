use levylab::levy::{LevyModel, ModelParams};
use levylab::potentials::{borderline_ratio, classify_contractivity, Potential, RatioLimit};
use levylab::Error;
use proptest::prelude::*;

fn params(kv: &[(&str, f64)]) -> ModelParams {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn layered(gamma: f64) -> LevyModel<f64> {
    LevyModel::<f64>::from_catalog("layered", 1, &params(&[("alpha", 1.0), ("gamma", gamma)]))
        .unwrap()
}

fn stretched(beta: f64) -> LevyModel<f64> {
    LevyModel::<f64>::from_catalog("stretched-exp", 1, &params(&[("c", 1.0), ("beta", beta)]))
        .unwrap()
}

// relativistic, d = 1, α = 1, m = 1: exponential tail with c = 1, γ = 3/2
fn exponential() -> LevyModel<f64> {
    LevyModel::<f64>::from_catalog("relativistic", 1, &params(&[])).unwrap()
}

fn plll(d1: f64, d2: f64, d3: f64) -> Potential<f64> {
    Potential::power_log_loglog(d1, d2, d3)
}

#[test]
fn evaluation_examples() {
    assert!((plll(2.0, 0.0, 0.0).eval(&[1.0]) - 4.0).abs() < 1e-14);
    assert!((plll(2.0, 0.0, 0.0).eval(&[0.6, 0.8]) - 4.0).abs() < 1e-14);
    assert!((Potential::<f64>::quadratic().eval(&[3.0]) - 9.0).abs() < 1e-14);
    assert!((plll(0.0, 1.0, 0.0).eval(&[0.0]) - 2f64.ln()).abs() < 1e-15);
}

#[test]
fn local_suprema() {
    let q = Potential::<f64>::quadratic();
    assert!((q.sup_ball(&[2.0], 0.5).unwrap() - 6.25).abs() < 1e-14);
    assert!((q.sup_ball(&[0.0, 0.0], 0.3).unwrap() - 0.09).abs() < 1e-14);
    assert!((plll(1.0, 0.0, 0.0).sup_ball(&[5.0], 1.0).unwrap() - 7.0).abs() < 1e-14);
    assert!(q.sup_ball(&[1.0], 0.0).is_err());
    assert!(q.sup_ball(&[1.0], 1.5).is_err());

    // a non-monotone custom potential: the maximum sits inside the ball
    let bump = Potential::custom("bump", true, |x: &[f64]| -(x[0] - 1.0).powi(2));
    assert!(bump.sup_ball(&[1.25], 0.5).unwrap().abs() < 1e-12);
}

#[test]
fn borderline_examples() {
    let e2 = 2f64.exp();
    let r = borderline_ratio(&plll(1.0, 0.0, 0.0), &layered(1.0), &[e2]).unwrap();
    assert!((r - (1.0 + e2) / 4.0).abs() < 1e-12, "{r}");
    assert!((r - 2.0973).abs() < 1e-4);

    let r = borderline_ratio(&Potential::quadratic(), &exponential(), &[10.0]).unwrap();
    let expected = 100.0 / (10.0 + 1.5 * 10f64.ln() - 1.0);
    assert!((r - expected).abs() < 1e-12);
    assert!((r - 8.030).abs() < 1e-3);

    let s = stretched(0.5);
    let v = plll(1.0, 0.0, 0.0);
    let ratios: Vec<f64> = [10.0, 100.0, 1000.0, 1e4]
        .iter()
        .map(|&x| borderline_ratio(&v, &s, &[x]).unwrap())
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] > 2.0 * w[0]), "{ratios:?}");

    assert!(borderline_ratio(&v, &s, &[1.5]).is_err());
}

#[test]
fn super_borderline_ratio_grows_per_decade() {
    let model = layered(1.0);
    let v = plll(1.0, 0.0, 0.0);
    assert!(classify_contractivity(&v, &model).unwrap().gsd_all_p);
    let ratios: Vec<f64> = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&x| borderline_ratio(&v, &model, &[x]).unwrap())
        .collect();
    assert!(ratios.windows(2).all(|w| w[1] >= 2.0 * w[0]), "{ratios:?}");
}

#[test]
fn classifier_examples() {
    for gamma in [0.5, 1.0, 3.0] {
        let v = classify_contractivity(&plll(1.0, 0.0, 0.0), &layered(gamma)).unwrap();
        assert!(v.gsd_all_p && v.agsd_all_p);
        assert_eq!(v.limit, RatioLimit::TendsToInfinity);
    }

    let v = classify_contractivity(&plll(0.0, 1.0, 0.0), &layered(1.0)).unwrap();
    assert!(!v.gsd_all_p && v.agsd_all_p);
    assert_eq!(v.limit, RatioLimit::BoundedBelowPositive);
    let (c, r) = v.witness.unwrap();
    assert!(c > 0.0 && r > 0.0);
    // V ≥ C |log ν| at a few radii beyond R
    for x in [r, 3.0 * r, 1e3 * r] {
        assert!(
            borderline_ratio(&plll(0.0, 1.0, 0.0), &layered(1.0), &[x]).unwrap()
                >= c * (1.0 - 1e-12)
        );
    }

    let v = classify_contractivity(&plll(1.0, 0.0, 0.0), &exponential()).unwrap();
    assert!(!v.gsd_all_p && v.agsd_all_p);

    let v = classify_contractivity(&plll(1.0, -1.0, 0.0), &stretched(1.0)).unwrap();
    assert!(!v.gsd_all_p && v.agsd_all_p);
}

#[test]
fn classifier_refusals() {
    let custom = Potential::custom("wiggle", true, |x: &[f64]| x[0] * x[0] * (2.0 + x[0].sin()));
    let v = classify_contractivity(&custom, &layered(1.0)).unwrap();
    assert_eq!(v.limit, RatioLimit::OscillatesUnknown);
    assert!(!v.gsd_all_p && !v.agsd_all_p);

    let gauss =
        LevyModel::<f64>::from_catalog("gaussian-tail-counterexample", 1, &params(&[])).unwrap();
    assert!(matches!(
        classify_contractivity(&Potential::quadratic(), &gauss),
        Err(Error::Precondition(_))
    ));
    let brown = LevyModel::<f64>::from_catalog("brownian", 1, &params(&[])).unwrap();
    assert!(matches!(
        classify_contractivity(&Potential::quadratic(), &brown),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        classify_contractivity(&plll(-1.0, 0.0, 0.0), &layered(1.0)),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn relativistic_tail_parameters() {
    for (d, alpha, mass) in [(1, 1.0, 1.0), (2, 1.5, 2.0), (3, 0.5, 0.3)] {
        let m = LevyModel::<f64>::from_catalog(
            "relativistic",
            d,
            &params(&[("alpha", alpha), ("mass", mass)]),
        )
        .unwrap();
        let desc = m.profile().unwrap().describe();
        let c = mass.powf(1.0 / alpha);
        let gamma = (d as f64 + alpha + 1.0) / 2.0;
        assert_eq!(desc, format!("exponential(c={c}, gamma={gamma})"));
    }
}

#[test]
fn kato_examples() {
    assert!(Potential::<f64>::quadratic().kato_confining_check(1).0);
    let (ok, reason) = plll(0.0, 0.0, 0.0).kato_confining_check(1);
    assert!(!ok);
    assert_eq!(reason, "not confining");
    assert!(plll(0.0, 1.0, 0.0).kato_confining_check(2).0);
    let bounded = Potential::custom("atan", true, |x: &[f64]| x[0].atan());
    assert!(!bounded.kato_confining_check(1).0);
    let growing = Potential::custom("abs", true, |x: &[f64]| x.iter().map(|v| v.abs()).sum());
    assert!(growing.kato_confining_check(2).0);
}

// Conditions of the worked examples, written out directly.
fn poly_gsd(d1: f64, d2: f64, d3: f64) -> bool {
    d1 > 0.0 || (d1 == 0.0 && d2 > 1.0) || (d1 == 0.0 && d2 == 1.0 && d3 > 0.0)
}
fn poly_agsd(d1: f64, d2: f64, d3: f64) -> bool {
    d1 > 0.0 || (d1 == 0.0 && d2 >= 1.0 && !(d2 == 1.0 && d3 < 0.0))
}
fn stretched_gsd(d1: f64, d2: f64) -> bool {
    d1 > 1.0 || (d1 == 1.0 && d2 > -1.0)
}
fn stretched_agsd(d1: f64, d2: f64) -> bool {
    d1 > 1.0 || (d1 == 1.0 && d2 >= -1.0)
}
fn exp_gsd(d1: f64, d2: f64) -> bool {
    d1 > 1.0 || (d1 == 1.0 && d2 > 0.0)
}
fn exp_agsd(d1: f64, d2: f64) -> bool {
    d1 > 1.0 || (d1 == 1.0 && d2 >= 0.0)
}

#[test]
fn polynomial_tail_table() {
    let grid = [
        (1.0, 0.0, 0.0),
        (0.5, -3.0, -1.0),
        (2.0, 1.0, 0.0),
        (0.0, 2.0, 0.0),
        (0.0, 1.5, -2.0),
        (0.0, 1.0, 1.0),
        (0.0, 1.0, 0.5),
        (0.0, 1.0, 0.0),
        (0.0, 1.0, -0.5),
        (0.0, 0.5, 3.0),
        (0.0, 0.0, 5.0),
        (0.0, 0.0, 0.0),
    ];
    for gamma in [0.5, 2.0] {
        let model = layered(gamma);
        for (d1, d2, d3) in grid {
            let v = classify_contractivity(&plll(d1, d2, d3), &model).unwrap();
            assert_eq!(
                v.gsd_all_p,
                poly_gsd(d1, d2, d3),
                "gsd at ({d1}, {d2}, {d3})"
            );
            assert_eq!(
                v.agsd_all_p,
                poly_agsd(d1, d2, d3),
                "agsd at ({d1}, {d2}, {d3})"
            );
        }
    }
}

const TWO_PARAM_GRID: [(f64, f64); 12] = [
    (2.0, -5.0),
    (1.5, 0.0),
    (1.0, 3.0),
    (1.0, 0.5),
    (1.0, 0.0),
    (1.0, -0.5),
    (1.0, -1.0),
    (1.0, -2.0),
    (0.9, 3.0),
    (0.5, 0.0),
    (0.0, 2.0),
    (3.0, 0.0),
];

#[test]
fn stretched_tail_table() {
    let model = stretched(1.0);
    for (d1, d2) in TWO_PARAM_GRID {
        let v = classify_contractivity(&plll(d1, d2, 0.0), &model).unwrap();
        assert_eq!(v.gsd_all_p, stretched_gsd(d1, d2), "gsd at ({d1}, {d2})");
        assert_eq!(v.agsd_all_p, stretched_agsd(d1, d2), "agsd at ({d1}, {d2})");
    }
}

#[test]
fn exponential_tail_table() {
    let tempered = LevyModel::<f64>::from_catalog("tempered", 1, &params(&[])).unwrap();
    for model in [exponential(), tempered] {
        for (d1, d2) in TWO_PARAM_GRID {
            let v = classify_contractivity(&plll(d1, d2, 0.0), &model).unwrap();
            assert_eq!(v.gsd_all_p, exp_gsd(d1, d2), "gsd at ({d1}, {d2})");
            assert_eq!(v.agsd_all_p, exp_agsd(d1, d2), "agsd at ({d1}, {d2})");
        }
    }
}

proptest! {
    #[test]
    fn verdict_bits_are_ordered_and_scale_free(
        d1 in prop::sample::select(vec![0.0, 0.5, 1.0, 2.0]),
        d2 in prop::sample::select(vec![0.0, 0.5, 1.0, 2.0]),
        d3 in prop::sample::select(vec![-1.0, 0.0, 1.0]),
        c in 0.01f64..100.0,
        which in 0usize..3,
    ) {
        let model = match which { 0 => layered(1.0), 1 => stretched(0.5), _ => exponential() };
        let base = classify_contractivity(&plll(d1, d2, d3), &model);
        let scaled = classify_contractivity(&plll(d1, d2, d3).scaled(c).unwrap(), &model);
        match (base, scaled) {
            (Ok(a), Ok(b)) => {
                prop_assert!(!a.gsd_all_p || a.agsd_all_p);
                prop_assert_eq!(a.gsd_all_p, b.gsd_all_p);
                prop_assert_eq!(a.agsd_all_p, b.agsd_all_p);
                prop_assert_eq!(a.limit, b.limit);
            }
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "scaling changed admissibility"),
        }
    }
}
