use levylab::levy::{
    comparability_check, jump_paring_ratio, jump_paring_verdict, minimal_integrability_time,
    JumpProfile, LevyModel, ModelParams, TailFamily,
};
use levylab::{Error, LevyModel64};

fn params(kv: &[(&str, f64)]) -> ModelParams {
    kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[test]
fn closed_form_values() {
    let cauchy = LevyModel64::named("stable", 1).unwrap();
    assert_eq!(cauchy.eval_symbol(&[2.0]).unwrap(), 2.0);
    let rel = LevyModel64::named("relativistic", 1).unwrap();
    assert_eq!(rel.eval_symbol(&[0.0]).unwrap(), 0.0);
}

#[test]
fn stable_quadrature_matches_closed_form() {
    for (dim, alpha) in [(1, 1.5), (1, 1.0), (1, 0.5), (2, 1.0), (3, 1.2)] {
        let m = LevyModel64::from_catalog("stable", dim, &params(&[("alpha", alpha)])).unwrap();
        for k in [0.01, 0.3, 1.0, 4.0, 25.0] {
            let q = m.symbol.eval_quadrature(k).unwrap();
            let exact: f64 = k.powf(alpha);
            assert!(
                (q - exact).abs() <= 1e-6 * exact,
                "d={dim} α={alpha} k={k}: {q} vs {exact}"
            );
        }
    }
}

#[test]
fn tempered_quadrature_matches_closed_form() {
    // one-dimensional tempered density c_{1,α} e^{-cr} r^{-1-α} only coincides with the profile for r ≥ 1,
    // so compare against a direct quadrature of the true tempered density instead
    let m = LevyModel64::named("tempered", 1).unwrap();
    for k in [0.5, 2.0, 10.0] {
        let closed = m.eval_symbol(&[k]).unwrap();
        let direct = tempered_direct(1.0, 1.0, k);
        assert!(
            (closed - direct).abs() < 1e-6 * closed,
            "k={k}: {closed} vs {direct}"
        );
    }
}

// 2 c_{1,α} ∫_0^∞ (1 - cos kr) e^{-cr} r^{-1-α} dr via fine composite Simpson in r = e^u
fn tempered_direct(alpha: f64, c: f64, k: f64) -> f64 {
    let norm = 1.0 / std::f64::consts::PI;
    let (a, b, n) = (-30.0f64, 6.0f64, 400_000);
    let h = (b - a) / n as f64;
    let f = |u: f64| {
        let r = u.exp();
        (1.0 - (k * r).cos()) * (-c * r).exp() * r.powf(-alpha)
    };
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    2.0 * norm * s * h / 3.0 * if alpha == 1.0 { 1.0 } else { f64::NAN }
}

#[test]
fn density_examples() {
    let m = LevyModel64::named("stable", 1).unwrap();
    assert!((m.eval_density(&[2.0]).unwrap() - 0.25).abs() < 1e-15);
    assert!((m.eval_density(&[0.5]).unwrap() - 4.0).abs() < 1e-15);
    assert_eq!(m.eval_density(&[0.0]), Err(Error::SingularDensity));
}

#[test]
fn jump_paring_examples() {
    let radii = [2.0, 3.0, 4.0, 5.0, 6.0, 10.0, 20.0, 50.0];
    let poly = JumpProfile::new(1, 1.0, TailFamily::Polynomial { gamma: 1.0 }).unwrap();
    let r = jump_paring_verdict(&jump_paring_ratio(&poly, &radii).unwrap());
    assert!(r.passes, "{r:?}");
    let exp = JumpProfile::new(1, 1.0, TailFamily::Exponential { c: 1.0, gamma: 1.5 }).unwrap();
    let r = jump_paring_verdict(&jump_paring_ratio(&exp, &radii).unwrap());
    assert!(r.passes, "{r:?}");
    let gauss = JumpProfile::new(1, 1.0, TailFamily::GaussianTail).unwrap();
    let r = jump_paring_verdict(&jump_paring_ratio(&gauss, &radii[..5]).unwrap());
    assert!(!r.passes);
    assert!(r.diverged_at.unwrap() <= 6.0);
    println!("{r:?}");
}

#[test]
fn comparability_examples() {
    let radii: Vec<f64> = (1..=100).map(f64::from).collect();
    for tail in [
        TailFamily::Polynomial { gamma: 1.0 },
        TailFamily::StretchedExponential { c: 1.0, beta: 0.5 },
        TailFamily::Exponential { c: 1.0, gamma: 1.5 },
    ] {
        let p = JumpProfile::new(1, 1.0, tail).unwrap();
        assert!(comparability_check(&p, &radii).unwrap().passes);
    }
    let g = JumpProfile::new(1, 1.0, TailFamily::GaussianTail).unwrap();
    assert!(!comparability_check(&g, &radii).unwrap().passes);
}

#[test]
fn integrability_times() {
    let stable = LevyModel64::named("stable", 1).unwrap();
    assert_eq!(
        minimal_integrability_time(&stable.symbol, 0.01).unwrap(),
        0.0
    );
    let geo = LevyModel64::named("geometric-stable", 1).unwrap();
    let t = minimal_integrability_time(&geo.symbol, 0.01).unwrap();
    assert!((t - 1.0).abs() <= 0.01, "{t}");
    let jd = LevyModel64::named("jump-diffusion", 1).unwrap();
    assert_eq!(minimal_integrability_time(&jd.symbol, 0.01).unwrap(), 0.0);
}

#[test]
fn every_catalog_model_builds_in_low_dimensions() {
    for entry in levylab::levy::catalog() {
        for dim in 1..=3 {
            let m: LevyModel<f64> = LevyModel::named(entry.id, dim).unwrap();
            let v = m.eval_symbol(&vec![0.7; dim]).unwrap();
            assert!(v > 0.0 && v.is_finite(), "{} d={dim}: {v}", entry.id);
        }
    }
    assert!(matches!(
        LevyModel64::named("nope", 1),
        Err(Error::UnknownModel(_))
    ));
}
