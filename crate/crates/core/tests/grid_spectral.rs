use levylab::grid::{
    apply_generator, dense_oracle, ground_state, heat_kernel, io, multiplier_matrix,
    propagate_semigroup, Field, Grid, SymbolTable,
};
use levylab::levy::LevySymbol;
use levylab::{Grid64, LevyModel64, Potential64};

fn brownian() -> LevySymbol<f64> {
    LevySymbol::gaussian(1, 1.0).unwrap()
}

fn cauchy() -> LevySymbol<f64> {
    LevyModel64::named("stable", 1).unwrap().symbol
}

#[test]
fn grid_layout() {
    let g = Grid64::new(1, 12.0, 8).unwrap();
    assert_eq!(g.h(), 3.0);
    assert_eq!(
        g.coords(),
        vec![-12.0, -9.0, -6.0, -3.0, 0.0, 3.0, 6.0, 9.0]
    );
    let g = Grid64::new(1, 1.0, 8).unwrap();
    let max = (0..8)
        .map(|k| g.frequency(k))
        .fold(f64::NEG_INFINITY, f64::max);
    assert!((max - g.max_resolved_frequency()).abs() < 1e-14);
    assert!((max - std::f64::consts::PI / g.h() * (1.0 - 2.0 / 8.0)).abs() < 1e-14);
    assert_eq!(Grid64::new(2, 4.0, 16).unwrap().len(), 256);
    assert!(Grid64::new(1, 1.0, 12).is_err());
    assert!(Grid64::new(1, 1.0, 4).is_err());
}

#[test]
fn generator_on_constants_and_cosines() {
    let grid = Grid64::new(1, 5.0, 64).unwrap();
    let table = SymbolTable::new(&cauchy(), grid).unwrap();
    let lf = apply_generator(&Field::constant(grid, 3.0, "c"), &table).unwrap();
    assert!(lf.values.iter().all(|v| v.abs() < 1e-12));
    let k = 5;
    let xi = grid.frequency(k);
    let f = Field::from_fn(grid, "cos", |x| (xi * x[0]).cos());
    let lf = apply_generator(&f, &table).unwrap();
    for (a, b) in lf.values.iter().zip(&f.values) {
        assert!((a + xi.abs() * b).abs() < 1e-10);
    }
}

#[test]
fn generator_matches_dense_matrix() {
    let grid = Grid64::new(1, 4.0, 64).unwrap();
    let table = SymbolTable::new(&cauchy(), grid).unwrap();
    // deterministic pseudo-random input
    let mut s = 12345u64;
    let values = (0..grid.len())
        .map(|_| {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect();
    let f = Field::new(grid, values, "rand").unwrap();
    let lf = apply_generator(&f, &table).unwrap();
    let m = multiplier_matrix(&table).unwrap();
    let v = nalgebra::DVector::from_vec(f.values.clone());
    let dense = -(m * v);
    let scale = dense.amax();
    for (a, b) in lf.values.iter().zip(dense.iter()) {
        assert!((a - b).abs() <= 1e-8 * scale);
    }
}

#[test]
fn heat_kernel_closed_forms() {
    let grid = Grid64::new(1, 2048.0, 65536).unwrap();
    let p = heat_kernel(&SymbolTable::new(&cauchy(), grid).unwrap(), 1.0).unwrap();
    assert!((p.value_near(&[0.0]) - 1.0 / std::f64::consts::PI).abs() < 1e-6);
    assert!((p.mass() - 1.0).abs() < 1e-6);

    let grid = Grid64::new(1, 20.0, 512).unwrap();
    let p = heat_kernel(&SymbolTable::new(&brownian(), grid).unwrap(), 0.5).unwrap();
    assert!((p.value_near(&[0.0]) - (2.0 * std::f64::consts::PI).powf(-0.5)).abs() < 1e-6);
    assert!((p.mass() - 1.0).abs() < 1e-6);

    let coarse = Grid64::new(1, 20.0, 16).unwrap();
    assert!(heat_kernel(&SymbolTable::new(&cauchy(), coarse).unwrap(), 1.0).is_err());
}

#[test]
fn free_and_constant_propagation() {
    for symbol in [brownian(), cauchy()] {
        let grid = Grid64::new(1, 8.0, 256).unwrap();
        let table = SymbolTable::new(&symbol, grid).unwrap();
        let one = Field::constant(grid, 1.0, "one");
        let out = propagate_semigroup(&one, &table, &Potential64::constant(0.0), 0.7, 7).unwrap();
        assert!(out.values.iter().all(|v| (v - 1.0).abs() < 1e-12));
        let out = propagate_semigroup(&one, &table, &Potential64::constant(2.0), 0.7, 7).unwrap();
        assert!(out
            .values
            .iter()
            .all(|v| (v - (-1.4f64).exp()).abs() < 1e-10));
    }
}

#[test]
fn harmonic_ground_state_matches_dense_and_closed_form() {
    let grid = Grid64::new(1, 12.0, 512).unwrap();
    let table = SymbolTable::new(&brownian(), grid).unwrap();
    let pot = Potential64::quadratic();
    let dense = dense_oracle(&table, &pot).unwrap();
    assert!((dense.lambda0 - 1.0).abs() < 1e-4);
    assert!((dense.lambda1 - 3.0).abs() < 1e-3);
    assert!(dense.asymmetry <= 1e-10);
    let gs = ground_state(&table, &pot, 1e-6).unwrap();
    assert!(
        (gs.lambda0 - dense.lambda0).abs() < 1e-4,
        "{} vs {}",
        gs.lambda0,
        dense.lambda0
    );
    assert!(gs.phi0.values.iter().all(|&v| v > 0.0));
    assert!((gs.phi0.l2_norm() - 1.0).abs() < 1e-12);
    let exact = Field::from_fn(grid, "exact", |x| {
        std::f64::consts::PI.powf(-0.25) * (-x[0] * x[0] / 2.0).exp()
    });
    let mut diff = gs.phi0.clone();
    diff.values
        .iter_mut()
        .zip(&exact.values)
        .for_each(|(a, b)| *a -= b);
    assert!(diff.l2_norm() < 1e-3);
}

#[test]
fn cauchy_ground_state_matches_dense() {
    let grid = Grid64::new(1, 12.0, 512).unwrap();
    let table = SymbolTable::new(&cauchy(), grid).unwrap();
    let pot = Potential64::quadratic();
    let dense = dense_oracle(&table, &pot).unwrap();
    let gs = ground_state(&table, &pot, 1e-6).unwrap();
    assert!(
        (gs.lambda0 - dense.lambda0).abs() < 1e-4,
        "{} vs {}",
        gs.lambda0,
        dense.lambda0
    );
    assert!(dense.lambda0 < dense.lambda1);
}

#[test]
fn binary_roundtrip() {
    let grid = Grid::new(2, 3.0, 8).unwrap();
    let f = Field::from_fn(grid, "f", |x| x[0] - 2.0 * x[1]);
    let dir = std::env::temp_dir().join(format!("levylab-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.bin");
    io::write_binary(&f, &path).unwrap();
    let back = io::read_binary(&path, "f").unwrap();
    assert_eq!(back.values, f.values);
    assert_eq!(std::fs::metadata(&path).unwrap().len(), 24 + 8 * 64);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unresolvable_tolerance_fails_instead_of_stalling() {
    let grid = Grid::new(1, 8.0, 128).unwrap();
    let table = SymbolTable::new(&brownian(), grid).unwrap();
    let start = std::time::Instant::now();
    let err = ground_state(&table, &Potential64::quadratic(), 1e-9).unwrap_err();
    assert!(
        matches!(err, levylab::Error::NonConvergence { .. }),
        "{err}"
    );
    assert!(start.elapsed().as_secs() < 30);
}
