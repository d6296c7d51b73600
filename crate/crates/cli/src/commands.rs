//! One function per subcommand. Each writes its tables through the [`Sink`] and prints the
//! summary tables to stdout.

use levylab::grid::{
    dense_oracle, ground_state_with, heat_kernel, potential_on_grid, propagate_semigroup, Field,
    Grid, GroundStateOptions, SymbolTable,
};
use levylab::levy::{
    catalog as model_catalog, comparability_check, jump_paring_ratio, jump_paring_verdict,
    minimal_integrability_time, ClosedForm, LevyModel, TailFamily,
};
use levylab::mc::{fk_estimate, McConfig};
use levylab::potentials::{classify_contractivity, Potential};
use levylab::verify;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::output::{Cell, Sink, Table};
use crate::CliError;

pub struct Outcome {
    pub result: Value,
    pub mismatch: Option<String>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Self {
            result,
            mismatch: None,
        }
    }
}

fn show(sink: &mut Sink, table: &Table) -> Result<(), CliError> {
    print!("{}", table.render());
    sink.table(table)
}

fn field_table(name: String, field: &Field<f64>) -> Table {
    let dim = field.grid.dim;
    let mut columns: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    columns.push("value".into());
    let mut table = Table::with_columns(name, columns);
    for (flat, v) in field.values.iter().enumerate() {
        let mut row: Vec<Cell> = field.grid.point(flat).into_iter().map(Cell::from).collect();
        row.push((*v).into());
        table.push(row);
    }
    table
}

pub fn catalog(sink: &mut Sink) -> Result<Outcome, CliError> {
    let mut table = Table::new(
        "catalog",
        &[
            "id",
            "summary",
            "defaults",
            "exact_sampler",
            "compound_poisson",
        ],
    );
    for entry in model_catalog() {
        let model = LevyModel::<f64>::named(entry.id, 1)?;
        let defaults: Vec<String> = entry
            .defaults
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        table.push(vec![
            entry.id.into(),
            entry.summary.into(),
            defaults.join(";").into(),
            model.samplers.exact_stable.into(),
            model.samplers.compound_poisson.into(),
        ]);
    }
    show(sink, &table)?;
    Ok(Outcome::ok(json!({ "models": model_catalog().len() })))
}

pub fn check_model(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let pot = cfg.potential()?;
    let mut table = Table::new("check_model", &["check", "value", "passed"]);
    let symbol = &model.symbol;
    if !matches!(symbol.closed_form(), ClosedForm::None) && symbol.jumps().is_some() {
        for k in [0.5, 1.0, 4.0] {
            let closed = symbol.eval_radial(k)?;
            let quad = symbol.eval_quadrature(k)?;
            let rel = (quad / closed - 1.0).abs();
            table.push(vec![
                format!("psi({k}) closed form vs quadrature").into(),
                rel.into(),
                (rel < 1e-6).into(),
            ]);
        }
    }
    if let Some(profile) = model.profile() {
        let radii = [2.0, 3.0, 4.0, 5.0, 6.0, 10.0, 20.0, 50.0];
        let paring = jump_paring_verdict(&jump_paring_ratio(profile, &radii)?);
        let max = paring.ratios.iter().fold(0.0f64, |a, (_, v)| a.max(*v));
        table.push(vec![
            "jump-paring max ratio".into(),
            max.into(),
            paring.passes.into(),
        ]);
        let radii: Vec<f64> = (1..=100).map(f64::from).collect();
        let comp = comparability_check(profile, &radii)?;
        table.push(vec![
            "comparability max ratio".into(),
            comp.max_ratio.into(),
            comp.passes.into(),
        ]);
        table.push(vec![
            "tail family".into(),
            profile.describe().into(),
            profile.is_jump_paring_family().into(),
        ]);
    }
    let t0 = minimal_integrability_time(symbol, 1e-3)?;
    table.push(vec![
        "minimal integrability time".into(),
        t0.into(),
        true.into(),
    ]);
    let (kato, reason) = pot.kato_confining_check(model.dim);
    table.push(vec![
        format!("potential {}: {reason}", pot.describe()).into(),
        Cell::Num(f64::NAN),
        kato.into(),
    ]);
    show(sink, &table)?;
    Ok(Outcome::ok(json!({ "model": model.id, "dim": model.dim })))
}

const POLY_POINTS: [[f64; 3]; 12] = [
    [1.0, 0.0, 0.0],
    [0.5, -3.0, -1.0],
    [2.0, 1.0, 0.0],
    [0.0, 2.0, 0.0],
    [0.0, 1.5, -2.0],
    [0.0, 1.0, 1.0],
    [0.0, 1.0, 0.5],
    [0.0, 1.0, 0.0],
    [0.0, 1.0, -0.5],
    [0.0, 0.5, 3.0],
    [0.0, 0.0, 5.0],
    [0.0, 0.0, 0.0],
];

const PAIR_POINTS: [[f64; 3]; 12] = [
    [2.0, -5.0, 0.0],
    [1.5, 0.0, 0.0],
    [1.0, 3.0, 0.0],
    [1.0, 0.5, 0.0],
    [1.0, 0.0, 0.0],
    [1.0, -0.5, 0.0],
    [1.0, -1.0, 0.0],
    [1.0, -2.0, 0.0],
    [0.9, 3.0, 0.0],
    [0.5, 0.0, 0.0],
    [0.0, 2.0, 0.0],
    [3.0, 0.0, 0.0],
];

pub fn classify(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let profile = model.profile().ok_or_else(|| {
        CliError::Config(format!(
            "model `{}` has no jump part to classify against",
            model.id
        ))
    })?;
    let points: Vec<[f64; 3]> = if !cfg.classify.points.is_empty() {
        cfg.classify.points.clone()
    } else if matches!(profile.tail, TailFamily::Polynomial { .. }) {
        POLY_POINTS.to_vec()
    } else {
        PAIR_POINTS.to_vec()
    };
    println!("model {} with tail {}", model.id, profile.describe());
    let mut table = Table::new(
        "classify",
        &[
            "d1",
            "d2",
            "d3",
            "gsd_all_p",
            "agsd_all_p",
            "limit",
            "witness_c",
            "witness_r",
        ],
    );
    for [d1, d2, d3] in points {
        let v = classify_contractivity(&Potential::power_log_loglog(d1, d2, d3), &model)?;
        let limit = serde_json::to_value(v.limit).expect("limit serialises");
        let (c, r) = v.witness.unwrap_or((f64::NAN, f64::NAN));
        table.push(vec![
            d1.into(),
            d2.into(),
            d3.into(),
            v.gsd_all_p.into(),
            v.agsd_all_p.into(),
            limit.as_str().unwrap_or("").into(),
            c.into(),
            r.into(),
        ]);
    }
    show(sink, &table)?;
    Ok(Outcome::ok(
        json!({ "model": model.id, "tail": profile.describe(), "points": table.rows.len() }),
    ))
}

fn box_label(r: f64) -> String {
    format!("{r}").replace('.', "p")
}

fn table_for(
    cfg: &ExperimentConfig,
    model: &LevyModel<f64>,
    r_box: f64,
) -> Result<SymbolTable<f64>, CliError> {
    let grid = Grid::new(model.dim, r_box, cfg.n_rule().nodes(r_box))?;
    Ok(SymbolTable::new(&model.symbol, grid)?)
}

pub fn groundstate(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let pot = cfg.potential()?;
    let mut table = Table::new(
        "groundstate",
        &[
            "R_box",
            "N",
            "lambda0",
            "residual",
            "iterations",
            "dt",
            "lambda0_dense",
        ],
    );
    let mut fields = Vec::new();
    for &r_box in &cfg.grid.boxes {
        let st = table_for(cfg, &model, r_box)?;
        let mut opts = GroundStateOptions::new(cfg.run.tol);
        opts.polish_time = cfg.run.polish_time;
        let spec = ground_state_with(&st, &pot, opts)?;
        let dense = if cfg.run.dense {
            dense_oracle(&st, &pot)?.lambda0
        } else {
            f64::NAN
        };
        table.push(vec![
            r_box.into(),
            st.grid.n.into(),
            spec.lambda0.into(),
            spec.residual.into(),
            spec.iterations.into(),
            spec.dt.into(),
            dense.into(),
        ]);
        fields.push(field_table(
            format!("phi0_R{}", box_label(r_box)),
            &spec.phi0,
        ));
    }
    show(sink, &table)?;
    for f in &fields {
        sink.table(f)?;
    }
    Ok(Outcome::ok(json!({ "boxes": cfg.grid.boxes })))
}

pub fn heatkernel(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let st = table_for(cfg, &model, cfg.grid.boxes[0])?;
    let x0 = cfg.x0();
    let mut table = Table::new("heatkernel", &["t", "value_at_x0", "mass", "min"]);
    let mut fields = Vec::new();
    for (i, &t) in cfg.run.t.iter().enumerate() {
        let p = heat_kernel(&st, t)?;
        table.push(vec![
            t.into(),
            p.value_near(&x0).into(),
            p.mass().into(),
            p.min().into(),
        ]);
        fields.push(field_table(format!("heatkernel_t{i}"), &p));
    }
    show(sink, &table)?;
    for f in &fields {
        sink.table(f)?;
    }
    Ok(Outcome::ok(
        json!({ "R_box": cfg.grid.boxes[0], "N": st.grid.n }),
    ))
}

pub fn propagate(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let pot = cfg.potential()?;
    let st = table_for(cfg, &model, cfg.grid.boxes[0])?;
    let x0 = cfg.x0();
    let one = Field::constant(st.grid, 1.0, "one");
    let mut table = Table::new("propagate", &["t", "value_at_x0", "max", "min"]);
    let mut fields = Vec::new();
    for (i, &t) in cfg.run.t.iter().enumerate() {
        let steps = ((t / cfg.run.dt).ceil() as usize).max(1);
        let f = propagate_semigroup(&one, &st, &pot, t, steps)?;
        table.push(vec![
            t.into(),
            f.value_near(&x0).into(),
            f.max().into(),
            f.min().into(),
        ]);
        fields.push(field_table(format!("propagate_t{i}"), &f));
    }
    show(sink, &table)?;
    for f in &fields {
        sink.table(f)?;
    }
    let v_max = potential_on_grid(&pot, &st.grid)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(Outcome::ok(
        json!({ "R_box": cfg.grid.boxes[0], "N": st.grid.n, "v_max": v_max }),
    ))
}

pub fn mc_fk(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Outcome, CliError> {
    let seed = cfg
        .run
        .seed
        .ok_or_else(|| CliError::Config("mc-fk needs run.seed or --seed".into()))?;
    let model = cfg.model()?;
    let pot = cfg.potential()?;
    let x0 = cfg.x0();
    let mc = McConfig {
        n_paths: cfg.run.n_paths,
        dt: cfg.run.dt,
        epsilon: cfg.run.epsilon,
        seed,
        ..McConfig::default()
    };
    let mut table = Table::new(
        "mc_fk",
        &[
            "t", "x0", "mean", "stderr", "n_paths", "dt", "epsilon", "seed",
        ],
    );
    for &t in &cfg.run.t {
        let e = fk_estimate(&model, &pot, &x0, t, &mc)?;
        let x: Vec<String> = e.x0.iter().map(|v| format!("{v:?}")).collect();
        table.push(vec![
            t.into(),
            x.join(";").into(),
            e.mean.into(),
            e.stderr.into(),
            e.n_paths.into(),
            e.dt.into(),
            e.epsilon.into(),
            Cell::Int(e.seed),
        ]);
    }
    show(sink, &table)?;
    Ok(Outcome::ok(
        json!({ "model": model.id, "potential": pot.describe() }),
    ))
}

pub fn gsd_scan(cfg: &ExperimentConfig, sink: &mut Sink) -> Result<Outcome, CliError> {
    let model = cfg.model()?;
    let pot = cfg.potential()?;
    let ps = cfg.exponents()?;
    let rep = levylab::gsd::gsd_scan(
        &model,
        &pot,
        &cfg.run.t,
        &ps,
        &cfg.grid.boxes,
        &cfg.gsd_options(),
    )?;
    let mut boxes = Table::new("gsd_boxes", &["R_box", "N", "lambda0", "residual"]);
    for b in &rep.boxes {
        boxes.push(vec![
            b.r_box.into(),
            b.n.into(),
            b.lambda0.into(),
            b.residual.into(),
        ]);
    }
    let mut norms = Table::new("gsd_norms", &["t", "p", "R_box", "N", "norm"]);
    for e in &rep.norms {
        norms.push(vec![
            e.t.into(),
            e.p.label().into(),
            e.r_box.into(),
            e.n.into(),
            e.norm.into(),
        ]);
    }
    let mut verdicts = Table::new("gsd_verdicts", &["t", "p", "verdict", "growth"]);
    for v in &rep.verdicts {
        let growth: Vec<String> = v.growth.iter().map(|g| format!("{g:?}")).collect();
        verdicts.push(vec![
            v.t.into(),
            v.p.label().into(),
            v.verdict.as_str().into(),
            growth.join(";").into(),
        ]);
    }
    sink.table(&boxes)?;
    sink.table(&norms)?;
    show(sink, &verdicts)?;
    Ok(Outcome::ok(
        json!({ "model": rep.model, "potential": rep.potential, "window": rep.window }),
    ))
}

pub fn verify(sink: &mut Sink) -> Result<Outcome, CliError> {
    let mut table = Table::new("verify", &["criterion", "name", "passed", "detail"]);
    let mut checks = Vec::new();
    for (id, _) in verify::CRITERIA {
        let check = verify::run(id).expect("known criterion");
        println!("{}", check.line());
        table.push(vec![
            Cell::Int(id as u64),
            check.name.into(),
            check.passed.into(),
            check.detail.clone().into(),
        ]);
        checks.push(check);
    }
    sink.table(&table)?;
    let failed: Vec<u8> = checks.iter().filter(|c| !c.passed).map(|c| c.id).collect();
    let result = json!({
        "all_passed": failed.is_empty(),
        "checks": checks.iter().map(|c| json!({ "criterion": c.id, "name": c.name, "passed": c.passed })).collect::<Vec<_>>(),
    });
    let mismatch = (!failed.is_empty()).then(|| format!("criteria {failed:?} failed"));
    Ok(Outcome { result, mismatch })
}
