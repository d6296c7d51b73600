use std::fmt::Write as _;

use serde::Serialize;

use super::ratio::{lp_on_nodes, ratio_from_semigroup, Exponent, WINDOW};
use crate::error::{invalid, Result};
use crate::grid::{
    ground_state_with, potential_on_grid, Field, Grid, GroundStateOptions, SpectralResult,
    StrangStep, SymbolTable,
};
use crate::levy::LevyModel;
use crate::potentials::Potential;
use crate::scalar::Real;

/// How many nodes each box gets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NRule {
    /// same `N` for every box
    Fixed(usize),
    /// smallest power of two with spacing at most `h`
    Spacing(f64),
}

impl NRule {
    pub fn nodes(&self, r_box: f64) -> usize {
        match *self {
            NRule::Fixed(n) => n,
            NRule::Spacing(h) => ((2.0 * r_box / h).ceil() as usize)
                .next_power_of_two()
                .max(8),
        }
    }
}

impl Default for NRule {
    fn default() -> Self {
        NRule::Spacing(0.0235)
    }
}

/// Numerical controls shared by the scan-based diagnostics.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GsdOptions {
    pub window: f64,
    pub n_rule: NRule,
    pub gs_tol: f64,
    /// splitting step for `T_t 1`
    pub dt: f64,
    pub polish_time: f64,
}

impl Default for GsdOptions {
    fn default() -> Self {
        Self {
            window: WINDOW,
            n_rule: NRule::default(),
            gs_tol: 1e-6,
            dt: 1e-3,
            polish_time: 10.0,
        }
    }
}

/// Box-growth verdict for one `(t, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Finite,
    Divergent,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Finite => "finite",
            Verdict::Divergent => "divergent",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormEntry {
    pub t: f64,
    pub p: Exponent,
    pub r_box: f64,
    pub n: usize,
    pub norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictEntry {
    pub t: f64,
    pub p: Exponent,
    pub verdict: Verdict,
    /// norm ratios between consecutive boxes
    pub growth: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoxRun {
    pub r_box: f64,
    pub n: usize,
    pub lambda0: f64,
    pub residual: f64,
}

/// Norms of `u_t` over boxes and the resulting verdicts.
#[derive(Debug, Clone, Serialize)]
pub struct GsdReport {
    pub model: String,
    pub potential: String,
    pub window: f64,
    pub boxes: Vec<BoxRun>,
    pub norms: Vec<NormEntry>,
    pub verdicts: Vec<VerdictEntry>,
}

impl GsdReport {
    pub fn verdict(&self, t: f64, p: Exponent) -> Option<Verdict> {
        self.verdicts
            .iter()
            .find(|v| v.t == t && v.p == p)
            .map(|v| v.verdict)
    }

    /// Flat CSV: `model,potential,t,p,R_box,N,norm,verdict`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,potential,t,p,R_box,N,norm,verdict\n");
        for e in &self.norms {
            let verdict = self.verdict(e.t, e.p).map_or("", |v| v.as_str());
            let _ = writeln!(
                out,
                "{},{},{:?},{},{:?},{},{:?},{}",
                self.model,
                self.potential,
                e.t,
                e.p.label(),
                e.r_box,
                e.n,
                e.norm,
                verdict
            );
        }
        out
    }
}

/// Classify a sequence of norms over increasing boxes.
pub fn box_trend(norms: &[f64]) -> (Verdict, Vec<f64>) {
    let growth: Vec<f64> = norms.windows(2).map(|w| w[1] / w[0]).collect();
    let big = |g: &f64| !g.is_finite() || *g > 10.0;
    let divergent = growth.windows(2).any(|w| big(&w[0]) && big(&w[1]));
    let finite = match norms {
        [.., a, b] if a.is_finite() && b.is_finite() => ((b - a) / a).abs() < 0.01,
        _ => false,
    };
    let verdict = if divergent {
        Verdict::Divergent
    } else if finite {
        Verdict::Finite
    } else {
        Verdict::Inconclusive
    };
    (verdict, growth)
}

/// Enforce monotonicity in `p` for each `t`: contradictions become inconclusive, then finite
/// propagates down and divergent propagates up.
pub fn make_coherent(entries: &mut [VerdictEntry]) {
    let mut ts: Vec<f64> = entries.iter().map(|e| e.t).collect();
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    for t in ts {
        let mut idx: Vec<usize> = (0..entries.len()).filter(|&i| entries[i].t == t).collect();
        idx.sort_by(|&a, &b| entries[a].p.0.total_cmp(&entries[b].p.0));
        let raw: Vec<Verdict> = idx.iter().map(|&i| entries[i].verdict).collect();
        let mut out = raw.clone();
        let mut contradiction = false;
        for i in 0..raw.len() {
            for j in i + 1..raw.len() {
                if raw[i] == Verdict::Divergent && raw[j] == Verdict::Finite {
                    out[i] = Verdict::Inconclusive;
                    out[j] = Verdict::Inconclusive;
                    contradiction = true;
                }
            }
        }
        if !contradiction {
            if let Some(top) = raw.iter().rposition(|&v| v == Verdict::Finite) {
                out[..top].iter_mut().for_each(|v| *v = Verdict::Finite);
            }
            if let Some(bottom) = raw.iter().position(|&v| v == Verdict::Divergent) {
                out[bottom..]
                    .iter_mut()
                    .for_each(|v| *v = Verdict::Divergent);
            }
        }
        for (k, &i) in idx.iter().enumerate() {
            entries[i].verdict = out[k];
        }
    }
}

/// Ground state on one box plus `u_t` for every requested time.
pub struct BoxState<T: Real> {
    pub grid: Grid<T>,
    pub table: SymbolTable<T>,
    pub spec: SpectralResult<T>,
    /// `(t, u_t)` in increasing `t`
    pub ratios: Vec<(f64, Field<T>)>,
}

/// Solve one box: ground state, then `T_t 1` by successive propagation through the sorted times.
pub fn solve_box<T: Real>(
    model: &LevyModel<T>,
    pot: &Potential<T>,
    r_box: f64,
    times: &[f64],
    opts: &GsdOptions,
) -> Result<BoxState<T>> {
    let grid = Grid::new(model.dim, T::lit(r_box), opts.n_rule.nodes(r_box))?;
    let table = SymbolTable::new(&model.symbol, grid)?;
    let mut gs_opts = GroundStateOptions::new(T::lit(opts.gs_tol));
    gs_opts.polish_time = T::lit(opts.polish_time);
    let spec = ground_state_with(&table, pot, gs_opts)?;
    let v = potential_on_grid(pot, &grid);
    let mut sorted: Vec<f64> = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let mut current = vec![T::one(); grid.len()];
    let mut now = 0.0;
    let mut ratios = Vec::new();
    for t in sorted {
        if t < 0.0 {
            return Err(invalid("t", "times must be non-negative"));
        }
        if t > now {
            let steps = ((t - now) / opts.dt).ceil().max(1.0) as usize;
            let step = StrangStep::new(&table, &v, T::lit((t - now) / steps as f64))?;
            for _ in 0..steps {
                step.apply(&mut current)?;
            }
            now = t;
        }
        let t_one = Field {
            grid,
            values: current.clone(),
            label: "T_t1".into(),
            time: Some(T::lit(t)),
        };
        ratios.push((t, ratio_from_semigroup(&spec, &t_one, T::lit(t)).field));
    }
    Ok(BoxState {
        grid,
        table,
        spec,
        ratios,
    })
}

/// `‖u_t‖_{L^p(μ)}` over growing boxes with box-growth verdicts.
pub fn gsd_scan<T: Real>(
    model: &LevyModel<T>,
    pot: &Potential<T>,
    t_list: &[f64],
    p_list: &[Exponent],
    box_list: &[f64],
    opts: &GsdOptions,
) -> Result<GsdReport> {
    if box_list.is_empty() || box_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(
            "boxes",
            "boxes must be non-empty and strictly increasing",
        ));
    }
    if t_list.is_empty() || p_list.is_empty() {
        return Err(invalid("t/p", "need at least one time and one exponent"));
    }
    let mut norms = Vec::new();
    let mut boxes = Vec::new();
    for &r_box in box_list {
        let state = solve_box(model, pot, r_box, t_list, opts)?;
        let nodes = state.grid.window(T::lit(opts.window));
        boxes.push(BoxRun {
            r_box,
            n: state.grid.n,
            lambda0: state.spec.lambda0.as_f64(),
            residual: state.spec.residual.as_f64(),
        });
        for &t in t_list {
            let u = &state
                .ratios
                .iter()
                .find(|(s, _)| *s == t)
                .expect("time solved")
                .1;
            for &p in p_list {
                let norm = lp_on_nodes(&u.values, &state.spec.phi0.values, &nodes, p)?.as_f64();
                norms.push(NormEntry {
                    t,
                    p,
                    r_box,
                    n: state.grid.n,
                    norm,
                });
            }
        }
    }
    let mut verdicts = Vec::new();
    for &t in t_list {
        for &p in p_list {
            let series: Vec<f64> = box_list
                .iter()
                .map(|&r| {
                    norms
                        .iter()
                        .find(|e| e.t == t && e.p == p && e.r_box == r)
                        .unwrap()
                        .norm
                })
                .collect();
            let (verdict, growth) = box_trend(&series);
            verdicts.push(VerdictEntry {
                t,
                p,
                verdict,
                growth,
            });
        }
    }
    make_coherent(&mut verdicts);
    Ok(GsdReport {
        model: model.id.clone(),
        potential: pot.describe(),
        window: opts.window,
        boxes,
        norms,
        verdicts,
    })
}
