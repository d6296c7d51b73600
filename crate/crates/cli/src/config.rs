//! Experiment configuration.
//!
//! The file is TOML: `[section]` headers followed by `key = value` lines. Every section is
//! optional and falls back to the defaults below; unknown keys are rejected.
//!
//! ```toml
//! [model]
//! id = "stable"
//! dim = 1
//! params = { alpha = 1.0 }
//!
//! [potential]
//! family = "power-log-loglog"   # or "quadratic", "constant"
//! d1 = 2.0
//!
//! [grid]
//! boxes = [12.0, 16.0, 24.0]
//! spacing = 0.0235              # or a fixed `n = 1024`
//!
//! [run]
//! t = [0.25, 0.5]
//! p = [3.0, 4.0, "inf"]
//! seed = 42
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use levylab::gsd::{Exponent, GsdOptions, NRule};
use levylab::levy::LevyModel;
use levylab::potentials::Potential;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub potential: PotentialSpec,
    pub grid: GridSpec,
    pub run: RunSpec,
    pub classify: ClassifySpec,
    pub output: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSpec {
    pub id: String,
    pub dim: usize,
    pub params: BTreeMap<String, f64>,
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self {
            id: "stable".into(),
            dim: 1,
            params: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PotentialSpec {
    pub family: String,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub scale: f64,
    /// level of the `constant` family
    pub value: f64,
}

impl Default for PotentialSpec {
    fn default() -> Self {
        Self {
            family: "quadratic".into(),
            d1: 0.0,
            d2: 0.0,
            d3: 0.0,
            scale: 1.0,
            value: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub boxes: Vec<f64>,
    /// fixed node count per axis; overrides `spacing`
    pub n: Option<usize>,
    pub spacing: f64,
    pub window: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            boxes: vec![12.0],
            n: None,
            spacing: 0.0235,
            window: 0.75,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PValue {
    Finite(f64),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSpec {
    pub t: Vec<f64>,
    pub p: Vec<PValue>,
    pub tol: f64,
    pub seed: Option<u64>,
    pub n_paths: usize,
    pub dt: f64,
    pub epsilon: f64,
    pub x0: Vec<f64>,
    /// also solve the dense eigenproblem in `groundstate` (N ≤ 1024)
    pub dense: bool,
    /// extra imaginary time after the ground state converges
    pub polish_time: f64,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            t: vec![0.5],
            p: vec![PValue::Finite(4.0), PValue::Named("inf".into())],
            tol: 1e-6,
            seed: None,
            n_paths: 100_000,
            dt: 1e-3,
            epsilon: 0.25,
            x0: Vec::new(),
            dense: false,
            polish_time: 10.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifySpec {
    /// `(δ₁, δ₂, δ₃)` points; empty means the built-in table for the model's tail family
    pub points: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: String,
    pub format: Format,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: "levylab-out".into(),
            format: Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text)
            .map_err(|e| CliError::Config(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if self.grid.boxes.is_empty() {
            return bad("grid.boxes must not be empty");
        }
        if self.run.t.is_empty() {
            return bad("run.t must not be empty");
        }
        if self.run.p.is_empty() {
            return bad("run.p must not be empty");
        }
        if !self.run.x0.is_empty() && self.run.x0.len() != self.model.dim {
            return bad("run.x0 must have one coordinate per dimension");
        }
        self.exponents()?;
        self.model()?;
        self.potential()?;
        Ok(())
    }

    pub fn model(&self) -> Result<LevyModel<f64>, CliError> {
        Ok(LevyModel::from_catalog(
            &self.model.id,
            self.model.dim,
            &self.model.params,
        )?)
    }

    pub fn potential(&self) -> Result<Potential<f64>, CliError> {
        let p = &self.potential;
        let base = match p.family.as_str() {
            "constant" => return Ok(Potential::constant(p.value)),
            family => Potential::from_family(family, p.d1, p.d2, p.d3)?,
        };
        Ok(base.scaled(p.scale)?)
    }

    pub fn exponents(&self) -> Result<Vec<Exponent>, CliError> {
        self.run
            .p
            .iter()
            .map(|p| match p {
                PValue::Finite(v) => Ok(Exponent::new(*v)?),
                PValue::Named(s) if s == "inf" => Ok(Exponent::INFINITY),
                PValue::Named(s) => Err(CliError::Config(format!(
                    "run.p entry `{s}` is neither a number nor \"inf\""
                ))),
            })
            .collect()
    }

    pub fn n_rule(&self) -> NRule {
        match self.grid.n {
            Some(n) => NRule::Fixed(n),
            None => NRule::Spacing(self.grid.spacing),
        }
    }

    pub fn gsd_options(&self) -> GsdOptions {
        GsdOptions {
            window: self.grid.window,
            n_rule: self.n_rule(),
            gs_tol: self.run.tol,
            dt: self.run.dt,
            polish_time: self.run.polish_time,
        }
    }

    pub fn x0(&self) -> Vec<f64> {
        if self.run.x0.is_empty() {
            vec![0.0; self.model.dim]
        } else {
            self.run.x0.clone()
        }
    }
}
