use std::collections::BTreeMap;

use serde::Serialize;

use super::profile::{JumpProfile, TailFamily};
use super::symbol::{stable_density_constant, ClosedForm, JumpPart, LevySymbol};
use crate::error::{invalid, Error, Result};
use crate::scalar::{norm, Real};

/// Numeric model parameters keyed by name (`alpha`, `mass`, `rate`, `gamma`, `beta`, `c`, `diffusion`).
pub type ModelParams = BTreeMap<String, f64>;

/// Which path samplers can simulate the model exactly or by compound-Poisson approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplerFlags {
    pub exact_stable: bool,
    pub compound_poisson: bool,
}

/// A catalog entry with its default parameters.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub summary: &'static str,
    pub defaults: &'static [(&'static str, f64)],
}

const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        id: "stable",
        summary: "isotropic alpha-stable, psi = |xi|^alpha",
        defaults: &[("alpha", 1.0)],
    },
    CatalogEntry {
        id: "relativistic",
        summary: "relativistic stable, psi = (|xi|^2 + m^(2/alpha))^(alpha/2) - m",
        defaults: &[("alpha", 1.0), ("mass", 1.0)],
    },
    CatalogEntry {
        id: "tempered",
        summary: "exponentially tempered stable with rate c",
        defaults: &[("alpha", 1.0), ("rate", 1.0)],
    },
    CatalogEntry {
        id: "geometric-stable",
        summary: "geometric stable, psi = log(1 + |xi|^alpha)",
        defaults: &[("alpha", 1.0)],
    },
    CatalogEntry {
        id: "jump-diffusion",
        summary: "Brownian part plus stable jumps, psi = a|xi|^2 + |xi|^alpha",
        defaults: &[("alpha", 1.0), ("diffusion", 1.0)],
    },
    CatalogEntry {
        id: "layered",
        summary: "stable small jumps, polynomial large jumps r^(-d-gamma)",
        defaults: &[("alpha", 1.0), ("gamma", 3.0)],
    },
    CatalogEntry {
        id: "stretched-exp",
        summary: "stable small jumps, stretched-exponential large jumps",
        defaults: &[("alpha", 1.0), ("c", 1.0), ("beta", 0.5)],
    },
    CatalogEntry {
        id: "gaussian-tail-counterexample",
        summary: "Gaussian-tailed jumps, violates the jump-paring property",
        defaults: &[("alpha", 1.0)],
    },
    CatalogEntry {
        id: "brownian",
        summary: "pure diffusion, psi = a|xi|^2",
        defaults: &[("diffusion", 1.0)],
    },
];

pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

/// Symmetric Lévy process on `ℝ^d` described by its exponent and jump profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevyModel<T> {
    pub id: String,
    pub dim: usize,
    pub symbol: LevySymbol<T>,
    pub samplers: SamplerFlags,
    pub params: ModelParams,
}

fn param(entry: &CatalogEntry, given: &ModelParams, name: &str) -> f64 {
    given
        .get(name)
        .copied()
        .or_else(|| {
            entry
                .defaults
                .iter()
                .find(|(k, _)| *k == name)
                .map(|(_, v)| *v)
        })
        .expect("catalog default present")
}

impl<T: Real> LevyModel<T> {
    /// Build a catalog model; unknown parameter names are rejected.
    pub fn from_catalog(id: &str, dim: usize, given: &ModelParams) -> Result<Self> {
        let entry = CATALOG
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownModel(id.to_string()))?;
        for key in given.keys() {
            if !entry.defaults.iter().any(|(k, _)| k == key) {
                return Err(invalid(
                    "params",
                    format!("`{key}` is not a parameter of model '{id}'"),
                ));
            }
        }
        let p = |name: &str| param(entry, given, name);
        let lit = T::lit;
        let d = dim as f64;
        let poly = |alpha: f64, gamma: f64| {
            JumpProfile::new(
                dim,
                lit(alpha),
                TailFamily::Polynomial { gamma: lit(gamma) },
            )
        };
        let jumps = |profile: JumpProfile<T>, scale: f64| {
            Some(JumpPart {
                profile,
                scale: lit(scale),
            })
        };
        let exact = SamplerFlags {
            exact_stable: true,
            compound_poisson: true,
        };
        let cp_only = SamplerFlags {
            exact_stable: false,
            compound_poisson: true,
        };
        let none = SamplerFlags {
            exact_stable: false,
            compound_poisson: false,
        };

        let (symbol, samplers) = match id {
            "stable" => {
                let a = p("alpha");
                let sym = LevySymbol::new(
                    dim,
                    T::zero(),
                    ClosedForm::Stable { alpha: lit(a) },
                    jumps(poly(a, a)?, stable_density_constant(dim, a)),
                )?;
                (sym, exact)
            }
            "relativistic" => {
                let (a, m) = (p("alpha"), p("mass"));
                if !(m >= 0.0) {
                    return Err(invalid("mass", "mass must be non-negative"));
                }
                let tail = if m > 0.0 {
                    TailFamily::Exponential {
                        c: lit(m.powf(1.0 / a)),
                        gamma: lit((d + a + 1.0) / 2.0),
                    }
                } else {
                    TailFamily::Polynomial { gamma: lit(a) }
                };
                let profile = JumpProfile::new(dim, lit(a), tail)?;
                let sym = LevySymbol::new(
                    dim,
                    T::zero(),
                    ClosedForm::Relativistic {
                        alpha: lit(a),
                        mass: lit(m),
                    },
                    jumps(profile, stable_density_constant(dim, a)),
                )?;
                (sym, none)
            }
            "tempered" => {
                let (a, c) = (p("alpha"), p("rate"));
                let profile = JumpProfile::new(
                    dim,
                    lit(a),
                    TailFamily::Exponential {
                        c: lit(c),
                        gamma: lit(d + a),
                    },
                )?;
                let cf = if dim == 1 {
                    ClosedForm::Tempered {
                        alpha: lit(a),
                        rate: lit(c),
                    }
                } else {
                    ClosedForm::None
                };
                (
                    LevySymbol::new(
                        dim,
                        T::zero(),
                        cf,
                        jumps(profile, stable_density_constant(dim, a)),
                    )?,
                    none,
                )
            }
            "geometric-stable" => {
                let a = p("alpha");
                let sym = LevySymbol::new(
                    dim,
                    T::zero(),
                    ClosedForm::GeometricStable { alpha: lit(a) },
                    jumps(poly(a, a)?, 1.0),
                )?;
                (sym, none)
            }
            "jump-diffusion" => {
                let (a, diff) = (p("alpha"), p("diffusion"));
                if !(diff > 0.0) {
                    return Err(invalid("diffusion", "jump-diffusion needs a > 0"));
                }
                let sym = LevySymbol::new(
                    dim,
                    lit(diff),
                    ClosedForm::JumpDiffusion { alpha: lit(a) },
                    jumps(poly(a, a)?, stable_density_constant(dim, a)),
                )?;
                (sym, exact)
            }
            "layered" => {
                let (a, g) = (p("alpha"), p("gamma"));
                (
                    LevySymbol::new(dim, T::zero(), ClosedForm::None, jumps(poly(a, g)?, 1.0))?,
                    cp_only,
                )
            }
            "stretched-exp" => {
                let profile = JumpProfile::new(
                    dim,
                    lit(p("alpha")),
                    TailFamily::StretchedExponential {
                        c: lit(p("c")),
                        beta: lit(p("beta")),
                    },
                )?;
                (
                    LevySymbol::new(dim, T::zero(), ClosedForm::None, jumps(profile, 1.0))?,
                    cp_only,
                )
            }
            "gaussian-tail-counterexample" => {
                let profile = JumpProfile::new(dim, lit(p("alpha")), TailFamily::GaussianTail)?;
                (
                    LevySymbol::new(dim, T::zero(), ClosedForm::None, jumps(profile, 1.0))?,
                    cp_only,
                )
            }
            "brownian" => (LevySymbol::gaussian(dim, lit(p("diffusion")))?, none),
            _ => unreachable!(),
        };
        let mut params: ModelParams = entry
            .defaults
            .iter()
            .map(|(k, v)| (k.to_string(), *v))
            .collect();
        params.extend(given.iter().map(|(k, v)| (k.clone(), *v)));
        Ok(Self {
            id: id.to_string(),
            dim,
            symbol,
            samplers,
            params,
        })
    }

    /// Model with default parameters.
    pub fn named(id: &str, dim: usize) -> Result<Self> {
        Self::from_catalog(id, dim, &ModelParams::new())
    }

    pub fn profile(&self) -> Option<&JumpProfile<T>> {
        self.symbol.jumps().map(|j| &j.profile)
    }

    pub fn alpha(&self) -> Option<T> {
        self.profile().map(|p| p.alpha)
    }

    pub fn diffusion(&self) -> T {
        self.symbol.diffusion()
    }

    pub fn is_pure_diffusion(&self) -> bool {
        self.symbol.is_pure_diffusion()
    }

    /// `ψ(ξ)`.
    pub fn eval_symbol(&self, xi: &[T]) -> Result<T> {
        self.symbol.eval(xi)
    }

    /// Profile value `g(|x|)` used as the Lévy density (normalisation constant 1).
    pub fn eval_density(&self, x: &[T]) -> Result<T> {
        let profile = self
            .profile()
            .ok_or(Error::Precondition("model has no jump part".into()))?;
        if x.len() != self.dim {
            return Err(invalid(
                "x",
                format!("expected a point in dimension {}", self.dim),
            ));
        }
        let r = norm(x);
        if r == T::zero() {
            return Err(Error::SingularDensity);
        }
        Ok(profile.eval(r))
    }
}
