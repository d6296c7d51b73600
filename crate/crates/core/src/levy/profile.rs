use serde::Serialize;

use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Large-jump behaviour of a profile on `r ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TailFamily<T> {
    /// `g(r) = r^{-d-γ}`.
    Polynomial { gamma: T },
    /// `g(r) = e^{c / log 3} e^{-c r^β / log(2 + r)}`.
    StretchedExponential { c: T, beta: T },
    /// `g(r) = e^{c} e^{-c r} r^{-γ}`.
    Exponential { c: T, gamma: T },
    /// `g(r) = e^{1 - r²}`; fails the jump-paring property.
    GaussianTail,
}

/// Growth order `r^power (log r)^log (log log r)^loglog` of a function at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthOrder<T> {
    pub power: T,
    pub log: T,
    pub loglog: T,
}

impl<T: Real> GrowthOrder<T> {
    pub fn new(power: T, log: T, loglog: T) -> Self {
        Self { power, log, loglog }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.power - other.power,
            self.log - other.log,
            self.loglog - other.loglog,
        )
    }

    /// Sign of the lexicographic order: +1 means the function tends to infinity,
    /// 0 means it is bounded between two positive constants, -1 means it tends to 0.
    pub fn lex_sign(&self) -> i8 {
        for c in [self.power, self.log, self.loglog] {
            if c > T::zero() {
                return 1;
            }
            if c < T::zero() {
                return -1;
            }
        }
        0
    }
}

/// Radial profile `g` of a Lévy density: `r^{-d-α}` on `(0, 1]`, a tail family beyond.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpProfile<T> {
    pub dim: usize,
    pub alpha: T,
    pub tail: TailFamily<T>,
}

impl<T: Real> JumpProfile<T> {
    pub fn new(dim: usize, alpha: T, tail: TailFamily<T>) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim", "dimension must be at least 1"));
        }
        if !(alpha > T::zero() && alpha < T::lit(2.0)) {
            return Err(invalid(
                "alpha",
                format!("small-scale index {alpha} outside (0, 2)"),
            ));
        }
        match tail {
            TailFamily::Polynomial { gamma } if !(gamma > T::zero()) => {
                return Err(invalid("gamma", "polynomial tail needs gamma > 0"));
            }
            TailFamily::StretchedExponential { c, beta } => {
                if !(c > T::zero()) {
                    return Err(invalid("c", "stretched-exponential rate must be positive"));
                }
                if !(beta > T::zero() && beta <= T::one()) {
                    return Err(invalid("beta", "beta must lie in (0, 1]"));
                }
            }
            TailFamily::Exponential { c, .. } if !(c > T::zero()) => {
                return Err(invalid("c", "exponential rate must be positive"));
            }
            _ => {}
        }
        Ok(Self { dim, alpha, tail })
    }

    fn d(&self) -> T {
        T::from_usize_lossy(self.dim)
    }

    /// `log g(r)` for `r > 0`.
    pub fn log_eval(&self, r: T) -> T {
        if r <= T::one() {
            return -(self.d() + self.alpha) * r.ln();
        }
        match self.tail {
            TailFamily::Polynomial { gamma } => -(self.d() + gamma) * r.ln(),
            TailFamily::StretchedExponential { c, beta } => {
                c / T::lit(3.0).ln() - c * r.powf(beta) / (T::lit(2.0) + r).ln()
            }
            TailFamily::Exponential { c, gamma } => c - c * r - gamma * r.ln(),
            TailFamily::GaussianTail => T::one() - r * r,
        }
    }

    /// `g(r)` for `r > 0`.
    pub fn eval(&self, r: T) -> T {
        self.log_eval(r).exp()
    }

    /// First and second derivatives of `log g` on the tail `r > 1`.
    pub fn log_derivatives(&self, r: T) -> (T, T) {
        match self.tail {
            TailFamily::Polynomial { gamma } => {
                let k = self.d() + gamma;
                (-k / r, k / (r * r))
            }
            TailFamily::Exponential { c, gamma } => (-c - gamma / r, gamma / (r * r)),
            TailFamily::GaussianTail => (T::lit(-2.0) * r, T::lit(-2.0)),
            TailFamily::StretchedExponential { c, beta } => {
                let two = T::lit(2.0);
                let l = (two + r).ln();
                let s = two + r;
                let rb = r.powf(beta);
                let q1 = beta * rb / r / l - rb / (s * l * l);
                let q2 = beta * (beta - T::one()) * rb / (r * r) / l
                    - two * beta * rb / r / (s * l * l)
                    + rb / (s * s * l * l)
                    + two * rb / (s * s * l * l * l);
                (-c * q1, -c * q2)
            }
        }
    }

    /// Smallest radius `R ≥ 1` with `g(R) ≤ rel · g(1)`, or `None` if `g` stays above it up to `cap`.
    pub fn tail_threshold_radius(&self, rel: T, cap: T) -> Option<T> {
        let target = rel.ln() + self.log_eval(T::one());
        let mut hi = T::lit(2.0);
        while self.log_eval(hi) > target {
            hi *= T::lit(2.0);
            if hi > cap {
                return None;
            }
        }
        let mut lo = hi / T::lit(2.0);
        if lo < T::one() {
            lo = T::one();
        }
        for _ in 0..200 {
            let mid = T::lit(0.5) * (lo + hi);
            if self.log_eval(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= T::epsilon() * hi {
                break;
            }
        }
        Some(hi)
    }

    /// Symbolic admissibility for the jump-paring property of the catalog tail families.
    pub fn is_jump_paring_family(&self) -> bool {
        match self.tail {
            TailFamily::Polynomial { .. } | TailFamily::StretchedExponential { .. } => true,
            TailFamily::Exponential { gamma, .. } => gamma > (self.d() + T::one()) / T::lit(2.0),
            TailFamily::GaussianTail => false,
        }
    }

    /// Growth order of `|log g(r)|` as `r → ∞`.
    pub fn log_decay_order(&self) -> GrowthOrder<T> {
        let z = T::zero();
        match self.tail {
            TailFamily::Polynomial { .. } => GrowthOrder::new(z, T::one(), z),
            TailFamily::StretchedExponential { beta, .. } => GrowthOrder::new(beta, -T::one(), z),
            TailFamily::Exponential { .. } => GrowthOrder::new(T::one(), z, z),
            TailFamily::GaussianTail => GrowthOrder::new(T::lit(2.0), z, z),
        }
    }

    pub fn describe(&self) -> String {
        match self.tail {
            TailFamily::Polynomial { gamma } => format!("polynomial(gamma={gamma})"),
            TailFamily::StretchedExponential { c, beta } => {
                format!("stretched_exponential(c={c}, beta={beta})")
            }
            TailFamily::Exponential { c, gamma } => format!("exponential(c={c}, gamma={gamma})"),
            TailFamily::GaussianTail => "gaussian_tail".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly() -> JumpProfile<f64> {
        JumpProfile::new(1, 1.0, TailFamily::Polynomial { gamma: 1.0 }).unwrap()
    }

    #[test]
    fn density_examples() {
        let p = poly();
        assert!((p.eval(2.0) - 0.25).abs() < 1e-15);
        assert!((p.eval(0.5) - 4.0).abs() < 1e-14);
        let e = JumpProfile::new(1, 1.0, TailFamily::Exponential { c: 1.0, gamma: 1.0 }).unwrap();
        assert!((e.eval(2.0) - 1f64.exp() * (-2f64).exp() / 2.0).abs() < 1e-15);
        assert!((e.eval(2.0) - 0.18394).abs() < 1e-5);
    }

    #[test]
    fn continuous_at_one() {
        for tail in [
            TailFamily::<f64>::Polynomial { gamma: 3.0 },
            TailFamily::StretchedExponential { c: 1.0, beta: 0.5 },
            TailFamily::Exponential { c: 2.0, gamma: 1.5 },
            TailFamily::GaussianTail,
        ] {
            let p = JumpProfile::new(1, 1.2, tail).unwrap();
            assert!((p.eval(1.0 + 1e-12) - p.eval(1.0)).abs() < 1e-9, "{tail:?}");
        }
    }

    #[test]
    fn log_derivatives_match_finite_differences() {
        for tail in [
            TailFamily::<f64>::Polynomial { gamma: 0.7 },
            TailFamily::StretchedExponential { c: 1.3, beta: 0.4 },
            TailFamily::Exponential { c: 1.0, gamma: 1.5 },
            TailFamily::GaussianTail,
        ] {
            let p = JumpProfile::new(1, 1.0, tail).unwrap();
            for r in [1.5, 4.0, 17.0] {
                let h = 1e-4 * r;
                let fd1 = (p.log_eval(r + h) - p.log_eval(r - h)) / (2.0 * h);
                let fd2 = (p.log_eval(r + h) - 2.0 * p.log_eval(r) + p.log_eval(r - h)) / (h * h);
                let (d1, d2) = p.log_derivatives(r);
                assert!((d1 - fd1).abs() < 1e-6 * (1.0 + d1.abs()), "{tail:?} r={r}");
                assert!(
                    (d2 - fd2).abs() < 1e-4 * (1.0 + d2.abs()),
                    "{tail:?} r={r}: {d2} vs {fd2}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(JumpProfile::new(1, 2.0, TailFamily::Polynomial { gamma: 1.0 }).is_err());
        assert!(JumpProfile::new(1, 1.0, TailFamily::Polynomial { gamma: 0.0 }).is_err());
        assert!(JumpProfile::new(
            1,
            1.0,
            TailFamily::StretchedExponential { c: 1.0, beta: 1.5 }
        )
        .is_err());
    }

    #[test]
    fn threshold_radius() {
        let p = poly();
        let r = p.tail_threshold_radius(1e-16, 1e30).unwrap();
        assert!((p.eval(r) - 1e-16).abs() < 1e-20);
    }
}
