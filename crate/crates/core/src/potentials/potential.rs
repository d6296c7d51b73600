use std::fmt;
use std::sync::Arc;

use crate::error::{invalid, Result};
use crate::levy::GrowthOrder;
use crate::scalar::{norm, Real};

/// Shape of a potential; every family is radial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialFamily<T> {
    /// `f(r) = (1+r)^{δ₁} [log(2+r)]^{δ₂} [log(2+log(2+r))]^{δ₃}`
    PowerLogLogLog { d1: T, d2: T, d3: T },
    /// `|x|²`
    Quadratic,
    /// user-supplied evaluator without a declared growth order
    Custom,
}

type Evaluator<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;

/// `V(x) = scale · f(x)`.
#[derive(Clone)]
pub struct Potential<T> {
    pub family: PotentialFamily<T>,
    pub scale: T,
    name: String,
    custom: Option<Evaluator<T>>,
    locally_bounded: bool,
}

impl<T: Real> fmt::Debug for Potential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Potential")
            .field("family", &self.family)
            .field("scale", &self.scale)
            .field("name", &self.name)
            .finish()
    }
}

impl<T: Real> Potential<T> {
    pub fn power_log_loglog(d1: T, d2: T, d3: T) -> Self {
        Self {
            family: PotentialFamily::PowerLogLogLog { d1, d2, d3 },
            scale: T::one(),
            name: format!("power-log-loglog({d1},{d2},{d3})"),
            custom: None,
            locally_bounded: true,
        }
    }

    pub fn quadratic() -> Self {
        Self {
            family: PotentialFamily::Quadratic,
            scale: T::one(),
            name: "quadratic".into(),
            custom: None,
            locally_bounded: true,
        }
    }

    /// `V ≡ c`.
    pub fn constant(c: T) -> Self {
        let z = T::zero();
        Self {
            name: format!("constant({c})"),
            ..Self::power_log_loglog(z, z, z)
        }
        .scaled_unchecked(c)
    }

    pub fn custom(
        name: &str,
        locally_bounded: bool,
        f: impl Fn(&[T]) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            family: PotentialFamily::Custom,
            scale: T::one(),
            name: name.to_string(),
            custom: Some(Arc::new(f)),
            locally_bounded,
        }
    }

    /// Build a family potential from its config name.
    pub fn from_family(family: &str, d1: T, d2: T, d3: T) -> Result<Self> {
        match family {
            "power-log-loglog" => Ok(Self::power_log_loglog(d1, d2, d3)),
            "quadratic" => Ok(Self::quadratic()),
            other => Err(crate::Error::UnknownPotential(other.to_string())),
        }
    }

    pub fn scaled(self, c: T) -> Result<Self> {
        if !(c > T::zero()) {
            return Err(invalid("scale", "potential scale must be positive"));
        }
        Ok(self.scaled_unchecked(c))
    }

    fn scaled_unchecked(mut self, c: T) -> Self {
        self.scale *= c;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn describe(&self) -> String {
        if self.scale == T::one() {
            self.name.clone()
        } else {
            format!("{}*{}", self.scale, self.name)
        }
    }

    pub fn is_locally_bounded(&self) -> bool {
        self.locally_bounded
    }

    /// Radial profile `f(r)` of a family potential.
    pub fn radial(&self, r: T) -> Option<T> {
        let two = T::lit(2.0);
        match self.family {
            PotentialFamily::PowerLogLogLog { d1, d2, d3 } => {
                let l = (two + r).ln();
                let ll = (two + l).ln();
                Some(self.scale * (T::one() + r).powf(d1) * l.powf(d2) * ll.powf(d3))
            }
            PotentialFamily::Quadratic => Some(self.scale * r * r),
            PotentialFamily::Custom => None,
        }
    }

    /// `V(x)`.
    pub fn eval(&self, x: &[T]) -> T {
        match &self.custom {
            Some(f) => self.scale * f(x),
            None => self.radial(norm(x)).expect("family potential"),
        }
    }

    /// Growth order of `V` at infinity, when declared.
    pub fn growth_order(&self) -> Option<GrowthOrder<T>> {
        match self.family {
            PotentialFamily::PowerLogLogLog { d1, d2, d3 } => Some(GrowthOrder::new(d1, d2, d3)),
            PotentialFamily::Quadratic => Some(GrowthOrder::new(T::lit(2.0), T::zero(), T::zero())),
            PotentialFamily::Custom => None,
        }
    }

    /// Whether `f` is nondecreasing on `[0, ∞)`, which makes `sup_ball` exact at `|x| + r`.
    fn radially_monotone(&self) -> bool {
        match self.family {
            PotentialFamily::PowerLogLogLog { d1, d2, d3 } => {
                d1 >= T::zero() && d2 >= T::zero() && d3 >= T::zero()
            }
            PotentialFamily::Quadratic => true,
            PotentialFamily::Custom => false,
        }
    }

    /// `V_r*(x) = sup_{B(x,r)} V`.
    pub fn sup_ball(&self, x: &[T], r: T) -> Result<T> {
        if !(r > T::zero() && r <= T::one()) {
            return Err(invalid("r", "ball radius must lie in (0, 1]"));
        }
        let rho = norm(x);
        if self.radially_monotone() {
            return Ok(self.radial(rho + r).expect("family potential"));
        }
        const SAMPLES: usize = 256;
        if self.custom.is_none() {
            // radial: sup over the radii reachable inside the ball
            let lo = (rho - r).max(T::zero());
            let hi = rho + r;
            let best = (0..=SAMPLES)
                .map(|i| {
                    self.radial(
                        lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(SAMPLES),
                    )
                    .unwrap()
                })
                .fold(T::neg_infinity(), T::max);
            return Ok(best);
        }
        let d = x.len();
        let mut best = self.eval(x);
        let mut y = x.to_vec();
        // shells of points along the coordinate axes and the main diagonals
        let diag = T::one() / T::from_usize_lossy(d).sqrt();
        for shell in 1..=16 {
            let s = r * T::from_usize_lossy(shell) / T::lit(16.0);
            for axis in 0..d {
                for sign in [-T::one(), T::one()] {
                    y.copy_from_slice(x);
                    y[axis] += sign * s;
                    best = best.max(self.eval(&y));
                }
            }
            if d > 1 {
                for mask in 0..(1usize << d.min(10)) {
                    for (i, yi) in y.iter_mut().enumerate() {
                        let sign = if i < 10 && mask & (1 << i) != 0 {
                            -T::one()
                        } else {
                            T::one()
                        };
                        *yi = x[i] + sign * s * diag;
                    }
                    best = best.max(self.eval(&y));
                }
            }
        }
        Ok(best)
    }

    /// Local boundedness (sufficient for the local Kato class) and confinement.
    pub fn kato_confining_check(&self, dim: usize) -> (bool, String) {
        if !self.locally_bounded {
            return (false, "not locally bounded".into());
        }
        let confining = match self.family {
            PotentialFamily::PowerLogLogLog { .. } | PotentialFamily::Quadratic => {
                self.scale > T::zero() && self.growth_order().unwrap().lex_sign() > 0
            }
            PotentialFamily::Custom => self.ray_probe(dim),
        };
        if confining {
            (true, "locally bounded and confining".into())
        } else {
            (false, "not confining".into())
        }
    }

    /// Sampled confinement: along every axis ray, `V` must keep growing past each level it reaches.
    fn ray_probe(&self, dim: usize) -> bool {
        let radii: Vec<T> = (0..7).map(|k| T::lit(10f64.powi(k))).collect();
        let mut x = vec![T::zero(); dim];
        for axis in 0..dim {
            for sign in [-T::one(), T::one()] {
                let vals: Vec<T> = radii
                    .iter()
                    .map(|&r| {
                        x.iter_mut().for_each(|v| *v = T::zero());
                        x[axis] = sign * r;
                        self.eval(&x)
                    })
                    .collect();
                let rising = vals.windows(2).skip(2).all(|w| w[1] > w[0] * T::lit(1.01));
                if !rising || !vals.iter().all(|v| v.is_finite()) {
                    return false;
                }
            }
        }
        true
    }
}
