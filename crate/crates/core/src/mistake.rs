//! Mistake functions `g(n, ε)`.
//!
//! A mistake function is nondecreasing in `n`, its density `g(n,ε)/n`
//! vanishes in the double limit `n → ∞` then `ε → 0`, and it is frozen at
//! `ε0` for larger radii. Each built-in family satisfies the density
//! condition analytically.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MistakeFamily {
    Zero,
    /// `g = c`
    Constant(f64),
    /// `g = n·ε`
    Linear,
    /// `g = alpha·ln(n+1)`
    Logarithmic(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MistakeFunction {
    epsilon0: f64,
    family: MistakeFamily,
}

impl MistakeFunction {
    pub fn new(family: MistakeFamily, epsilon0: f64) -> Result<Self> {
        if !(epsilon0 > 0.0 && epsilon0.is_finite()) {
            return Err(Error::InvalidArgument(format!("eps0 {epsilon0} must be positive")));
        }
        match family {
            MistakeFamily::Constant(c) | MistakeFamily::Logarithmic(c) if !(c >= 0.0 && c.is_finite()) => {
                return Err(Error::InvalidArgument(format!("mistake parameter {c} must be nonnegative")));
            }
            _ => {}
        }
        Ok(Self { epsilon0, family })
    }

    pub fn zero() -> Self {
        Self {
            epsilon0: 1.0,
            family: MistakeFamily::Zero,
        }
    }

    /// `g(n, ε) = nε` with `ε0 = 1`.
    pub fn linear() -> Self {
        Self {
            epsilon0: 1.0,
            family: MistakeFamily::Linear,
        }
    }

    pub fn epsilon0(&self) -> f64 {
        self.epsilon0
    }

    pub fn family(&self) -> MistakeFamily {
        self.family
    }

    pub fn with_epsilon0(self, epsilon0: f64) -> Result<Self> {
        Self::new(self.family, epsilon0)
    }

    /// `g(n, min(ε, ε0))`.
    pub fn value(&self, n: u64, eps: f64) -> f64 {
        let eps = eps.min(self.epsilon0);
        match self.family {
            MistakeFamily::Zero => 0.0,
            MistakeFamily::Constant(c) => c,
            MistakeFamily::Linear => n as f64 * eps,
            MistakeFamily::Logarithmic(alpha) => alpha * ((n + 1) as f64).ln(),
        }
    }

    /// Number of orbit times allowed to fail: `floor(g(n, min(ε, ε0)))`.
    pub fn budget(&self, n: u64, eps: f64) -> u64 {
        let v = self.value(n, eps).floor();
        if v <= 0.0 {
            0
        } else {
            v as u64
        }
    }

    /// Checks monotonicity in `n` on `1..=n_max` for each radius in
    /// `eps_grid` and reports `g(n_max, ε)/n_max`.
    pub fn validate(&self, n_max: u64, eps_grid: &[f64]) -> Result<ValidationReport> {
        if n_max < 2 || eps_grid.is_empty() {
            return Err(Error::InvalidArgument("need n_max >= 2 and a nonempty grid".into()));
        }
        let mut densities = Vec::with_capacity(eps_grid.len());
        for &eps in eps_grid {
            let mut prev = self.value(1, eps);
            for n in 1..n_max {
                let next = self.value(n + 1, eps);
                if prev > next {
                    return Err(Error::MonotonicityViolation { n, eps });
                }
                prev = next;
            }
            densities.push((eps, prev / n_max as f64));
        }
        Ok(ValidationReport { n_max, densities })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub n_max: u64,
    /// `(ε, g(n_max, ε)/n_max)` for each grid radius.
    pub densities: Vec<(f64, f64)>,
}

impl fmt::Display for MistakeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            MistakeFamily::Zero => f.write_str("zero"),
            MistakeFamily::Constant(c) => write!(f, "const:{c}"),
            MistakeFamily::Linear => f.write_str("linear"),
            MistakeFamily::Logarithmic(a) => write!(f, "log:{a}"),
        }
    }
}

/// Parses `zero`, `const:<c>`, `linear` or `log:<alpha>` with `ε0 = 1`.
impl FromStr for MistakeFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown mistake function `{s}`"));
        let param = |p: &str| p.trim().parse::<f64>().map_err(|_| bad());
        let family = match s.trim().split_once(':') {
            None => match s.trim() {
                "zero" => MistakeFamily::Zero,
                "linear" => MistakeFamily::Linear,
                _ => return Err(bad()),
            },
            Some(("const", p)) => MistakeFamily::Constant(param(p)?),
            Some(("log", p)) => MistakeFamily::Logarithmic(param(p)?),
            Some(_) => return Err(bad()),
        };
        Self::new(family, 1.0)
    }
}
