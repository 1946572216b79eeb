//! Continuous potentials and Birkhoff sums.

use crate::error::{Error, Result};
use crate::point::Point;
use crate::system::{theta_pow, SftSystem};

#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// `φ(x) = table[x_0 … x_{w-1}]`, words indexed lexicographically.
    LocallyConstant { window: usize, table: Vec<f64> },
    /// `φ(x) = Σ_k rho^k · symbol_values[x_k]`.
    GeometricSeries { rho: f64, symbol_values: Vec<f64> },
}

impl Potential {
    pub fn locally_constant(sys: &SftSystem, window: usize, table: Vec<f64>) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidPotential("window must be positive".into()));
        }
        let expected = (sys.alphabet_size() as u64)
            .checked_pow(window as u32)
            .filter(|&n| n <= 1 << 24)
            .ok_or_else(|| Error::InvalidPotential("window too large".into()))?;
        if table.len() as u64 != expected {
            return Err(Error::InvalidPotential(format!(
                "table has {} entries, expected {expected}",
                table.len()
            )));
        }
        if table.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential("non-finite table entry".into()));
        }
        Ok(Potential::LocallyConstant { window, table })
    }

    pub fn geometric(sys: &SftSystem, rho: f64, symbol_values: Vec<f64>) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidPotential(format!("rho {rho} not in (0,1)")));
        }
        if symbol_values.len() != sys.alphabet_size() {
            return Err(Error::InvalidPotential(format!(
                "{} symbol values for an alphabet of {}",
                symbol_values.len(),
                sys.alphabet_size()
            )));
        }
        if symbol_values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential("non-finite symbol value".into()));
        }
        Ok(Potential::GeometricSeries { rho, symbol_values })
    }

    /// `φ ≡ 0`.
    pub fn zero(sys: &SftSystem) -> Self {
        Potential::LocallyConstant {
            window: 1,
            table: vec![0.0; sys.alphabet_size()],
        }
    }

    /// `φ(x) = values[x_0]`.
    pub fn first_symbol(sys: &SftSystem, values: Vec<f64>) -> Result<Self> {
        Self::locally_constant(sys, 1, values)
    }

    /// `φ + c`.
    pub fn add_constant(&self, c: f64) -> Self {
        match self {
            Potential::LocallyConstant { window, table } => Potential::LocallyConstant {
                window: *window,
                table: table.iter().map(|v| v + c).collect(),
            },
            Potential::GeometricSeries { rho, symbol_values } => Potential::GeometricSeries {
                rho: *rho,
                symbol_values: symbol_values.iter().map(|v| v + c * (1.0 - rho)).collect(),
            },
        }
    }

    /// `φ(f^j x)`, evaluated exactly.
    pub fn eval_shifted(&self, sys: &SftSystem, x: &Point, j: usize) -> f64 {
        match self {
            Potential::LocallyConstant { window, table } => {
                let a = sys.alphabet_size();
                let idx = (0..*window).fold(0usize, |acc, k| acc * a + x.symbol(j + k) as usize);
                table[idx]
            }
            Potential::GeometricSeries { rho, symbol_values } => {
                let pre = x.preperiod().len();
                let period = x.period();
                let head = pre.saturating_sub(j);
                let mut sum = 0.0;
                let mut w = 1.0;
                for k in 0..head {
                    sum += w * symbol_values[x.symbol(j + k) as usize];
                    w *= rho;
                }
                let phase = (j + head - pre) % period.len();
                let mut cycle = 0.0;
                let mut wc = 1.0;
                for k in 0..period.len() {
                    cycle += wc * symbol_values[period[(phase + k) % period.len()] as usize];
                    wc *= rho;
                }
                sum + w * cycle / (1.0 - wc)
            }
        }
    }

    pub fn eval(&self, sys: &SftSystem, x: &Point) -> f64 {
        self.eval_shifted(sys, x, 0)
    }

    /// `S_n φ(x) = Σ_{j<n} φ(f^j x)`.
    pub fn birkhoff_sum(&self, sys: &SftSystem, x: &Point, n: usize) -> f64 {
        (0..n).map(|j| self.eval_shifted(sys, x, j)).sum()
    }

    /// Values of `φ` on admissible windows (locally constant case only).
    fn admissible_values(&self, sys: &SftSystem) -> Option<Vec<(Vec<u8>, f64)>> {
        match self {
            Potential::LocallyConstant { window, table } => {
                let a = sys.alphabet_size();
                Some(
                    sys.enumerate_words(*window)
                        .into_iter()
                        .map(|w| {
                            let idx = w.iter().fold(0usize, |acc, &s| acc * a + s as usize);
                            (w, table[idx])
                        })
                        .collect(),
                )
            }
            Potential::GeometricSeries { .. } => None,
        }
    }

    /// Upper bound on `sup φ − inf φ` (exact for locally constant potentials).
    pub fn spread(&self, sys: &SftSystem) -> f64 {
        match self {
            Potential::GeometricSeries { rho, symbol_values } => {
                let (lo, hi) = min_max(symbol_values.iter().copied());
                (hi - lo) / (1.0 - rho)
            }
            _ => {
                let vals = self.admissible_values(sys).unwrap_or_default();
                let (lo, hi) = min_max(vals.iter().map(|(_, v)| *v));
                hi - lo
            }
        }
    }

    /// Upper bound on the sup norm `‖φ‖` (exact for locally constant potentials).
    pub fn sup_norm(&self, sys: &SftSystem) -> f64 {
        match self {
            Potential::GeometricSeries { rho, symbol_values } => {
                symbol_values.iter().fold(0.0f64, |m, v| m.max(v.abs())) / (1.0 - rho)
            }
            _ => self
                .admissible_values(sys)
                .unwrap_or_default()
                .iter()
                .fold(0.0f64, |m, (_, v)| m.max(v.abs())),
        }
    }

    /// `ε(δ) = sup{|φ(x) − φ(y)| : d(x,y) < δ}`: exact for locally constant
    /// potentials, a certified upper bound for geometric series.
    pub fn modulus_of_continuity(&self, sys: &SftSystem, delta: f64) -> f64 {
        self.modulus_at_agreement(sys, sys.forced_agreement(delta))
    }

    /// `sup{|φ(x) − φ(y)|}` over pairs sharing their first `k` coordinates.
    pub fn modulus_at_agreement(&self, sys: &SftSystem, k: u64) -> f64 {
        match self {
            Potential::GeometricSeries { rho, symbol_values } => {
                let (lo, hi) = min_max(symbol_values.iter().copied());
                theta_pow(*rho, k) * (hi - lo) / (1.0 - rho)
            }
            Potential::LocallyConstant { window, .. } => {
                let k = k as usize;
                if k >= *window {
                    return 0.0;
                }
                let vals = self.admissible_values(sys).unwrap_or_default();
                // words are sorted, so words sharing a k-prefix are contiguous
                let mut best = 0.0f64;
                let mut start = 0;
                while start < vals.len() {
                    let prefix = &vals[start].0[..k];
                    let mut end = start;
                    while end < vals.len() && &vals[end].0[..k] == prefix {
                        end += 1;
                    }
                    let (lo, hi) = min_max(vals[start..end].iter().map(|(_, v)| *v));
                    best = best.max(hi - lo);
                    start = end;
                }
                best
            }
        }
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}
