//! Dynamical balls: classical Bowen balls, mistake Bowen balls and balls of
//! the average metric `d̄_n`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mistake::MistakeFunction;
use crate::point::Point;
use crate::system::{theta_pow, SftSystem};
use crate::zset::ZSet;

/// Guard on the number of candidates a census may enumerate.
pub const CENSUS_LIMIT: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BallKind {
    Bowen,
    Mistake,
    Average,
}

impl fmt::Display for BallKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BallKind::Bowen => "bowen",
            BallKind::Mistake => "mistake",
            BallKind::Average => "avg",
        })
    }
}

impl FromStr for BallKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bowen" => Ok(BallKind::Bowen),
            "mistake" => Ok(BallKind::Mistake),
            "avg" | "average" => Ok(BallKind::Average),
            _ => Err(Error::InvalidArgument(format!("unknown ball kind `{s}`"))),
        }
    }
}

/// `d(f^j x, f^j y)` for `j < n`.
pub fn orbit_distances(sys: &SftSystem, x: &Point, y: &Point, n: usize) -> Vec<f64> {
    x.orbit_agreements(y, n)
        .into_iter()
        .map(|k| k.map_or(0.0, |k| theta_pow(sys.theta(), k as u64)))
        .collect()
}

/// `y ∈ B_n(x, ε)`: every orbit distance is strictly below `eps`.
pub fn bowen_contains(sys: &SftSystem, x: &Point, y: &Point, n: usize, eps: f64) -> bool {
    orbit_distances(sys, x, y, n).iter().all(|&d| d < eps)
}

/// `y ∈ B_n(g; x, ε)`: at most `floor(g(n, ε))` orbit distances exceed `eps`.
pub fn mistake_contains(
    sys: &SftSystem,
    g: &MistakeFunction,
    x: &Point,
    y: &Point,
    n: usize,
    eps: f64,
) -> bool {
    let bad = orbit_distances(sys, x, y, n).iter().filter(|&&d| d > eps).count() as u64;
    bad <= g.budget(n as u64, eps)
}

/// `d̄_n(x, y)`, the mean of the first `n` orbit distances.
pub fn avg_distance(sys: &SftSystem, x: &Point, y: &Point, n: usize) -> f64 {
    orbit_distances(sys, x, y, n).iter().sum::<f64>() / n as f64
}

pub fn avg_contains(sys: &SftSystem, x: &Point, y: &Point, n: usize, eps: f64) -> bool {
    avg_distance(sys, x, y, n) < eps
}

/// Membership in a ball of the given kind; `g` is required for mistake balls.
pub fn contains(
    sys: &SftSystem,
    kind: BallKind,
    g: Option<&MistakeFunction>,
    x: &Point,
    y: &Point,
    n: usize,
    eps: f64,
) -> Result<bool> {
    Ok(match kind {
        BallKind::Bowen => bowen_contains(sys, x, y, n, eps),
        BallKind::Average => avg_contains(sys, x, y, n, eps),
        BallKind::Mistake => {
            let g = g.ok_or_else(|| Error::InvalidArgument("mistake ball needs g".into()))?;
            mistake_contains(sys, g, x, y, n, eps)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InclusionReport {
    pub in_bowen: bool,
    pub in_avg: bool,
    pub in_mistake_sqrt: bool,
    pub chain_ok: bool,
}

/// Evaluates `B_n(x,ε) ⊂ B_{d̄_n}(x,ε) ⊂ B_n(g; x, √ε)` at `y` with
/// `g(n, ε) = nε`.
pub fn inclusion_chain_check(
    sys: &SftSystem,
    x: &Point,
    y: &Point,
    n: usize,
    eps: f64,
) -> Result<InclusionReport> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument(format!("eps {eps} not in (0,1]")));
    }
    let g = MistakeFunction::linear();
    let dists = orbit_distances(sys, x, y, n);
    let in_bowen = dists.iter().all(|&d| d < eps);
    let in_avg = dists.iter().sum::<f64>() / (n as f64) < eps;
    let root = eps.sqrt();
    let bad = dists.iter().filter(|&&d| d > root).count() as u64;
    let in_mistake_sqrt = bad <= g.budget(n as u64, root);
    Ok(InclusionReport {
        in_bowen,
        in_avg,
        in_mistake_sqrt,
        chain_ok: (!in_bowen || in_avg) && (!in_avg || in_mistake_sqrt),
    })
}

/// Census kind; the mistake variant carries its own radius so that the
/// inclusion chain can evaluate the mistake ball at `√ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CensusKind<'a> {
    Bowen,
    Average,
    Mistake(&'a MistakeFunction),
}

/// Counts the witnesses of admissible `n`-words (the period-`n` points
/// whenever the word closes up) that lie in the ball of radius `eps`
/// around `x`.
pub fn ball_word_census(
    sys: &SftSystem,
    kind: CensusKind<'_>,
    x: &Point,
    n: usize,
    eps: f64,
) -> Result<u64> {
    let size = (sys.alphabet_size() as f64).powi(n as i32);
    if size > CENSUS_LIMIT {
        return Err(Error::CensusTooLarge {
            size,
            limit: CENSUS_LIMIT,
        });
    }
    let words = sys.enumerate_words(n);
    let hits = words
        .par_iter()
        .map(|w| {
            let y = ZSet::WholeSpace.witness(sys, w)?;
            Ok(match kind {
                CensusKind::Bowen => bowen_contains(sys, x, &y, n, eps),
                CensusKind::Average => avg_contains(sys, x, &y, n, eps),
                CensusKind::Mistake(g) => mistake_contains(sys, g, x, &y, n, eps),
            } as u64)
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(hits.iter().sum())
}
