//! Pressure from strings of open-cover elements, with and without mistakes.
//!
//! The cover at level `L` is the family of admissible `L`-cylinders, whose
//! diameter is `θ^L`. A string `U = U_0 … U_{m−1}` has trace
//! `X(U) = {y : f^j y ∈ U_j for all j}`, and with a mistake function the
//! trace `X(g; U)` tolerates up to `floor(g(m, θ^L))` failed entries.
//! A string is weighted by `exp(−m s + sup_{X(·)} S_mφ)`; the supremum is
//! bounded by the sum at a center of the trace plus a certified correction
//! from the potential's modulus of continuity.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mistake::MistakeFunction;
use crate::point::Point;
use crate::potential::Potential;
use crate::pressure_ball::{
    fixed_crossing, instance_from, instance_guess, search_crossing, Critical, MEstimate, PressureEstimate,
    Schedule, Strategy, TracePoint, WitnessFamily,
};
use crate::reduce::log_sum_exp;
use crate::search::{self, CoverInstance};
use crate::system::{SftSystem, Word};
use crate::zset::ZSet;

/// Guard on explicit substitution enumeration.
pub const MAX_SUBSTITUTIONS: u64 = 1 << 20;

/// The cover of `X` by admissible cylinders of length `level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CylinderCover {
    pub level: u32,
}

impl CylinderCover {
    pub fn new(level: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("cover level must be at least 1".into()));
        }
        Ok(Self { level })
    }

    pub fn elements(&self, sys: &SftSystem) -> Vec<Word> {
        sys.enumerate_words(self.level as usize)
    }

    pub fn diameter(&self, sys: &SftSystem) -> f64 {
        sys.radius(self.level)
    }
}

/// A string of cover elements; each entry is an `L`-word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StringU {
    pub cover: CylinderCover,
    pub entries: Vec<Word>,
}

impl StringU {
    pub fn new(sys: &SftSystem, cover: CylinderCover, entries: Vec<Word>) -> Result<Self> {
        let l = cover.level as usize;
        if let Some(e) = entries.iter().find(|e| e.len() != l || !sys.is_admissible(e)) {
            return Err(Error::InvalidArgument(format!("{e:?} is not a cover element at level {l}")));
        }
        Ok(Self { cover, entries })
    }

    /// The string read off the orbit of `x`: `U_j = x_j … x_{j+L−1}`.
    pub fn itinerary(x: &Point, cover: CylinderCover, m: usize) -> Self {
        let l = cover.level as usize;
        let w = x.prefix(m + l - 1);
        Self {
            cover,
            entries: (0..m).map(|j| w[j..j + l].to_vec()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceSet {
    Empty,
    /// The cylinder of the merged word, of length `L + m − 1`.
    Cylinder(Word),
}

/// `X(U)`: nonempty exactly when consecutive entries overlap consistently
/// and the merged word is admissible.
pub fn string_trace_set(sys: &SftSystem, u: &StringU) -> TraceSet {
    let l = u.cover.level as usize;
    let Some(first) = u.entries.first() else {
        return TraceSet::Empty;
    };
    let mut merged = first.clone();
    for pair in u.entries.windows(2) {
        if pair[0][1..] != pair[1][..l - 1] {
            return TraceSet::Empty;
        }
        merged.push(pair[1][l - 1]);
    }
    if sys.is_admissible(&merged) {
        TraceSet::Cylinder(merged)
    } else {
        TraceSet::Empty
    }
}

/// Number of entries `j` with `f^j y ∉ U_j`.
pub fn string_failures(u: &StringU, y: &Point) -> usize {
    let l = u.cover.level as usize;
    let w = y.prefix(u.len() + l - 1);
    u.entries
        .iter()
        .enumerate()
        .filter(|(j, e)| w[*j..*j + l] != e[..])
        .count()
}

/// `y ∈ X(U)`.
pub fn string_contains(u: &StringU, y: &Point) -> bool {
    string_failures(u, y) == 0
}

/// `y ∈ X(g; U)`: at most `floor(g(m, diam))` entries fail.
pub fn mistake_string_contains(sys: &SftSystem, g: &MistakeFunction, u: &StringU, y: &Point) -> bool {
    string_failures(u, y) as u64 <= g.budget(u.len() as u64, u.cover.diameter(sys))
}

fn binomial(m: u64, i: u64) -> BigUint {
    let mut acc = BigUint::one();
    for k in 0..i {
        acc = acc * BigUint::from(m - k) / BigUint::from(k + 1);
    }
    acc
}

fn weighted_binomial_sum(m: u64, b: u64, base: u64) -> BigUint {
    let mut total = BigUint::zero();
    let mut power = BigUint::one();
    for i in 0..=b.min(m) {
        total += binomial(m, i) * &power;
        power *= BigUint::from(base);
    }
    total
}

/// Strings over a `c`-element cover differing from a fixed length-`m`
/// string in at most `b` entries: `Σ_{i≤b} C(m,i)(c−1)^i`.
pub fn substitution_count(m: u64, b: u64, c: u64) -> BigUint {
    weighted_binomial_sum(m, b, c.saturating_sub(1))
}

/// The coarser count `Σ_{i≤b} C(m,i) c^i` used for growth-rate bounds.
pub fn stirling_bound_count(m: u64, b: u64, c: u64) -> BigUint {
    weighted_binomial_sum(m, b, c)
}

/// `(1/m) ln Σ_{i≤b} C(m,i) c^i`.
pub fn stirling_gamma(m: u64, b: u64, c: u64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    Ok(big_ln(&stirling_bound_count(m, b, c)) / m as f64)
}

/// Natural log of a positive big integer, accurate for any size.
pub fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 960 {
        return x.to_f64().map_or(f64::NAN, f64::ln);
    }
    let k = bits - 64;
    let top = (x >> k).to_f64().unwrap_or(f64::NAN);
    top.ln() + k as f64 * std::f64::consts::LN_2
}

/// Every string obtained from `u` by replacing at most `b` entries with
/// other elements of `elements`, in lexicographic order of positions.
pub fn enumerate_substitutions(u: &StringU, elements: &[Word], b: usize) -> Result<Vec<StringU>> {
    let count = substitution_count(u.len() as u64, b as u64, elements.len() as u64);
    if count > BigUint::from(MAX_SUBSTITUTIONS) {
        return Err(Error::InstanceTooLarge(format!("{count} substitutions")));
    }
    fn go(cur: &mut StringU, from: usize, left: usize, elements: &[Word], out: &mut Vec<StringU>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for j in from..cur.entries.len() {
            let orig = cur.entries[j].clone();
            for e in elements.iter().filter(|e| **e != orig) {
                cur.entries[j] = e.clone();
                go(cur, j + 1, left - 1, elements, out);
            }
            cur.entries[j] = orig;
        }
    }
    let mut out = Vec::new();
    go(&mut u.clone(), 0, b, elements, &mut out);
    Ok(out)
}

/// A string-pressure computation for fixed `(X, Z, φ, g)`.
#[derive(Debug, Clone, Copy)]
pub struct CoverQuery<'a> {
    pub sys: &'a SftSystem,
    pub z: &'a ZSet,
    pub phi: &'a Potential,
    pub mistake: Option<&'a MistakeFunction>,
    pub span: usize,
}

impl<'a> CoverQuery<'a> {
    pub fn new(sys: &'a SftSystem, z: &'a ZSet, phi: &'a Potential) -> Self {
        Self {
            sys,
            z,
            phi,
            mistake: None,
            span: 0,
        }
    }

    pub fn with_mistake(mut self, g: &'a MistakeFunction) -> Self {
        self.mistake = Some(g);
        self
    }

    pub fn with_span(mut self, span: usize) -> Self {
        self.span = span;
        self
    }

    fn budget(&self, m: usize, cover: CylinderCover) -> usize {
        self.mistake
            .map_or(0, |g| g.budget(m as u64, cover.diameter(self.sys)) as usize)
            .min(m)
    }

    /// Certified bound on `sup_{X(·)} S_mφ − S_mφ(center)` for a string of
    /// length `m` whose center lies in the trace.
    pub fn correction(&self, m: usize, cover: CylinderCover) -> f64 {
        let l = cover.level as usize;
        let b = self.budget(m, cover);
        if b == 0 {
            (0..m)
                .map(|j| self.phi.modulus_at_agreement(self.sys, (l + m - 1 - j) as u64))
                .sum()
        } else {
            (m - b) as f64 * self.phi.modulus_at_agreement(self.sys, l as u64) + b as f64 * self.phi.spread(self.sys)
        }
    }

    /// Strings that cover the witness set: for each candidate center the
    /// witnesses whose itinerary fails at most the budget.
    pub fn coverage(&self, fam: &WitnessFamily, cover: CylinderCover) -> Result<Vec<Vec<u32>>> {
        let index = fam.index();
        let a = self.sys.alphabet_size();
        let prefixes: Vec<Word> = fam
            .points
            .par_iter()
            .map(|p| p.prefix(fam.n_min + fam.span + cover.level as usize - 1))
            .collect();
        Ok((0..fam.n_candidates())
            .into_par_iter()
            .map(|c| {
                let (i, m) = fam.decode(c);
                let u = StringU::itinerary(&fam.points[i], cover, m);
                let b = self.budget(m, cover);
                // each mismatch among the first N symbols fails its own entry
                fam.hamming_neighbors(&index, a, i, b)
                    .into_iter()
                    .filter(|&j| {
                        let w = &prefixes[j as usize];
                        let l = cover.level as usize;
                        let fails = u
                            .entries
                            .iter()
                            .enumerate()
                            .filter(|(k, e)| w[*k..*k + l] != e[..])
                            .count();
                        fails <= b
                    })
                    .collect()
            })
            .collect())
    }

    pub fn cover_instance(&self, fam: &WitnessFamily, cover: CylinderCover) -> Result<CoverInstance> {
        let covers = self.coverage(fam, cover)?;
        let mut inst = instance_from(fam, covers);
        for c in 0..inst.len() {
            inst.log_base[c] += self.correction(inst.lengths[c], cover);
        }
        Ok(inst)
    }

    /// Centers and base log weights of the uniform family: every
    /// `Z`-admissible `(L+N−1)`-word read as a length-`N` string.
    fn uniform_family(&self, n_min: usize, cover: CylinderCover) -> Result<(Vec<Point>, Vec<f64>)> {
        let l = cover.level as usize;
        let fam = WitnessFamily::build(self.sys, self.z, self.phi, l + n_min - 1, 0)?;
        let corr = self.correction(n_min, cover);
        let base = fam
            .points
            .par_iter()
            .map(|p| self.phi.birkhoff_sum(self.sys, p, n_min) + corr)
            .collect();
        Ok((fam.points, base))
    }

    fn family(&self, n_min: usize) -> Result<WitnessFamily> {
        WitnessFamily::build(self.sys, self.z, self.phi, n_min, self.span)
    }

    /// Upper bound on `m'(Z, s, φ, N, U)` (or its mistake version) from the
    /// strings the strategy selects.
    pub fn m_prime(&self, s: f64, n_min: usize, level: u32, strategy: Strategy) -> Result<(f64, Vec<StringU>)> {
        let cover = CylinderCover::new(level)?;
        match strategy {
            Strategy::Uniform => {
                let (centers, base) = self.uniform_family(n_min, cover)?;
                let ts: Vec<f64> = base.iter().map(|b| -(n_min as f64) * s + b).collect();
                let strings = centers.iter().map(|p| StringU::itinerary(p, cover, n_min)).collect();
                Ok((log_sum_exp(&ts).exp(), strings))
            }
            _ => {
                let fam = self.family(n_min)?;
                let inst = self.cover_instance(&fam, cover)?;
                let chosen = if strategy == Strategy::Greedy {
                    search::greedy(&inst, instance_guess(&inst, n_min))?
                } else {
                    search::branch_and_bound(&inst, s)?
                };
                let strings = chosen
                    .iter()
                    .map(|&c| {
                        let (i, m) = fam.decode(c);
                        StringU::itinerary(&fam.points[i], cover, m)
                    })
                    .collect();
                Ok((inst.log_sum(&chosen, s).exp(), strings))
            }
        }
    }

    pub fn critical_value(&self, n_min: usize, level: u32, strategy: Strategy) -> Result<Critical> {
        let cover = CylinderCover::new(level)?;
        match strategy {
            Strategy::Uniform => {
                let (_, base) = self.uniform_family(n_min, cover)?;
                fixed_crossing(&vec![n_min; base.len()], &base)
            }
            _ => {
                let fam = self.family(n_min)?;
                let inst = self.cover_instance(&fam, cover)?;
                search_crossing(&inst, strategy, instance_guess(&inst, n_min))
            }
        }
    }

    /// Critical values along matched `(L, N)` schedules; the trace records
    /// the cover diameter `θ^L` as its radius.
    pub fn cover_pressure(&self, levels: &[u32], ns: &[usize], strategy: Strategy) -> Result<PressureEstimate> {
        let schedule = Schedule::new(levels.to_vec(), ns.to_vec())?;
        let mut trace = Vec::new();
        for (level, n) in schedule.pairs()? {
            let start = std::time::Instant::now();
            let crit = self.critical_value(n, level, strategy)?;
            trace.push(TracePoint {
                delta: self.sys.radius(level),
                level,
                n,
                critical_s: crit.value,
                m_at_critical: crit.m_at_critical,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
            });
        }
        Ok(PressureEstimate::from_trace(trace))
    }

    /// Same as [`CoverQuery::m_prime`] but in the ball-estimate shape.
    pub fn m_estimate(&self, s: f64, n_min: usize, level: u32, strategy: Strategy) -> Result<MEstimate> {
        let (value, _) = self.m_prime(s, n_min, level, strategy)?;
        Ok(MEstimate {
            value,
            atoms: Vec::new(),
        })
    }
}
