//! Pressure from covers by dynamical balls.
//!
//! For a radius `δ = θ^L` and a minimal length `N`, a cover of `Z` is a
//! family of pairs `(x_i, n_i)` with `n_i ≥ N` whose balls contain `Z`, and
//! the covering sum at exponent `s` is `Σ exp(−n_i s + S_{n_i}φ(x_i))`.
//! At aligned radii ball membership is word combinatorics, so covering is
//! checked on the witness points of the `Z`-admissible `N`-words.
//!
//! The finite-`N` critical value is the exponent at which the covering sum
//! crosses one; it is found by bisection.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::balls::{self, BallKind};
use crate::error::{Error, Result};
use crate::mistake::MistakeFunction;
use crate::point::Point;
use crate::potential::Potential;
use crate::reduce::log_sum_exp;
use crate::search::{self, CoverInstance};
use crate::system::{SftSystem, Word};
use crate::zset::ZSet;

/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_TOL: f64 = 1e-9;
/// Largest number of `N`-words an engine will enumerate.
pub const MAX_WITNESSES: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// One atom of length `N` per witness.
    Uniform,
    /// Greedy weighted set cover over lengths `N..=N+span`.
    Greedy,
    /// Exact minimum-weight cover by branch and bound (small instances).
    Exhaustive,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Uniform => "uniform",
            Strategy::Greedy => "greedy",
            Strategy::Exhaustive => "exhaustive",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Strategy::Uniform),
            "greedy" => Ok(Strategy::Greedy),
            "exhaustive" => Ok(Strategy::Exhaustive),
            _ => Err(Error::InvalidArgument(format!("unknown strategy `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverAtom {
    pub center: Point,
    pub length: usize,
    pub kind: BallKind,
    pub radius: f64,
}

/// Result of one covering-sum evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct MEstimate {
    pub value: f64,
    pub atoms: Vec<CoverAtom>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Critical {
    pub value: f64,
    pub m_at_critical: f64,
    pub atoms: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TracePoint {
    pub delta: f64,
    pub level: u32,
    pub n: usize,
    pub critical_s: f64,
    pub m_at_critical: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PressureEstimate {
    pub value: f64,
    pub trace: Vec<TracePoint>,
    /// Difference quotient of the last two critical values in `δ`.
    pub slope: f64,
}

impl PressureEstimate {
    pub(crate) fn from_trace(trace: Vec<TracePoint>) -> Self {
        let value = trace.last().map_or(f64::NAN, |t| t.critical_s);
        let slope = match trace.as_slice() {
            [.., a, b] if a.delta != b.delta => (b.critical_s - a.critical_s) / (b.delta - a.delta) + 0.0,
            _ => 0.0,
        };
        Self { value, trace, slope }
    }
}

/// Matched radius levels `L` (radius `θ^L`) and minimal lengths `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub levels: Vec<u32>,
    pub ns: Vec<usize>,
}

impl Default for Schedule {
    fn default() -> Self {
        Self {
            levels: vec![2, 3, 4, 5],
            ns: vec![10, 12, 14, 16],
        }
    }
}

impl Schedule {
    pub fn new(levels: Vec<u32>, ns: Vec<usize>) -> Result<Self> {
        let s = Self { levels, ns };
        s.pairs()?;
        Ok(s)
    }

    pub fn deltas(&self, sys: &SftSystem) -> Vec<f64> {
        self.levels.iter().map(|&l| sys.radius(l)).collect()
    }

    /// `(L, N)` pairs; a single `N` is reused at every level.
    pub fn pairs(&self) -> Result<Vec<(u32, usize)>> {
        if self.levels.is_empty() || self.ns.is_empty() {
            return Err(Error::InvalidArgument("empty schedule".into()));
        }
        if self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("radii must be strictly decreasing".into()));
        }
        if self.ns.len() != 1 && self.ns.len() != self.levels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} lengths for {} radii",
                self.ns.len(),
                self.levels.len()
            )));
        }
        if self.ns.contains(&0) {
            return Err(Error::InvalidArgument("N must be positive".into()));
        }
        Ok(self
            .levels
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, if self.ns.len() == 1 { self.ns[0] } else { self.ns[i] }))
            .collect())
    }
}

/// Witness points of the `Z`-admissible `N`-words with their Birkhoff sums
/// `S_{N+k}φ` for `k ≤ span`.
#[derive(Debug, Clone)]
pub struct WitnessFamily {
    pub n_min: usize,
    pub span: usize,
    pub words: Vec<Word>,
    pub points: Vec<Point>,
    pub sums: Vec<Vec<f64>>,
}

impl WitnessFamily {
    pub fn build(sys: &SftSystem, z: &ZSet, phi: &Potential, n_min: usize, span: usize) -> Result<Self> {
        if n_min == 0 {
            return Err(Error::InvalidArgument("N must be positive".into()));
        }
        let bound = z.word_bound(sys, n_min);
        if bound > MAX_WITNESSES {
            return Err(Error::InstanceTooLarge(format!(
                "up to {bound} words of length {n_min} exceed {MAX_WITNESSES}"
            )));
        }
        let words = z.words(sys, n_min)?;
        let points = words
            .par_iter()
            .map(|w| z.witness(sys, w))
            .collect::<Result<Vec<_>>>()?;
        let sums = points
            .par_iter()
            .map(|p| {
                let mut acc = 0.0;
                let mut out = Vec::with_capacity(span + 1);
                for j in 0..n_min + span {
                    acc += phi.eval_shifted(sys, p, j);
                    if j + 1 >= n_min {
                        out.push(acc);
                    }
                }
                out
            })
            .collect();
        Ok(Self {
            n_min,
            span,
            words,
            points,
            sums,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Candidate index of the atom centered at witness `i` with length `N + k`.
    #[inline]
    pub fn candidate(&self, i: usize, k: usize) -> usize {
        i * (self.span + 1) + k
    }

    pub fn n_candidates(&self) -> usize {
        self.len() * (self.span + 1)
    }

    /// `(witness, length)` of a candidate index.
    pub fn decode(&self, c: usize) -> (usize, usize) {
        (c / (self.span + 1), self.n_min + c % (self.span + 1))
    }

    /// Witnesses whose `N`-word is within Hamming distance `radius` of
    /// witness `i`'s word, in increasing index order.
    pub(crate) fn hamming_neighbors(&self, index: &HashMap<&[u8], u32>, alphabet: usize, i: usize, radius: usize) -> Vec<u32> {
        let n = self.n_min;
        let radius = radius.min(n);
        let ball: f64 = (0..=radius)
            .map(|r| binomial_f64(n, r) * ((alphabet - 1) as f64).powi(r as i32))
            .sum();
        let center = &self.words[i];
        if ball >= self.len() as f64 {
            return (0..self.len() as u32)
                .filter(|&j| hamming(center, &self.words[j as usize]) <= radius)
                .collect();
        }
        let mut out = Vec::new();
        let mut word = center.clone();
        fn go(
            word: &mut Word,
            from: usize,
            left: usize,
            alphabet: usize,
            index: &HashMap<&[u8], u32>,
            out: &mut Vec<u32>,
        ) {
            if let Some(&j) = index.get(word.as_slice()) {
                out.push(j);
            }
            if left == 0 {
                return;
            }
            for p in from..word.len() {
                let orig = word[p];
                for s in 0..alphabet as u8 {
                    if s != orig {
                        word[p] = s;
                        go(word, p + 1, left - 1, alphabet, index, out);
                    }
                }
                word[p] = orig;
            }
        }
        go(&mut word, 0, radius, alphabet, index, &mut out);
        out.sort_unstable();
        out
    }

    pub(crate) fn index(&self) -> HashMap<&[u8], u32> {
        self.words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i as u32))
            .collect()
    }
}

fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Finds the exponent where the decreasing map `s ↦ ln m(s)` crosses zero.
pub(crate) fn level_one_crossing(mut log_m: impl FnMut(f64) -> Result<f64>, guess: f64) -> Result<(f64, f64)> {
    let guess = if guess.is_finite() { guess } else { 0.0 };
    let mut step = 1.0;
    let (mut lo, mut hi);
    if log_m(guess)? > 0.0 {
        lo = guess;
        hi = guess + step;
        while log_m(hi)? > 0.0 {
            lo = hi;
            step *= 2.0;
            hi += step;
            if step > 1e9 {
                return Err(Error::InvalidArgument("covering sum does not cross one".into()));
            }
        }
    } else {
        hi = guess;
        lo = guess - step;
        while log_m(lo)? <= 0.0 {
            hi = lo;
            step *= 2.0;
            lo -= step;
            if step > 1e9 {
                return Err(Error::InvalidArgument("covering sum does not cross one".into()));
            }
        }
    }
    while hi - lo >= BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if log_m(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = 0.5 * (lo + hi);
    Ok((s, log_m(s)?.exp()))
}

/// A ball-pressure computation for fixed `(X, Z, φ, kind, g)`.
#[derive(Debug, Clone, Copy)]
pub struct PressureQuery<'a> {
    pub sys: &'a SftSystem,
    pub z: &'a ZSet,
    pub phi: &'a Potential,
    pub kind: BallKind,
    pub mistake: Option<&'a MistakeFunction>,
    /// Extra lengths `N+1..=N+span` admitted by greedy and exhaustive covers.
    pub span: usize,
}

impl<'a> PressureQuery<'a> {
    pub fn new(sys: &'a SftSystem, z: &'a ZSet, phi: &'a Potential, kind: BallKind) -> Self {
        Self {
            sys,
            z,
            phi,
            kind,
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

    fn check(&self) -> Result<()> {
        if self.kind == BallKind::Mistake && self.mistake.is_none() {
            return Err(Error::InvalidArgument("mistake balls need a mistake function".into()));
        }
        Ok(())
    }

    pub fn family(&self, n_min: usize) -> Result<WitnessFamily> {
        self.check()?;
        WitnessFamily::build(self.sys, self.z, self.phi, n_min, self.span)
    }

    /// Witnesses covered by each candidate atom at radius `θ^level`.
    ///
    /// A witness whose `N`-word differs from the center's in `h` places has
    /// orbit distance 1 at each of those times, which bounds `h` for every
    /// ball kind; only words within that Hamming radius are tested.
    pub fn coverage(&self, fam: &WitnessFamily, level: u32) -> Result<Vec<Vec<u32>>> {
        self.check()?;
        let eps = self.sys.radius(level);
        let index = fam.index();
        let a = self.sys.alphabet_size();
        (0..fam.n_candidates())
            .into_par_iter()
            .map(|c| {
                let (i, n) = fam.decode(c);
                let radius = match self.kind {
                    BallKind::Bowen => 0,
                    BallKind::Average => (n as f64 * eps).floor() as usize,
                    BallKind::Mistake => {
                        if level == 0 {
                            fam.n_min
                        } else {
                            self.mistake.map_or(0, |g| g.budget(n as u64, eps)) as usize
                        }
                    }
                };
                let center = &fam.points[i];
                let mut covered = Vec::new();
                for j in fam.hamming_neighbors(&index, a, i, radius) {
                    let y = &fam.points[j as usize];
                    if balls::contains(self.sys, self.kind, self.mistake, center, y, n, eps)? {
                        covered.push(j);
                    }
                }
                Ok(covered)
            })
            .collect()
    }

    pub fn cover_instance(&self, fam: &WitnessFamily, level: u32) -> Result<CoverInstance> {
        let covers = self.coverage(fam, level)?;
        Ok(instance_from(fam, covers))
    }

    fn atoms(&self, fam: &WitnessFamily, chosen: &[usize], level: u32) -> Vec<CoverAtom> {
        chosen
            .iter()
            .map(|&c| {
                let (i, n) = fam.decode(c);
                CoverAtom {
                    center: fam.points[i].clone(),
                    length: n,
                    kind: self.kind,
                    radius: self.sys.radius(level),
                }
            })
            .collect()
    }

    /// Upper bound on `m(Z, s, φ, N, δ)` (or `m^g`) attained by the cover the
    /// strategy returns.
    pub fn m_estimate(&self, s: f64, n_min: usize, delta: f64, strategy: Strategy) -> Result<MEstimate> {
        let level = self.sys.aligned_level(delta)?;
        let fam = self.family(n_min)?;
        let (chosen, log_m) = match strategy {
            Strategy::Uniform => {
                let chosen: Vec<usize> = (0..fam.len()).map(|i| fam.candidate(i, 0)).collect();
                let ts: Vec<f64> = fam.sums.iter().map(|v| -(n_min as f64) * s + v[0]).collect();
                (chosen, log_sum_exp(&ts))
            }
            Strategy::Greedy => {
                let inst = self.cover_instance(&fam, level)?;
                let chosen = search::greedy(&inst, uniform_crossing(&fam))?;
                let lm = inst.log_sum(&chosen, s);
                (chosen, lm)
            }
            Strategy::Exhaustive => {
                let inst = self.cover_instance(&fam, level)?;
                let chosen = search::branch_and_bound(&inst, s)?;
                let lm = inst.log_sum(&chosen, s);
                (chosen, lm)
            }
        };
        Ok(MEstimate {
            value: log_m.exp(),
            atoms: self.atoms(&fam, &chosen, level),
        })
    }

    /// The finite-`N` critical exponent: where the covering sum equals one.
    pub fn critical_value(&self, n_min: usize, delta: f64, strategy: Strategy) -> Result<Critical> {
        let level = self.sys.aligned_level(delta)?;
        let fam = self.family(n_min)?;
        critical_on(&fam, strategy, || self.cover_instance(&fam, level))
    }

    /// Critical values along matched `(δ, N)` schedules.
    pub fn pressure_estimate(&self, deltas: &[f64], ns: &[usize], strategy: Strategy) -> Result<PressureEstimate> {
        let levels = deltas
            .iter()
            .map(|&d| self.sys.aligned_level(d))
            .collect::<Result<Vec<_>>>()?;
        let schedule = Schedule::new(levels, ns.to_vec())?;
        let mut trace = Vec::new();
        for (level, n) in schedule.pairs()? {
            let start = Instant::now();
            let delta = self.sys.radius(level);
            let crit = self.critical_value(n, delta, strategy)?;
            trace.push(TracePoint {
                delta,
                level,
                n,
                critical_s: crit.value,
                m_at_critical: crit.m_at_critical,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
            });
        }
        Ok(PressureEstimate::from_trace(trace))
    }
}

pub(crate) fn instance_from(fam: &WitnessFamily, covers: Vec<Vec<u32>>) -> CoverInstance {
    let n = fam.n_candidates();
    CoverInstance {
        n_witnesses: fam.len(),
        lengths: (0..n).map(|c| fam.decode(c).1).collect(),
        log_base: (0..n)
            .map(|c| {
                let (i, len) = fam.decode(c);
                fam.sums[i][len - fam.n_min]
            })
            .collect(),
        covers,
    }
}

/// Closed-form crossing of the uniform cover: `(1/N) ln Σ_i exp(S_Nφ(x_i))`.
pub(crate) fn uniform_crossing(fam: &WitnessFamily) -> f64 {
    let sums: Vec<f64> = fam.sums.iter().map(|v| v[0]).collect();
    log_sum_exp(&sums) / fam.n_min as f64
}

/// Crossing of the one-atom-per-witness cover at the shortest length:
/// `(1/N) ln Σ exp(b_c)` over candidates of length `N`.
pub(crate) fn instance_guess(inst: &CoverInstance, n_min: usize) -> f64 {
    let base: Vec<f64> = (0..inst.len())
        .filter(|&c| inst.lengths[c] == n_min)
        .map(|c| inst.log_base[c])
        .collect();
    log_sum_exp(&base) / n_min as f64
}

/// Level-one crossing of `Σ exp(−n s + b)` over a fixed family of atoms.
pub(crate) fn fixed_crossing(lengths: &[usize], base: &[f64]) -> Result<Critical> {
    let n = lengths.iter().copied().min().unwrap_or(1).max(1) as f64;
    let guess = log_sum_exp(base) / n;
    let (s, m) = level_one_crossing(
        |s| {
            let ts: Vec<f64> = lengths.iter().zip(base).map(|(&l, b)| -(l as f64) * s + b).collect();
            Ok(log_sum_exp(&ts))
        },
        guess,
    )?;
    Ok(Critical {
        value: s,
        m_at_critical: m,
        atoms: base.len(),
    })
}

/// Level-one crossing of a set-cover strategy. Greedy fixes its cover at
/// `guess` so that the covering sum is monotone in `s`; exhaustive search
/// re-optimizes at every `s`.
pub(crate) fn search_crossing(inst: &CoverInstance, strategy: Strategy, guess: f64) -> Result<Critical> {
    match strategy {
        Strategy::Uniform => Err(Error::InvalidArgument("uniform covers need no search".into())),
        Strategy::Greedy => {
            let chosen = search::greedy(inst, guess)?;
            let (s, m) = level_one_crossing(|s| Ok(inst.log_sum(&chosen, s)), guess)?;
            Ok(Critical {
                value: s,
                m_at_critical: m,
                atoms: chosen.len(),
            })
        }
        Strategy::Exhaustive => {
            let mut size = 0;
            let (s, m) = level_one_crossing(
                |s| {
                    let chosen = search::branch_and_bound(inst, s)?;
                    size = chosen.len();
                    Ok(inst.log_sum(&chosen, s))
                },
                guess,
            )?;
            Ok(Critical {
                value: s,
                m_at_critical: m,
                atoms: size,
            })
        }
    }
}

fn critical_on(
    fam: &WitnessFamily,
    strategy: Strategy,
    instance: impl FnOnce() -> Result<CoverInstance>,
) -> Result<Critical> {
    match strategy {
        Strategy::Uniform => {
            let base: Vec<f64> = fam.sums.iter().map(|v| v[0]).collect();
            fixed_crossing(&vec![fam.n_min; base.len()], &base)
        }
        _ => {
            let inst = instance()?;
            search_crossing(&inst, strategy, uniform_crossing(fam))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full2() -> SftSystem {
        SftSystem::full_shift(2, 0.5).unwrap()
    }

    #[test]
    fn atom_weight_examples() {
        let s = full2();
        let phi = Potential::first_symbol(&s, vec![0.0, 1.0]).unwrap();
        let fam = WitnessFamily::build(&s, &ZSet::WholeSpace, &phi, 2, 0).unwrap();
        let inst = instance_from(&fam, vec![vec![]; fam.n_candidates()]);
        // center (1)^∞, n = 2, s = 0: e^2
        let ones = fam.words.iter().position(|w| w == &vec![1, 1]).unwrap();
        assert!((inst.log_weight(ones, 0.0).exp() - 2f64.exp()).abs() < 1e-12);
        let zero = Potential::zero(&s);
        let fam = WitnessFamily::build(&s, &ZSet::WholeSpace, &zero, 3, 0).unwrap();
        let inst = instance_from(&fam, vec![vec![]; fam.n_candidates()]);
        assert!((inst.log_weight(0, 2f64.ln()).exp() - 0.125).abs() < 1e-15);
        assert_eq!(inst.log_weight(5, 0.0), 0.0);
    }

    #[test]
    fn uniform_m_examples() {
        let s = full2();
        let phi = Potential::zero(&s);
        let q = PressureQuery::new(&s, &ZSet::WholeSpace, &phi, BallKind::Bowen);
        for n in [1, 4, 9] {
            let m = q.m_estimate(2f64.ln(), n, s.radius(2), Strategy::Uniform).unwrap();
            assert!((m.value - 1.0).abs() < 1e-12);
            assert_eq!(m.atoms.len(), 1 << n);
            let m = q.m_estimate(2f64.ln() + 0.1, n, s.radius(2), Strategy::Uniform).unwrap();
            assert!((m.value - (-0.1 * n as f64).exp()).abs() < 1e-12);
        }
        let g = SftSystem::golden_mean(0.5).unwrap();
        let phi = Potential::zero(&g);
        let q = PressureQuery::new(&g, &ZSet::WholeSpace, &phi, BallKind::Bowen);
        let m = q.m_estimate(0.0, 5, g.radius(1), Strategy::Uniform).unwrap();
        assert!((m.value - 13.0).abs() < 1e-12);
        assert!(matches!(
            q.m_estimate(0.0, 5, 0.3, Strategy::Uniform),
            Err(Error::UnalignedRadius(_))
        ));
    }

    #[test]
    fn critical_value_examples() {
        let s = full2();
        let phi = Potential::zero(&s);
        let q = PressureQuery::new(&s, &ZSet::WholeSpace, &phi, BallKind::Bowen);
        for n in [3, 8, 12] {
            let c = q.critical_value(n, s.radius(3), Strategy::Uniform).unwrap();
            assert!((c.value - 2f64.ln()).abs() < 1e-9);
        }
        let g = SftSystem::golden_mean(0.5).unwrap();
        let phi = Potential::zero(&g);
        let q = PressureQuery::new(&g, &ZSet::WholeSpace, &phi, BallKind::Bowen);
        let c = q.critical_value(16, g.radius(2), Strategy::Uniform).unwrap();
        assert!((c.value - 0.481212).abs() < 0.05);
    }

    #[test]
    fn mistake_needs_g() {
        let s = full2();
        let phi = Potential::zero(&s);
        let q = PressureQuery::new(&s, &ZSet::WholeSpace, &phi, BallKind::Mistake);
        assert!(q.critical_value(4, 0.5, Strategy::Greedy).is_err());
    }

    #[test]
    fn schedule_validation() {
        assert!(Schedule::new(vec![3, 2], vec![8]).is_err());
        assert!(Schedule::new(vec![2, 3], vec![8, 9, 10]).is_err());
        assert!(Schedule::new(vec![], vec![8]).is_err());
        let s = Schedule::new(vec![1, 2], vec![8]).unwrap();
        assert_eq!(s.pairs().unwrap(), vec![(1, 8), (2, 8)]);
    }
}
