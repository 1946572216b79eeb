//! Eventually periodic points `preperiod · period^∞`.

use std::fmt;

use crate::error::{Error, Result};
use crate::system::{theta_pow, SftSystem, Word};

/// An eventually periodic sequence kept in canonical form: the period is
/// primitive and the preperiod is as short as possible, so structural
/// equality is equality of sequences.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    preperiod: Word,
    period: Word,
}

impl Point {
    /// Builds and canonicalizes a point, checking admissibility in `sys`
    /// (including the wrap from the end of the period back to its start).
    pub fn new(sys: &SftSystem, preperiod: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidPoint("empty period".into()));
        }
        let mut full = preperiod.clone();
        full.extend_from_slice(&period);
        full.push(period[0]);
        if !sys.is_admissible(&full) {
            return Err(Error::InvalidPoint(format!(
                "{} is not admissible",
                Point::unchecked(preperiod, period)
            )));
        }
        Ok(Self::unchecked(preperiod, period))
    }

    /// Canonicalizes without an admissibility check.
    pub(crate) fn unchecked(mut preperiod: Word, mut period: Word) -> Self {
        debug_assert!(!period.is_empty());
        let p = period.len();
        if let Some(d) = (1..p).find(|&d| p.is_multiple_of(d) && (d..p).all(|i| period[i] == period[i - d])) {
            period.truncate(d);
        }
        while let (Some(&a), Some(&b)) = (preperiod.last(), period.last()) {
            if a != b {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        Self { preperiod, period }
    }

    /// The periodic point `word^∞`.
    pub fn periodic(sys: &SftSystem, word: Word) -> Result<Self> {
        Self::new(sys, Vec::new(), word)
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// The `i`-th coordinate.
    #[inline]
    pub fn symbol(&self, i: usize) -> u8 {
        let pre = self.preperiod.len();
        if i < pre {
            self.preperiod[i]
        } else {
            self.period[(i - pre) % self.period.len()]
        }
    }

    /// The first `n` coordinates.
    pub fn prefix(&self, n: usize) -> Word {
        (0..n).map(|i| self.symbol(i)).collect()
    }

    /// `f^j x`.
    pub fn shift(&self, j: usize) -> Self {
        let pre = self.preperiod.len();
        if j <= pre {
            return Self::unchecked(self.preperiod[j..].to_vec(), self.period.clone());
        }
        let mut period = self.period.clone();
        let r = (j - pre) % period.len();
        period.rotate_left(r);
        Self::unchecked(Vec::new(), period)
    }

    /// Beyond this index both points are periodic with a common period of
    /// length [`joint_period`](Self::joint_period).
    pub(crate) fn joint_preperiod(&self, other: &Point) -> usize {
        self.preperiod.len().max(other.preperiod.len())
    }

    pub(crate) fn joint_period(&self, other: &Point) -> usize {
        lcm(self.period.len(), other.period.len())
    }

    /// Index of the first coordinate where `self` and `other` differ, or
    /// `None` when the sequences are equal.
    pub fn first_difference(&self, other: &Point) -> Option<usize> {
        let horizon = self.joint_preperiod(other) + self.joint_period(other);
        (0..horizon).find(|&i| self.symbol(i) != other.symbol(i))
    }

    /// `theta^k` with `k` the common-prefix length; `0` for equal points.
    pub fn distance(&self, sys: &SftSystem, other: &Point) -> f64 {
        match self.first_difference(other) {
            Some(k) => theta_pow(sys.theta(), k as u64),
            None => 0.0,
        }
    }

    /// For `j < n`, the common-prefix length of `f^j x` and `f^j y`
    /// (`None` when the two tails coincide from `j` on).
    pub fn orbit_agreements(&self, other: &Point, n: usize) -> Vec<Option<usize>> {
        // Differences are periodic with the joint period beyond the joint
        // preperiod, so the first difference after any j < n is found below
        // this horizon if it exists at all.
        let horizon = n + self.joint_preperiod(other) + self.joint_period(other);
        let mut next: Option<usize> = None;
        let mut next_diff = vec![None; horizon];
        for i in (0..horizon).rev() {
            if self.symbol(i) != other.symbol(i) {
                next = Some(i);
            }
            next_diff[i] = next;
        }
        (0..n).map(|j| next_diff[j].map(|d| d - j)).collect()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn write_word(f: &mut fmt::Formatter<'_>, word: &[u8]) -> fmt::Result {
    let digits = word.iter().all(|&s| s < 10);
    for (i, s) in word.iter().enumerate() {
        if !digits && i > 0 {
            f.write_str(".")?;
        }
        write!(f, "{s}")?;
    }
    Ok(())
}

/// Prints `pre(period)`, e.g. `001(1)` or `(01)`.
impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.preperiod)?;
        f.write_str("(")?;
        write_word(f, &self.period)?;
        f.write_str(")")
    }
}
