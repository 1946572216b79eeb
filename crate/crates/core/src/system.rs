//! One-sided subshifts of finite type with the theta-metric.
//!
//! A system is an alphabet `{0, .., A-1}`, a 0/1 transition matrix and a
//! contraction parameter `theta`. Points are one-sided sequences whose
//! consecutive symbols are allowed by the matrix, `f` is the left shift and
//! `d(x, y) = theta^k` where `k` is the length of the common prefix.

use crate::error::{Error, Result};

/// A finite word over the alphabet.
pub type Word = Vec<u8>;

/// Largest alphabet we accept; symbols are stored as `u8`.
pub const MAX_ALPHABET: usize = 255;

#[derive(Debug, Clone, PartialEq)]
pub struct SftSystem {
    alphabet_size: usize,
    transitions: Vec<Vec<bool>>,
    theta: f64,
}

impl SftSystem {
    pub fn new(transitions: Vec<Vec<bool>>, theta: f64) -> Result<Self> {
        let a = transitions.len();
        if a == 0 || a > MAX_ALPHABET {
            return Err(Error::InvalidSystem(format!(
                "alphabet size {a} outside 1..={MAX_ALPHABET}"
            )));
        }
        if transitions.iter().any(|row| row.len() != a) {
            return Err(Error::InvalidSystem("transition matrix is not square".into()));
        }
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidSystem(format!("theta {theta} not in (0,1)")));
        }
        for (i, row) in transitions.iter().enumerate() {
            if !row.iter().any(|&t| t) {
                return Err(Error::InvalidSystem(format!("row {i} has no allowed transition")));
            }
            if !(0..a).any(|r| transitions[r][i]) {
                return Err(Error::InvalidSystem(format!("column {i} has no allowed transition")));
            }
        }
        Ok(Self {
            alphabet_size: a,
            transitions,
            theta,
        })
    }

    /// The full shift on `a` symbols.
    pub fn full_shift(a: usize, theta: f64) -> Result<Self> {
        Self::new(vec![vec![true; a]; a], theta)
    }

    /// The golden-mean shift: binary sequences without two consecutive 1s.
    pub fn golden_mean(theta: f64) -> Result<Self> {
        Self::new(vec![vec![true, true], vec![true, false]], theta)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn transitions(&self) -> &[Vec<bool>] {
        &self.transitions
    }

    #[inline]
    pub fn allowed(&self, a: u8, b: u8) -> bool {
        self.transitions[a as usize][b as usize]
    }

    /// Whether `word` only uses symbols of the alphabet and allowed transitions.
    pub fn is_admissible(&self, word: &[u8]) -> bool {
        word.iter().all(|&s| (s as usize) < self.alphabet_size)
            && word.windows(2).all(|w| self.allowed(w[0], w[1]))
    }

    /// `theta^level`, the radius of an aligned ball.
    pub fn radius(&self, level: u32) -> f64 {
        theta_pow(self.theta, level as u64)
    }

    /// Recovers `L` from an aligned radius `theta^L`.
    pub fn aligned_level(&self, delta: f64) -> Result<u32> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::UnalignedRadius(delta));
        }
        let guess = (delta.ln() / self.theta.ln()).round();
        if !(0.0..=1000.0).contains(&guess) {
            return Err(Error::UnalignedRadius(delta));
        }
        let level = guess as u32;
        let r = self.radius(level);
        if (r - delta).abs() <= 1e-12 * delta {
            Ok(level)
        } else {
            Err(Error::UnalignedRadius(delta))
        }
    }

    /// The smallest `k` with `theta^k < delta`: every pair at distance below
    /// `delta` agrees on at least this many initial coordinates.
    pub fn forced_agreement(&self, delta: f64) -> u64 {
        let mut k = 0u64;
        while theta_pow(self.theta, k) >= delta {
            k += 1;
        }
        k
    }

    /// All admissible words of length `n`, in lexicographic order.
    pub fn enumerate_words(&self, n: usize) -> Vec<Word> {
        enumerate_with(&self.transitions, &vec![true; self.alphabet_size], n)
    }

    /// Number of admissible words of length `n`: the entry sum of `T^(n-1)`.
    pub fn count_words(&self, n: usize) -> u128 {
        if n == 0 {
            return 1;
        }
        let a = self.alphabet_size;
        let mut counts = vec![1u128; a];
        for _ in 1..n {
            let mut next = vec![0u128; a];
            for (i, &c) in counts.iter().enumerate() {
                for (j, slot) in next.iter_mut().enumerate() {
                    if self.transitions[i][j] {
                        *slot += c;
                    }
                }
            }
            counts = next;
        }
        counts.iter().sum()
    }
}

/// `theta^k` computed by repeated squaring so that every caller gets the
/// same bits for the same `k`.
pub fn theta_pow(theta: f64, k: u64) -> f64 {
    if k > i32::MAX as u64 {
        return 0.0;
    }
    theta.powi(k as i32)
}

/// Lexicographic DFS over words of length `n` using only `live` symbols.
pub(crate) fn enumerate_with(transitions: &[Vec<bool>], live: &[bool], n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let a = transitions.len();
    let mut word = Vec::with_capacity(n);
    fn go(
        transitions: &[Vec<bool>],
        live: &[bool],
        a: usize,
        n: usize,
        word: &mut Word,
        out: &mut Vec<Word>,
    ) {
        if word.len() == n {
            out.push(word.clone());
            return;
        }
        for s in 0..a {
            if !live[s] {
                continue;
            }
            if let Some(&last) = word.last() {
                if !transitions[last as usize][s] {
                    continue;
                }
            }
            word.push(s as u8);
            go(transitions, live, a, n, word, out);
            word.pop();
        }
    }
    go(transitions, live, a, n, &mut word, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_strings(words: &[Word]) -> Vec<String> {
        words
            .iter()
            .map(|w| w.iter().map(|s| char::from(b'0' + s)).collect())
            .collect()
    }

    #[test]
    fn rejects_stranded_symbols() {
        let t = vec![vec![true, false], vec![true, false]];
        assert!(matches!(SftSystem::new(t, 0.5), Err(Error::InvalidSystem(_))));
        let t = vec![vec![true, true], vec![false, false]];
        assert!(SftSystem::new(t, 0.5).is_err());
        assert!(SftSystem::full_shift(2, 1.0).is_err());
        assert!(SftSystem::full_shift(2, 0.0).is_err());
    }

    #[test]
    fn words_of_full_and_golden_shifts() {
        let full = SftSystem::full_shift(2, 0.5).unwrap();
        assert_eq!(as_strings(&full.enumerate_words(2)), ["00", "01", "10", "11"]);
        let golden = SftSystem::golden_mean(0.5).unwrap();
        assert_eq!(as_strings(&golden.enumerate_words(2)), ["00", "01", "10"]);
        assert_eq!(golden.enumerate_words(5).len(), 13);
    }

    #[test]
    fn golden_word_counts_are_fibonacci() {
        let golden = SftSystem::golden_mean(0.5).unwrap();
        let (mut a, mut b) = (1u128, 2u128);
        for n in 1..20 {
            // brute force against the Fibonacci recursion F(n+2)
            let (prev_a, prev_b) = (a, b);
            assert_eq!(golden.count_words(n), prev_b);
            assert_eq!(golden.enumerate_words(n).len() as u128, prev_b);
            a = prev_b;
            b = prev_a + prev_b;
        }
    }

    #[test]
    fn aligned_levels_round_trip() {
        let sys = SftSystem::full_shift(2, 0.5).unwrap();
        for l in 0..30 {
            assert_eq!(sys.aligned_level(sys.radius(l)).unwrap(), l);
        }
        assert!(matches!(sys.aligned_level(0.3), Err(Error::UnalignedRadius(_))));
        assert_eq!(sys.forced_agreement(sys.radius(4)), 5);
        assert_eq!(sys.forced_agreement(1.0), 1);
        assert_eq!(sys.forced_agreement(1.5), 0);
    }
}
