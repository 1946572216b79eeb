//! Subsets `Z ⊂ X` with computable admissible words, and the witness
//! points that realize each word inside `Z`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::system::{enumerate_with, SftSystem, Word};

#[derive(Debug, Clone, PartialEq)]
pub enum ZSet {
    WholeSpace,
    /// Sequences allowed by a transition submatrix of the ambient one.
    SubSft { transitions: Vec<Vec<bool>> },
    /// Union of the cylinders of the given (ambient-admissible) words.
    CylinderUnion { words: Vec<Word> },
}

impl ZSet {
    pub fn validate(&self, sys: &SftSystem) -> Result<()> {
        match self {
            ZSet::WholeSpace => Ok(()),
            ZSet::SubSft { transitions } => {
                let a = sys.alphabet_size();
                if transitions.len() != a || transitions.iter().any(|r| r.len() != a) {
                    return Err(Error::InvalidSubset("submatrix has the wrong shape".into()));
                }
                for (i, row) in transitions.iter().enumerate() {
                    for (j, &t) in row.iter().enumerate() {
                        if t && !sys.transitions()[i][j] {
                            return Err(Error::InvalidSubset(format!(
                                "transition {i}->{j} not allowed in the ambient system"
                            )));
                        }
                    }
                }
                if !live_symbols(transitions).iter().any(|&l| l) {
                    return Err(Error::InvalidSubset("subshift is empty".into()));
                }
                Ok(())
            }
            ZSet::CylinderUnion { words } => {
                if words.is_empty() {
                    return Err(Error::InvalidSubset("no cylinders".into()));
                }
                if let Some(w) = words.iter().find(|w| w.is_empty() || !sys.is_admissible(w)) {
                    return Err(Error::InvalidSubset(format!("word {w:?} is not admissible")));
                }
                Ok(())
            }
        }
    }

    /// The transition matrix governing points of `Z` after any prefix
    /// constraint, with the symbols that start an infinite path.
    fn dynamics<'a>(&'a self, sys: &'a SftSystem) -> (&'a [Vec<bool>], Vec<bool>) {
        match self {
            ZSet::SubSft { transitions } => (transitions, live_symbols(transitions)),
            _ => (sys.transitions(), vec![true; sys.alphabet_size()]),
        }
    }

    /// Words of length `n` that begin some point of `Z`, lexicographically.
    pub fn words(&self, sys: &SftSystem, n: usize) -> Result<Vec<Word>> {
        self.validate(sys)?;
        let (t, live) = self.dynamics(sys);
        let all = enumerate_with(t, &live, n);
        Ok(match self {
            ZSet::CylinderUnion { words } => all
                .into_iter()
                .filter(|w| words.iter().any(|u| compatible(u, w)))
                .collect(),
            _ => all,
        })
    }

    /// Upper bound on the number of `n`-words, used by size guards.
    pub fn word_bound(&self, sys: &SftSystem, n: usize) -> f64 {
        (sys.alphabet_size() as f64).powi(n as i32)
    }

    /// A point of `Z` beginning with `word`: `word^∞` when that point lies in
    /// `Z`, otherwise `word` followed by the lexicographically least tail.
    pub fn witness(&self, sys: &SftSystem, word: &[u8]) -> Result<Point> {
        let (t, live) = self.dynamics(sys);
        let wraps = |w: &[u8]| {
            !w.is_empty()
                && w.iter().all(|&s| live[s as usize])
                && w.windows(2).all(|p| t[p[0] as usize][p[1] as usize])
                && t[w[w.len() - 1] as usize][w[0] as usize]
        };
        let stem: Word = match self {
            ZSet::CylinderUnion { words } => {
                let mut inside = words.iter().filter(|u| u.len() <= word.len() && word.starts_with(u));
                if inside.next().is_some() {
                    word.to_vec()
                } else {
                    let longer: BTreeSet<&Word> = words.iter().filter(|u| u.starts_with(word)).collect();
                    let u = longer.into_iter().next().ok_or_else(|| {
                        Error::InvalidSubset(format!("word {word:?} does not meet Z"))
                    })?;
                    if wraps(word) {
                        let p = Point::unchecked(Vec::new(), word.to_vec());
                        if p.prefix(u.len()) == *u {
                            return Ok(p);
                        }
                    }
                    u.clone()
                }
            }
            _ => word.to_vec(),
        };
        if wraps(&stem) && stem.len() == word.len() {
            return Ok(Point::unchecked(Vec::new(), stem));
        }
        Ok(with_least_tail(t, &live, stem))
    }
}

fn compatible(u: &[u8], w: &[u8]) -> bool {
    let k = u.len().min(w.len());
    u[..k] == w[..k]
}

/// Symbols from which an infinite path exists.
pub(crate) fn live_symbols(t: &[Vec<bool>]) -> Vec<bool> {
    let a = t.len();
    let mut live = vec![true; a];
    loop {
        let mut changed = false;
        for i in 0..a {
            if live[i] && !(0..a).any(|j| live[j] && t[i][j]) {
                live[i] = false;
                changed = true;
            }
        }
        if !changed {
            return live;
        }
    }
}

/// `stem` followed by repeatedly taking the smallest live successor until a
/// symbol repeats; the cycle closed that way becomes the period.
fn with_least_tail(t: &[Vec<bool>], live: &[bool], stem: Word) -> Point {
    let a = t.len();
    let mut seen = vec![None::<usize>; a];
    let mut tail: Word = Vec::new();
    let mut cur = *stem.last().expect("nonempty stem");
    loop {
        let next = (0..a)
            .find(|&j| live[j] && t[cur as usize][j])
            .expect("live symbol has a live successor") as u8;
        if let Some(pos) = seen[next as usize] {
            let mut pre = stem;
            pre.extend_from_slice(&tail[..pos]);
            return Point::unchecked(pre, tail[pos..].to_vec());
        }
        seen[next as usize] = Some(tail.len());
        tail.push(next);
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witnesses_begin_with_their_word() {
        let g = SftSystem::golden_mean(0.5).unwrap();
        for w in ZSet::WholeSpace.words(&g, 6).unwrap() {
            let p = ZSet::WholeSpace.witness(&g, &w).unwrap();
            assert_eq!(p.prefix(6), w);
            assert!(Point::new(&g, p.preperiod().to_vec(), p.period().to_vec()).is_ok());
        }
        // 101 wraps 1 -> 1, which is forbidden: gets a tail
        let p = ZSet::WholeSpace.witness(&g, &[1, 0, 1]).unwrap();
        assert_eq!(p.to_string(), "101(0)");
        assert_eq!(p.prefix(5), vec![1, 0, 1, 0, 0]);
        let q = ZSet::WholeSpace.witness(&g, &[0, 1]).unwrap();
        assert_eq!(q.period(), &[0, 1]);
    }

    #[test]
    fn subsft_words_use_live_symbols() {
        let full = SftSystem::full_shift(3, 0.5).unwrap();
        // symbol 2 has no successor inside Z
        let t = vec![
            vec![true, true, true],
            vec![true, false, false],
            vec![false, false, false],
        ];
        let z = ZSet::SubSft { transitions: t };
        let words = z.words(&full, 3).unwrap();
        assert!(words.iter().all(|w| !w.contains(&2)));
        assert_eq!(words.len(), 5);
        let bad = ZSet::SubSft {
            transitions: vec![vec![false; 2]; 2],
        };
        assert!(bad.validate(&SftSystem::full_shift(2, 0.5).unwrap()).is_err());
    }

    #[test]
    fn cylinder_union_words_and_witnesses() {
        let full = SftSystem::full_shift(2, 0.5).unwrap();
        let z = ZSet::CylinderUnion {
            words: vec![vec![0, 1, 1], vec![1]],
        };
        let words = z.words(&full, 2).unwrap();
        assert_eq!(words, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        let p = z.witness(&full, &[0, 1]).unwrap();
        assert_eq!(p.prefix(3), vec![0, 1, 1]);
        assert_eq!(z.words(&full, 4).unwrap().len(), 10);
    }
}
