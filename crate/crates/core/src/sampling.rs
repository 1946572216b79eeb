//! Random admissible eventually periodic points, and the randomized check of
//! the ball inclusion chain.

use std::collections::VecDeque;

use rand::Rng;

use crate::balls::{inclusion_chain_check, InclusionReport};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::system::{SftSystem, Word};
use crate::zset::live_symbols;

/// Largest orbit length sampled by the inclusion suite.
pub const MAX_SAMPLE_N: usize = 32;

fn step<R: Rng + ?Sized>(sys: &SftSystem, live: &[bool], rng: &mut R, from: u8) -> Result<u8> {
    let next: Vec<u8> = (0..sys.alphabet_size() as u8)
        .filter(|&b| live[b as usize] && sys.allowed(from, b))
        .collect();
    if next.is_empty() {
        return Err(Error::InvalidSystem(format!("symbol {from} has no live successor")));
    }
    Ok(next[rng.gen_range(0..next.len())])
}

/// Symbols strictly between `from` and `to` on a shortest path `from → … → to`.
fn bridge(sys: &SftSystem, from: u8, to: u8) -> Result<Word> {
    let a = sys.alphabet_size();
    let mut prev = vec![None::<u8>; a];
    let mut queue = VecDeque::from([from]);
    let mut seen = vec![false; a];
    seen[from as usize] = true;
    while let Some(u) = queue.pop_front() {
        for v in 0..a as u8 {
            if !sys.allowed(u, v) {
                continue;
            }
            if v == to {
                let mut path = Vec::new();
                let mut cur = u;
                while cur != from {
                    path.push(cur);
                    cur = prev[cur as usize].expect("visited");
                }
                path.reverse();
                return Ok(path);
            }
            if !seen[v as usize] {
                seen[v as usize] = true;
                prev[v as usize] = Some(u);
                queue.push_back(v);
            }
        }
    }
    Err(Error::NotIrreducible)
}

/// Extends `stem` by a random walk of `walk` symbols and then `cycle`
/// symbols that close into a period.
fn close<R: Rng + ?Sized>(sys: &SftSystem, rng: &mut R, mut stem: Word, walk: usize, cycle: usize) -> Result<Point> {
    let live = live_symbols(sys.transitions());
    if stem.is_empty() {
        let starts: Vec<u8> = (0..sys.alphabet_size() as u8).filter(|&s| live[s as usize]).collect();
        stem.push(starts[rng.gen_range(0..starts.len())]);
    }
    for _ in 0..walk {
        let s = step(sys, &live, rng, *stem.last().unwrap())?;
        stem.push(s);
    }
    let mut period = vec![step(sys, &live, rng, *stem.last().unwrap())?];
    for _ in 1..cycle.max(1) {
        let s = step(sys, &live, rng, *period.last().unwrap())?;
        period.push(s);
    }
    period.extend(bridge(sys, *period.last().unwrap(), period[0])?);
    Point::new(sys, stem, period)
}

/// A random admissible eventually periodic point with preperiod below
/// `max_pre` and period below `max_period` before closing.
pub fn random_point<R: Rng + ?Sized>(sys: &SftSystem, rng: &mut R, max_pre: usize, max_period: usize) -> Result<Point> {
    let walk = rng.gen_range(0..max_pre.max(1));
    let cycle = rng.gen_range(1..max_period.max(2));
    close(sys, rng, Vec::new(), walk, cycle)
}

/// A random point that copies the first `k` symbols of `x` for a random
/// `k ≤ max_shared` and then wanders off.
pub fn random_neighbor<R: Rng + ?Sized>(sys: &SftSystem, rng: &mut R, x: &Point, max_shared: usize) -> Result<Point> {
    let k = rng.gen_range(0..=max_shared);
    let walk = rng.gen_range(0..8);
    let cycle = rng.gen_range(1..8);
    close(sys, rng, x.prefix(k), walk, cycle)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaSample {
    pub x: Point,
    pub y: Point,
    pub n: usize,
    pub eps: f64,
    pub report: InclusionReport,
}

/// One randomized instance of the inclusion chain: about half the pairs are
/// close in the orbit sense so that the inner balls are exercised.
pub fn lemma_sample<R: Rng + ?Sized>(sys: &SftSystem, rng: &mut R) -> Result<LemmaSample> {
    let x = random_point(sys, rng, 12, 12)?;
    let y = if rng.gen_bool(0.5) {
        random_neighbor(sys, rng, &x, 48)?
    } else {
        random_point(sys, rng, 12, 12)?
    };
    let n = rng.gen_range(1..=MAX_SAMPLE_N);
    // (0, 1]: 1 − U[0,1)
    let eps = if rng.gen_bool(0.5) {
        1.0 - rng.gen::<f64>()
    } else {
        sys.theta().powi(rng.gen_range(0..8))
    };
    let report = inclusion_chain_check(sys, &x, &y, n, eps)?;
    Ok(LemmaSample { x, y, n, eps, report })
}
