//! Weighted set cover over a finite witness set.
//!
//! Candidates are atoms (balls or strings) with a length `n` and a base log
//! weight `b`; at exponent `s` an atom weighs `exp(−n·s + b)`. A cover must
//! contain every witness in at least one chosen atom.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::reduce::log_sum_exp;

/// Witness-count guard for branch and bound (coverage sets are `u64` masks).
pub const MAX_BNB_WITNESSES: usize = 64;
/// Candidate-count guard for exact searches.
pub const MAX_EXACT_CANDIDATES: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct CoverInstance {
    pub n_witnesses: usize,
    pub lengths: Vec<usize>,
    pub log_base: Vec<f64>,
    /// Sorted witness indices covered by each candidate.
    pub covers: Vec<Vec<u32>>,
}

impl CoverInstance {
    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    #[inline]
    pub fn log_weight(&self, c: usize, s: f64) -> f64 {
        -(self.lengths[c] as f64) * s + self.log_base[c]
    }

    /// `ln Σ_{c ∈ chosen} exp(−n_c s + b_c)`, summed in index order.
    pub fn log_sum(&self, chosen: &[usize], s: f64) -> f64 {
        let mut idx = chosen.to_vec();
        idx.sort_unstable();
        let ts: Vec<f64> = idx.iter().map(|&c| self.log_weight(c, s)).collect();
        log_sum_exp(&ts)
    }

    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![false; self.n_witnesses];
        for &c in chosen {
            for &w in &self.covers[c] {
                hit[w as usize] = true;
            }
        }
        hit.iter().all(|&h| h)
    }
}

#[derive(PartialEq)]
struct Scored {
    score: f64,
    idx: usize,
}

impl Eq for Scored {}

impl Ord for Scored {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| other.idx.cmp(&self.idx))
    }
}

impl PartialOrd for Scored {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Greedy cover: repeatedly take the atom with the most newly covered
/// witnesses per unit weight at exponent `s_ref` (lowest index on ties).
pub fn greedy(inst: &CoverInstance, s_ref: f64) -> Result<Vec<usize>> {
    let mut covered = vec![false; inst.n_witnesses];
    let mut remaining = inst.n_witnesses;
    let score = |c: usize, fresh: usize| (fresh as f64).ln() - inst.log_weight(c, s_ref);
    let mut heap: BinaryHeap<Scored> = (0..inst.len())
        .filter(|&c| !inst.covers[c].is_empty())
        .map(|c| Scored {
            score: score(c, inst.covers[c].len()),
            idx: c,
        })
        .collect();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let Some(top) = heap.pop() else {
            return Err(Error::InvalidArgument("candidates do not cover the witness set".into()));
        };
        let fresh = inst.covers[top.idx].iter().filter(|&&w| !covered[w as usize]).count();
        if fresh == 0 {
            continue;
        }
        let current = score(top.idx, fresh);
        if current < top.score {
            heap.push(Scored {
                score: current,
                idx: top.idx,
            });
            continue;
        }
        for &w in &inst.covers[top.idx] {
            if !covered[w as usize] {
                covered[w as usize] = true;
                remaining -= 1;
            }
        }
        chosen.push(top.idx);
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Minimum-weight cover at exponent `s` by depth-first branch and bound.
///
/// Branches on the uncovered witness with the fewest candidates; the bound
/// charges every uncovered witness its cheapest per-witness share
/// `min_c w_c / |cover(c)|`.
pub fn branch_and_bound(inst: &CoverInstance, s: f64) -> Result<Vec<usize>> {
    if inst.n_witnesses > MAX_BNB_WITNESSES || inst.len() > MAX_EXACT_CANDIDATES {
        return Err(Error::InstanceTooLarge(format!(
            "{} witnesses / {} candidates exceed {MAX_BNB_WITNESSES} / {MAX_EXACT_CANDIDATES}",
            inst.n_witnesses,
            inst.len()
        )));
    }
    let n = inst.n_witnesses;
    if n == 0 {
        return Ok(Vec::new());
    }
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let masks: Vec<u64> = inst
        .covers
        .iter()
        .map(|c| c.iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();
    let shift = (0..inst.len())
        .map(|c| inst.log_weight(c, s))
        .fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = (0..inst.len())
        .map(|c| (inst.log_weight(c, s) - shift).exp())
        .collect();

    // drop atoms dominated by a no-heavier atom covering a superset
    let mut useful: Vec<usize> = Vec::new();
    for c in 0..inst.len() {
        if masks[c] == 0 {
            continue;
        }
        let dominated = (0..inst.len()).any(|d| {
            d != c
                && masks[c] & !masks[d] == 0
                && (weights[d] < weights[c] || (weights[d] == weights[c] && (masks[d] != masks[c] || d < c)))
        });
        if !dominated {
            useful.push(c);
        }
    }

    let mut by_witness: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &c in &useful {
        for (w, list) in by_witness.iter_mut().enumerate() {
            if masks[c] >> w & 1 == 1 {
                list.push(c);
            }
        }
    }
    for list in &mut by_witness {
        list.sort_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(a.cmp(&b)));
        if list.is_empty() {
            return Err(Error::InvalidArgument("candidates do not cover the witness set".into()));
        }
    }
    let share: Vec<f64> = by_witness
        .iter()
        .map(|list| {
            list.iter()
                .map(|&c| weights[c] / masks[c].count_ones() as f64)
                .fold(f64::INFINITY, f64::min)
        })
        .collect();

    struct Ctx<'a> {
        full: u64,
        masks: &'a [u64],
        weights: &'a [f64],
        by_witness: &'a [Vec<usize>],
        share: &'a [f64],
        best_cost: f64,
        best: Vec<usize>,
        stack: Vec<usize>,
    }

    fn go(ctx: &mut Ctx<'_>, covered: u64, cost: f64) {
        if covered == ctx.full {
            if cost < ctx.best_cost {
                ctx.best_cost = cost;
                ctx.best = ctx.stack.clone();
            }
            return;
        }
        let mut bound = 0.0;
        let mut pick = usize::MAX;
        let mut fewest = usize::MAX;
        let mut rest = ctx.full & !covered;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            bound += ctx.share[w];
            if ctx.by_witness[w].len() < fewest {
                fewest = ctx.by_witness[w].len();
                pick = w;
            }
        }
        if cost + bound >= ctx.best_cost {
            return;
        }
        for i in 0..ctx.by_witness[pick].len() {
            let c = ctx.by_witness[pick][i];
            let next_cost = cost + ctx.weights[c];
            if next_cost >= ctx.best_cost {
                break;
            }
            ctx.stack.push(c);
            go(ctx, covered | ctx.masks[c], next_cost);
            ctx.stack.pop();
        }
    }

    let seed = greedy(inst, s)?;
    let seed_cost: f64 = seed.iter().map(|&c| weights[c]).sum();
    let mut ctx = Ctx {
        full,
        masks: &masks,
        weights: &weights,
        by_witness: &by_witness,
        share: &share,
        best_cost: seed_cost,
        best: seed,
        stack: Vec::new(),
    };
    go(&mut ctx, 0, 0.0);
    let mut best = ctx.best;
    best.sort_unstable();
    Ok(best)
}
