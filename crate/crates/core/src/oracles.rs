//! Independent reference computations used to check the engines.

use crate::balls::{self, BallKind};
use crate::error::{Error, Result};
use crate::mistake::MistakeFunction;
use crate::potential::Potential;
use crate::reduce::log_sum_exp;
use crate::system::SftSystem;
use crate::zset::ZSet;

/// Witness count above which the subset oracle refuses to run.
pub const NAIVE_MAX_WITNESSES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferPressure {
    pub value: f64,
    /// Collatz–Wielandt bracket `[lo, hi]` on the spectral radius, as logs.
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
}

fn irreducible(t: &[Vec<bool>]) -> bool {
    let a = t.len();
    (0..a).all(|start| {
        let mut seen = vec![false; a];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..a {
                if t[i][j] && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    })
}

/// Topological pressure of a locally constant potential with window 1 or 2
/// on an irreducible SFT, as the log spectral radius of the weighted
/// transfer matrix `M_ij = t_ij exp(φ(i j))`.
pub fn transfer_pressure(sys: &SftSystem, phi: &Potential) -> Result<TransferPressure> {
    let t = sys.transitions();
    let a = sys.alphabet_size();
    if !irreducible(t) {
        return Err(Error::NotIrreducible);
    }
    let Potential::LocallyConstant { window, table } = phi else {
        return Err(Error::InvalidPotential("transfer oracle needs a locally constant potential".into()));
    };
    let weight = |i: usize, j: usize| match window {
        1 => Ok(table[i]),
        2 => Ok(table[i * a + j]),
        w => Err(Error::InvalidPotential(format!("window {w} unsupported"))),
    };
    let shift = table.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let mut m = vec![vec![0.0; a]; a];
    for i in 0..a {
        for j in 0..a {
            if t[i][j] {
                m[i][j] = (weight(i, j)? - shift).exp();
            }
        }
    }
    // power iteration on M + I, which is primitive when M is irreducible
    let mut v = vec![1.0; a];
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for it in 1..=100_000 {
        let w: Vec<f64> = (0..a)
            .map(|i| v[i] + (0..a).map(|j| m[i][j] * v[j]).sum::<f64>())
            .collect();
        let ratios = w.iter().zip(&v).map(|(x, y)| x / y);
        lo = ratios.clone().fold(f64::INFINITY, f64::min);
        hi = ratios.fold(0.0, f64::max);
        let norm = w.iter().fold(0.0f64, |s, x| s.max(*x));
        v = w.into_iter().map(|x| x / norm).collect();
        if (hi - 1.0).ln() - (lo - 1.0).ln() <= 1e-10 && lo > 1.0 {
            let (l, h) = ((lo - 1.0f64).ln() + shift, (hi - 1.0f64).ln() + shift);
            return Ok(TransferPressure {
                value: 0.5 * (l + h),
                lower: l,
                upper: h,
                iterations: it,
            });
        }
    }
    Err(Error::InvalidArgument(format!(
        "power iteration did not converge (bracket {lo}..{hi})"
    )))
}

/// `(1/n) ln Σ_w exp(S_nφ(x_w))` over the witnesses of the `Z`-admissible
/// `n`-words.
pub fn word_count_pressure(sys: &SftSystem, z: &ZSet, phi: &Potential, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let sums = z
        .words(sys, n)?
        .iter()
        .map(|w| Ok(phi.birkhoff_sum(sys, &z.witness(sys, w)?, n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(log_sum_exp(&sums) / n as f64)
}

/// Exact `inf` of the covering sum over covers by length-`N` balls centered
/// at witnesses, by dynamic programming over subsets of the witness set.
/// Shares nothing with the engines beyond the ball predicates.
#[allow(clippy::too_many_arguments)]
pub fn naive_m_infimum(
    sys: &SftSystem,
    z: &ZSet,
    phi: &Potential,
    kind: BallKind,
    g: Option<&MistakeFunction>,
    s: f64,
    n: usize,
    delta: f64,
) -> Result<f64> {
    sys.aligned_level(delta)?;
    let words = z.words(sys, n)?;
    let k = words.len();
    if k > NAIVE_MAX_WITNESSES {
        return Err(Error::InstanceTooLarge(format!("{k} witnesses exceed {NAIVE_MAX_WITNESSES}")));
    }
    let pts = words
        .iter()
        .map(|w| z.witness(sys, w))
        .collect::<Result<Vec<_>>>()?;
    let mut masks = vec![0u32; k];
    let mut weights = vec![0.0; k];
    for i in 0..k {
        for j in 0..k {
            if balls::contains(sys, kind, g, &pts[i], &pts[j], n, delta)? {
                masks[i] |= 1 << j;
            }
        }
        weights[i] = (-(n as f64) * s + phi.birkhoff_sum(sys, &pts[i], n)).exp();
    }
    let full = (1u32 << k) - 1;
    let mut best = vec![f64::INFINITY; 1 << k];
    best[0] = 0.0;
    for covered in 0..=full {
        let cur = best[covered as usize];
        if !cur.is_finite() {
            continue;
        }
        for i in 0..k {
            let next = covered | masks[i];
            if next != covered && cur + weights[i] < best[next as usize] {
                best[next as usize] = cur + weights[i];
            }
        }
    }
    Ok(best[full as usize])
}
