use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use clap::Args;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use pressurelab::io;
use pressurelab::oracles;
use pressurelab::pressure_cover::{stirling_bound_count, stirling_gamma, substitution_count};
use pressurelab::sampling::lemma_sample;
use pressurelab::{
    BallKind, CoverQuery, MistakeFunction, Potential, PressureEstimate, PressureQuery, SftSystem, Strategy, ZSet,
};

use crate::{Common, ToleranceFailure};

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| anyhow::anyhow!("bad {what} `{t}`")))
        .collect()
}

struct Setup {
    sys: SftSystem,
    phi: Potential,
    z: ZSet,
    g: Option<MistakeFunction>,
}

impl Common {
    fn setup(&self) -> Result<Setup> {
        let sys = match io::builtin_system(&self.system) {
            Some(r) => r?,
            None => {
                let text = std::fs::read_to_string(&self.system)
                    .with_context(|| format!("reading system {}", self.system))?;
                io::parse_system(&text)?
            }
        };
        let phi = match io::inline_potential(&sys, &self.potential) {
            Some(r) => r?,
            None => {
                let text = std::fs::read_to_string(&self.potential)
                    .with_context(|| format!("reading potential {}", self.potential))?;
                io::parse_potential(&sys, &text)?
            }
        };
        let z = io::parse_zset(&sys, &self.z, |p| {
            std::fs::read_to_string(p).map_err(|e| pressurelab::Error::InvalidSubset(format!("{p}: {e}")))
        })?;
        let g = self.g.as_deref().map(|s| self.mistake(s)).transpose()?;
        Ok(Setup { sys, phi, z, g })
    }

    fn mistake(&self, spec: &str) -> Result<MistakeFunction> {
        Ok(spec.parse::<MistakeFunction>()?.with_epsilon0(self.eps0)?)
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn wall(&self, ms: f64) -> f64 {
        if self.timing {
            ms
        } else {
            0.0
        }
    }
}

fn trace_csv(common: &Common, est: &PressureEstimate) -> String {
    let mut out = String::from("delta,N,critical_s,m_at_critical,wall_ms\n");
    for t in &est.trace {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            t.delta,
            t.n,
            t.critical_s,
            t.m_at_critical,
            common.wall(t.wall_ms)
        );
    }
    out
}

#[derive(Args, Debug)]
pub struct PressureArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "bowen")]
    kind: String,
    /// Radius levels `L` (radius `θ^L`), strictly increasing.
    #[arg(long, default_value = "2,3,4,5")]
    deltas: String,
    #[arg(long = "Ns", default_value = "10,12,14,16")]
    ns: String,
    #[arg(long, default_value = "greedy")]
    strategy: String,
    /// Extra atom lengths beyond `N` for greedy and exhaustive covers.
    #[arg(long, default_value_t = 0)]
    span: usize,
}

pub fn pressure(a: PressureArgs) -> Result<()> {
    let s = a.common.setup()?;
    let kind: BallKind = a.kind.parse()?;
    let g = match (kind, s.g) {
        (BallKind::Mistake, None) => Some(MistakeFunction::linear().with_epsilon0(a.common.eps0)?),
        (_, g) => g,
    };
    let mut q = PressureQuery::new(&s.sys, &s.z, &s.phi, kind).with_span(a.span);
    if let Some(g) = g.as_ref() {
        q = q.with_mistake(g);
    }
    let deltas: Vec<f64> = list::<u32>(&a.deltas, "level")?
        .into_iter()
        .map(|l| s.sys.radius(l))
        .collect();
    let est = q.pressure_estimate(&deltas, &list(&a.ns, "N")?, a.strategy.parse()?)?;
    a.common.emit(&trace_csv(&a.common, &est))?;
    eprintln!("value={} slope={}", est.value, est.slope);
    Ok(())
}

#[derive(Args, Debug)]
pub struct CoverArgs {
    #[command(flatten)]
    common: Common,
    /// Cover levels `L` (cylinders of length `L`), strictly increasing.
    #[arg(long = "L", default_value = "2,3,4,5")]
    levels: String,
    #[arg(long = "Ns", default_value = "10,12,14,16")]
    ns: String,
    #[arg(long, default_value = "greedy")]
    strategy: String,
    #[arg(long, default_value_t = 0)]
    span: usize,
}

pub fn cover_pressure(a: CoverArgs) -> Result<()> {
    let s = a.common.setup()?;
    let mut q = CoverQuery::new(&s.sys, &s.z, &s.phi).with_span(a.span);
    if let Some(g) = s.g.as_ref() {
        q = q.with_mistake(g);
    }
    let est = q.cover_pressure(&list(&a.levels, "level")?, &list(&a.ns, "N")?, a.strategy.parse()?)?;
    a.common.emit(&trace_csv(&a.common, &est))?;
    eprintln!("value={} slope={}", est.value, est.slope);
    Ok(())
}

/// Reference pressure: the transfer matrix when it applies, otherwise the
/// word-count estimate at length `n`.
fn oracle_value(s: &Setup, n: usize) -> Result<(f64, &'static str)> {
    let transfer = match &s.z {
        ZSet::WholeSpace => Some(s.sys.clone()),
        ZSet::SubSft { transitions } => Some(SftSystem::new(transitions.clone(), s.sys.theta())?),
        ZSet::CylinderUnion { .. } => None,
    };
    if let Some(sys) = transfer {
        if let Ok(t) = oracles::transfer_pressure(&sys, &s.phi) {
            return Ok((t.value, "transfer"));
        }
    }
    Ok((oracles::word_count_pressure(&s.sys, &s.z, &s.phi, n)?, "wordcount"))
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "L", default_value = "2,3,4,5")]
    levels: String,
    #[arg(long = "Ns", default_value = "10,12,14,16")]
    ns: String,
    #[arg(long, default_value = "greedy")]
    strategy: String,
    #[arg(long, default_value_t = 0)]
    span: usize,
}

pub const PIPELINES: [&str; 5] = ["bowen", "mistake", "avg", "cover", "cover_mistake"];

pub fn compare(a: CompareArgs) -> Result<()> {
    let s = a.common.setup()?;
    let g = match s.g {
        Some(g) => g,
        None => MistakeFunction::linear().with_epsilon0(a.common.eps0)?,
    };
    let tol = a.common.tol.unwrap_or(0.05);
    let levels: Vec<u32> = list(&a.levels, "level")?;
    let ns: Vec<usize> = list(&a.ns, "N")?;
    let strategy: Strategy = a.strategy.parse()?;
    let deltas: Vec<f64> = levels.iter().map(|&l| s.sys.radius(l)).collect();

    let ball = |kind| {
        let q = PressureQuery::new(&s.sys, &s.z, &s.phi, kind)
            .with_mistake(&g)
            .with_span(a.span);
        q.pressure_estimate(&deltas, &ns, strategy)
    };
    let cover = CoverQuery::new(&s.sys, &s.z, &s.phi).with_span(a.span);
    let runs = [
        ball(BallKind::Bowen)?,
        ball(BallKind::Mistake)?,
        ball(BallKind::Average)?,
        cover.cover_pressure(&levels, &ns, strategy)?,
        cover.with_mistake(&g).cover_pressure(&levels, &ns, strategy)?,
    ];
    let n_max = runs[0].trace.iter().map(|t| t.n).max().unwrap_or(1);
    let (oracle, source) = oracle_value(&s, n_max)?;

    let mut out = String::from("L,delta,N,bowen,mistake,avg,cover,cover_mistake,oracle\n");
    for (i, t) in runs[0].trace.iter().enumerate() {
        let _ = write!(out, "{},{},{}", t.level, t.delta, t.n);
        for r in &runs {
            let _ = write!(out, ",{}", r.trace[i].critical_s);
        }
        let _ = writeln!(out, ",{oracle}");
    }
    a.common.emit(&out)?;

    let mut finals: Vec<(&str, f64)> = PIPELINES.iter().copied().zip(runs.iter().map(|r| r.value)).collect();
    finals.push((source, oracle));
    let mut worst = (0.0, "", "");
    for (i, &(na, va)) in finals.iter().enumerate() {
        for &(nb, vb) in &finals[i + 1..] {
            let d = (va - vb).abs();
            if d > worst.0 {
                worst = (d, na, nb);
            }
        }
    }
    eprintln!("largest final-scale difference |{} - {}| = {}", worst.1, worst.2, worst.0);
    if worst.0 > tol {
        bail!(ToleranceFailure(format!(
            "|{} - {}| = {} exceeds tolerance {tol}",
            worst.1, worst.2, worst.0
        )));
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct LemmaArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
}

pub fn lemma_check(a: LemmaArgs) -> Result<()> {
    let s = a.common.setup()?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.common.seed);
    let mut violations = 0usize;
    let mut csv = a
        .common
        .out
        .as_ref()
        .map(|_| String::from("x,y,n,eps,in_bowen,in_avg,in_mistake_sqrt,chain_ok\n"));
    for _ in 0..a.samples {
        let t = lemma_sample(&s.sys, &mut rng)?;
        violations += !t.report.chain_ok as usize;
        if let Some(csv) = csv.as_mut() {
            let r = t.report;
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{}",
                t.x, t.y, t.n, t.eps, r.in_bowen, r.in_avg, r.in_mistake_sqrt, r.chain_ok
            );
        }
    }
    if let Some(csv) = csv {
        a.common.emit(&csv)?;
    }
    println!("samples={} violations={violations}", a.samples);
    if violations > 0 {
        bail!(ToleranceFailure(format!("{violations} inclusion violations")));
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct StirlingArgs {
    #[arg(long)]
    m: u64,
    #[arg(long)]
    budget: u64,
    #[arg(long)]
    coversize: u64,
}

pub fn stirling(a: StirlingArgs) -> Result<()> {
    println!("count={}", substitution_count(a.m, a.budget, a.coversize));
    println!("bound={}", stirling_bound_count(a.m, a.budget, a.coversize));
    println!("gamma={}", stirling_gamma(a.m, a.budget, a.coversize)?);
    Ok(())
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "mistake")]
    kind: String,
    /// Radius levels; an empty list gives an empty grid.
    #[arg(long, default_value = "2,3,4")]
    deltas: String,
    #[arg(long = "Ns", default_value = "8,10,12")]
    ns: String,
    /// Mistake functions to sweep over (defaults to `--g`, else `linear`).
    #[arg(long)]
    gs: Option<String>,
    #[arg(long, default_value = "greedy")]
    strategy: String,
}

pub fn sweep(a: SweepArgs) -> Result<()> {
    let s = a.common.setup()?;
    let kind: BallKind = a.kind.parse()?;
    let strategy: Strategy = a.strategy.parse()?;
    let g_specs: Vec<String> = match (&a.gs, &a.common.g) {
        (Some(gs), _) => gs.split(';').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect(),
        (None, Some(g)) => vec![g.clone()],
        (None, None) => vec!["linear".into()],
    };
    let gs = g_specs
        .iter()
        .map(|t| a.common.mistake(t))
        .collect::<Result<Vec<_>>>()?;
    let levels: Vec<u32> = list(&a.deltas, "level")?;
    let ns: Vec<usize> = list(&a.ns, "N")?;
    let mut grid = Vec::new();
    for &l in &levels {
        for &n in &ns {
            for gi in 0..gs.len() {
                grid.push((l, n, gi));
            }
        }
    }
    let rows = grid
        .par_iter()
        .map(|&(l, n, gi)| -> Result<String> {
            let start = std::time::Instant::now();
            let g = &gs[gi];
            let delta = s.sys.radius(l);
            let ball = PressureQuery::new(&s.sys, &s.z, &s.phi, kind)
                .with_mistake(g)
                .critical_value(n, delta, strategy)?;
            let cover = CoverQuery::new(&s.sys, &s.z, &s.phi)
                .with_mistake(g)
                .critical_value(n, l, strategy)?;
            let budget = g.budget(n as u64, delta);
            let cover_size = s.sys.count_words(l as usize) as u64;
            let gamma = stirling_gamma(n as u64, budget, cover_size)?;
            let ms = a.common.wall(start.elapsed().as_secs_f64() * 1e3);
            Ok(format!(
                "{l},{delta},{n},{},{},{},{},{budget},{gamma},{ms}\n",
                g_specs[gi], ball.value, ball.m_at_critical, cover.value
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = String::from("L,delta,N,g,critical_s,m_at_critical,cover_s,budget,gamma,wall_ms\n");
    out.extend(rows);
    a.common.emit(&out)
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    common: Common,
    /// `transfer`, `wordcount` or `naive-m`.
    #[arg(long)]
    which: String,
    /// Word length for `wordcount`, minimal length for `naive-m`.
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    s: f64,
    /// Radius level for `naive-m`.
    #[arg(long, default_value_t = 1)]
    level: u32,
    #[arg(long, default_value = "bowen")]
    kind: String,
}

pub fn oracle(a: OracleArgs) -> Result<()> {
    let s = a.common.setup()?;
    match a.which.as_str() {
        "transfer" => {
            let t = oracles::transfer_pressure(&s.sys, &s.phi)?;
            println!("value={}\nlower={}\nupper={}", t.value, t.lower, t.upper);
        }
        "wordcount" => println!("value={}", oracles::word_count_pressure(&s.sys, &s.z, &s.phi, a.n)?),
        "naive-m" => {
            let kind: BallKind = a.kind.parse()?;
            let g = match (kind, s.g) {
                (BallKind::Mistake, None) => Some(MistakeFunction::linear()),
                (_, g) => g,
            };
            let v = oracles::naive_m_infimum(
                &s.sys,
                &s.z,
                &s.phi,
                kind,
                g.as_ref(),
                a.s,
                a.n,
                s.sys.radius(a.level),
            )?;
            println!("value={v}");
        }
        w => bail!(pressurelab::Error::InvalidArgument(format!("unknown oracle `{w}`"))),
    }
    Ok(())
}
