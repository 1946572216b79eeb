//! Plain-text formats for systems, potentials, subsets and run configs.
//!
//! System file:
//! ```text
//! A=2
//! theta=0.5
//! 1 1
//! 1 0
//! ```
//! Potential file: `kind=locally_constant` with `w=<window>`, or
//! `kind=geometric` with `rho=<ρ>`, followed by one value per line.
//! Blank lines and `#` comments are ignored everywhere.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::system::SftSystem;
use crate::zset::ZSet;

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn key_value<'a>(line: usize, l: &'a str, key: &str) -> Result<&'a str> {
    match l.split_once('=') {
        Some((k, v)) if k.trim() == key => Ok(v.trim()),
        _ => Err(parse_err(line, format!("expected `{key}=...`"))),
    }
}

fn number<T: std::str::FromStr>(line: usize, v: &str) -> Result<T> {
    v.parse().map_err(|_| parse_err(line, format!("bad number `{v}`")))
}

fn matrix<'a>(rows: &mut impl Iterator<Item = (usize, &'a str)>, a: usize) -> Result<Vec<Vec<bool>>> {
    let mut t = Vec::with_capacity(a);
    for _ in 0..a {
        let (n, l) = rows.next().ok_or_else(|| parse_err(0, "missing matrix row"))?;
        let row = l
            .split_whitespace()
            .map(|e| match e {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(parse_err(n, format!("matrix entry `{e}` is not 0/1"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != a {
            return Err(parse_err(n, format!("row has {} entries, expected {a}", row.len())));
        }
        t.push(row);
    }
    Ok(t)
}

pub fn parse_system(text: &str) -> Result<SftSystem> {
    let mut it = lines(text);
    let (n, l) = it.next().ok_or_else(|| parse_err(0, "empty system file"))?;
    let a: usize = number(n, key_value(n, l, "A")?)?;
    let (n, l) = it.next().ok_or_else(|| parse_err(n, "missing theta"))?;
    let theta: f64 = number(n, key_value(n, l, "theta")?)?;
    let t = matrix(&mut it, a)?;
    if let Some((n, _)) = it.next() {
        return Err(parse_err(n, "trailing content"));
    }
    SftSystem::new(t, theta)
}

pub fn format_system(sys: &SftSystem) -> String {
    let mut out = format!("A={}\ntheta={}\n", sys.alphabet_size(), sys.theta());
    for row in sys.transitions() {
        let r: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        out.push_str(&r.join(" "));
        out.push('\n');
    }
    out
}

/// Builtin systems: `full:<A>` and `golden`, with `θ = 1/2` unless given as
/// `full:<A>:<θ>` / `golden:<θ>`.
pub fn builtin_system(name: &str) -> Option<Result<SftSystem>> {
    let mut parts = name.split(':');
    let head = parts.next()?;
    let rest: Vec<&str> = parts.collect();
    let theta = |s: Option<&&str>| -> Result<f64> {
        s.map_or(Ok(0.5), |v| {
            v.parse()
                .map_err(|_| Error::InvalidArgument(format!("bad theta `{v}`")))
        })
    };
    match head {
        "full" => Some((|| {
            let a: usize = rest
                .first()
                .ok_or_else(|| Error::InvalidArgument("full:<A> needs an alphabet size".into()))?
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad alphabet in `{name}`")))?;
            SftSystem::full_shift(a, theta(rest.get(1))?)
        })()),
        "golden" => Some(theta(rest.first()).and_then(SftSystem::golden_mean)),
        _ => None,
    }
}

pub fn parse_potential(sys: &SftSystem, text: &str) -> Result<Potential> {
    let mut it = lines(text);
    let (n, l) = it.next().ok_or_else(|| parse_err(0, "empty potential file"))?;
    let kind = key_value(n, l, "kind")?.to_string();
    let (n2, l2) = it.next().ok_or_else(|| parse_err(n, "missing parameter line"))?;
    let values = it.map(|(n, v)| number::<f64>(n, v)).collect::<Result<Vec<_>>>()?;
    match kind.as_str() {
        "locally_constant" => Potential::locally_constant(sys, number(n2, key_value(n2, l2, "w")?)?, values),
        "geometric" => Potential::geometric(sys, number(n2, key_value(n2, l2, "rho")?)?, values),
        k => Err(parse_err(n, format!("unknown potential kind `{k}`"))),
    }
}

/// Inline potentials: `zero`, or `first:<v0>,<v1>,...` for `φ(x) = v[x_0]`.
pub fn inline_potential(sys: &SftSystem, spec: &str) -> Option<Result<Potential>> {
    if spec == "zero" {
        return Some(Ok(Potential::zero(sys)));
    }
    let vals = spec.strip_prefix("first:")?;
    Some(
        vals.split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidPotential(format!("bad value `{v}`")))
            })
            .collect::<Result<Vec<_>>>()
            .and_then(|vals| Potential::first_symbol(sys, vals)),
    )
}

/// Subset of `X` from `whole`, `cylinders:w1,w2,...` (symbols as digits) or
/// the text of a submatrix file (rows of 0/1).
pub fn parse_zset(sys: &SftSystem, spec: &str, read: impl FnOnce(&str) -> Result<String>) -> Result<ZSet> {
    let z = if spec == "whole" {
        ZSet::WholeSpace
    } else if let Some(ws) = spec.strip_prefix("cylinders:") {
        let words = ws
            .split(',')
            .map(|w| {
                w.trim()
                    .chars()
                    .map(|c| {
                        c.to_digit(36)
                            .map(|d| d as u8)
                            .ok_or_else(|| Error::InvalidSubset(format!("bad symbol `{c}`")))
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ZSet::CylinderUnion { words }
    } else if let Some(path) = spec.strip_prefix("subsft:") {
        let text = read(path)?;
        let mut it = lines(&text);
        let t = matrix(&mut it, sys.alphabet_size())?;
        ZSet::SubSft { transitions: t }
    } else {
        return Err(Error::InvalidSubset(format!("unknown subset `{spec}`")));
    };
    z.validate(sys)?;
    Ok(z)
}

/// `key=value` lines; later keys override earlier ones.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, l) in lines(text) {
        let (k, v) = l
            .split_once('=')
            .ok_or_else(|| parse_err(n, "expected `key=value`"))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}
