//! Merging `--config FILE` into the argument list.
//!
//! Entries become `--key value` flags inserted right after the subcommand,
//! so anything given on the command line later overrides them.

use std::ffi::OsString;

use anyhow::Context;

/// Flags that take no value; `key=true` turns them on.
const SWITCHES: &[&str] = &["timing"];

pub fn expand_args(args: Vec<OsString>) -> anyhow::Result<Vec<OsString>> {
    let pos = args
        .iter()
        .position(|a| a == "--config")
        .map(|i| (i, args.get(i + 1).cloned()))
        .or_else(|| {
            args.iter().enumerate().find_map(|(i, a)| {
                a.to_str()
                    .and_then(|s| s.strip_prefix("--config="))
                    .map(|p| (i, Some(OsString::from(p))))
            })
        });
    let Some((_, Some(path))) = pos else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {}", path.to_string_lossy()))?;
    let entries = pressurelab::io::parse_config(&text)?;
    let mut injected = Vec::new();
    for (k, v) in entries {
        if SWITCHES.contains(&k.as_str()) {
            if v == "true" {
                injected.push(OsString::from(format!("--{k}")));
            }
            continue;
        }
        injected.push(OsString::from(format!("--{k}")));
        injected.push(OsString::from(v));
    }
    // args[0] is the binary, args[1] the subcommand
    let split = 2.min(args.len());
    let mut out: Vec<OsString> = args[..split].to_vec();
    out.extend(injected);
    out.extend(args[split..].iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_entries_precede_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "# run\nkind=mistake\nNs=8\ntiming=true\n").unwrap();
        let args: Vec<OsString> = ["pressurelab", "pressure", "--config", path.to_str().unwrap(), "--Ns", "10"]
            .iter()
            .map(OsString::from)
            .collect();
        let out = expand_args(args).unwrap();
        let s: Vec<String> = out.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert_eq!(&s[..2], ["pressurelab", "pressure"]);
        assert_eq!(&s[2..7], ["--Ns", "8", "--kind", "mistake", "--timing"]);
        assert_eq!(s.last().unwrap(), "10");
    }
}
