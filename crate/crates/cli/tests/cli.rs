use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pressurelab"))
        .args(args)
        .output()
        .expect("spawn pressurelab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(o: &Output, key: &str) -> f64 {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {}", stdout(o)))
        .parse()
        .unwrap()
}

#[test]
fn pressure_csv_shape() {
    let o = run(&["pressure", "--deltas", "2,3", "--Ns", "6,8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "delta,N,critical_s,m_at_critical,wall_ms");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.25,6,"));
    assert!(lines[1].ends_with(",0"));
}

#[test]
fn files_for_system_and_potential() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("golden.sft");
    std::fs::write(&sys, "A=2\ntheta=0.5\n1 1\n1 0\n").unwrap();
    let pot = dir.path().join("phi.pot");
    std::fs::write(&pot, "kind=locally_constant\nw=1\n0\n0\n").unwrap();
    let o = run(&[
        "pressure",
        "--system",
        sys.to_str().unwrap(),
        "--potential",
        pot.to_str().unwrap(),
        "--deltas",
        "2",
        "--Ns",
        "16",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s: f64 = stdout(&o).lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((s - 0.481212).abs() < 0.05);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# golden run\nsystem=golden\ndeltas=2\nNs=8\n").unwrap();
    let o = run(&["pressure", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("0.25,8,"));
    let o = run(&["pressure", "--config", cfg.to_str().unwrap(), "--Ns", "10"]);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("0.25,10,"));
}

#[test]
fn exit_codes() {
    // config errors
    assert_eq!(run(&["pressure", "--system", "/nonexistent"]).status.code(), Some(2));
    assert_eq!(run(&["pressure", "--kind", "wobbly"]).status.code(), Some(2));
    assert_eq!(run(&["pressure", "--deltas", "3,2"]).status.code(), Some(2));
    assert_eq!(run(&["pressure", "--Z", "cylinders:2"]).status.code(), Some(2));
    // size guard
    assert_eq!(run(&["pressure", "--system", "full:4", "--deltas", "2", "--Ns", "16"]).status.code(), Some(4));
    assert_eq!(
        run(&["pressure", "--strategy", "exhaustive", "--deltas", "2", "--Ns", "8"]).status.code(),
        Some(4)
    );
    // tolerance failure names the comparison
    let o = run(&["compare", "--tol", "1e-9", "--L", "1,2", "--Ns", "6,8"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds tolerance"));
}

#[test]
fn compare_passes_with_zero_mistakes() {
    let o = run(&["compare", "--g", "zero", "--L", "2,3", "--Ns", "8,10"]);
    assert!(o.status.success());
    for line in stdout(&o).lines().skip(1) {
        let v: Vec<f64> = line.split(',').skip(3).map(|x| x.parse().unwrap()).collect();
        assert_eq!(v[0], v[1], "ball pipelines differ: {line}");
        assert_eq!(v[3], v[4], "string pipelines differ: {line}");
    }
}

#[test]
fn sweep_empty_grid_and_determinism() {
    let o = run(&["sweep", "--deltas", ""]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "L,delta,N,g,critical_s,m_at_critical,cover_s,budget,gamma,wall_ms\n");

    let dir = tempfile::tempdir().unwrap();
    let out = |name: &str| dir.path().join(name);
    let args = |p: &Path| {
        vec![
            "sweep".to_string(),
            "--system".into(),
            "golden".into(),
            "--deltas".into(),
            "2,3".into(),
            "--Ns".into(),
            "8,10".into(),
            "--gs".into(),
            "linear;zero".into(),
            "--out".into(),
            p.to_str().unwrap().into(),
        ]
    };
    for name in ["a.csv", "b.csv"] {
        let a = args(&out(name));
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        assert!(run(&refs).status.success());
    }
    let a = std::fs::read(out("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(out("b.csv")).unwrap());
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 1 + 2 * 2 * 2);
}

#[test]
fn stirling_prints_count_bound_gamma() {
    let o = run(&["stirling", "--m", "10", "--budget", "1", "--coversize", "2"]);
    assert!(o.status.success());
    assert_eq!(value(&o, "count"), 11.0);
    assert_eq!(value(&o, "bound"), 21.0);
    assert!((value(&o, "gamma") - 21f64.ln() / 10.0).abs() < 1e-15);
}

#[test]
fn oracles() {
    let o = run(&["oracle", "--which", "transfer", "--potential", "first:0,1"]);
    assert!((value(&o, "value") - (1.0 + 1f64.exp()).ln()).abs() < 1e-10);
    let o = run(&["oracle", "--which", "wordcount", "--n", "7"]);
    assert!((value(&o, "value") - 2f64.ln()).abs() < 1e-12);
    let o = run(&["oracle", "--which", "naive-m", "--n", "3", "--s", "0.6931471805599453", "--level", "1"]);
    assert!((value(&o, "value") - 1.0).abs() < 1e-12);
    let o = run(&["oracle", "--which", "transfer", "--system", "golden", "--Z", "whole"]);
    assert!(value(&o, "lower") <= value(&o, "upper"));
    assert_eq!(run(&["oracle", "--which", "nope"]).status.code(), Some(2));
}

#[test]
fn lemma_check_writes_samples() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("lemma.csv");
    let o = run(&["lemma-check", "--samples", "500", "--seed", "3", "--out", csv.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("samples=500 violations=0"));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("x,y,n,eps,in_bowen,in_avg,in_mistake_sqrt,chain_ok\n"));
    assert_eq!(text.lines().count(), 501);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}
