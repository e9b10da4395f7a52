use std::process::Command;

use k3mirror_cli::{checks, Config, RunReport, Status};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_k3mirror"));
    c.env_remove(k3mirror_cli::PREC_ENV);
    c
}

#[test]
fn json_round_trip() {
    let reports = vec![checks::lattice(), checks::mirror_map(6), checks::uniqueness(), checks::period_vector(&checks::default_p())];
    let r = RunReport::new(Config::default(), reports);
    let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    let back = RunReport::from_json(&r.to_json().unwrap()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn lattice_audit_subcommand() {
    let out = bin().args(["lattice-audit", "--format", "json"]).output().unwrap();
    assert!(out.status.success());
    let r = RunReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let c = r.get("lattice-audit").unwrap();
    assert_eq!(c.status, Status::Pass);
    // exact matrices inline
    assert_eq!(c.details["monodromy"][4]["matrix"][2][0], "-16");
    assert_eq!(c.details["relation_orderings"][0], "later-on-left");
}

#[test]
fn period_vector_and_exit_codes() {
    let out = bin().args(["period-vector", "--p", "-0.25,1.5"]).output().unwrap();
    assert!(out.status.success());
    let r = RunReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let e = &r.checks[0].details["entries"];
    assert_eq!(e[0][0].as_f64().unwrap(), -1.0);
    assert_eq!(e[0][1].as_f64().unwrap(), 6.0);
    assert_eq!(e[2][0].as_f64().unwrap(), -1.0);

    let real = bin().args(["period-vector", "--p", "1,0"]).output().unwrap();
    assert_eq!(real.status.code(), Some(1));
    let bad = bin().args(["period-vector", "--p", "one"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn config_file_flags_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("k3.toml");
    std::fs::write(&cfg, "order = 1\nprecision-bits = 100\n").unwrap();
    let out = bin()
        .args(["mirrormap", "--config", cfg.to_str().unwrap(), "--format", "json"])
        .env(k3mirror_cli::PREC_ENV, "120")
        .output()
        .unwrap();
    assert!(out.status.success());
    let r = RunReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r.config.order, 1);
    // environment beats the file
    assert_eq!(r.config.precision_bits, 120);
    assert_eq!(r.checks[0].details["p_terms_compared"], 1);

    // flags beat both
    let out = bin()
        .args(["mirrormap", "--config", cfg.to_str().unwrap(), "--order", "5", "--prec", "64"])
        .env(k3mirror_cli::PREC_ENV, "120")
        .output()
        .unwrap();
    let r = RunReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!((r.config.order, r.config.precision_bits), (5, 64));

    std::fs::write(&cfg, "order = 3\nsamples = \"lots\"\n").unwrap();
    let out = bin().args(["mirrormap", "--config", cfg.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn output_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("diagram.txt");
    let out = bin().args(["diagram-check", "--format", "text", "--out", path.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.contains("diagram") && text.contains("all checks passed"));
}

#[test]
fn triangle_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = bin()
        .args(["triangle", "--samples", "9", "--prec", "64", "--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("parameter,re,im,ball-radius"));
    assert_eq!(lines.count(), 9);
    assert!(String::from_utf8_lossy(&out.stderr).contains("vertex_one_error"));
}

#[test]
fn low_precision_fails_the_monodromy_check() {
    let out = bin().args(["monodromy", "--loop", "one", "--prec", "64"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let r = RunReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r.checks[0].status, Status::Fail);
    assert!(!r.passed);
}

#[test]
fn single_loop_word() {
    let out = bin().args(["monodromy", "--loop", "0", "--prec", "128", "--tol", "1e-25"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let r = RunReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r.checks[0].details["nilpotency_index"], 3);
}
