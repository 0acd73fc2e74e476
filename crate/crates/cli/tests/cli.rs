use std::path::PathBuf;
use std::process::{Command, Output};

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("lrs-sparts-{}-{name}", std::process::id()))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lrs-sparts"))
        .args(args)
        .env_remove("LRS_SPARTS_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn terms_of_both_kinds() {
    assert_eq!(stdout(&["terms", s(&spec("fibonacci.toml")), "--from", "10", "--to", "12"]), "10 55\n11 89\n12 144\n");
    assert_eq!(stdout(&["terms", s(&spec("three_halves.toml")), "--from", "5", "--to", "6"]), "5 7\n6 11\n");
    assert_eq!(stdout(&["terms", s(&spec("golden_power.toml")), "--from", "10", "--to", "10"]), "10 122\n");
}

#[test]
fn classify_report() {
    let out = stdout(&["classify", s(&spec("two_plus_three.toml")), "--primes", "2,3,5"]);
    assert!(out.contains("degenerate = false"));
    assert!(out.contains("padic_dominant[2] = true"));
    assert!(out.contains("padic_dominant[5] = false"));
}

#[test]
fn sparts_csv_file_matches_stdout() {
    let path = tmp("rows.csv");
    let fib = spec("fibonacci.toml");
    let args = ["sparts", s(&fib), "--set", "2,3", "--from", "1", "--to", "50"];
    let printed = stdout(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--csv", s(&path)]);
    assert_eq!(stdout(&with_file), "");
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written, printed);
    assert!(printed.starts_with("n,digits,exponents,cofactor_digits,ratio,gpf,stewart,gpf_threshold\n"));
    assert!(printed.contains("\n12,3,4;2,1,1.000000000000,,,\n"));
    let toml = stdout(&["sparts", s(&spec("fibonacci.toml")), "--set", "2", "--from", "0", "--to", "2", "--format", "toml"]);
    assert_eq!(toml.matches("[[rows]]").count(), 3);
}

#[test]
fn delta_report() {
    let out = stdout(&["delta", s(&spec("two_plus_six.toml")), "--set", "2"]);
    assert!(out.contains("gcd_shortcut = false"));
    assert!(out.contains("delta = [3.868528"));
    let out = stdout(&["delta", s(&spec("fibonacci.toml")), "--set", "2,3"]);
    assert!(out.contains("gcd_shortcut = true"));
}

#[test]
fn certify_then_verify() {
    let path = tmp("cert.toml");
    let out = run(&["certify", s(&spec("fibonacci.toml")), "--set", "2,3", "--mode", "binary", "--out", s(&path)]);
    assert!(out.status.success());
    let report = stdout(&["verify", s(&path), "--window", "20"]);
    std::fs::remove_file(&path).ok();
    assert!(report.contains("checked = 20"));
    assert!(report.contains("violations = []"));
    let cert = stdout(&["certify", s(&spec("two_plus_three.toml")), "--set", "5", "--mode", "padic:2"]);
    assert!(cert.contains("theorem_tag = \"padic\"") && cert.contains("padic_prime = 2"));
}

#[test]
fn bad_modes_fail_cleanly() {
    for mode in ["floorpow", "padic:4", "padic:x", "euclid"] {
        let out = run(&["certify", s(&spec("fibonacci.toml")), "--set", "2", "--mode", mode]);
        assert_eq!(out.status.code(), Some(1), "{mode}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"), "{mode}");
    }
    let out = run(&["delta", s(&spec("three_halves.toml")), "--set", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gpf_rows_and_config_file() {
    let out = stdout(&["gpf", s(&spec("fibonacci.toml")), "--from", "16", "--to", "17", "--epsilon", "0.25"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 3);
    let fields: Vec<&str> = rows[2].split(',').collect();
    assert_eq!(fields[0], "17");
    assert_eq!(fields[5], "1597");
    let cfg = tmp("config.toml");
    std::fs::write(&cfg, "mr_rounds = 0\n").unwrap();
    let bad = Command::new(env!("CARGO_BIN_EXE_lrs-sparts"))
        .args(["terms", s(&spec("fibonacci.toml")), "--from", "1", "--to", "2"])
        .env("LRS_SPARTS_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let ok = run(&["--config", s(&cfg), "--mr-rounds", "4", "terms", s(&spec("fibonacci.toml")), "--from", "1", "--to", "2"]);
    std::fs::remove_file(&cfg).ok();
    assert!(ok.status.success());
}
