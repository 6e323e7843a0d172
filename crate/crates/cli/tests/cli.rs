use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn hinterp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hinterp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("hinterp-cli-{}-{}", std::process::id(), name));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn solve_matches_golden_files() {
    for name in ["slat_sgc", "chem", "water", "slat_sgc_sat"] {
        let prob = corpus(&format!("{}.prob", name));
        let expected = std::fs::read_to_string(corpus(&format!("{}.expected", name))).unwrap();
        for strong in [false, true] {
            let mut args = vec!["solve", prob.to_str().unwrap(), "--verify"];
            if strong {
                args.push("--strong");
            }
            let out = hinterp(&args);
            assert_eq!(stdout(&out).trim(), expected.trim(), "{} strong={}", name, strong);
            let code = if expected.trim() == "sat" { 1 } else { 0 };
            assert_eq!(out.status.code(), Some(code), "{}", name);
        }
    }
}

#[test]
fn combine_matches_golden_file() {
    let prob = corpus("combine_mon.prob");
    let expected = std::fs::read_to_string(corpus("combine_mon.expected")).unwrap();
    let out = hinterp(&["combine", prob.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), expected.trim());
    assert!(out.status.success());
}

#[test]
fn verify_accepts_and_rejects() {
    let prob = corpus("slat_sgc.prob");
    let p = prob.to_str().unwrap();
    let good = hinterp(&["verify", p, "-i", "(leq (f d) c)"]);
    assert_eq!(stdout(&good).trim(), "ok");
    assert!(good.status.success());

    let bad = hinterp(&["verify", p, "-i", "(leq d c)"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("failed check"));
}

#[test]
fn errors_exit_with_two() {
    let missing = hinterp(&["solve", "/nonexistent/file.prob"]);
    assert_eq!(missing.status.code(), Some(2));

    let path = temp_file("bad.prob", "(theory slat)\n(frobnicate)\n");
    let out = hinterp(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2:1"));
    let _ = std::fs::remove_file(path);

    let usage = hinterp(&["solve"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn oracle_reports_sat() {
    let prob = corpus("slat_sgc_sat.prob");
    let out = hinterp(&["oracle", prob.to_str().unwrap(), "--max-size", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "sat");
}

#[test]
fn trace_goes_to_stderr() {
    let prob = corpus("slat_sgc.prob");
    let out = hinterp(&["solve", prob.to_str().unwrap(), "--trace"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("define"));
    assert!(!stdout(&out).contains("define"));
}
