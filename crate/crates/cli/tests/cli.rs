use std::path::Path;
use std::process::{Command, Output};

fn schubert(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_schubert"));
    cmd.args(args).env_remove("SCHUBERT_CACHE").env_remove("SCHUBERT_JOBS");
    cmd
}

fn run(args: &[&str]) -> Output {
    schubert(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn strip_clock(report: &str) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(report).unwrap();
    v.as_object_mut().unwrap().remove("wall_clock_seconds");
    v
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["poly", "--perm", "2,1", "--n", "2"]).status.code(), Some(0));
    assert_eq!(run(&["poly", "--perm", "1,1", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["explore", "--n", "4", "--groth"]).status.code(), Some(2));
    assert_eq!(run(&["--config", "/nonexistent/x.conf", "poly", "--perm", "1", "--n", "1"]).status.code(), Some(4));
    let zero_bounds = run(&["certify", "--u", "2,1", "--v", "2,1", "--w", "2,1", "--groth", "--zdeg-max", "0", "--bdeg-max", "0"]);
    assert_eq!(zero_bounds.status.code(), Some(1), "{}", stdout(&zero_bounds));
    assert!(stdout(&zero_bounds).contains("inconclusive_at_bounds"));
}

#[test]
fn unwritable_report_is_io() {
    let o = run(&["explore", "--n", "2", "--out", "/nonexistent/dir/report.json"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn json_flag_wraps_results() {
    let o = run(&["--json", "coeff", "--u", "2,1", "--v", "2,1", "--w", "2,1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"], "t2 - y1");
    assert_eq!(v["command"], "coeff");
}

#[test]
fn certificate_json_layout() {
    let o = run(&["certify", "--u", "2,1", "--v", "2,1", "--w", "2,1"]);
    let text = stdout(&o);
    let keys: Vec<usize> = ["\"status\"", "\"mode\"", "\"target\"", "\"u\"", "\"coefficient\"", "\"terms\"", "\"pairs\"", "\"beta\"", "\"lambda\""]
        .iter()
        .map(|k| text.find(k).unwrap_or_else(|| panic!("{k} missing from {text}")))
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn jobs_do_not_change_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.json");
    let four = dir.path().join("four.json");
    assert_eq!(run(&["explore", "--n", "3", "--jobs", "1", "--out", one.to_str().unwrap()]).status.code(), Some(0));
    let env_jobs = schubert(&["explore", "--n", "3", "--out", four.to_str().unwrap()])
        .env("SCHUBERT_JOBS", "4")
        .output()
        .unwrap();
    assert_eq!(env_jobs.status.code(), Some(0));
    let read = |p: &Path| strip_clock(&std::fs::read_to_string(p).unwrap());
    assert_eq!(read(&one), read(&four));
}

#[test]
fn cache_from_env_is_populated_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["coeff", "--u", "1,3,2", "--v", "2,3,1", "--w", "2,3,1"];
    let first = schubert(&args).env("SCHUBERT_CACHE", dir.path()).output().unwrap();
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 1);
    let second = schubert(&args).env("SCHUBERT_CACHE", dir.path()).output().unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.stdout, run(&args).stdout);
}

#[test]
fn config_file_settings_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("schubert.conf");
    std::fs::write(&conf, "max-n = 2\njobs = 2\n").unwrap();
    let conf = conf.to_str().unwrap();
    assert_eq!(run(&["--config", conf, "explore", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["--config", conf, "explore", "--n", "2", "--jobs", "1"]).status.code(), Some(0));

    let cache_dir = dir.path().join("from-flag");
    let conf2 = dir.path().join("cache.conf");
    std::fs::write(&conf2, format!("cache = {}\n", dir.path().join("from-file").display())).unwrap();
    let o = run(&["--config", conf2.to_str().unwrap(), "--cache", cache_dir.to_str().unwrap(), "localize", "--u", "2,1", "--w", "2,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(cache_dir.is_dir());
    assert!(!dir.path().join("from-file").exists());
}

#[test]
fn worked_outputs() {
    assert_eq!(stdout(&run(&["skewdd", "--w", "2,1", "--v", "2,1", "--input", "-x1"])), "-x2\n");
    assert_eq!(stdout(&run(&["billey", "--u", "2,1", "--w", "2,3,1", "--word", "1,2"])), "t2 - t1\n");
    assert_eq!(stdout(&run(&["localize", "--u", "2,1", "--w", "2,3,1"])), "t2 - t1\n");
    assert_eq!(stdout(&run(&["groth", "--perm", "2,1", "--n", "2"])), "(x1 - y1) / ((1+b*y1))\n");
    let selftest = run(&["selftest"]);
    assert_eq!(selftest.status.code(), Some(0));
    assert!(stdout(&selftest).ends_with("0 failed\n"));
}
