use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cbm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbm-rl")).current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn train_writes_model_and_log() {
    let dir = tempfile::tempdir().unwrap();
    let o = cbm(dir.path(), &["train", "--case", "2", "--episodes", "10", "--seed", "7", "--out", "m2.model", "--progress", "0"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let model = fs::read_to_string(dir.path().join("m2.model")).unwrap();
    assert!(model.contains("\"episodes\": 10") || model.contains("\"episodes\":10"), "{model}");
    let log = fs::read_to_string(dir.path().join("m2.log.csv")).unwrap();
    let lines: Vec<&str> = log.lines().collect();
    assert!(lines[0].starts_with("# seed=7 config_hash="));
    assert_eq!(lines[1], "episode,cumulative_reward,epsilon,mean_loss");
    assert_eq!(lines.len(), 12);
}

#[test]
fn train_without_case_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = cbm(dir.path(), &["train", "--episodes", "1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unknown_flags_and_subcommands_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&cbm(dir.path(), &["evaluate", "--policy", "fr", "--bogus"])), 2);
    assert_eq!(code(&cbm(dir.path(), &["fly"])), 2);
    assert_eq!(code(&cbm(dir.path(), &["optimize", "--baseline", "xyz"])), 2);
}

#[test]
fn validation_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&cbm(dir.path(), &["evaluate", "--policy", "fr", "--iterations", "1"])), 3);
    assert_eq!(code(&cbm(dir.path(), &["optimize", "--baseline", "fr"])), 3);
    assert_eq!(code(&cbm(dir.path(), &["evaluate", "--policy", "fr", "--case", "9"])), 3);
    fs::write(dir.path().join("bad.toml"), "id = \"x\"\nbeta = \"fast\"\n").unwrap();
    let o = cbm(dir.path(), &["evaluate", "--policy", "fr", "--case", "bad.toml"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn missing_artifacts_exit_4_with_a_hint() {
    let dir = tempfile::tempdir().unwrap();
    let o = cbm(dir.path(), &["evaluate", "--policy", "nothing.json"]);
    assert_eq!(code(&o), 4);
    let o = cbm(dir.path(), &["compare", "--model", "nothing.json"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("train"), "{}", stderr(&o));
    assert_eq!(code(&cbm(dir.path(), &["evaluate", "--policy", "fr", "--case", "missing.toml"])), 4);
}

#[test]
fn evaluate_prints_summary_and_stamps_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = cbm(dir.path(), &["evaluate", "--policy", "fr", "--iterations", "5", "--horizon", "200", "--seed", "3", "--out", "r"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("N_CR") && out.contains("EC"), "{out}");
    for f in ["r/fr_results.csv", "r/fr_summary.csv"] {
        let text = fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(text.starts_with("# seed=3 config_hash="), "{f}");
    }
}

#[test]
fn optimize_then_evaluate_the_saved_spec() {
    let dir = tempfile::tempdir().unwrap();
    let common = ["--iterations", "5", "--horizon", "200", "--out", "r"];
    let mut args = vec!["optimize", "--baseline", "tbm", "--threshold-step", "2"];
    args.extend(common);
    let o = cbm(dir.path(), &args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let mut args = vec!["evaluate", "--policy", "r/tbm_best.json"];
    args.extend(common);
    let o = cbm(dir.path(), &args);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(dir.path().join("r/tbm_summary.csv").exists());
}

#[test]
fn trace_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let o = cbm(dir.path(), &["trace", "--policy", "fr", "--steps", "250", "--seed", "4", "--out", name]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "step,x_pre,x_m_pre,requested_action,executed_action,reward,event,x_post");
    assert_eq!(text.lines().count(), 252);
}
