use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qi(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qintertwine"))
        .args(args)
        .current_dir(cwd)
        .env_remove("QINTERTWINE_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const EX1: &[&str] = &["--word", "LLR", "--a0", "-0.75-0.1i", "--family", "1", "--branch", "-", "--eta", "0"];

fn with(base: &[&'static str], extra: &[&'static str]) -> Vec<&'static str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn run_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let args = with(&["run"], &with(EX1, &["--n-max", "121", "--out", "ex1/", "--curves", "--dump-matrix", "5"]));
    let o = qi(&args, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["sweep.json", "lift.json", "trace.csv", "fit.json", "geom.json", "curves.csv", "lambda_n5.json"] {
        assert!(dir.path().join("ex1").join(f).exists(), "{f} missing");
    }
    let csv = fs::read_to_string(dir.path().join("ex1/trace.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("n,mode,re_trace,im_trace,abs_trace,ell,flags"));
    assert_eq!(csv.lines().count(), 1 + 60);

    let fit: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("ex1/fit.json")).unwrap()).unwrap();
    let classes = fit["fit"]["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    assert_eq!(classes[0]["coefficients"].as_array().unwrap().len(), 5);
    assert_eq!(fit["fit"]["parity_flag"], 0);
    assert!((fit["volume"]["volume"].as_f64().unwrap() - 2.66674).abs() < 1e-3);

    let lift: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("ex1/lift.json")).unwrap()).unwrap();
    assert_eq!(lift["A"].as_array().unwrap().len(), 4);
    assert_eq!(lift["V"].as_array().unwrap().len(), 3);

    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("ex1/lambda_n5.json")).unwrap()).unwrap();
    assert_eq!(m["n"], 5);
    assert_eq!(m["rows"].as_array().unwrap().len(), 5);
    assert_eq!(m["rows"][0][0].as_array().unwrap().len(), 2);
}

#[test]
fn outputs_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (w, out) in [("1", "a/"), ("3", "b/")] {
        let o = qi(&with(&["trace"], &with(EX1, &["--n-max", "81", "--workers", w, "--out", out])), dir.path());
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for f in ["trace.csv", "sweep.json", "lift.json"] {
        let a = fs::read(dir.path().join("a").join(f)).unwrap();
        let b = fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs");
    }
}

#[test]
fn workers_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qintertwine"))
        .args(with(&["trace"], &with(EX1, &["--n-max", "21"])))
        .current_dir(dir.path())
        .env("QINTERTWINE_WORKERS", "2")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn fit_from_existing_csv_matches_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = qi(&with(&["run"], &with(EX1, &["--n-max", "101"])), dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let o = qi(&with(&["fit"], &with(EX1, &["--from", "trace.csv", "--out", "again_"])), dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read(dir.path().join("fit.json")).unwrap(), fs::read(dir.path().join("again_fit.json")).unwrap());
}

#[test]
fn cancelling_example_reports_no_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["fit", "--word", "LLR", "--a0", "1+i", "--family", "2", "--branch", "-", "--n-max", "151"];
    let o = qi(&args, dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("(-2, -1, 3)") && text.contains("parity 1"), "{text}");
    assert!(text.contains("no prediction"), "{text}");
}

#[test]
fn not_pseudo_anosov_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = qi(&["run", "--word", "LL"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not pseudo-Anosov"), "{}", stderr(&o));
}

#[test]
fn degenerate_a0_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = qi(&["solve", "--word", "LLR", "--a0", "-1"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn solver_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = qi(&["volume", "--word", "LLRR", "--starts", "0"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("volume"));
}

#[test]
fn bad_complex_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = qi(&["solve", "--word", "LLR", "--a0", "1+2k"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--a0"));
}

#[test]
fn volume_of_figure_eight() {
    let dir = tempfile::tempdir().unwrap();
    let o = qi(&["volume", "--word", "LR"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).contains("2.0298832"), "{}", stdout(&o));
    let g: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("geom.json")).unwrap()).unwrap();
    assert_eq!(g["shapes"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_is_green_and_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = qi(&["verify", "--seed", "5"], dir.path());
    let b = qi(&["verify", "--seed", "5"], dir.path());
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().all(|l| l.starts_with("PASS ")));
}
