use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn mposr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mposr"))
        .args(args)
        .env_remove("MPOSR_TIER")
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    format!("{}/../core/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn classify_prints_rule() {
    let o = mposr(&["classify", "--group", "cyclic:6", "--m", "2", "--kind", "posr"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("No: cyclic, m = 2"));
    let o = mposr(&["classify", "--group", "q8", "--m", "3", "--output", "json"]);
    assert_eq!(json(&o)["verdict"], "Yes");
    let o = mposr(&["classify", "--group", "klein4", "--m", "2", "--kind", "pdr", "--output", "json"]);
    assert_eq!(json(&o)["verdict"], "No");
}

#[test]
fn aut_of_fixed_digraph_is_trivial() {
    let o = mposr(&["aut", "--input", &data("fig1_9.edges")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["order"], 1);
    let o = mposr(&["aut", "--input", &data("gamma8.edges"), "--output", "table"]);
    assert_eq!(stdout(&o), "order 1\n");
}

#[test]
fn aut_reads_stdin_and_traces() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mposr"))
        .args(["aut", "--input", "-", "--trace"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"n 3\n0 1\n1 2\n2 0\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(json(&o)["order"], 3);
    let trace = String::from_utf8(o.stderr).unwrap();
    assert!(trace.lines().count() >= 2);
    assert!(trace.lines().all(|l| l.split(' ').count() == 3));
}

#[test]
fn aut_budget_exit_code() {
    let o = mposr(&["aut", "--input", &data("fig1_10.edges"), "--node-budget", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn build_exports() {
    let o = mposr(&["build", "--fixed", "fig1_10"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("n 10"));
    assert_eq!(text.lines().count(), 31);
    let o = mposr(&["build", "--group", "cyclic:7", "--m", "2", "--output", "dot"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("digraph G {"));
    assert_eq!(stdout(&o).matches("->").count(), 42);
}

#[test]
fn build_from_sets_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"m": 2, "sets": [[[], ["1", "x", "x^2"]], [["x", "x^3", "x^4"], []]]}}"#).unwrap();
    let path = f.path().to_str().unwrap();
    let built = mposr(&["build", "--group", "cyclic:7", "--m", "2", "--sets", path]);
    assert_eq!(built.status.code(), Some(0));
    let mut g = tempfile::NamedTempFile::new().unwrap();
    g.write_all(&built.stdout).unwrap();
    let o = mposr(&["aut", "--input", g.path().to_str().unwrap()]);
    assert_eq!(json(&o)["order"], 7);
    let o = mposr(&["build", "--group", "cyclic:7", "--m", "3", "--sets", path]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_exhausts_and_resumes() {
    let full = json(&mposr(&["search", "--group", "quaternion8", "--m", "2"]));
    assert_eq!(full["status"], "ExhaustedNone");
    assert_eq!(full["candidates_examined"], 3136);
    assert!(full.get("elapsed_ms").is_none());

    let o = mposr(&["search", "--group", "quaternion8", "--m", "2", "--max-candidates", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    let cursor = json(&o)["next_cursor"].as_u64().unwrap();
    let o = mposr(&["search", "--group", "quaternion8", "--m", "2", "--cursor", &cursor.to_string()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["candidates_examined"], 3136);
}

#[test]
fn search_expectation_and_progress() {
    let o = mposr(&["search", "--group", "cyclic:7", "--m", "2", "--expect", "none"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["witness"]["m"], 2);
    let o = mposr(&["search", "--group", "cyclic:6", "--m", "2", "--progress-every", "100", "--expect", "none"]);
    assert_eq!(o.status.code(), Some(0));
    let progress = String::from_utf8(o.stderr).unwrap();
    let first: Value = serde_json::from_str(progress.lines().next().unwrap()).unwrap();
    assert_eq!(first["total"], 400);
}

#[test]
fn antisymmetric_search_outputs() {
    let o = mposr(&["search", "--antisymmetric", "--order", "7"]);
    assert_eq!(json(&o)["status"], "ExhaustedNone");
    let o = mposr(&["search", "--antisymmetric", "--order", "7", "--digons", "--output", "edgelist"]);
    assert_eq!(stdout(&o).lines().next(), Some("n 7"));
}

#[test]
fn output_is_identical_across_thread_counts() {
    let args = ["search", "--group", "smallgroup:16:3", "--m", "2"];
    let one = mposr(&[&["--threads", "1"], &args[..]].concat());
    let two = mposr(&[&["--threads", "3"], &args[..]].concat());
    assert_eq!(one.stdout, two.stdout);
    let one = mposr(&["--threads", "1", "verify", "--output", "json"]);
    let two = mposr(&["--threads", "2", "verify", "--output", "json"]);
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn verify_reports_contradicted_claims() {
    let o = mposr(&["verify", "--output", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let report = json(&o);
    let failed: Vec<&str> = report["claims"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "Fail")
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["pdr/cyclic:1/m6", "posr/alternating4/m2", "pdr/dihedral:6/m2"]);
    assert_eq!(report["summary"]["skipped"], 4);
    let o = mposr(&["verify", "--tier", "extended", "--output", "table", "--timings"]);
    assert!(stdout(&o).contains("posr/smallgroup:32:2/m2"));
    assert!(stdout(&o).contains(" ms]"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["classify", "--group", "nonsense", "--m", "2"][..],
        &["search", "--m", "2"],
        &["verify", "--output", "dot"],
        &["aut", "--input", "/nonexistent/file.edges"],
        &["build", "--fixed", "nope"],
        &["search", "--group", "cyclic:7", "--m", "2", "--output", "dot"],
    ] {
        let o = mposr(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(mposr(&["--help"]).status.code(), Some(0));
}
