use std::path::Path;
use std::process::{Command, Output};

fn afweak(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_afweak")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).expect("JSON output")
}

#[test]
fn worked_join_from_words() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "s0s1.json"), path(dir.path(), "s2s3.json"));
    assert!(afweak(&["build", "--family", "A", "--n", "4", "--word", "s0 s1", "--out", &a]).status.success());
    assert!(afweak(&["build", "--family", "A", "--n", "4", "--word", "s2 s3", "--out", &b]).status.success());
    let o = afweak(&["join", "--family", "A", "--n", "4", "--in", &a, &b]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["face"], serde_json::json!([[1, 3], [2, 4]]));
    assert_eq!(v["phi_prime"], serde_json::json!([1]));
}

#[test]
fn classify_dominant_chamber_window() {
    let dir = tempfile::tempdir().unwrap();
    let blue = path(dir.path(), "blue.json");
    let o = afweak(&["build", "--family", "A", "--n", "2", "--face", "{1},{2}", "--height", "6", "--out", &blue]);
    assert!(o.status.success());
    let o = afweak(&["classify", "--in", &blue]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["face"], serde_json::json!([[1], [2]]));
    assert_eq!(v["phi_prime"], serde_json::json!([]));
}

#[test]
fn emitted_json_is_accepted_back() {
    let dir = tempfile::tempdir().unwrap();
    let t = path(dir.path(), "t.json");
    let w = path(dir.path(), "w.json");
    let o = path(dir.path(), "o.json");
    assert!(afweak(&["build", "--family", "C", "--n", "2", "--face", "{-2},{-1,0,1},{2}", "--w", "0=s1 s0", "--out", &t])
        .status
        .success());
    assert!(afweak(&["build", "--family", "C", "--n", "2", "--face", "{-2},{-1,0,1},{2}", "--w", "0=s1 s0", "--height", "5", "--out", &w])
        .status
        .success());
    for cmd in ["close", "interior", "check", "classify"] {
        let out = afweak(&[cmd, "--in", &w]);
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let classified = json(&afweak(&["classify", "--in", &w]));
    let built: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(classified, built);
    assert!(afweak(&["order", "--in", &t, "--out", &o]).status.success());
    let again = afweak(&["order", "--in", &o]);
    assert!(again.status.success());
    assert_eq!(json(&again), serde_json::from_str::<serde_json::Value>(&std::fs::read_to_string(&o).unwrap()).unwrap());
    let closed = path(dir.path(), "closed.json");
    assert!(afweak(&["close", "--in", &w, "--out", &closed]).status.success());
    assert!(afweak(&["close", "--in", &closed]).status.success());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, r#"{"family":"A","n":3,"H":2,"roots":[[0,1],[1,2]]}"#).unwrap();
    let o = afweak(&["check", "--in", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotBiclosed"));
    let o = afweak(&["classify", "--in", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(afweak(&["join"]).status.code(), Some(2));
    assert_eq!(afweak(&["build", "--family", "A", "--n", "3"]).status.code(), Some(2));
    let o = afweak(&["join-finite", "--family", "A", "--rank", "7", "--u", "1", "--w", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("TooLarge"));
}

#[test]
fn finite_joins() {
    let o = afweak(&["join-finite", "--family", "B", "--rank", "3", "--u", "624351", "--w", "365214"]);
    assert_eq!(stdout(&o).trim(), "654321");
    let o = afweak(&["join-finite", "--family", "D", "--rank", "3", "--u", "624351", "--w", "365214"]);
    assert_eq!(stdout(&o).trim(), "653421");
}

#[test]
fn dot_exports() {
    let o = afweak(&["hasse", "--family", "A", "--n", "2", "--bound", "3"]);
    let dot = stdout(&o);
    assert_eq!(dot.matches("label=").count(), 7);
    assert_eq!(dot.matches("->").count(), 6);
    let dir = tempfile::tempdir().unwrap();
    let f = path(dir.path(), "faces.dot");
    assert!(afweak(&["faces", "--family", "A", "--n", "3", "--dot", &f]).status.success());
    let dot = std::fs::read_to_string(&f).unwrap();
    assert_eq!(dot.matches("label=").count(), 13);
}

#[test]
fn deterministic_output() {
    let args = ["hasse", "--family", "C", "--n", "2", "--face", "{-2,-1},{0},{1,2}", "--bound", "2"];
    assert_eq!(afweak(&args).stdout, afweak(&args).stdout);
}

#[test]
fn paper_examples_suite_passes() {
    let o = afweak(&["verify", "paper-examples"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
