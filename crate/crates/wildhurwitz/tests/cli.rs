//! Exit-status and golden-output tests for every subcommand.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_wildhurwitz"));
    c.env_remove("WILDHURWITZ_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const GOOD_CHAIN: &str = r#"{
  "char": "p=3",
  "vertices": [{"id":"A","r":"0"},{"id":"B","r":"inf"},{"id":"C","r":"inf"}],
  "edges": [
    {"id":"e0","from":"A","to":"B","m":1},
    {"id":"e1","from":"B","to":"C","m":1}
  ]
}"#;

const CYCLE: &str = r#"{
  "char": "p=3",
  "vertices": [{"id":"A","r":"0"},{"id":"B","r":"inf"}],
  "edges": [
    {"id":"e0","from":"A","to":"B","m":1},
    {"id":"e1","from":"B","to":"A","m":1}
  ]
}"#;

#[test]
fn validate_graph_good_chain() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "good_chain.json", GOOD_CHAIN);
    let out = run(&["validate-graph", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "valid; reduced graph good; \u{2113} = {A:0,B:1,C:2}\n"
    );
}

#[test]
fn validate_graph_axiom_violation() {
    let dir = tempfile::tempdir().unwrap();
    let bad = GOOD_CHAIN.replace("\"m\":1},", "\"m\":-1},");
    let path = write(dir.path(), "bad.json", &bad);
    let out = run(&["validate-graph", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("invalid:"));
}

#[test]
fn missing_file_is_input_error() {
    let out = run(&["validate-graph", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("input error:"));
}

#[test]
fn malformed_json_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "broken.json", "{\"char\": \"p=3\",");
    let out = run(&["validate-graph", &path]);
    assert_eq!(out.status.code(), Some(2));
    let diag = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(diag.contains("line"), "diagnostic without location: {diag}");
}

#[test]
fn level_of_cycle_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "cycle.json", CYCLE);
    let out = run(&["level", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("no level function"));

    let good = write(dir.path(), "good.json", GOOD_CHAIN);
    let out = run(&["level", &good]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "\u{2113} = {A:0,B:1,C:2}\n");
}

#[test]
fn reduce_graph_reports_merges() {
    let dir = tempfile::tempdir().unwrap();
    let contracted = r#"{
      "char": "p=3",
      "vertices": [{"id":"A","r":"0"},{"id":"B","r":"0"},{"id":"C","r":"inf"}],
      "edges": [
        {"id":"e0","from":"A","to":"B","m":0},
        {"id":"e1","from":"B","to":"C","m":1}
      ]
    }"#;
    let path = write(dir.path(), "contracted.json", contracted);
    let out = run(&["reduce-graph", &path]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("merged: B -> A"));
    assert!(text.contains("reduced graph: 2 vertices, 1 edges"));
}

fn element(digits: &[i64]) -> String {
    format!(
        "{{\"p\":3,\"mode\":\"mixed\",\"N\":1,\"M\":4,\"digits\":{digits:?}}}"
    )
}

#[test]
fn check_earnest_branch_failure() {
    // f = u, delta = du, r = 1: branch 1 demands 1 = 3 * 1 and fails at i = 1.
    let dir = tempfile::tempdir().unwrap();
    let spec = "{\"p\":3,\"mode\":\"mixed\",\"N\":1,\"M\":4}";
    let input = format!(
        "{{\"f\":{{\"spec\":{spec},\"T\":2,\"coeffs\":[{},{}]}},\"delta\":{{\"spec\":{spec},\"T\":2,\"coeffs\":[{},{}]}},\"r\":\"1\"}}",
        element(&[0, 0, 0, 0]),
        element(&[1, 0, 0, 0]),
        element(&[1, 0, 0, 0]),
        element(&[0, 0, 0, 0]),
    );
    let path = write(dir.path(), "bad_r1.json", &input);
    let out = run(&["check-earnest", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "branch-1 failure at i=1\n");

    // Same data at r = 0 is the plain derivative relation and passes.
    let ok = input.replace("\"r\":\"1\"", "\"r\":\"0\"");
    let path = write(dir.path(), "ok_r0.json", &ok);
    let out = run(&["check-earnest", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "earnest\n");
}

#[test]
fn annulus_analyze_degree_three() {
    // alpha = 1 + v over c = pi, equal characteristic p = 3: conductor 1
    // on the v side with unit different; alternative (A) passes.
    let dir = tempfile::tempdir().unwrap();
    let input = r#"{
      "n": 3,
      "spec": {"p":3,"mode":"equal","N":1,"M":6},
      "c": [0,1,0,0,0,0],
      "alpha": {"T": 8, "u_coeffs": [[1]], "v_coeffs": [[1]]}
    }"#;
    let path = write(dir.path(), "cover_n3.json", input);
    let out = run(&["annulus-analyze", &path]);
    assert_eq!(out.status.code(), Some(0), "stderr: {:?}", out);
    assert_eq!(stdout(&out), "m=1 side=v val_d=0 alternativeA=pass\n");
}

const SKELETON: &str = r#"{
  "char": "p=3",
  "vertices": [{"id":"A","r":"0"},{"id":"B","r":"inf"}],
  "edges": [{"id":"e0","from":"A","to":"B","m":2}],
  "vertex_data": {
    "A": {"genus":1,"degree":3,"horiz_ram":[2],"degree_p_flags":[true]},
    "B": {"genus":1,"degree":3,"horiz_ram":[],"degree_p_flags":[]}
  },
  "edge_data": {"e0": {"n_e":3,"base_node":"b0"}},
  "target_genus": 1
}"#;

#[test]
fn smooth_lift_halves_the_jump() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "skeleton.json", SKELETON);
    let out = run(&["smooth-lift", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "e0: 1/2\nN = 2\n");
}

#[test]
fn defring_prints_relations() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "skeleton.json", SKELETON);
    let out = run(&["defring", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "g[A] = 1\ng[A]*w[e0]^2 = g[B]\n");
}

#[test]
fn skeleton_admissible_and_classify() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "skeleton.json", SKELETON);
    let out = run(&["skeleton-admissible", &path]);
    assert_eq!(out.status.code(), Some(0), "output: {:?}", out);
    assert_eq!(stdout(&out), "admissible\n");

    // n = 2 < p with infinite r present: Invalid (mixed regimes).
    let out = run(&["skeleton-classify", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("Invalid"));

    // All r finite makes the same skeleton Finite.
    let finite = SKELETON.replace("\"r\":\"inf\"", "\"r\":\"1/2\"");
    let path = write(dir.path(), "finite.json", &finite);
    let out = run(&["skeleton-classify", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "Finite\n");
}

#[test]
fn json_format_is_valid_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "good.json", GOOD_CHAIN);
    for args in [
        vec!["validate-graph", path.as_str(), "--format", "json"],
        vec!["reduce-graph", path.as_str(), "--format", "json"],
        vec!["level", path.as_str(), "--format", "json"],
        vec!["selftest", "--seed", "1", "--format", "json"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {out:?}");
        serde_json::from_str::<serde_json::Value>(&stdout(&out))
            .unwrap_or_else(|e| panic!("{args:?} output not JSON: {e}"));
    }
}

#[test]
fn seed_env_fallback_matches_flag() {
    let dir = tempfile::tempdir().unwrap();
    let _ = dir;
    let with_flag = run(&["selftest", "--seed", "7"]);
    let with_env = bin()
        .args(["selftest"])
        .env("WILDHURWITZ_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(with_flag.status.code(), Some(0));
    assert_eq!(with_flag.stdout, with_env.stdout);
}
