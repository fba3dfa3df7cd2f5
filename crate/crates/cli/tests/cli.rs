use std::path::PathBuf;
use std::process::{Command, Output};

fn treecenter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treecenter")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_instance(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("treecenter-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn path3() -> PathBuf {
    write_instance("path3.tree", "n 3\nv 0 1\nv 1 1\nv 2 1\ne 0 1 4\ne 1 2 4\n")
}

#[test]
fn solve_unit_path() {
    let input = path3();
    let o = treecenter(&["solve", "--input", input.to_str().unwrap(), "--p", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "{\"alpha\": {\"num\": 4, \"den\": 1}, \"alpha_float\": 4.0, \"centers\": [{\"edge\": [1, 0], \"offset_from_child\": {\"num\": 0, \"den\": 1}}], \"stats\": {\"feasibility_calls\": 2, \"candidates\": 3}}\n"
    );
}

#[test]
fn infeasible_query_exits_one() {
    let input = path3();
    let o = treecenter(&["feasible", "--input", input.to_str().unwrap(), "--p", "1", "--alpha", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "{\"feasible\": false}\n");
}

#[test]
fn feasible_query_lists_centers() {
    let input = path3();
    let o = treecenter(&["feasible", "--input", input.to_str().unwrap(), "--p", "2", "--alpha", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("{\"feasible\": true, \"centers\": ["));
}

#[test]
fn gen_is_deterministic() {
    let a = treecenter(&["gen", "--n", "5", "--seed", "42"]);
    let b = treecenter(&["gen", "--n", "5", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("n 5\n"));
    assert_eq!(text.lines().count(), 1 + 5 + 4);
    let c = treecenter(&["gen", "--n", "5", "--seed", "43"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn algorithms_agree_on_generated_instance() {
    let gen = treecenter(&["gen", "--n", "40", "--seed", "7"]);
    let input = write_instance("gen40.tree", &stdout(&gen));
    let mut alphas = Vec::new();
    for algorithm in ["candidate", "parametric", "oracle"] {
        for tree_path in ["balanced", "std"] {
            let o = treecenter(&["solve", "--input", input.to_str().unwrap(), "--p", "3", "--algorithm", algorithm, "--tree-path", tree_path]);
            assert_eq!(o.status.code(), Some(0));
            let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
            alphas.push(doc["alpha"].clone());
        }
    }
    assert!(alphas.windows(2).all(|w| w[0] == w[1]), "{alphas:?}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(treecenter(&["solve", "--input", "/nonexistent/x.tree", "--p", "1"]).status.code(), Some(2));
    assert_eq!(treecenter(&["solve", "--p", "1"]).status.code(), Some(2));
    assert_eq!(treecenter(&["frobnicate"]).status.code(), Some(2));
    let input = path3();
    let bad_alpha = treecenter(&["feasible", "--input", input.to_str().unwrap(), "--p", "1", "--alpha", "x"]);
    assert_eq!(bad_alpha.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_alpha.stderr).contains("Usage"));
}

#[test]
fn invalid_instance_exits_one() {
    let input = write_instance("cycle.tree", "n 3\nv 0 1\nv 1 1\nv 2 1\ne 0 1 1\ne 1 0 1\n");
    let o = treecenter(&["validate", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("cycle"));
    assert_eq!(treecenter(&["solve", "--input", input.to_str().unwrap(), "--p", "1"]).status.code(), Some(1));
    let ok = treecenter(&["validate", "--input", path3().to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn float_mode_matches_exact_on_integer_instance() {
    let input = path3();
    let o = treecenter(&["solve", "--input", input.to_str().unwrap(), "--p", "1", "--mode", "float"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["alpha_float"], serde_json::json!(4.0));
}

#[test]
fn bench_prints_a_table() {
    let o = treecenter(&["bench", "--n", "200", "--p", "2", "--seeds", "5", "--mode", "float"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().next().unwrap().contains("feasibility_calls"));
}
