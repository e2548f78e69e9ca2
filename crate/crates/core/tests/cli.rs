//! The `kh` binary on the fixture files: outputs and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn kh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kh"))
        .args(args)
        .env_remove("KH_THREADS")
        .output()
        .expect("kh runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn compute_hopf_table() {
    let o = kh(&["compute", &fixture("hopf.pd")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("b | a || -2 | 0 | 2 |"));
    assert_eq!(text.matches(" Z ").count(), 4);
}

#[test]
fn compute_unknot_json() {
    let o = kh(&["compute", &fixture("unknot.pd"), "--format", "json"]);
    assert_eq!(
        stdout(&o).trim(),
        r#"[{"a":0,"b":2,"free_rank":1,"torsion":[]},{"a":0,"b":-2,"free_rank":1,"torsion":[]}]"#
    );
}

#[test]
fn compute_classical_trefoil() {
    let o = kh(&[
        "compute",
        &fixture("trefoil.pd"),
        "--classical",
        "--orient",
        &fixture("trefoil.or"),
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("i,j,free_rank,torsion\n"));
    assert!(text.contains("3,7,0,2\n"));
    assert!(text.contains("3,9,1,\n"));
}

#[test]
fn classical_needs_orientation() {
    let o = kh(&["compute", &fixture("trefoil.pd"), "--classical"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dump_complex_round_trips_through_check() {
    let dir = std::env::temp_dir().join(format!("kh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let dump = dir.join("trefoil.trip");
    let o = kh(&[
        "compute",
        &fixture("trefoil.pd"),
        "--dump-complex",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = kh(&["check", "--complex", dump.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS d^2 = 0"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn torus_modes() {
    let o = kh(&["torus", "11", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("Z_2").count(), 5);
    let o = kh(&["torus", "2", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
    let direct = kh(&["torus", "5", "--direct", "--format", "json"]);
    let oracle = kh(&["torus", "5", "--format", "json"]);
    assert_eq!(stdout(&direct), stdout(&oracle));
}

#[test]
fn torus_zero_is_a_usage_error() {
    let o = kh(&["torus", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid value"));
}

#[test]
fn bracket_of_empty_and_trefoil() {
    let o = kh(&["bracket", &fixture("empty.pd")]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = kh(&[
        "bracket",
        &fixture("trefoil.pd"),
        "--enhanced",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["agree"], serde_json::json!(true));
    assert_eq!(v["bracket"]["-9"], serde_json::json!(-1));
}

#[test]
fn les_report_and_probe() {
    let o = kh(&["les", &fixture("trefoil.pd"), "--crossing", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("exact at all"));
    assert!(text.contains("H(-3,-5)[Z_2]"));
    let o = kh(&[
        "les",
        &fixture("trefoil.pd"),
        "--crossing",
        "0",
        "--probe-connecting",
    ]);
    assert!(stdout(&o).contains("|degree| = 2"));
    let o = kh(&[
        "les",
        &fixture("trefoil.pd"),
        "--probe-connecting",
        "--grading",
        "-1,-5",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["parent_a"], serde_json::json!(-1));
}

#[test]
fn les_json_is_exact() {
    let o = kh(&[
        "les",
        &fixture("figure_eight.pd"),
        "--crossing",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exact"], serde_json::json!(true));
    assert!(v["beta_predictions"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["confirmed"] == serde_json::json!(true)));
}

#[test]
fn les_crossing_out_of_range() {
    let o = kh(&["les", &fixture("hopf.pd"), "--crossing", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("out of range"));
}

#[test]
fn check_passes_on_torus8() {
    let o = kh(&["check", &fixture("torus8.pd")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("PASS").count(), 4);
}

#[test]
fn check_flags_corrupted_complex() {
    let o = kh(&["check", &fixture("corrupted.fixture")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL d^2 = 0"));
}

#[test]
fn check_empty_diagram() {
    let o = kh(&["check", &fixture("empty.pd"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], serde_json::json!(true));
    assert!(v["checks"][1]["detail"]
        .as_str()
        .unwrap()
        .ends_with("bracket 1"));
}

#[test]
fn output_is_independent_of_thread_count() {
    let one = kh(&[
        "--parallel",
        "1",
        "compute",
        &fixture("torus8.pd"),
        "--format",
        "json",
    ]);
    let four = kh(&[
        "--parallel",
        "4",
        "compute",
        &fixture("torus8.pd"),
        "--format",
        "json",
    ]);
    assert_eq!(one.stdout, four.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_kh"))
        .args(["les", &fixture("trefoil.pd")])
        .env("KH_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(env.stdout, kh(&["les", &fixture("trefoil.pd")]).stdout);
}

#[test]
fn malformed_input_reports_position() {
    let dir = std::env::temp_dir().join(format!("kh-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.pd");
    std::fs::write(&bad, "X 1 2 3\n").unwrap();
    let o = kh(&["compute", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn help_exits_cleanly() {
    let o = kh(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("compute"));
}
