use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galois-ext"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .env("GALOIS_EXT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_hopf_golden() {
    let o = run(&["check", "hopf", "fixtures/kz2.hopf"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("field Q"));
}

#[test]
fn check_galois_json() {
    let o = run(&["--json", "check", "galois", "fixtures/paper_quiver.alg", "--max-deg", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["field"], "Q");
    assert_eq!(v["max_deg"], 3);
    assert_eq!(v["b_dims"], serde_json::json!([1, 2, 3, 4]));
    assert!(v["galois"].as_array().unwrap().iter().all(|g| g["rank"] == g["source_dim"]));
}

#[test]
fn parse_error_reports_location() {
    let dir = std::env::temp_dir().join("galois-ext-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.hopf");
    std::fs::write(&path, "[basis]\n1 g\n[unit]\n1 +\n").unwrap();
    let o = run(&["check", "hopf", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.hopf:4:"));
}

#[test]
fn broken_antipode_is_a_mathematical_failure() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/paper_quiver.alg")).unwrap();
    let broken = text.replace("x0 = -x1", "x0 = x1");
    let path = std::env::temp_dir().join("galois-ext-flipped.alg");
    std::fs::write(&path, broken).unwrap();
    let o = run(&["check", "hopf", path.to_str().unwrap(), "--max-deg", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn thm3_negative_case_passes() {
    let o = run(&["--json", "verify", "thm3", "--fixture", "kz2-trivial-module"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["data"]["verdicts"], serde_json::json!({"add": false, "end": false, "ext": false}));
}

#[test]
fn hypothesis_violation_exit_code() {
    let o = run(&["verify", "cor1", "--fixture", "kz2", "--module", "k"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["--field", "fp:2", "verify", "thm3", "--fixture", "kz2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn input_errors() {
    assert_eq!(run(&["verify", "thm1", "--fixture", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "thm1", "--fixture", "kz2", "--module", "M"]).status.code(), Some(2));
    assert_eq!(run(&["--field", "fp:4", "ext", "truncated:2"]).status.code(), Some(2));
}

#[test]
fn ext_table_marks_window() {
    let o = run(&["ext", "truncated:3", "--hmax", "4", "--koszul", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("P_4: [6]"), "{s}");
    assert!(s.contains("3-Koszul: True"));
    assert!(s.contains("window n <= 4, d <= 9"));
}

#[test]
fn thm4_on_quiver() {
    let o = run(&["verify", "thm4", "--fixture", "paper-quiver", "--N", "2", "--hmax", "3", "--max-deg", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
