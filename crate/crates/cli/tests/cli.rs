use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn atlas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atlas")).args(args).output().expect("atlas runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data")
}

/// Copy of the reference tables with `file` rewritten by `edit`.
fn edited_data(file: &str, edit: impl Fn(&str) -> String) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(data_dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        let text = std::fs::read_to_string(&path).unwrap();
        let text = if name == file { edit(&text) } else { text };
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn classify_two_a9() {
    let o = atlas(&["classify", "2A9", "--family", "ns"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("2A9\tns\trealized\t(2,0)"), "{out}");
}

#[test]
fn classify_all_families() {
    let o = atlas(&["classify", "2A9"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("2A9\t5\trealized")), "{out}");
    assert!(out.lines().any(|l| l.starts_with("2A9\t3\tnot realized")), "{out}");
}

#[test]
fn classify_torus_and_unrealized() {
    let o = atlas(&["classify", "(A17)+A2", "--family", "torus"]);
    assert!(stdout(&o).starts_with("A17+A2\t3\trealized\t(1,0)"), "{}", stdout(&o));
    let o = atlas(&["classify", "19A1", "--family", "ns"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("not realized"));
}

#[test]
fn json_output_is_versioned_and_deterministic() {
    let a = atlas(&["--format", "json", "classify", "A7+A6+A5", "--family", "ns"]);
    let b = atlas(&["--format", "json", "classify", "A7+A6+A5", "--family", "ns"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["reports"][0]["components"], serde_json::json!([1, 0]));
    assert_eq!(v["reports"][0]["real_curve"], "no");
}

#[test]
fn parse_error_points_at_column() {
    let o = atlas(&["classify", "2A9+Q3"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("2A9+Q3"), "{err}");
    assert!(err.lines().any(|l| l.trim_end().ends_with('^')), "{err}");
}

#[test]
fn milnor_number_nineteen_uses_reference_rows() {
    let o = atlas(&["classify", "A19", "--family", "ns"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("A19\tns\trealized"), "{}", stdout(&o));
}

#[test]
fn enumerate_counts() {
    for (family, want) in [("ns", "2996"), ("torus", "105"), ("special5", "8")] {
        let mu = if family == "special5" { "19" } else { "18" };
        let o = atlas(&["enumerate", family, mu, "--count"]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert_eq!(stdout(&o).trim(), want, "{family}");
    }
}

#[test]
fn verify_group_table_passes() {
    let o = atlas(&["verify", "--table", "group"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("group: 13/13 rows matched"));
}

#[test]
fn verify_reports_corrupted_cell() {
    let dir = edited_data("disconnected.tsv", |t| t.replace("2A9\t2\t0", "2A9\t1\t1"));
    let o = atlas(&["--data-dir", dir.path().to_str().unwrap(), "verify", "--table", "disconnected"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL disconnected 2A9: expected (1,1), computed (2,0)"), "{out}");
}

#[test]
fn malformed_table_names_file_and_line() {
    let dir = edited_data("disconnected.tsv", |t| t.replace("2A9\t2\t0", "2A9\t2"));
    let o = atlas(&["--data-dir", dir.path().to_str().unwrap(), "verify", "--table", "disconnected"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("disconnected.tsv:11:"), "{err}");
}

#[test]
fn missing_data_dir_is_an_error() {
    let o = atlas(&["--data-dir", "/nonexistent/tables", "closure", "2A9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn closure_of_two_a9() {
    let o = atlas(&["closure", "2A9"]);
    assert_eq!(stdout(&o), "A10+A9\nA19\n");
}

#[test]
fn cluster_graph_two_is_a_tree() {
    let o = atlas(&["--format", "json", "graph", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["components"], 1);
    assert_eq!(v["betti1"], 0);
    let dot = stdout(&atlas(&["graph", "2"]));
    assert!(dot.starts_with("graph C2 {"));
}
