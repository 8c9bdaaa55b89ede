//! End-to-end tests of the `qgt` binary: fixtures are written to a temp
//! directory and each verb is exercised through its JSON/text interface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qgt::gtmodule::ModuleSpecFile;
use qgt::qcoeff::Mode;
use qgt::relations::{standard_set, Pos, RelKind, Relation, RelationSet};
use qgt::tableaux::{Entry, Tableau};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qgt"))
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn int_tableau(rows: &[&[i64]]) -> Tableau {
    let rows: Vec<Vec<Entry>> = rows
        .iter()
        .map(|r| r.iter().copied().map(Entry::int).collect())
        .collect();
    Tableau::new(rows.len(), 1, rows).unwrap()
}

/// Standard exact gl(2) module with highest weight (1, 0).
fn gl2_module(dir: &Path) -> PathBuf {
    let file = ModuleSpecFile {
        relations: standard_set(2),
        seed: int_tableau(&[&[0, -2], &[-1]]),
        mode: Mode::Exact,
        numeric: None,
        unchecked: false,
    };
    write_json(dir, "gl2.json", &file)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn admissible_accepts_standard_set() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_json(dir.path(), "s3.json", &standard_set(3));
    let out = bin().args(["admissible"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("admissible"));
}

#[test]
fn admissible_rejects_cross() {
    // (3,1) >= (2,2) together with (2,1) > (3,2) forms a cross
    let dir = tempfile::tempdir().unwrap();
    let set = RelationSet::new(
        3,
        vec![
            Relation {
                left: Pos(3, 1),
                op: RelKind::Weak,
                right: Pos(2, 2),
            },
            Relation {
                left: Pos(2, 1),
                op: RelKind::Strict,
                right: Pos(3, 2),
            },
        ],
    )
    .unwrap();
    let path = write_json(dir.path(), "cross.json", &set);
    let out = bin().args(["admissible"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not admissible"));
}

#[test]
fn dim_counts_standard_basis() {
    let out = bin()
        .args(["dim", "--hw", "2,1,0", "--count"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "8 8");
}

#[test]
fn dim_rejects_non_dominant_weight() {
    let out = bin().args(["dim", "--hw", "0,1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn act_applies_raising_generator() {
    let dir = tempfile::tempdir().unwrap();
    let module = gl2_module(dir.path());
    let t = write_json(dir.path(), "t.json", &int_tableau(&[&[0, -2], &[-1]]));
    let out = bin()
        .args(["act", "--module"])
        .arg(&module)
        .args(["--gen", "e1", "--tableau"])
        .arg(&t)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["T(0,-2;0)"], "1");
}

#[test]
fn gamma_prints_eigenvalue_table() {
    let dir = tempfile::tempdir().unwrap();
    let module = gl2_module(dir.path());
    let t = write_json(dir.path(), "top.json", &int_tableau(&[&[0, -2], &[0]]));
    let out = bin()
        .args(["gamma", "--module"])
        .arg(&module)
        .arg("--tableau")
        .arg(&t)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["1,1"], "q");
    assert_eq!(json["2,1"], "(1+q^4)/q");
    assert_eq!(json["2,2"], "q+q^3");
}

#[test]
fn verify_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let module = gl2_module(dir.path());
    let out = bin()
        .args(["verify", "--module"])
        .arg(&module)
        .args(["--radius", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("PASS commutator"), "{text}");
    assert!(text.contains("overall: PASS"), "{text}");
}

#[test]
fn verify_fault_injection_fails() {
    let dir = tempfile::tempdir().unwrap();
    let module = gl2_module(dir.path());
    let out = bin()
        .args(["verify", "--module"])
        .arg(&module)
        .args(["--radius", "4", "--fault-e", "1", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["pass"], false);
}

#[test]
fn verify_numeric_mode_echoes_seed() {
    let dir = tempfile::tempdir().unwrap();
    let module = gl2_module(dir.path());
    let out = bin()
        .env("QGT_MODE", "numeric")
        .args(["verify", "--module"])
        .arg(&module)
        .args(["--radius", "4", "--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("numeric sampling seed: 7"));
    assert!(stdout(&out).contains("overall: PASS"));
}

#[test]
fn matrices_writes_generator_files() {
    let dir = tempfile::tempdir().unwrap();
    let module = gl2_module(dir.path());
    let out_dir = dir.path().join("mats");
    let out = bin()
        .args(["matrices", "--module"])
        .arg(&module)
        .args(["--radius", "4", "--out"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for name in ["e1.mtx", "f1.mtx", "qeps1.mtx", "qeps2.mtx"] {
        let text = std::fs::read_to_string(out_dir.join(name)).unwrap();
        assert!(text.starts_with("qgt-matrix 1 2 2 "), "{name}: {text}");
    }
}

#[test]
fn maximal_set_of_a_tableau() {
    let dir = tempfile::tempdir().unwrap();
    let t = write_json(dir.path(), "t.json", &int_tableau(&[&[0, -2], &[0]]));
    let out = bin().args(["maximal", "--tableau"]).arg(&t).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["admissible"], true);
    assert!(!json["relations"]["relations"].as_array().unwrap().is_empty());
}

#[test]
fn rr_removes_vertex_relations() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_json(dir.path(), "s2.json", &standard_set(2));
    let out = bin()
        .args(["rr", "--relations"])
        .arg(&path)
        .args(["--vertex", "1,1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["removed"], true);
    assert!(json["relations"]["relations"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = bin().args(["admissible"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn seed_violating_relations_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let file = ModuleSpecFile {
        relations: standard_set(2),
        seed: int_tableau(&[&[0, -2], &[1]]),
        mode: Mode::Exact,
        numeric: None,
        unchecked: false,
    };
    let module = write_json(dir.path(), "bad_seed.json", &file);
    let out = bin()
        .args(["basis", "--module"])
        .arg(&module)
        .args(["--radius", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn basis_round_trips_tableau_json() {
    let dir = tempfile::tempdir().unwrap();
    let module = gl2_module(dir.path());
    let out = bin()
        .args(["basis", "--module"])
        .arg(&module)
        .args(["--radius", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["complete"], true);
    let tableaux: Vec<Tableau> =
        serde_json::from_value(json["tableaux"].clone()).unwrap();
    assert_eq!(tableaux.len(), 2);
}

#[test]
fn irreducible_standard_module() {
    let dir = tempfile::tempdir().unwrap();
    let module = gl2_module(dir.path());
    let out = bin()
        .args(["irreducible", "--module"])
        .arg(&module)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["irreducible"], true);
    assert!(json["missing"].as_array().unwrap().is_empty());
}
