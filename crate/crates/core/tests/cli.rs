use std::process::Command;

use quadtors::classify::{ClassificationStatus, SmallestField, Verdict};
use quadtors::density::DensityScan;
use serde_json::Value;

fn quadtors(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_quadtors"))
        .args(args)
        .env_remove("QUADTORS_LEDGER")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn classify_fourteen_over_minus_seven() {
    let (code, out, _) = quadtors(&["classify", "--d", "-7", "--group", "14"]);
    assert_eq!(code, 0);
    assert!(out.contains("APPEARS_FINITELY(2)"), "{out}");

    let (code, json, _) = quadtors(&["--json", "classify", "--d", "-7", "--group", "14"]);
    assert_eq!(code, 0);
    let s: ClassificationStatus = serde_json::from_str(&json).unwrap();
    assert_eq!(
        s.verdict,
        Verdict::AppearsFinitely {
            count: Some(2),
            lower_bound: 2
        }
    );
    assert_eq!(s.replay(), s.verdict);
    assert_eq!(
        serde_json::to_value(&s).unwrap(),
        serde_json::from_str::<Value>(&json).unwrap()
    );
}

#[test]
fn jacobian_order_table_and_json_agree() {
    let (code, json, _) = quadtors(&[
        "--json",
        "jacobian-order",
        "--curve",
        "X1_13",
        "--p",
        "3",
        "--ext",
        "2",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["jacobian_order"], 57);
    let (_, table, _) = quadtors(&[
        "jacobian-order",
        "--curve",
        "X1_13",
        "--p",
        "3",
        "--ext",
        "2",
    ]);
    for needle in [
        format!("#C = {}", v["count"]),
        format!("c1 = {}", v["c1"]),
        format!("c2 = {}", v["c2"]),
        format!("|J| = {}", v["jacobian_order"]),
    ] {
        assert!(table.contains(&needle), "{needle} not in {table}");
    }
}

#[test]
fn density_of_one_field() {
    let (code, json, _) = quadtors(&["--json", "density", "--t", "1"]);
    assert_eq!(code, 0);
    let s: DensityScan = serde_json::from_str(&json).unwrap();
    assert_eq!((s.t, s.a_t), (1, 1));
    let (_, table, _) = quadtors(&["density", "--t", "1"]);
    assert!(table.contains("Q(√-1)"), "{table}");
}

#[test]
fn smallest_field_json() {
    let (code, json, _) = quadtors(&["--json", "smallest", "--group", "15"]);
    assert_eq!(code, 0);
    let s: SmallestField = serde_json::from_str(&json).unwrap();
    assert_eq!(s.d, 5);
    assert!(!s.conditional);
}

#[test]
fn d_is_reduced_with_warning() {
    let (code, out, err) = quadtors(&["classify", "--d", "12", "--group", "5"]);
    assert_eq!(code, 0);
    assert!(err.contains("reduced"), "{err}");
    assert!(out.contains("Q(√3)"), "{out}");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["classify", "--d", "-7", "--group", "7x7"][..],
        &["classify", "--d", "-7"],
        &["jacobian-order", "--curve", "X1_11", "--p", "3"],
        &["no-such-command"],
    ] {
        let (code, _, err) = quadtors(args);
        assert_eq!(code, 2, "{args:?}: {err}");
    }
}

#[test]
fn malformed_fixture_file_exits_one() {
    let path = std::env::temp_dir().join(format!("quadtors-bad-{}.json", std::process::id()));
    std::fs::write(&path, "[{").unwrap();
    let (code, _, err) = quadtors(&["torsion", "--curve-file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 1, "{err}");
}

#[test]
fn torsion_on_shipped_fixtures() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/fixtures.json");
    let (code, json, _) = quadtors(&["--json", "torsion", "--curve-file", path]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&json).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 11);
    assert!(reports.iter().all(|r| r["pass"] == true));
}

#[test]
fn verify_paper_passes() {
    let (code, out, _) = quadtors(&["verify-paper"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("21"), "inconsistency flag missing: {out}");
}

#[test]
fn ledger_override_is_honoured() {
    let path = std::env::temp_dir().join(format!("quadtors-empty-{}.jsonl", std::process::id()));
    std::fs::write(&path, "").unwrap();
    let (code, json, _) = quadtors(&[
        "--json",
        "--ledger",
        path.to_str().unwrap(),
        "classify",
        "--d",
        "-7",
        "--group",
        "14",
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0);
    let s: ClassificationStatus = serde_json::from_str(&json).unwrap();
    assert!(
        !matches!(s.verdict, Verdict::AppearsFinitely { count: Some(_), .. }),
        "{}",
        s.verdict
    );
}
