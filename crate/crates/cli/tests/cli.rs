use std::path::{Path, PathBuf};

use idemlab::{dispatch, load_algebra};
use idemlab_core::OpSymbol;
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("idemlab").chain(args.iter().copied());
    let code = dispatch(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

// left projection for +, right projection for *
const LEFT_SEMIRING: &str = "carrier 2\nop +\n0 0\n1 1\nop *\n0 1\n0 1\n";

#[test]
fn check_holds_on_a_left_semiring() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "ls.txt", LEFT_SEMIRING);
    let (code, out, _) = run(&[
        "check",
        "--algebra",
        s(&file),
        "--identity",
        "x(y+z) = xy+xz",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["holds"], true);
}

#[test]
fn check_reports_a_witness_on_failure() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "ls.txt", LEFT_SEMIRING);
    let (code, out, _) = run(&["check", "--algebra", s(&file), "--identity", "x+y = y+x"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["holds"], false);
    assert!(!v["witness"].is_null());
}

#[test]
fn rightmost_variable() {
    let (code, out, _) = run(&["term", "rightmost", "--term", "(uv)(wx)", "--var", "x"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "true");
    let (_, out, _) = run(&["term", "rightmost", "--term", "(uv)(wx)", "--var", "u"]);
    assert_eq!(out.trim(), "false");
}

#[test]
fn ld_campaign_finds_its_counterexample() {
    let dir = TempDir::new().unwrap();
    let (code, out, _) = run(&["campaign", "ld_no_idempotent", "--out-dir", s(dir.path())]);
    assert_eq!(code, 1);
    let written = std::fs::read_to_string(dir.path().join("ld_no_idempotent.json")).unwrap();
    let report: Value = serde_json::from_str(&written).unwrap();
    assert_eq!(report["counterexample_found"], true);
    assert_eq!(report["all_as_expected"], true);
    assert!(!out.is_empty());
}

#[test]
fn unknown_campaign_is_an_error() {
    let dir = TempDir::new().unwrap();
    let (code, _, err) = run(&["campaign", "nope", "--out-dir", s(dir.path())]);
    assert_eq!(code, 2);
    assert!(err.contains("nope"));
}

#[test]
fn loading_files() {
    let dir = TempDir::new().unwrap();
    let one = load_algebra(&write(&dir, "one.txt", "carrier 1\nop *\n0\n")).unwrap();
    assert_eq!(one.order(), 1);
    let two = load_algebra(&write(&dir, "two.txt", LEFT_SEMIRING)).unwrap();
    assert!(two.table(OpSymbol::Add).is_some() && two.table(OpSymbol::Mul).is_some());
    let bad = load_algebra(&write(&dir, "bad.txt", "carrier 2\nop *\n0 2\n0 1\n")).unwrap_err();
    let msg = format!("{bad:#}");
    assert!(
        msg.contains("line 3") && msg.contains("outside the carrier"),
        "{msg}"
    );
}

#[test]
fn bad_file_exits_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "carrier 2\nop *\n0 2\n0 1\n");
    let (code, out, err) = run(&["idempotents", "--algebra", s(&bad)]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("line 3"));
}

#[test]
fn unknown_verb_exits_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn output_is_identical_across_worker_counts() {
    let searches: [&[&str]; 3] = [
        &[
            "search",
            "--orders",
            "1-3",
            "--constraint",
            "x(yz) = (xy)(xz)",
            "--property",
            "has-idempotent",
        ],
        &[
            "search",
            "--orders",
            "1-3",
            "--left-semiring",
            "--property",
            "has-common-idempotent",
        ],
        &["hindman", "forcing"],
    ];
    for args in searches {
        let (c1, o1, _) = run(&[&["--workers", "1"], args].concat());
        let (c4, o4, _) = run(&[&["--workers", "4"], args].concat());
        assert_eq!((c1, &o1), (c4, &o4), "{args:?}");
        assert!(!o1.is_empty());
    }
}

#[test]
fn hindman_partition_without_witness_exits_one() {
    let (code, out, _) = run(&["hindman", "partition", "--class", "1,4", "--class", "2,3"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["monochromatic"], false);
}

#[test]
fn swapped_ultrafilter_nesting_fails() {
    let dir = TempDir::new().unwrap();
    let lp = write(&dir, "lp.txt", "carrier 2\nop *\n0 0\n1 1\n");
    assert_eq!(run(&["ultrafilter", "--algebra", s(&lp)]).0, 0);
    assert_eq!(
        run(&["ultrafilter", "--algebra", s(&lp), "--nesting", "swapped"]).0,
        1
    );
}
