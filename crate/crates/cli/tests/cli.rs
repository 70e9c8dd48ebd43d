//! Every subcommand run as a child process on fixture files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn core_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tileforge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn envelope(out: &Output) -> Value {
    let v: Value = serde_json::from_str(stdout(out).trim()).expect("one JSON object on stdout");
    assert!(v.get("status").is_some() && v.get("data").is_some());
    v
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn reduce_writes_five_polycubes_and_four_polyhypercubes() {
    let dir = tempfile::tempdir().unwrap();
    for (dim, count) in [("3", 5), ("4", 4)] {
        let out_dir = dir.path().join(dim);
        let out = run(&["reduce", "--dim", dim, "--wang", s(&fixture("three_tiles.json")), "--out", s(&out_dir)]);
        assert_eq!(code(&out), 0);
        let vox = std::fs::read_dir(&out_dir)
            .unwrap()
            .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "vox"))
            .count();
        assert_eq!(vox, count);
        assert!(out_dir.join("manifest.json").exists());
    }
    let out = run(&["--json", "reduce", "--dim", "3", "--wang", s(&fixture("three_tiles.json")), "--out", s(&dir.path().join("j"))]);
    let v = envelope(&out);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["data"]["tiles"].as_array().unwrap().len(), 5);
}

#[test]
fn witness_then_verify_in_three_and_four_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    for dim in ["3", "4"] {
        let w = dir.path().join(format!("w{dim}.json"));
        let out = run(&["witness", "--dim", dim, "--wang", s(&fixture("coherent.json")), "--out", s(&w)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        let out = run(&["--json", "verify", "--witness", s(&w)]);
        assert_eq!(code(&out), 0);
        assert_eq!(envelope(&out)["data"]["valid"], true);
    }
    let w = dir.path().join("three_tiles.json");
    let out = run(&[
        "witness",
        "--dim",
        "3",
        "--wang",
        s(&fixture("three_tiles.json")),
        "--tiling",
        s(&fixture("three_tiles_tiling.json")),
        "--out",
        s(&w),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("396 placements"));
    let out = run(&["witness", "--dim", "3", "--wang", s(&fixture("mismatched.json"))]);
    assert_eq!(code(&out), 1);
}

#[test]
fn verify_reports_the_doubly_covered_cell() {
    let out = run(&["verify", "--witness", s(&fixture("double_cover.json")), "--tiles", s(&fixture("dominoes"))]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("cell [0, 0]"), "{}", stdout(&out));
    let out = run(&["verify", "--witness", s(&fixture("domino_cover.json")), "--tiles", s(&fixture("dominoes"))]);
    assert_eq!(code(&out), 0);
    let out = run(&["verify", "--witness", s(&fixture("domino_cover.json"))]);
    assert_eq!(code(&out), 3);
}

#[test]
fn solve_exit_codes_and_sat_export() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("x.cnf");
    let w = dir.path().join("w.json");
    let dominoes = fixture("dominoes");
    let out = run(&["solve", "--region", "torus:4,4", "--tiles", s(&dominoes), "--sat", s(&cnf), "--out", s(&w)]);
    assert_eq!(code(&out), 0);
    assert!(std::fs::read_to_string(&cnf).unwrap().contains("p cnf 32 "));
    let out = run(&["verify", "--witness", s(&w), "--tiles", s(&dominoes)]);
    assert_eq!(code(&out), 0);
    let out = run(&["solve", "--region", "box:3,3", "--tiles", s(&dominoes)]);
    assert_eq!(code(&out), 1);
    let out = run(&["solve", "--region", "box:6,6", "--tiles", s(&dominoes), "--budget", "2"]);
    assert_eq!(code(&out), 2);
    let out = run(&["--json", "solve", "--region", "box:2,4", "--tiles", s(&dominoes), "--allow", "1"]);
    let v = envelope(&out);
    assert_eq!(v["status"], "solved");
    let placements = v["data"]["witness"]["placements"].as_array().unwrap();
    assert!(placements.iter().all(|p| p["tile"] == 1));
    let out = run(&[
        "solve",
        "--region",
        "box:2,2",
        "--tiles",
        s(&dominoes),
        "--fixed",
        s(&fixture("domino_cover.json")),
    ]);
    assert_eq!(code(&out), 0);
    let out = run(&["solve", "--region", "sphere:3", "--tiles", s(&dominoes)]);
    assert_eq!(code(&out), 3);
}

#[test]
fn wang_solve_finds_or_refutes() {
    let out = run(&["wang-solve", "--wang", s(&fixture("three_tiles.json"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), r#"{"h":1,"v":3,"assignment":[[0],[2],[1]]}"#);
    let out = run(&["wang-solve", "--wang", s(&fixture("three_tiles.json")), "--h", "2", "--v", "2"]);
    assert_eq!(code(&out), 1);
    let out = run(&["--json", "wang-solve", "--wang", s(&fixture("mismatched.json"))]);
    assert_eq!(code(&out), 1);
    assert_eq!(envelope(&out)["status"], "unsolvable");
}

#[test]
fn render_reproduces_golden_files() {
    for (block, file) in [("c", "dent_c"), ("D+", "bump_D_plus"), ("F", "filler_F")] {
        for (format, ext) in [("text", "txt"), ("svg", "svg")] {
            let out = run(&["render", "--block", block, "--format", format]);
            assert_eq!(code(&out), 0);
            let golden = std::fs::read_to_string(core_dir().join(format!("tests/golden/level1/{file}.{ext}"))).unwrap();
            assert_eq!(stdout(&out), golden);
        }
    }
}

#[test]
fn render_level_two_from_a_reduced_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["reduce", "--dim", "3", "--wang", s(&fixture("three_tiles.json")), "--out", s(dir.path())]);
    assert_eq!(code(&out), 0);
    let out = run(&["render", "--tiles", s(dir.path()), "--tile", "encoder", "--level", "2"]);
    assert_eq!(code(&out), 0);
    let golden = std::fs::read_to_string(core_dir().join("tests/golden/level2/encoder_3d.txt")).unwrap();
    assert_eq!(stdout(&out), golden);
    let out = run(&["render", "--input", s(&dir.path().join("linker.vox")), "--level", "2"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("level-2"));
}

#[test]
fn atlas_audit_passes_on_the_checked_in_atlas() {
    let out = run(&["--json", "atlas-audit", "--dir", s(&core_dir().join("atlas"))]);
    assert_eq!(code(&out), 0);
    assert_eq!(envelope(&out)["data"]["problems"].as_array().unwrap().len(), 0);
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["atlas-audit", "--dir", s(dir.path())]);
    assert_eq!(code(&out), 1);
}

#[test]
fn malformed_input_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"q\": 2, \"tiles\": [{\"n\": 5, \"e\": 0, \"s\": 0, \"w\": 0}]}").unwrap();
    let out = run(&["reduce", "--dim", "3", "--wang", s(&bad), "--out", s(&dir.path().join("o"))]);
    assert_eq!(code(&out), 3);
    assert!(!out.stderr.is_empty());
    let out = run(&["--json", "reduce", "--dim", "5", "--wang", s(&fixture("three_tiles.json")), "--out", s(&dir.path().join("o"))]);
    assert_eq!(code(&out), 3);
    assert_eq!(envelope(&out)["status"], "error");
}
