use std::path::PathBuf;
use std::process::{Command, Output};

use mckay3d::io::{self, CubeJson, DerivedJson, MarkingJson, TriangulationJson};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mckay3d")).args(args).output().expect("binary runs")
}

fn run_env(args: &[&str], seed: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mckay3d"))
        .args(args)
        .env("MCKAY3D_SEED_OFFSET", seed)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "status {} stderr {}", o.status, String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../mckay3d/fixtures").join(name).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn trivial_group_has_a_single_triangle() {
    let t: TriangulationJson = io::from_json_str(&stdout(&run(&["ghilb", "--group", "1/1:0,0,0"]))).unwrap();
    assert_eq!(t.group.order, 1);
    assert_eq!(t.points.len(), 3);
    assert_eq!(t.triangles, vec![[0, 1, 2]]);
}

#[test]
fn generator_presentations_are_accepted() {
    let t: TriangulationJson =
        io::from_json_str(&stdout(&run(&["ghilb", "--group", "gens=1/2:1,1,0;1/2:1,0,1"]))).unwrap();
    assert_eq!(t.group.order, 4);
    assert_eq!(t.triangles.len(), 4);
}

#[test]
fn identical_runs_give_identical_bytes() {
    for cmd in ["ghilb", "recipe", "ct", "sinksource", "cubes", "derived"] {
        let a = run(&[cmd, "--group", "1/7:1,2,4"]);
        let b = run(&[cmd, "--group", "1/7:1,2,4"]);
        assert_eq!(stdout(&a), stdout(&b), "{cmd}");
    }
}

#[test]
fn seed_offset_does_not_change_the_fan() {
    let base = stdout(&run(&["ghilb", "--group", "1/15:1,5,9"]));
    assert_eq!(stdout(&run_env(&["ghilb", "--group", "1/15:1,5,9"], "7")), base);
    assert_eq!(run_env(&["ghilb"], "seven").status.code(), Some(1));
}

#[test]
fn json_outputs_parse_back() {
    let m: MarkingJson = io::from_json_str(&stdout(&run(&["recipe", "--group", "1/15:1,5,9"]))).unwrap();
    assert_eq!(m.roles.len(), 15);
    let cubes: Vec<CubeJson> = io::from_json_str(&stdout(&run(&["cubes", "--reduced", "--chi", "4"]))).unwrap();
    assert_eq!(cubes.len(), 1);
    assert_eq!(cubes[0].arrows[6].label, "E_{x812}");
    let rows: Vec<DerivedJson> = io::from_json_str(&stdout(&run(&["derived", "--chi", "5"]))).unwrap();
    let h1 = rows[0].h["-1"].as_ref().unwrap();
    assert_eq!(h1.support.divisors, vec!["E_7", "E_10"]);
}

#[test]
fn tables_are_plain_text() {
    let out = stdout(&run(&["derived", "--format", "table"]));
    assert_eq!(out.lines().count(), 15);
    assert!(out.contains("chi 5   | 0 | L^-1(-E_4-E_12) ⊗ O_{E_7,E_10} | 0"));
    let out = stdout(&run(&["sinksource", "--format", "table"]));
    assert!(out.contains("three (1,2)-sources"));
}

#[test]
fn render_writes_svg_and_tikz() {
    let path = scratch("render.svg");
    stdout(&run(&["render", "--chi", "3", "--out", path.to_str().unwrap()]));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("CT(3)"));
    let tikz = stdout(&run(&["ct", "--format", "tikz", "--chi", "3"]));
    assert!(tikz.contains("\\begin{tikzpicture}"));
}

#[test]
fn check_passes_on_the_fixtures() {
    let out = stdout(&run(&["check", "--group", "1/3:1,1,1", "--fixture", &fixture("g3.json")]));
    assert!(!out.contains("FAIL"));
    assert!(out.contains("ok   fixture"));
    let out = stdout(&run(&["check", "--fixture", &fixture("g15.json"), "--format", "json"]));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["fixture"]["mismatches"].as_array().unwrap().len(), 0);
}

#[test]
fn fixture_mismatch_exits_with_three() {
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("g15.json")).unwrap()).unwrap();
    doc["cubes"]["4"][6] = "E_{x1213}".into();
    let path = scratch("typo.json");
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = run(&["check", "--fixture", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let mismatches = report["fixture"]["mismatches"].as_array().unwrap();
    assert_eq!(mismatches.len(), 1);
    assert_eq!(mismatches[0]["path"], "cubes.4[6]");
    assert!(!report["fixture"]["self_consistency"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_with_one() {
    let o = run(&["ghilb", "--group", "1/5:1,1,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("generator 0"));
    assert_eq!(run(&["ghilb", "--group", "1/x:1,2"]).status.code(), Some(1));
    assert_eq!(run(&["cubes", "--format", "svg"]).status.code(), Some(1));
    assert_eq!(run(&["derived", "--chi", "99"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["check", "--fixture", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_check_covers_small_groups() {
    let out = stdout(&run(&["check", "--sweep", "6", "--jobs", "2"]));
    assert!(out.starts_with("sweep over"));
    assert!(!out.contains("FAIL"));
}
