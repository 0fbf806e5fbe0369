//! The ten acceptance criteria, one line each. Exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use mckay3d::check::{run_checks, CheckReport};
use mckay3d::ct::{area_pattern, nonvanishing_path, ALL_AREAS};
use mckay3d::derived::{cross_check, derived_table, S3Sheaf, Special};
use mckay3d::divisor::prime_name;
use mckay3d::fixture::GoldenFixture;
use mckay3d::io::{self, DerivedJson, TriangulationJson};
use mckay3d::recipe::RecipeRole;
use mckay3d::Analysis;
use rayon::prelude::*;

const G15: &str = include_str!("../../mckay3d/fixtures/g15.json");
const G3: &str = include_str!("../../mckay3d/fixtures/g3.json");

type Outcome = Result<String, String>;

fn cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_mckay3d")).args(args).output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn analysis(spec: &str) -> Result<Analysis, String> {
    Analysis::new(&spec.parse().map_err(|e| format!("{e}"))?, 0).map_err(|e| e.to_string())
}

fn within(t: Instant, budget: Duration) -> Result<Duration, String> {
    let took = t.elapsed();
    if took < budget {
        Ok(took)
    } else {
        Err(format!("took {took:?}, budget {budget:?}"))
    }
}

fn junior_points() -> Outcome {
    let t = Instant::now();
    let doc: TriangulationJson =
        io::from_json_str(&cli(&["ghilb", "--group", "1/15:1,5,9"])?).map_err(|e| e.to_string())?;
    let took = within(t, Duration::from_secs(1))?;
    let expected: BTreeMap<&str, [i64; 3]> = [
        ("E_x", [15, 0, 0]),
        ("E_y", [0, 15, 0]),
        ("E_z", [0, 0, 15]),
        ("E_4", [1, 5, 9]),
        ("E_5", [2, 10, 3]),
        ("E_6", [3, 0, 12]),
        ("E_7", [4, 5, 6]),
        ("E_8", [5, 10, 0]),
        ("E_9", [6, 0, 9]),
        ("E_10", [7, 5, 3]),
        ("E_11", [9, 0, 6]),
        ("E_12", [10, 5, 0]),
        ("E_13", [12, 0, 3]),
    ]
    .into_iter()
    .collect();
    let actual: BTreeMap<&str, [i64; 3]> =
        doc.points.iter().map(|p| (p.name.as_str(), p.num.map(|c| c * 15 / p.den))).collect();
    if actual != expected {
        return Err(format!("points differ: {actual:?}"));
    }
    if doc.triangles.len() != 15 {
        return Err(format!("{} triangles", doc.triangles.len()));
    }
    Ok(format!("13 points, 15 triangles in {took:?}"))
}

fn cube_labels() -> Outcome {
    let fixture = GoldenFixture::load(G15).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let a = analysis("1/15:1,5,9")?;
    let g = &a.model.group;
    let mut compared = 0;
    for (label, expected) in &fixture.cubes {
        let chi = g.parse_label(label).ok_or("bad label")?;
        let cube = a.model.cube(chi);
        for (k, (want, arrow)) in expected.iter().zip(&cube.arrows).enumerate() {
            let got = arrow.divisor.support_label();
            if *want != got {
                return Err(format!("cube {label} arrow {k}: expected {want}, got {got}"));
            }
            compared += 1;
        }
    }
    let took = within(t, Duration::from_secs(5))?;
    if compared != 180 {
        return Err(format!("{compared} labels compared"));
    }
    Ok(format!("180 labels match in {took:?}"))
}

fn derived_rows() -> Outcome {
    let fixture = GoldenFixture::load(G15).map_err(|e| e.to_string())?;
    let a = analysis("1/15:1,5,9")?;
    let table = derived_table(&a.model, &a.roles).map_err(|e| e.to_string())?;
    let diff: Vec<_> = fixture.compare(&a, &table).into_iter().filter(|m| m.path.starts_with("derived")).collect();
    if !diff.is_empty() {
        return Err(format!("{diff:?}"));
    }
    let out = cli(&["derived", "--group", "1/15:1,5,9"])?;
    let docs: Vec<DerivedJson> = io::from_json_str(&out).map_err(|e| e.to_string())?;
    let expected: Vec<DerivedJson> = table.iter().map(|r| io::derived_json(&a.model, r)).collect();
    if docs != expected {
        return Err("CLI output differs from the library table".into());
    }
    Ok("15 rows match the worked-example table".into())
}

fn zero_fibre() -> Outcome {
    let doc: TriangulationJson =
        io::from_json_str(&cli(&["ghilb", "--group", "1/15:1,5,9"])?).map_err(|e| e.to_string())?;
    let z2: Vec<&str> = doc.zero_fibre.z2.iter().map(String::as_str).collect();
    let z1: Vec<[&str; 2]> = doc.zero_fibre.z1.iter().map(|c| [c[0].as_str(), c[1].as_str()]).collect();
    if z2 != ["E_4", "E_5", "E_7", "E_10"] || z1 != [["E_12", "E_13"]] {
        return Err(format!("Z2 {z2:?}, Z1 {z1:?}"));
    }
    Ok("Z2 = E_4 E_5 E_7 E_10, Z1 = E_12∩E_13".into())
}

/// The invariant suite over every group of the sweep.
fn sweep_reports() -> (Vec<Result<CheckReport, String>>, Duration) {
    let t = Instant::now();
    let reports = mckay3d::sweep::cyclic_groups(30)
        .par_iter()
        .map(|spec| Analysis::new(spec, 0).map(|a| run_checks(&a)).map_err(|e| format!("{spec}: {e}")))
        .collect();
    (reports, t.elapsed())
}

fn sweep_groups(reports: &[Result<CheckReport, String>], names: &[&str]) -> Outcome {
    let mut passed = 0;
    for r in reports {
        let r = r.as_ref().map_err(Clone::clone)?;
        for name in names {
            let g = r.get(name).ok_or_else(|| format!("{}: no `{name}` group", r.group))?;
            if g.failed > 0 {
                return Err(format!("{}: {name}: {:?}", r.group, g.failures));
            }
            passed += g.passed;
        }
    }
    Ok(format!("{passed} checks over {} groups", reports.len()))
}

fn single_sheaves(reports: &[Result<CheckReport, String>], took: Duration) -> Outcome {
    if took > Duration::from_secs(600) {
        return Err(format!("sweep took {took:?}"));
    }
    sweep_groups(reports, &["single-sheaf", "cross-check"]).map(|s| format!("{s} in {took:?}"))
}

fn ct_paths() -> Outcome {
    let mut pairs = 0;
    for spec in ["1/15:1,5,9", "1/7:1,2,4"] {
        let a = analysis(spec)?;
        let g = &a.model.group;
        for chi in g.characters().filter(|&c| c != g.trivial()) {
            let ct = a.cts[chi.index()].as_ref().ok_or("missing CT-subdivision")?;
            for e in 0..a.model.num_points() {
                for area in ALL_AREAS {
                    if ct.contains(area, e) != nonvanishing_path(&a.model, g.inv(chi), e, area_pattern(area)) {
                        return Err(format!("{spec} {} {area} at {}", g.label(chi), prime_name(e)));
                    }
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} (vertex, character) pairs, six patterns each"))
}

fn champions() -> Outcome {
    let fixture = GoldenFixture::load(G3).map_err(|e| e.to_string())?;
    let a = analysis("1/3:1,1,1")?;
    let chi = a.model.group.parse_label("2").ok_or("no χ2")?;
    let role = &a.roles[chi.index()];
    let RecipeRole::MeetingOfChampions { branches, .. } = role else {
        return Err(format!("χ2 has role {role:?}"));
    };
    if branches.iter().any(|b| b.len() != 1) {
        return Err(format!("chains are not empty: {branches:?}"));
    }
    let r = cross_check(&a.model, role, chi).map_err(|e| e.to_string())?;
    let d = r.degree(-1).ok_or("no H⁻¹")?;
    if r.descriptors.len() != 1 || d.twist.to_string() != "-E_x-E_y-E_z" {
        return Err(format!("descriptor {d:?}"));
    }
    match &d.special {
        Some(Special::Champions(c)) if c.s3_sheaf == S3Sheaf::TangentP2 => {}
        other => return Err(format!("special {other:?}")),
    }
    let table = derived_table(&a.model, &a.roles).map_err(|e| e.to_string())?;
    let diff = fixture.compare(&a, &table);
    if !diff.is_empty() {
        return Err(format!("fixture: {diff:?}"));
    }
    Ok("χ2: H⁻¹ = L⁻¹(-E_x-E_y-E_z) with the tangent sheaf of P2".into())
}

fn main() {
    let (reports, took) = sweep_reports();
    let criteria: Vec<(&str, Outcome)> = vec![
        ("1 junior points of 1/15(1,5,9)", junior_points()),
        ("2 cube labels of 1/15(1,5,9)", cube_labels()),
        ("3 derived table of 1/15(1,5,9)", derived_rows()),
        ("4 zero fibre of 1/15(1,5,9)", zero_fibre()),
        ("5 single sheaves and cross-check, r <= 30", single_sheaves(&reports, took)),
        ("6 number of diamonds, r <= 30", sweep_groups(&reports, &["number-of-diamonds"])),
        ("7 CT areas versus nonvanishing paths", ct_paths()),
        ("8 xyz path identity, r <= 30", sweep_groups(&reports, &["xyz-identity"])),
        ("9 socle characters mark a face, r <= 30", sweep_groups(&reports, &["socle-marks"])),
        ("10 champions of 1/3(1,1,1)", champions()),
    ];
    let mut failed = 0;
    for (name, outcome) in &criteria {
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
