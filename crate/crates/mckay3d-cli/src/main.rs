use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use mckay3d::check::{run_checks, CheckReport};
use mckay3d::ct::sink_source_graph;
use mckay3d::derived::{cross_check, Special, TransformResult};
use mckay3d::divisor::prime_name;
use mckay3d::fixture::GoldenFixture;
use mckay3d::{io, render, Analysis, Character, Error, GroupSpec};
use rayon::prelude::*;
use serde_json::json;

const EXIT_USAGE: u8 = 1;
const EXIT_INVARIANT: u8 = 2;
const EXIT_FIXTURE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "mckay3d",
    version,
    about = "G-Hilb fans, Reid's recipe and its derived version for abelian subgroups of SL(3)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Group spec such as `1/15:1,5,9` or `gens=1/2:1,1,0;1/2:1,0,1`.
    #[arg(long, global = true, default_value = "1/15:1,5,9")]
    group: String,
    /// Output format; the default depends on the command.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Restrict per-character output to one character label.
    #[arg(long, global = true)]
    chi: Option<String>,
    /// Golden fixture to compare against (`check`).
    #[arg(long, global = true)]
    fixture: Option<PathBuf>,
    /// Worker threads for parallel work.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print cube arrows by support instead of with multiplicities.
    #[arg(long, global = true)]
    reduced: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Junior points, basic triangles, edge ratios and the zero fibre.
    Ghilb,
    /// Classical Reid's recipe: markings and the role of every character.
    Recipe,
    /// CT-subdivisions of the nontrivial characters.
    Ct,
    /// Sink-source graphs of the toric divisors.
    Sinksource,
    /// The Koszul cube of every character.
    Cubes,
    /// The derived table: nonzero cohomology sheaves of every transform.
    Derived,
    /// Picture of the triangulation with markings and CT colouring.
    Render,
    /// Run the invariant suite, and compare with a fixture if one is given.
    Check {
        /// Run the suite over every cyclic group of order at most this instead.
        #[arg(long)]
        sweep: Option<u32>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Svg,
    Tikz,
    Table,
}

impl Command {
    fn formats(self) -> &'static [Format] {
        use Format::*;
        match self {
            Command::Ghilb | Command::Recipe | Command::Ct => &[Json, Table, Svg, Tikz],
            Command::Sinksource | Command::Cubes | Command::Derived => &[Json, Table],
            Command::Render => &[Svg, Tikz],
            Command::Check { .. } => &[Table, Json],
        }
    }
}

/// A failure carrying its exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_USAGE, error: error.into() }
}

fn library(e: Error) -> Failure {
    let code = match e {
        Error::Parse { .. } | Error::NotSl3 { .. } => EXIT_USAGE,
        _ => EXIT_INVARIANT,
    };
    Failure { code, error: e.into() }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn seed_offset() -> Result<usize, Failure> {
    match std::env::var("MCKAY3D_SEED_OFFSET") {
        Ok(s) => s.trim().parse().map_err(|_| usage(anyhow!("MCKAY3D_SEED_OFFSET must be a non-negative integer"))),
        Err(_) => Ok(0),
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let format = cli.format.unwrap_or(cli.command.formats()[0]);
    if !cli.command.formats().contains(&format) {
        return Err(usage(anyhow!("format {format:?} is not available for this command")));
    }
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().map_err(usage)?;
    }
    let seed = seed_offset()?;
    if let Command::Check { sweep: Some(r) } = cli.command {
        return sweep(cli, format, r, seed);
    }
    let spec: GroupSpec = cli.group.parse().map_err(library)?;
    let a = Analysis::new(&spec, seed).map_err(library)?;
    let chars = selected(&a, cli.chi.as_deref())?;
    let (text, code) = match cli.command {
        Command::Ghilb => (ghilb(&a, format)?, 0),
        Command::Recipe => (recipe(&a, format), 0),
        Command::Ct => (ct(&a, format, &chars, cli.chi.is_some())?, 0),
        Command::Sinksource => (sinksource(&a, format)?, 0),
        Command::Cubes => (cubes(&a, format, &chars, cli.reduced), 0),
        Command::Derived => (derived(&a, format, &chars)?, 0),
        Command::Render => (picture(&a, format, cli.chi.as_ref().map(|_| chars[0])), 0),
        Command::Check { .. } => check(&a, format, cli.fixture.as_ref())?,
    };
    emit(cli, &text)?;
    Ok(code)
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())).map_err(usage),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn selected(a: &Analysis, chi: Option<&str>) -> Result<Vec<Character>, Failure> {
    let g = &a.model.group;
    match chi {
        None => Ok(g.characters().collect()),
        Some(label) => g
            .parse_label(label)
            .map(|c| vec![c])
            .ok_or_else(|| usage(anyhow!("`{label}` is not a character of {}", g.spec))),
    }
}

fn picture(a: &Analysis, format: Format, chi: Option<Character>) -> String {
    match format {
        Format::Tikz => render::tikz(a, chi),
        _ => render::svg(a, chi),
    }
}

fn ghilb(a: &Analysis, format: Format) -> Result<String, Failure> {
    let t = io::triangulation_json(&a.model).map_err(library)?;
    Ok(match format {
        Format::Json => io::to_json_string(&t),
        Format::Table => {
            let mut s = format!("group {} of order {}\n", t.group.spec, t.group.order);
            for p in &t.points {
                let surface = p.surface.as_deref().unwrap_or("-");
                let _ = writeln!(
                    s,
                    "{:<5} {:<16} {:<9} {:<18} valence {}",
                    p.name,
                    format!("{:?}/{}", p.num, p.den),
                    p.kind,
                    surface,
                    p.valence
                );
            }
            let _ = writeln!(s, "{} triangles", t.triangles.len());
            for e in &t.edges {
                let _ = writeln!(
                    s,
                    "{}-{}  {} : {}  chi {}{}",
                    prime_name(e.v[0]),
                    prime_name(e.v[1]),
                    e.ratio.m1,
                    e.ratio.m2,
                    e.chi,
                    if e.interior { "" } else { "  (boundary)" }
                );
            }
            let z1: Vec<String> = t.zero_fibre.z1.iter().map(|c| format!("{}∩{}", c[0], c[1])).collect();
            let _ = writeln!(s, "Z2: {}\nZ1: {}", t.zero_fibre.z2.join(" "), z1.join(" "));
            s
        }
        _ => picture(a, format, None),
    })
}

fn recipe(a: &Analysis, format: Format) -> String {
    let m = io::marking_json(a);
    match format {
        Format::Json => io::to_json_string(&m),
        Format::Table => {
            let mut s = String::new();
            for v in &m.vertices {
                let _ = writeln!(s, "vertex {:<5} {}", v.id, v.chis.join(", "));
            }
            for e in &m.edges {
                let _ = writeln!(s, "edge   {}-{}  {}", e.v[0], e.v[1], e.chi);
            }
            for r in &m.roles {
                let _ = writeln!(s, "chi {:<3} {:<20} {}", r.chi, r.variant, r.data);
            }
            s
        }
        _ => picture(a, format, None),
    }
}

fn ct(a: &Analysis, format: Format, chars: &[Character], one: bool) -> Result<String, Failure> {
    let m = &a.model;
    let docs: Vec<io::CtJson> =
        chars.iter().filter_map(|c| a.cts[c.index()].as_ref()).map(|ct| io::ct_json(m, ct)).collect();
    Ok(match format {
        Format::Json => io::to_json_string(&docs),
        Format::Table => {
            let mut s = String::new();
            for d in &docs {
                let _ = writeln!(s, "chi {}", d.chi);
                for area in &d.areas {
                    let _ = writeln!(s, "  {}", serde_json::to_string(area).unwrap_or_default());
                }
                for deg in &d.degenerations {
                    let _ = writeln!(s, "  degenerate {}", serde_json::to_string(deg).unwrap_or_default());
                }
            }
            s
        }
        _ if one => {
            if chars[0] == m.group.trivial() {
                return Err(usage(anyhow!("the trivial character has no CT-subdivision")));
            }
            picture(a, format, Some(chars[0]))
        }
        _ => return Err(usage(anyhow!("pictures of CT-subdivisions need --chi"))),
    })
}

fn sinksource(a: &Analysis, format: Format) -> Result<String, Failure> {
    let m = &a.model;
    let graphs = (0..m.num_points())
        .map(|e| sink_source_graph(m, &a.cts, e).map(|g| io::sinksource_json(m, &g)))
        .collect::<mckay3d::Result<Vec<_>>>()
        .map_err(library)?;
    Ok(match format {
        Format::Table => {
            let mut s = String::new();
            for g in &graphs {
                let types: Vec<String> = g.types.iter().map(|t| format!("{}:{}", t.chi, t.vertex_type)).collect();
                let _ = writeln!(s, "{:<5} {:<40} {}", g.divisor, g.summary, types.join(" "));
            }
            s
        }
        _ => io::to_json_string(&graphs),
    })
}

fn cubes(a: &Analysis, format: Format, chars: &[Character], reduced: bool) -> String {
    let docs: Vec<io::CubeJson> = chars.iter().map(|&c| io::cube_json(&a.model, c, reduced)).collect();
    match format {
        Format::Table => {
            let mut s = String::new();
            for (d, &c) in docs.iter().zip(chars) {
                let _ = writeln!(s, "chi {}", d.chi);
                if reduced {
                    for arrow in &d.arrows {
                        let sign = if arrow.sign < 0 { "-" } else { "" };
                        let _ = writeln!(s, "  {} -> {} ({sign}{}): {}", arrow.from, arrow.to, arrow.axis, arrow.label);
                    }
                } else {
                    let cube = a.model.cube(c);
                    for arrow in &cube.arrows {
                        let _ = writeln!(
                            s,
                            "  {} -> {} ({}{}): {}",
                            mckay3d::quiver::corner_name(arrow.from),
                            mckay3d::quiver::corner_name(arrow.to),
                            if arrow.sign < 0 { "-" } else { "" },
                            mckay3d::quiver::AXIS_NAMES[arrow.axis],
                            arrow.divisor
                        );
                    }
                }
            }
            s
        }
        _ => io::to_json_string(&docs),
    }
}

fn derived_results(a: &Analysis, chars: &[Character]) -> Result<Vec<TransformResult>, Failure> {
    let m = &a.model;
    chars
        .par_iter()
        .map(|&c| cross_check(m, &a.roles[c.index()], c))
        .collect::<mckay3d::Result<Vec<_>>>()
        .map_err(library)
}

fn sheaf_text(d: &mckay3d::derived::SheafDescriptor) -> String {
    let mut support: Vec<String> = d.support.divisors.iter().map(|&i| prime_name(i)).collect();
    support.extend(d.support.curves.iter().map(|c| format!("C({}∩{})", prime_name(c[0]), prime_name(c[1]))));
    let twist = if d.twist.is_zero() { String::new() } else { format!("({})", d.twist) };
    let extra = match &d.special {
        Some(Special::Champions(c)) => format!(" [cokernel {}]", io::s3_sheaf_name(c.s3_sheaf)),
        Some(Special::Dualizing { curve_degrees, .. }) if !curve_degrees.is_empty() => {
            let degs: Vec<String> =
                curve_degrees.iter().map(|(c, k)| format!("{}∩{}:{k}", prime_name(c[0]), prime_name(c[1]))).collect();
            format!(" [degrees {}]", degs.join(" "))
        }
        _ => String::new(),
    };
    format!("L^-1{twist} ⊗ O_{{{}}}{extra}", support.join(","))
}

fn derived(a: &Analysis, format: Format, chars: &[Character]) -> Result<String, Failure> {
    let results = derived_results(a, chars)?;
    Ok(match format {
        Format::Table => {
            let mut s = String::new();
            for r in &results {
                let cells: Vec<String> =
                    io::DEGREES.iter().map(|&d| r.degree(d).map_or("0".to_string(), sheaf_text)).collect();
                let _ =
                    writeln!(s, "chi {:<3} | {} | {} | {}", a.model.group.label(r.chi), cells[0], cells[1], cells[2]);
            }
            s
        }
        _ => {
            let docs: Vec<io::DerivedJson> = results.iter().map(|r| io::derived_json(&a.model, r)).collect();
            io::to_json_string(&docs)
        }
    })
}

fn report_json(r: &CheckReport) -> serde_json::Value {
    let groups: Vec<serde_json::Value> = r
        .groups
        .iter()
        .map(|g| json!({"module": g.module, "name": g.name, "passed": g.passed, "failed": g.failed, "failures": g.failures}))
        .collect();
    json!({"group": r.group, "passed": r.passed(), "groups": groups})
}

fn report_table(r: &CheckReport, out: &mut String) {
    for g in &r.groups {
        let status = if g.failed == 0 { "ok  " } else { "FAIL" };
        let _ = writeln!(out, "{status} {:<17} {:<32} {:>8} passed {:>6} failed", g.module, g.name, g.passed, g.failed);
        for f in &g.failures {
            let _ = writeln!(out, "       {f}");
        }
    }
}

fn check(a: &Analysis, format: Format, fixture: Option<&PathBuf>) -> Result<(String, u8), Failure> {
    let report = run_checks(a);
    let mut code = if report.passed() { 0 } else { EXIT_INVARIANT };
    let mut fixture_doc = serde_json::Value::Null;
    let mut fixture_text = String::new();
    if let Some(path) = fixture {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
        let f = GoldenFixture::load(&text).map_err(|e| usage(anyhow!("{}: {e}", path.display())))?;
        let chars: Vec<Character> = a.model.group.characters().collect();
        let results = derived_results(a, &chars)?;
        let mismatches = f.compare(a, &results);
        let own = f.self_consistency(&a.model);
        if code == 0 && !(mismatches.is_empty() && own.is_empty()) {
            code = EXIT_FIXTURE;
        }
        for m in mismatches.iter().chain(&own) {
            let _ = writeln!(fixture_text, "FAIL fixture {}: expected {}, got {}", m.path, m.expected, m.actual);
        }
        if mismatches.is_empty() && own.is_empty() {
            let _ = writeln!(fixture_text, "ok   fixture {}", path.display());
        }
        fixture_doc = json!({"path": path.display().to_string(), "mismatches": mismatches, "self_consistency": own});
    }
    let text = match format {
        Format::Json => {
            let mut doc = report_json(&report);
            doc["fixture"] = fixture_doc;
            doc["exit"] = json!(code);
            io::to_json_string(&doc)
        }
        _ => {
            let mut s = format!("check {}\n", report.group);
            report_table(&report, &mut s);
            s.push_str(&fixture_text);
            s
        }
    };
    Ok((text, code))
}

fn sweep(cli: &Cli, format: Format, max_r: u32, seed: usize) -> Result<u8, Failure> {
    let groups = mckay3d::sweep::cyclic_groups(max_r);
    let results: Vec<Result<CheckReport, String>> = groups
        .par_iter()
        .map(|spec| Analysis::new(spec, seed).map(|a| run_checks(&a)).map_err(|e| format!("{spec}: {e}")))
        .collect();
    let errors: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    let reports: Vec<&CheckReport> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
    let failed = !errors.is_empty() || reports.iter().any(|r| !r.passed());
    let text = match format {
        Format::Json => io::to_json_string(&json!({
            "groups": groups.len(),
            "errors": errors,
            "reports": reports.iter().map(|r| report_json(r)).collect::<Vec<_>>(),
        })),
        _ => {
            let mut totals: Vec<mckay3d::check::CheckGroup> = Vec::new();
            for r in &reports {
                for g in &r.groups {
                    match totals.iter_mut().find(|t| t.name == g.name) {
                        Some(t) => {
                            t.passed += g.passed;
                            t.failed += g.failed;
                            t.failures.extend(g.failures.iter().map(|f| format!("{}: {f}", r.group)));
                            t.failures.truncate(5);
                        }
                        None => {
                            let mut t = g.clone();
                            t.failures = g.failures.iter().map(|f| format!("{}: {f}", r.group)).collect();
                            totals.push(t);
                        }
                    }
                }
            }
            let mut s = format!("sweep over {} groups with r <= {max_r}\n", groups.len());
            report_table(&CheckReport { group: String::new(), groups: totals }, &mut s);
            for e in &errors {
                let _ = writeln!(s, "FAIL {e}");
            }
            s
        }
    };
    emit(cli, &text)?;
    Ok(if failed { EXIT_INVARIANT } else { 0 })
}
