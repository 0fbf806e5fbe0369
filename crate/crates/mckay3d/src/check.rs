//! The invariant suite: every structural property of the computation, grouped by
//! name with per-group pass and fail counts.

use num_rational::Ratio;

use crate::analysis::Analysis;
use crate::ct::{area_pattern, nonvanishing_path, sink_source_graph, vertex_type, Area, ALL_AREAS};
use crate::derived::{
    check_single_sheaf, cross_check, cube_cohomology, final_divisors, plain_quotient_divisors, trivial_curve_degrees,
    xyz_path_identity, S3Sheaf, Special, CYCLIC_PAIRS,
};
use crate::fan::WeightTable;
use crate::group::Monomial;
use crate::io;
use crate::recipe::RecipeRole;

/// Failures kept per group for the report.
const KEPT_FAILURES: usize = 5;

/// Every check group as `(module, name)`, in report order.
pub const GROUPS: &[(&str, &str)] = &[
    ("group-core", "pairing-integral"),
    ("group-core", "weight-homomorphism"),
    ("group-core", "junior-points"),
    ("ghilb-fan", "tiling"),
    ("ghilb-fan", "basic-cones"),
    ("ghilb-fan", "crepancy"),
    ("ghilb-fan", "chart-minimality"),
    ("ghilb-fan", "adjacency"),
    ("ghilb-fan", "side-vertex-stars"),
    ("quiver-bundles", "number-of-diamonds"),
    ("quiver-bundles", "reduced-multiplicities"),
    ("quiver-bundles", "cube-paths"),
    ("quiver-bundles", "vertex-marks-in-final-divisors"),
    ("quiver-bundles", "socle-support"),
    ("recipe-classical", "role-totality"),
    ("recipe-classical", "marking-coverage"),
    ("recipe-classical", "marked-edges-on-ct-borders"),
    ("recipe-classical", "socle-marks"),
    ("ct-sinksource", "ct-path-equivalence"),
    ("ct-sinksource", "vertex-type-table"),
    ("ct-sinksource", "vertex-type-patterns"),
    ("ct-sinksource", "type-diamond-counts"),
    ("ct-sinksource", "sink-source-shapes"),
    ("derived-recipe", "xyz-identity"),
    ("derived-recipe", "cube-cohomology"),
    ("derived-recipe", "single-sheaf"),
    ("derived-recipe", "h-minus-two-vanishes"),
    ("derived-recipe", "ct-final-divisors"),
    ("derived-recipe", "ct-gcd-divisors"),
    ("derived-recipe", "ct-quotient-divisors"),
    ("derived-recipe", "cross-check"),
    ("derived-recipe", "champions-stratification"),
    ("derived-recipe", "curve-degrees"),
    ("cli-io", "json-round-trip"),
    ("cli-io", "determinism"),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckGroup {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// The first few failure details.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub group: String,
    pub groups: Vec<CheckGroup>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.groups.iter().all(|g| g.failed == 0)
    }

    pub fn get(&self, name: &str) -> Option<&CheckGroup> {
        self.groups.iter().find(|g| g.name == name)
    }
}

struct Recorder {
    groups: Vec<CheckGroup>,
}

impl Default for Recorder {
    fn default() -> Self {
        let groups = GROUPS
            .iter()
            .map(|&(module, name)| CheckGroup { module, name, passed: 0, failed: 0, failures: Vec::new() })
            .collect();
        Recorder { groups }
    }
}

impl Recorder {
    fn record(&mut self, module: &'static str, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        let g = self
            .groups
            .iter_mut()
            .find(|g| g.module == module && g.name == name)
            .unwrap_or_else(|| panic!("check group {module}/{name} is not declared"));
        if ok {
            g.passed += 1;
        } else {
            g.failed += 1;
            if g.failures.len() < KEPT_FAILURES {
                g.failures.push(detail());
            }
        }
    }

    fn result<T>(&mut self, module: &'static str, name: &'static str, r: crate::Result<T>) -> Option<T> {
        match r {
            Ok(v) => {
                self.record(module, name, true, String::new);
                Some(v)
            }
            Err(e) => {
                self.record(module, name, false, || e.to_string());
                None
            }
        }
    }
}

fn det3(a: [[i64; 3]; 3]) -> i64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn run_checks(a: &Analysis) -> CheckReport {
    let mut r = Recorder::default();
    group_core(a, &mut r);
    ghilb_fan(a, &mut r);
    quiver_bundles(a, &mut r);
    recipe_classical(a, &mut r);
    ct_sinksource(a, &mut r);
    derived_recipe(a, &mut r);
    cli_io(a, &mut r);
    CheckReport { group: a.model.group.spec.to_string(), groups: r.groups }
}

fn group_core(a: &Analysis, r: &mut Recorder) {
    const M: &str = "group-core";
    let g = &a.model.group;
    let pts = &a.model.fan.points;
    let n = g.order() as i64;
    for p in pts {
        for m in g.lattice_m() {
            let s: i64 = (0..3).map(|i| p.num[i] * m[i]).sum();
            r.record(M, "pairing-integral", s % n == 0, || format!("<{p}, {m:?}> is not an integer"));
        }
    }
    for m in g.lattice_m() {
        r.record(M, "weight-homomorphism", g.in_m(&Monomial(m)), || format!("{m:?} spans M but has nonzero weight"));
    }
    for chi in g.characters() {
        let ok = g.weight(&g.canonical_monomial(chi)) == chi;
        r.record(M, "weight-homomorphism", ok, || format!("{} is not hit by its canonical monomial", g.label(chi)));
    }
    for i in 0..3 {
        for j in 0..3 {
            let sum = Monomial::var(i) + Monomial::var(j);
            let ok = g.weight(&sum) == g.mul(g.weight(&Monomial::var(i)), g.weight(&Monomial::var(j)));
            r.record(M, "weight-homomorphism", ok, || format!("weight is not additive on x{i}, x{j}"));
        }
    }
    let ok = *pts == g.junior_points() && pts.iter().all(|p| p.num.iter().all(|&c| (0..=n).contains(&c)) && p.den == n);
    r.record(M, "junior-points", ok, || "fan vertices differ from L ∩ Δ".into());
}

/// The two side-vertex stars: valence 3 with ratios `w^c:1` (twice) and `u^a:v^b`,
/// or valence 4 with `w^c:1` (twice), `u^a:v^b w^s` and `v^b:u^a w^t`, `s + t = c`.
fn side_star_ok(a: &Analysis, v: usize) -> bool {
    let fan = &a.model.fan;
    let Some(w) = fan.points[v].distinguished_axis() else { return false };
    let (u, x) = ((w + 1) % 3, (w + 2) % 3);
    let edges: Vec<_> = fan.neighbors(v).iter().map(|&n| fan.edge(v, n).expect("neighbour edge")).collect();
    let pure = |m: &Monomial, axis: usize| m.0[axis] > 0 && m.support_size() == 1;
    let boundary: Vec<i64> = edges
        .iter()
        .filter(|e| !e.interior)
        .filter_map(|e| match (e.m1 == Monomial::ONE, e.m2 == Monomial::ONE) {
            (true, false) if pure(&e.m2, w) => Some(e.m2.0[w]),
            (false, true) if pure(&e.m1, w) => Some(e.m1.0[w]),
            _ => None,
        })
        .collect();
    let c = match boundary[..] {
        [c1, c2] if c1 == c2 && edges.iter().filter(|e| !e.interior).count() == 2 => c1,
        _ => return false,
    };
    let inner: Vec<[Monomial; 2]> = edges.iter().filter(|e| e.interior).map(|e| [e.m1, e.m2]).collect();
    // Orient each ratio as (monomial containing u, monomial containing x).
    let orient = |[m1, m2]: [Monomial; 2]| if m1.0[u] > 0 { (m1, m2) } else { (m2, m1) };
    match inner[..] {
        [ratio] => {
            let (p, q) = orient(ratio);
            pure(&p, u) && pure(&q, x)
        }
        [r1, r2] => {
            let (p1, q1) = orient(r1);
            let (p2, q2) = orient(r2);
            let shape = |p: Monomial, q: Monomial, pure_u: bool| {
                let (pw, qw) = (p.0[w], q.0[w]);
                p.0[x] == 0 && q.0[u] == 0 && if pure_u { pw == 0 && qw > 0 } else { qw == 0 && pw > 0 }
            };
            let matched = |a: (Monomial, Monomial), b: (Monomial, Monomial)| {
                shape(a.0, a.1, true)
                    && shape(b.0, b.1, false)
                    && a.0 .0[u] == b.0 .0[u]
                    && a.1 .0[x] == b.1 .0[x]
                    && a.1 .0[w] + b.0 .0[w] == c
            };
            matched((p1, q1), (p2, q2)) || matched((p2, q2), (p1, q1))
        }
        _ => false,
    }
}

fn ghilb_fan(a: &Analysis, r: &mut Recorder) {
    const M: &str = "ghilb-fan";
    let g = &a.model.group;
    let fan = &a.model.fan;
    let n = g.order() as i64;
    let total: Ratio<i64> = fan
        .triangles
        .iter()
        .map(|t| {
            let (p, q) = fan.triangle_area(t);
            Ratio::new(p, q)
        })
        .sum();
    r.record(M, "tiling", total == Ratio::from_integer(1), || format!("triangle areas sum to {total}"));
    for (id, e) in fan.edges.iter().enumerate() {
        let tris = fan.triangles_of_edge(id);
        let ok = if e.interior {
            tris.len() == 2 && {
                let side = |t: usize| {
                    let apex = fan.triangles[t].v.into_iter().find(|x| !e.v.contains(x)).expect("apex");
                    det3([fan.points[e.v[0]].num, fan.points[e.v[1]].num, fan.points[apex].num]).signum()
                };
                side(tris[0]) == -side(tris[1])
            }
        } else {
            tris.len() == 1
        };
        r.record(M, "tiling", ok, || format!("edge {:?} has a bad neighbourhood", e.v));
    }
    for t in &fan.triangles {
        let d = det3(t.v.map(|i| fan.points[i].num)).abs();
        r.record(M, "basic-cones", d == n * n, || format!("triangle {:?} has index {d}/{}", t.v, n * n));
    }
    for v in 0..fan.points.len() {
        r.record(M, "crepancy", !fan.triangles_of_vertex(v).is_empty(), || format!("{} is unused", fan.points[v]));
    }
    let table = WeightTable::new(g);
    for t in &fan.triangles {
        r.result(M, "chart-minimality", t.ggraph.validate(g));
        for &e in &t.v {
            let p = &fan.points[e];
            for chi in g.characters() {
                let best = table.candidates(chi).iter().map(|m| p.pair_scaled(m)).min();
                let ok = best == Some(p.pair_scaled(&t.ggraph.rep(chi)));
                r.record(M, "chart-minimality", ok, || format!("{} is not minimal at {p} in {:?}", g.label(chi), t.v));
            }
        }
    }
    for v in 0..fan.points.len() {
        for &w in fan.neighbors(v) {
            let ok = fan.neighbors(w).contains(&v) && fan.edge(v, w).is_some();
            r.record(M, "adjacency", ok, || format!("{v} and {w} are not symmetric neighbours"));
        }
    }
    for v in (0..fan.points.len()).filter(|&v| fan.points[v].is_side()) {
        r.record(M, "side-vertex-stars", side_star_ok(a, v), || format!("star of {}", fan.points[v]));
    }
}

fn quiver_bundles(a: &Analysis, r: &mut Recorder) {
    const M: &str = "quiver-bundles";
    let m = &a.model;
    let g = &m.group;
    let fan = &m.fan;
    for (e, p) in fan.points.iter().enumerate() {
        let counts: [i64; 3] =
            std::array::from_fn(|i| g.characters().filter(|&chi| m.dual_arrow(chi, i).get(e) > 0).count() as i64);
        r.record(M, "number-of-diamonds", counts == p.num, || format!("{p}: counts {counts:?}"));
    }
    for chi in g.characters() {
        let cube = m.cube(chi);
        let reduced = cube.arrows.iter().all(|x| x.divisor.is_reduced());
        r.record(M, "reduced-multiplicities", reduced, || format!("cube of {} has a multiple arrow", g.label(chi)));
        r.result(M, "cube-paths", cube.validate());
        let finals = final_divisors(&cube);
        for e in 0..fan.points.len() {
            let marks = a.marking.vertex_marks(e).contains(&chi);
            let inside = finals.iter().all(|d| d.contains(e));
            r.record(M, "vertex-marks-in-final-divisors", marks == inside, || {
                format!("{} at {}: marked {marks}, in D1 D2 D3 {inside}", g.label(chi), fan.points[e])
            });
        }
        for (ti, t) in fan.triangles.iter().enumerate() {
            let socle = m.socle(ti).contains(&chi);
            let fixed = finals.iter().all(|d| t.v.iter().any(|&v| d.contains(v)));
            r.record(M, "socle-support", socle == fixed, || format!("{} at triangle {:?}", g.label(chi), t.v));
        }
    }
}

fn recipe_classical(a: &Analysis, r: &mut Recorder) {
    const M: &str = "recipe-classical";
    let m = &a.model;
    let g = &m.group;
    let fan = &m.fan;
    r.record(M, "role-totality", a.roles.len() == g.order(), || "roles do not cover the characters".into());
    for chi in g.characters() {
        let trivial = chi == g.trivial();
        let ok = trivial == matches!(a.roles[chi.index()], RecipeRole::Trivial);
        r.record(M, "role-totality", ok, || format!("{} has role {:?}", g.label(chi), a.roles[chi.index()]));
    }
    for v in (0..fan.points.len()).filter(|&v| fan.points[v].is_interior()) {
        let ok = !a.marking.vertex_marks(v).is_empty();
        r.record(M, "marking-coverage", ok, || format!("interior vertex {} is unmarked", fan.points[v]));
    }
    for e in &fan.edges {
        let ok = a.marking.edge_mark(e.v[0], e.v[1]).is_some() == e.interior;
        r.record(M, "marking-coverage", ok, || format!("edge {:?}", e.v));
    }
    for e in &fan.edges {
        let Some(chi) = a.marking.edge_mark(e.v[0], e.v[1]) else { continue };
        let ct = a.cts[chi.index()].as_ref().expect("marking characters are nontrivial");
        let id = fan.edge_id(e.v[0], e.v[1]).expect("edge id");
        let areas: Vec<Area> = fan.triangles_of_edge(id).iter().map(|&t| ct.areas[t]).collect();
        let ok = match areas[..] {
            [Area::C(i), Area::C(j)] if i == j => {
                (0..3).any(|k| ct.is_empty(Area::T(k)) && e.v.iter().all(|&v| ct.contains(Area::T(k), v)))
            }
            [Area::C(i), Area::C(_)] => i < 3,
            [Area::C(i), Area::T(k)] | [Area::T(k), Area::C(i)] => i == k,
            _ => false,
        };
        r.record(M, "marked-edges-on-ct-borders", ok, || format!("{} edge {:?} between {areas:?}", g.label(chi), e.v));
    }
    for (ti, t) in fan.triangles.iter().enumerate() {
        for chi in m.socle(ti).into_iter().filter(|&c| c != g.trivial()) {
            let mut faces: Vec<Vec<usize>> = Vec::new();
            for &v in &t.v {
                if a.marking.vertex_marks(v).contains(&chi) {
                    faces.push(vec![v]);
                }
            }
            for k in 0..3 {
                let (u, w) = (t.v[k], t.v[(k + 1) % 3]);
                if a.marking.edge_mark(u, w) == Some(chi) {
                    faces.push(vec![u, w]);
                }
            }
            let in_all_socles = |face: &Vec<usize>| {
                (0..fan.triangles.len())
                    .filter(|&s| face.iter().all(|v| fan.triangles[s].v.contains(v)))
                    .all(|s| m.socle(s).contains(&chi))
            };
            let ok = faces.iter().any(in_all_socles);
            r.record(M, "socle-marks", ok, || format!("{} in the socle of {:?}", g.label(chi), t.v));
        }
    }
}

fn ct_sinksource(a: &Analysis, r: &mut Recorder) {
    const M: &str = "ct-sinksource";
    let m = &a.model;
    let g = &m.group;
    let fan = &m.fan;
    for chi in g.characters().filter(|&c| c != g.trivial()) {
        let ct = a.cts[chi.index()].as_ref().expect("nontrivial");
        let psi = g.inv(chi);
        for e in 0..fan.points.len() {
            for area in ALL_AREAS {
                let ok = ct.contains(area, e) == nonvanishing_path(m, psi, e, area_pattern(area));
                r.record(M, "ct-path-equivalence", ok, || format!("{} {area} at {}", g.label(chi), fan.points[e]));
            }
        }
    }
    for e in 0..fan.points.len() {
        let mut counts = [0i64; 3];
        for chi in g.characters() {
            let Some(t) = r.result(M, "vertex-type-table", vertex_type(m, &a.cts, g.inv(chi), e)) else { continue };
            let pattern = t.cube_pattern();
            let ok = pattern == m.cube(chi).pattern_at(e);
            r.record(M, "vertex-type-patterns", ok, || format!("{} at {}: {t}", g.label(chi), fan.points[e]));
            for (i, c) in counts.iter_mut().enumerate() {
                *c += pattern[9 + i] as i64;
            }
        }
        let p = &fan.points[e];
        r.record(M, "type-diamond-counts", counts == p.num, || format!("{p}: counts {counts:?}"));
        r.result(M, "sink-source-shapes", sink_source_graph(m, &a.cts, e));
    }
}

fn derived_recipe(a: &Analysis, r: &mut Recorder) {
    const M: &str = "derived-recipe";
    let m = &a.model;
    let g = &m.group;
    let fan = &m.fan;
    for chi in g.characters() {
        let label = g.label(chi);
        let cube = m.cube(chi);
        r.record(M, "xyz-identity", xyz_path_identity(&cube), || label.clone());
        let Some(lemma) = r.result(M, "cube-cohomology", cube_cohomology(m, chi)) else { continue };
        if chi != g.trivial() {
            r.result(M, "single-sheaf", check_single_sheaf(m, chi, &lemma));
            r.record(M, "h-minus-two-vanishes", lemma.h_minus2.is_zero(), || label.clone());
            let ct = a.cts[chi.index()].as_ref().expect("nontrivial");
            let finals = final_divisors(&cube);
            for e in 0..fan.points.len() {
                let ok = (0..3).all(|i| finals[i].contains(e) == ct.contains(Area::T(i), e));
                r.record(M, "ct-final-divisors", ok, || format!("{label} at {}", fan.points[e]));
                for (v, u) in CYCLIC_PAIRS {
                    let k = 3 - v - u;
                    let (gcd, eff) = plain_quotient_divisors(&cube, (v, u));
                    let outside = !ct.contains(Area::T(v), e) && !ct.contains(Area::T(u), e);
                    let in_gcd = ct.contains(Area::C(k), e) && outside;
                    r.record(M, "ct-gcd-divisors", gcd.contains(e) == in_gcd, || {
                        format!("{label} pair ({v},{u}) at {}", fan.points[e])
                    });
                    let in_eff =
                        (ct.contains(Area::C(v), e) || ct.contains(Area::T(k), e) || ct.contains(Area::C(u), e))
                            && outside;
                    r.record(M, "ct-quotient-divisors", eff.contains(e) == in_eff, || {
                        format!("{label} pair ({v},{u}) at {}", fan.points[e])
                    });
                }
            }
        }
        let role = &a.roles[chi.index()];
        let Some(result) = r.result(M, "cross-check", cross_check(m, role, chi)) else { continue };
        if let RecipeRole::MeetingOfChampions { centre, branches, .. } = role {
            let Some(Special::Champions(c)) = result.descriptors.first().and_then(|d| d.special.as_ref()) else {
                r.record(M, "champions-stratification", false, || format!("{label}: no champions record"));
                continue;
            };
            let empty: Vec<usize> = (0..3).filter(|&k| branches[k].len() == 1).collect();
            let sheaf_ok = match (empty.len(), c.s3_sheaf) {
                (0, S3Sheaf::Free) => true,
                (1, S3Sheaf::OneTwist(x)) => x == empty[0],
                (2, S3Sheaf::TwoTwists(xy)) => xy[..] == empty[..],
                (3, S3Sheaf::TangentP2) => c.s3.divisors.len() == 1 && c.s3.curves.is_empty(),
                _ => false,
            };
            let s2_ok = c.s2.iter().all(|v| branches.iter().any(|b| b[..b.len() - 1].contains(v)))
                && !c.s2.contains(centre)
                && c.s3.divisors.contains(centre);
            r.record(M, "champions-stratification", sheaf_ok && s2_ok, || format!("{label}: {:?}", c.s3_sheaf));
        }
    }
    for (curve, d) in trivial_curve_degrees(fan) {
        r.record(M, "curve-degrees", d >= -2, || format!("curve {curve:?} has degree {d}"));
    }
}

fn round_trips<T>(v: &T) -> bool
where
    T: serde::Serialize + for<'de> serde::Deserialize<'de> + PartialEq,
{
    let s = io::to_json_string(v);
    io::from_json_str::<T>(&s).map(|back| back == *v && io::to_json_string(&back) == s).unwrap_or(false)
}

fn cli_io(a: &Analysis, r: &mut Recorder) {
    const M: &str = "cli-io";
    let m = &a.model;
    if let Some(t) = r.result(M, "json-round-trip", io::triangulation_json(m)) {
        r.record(M, "json-round-trip", round_trips(&t), || "triangulation".into());
        let again = io::triangulation_json(m).map(|u| io::to_json_string(&u) == io::to_json_string(&t));
        r.record(M, "determinism", again.unwrap_or(false), || "triangulation".into());
    }
    r.record(M, "json-round-trip", round_trips(&io::marking_json(a)), || "marking".into());
    for chi in m.group.characters() {
        r.record(M, "json-round-trip", round_trips(&io::cube_json(m, chi, false)), || "cube".into());
        if let Some(ct) = &a.cts[chi.index()] {
            r.record(M, "json-round-trip", round_trips(&io::ct_json(m, ct)), || "ct".into());
        }
        if let Ok(res) = cross_check(m, &a.roles[chi.index()], chi) {
            r.record(M, "json-round-trip", round_trips(&io::derived_json(m, &res)), || "derived".into());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples_pass_every_group() {
        for s in ["1/15:1,5,9", "1/3:1,1,1", "1/1:0,0,0", "1/7:1,2,4", "1/6:1,2,3", "gens=1/2:1,1,0;1/2:1,0,1"] {
            let a = Analysis::new(&s.parse().unwrap(), 0).unwrap();
            let report = run_checks(&a);
            for g in &report.groups {
                assert_eq!(g.failed, 0, "{s}: {} failed: {:?}", g.name, g.failures);
            }
        }
    }

    #[test]
    fn every_report_lists_every_group() {
        let a = Analysis::new(&"1/1:0,0,0".parse().unwrap(), 0).unwrap();
        let names: Vec<&str> = run_checks(&a).groups.iter().map(|g| g.name).collect();
        assert_eq!(names, GROUPS.iter().map(|g| g.1).collect::<Vec<_>>());
        let unique: std::collections::BTreeSet<&str> = names.iter().copied().collect();
        assert_eq!(unique.len(), names.len());
    }

    #[test]
    fn group_names_are_unique_per_module() {
        let a = Analysis::new(&"1/15:1,5,9".parse().unwrap(), 0).unwrap();
        let report = run_checks(&a);
        assert!(report.passed());
        for name in ["number-of-diamonds", "socle-marks", "ct-path-equivalence", "single-sheaf", "side-vertex-stars"] {
            assert!(report.get(name).is_some_and(|g| g.passed > 0), "{name}");
        }
    }
}
