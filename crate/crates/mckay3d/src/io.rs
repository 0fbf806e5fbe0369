//! JSON documents for every computed object. Keys are emitted in sorted order, so
//! identical inputs give identical bytes, and every document parses back.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analysis::Analysis;
use crate::ct::{CtSubdivision, Degeneration, SinkSourceGraph, AXES};
use crate::derived::{DualizingComponent, S3Sheaf, SheafDescriptor, Special, StratumSet, TransformResult};
use crate::divisor::{parse_prime, prime_name, DivisorSum};
use crate::error::{Error, Result};
use crate::fan::{DivisorKind, Surface};
use crate::group::{Character, GroupData};
use crate::quiver::{corner_name, Model, CORNER_ORDER};
use crate::recipe::RecipeRole;

/// Serializes with sorted keys and a trailing newline.
pub fn to_json_string<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("documents serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
    s.push('\n');
    s
}

pub fn from_json_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse { pos: e.column(), msg: format!("line {}: {e}", e.line()) })
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub prime: String,
    pub mult: i64,
}

pub fn terms(d: &DivisorSum) -> Vec<Term> {
    d.terms().into_iter().map(|(prime, mult)| Term { prime, mult }).collect()
}

pub fn divisor_from_terms(terms: &[Term], primes: usize) -> Result<DivisorSum> {
    let mut d = DivisorSum::zero(primes);
    for t in terms {
        let id = parse_prime(&t.prime)
            .filter(|&id| id < primes)
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown prime divisor `{}`", t.prime) })?;
        d.set(id, d.get(id) + t.mult);
    }
    Ok(d)
}

fn names(ids: impl IntoIterator<Item = usize>) -> Vec<String> {
    ids.into_iter().map(prime_name).collect()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GroupJson {
    pub spec: String,
    pub order: usize,
    pub generators: Vec<String>,
    /// Characters of `x`, `y`, `z`.
    pub kappa: BTreeMap<String, String>,
}

pub fn group_json(g: &GroupData) -> GroupJson {
    GroupJson {
        spec: g.spec.to_string(),
        order: g.order(),
        generators: g.spec.generators.iter().map(|x| x.to_string()).collect(),
        kappa: (0..3).map(|i| (AXES[i].to_string(), g.label(g.kappa(i)))).collect(),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PointJson {
    pub id: usize,
    pub name: String,
    /// Coordinates `num / den` in lowest terms.
    pub num: [i64; 3],
    pub den: i64,
    pub kind: String,
    pub surface: Option<String>,
    pub valence: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RatioJson {
    pub m1: String,
    pub m2: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct EdgeJson {
    pub v: [usize; 2],
    pub ratio: RatioJson,
    pub chi: String,
    pub interior: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ZeroFibreJson {
    pub z2: Vec<String>,
    pub z1: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct TriangulationJson {
    pub group: GroupJson,
    pub points: Vec<PointJson>,
    pub triangles: Vec<[usize; 3]>,
    pub edges: Vec<EdgeJson>,
    pub zero_fibre: ZeroFibreJson,
}

pub fn kind_name(k: DivisorKind) -> &'static str {
    match k {
        DivisorKind::CornerStrictTransform => "corner",
        DivisorKind::SideNonCompact => "side",
        DivisorKind::InteriorCompact => "interior",
    }
}

pub fn surface_name(s: Surface) -> String {
    match s {
        Surface::P2 => "P2".into(),
        Surface::ScrollBlownUp(k) => format!("scroll-blown-up-{k}"),
        Surface::DelPezzo6 => "dP6".into(),
    }
}

pub fn zero_fibre_json(model: &Model) -> ZeroFibreJson {
    let (z2, z1) = model.fan.zero_fibre();
    ZeroFibreJson { z2: names(z2), z1: z1.into_iter().map(|c| c.map(prime_name)).collect() }
}

pub fn triangulation_json(model: &Model) -> Result<TriangulationJson> {
    let fan = &model.fan;
    let g = &model.group;
    let points = (0..fan.points.len())
        .map(|id| {
            let pd = fan.classify_vertex(id)?;
            let (num, den) = fan.points[id].reduced();
            Ok(PointJson {
                id,
                name: prime_name(id),
                num,
                den,
                kind: kind_name(pd.kind).into(),
                surface: pd.surface.map(surface_name),
                valence: pd.valence,
            })
        })
        .collect::<Result<_>>()?;
    let edges = fan
        .edges
        .iter()
        .map(|e| EdgeJson {
            v: e.v,
            ratio: RatioJson { m1: e.m1.to_string(), m2: e.m2.to_string() },
            chi: g.label(e.chi),
            interior: e.interior,
        })
        .collect();
    Ok(TriangulationJson {
        group: group_json(g),
        points,
        triangles: fan.triangles.iter().map(|t| t.v).collect(),
        edges,
        zero_fibre: zero_fibre_json(model),
    })
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct EdgeMarkJson {
    pub v: [String; 2],
    pub chi: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct VertexMarkJson {
    pub id: String,
    pub chis: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RoleJson {
    pub chi: String,
    pub variant: String,
    pub data: Value,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct MarkingJson {
    pub group: String,
    pub edges: Vec<EdgeMarkJson>,
    pub vertices: Vec<VertexMarkJson>,
    pub roles: Vec<RoleJson>,
}

pub fn role_data(role: &RecipeRole) -> Value {
    match role {
        RecipeRole::Trivial => Value::Null,
        RecipeRole::SingleVertex { vertex } => json!({ "vertex": prime_name(*vertex) }),
        RecipeRole::SingleChain { axis, path } | RecipeRole::LongSide { axis, path } => {
            json!({ "axis": AXES[*axis], "path": names(path.iter().copied()) })
        }
        RecipeRole::MeetingOfChampions { centre, branches, exponents } => json!({
            "centre": prime_name(*centre),
            "branches": branches.iter().map(|b| names(b.iter().copied())).collect::<Vec<_>>(),
            "exponents": exponents,
        }),
    }
}

pub fn marking_json(a: &Analysis) -> MarkingJson {
    let g = &a.model.group;
    let fan = &a.model.fan;
    let edges = fan
        .edges
        .iter()
        .filter_map(|e| a.marking.edge_mark(e.v[0], e.v[1]).map(|c| (e.v, c)))
        .map(|(v, c)| EdgeMarkJson { v: v.map(prime_name), chi: g.label(c) })
        .collect();
    let vertices = (0..fan.points.len())
        .filter(|&v| !a.marking.vertex_marks(v).is_empty())
        .map(|v| VertexMarkJson {
            id: prime_name(v),
            chis: a.marking.vertex_marks(v).iter().map(|&c| g.label(c)).collect(),
        })
        .collect();
    let roles = g
        .characters()
        .map(|chi| {
            let r = &a.roles[chi.index()];
            RoleJson { chi: g.label(chi), variant: r.variant_name().into(), data: role_data(r) }
        })
        .collect();
    MarkingJson { group: g.spec.to_string(), edges, vertices, roles }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ArrowJson {
    pub from: String,
    pub to: String,
    pub axis: String,
    pub sign: i8,
    /// Support in the style `E_{x45}`.
    pub label: String,
    pub divisor: Vec<Term>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CubeJson {
    pub chi: String,
    pub corners: BTreeMap<String, String>,
    pub arrows: Vec<ArrowJson>,
}

/// The cube of `χ`; with `reduced`, divisors are replaced by their supports.
pub fn cube_json(model: &Model, chi: Character, reduced: bool) -> CubeJson {
    let g = &model.group;
    let cube = model.cube(chi);
    let corners = CORNER_ORDER.iter().map(|&s| (corner_name(s), g.label(cube.corners[s as usize]))).collect();
    let arrows = cube
        .arrows
        .iter()
        .map(|a| {
            let d = if reduced { DivisorSum::reduced(a.divisor.len(), a.divisor.support()) } else { a.divisor.clone() };
            ArrowJson {
                from: corner_name(a.from),
                to: corner_name(a.to),
                axis: AXES[a.axis].into(),
                sign: a.sign,
                label: a.divisor.support_label(),
                divisor: terms(&d),
            }
        })
        .collect();
    CubeJson { chi: g.label(chi), corners, arrows }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct AreaJson {
    pub triangle: [usize; 3],
    pub area: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct DegenerationJson {
    pub area: String,
    pub kind: String,
    pub vertices: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CtJson {
    pub chi: String,
    pub areas: Vec<AreaJson>,
    pub degenerations: Vec<DegenerationJson>,
}

pub fn ct_json(model: &Model, ct: &CtSubdivision) -> CtJson {
    let areas = model
        .fan
        .triangles
        .iter()
        .zip(&ct.areas)
        .map(|(t, a)| AreaJson { triangle: t.v, area: a.to_string() })
        .collect();
    let degenerations = (0..3)
        .filter_map(|k| ct.degenerations[k].as_ref().map(|d| (k, d)))
        .map(|(k, d)| {
            let (kind, vertices) = match d {
                Degeneration::Vertex(v) => ("vertex", vec![*v]),
                Degeneration::Segment(vs) => ("segment", vs.clone()),
            };
            DegenerationJson { area: crate::ct::Area::T(k).to_string(), kind: kind.into(), vertices: names(vertices) }
        })
        .collect();
    CtJson { chi: model.group.label(ct.chi), areas, degenerations }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct VertexTypeJson {
    pub chi: String,
    #[serde(rename = "type")]
    pub vertex_type: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct SinkSourceJson {
    pub divisor: String,
    pub types: Vec<VertexTypeJson>,
    pub summary: String,
}

pub fn sinksource_json(model: &Model, ss: &SinkSourceGraph) -> SinkSourceJson {
    let g = &model.group;
    let types = g
        .characters()
        .map(|psi| VertexTypeJson { chi: g.label(psi), vertex_type: ss.types[psi.index()].to_string() })
        .collect();
    SinkSourceJson { divisor: prime_name(ss.divisor), types, summary: ss.summary.to_string() }
}

#[derive(Serialize, Deserialize, Clone, Debug, Default, PartialEq, Eq)]
pub struct SupportJson {
    pub divisors: Vec<String>,
    pub curves: Vec<[String; 2]>,
    pub points: Vec<[String; 3]>,
}

pub fn support_json(s: &StratumSet) -> SupportJson {
    SupportJson {
        divisors: names(s.divisors.iter().copied()),
        curves: s.curves.iter().map(|c| c.map(prime_name)).collect(),
        points: s.points.iter().map(|t| t.map(prime_name)).collect(),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CurveDegreeJson {
    pub curve: [String; 2],
    pub degree: i64,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecialJson {
    ChampionsCokernel {
        centre: String,
        chains: Vec<Vec<String>>,
        rank_one: Vec<String>,
        rank_two: SupportJson,
        rank_two_sheaf: String,
    },
    Dualizing {
        component: String,
        curve_degrees: Vec<CurveDegreeJson>,
    },
}

pub fn s3_sheaf_name(s: S3Sheaf) -> String {
    match s {
        S3Sheaf::Free => "O+O".into(),
        S3Sheaf::OneTwist(a) => format!("O({})+O", prime_name(a)),
        S3Sheaf::TwoTwists([a, b]) => format!("O({})+O({})", prime_name(a), prime_name(b)),
        S3Sheaf::TangentP2 => "T_P2".into(),
    }
}

fn special_json(s: &Special) -> SpecialJson {
    match s {
        Special::Champions(c) => SpecialJson::ChampionsCokernel {
            centre: prime_name(c.centre),
            chains: c.chains.iter().map(|z| names(z.iter().copied())).collect(),
            rank_one: names(c.s2.iter().copied()),
            rank_two: support_json(&c.s3),
            rank_two_sheaf: s3_sheaf_name(c.s3_sheaf),
        },
        Special::Dualizing { component, curve_degrees } => SpecialJson::Dualizing {
            component: match component {
                DualizingComponent::Surfaces => "omega_Z2".into(),
                DualizingComponent::Curves => "omega_Z1(Z2)".into(),
            },
            curve_degrees: curve_degrees
                .iter()
                .map(|(c, d)| CurveDegreeJson { curve: c.map(prime_name), degree: *d })
                .collect(),
        },
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct DescriptorJson {
    pub twist_base: String,
    pub twist_divisor: Vec<Term>,
    pub support: SupportJson,
    pub special: Option<SpecialJson>,
}

pub fn descriptor_json(d: &SheafDescriptor) -> DescriptorJson {
    DescriptorJson {
        twist_base: "Linv".into(),
        twist_divisor: terms(&d.twist),
        support: support_json(&d.support),
        special: d.special.as_ref().map(special_json),
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct DerivedJson {
    pub chi: String,
    /// Keyed by degree `"-2"`, `"-1"`, `"0"`; `null` where the sheaf vanishes.
    #[serde(rename = "H")]
    pub h: BTreeMap<String, Option<DescriptorJson>>,
    pub provenance: String,
}

pub const DEGREES: [i8; 3] = [-2, -1, 0];

pub fn derived_json(model: &Model, r: &TransformResult) -> DerivedJson {
    let h = DEGREES.iter().map(|&d| (d.to_string(), r.degree(d).map(descriptor_json))).collect();
    DerivedJson { chi: model.group.label(r.chi), h, provenance: format!("{:?}", r.provenance) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::derived_table;

    fn analysis(s: &str) -> Analysis {
        Analysis::new(&s.parse().unwrap(), 0).unwrap()
    }

    fn round_trip<T: Serialize + for<'de> Deserialize<'de> + PartialEq + std::fmt::Debug>(v: &T) {
        let s = to_json_string(v);
        let back: T = from_json_str(&s).unwrap();
        assert_eq!(&back, v);
        assert_eq!(to_json_string(&back), s);
    }

    #[test]
    fn documents_round_trip() {
        let a = analysis("1/15:1,5,9");
        let m = &a.model;
        round_trip(&triangulation_json(m).unwrap());
        round_trip(&marking_json(&a));
        for chi in m.group.characters() {
            round_trip(&cube_json(m, chi, false));
            round_trip(&cube_json(m, chi, true));
            if let Some(ct) = &a.cts[chi.index()] {
                round_trip(&ct_json(m, ct));
            }
        }
        for r in derived_table(m, &a.roles).unwrap() {
            round_trip(&derived_json(m, &r));
        }
    }

    #[test]
    fn keys_are_sorted() {
        let a = analysis("1/3:1,1,1");
        let s = to_json_string(&cube_json(&a.model, a.model.group.trivial(), true));
        let arrows = s.find("\"arrows\"").unwrap();
        let chi = s.find("\"chi\"").unwrap();
        let corners = s.find("\"corners\"").unwrap();
        assert!(arrows < chi && chi < corners);
    }

    #[test]
    fn divisor_terms_round_trip() {
        let d = DivisorSum::from_mults(vec![1, 0, -2, 0, 3]);
        assert_eq!(divisor_from_terms(&terms(&d), 5).unwrap(), d);
        assert!(divisor_from_terms(&[Term { prime: "E_9".into(), mult: 1 }], 5).is_err());
    }

    #[test]
    fn worked_example_point_coordinates() {
        let a = analysis("1/15:1,5,9");
        let t = triangulation_json(&a.model).unwrap();
        let e5 = t.points.iter().find(|p| p.name == "E_5").unwrap();
        assert_eq!((e5.num, e5.den), ([2, 10, 3], 15));
        assert_eq!(t.triangles.len(), 15);
        assert_eq!(t.zero_fibre.z1, vec![["E_12".to_string(), "E_13".to_string()]]);
    }
}
