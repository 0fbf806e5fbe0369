//! CT-subdivisions of `Δ`, vertex types of the sink-source graphs of the dual family
//! and the non-vanishing path search linking the two.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{invariant, Error, Result};
use crate::fan::{DivisorKind, Surface};
use crate::group::Character;
use crate::quiver::Model;
use crate::recipe::Marking;

pub const AXES: [&str; 3] = ["x", "y", "z"];

/// An area of a CT-subdivision. `C(k)`: the representative is a pure power of
/// `x_k`. `T(k)`: the representative involves exactly the two axes other than `k`,
/// so the area contains the corner `e_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Area {
    C(usize),
    T(usize),
}

impl fmt::Display for Area {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Area::C(k) => write!(f, "C{}", AXES[k]),
            Area::T(k) => write!(f, "T{}", ["yz", "xz", "xy"][k]),
        }
    }
}

/// Replacement geometry of an empty T-area.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneration {
    /// A thin strip along the listed vertices of the segment `l`.
    Segment(Vec<usize>),
    /// Just the corner.
    Vertex(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtSubdivision {
    pub chi: Character,
    /// Area of each triangle of `Σ`, in triangle order.
    pub areas: Vec<Area>,
    /// For `k` with `T(k)` empty, its degeneration.
    pub degenerations: [Option<Degeneration>; 3],
    /// Vertex sets of the nonempty areas, indexed by `[C(0..3), T(0..3)]`.
    members: [BTreeSet<usize>; 6],
}

fn slot(a: Area) -> usize {
    match a {
        Area::C(k) => k,
        Area::T(k) => 3 + k,
    }
}

/// All six areas in a fixed order.
pub const ALL_AREAS: [Area; 6] = [Area::C(0), Area::C(1), Area::C(2), Area::T(0), Area::T(1), Area::T(2)];

impl CtSubdivision {
    pub fn compute(model: &Model, marking: &Marking, chi: Character) -> Result<Self> {
        let g = &model.group;
        let fan = &model.fan;
        if chi == g.trivial() {
            return Err(Error::TrivialCharacter(g.label(chi)));
        }
        let mut areas = Vec::with_capacity(fan.triangles.len());
        let mut members: [BTreeSet<usize>; 6] = Default::default();
        for t in &fan.triangles {
            let m = t.ggraph.rep(chi);
            let used: Vec<usize> = (0..3).filter(|&i| m.0[i] > 0).collect();
            let area = match used[..] {
                [k] => Area::C(k),
                [i, j] => Area::T(3 - i - j),
                _ => {
                    return Err(invariant(
                        "ct-representative",
                        format!("{} is represented by {m} in triangle {:?}", g.label(chi), t.v),
                    ))
                }
            };
            areas.push(area);
            members[slot(area)].extend(t.v);
        }
        let mut degenerations: [Option<Degeneration>; 3] = Default::default();
        for k in 0..3 {
            if !members[3 + k].is_empty() {
                continue;
            }
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let side_or_c = |a: usize| -> BTreeSet<usize> {
                if members[a].is_empty() {
                    (0..fan.points.len()).filter(|&v| fan.points[v].num[a] == 0).collect()
                } else {
                    members[a].clone()
                }
            };
            let l: Vec<usize> = side_or_c(i).intersection(&side_or_c(j)).copied().collect();
            if !l.contains(&k) || !fan.collinear(&l) {
                return Err(invariant(
                    "ct-degenerate-line",
                    format!("{}: boundary {l:?} is not a segment out of corner {k}", g.label(chi)),
                ));
            }
            let segment_edges: Vec<[usize; 2]> = l
                .iter()
                .enumerate()
                .flat_map(|(a, &u)| l[a + 1..].iter().map(move |&w| [u, w]))
                .filter(|&[u, w]| fan.adjacent(u, w))
                .collect();
            let marked = segment_edges.iter().filter(|&&[u, w]| marking.edge_mark(u, w) == Some(chi)).count();
            if marked != 0 && marked != segment_edges.len() {
                return Err(invariant(
                    "ct-degenerate-line",
                    format!("{}: segment {l:?} is only partly marked", g.label(chi)),
                ));
            }
            degenerations[k] =
                Some(if l.len() == 1 || marked > 0 { Degeneration::Vertex(k) } else { Degeneration::Segment(l) });
        }
        Ok(CtSubdivision { chi, areas, degenerations, members })
    }

    /// Whether the (possibly degenerate) area contains the vertex `e`.
    pub fn contains(&self, area: Area, e: usize) -> bool {
        match area {
            Area::C(_) => self.members[slot(area)].contains(&e),
            Area::T(k) => match &self.degenerations[k] {
                None => self.members[slot(area)].contains(&e),
                Some(Degeneration::Segment(l)) => l.contains(&e),
                Some(Degeneration::Vertex(c)) => *c == e,
            },
        }
    }

    pub fn is_empty(&self, area: Area) -> bool {
        self.members[slot(area)].is_empty()
    }

    /// The areas containing `e`; `e` is internal to an area when this has one element.
    pub fn role(&self, e: usize) -> BTreeSet<Area> {
        ALL_AREAS.iter().copied().filter(|&a| self.contains(a, e)).collect()
    }
}

/// Vertex type of a character in the sink-source graph of a divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexType {
    Charge10(usize),
    Charge01(usize),
    Source12(usize),
    Source21(usize),
    Tile(usize),
    Source33,
    Sink30,
    Sink03,
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VertexType::Charge10(k) => write!(f, "{}-(1,0)-charge", AXES[k]),
            VertexType::Charge01(k) => write!(f, "{}-(0,1)-charge", AXES[k]),
            VertexType::Source12(k) => write!(f, "{}-(1,2)-source", AXES[k]),
            VertexType::Source21(k) => write!(f, "{}-(2,1)-source", AXES[k]),
            VertexType::Tile(k) => write!(f, "{}-tile", AXES[k]),
            VertexType::Source33 => write!(f, "(3,3)-source"),
            VertexType::Sink30 => write!(f, "(3,0)-sink"),
            VertexType::Sink03 => write!(f, "(0,3)-sink"),
        }
    }
}

impl VertexType {
    /// Which cube arrows vanish along the divisor, in display order, for the cube of
    /// `χ` when `χ⁻¹` has this type. The outer arrows `O_k` leave `L123`, the inner
    /// arrows `I_k` enter `L`, and every rim arrow is fixed by the path sums being 1.
    pub fn cube_pattern(self) -> [bool; 12] {
        let unit = |k: usize| {
            let mut v = [0u8; 3];
            v[k] = 1;
            v
        };
        let (outer, inner): ([u8; 3], [u8; 3]) = match self {
            VertexType::Sink30 => ([1, 1, 1], [0; 3]),
            VertexType::Charge10(k) => ([1 - unit(k)[0], 1 - unit(k)[1], 1 - unit(k)[2]], [0; 3]),
            VertexType::Tile(k) => (unit(k), unit(k)),
            VertexType::Source21(k) => (unit(k), [0; 3]),
            VertexType::Source12(k) => ([0; 3], unit(k)),
            VertexType::Charge01(k) => ([0; 3], [1 - unit(k)[0], 1 - unit(k)[1], 1 - unit(k)[2]]),
            VertexType::Sink03 => ([0; 3], [1, 1, 1]),
            VertexType::Source33 => ([0; 3], [0; 3]),
        };
        let mut out = [false; 12];
        for (slot, &(_, to, axis)) in crate::quiver::CUBE_ARROWS.iter().enumerate() {
            let bit = match to.count_ones() {
                2 => outer[axis],
                0 => inner[axis],
                _ => {
                    // Rim arrow x_axis : L_{k,axis} → L_k on the path O_i, rim, I_k.
                    let k = to.trailing_zeros() as usize;
                    let i = 3 - k - axis;
                    1 - inner[k] - outer[i]
                }
            };
            out[slot] = bit == 1;
        }
        out
    }

    /// The row of the vertex-type table matching a CT role.
    pub fn from_role(role: &BTreeSet<Area>) -> Option<VertexType> {
        let ts: Vec<usize> = (0..3).filter(|&k| role.contains(&Area::T(k))).collect();
        let cs: Vec<usize> = (0..3).filter(|&k| role.contains(&Area::C(k))).collect();
        Some(match (ts.len(), cs.len()) {
            (3, _) => VertexType::Sink03,
            (2, _) => VertexType::Charge01(3 - ts[0] - ts[1]),
            (1, _) if cs.contains(&ts[0]) => VertexType::Source12(ts[0]),
            (1, _) => VertexType::Tile(ts[0]),
            (0, 1) => VertexType::Charge10(cs[0]),
            (0, 2) => VertexType::Source21(3 - cs[0] - cs[1]),
            (0, 3) => VertexType::Source33,
            _ => return None,
        })
    }
}

/// Per-character CT-subdivisions, with `None` at the trivial character.
pub fn all_subdivisions(model: &Model, marking: &Marking) -> Result<Vec<Option<CtSubdivision>>> {
    model
        .group
        .characters()
        .map(|chi| {
            if chi == model.group.trivial() {
                Ok(None)
            } else {
                CtSubdivision::compute(model, marking, chi).map(Some)
            }
        })
        .collect()
}

/// The type of `ψ` in the sink-source graph of `E_e`, given the CT-subdivisions.
pub fn vertex_type(model: &Model, cts: &[Option<CtSubdivision>], psi: Character, e: usize) -> Result<VertexType> {
    let g = &model.group;
    let p = &model.fan.points[e];
    if p.is_corner() {
        return Ok(VertexType::Tile(p.distinguished_axis().unwrap()));
    }
    let chi = g.inv(psi);
    if chi == g.trivial() {
        return Ok(match p.distinguished_axis() {
            None => VertexType::Sink30,
            Some(k) => VertexType::Charge10(k),
        });
    }
    let ct = cts[chi.index()].as_ref().expect("nontrivial characters have a subdivision");
    let role = ct.role(e);
    VertexType::from_role(&role)
        .ok_or_else(|| invariant("vertex-type-table", format!("{} at {p}: role {role:?} matches no row", g.label(psi))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphSummary {
    /// A corner: every character is a tile of the corner axis.
    EmptyTiled(usize),
    /// A side point: one looping (1,0)-charge line through `χ₀` and one looping
    /// (0,1)-charge line, both along the side's zero axis.
    TwoLoopingChargeLines(usize),
    /// A compact divisor, by its source vertices.
    Compact(CompactShape),
}

impl fmt::Display for GraphSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphSummary::EmptyTiled(k) => write!(f, "empty, {}-tiled", AXES[k]),
            GraphSummary::TwoLoopingChargeLines(k) => write!(f, "two looping {}-charge lines", AXES[k]),
            GraphSummary::Compact(CompactShape::OneSource33) => write!(f, "one (3,3)-source"),
            GraphSummary::Compact(CompactShape::SourcePair) => write!(f, "one (1,2)-source and one (2,1)-source"),
            GraphSummary::Compact(CompactShape::ThreeSources12) => write!(f, "three (1,2)-sources"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompactShape {
    /// One (3,3)-source: `ℙ²`.
    OneSource33,
    /// One (1,2)-source and one (2,1)-source: a scroll, possibly blown up.
    SourcePair,
    /// Three (1,2)-sources: `dP₆`.
    ThreeSources12,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SinkSourceGraph {
    pub divisor: usize,
    /// Indexed by character.
    pub types: Vec<VertexType>,
    pub summary: GraphSummary,
}

pub fn sink_source_graph(model: &Model, cts: &[Option<CtSubdivision>], e: usize) -> Result<SinkSourceGraph> {
    let g = &model.group;
    let types: Vec<VertexType> = g.characters().map(|psi| vertex_type(model, cts, psi, e)).collect::<Result<_>>()?;
    let kind = model.fan.classify_vertex(e)?;
    let p = &model.fan.points[e];
    let count = |f: &dyn Fn(&VertexType) -> bool| types.iter().filter(|t| f(t)).count();
    let bad = |why: &str| invariant("sink-source-summary", format!("{p}: {why}; types {types:?}"));
    let summary = match kind.kind {
        DivisorKind::CornerStrictTransform => {
            let k = p.distinguished_axis().unwrap();
            if types.iter().any(|&t| t != VertexType::Tile(k)) {
                return Err(bad("corner graph is not empty"));
            }
            GraphSummary::EmptyTiled(k)
        }
        DivisorKind::SideNonCompact => {
            let k = p.distinguished_axis().unwrap();
            let allowed = |t: &VertexType| {
                matches!(t, VertexType::Charge10(a) | VertexType::Charge01(a) if *a == k)
                    || matches!(t, VertexType::Tile(a) if *a != k)
            };
            if !types.iter().all(allowed)
                || types[0] != VertexType::Charge10(k)
                || count(&|t| matches!(t, VertexType::Charge01(_))) == 0
            {
                return Err(bad("side graph is not two looping charge lines"));
            }
            GraphSummary::TwoLoopingChargeLines(k)
        }
        DivisorKind::InteriorCompact => {
            if count(&|t| *t == VertexType::Sink30) != 1 || types[0] != VertexType::Sink30 {
                return Err(bad("compact graph needs exactly one (3,0)-sink at the trivial character"));
            }
            let counts = (
                count(&|t| *t == VertexType::Source33),
                count(&|t| matches!(t, VertexType::Source21(_))),
                count(&|t| matches!(t, VertexType::Source12(_))),
            );
            let shape = match (counts, kind.surface) {
                ((1, 0, 0), Some(Surface::P2)) => CompactShape::OneSource33,
                ((0, 1, 1), Some(Surface::ScrollBlownUp(_))) => CompactShape::SourcePair,
                ((0, 0, 3), Some(Surface::DelPezzo6)) => CompactShape::ThreeSources12,
                _ => return Err(bad("source count does not match the surface type")),
            };
            GraphSummary::Compact(shape)
        }
    };
    Ok(SinkSourceGraph { divisor: e, types, summary })
}

/// The shape of a monomial: the set of axes with positive exponent, as a bit mask.
pub fn area_pattern(area: Area) -> u8 {
    match area {
        Area::C(k) => 1 << k,
        Area::T(k) => 0b111 ^ (1 << k),
    }
}

/// Whether a path of dual-family arrows from `ψ` to `χ₀` exists that does not vanish
/// along `E_e` and uses exactly the axes in `pattern`, each at least once.
pub fn nonvanishing_path(model: &Model, psi: Character, e: usize, pattern: u8) -> bool {
    let g = &model.group;
    let n = g.order();
    let mut seen = vec![false; n * 8];
    let mut queue = VecDeque::from([(psi, 0u8)]);
    seen[psi.index() * 8] = true;
    while let Some((chi, used)) = queue.pop_front() {
        if chi == g.trivial() && used == pattern {
            return true;
        }
        for i in (0..3).filter(|i| pattern & (1 << i) != 0) {
            if model.dual_arrow(chi, i).get(e) != 0 {
                continue;
            }
            let next = (g.mul(chi, g.kappa(i)), used | 1 << i);
            let key = next.0.index() * 8 + next.1 as usize;
            if !seen[key] {
                seen[key] = true;
                queue.push_back(next);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(s: &str) -> (Model, Marking, Vec<Option<CtSubdivision>>) {
        let m = Model::new(&s.parse().unwrap()).unwrap();
        let mk = Marking::compute(&m).unwrap();
        let cts = all_subdivisions(&m, &mk).unwrap();
        (m, mk, cts)
    }

    #[test]
    fn area_names() {
        let names: Vec<String> = ALL_AREAS.iter().map(|a| a.to_string()).collect();
        assert_eq!(names, vec!["Cx", "Cy", "Cz", "Tyz", "Txz", "Txy"]);
    }

    #[test]
    fn trivial_character_has_no_subdivision() {
        let (m, mk, _) = setup("1/3:1,1,1");
        assert!(matches!(CtSubdivision::compute(&m, &mk, m.group.trivial()), Err(Error::TrivialCharacter(_))));
    }

    #[test]
    fn one_third_chi2_is_three_c_areas() {
        let (m, _, cts) = setup("1/3:1,1,1");
        let chi2 = m.group.parse_label("2").unwrap();
        let ct = cts[chi2.index()].as_ref().unwrap();
        let mut areas = ct.areas.clone();
        areas.sort();
        assert_eq!(areas, vec![Area::C(0), Area::C(1), Area::C(2)]);
        assert_eq!(
            ct.degenerations,
            [Some(Degeneration::Vertex(0)), Some(Degeneration::Vertex(1)), Some(Degeneration::Vertex(2))]
        );
        assert_eq!(ct.role(3), BTreeSet::from([Area::C(0), Area::C(1), Area::C(2)]));
        assert_eq!(ct.role(0), BTreeSet::from([Area::C(1), Area::C(2), Area::T(0)]));
        let psi = m.group.inv(chi2);
        assert_eq!(vertex_type(&m, &cts, psi, 3).unwrap(), VertexType::Source33);
    }

    #[test]
    fn worked_example_sinks() {
        let (m, _, cts) = setup("1/15:1,5,9");
        let c = |k: &str| m.group.parse_label(k).unwrap();
        let chi1 = c("1");
        let ct1 = cts[chi1.index()].as_ref().unwrap();
        assert!([0, 1, 2].iter().all(|&k| ct1.contains(Area::T(k), 3)));
        assert_eq!(vertex_type(&m, &cts, c("14"), 3).unwrap(), VertexType::Sink03);
        assert_eq!(vertex_type(&m, &cts, m.group.trivial(), 3).unwrap(), VertexType::Sink30);
        let g10 = sink_source_graph(&m, &cts, 9).unwrap();
        let sinks: Vec<String> = m
            .group
            .characters()
            .filter(|&psi| g10.types[psi.index()] == VertexType::Sink03)
            .map(|psi| m.group.label(psi))
            .collect();
        assert_eq!(sinks, vec!["7", "11"]);
        let gx = sink_source_graph(&m, &cts, 0).unwrap();
        assert_eq!(gx.summary, GraphSummary::EmptyTiled(0));
        for pat in [0b011, 0b101, 0b110] {
            assert!(nonvanishing_path(&m, c("14"), 3, pat));
        }
    }

    #[test]
    fn cube_patterns_match_vertex_types() {
        let (m, _, cts) = setup("1/15:1,5,9");
        for chi in m.group.characters() {
            let cube = m.cube(chi);
            for e in 0..m.num_points() {
                let t = vertex_type(&m, &cts, m.group.inv(chi), e).unwrap();
                assert_eq!(cube.pattern_at(e), t.cube_pattern(), "{} at {e}: {t}", m.group.label(chi));
            }
        }
    }

    #[test]
    fn empty_pattern_path_only_from_trivial() {
        let (m, _, _) = setup("1/15:1,5,9");
        assert!(nonvanishing_path(&m, m.group.trivial(), 3, 0));
        assert!(!nonvanishing_path(&m, m.group.parse_label("3").unwrap(), 3, 0));
    }
}
