//! Classical Reid's recipe: characters marking edges and interior vertices of `Σ`,
//! and the global role each character plays.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{invariant, Result};
use crate::fan::Surface;
use crate::group::{Character, Monomial};
use crate::quiver::Model;

/// Characters marking the interior edges and interior vertices of `Σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    pub edge_marks: BTreeMap<[usize; 2], Character>,
    pub vertex_marks: BTreeMap<usize, Vec<Character>>,
}

impl Marking {
    /// Edge marks from carving ratios, vertex marks from the divisor criterion
    /// (`χ` marks `e` iff the three arrows leaving `χ` all vanish on `E_e`), checked
    /// against the case-by-case rules for `ℙ²`, scrolls and `dP₆`.
    pub fn compute(model: &Model) -> Result<Self> {
        let g = &model.group;
        let fan = &model.fan;
        let edge_marks: BTreeMap<[usize; 2], Character> =
            fan.edges.iter().filter(|e| e.interior).map(|e| (e.v, e.chi)).collect();
        let mut vertex_marks: BTreeMap<usize, Vec<Character>> = BTreeMap::new();
        for chi in g.characters().filter(|&c| c != g.trivial()) {
            for e in 0..fan.points.len() {
                if (0..3).all(|i| model.arrow(chi, i).get(e) > 0) {
                    if !fan.points[e].is_interior() {
                        return Err(invariant(
                            "vertex-marks-interior",
                            format!("{} marks boundary point {}", g.label(chi), fan.points[e]),
                        ));
                    }
                    vertex_marks.entry(e).or_default().push(chi);
                }
            }
        }
        let marking = Marking { edge_marks, vertex_marks };
        marking.check_rules(model)?;
        Ok(marking)
    }

    pub fn edge_mark(&self, a: usize, b: usize) -> Option<Character> {
        self.edge_marks.get(&if a < b { [a, b] } else { [b, a] }).copied()
    }

    pub fn vertex_marks(&self, v: usize) -> &[Character] {
        self.vertex_marks.get(&v).map_or(&[], |v| v.as_slice())
    }

    /// Edges marked by `χ`.
    pub fn edges_of(&self, chi: Character) -> Vec<[usize; 2]> {
        self.edge_marks.iter().filter(|(_, &c)| c == chi).map(|(&e, _)| e).collect()
    }

    /// Vertices marked by `χ`.
    pub fn vertices_of(&self, chi: Character) -> Vec<usize> {
        self.vertex_marks.iter().filter(|(_, cs)| cs.contains(&chi)).map(|(&v, _)| v).collect()
    }

    fn check_rules(&self, model: &Model) -> Result<()> {
        let g = &model.group;
        let fan = &model.fan;
        for v in (0..fan.points.len()).filter(|&v| fan.points[v].is_interior()) {
            let marks = self.vertex_marks(v);
            let class = fan.classify_vertex(v)?;
            let nb: Vec<usize> = fan.neighbors(v).iter().copied().collect();
            let mark = |f: usize| self.edge_mark(v, f).expect("edges at interior vertices are interior");
            let fail = |rule: &str| {
                invariant(
                    "recipe-vertex-rule",
                    format!(
                        "{rule} rule disagrees at {}: divisor criterion gives {:?}",
                        fan.points[v],
                        marks.iter().map(|&c| g.label(c)).collect::<Vec<_>>()
                    ),
                )
            };
            match class.surface {
                Some(Surface::P2) => {
                    let chi = mark(nb[0]);
                    if nb.iter().any(|&f| mark(f) != chi) || marks != [g.mul(chi, chi)] {
                        return Err(fail("P2"));
                    }
                }
                Some(Surface::ScrollBlownUp(_)) => {
                    let mut ok = false;
                    for (i, &a) in nb.iter().enumerate() {
                        for &b in &nb[i + 1..] {
                            let on_corner_line = (0..3).any(|c| fan.collinear(&[a, b, c]));
                            if !fan.straight_through(a, v, b) || !on_corner_line || mark(a) != mark(b) {
                                continue;
                            }
                            let mut counts: BTreeMap<Character, usize> = BTreeMap::new();
                            for &f in nb.iter().filter(|&&f| f != a && f != b) {
                                *counts.entry(mark(f)).or_default() += 1;
                            }
                            let repeated: Vec<Character> =
                                counts.iter().filter(|(_, &k)| k == 2).map(|(&c, _)| c).collect();
                            if repeated.len() == 1
                                && counts.values().all(|&k| k <= 2)
                                && marks == [g.mul(mark(a), repeated[0])]
                            {
                                ok = true;
                            }
                        }
                    }
                    if !ok {
                        return Err(fail("scroll"));
                    }
                }
                Some(Surface::DelPezzo6) => {
                    if marks.len() != 2 {
                        return Err(fail("dP6"));
                    }
                }
                None => unreachable!("interior vertices carry a surface type"),
            }
        }
        Ok(())
    }
}

/// A straight segment's carving ratio in the chain's own frame: `axis^c : u^a w^b`
/// where `(u, w)` are the two axes following `axis` cyclically.
fn chain_ratio(m1: Monomial, m2: Monomial, axis: usize) -> Option<(i64, i64, i64)> {
    let (u, w) = ((axis + 1) % 3, (axis + 2) % 3);
    let pure = |m: &Monomial| m.0[axis] > 0 && m.0[u] == 0 && m.0[w] == 0;
    let (p, q) = if pure(&m1) && m2.0[axis] == 0 {
        (m1, m2)
    } else if pure(&m2) && m1.0[axis] == 0 {
        (m2, m1)
    } else {
        return None;
    };
    Some((p.0[axis], q.0[u], q.0[w]))
}

/// The role a character plays in Reid's recipe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecipeRole {
    Trivial,
    SingleVertex {
        vertex: usize,
    },
    /// A concave chain on the boundary of the C-area of `axis`, listed from `P₁`.
    SingleChain {
        axis: usize,
        path: Vec<usize>,
    },
    /// Three straight chains from the corners meeting at `centre`. `branches[k]`
    /// runs from the vertex after `centre` to the corner `e_k`; the ratios are
    /// `x^a:y^b`, `y^b:z^c`, `z^c:x^a` with `exponents = [a, b, c]`.
    MeetingOfChampions {
        centre: usize,
        branches: [Vec<usize>; 3],
        exponents: [i64; 3],
    },
    /// A straight chain from the corner `e_axis` to a point on the opposite side.
    LongSide {
        axis: usize,
        path: Vec<usize>,
    },
}

impl RecipeRole {
    pub fn variant_name(&self) -> &'static str {
        match self {
            RecipeRole::Trivial => "Trivial",
            RecipeRole::SingleVertex { .. } => "SingleVertex",
            RecipeRole::SingleChain { .. } => "SingleChain",
            RecipeRole::MeetingOfChampions { .. } => "MeetingOfChampions",
            RecipeRole::LongSide { .. } => "LongSide",
        }
    }

    /// The chain of a single-chain or long-side role, endpoint to endpoint.
    pub fn chain(&self) -> Option<&[usize]> {
        match self {
            RecipeRole::SingleChain { path, .. } | RecipeRole::LongSide { path, .. } => Some(path),
            _ => None,
        }
    }
}

/// Walks the marked-edge graph from `start` through vertices of degree 2.
fn walk(adj: &BTreeMap<usize, Vec<usize>>, start: usize, first: usize) -> Vec<usize> {
    let mut path = vec![start, first];
    loop {
        let (prev, cur) = (path[path.len() - 2], path[path.len() - 1]);
        let next: Vec<usize> = adj[&cur].iter().copied().filter(|&n| n != prev).collect();
        if adj[&cur].len() != 2 || next.len() != 1 {
            return path;
        }
        path.push(next[0]);
    }
}

/// Classifies the role of `χ` from the marking.
pub fn classify_role(model: &Model, marking: &Marking, chi: Character) -> Result<RecipeRole> {
    let g = &model.group;
    let fan = &model.fan;
    if chi == g.trivial() {
        return Ok(RecipeRole::Trivial);
    }
    let edges = marking.edges_of(chi);
    let verts = marking.vertices_of(chi);
    let dump = || format!("{}: marked edges {edges:?}, marked vertices {verts:?}", g.label(chi));
    if edges.is_empty() {
        return match verts.as_slice() {
            [v] => Ok(RecipeRole::SingleVertex { vertex: *v }),
            _ => Err(invariant("role-shape", dump())),
        };
    }
    if !verts.is_empty() {
        return Err(invariant("role-shape", dump()));
    }
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for [a, b] in &edges {
        adj.entry(*a).or_default().push(*b);
        adj.entry(*b).or_default().push(*a);
    }
    let degree = |v: usize| adj[&v].len();
    let hubs: Vec<usize> = adj.keys().copied().filter(|&v| degree(v) == 3).collect();
    let leaves: Vec<usize> = adj.keys().copied().filter(|&v| degree(v) == 1).collect();
    if adj.keys().any(|&v| degree(v) > 3) || hubs.len() > 1 {
        return Err(invariant("role-shape", dump()));
    }

    if let [centre] = hubs[..] {
        let mut branches: [Vec<usize>; 3] = Default::default();
        for &first in &adj[&centre] {
            let path = walk(&adj, centre, first);
            let end = *path.last().unwrap();
            let corner = (0..3).find(|&k| k == end).ok_or_else(|| invariant("role-champions", dump()))?;
            if !fan.collinear(&path) || !branches[corner].is_empty() {
                return Err(invariant("role-champions", dump()));
            }
            branches[corner] = path[1..].to_vec();
        }
        if branches.iter().map(Vec::len).sum::<usize>() != edges.len() {
            return Err(invariant("role-champions", dump()));
        }
        // The branch to e_k is carved out by a ratio of pure powers of the other two axes.
        let mut exponents = [0i64; 3];
        for (k, branch) in branches.iter().enumerate() {
            let e = fan.edge(centre, branch[0]).unwrap();
            for m in [e.m1, e.m2] {
                let axis = (0..3).find(|&i| m.0[i] > 0).ok_or_else(|| invariant("role-champions", dump()))?;
                if axis == k || m.support_size() != 1 {
                    return Err(invariant("role-champions", dump()));
                }
                if exponents[axis] != 0 && exponents[axis] != m.0[axis] {
                    return Err(invariant("role-champions-exponents", dump()));
                }
                exponents[axis] = m.0[axis];
            }
        }
        return Ok(RecipeRole::MeetingOfChampions { centre, branches, exponents });
    }

    if leaves.len() != 2 {
        return Err(invariant("role-shape", dump()));
    }
    let first = adj[&leaves[0]][0];
    let mut path = walk(&adj, leaves[0], first);
    if path.len() != edges.len() + 1 {
        return Err(invariant("role-connected", dump()));
    }
    let straight = fan.collinear(&path);
    for _ in 0..2 {
        let (start, end) = (&fan.points[path[0]], &fan.points[*path.last().unwrap()]);
        if straight && start.is_corner() {
            let k = start.distinguished_axis().unwrap();
            if end.num[k] == 0 && !end.is_corner() {
                return Ok(RecipeRole::LongSide { axis: k, path });
            }
        }
        path.reverse();
    }

    // Axis: the variable that is a pure power on one side of every ratio.
    let candidates: Vec<usize> = (0..3)
        .filter(|&k| {
            path.windows(2).all(|w| {
                let e = fan.edge(w[0], w[1]).unwrap();
                chain_ratio(e.m1, e.m2, k).is_some()
            })
        })
        .collect();
    let on_c_area = |k: usize| {
        path.iter().all(|&v| {
            fan.triangles_of_vertex(v).iter().any(|&t| {
                let m = fan.triangles[t].ggraph.rep(chi);
                m.0[k] > 0 && m.support_size() == 1
            })
        })
    };
    let axis = candidates
        .iter()
        .copied()
        .find(|&k| on_c_area(k))
        .or_else(|| candidates.first().copied())
        .ok_or_else(|| invariant("role-chain-axis", dump()))?;
    // P₁ is the endpoint nearer the corner following the axis cyclically.
    let near = (axis + 1) % 3;
    let key = |v: usize| {
        let p = &fan.points[v];
        (p.num[near], -p.num[(axis + 2) % 3])
    };
    if key(path[0]) < key(*path.last().unwrap()) {
        path.reverse();
    }
    let ratios: Vec<(i64, i64, i64)> = path
        .windows(2)
        .map(|w| {
            let e = fan.edge(w[0], w[1]).unwrap();
            chain_ratio(e.m1, e.m2, axis).unwrap()
        })
        .collect();
    let concave = ratios.windows(2).all(|w| w[0].1 <= w[1].1 && w[0].2 >= w[1].2);
    if !concave {
        return Err(invariant("role-chain-concavity", format!("{} with ratios {ratios:?}", dump())));
    }
    Ok(RecipeRole::SingleChain { axis, path })
}

/// Roles of all characters, indexed by character.
pub fn classify_all(model: &Model, marking: &Marking) -> Result<Vec<RecipeRole>> {
    model.group.characters().map(|chi| classify_role(model, marking, chi)).collect()
}

/// Interior vertices of the marked configuration of a role, as a set.
pub fn role_vertices(role: &RecipeRole) -> BTreeSet<usize> {
    match role {
        RecipeRole::Trivial => BTreeSet::new(),
        RecipeRole::SingleVertex { vertex } => BTreeSet::from([*vertex]),
        RecipeRole::SingleChain { path, .. } | RecipeRole::LongSide { path, .. } => path.iter().copied().collect(),
        RecipeRole::MeetingOfChampions { centre, branches, .. } => {
            branches.iter().flatten().copied().chain([*centre]).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(s: &str) -> (Model, Marking) {
        let m = Model::new(&s.parse().unwrap()).unwrap();
        let mk = Marking::compute(&m).unwrap();
        (m, mk)
    }

    #[test]
    fn one_third_marking_and_champions() {
        let (m, mk) = setup("1/3:1,1,1");
        let chi2 = m.group.parse_label("2").unwrap();
        assert_eq!(mk.edge_marks.len(), 3);
        assert!(mk.edge_marks.values().all(|&c| c == chi2));
        assert_eq!(mk.vertex_marks(3), &[m.group.parse_label("1").unwrap()]);
        assert_eq!(
            classify_role(&m, &mk, chi2).unwrap(),
            RecipeRole::MeetingOfChampions { centre: 3, branches: [vec![0], vec![1], vec![2]], exponents: [1, 1, 1] }
        );
        assert_eq!(classify_role(&m, &mk, m.group.trivial()).unwrap(), RecipeRole::Trivial);
    }

    #[test]
    fn worked_example_marks() {
        let (m, mk) = setup("1/15:1,5,9");
        let c = |k: &str| m.group.parse_label(k).unwrap();
        assert_eq!(mk.edge_mark(6, 10), Some(c("3")));
        assert_eq!(mk.vertex_marks(3), &[c("1")]);
        assert_eq!(mk.vertex_marks(6), &[c("2")]);
        assert_eq!(mk.vertex_marks(9), &[c("4"), c("8")]);
        assert_eq!(mk.vertex_marks(4), &[c("7")]);
        assert_eq!(
            classify_role(&m, &mk, c("5")).unwrap(),
            RecipeRole::SingleChain { axis: classify_axis(&m, &mk, "5"), path: vec![3, 6, 9, 11] }
        );
        assert_eq!(classify_role(&m, &mk, c("6")).unwrap().chain(), Some(&[5usize, 3, 1][..]));
    }

    fn classify_axis(m: &Model, mk: &Marking, k: &str) -> usize {
        match classify_role(m, mk, m.group.parse_label(k).unwrap()).unwrap() {
            RecipeRole::SingleChain { axis, .. } => axis,
            r => panic!("unexpected role {r:?}"),
        }
    }

    #[test]
    fn trivial_group_marks_nothing() {
        let (m, mk) = setup("1/1:0,0,0");
        assert!(mk.edge_marks.is_empty() && mk.vertex_marks.is_empty());
        assert_eq!(classify_all(&m, &mk).unwrap(), vec![RecipeRole::Trivial]);
    }
}
