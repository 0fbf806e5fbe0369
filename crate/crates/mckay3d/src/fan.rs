//! G-graphs and the G-Hilb triangulation `Σ` of the junior simplex.
//!
//! `Σ` is built by chamber flood-fill: a generic point `v` of `Δ` determines the
//! G-graph `Γ(v)` (per character, the `⟨v,·⟩`-minimal monomial of that weight), the
//! chart cone `σ(Γ)` is cut out by the ratios `xᵢ·Γ(χ)/Γ(χ·κ(xᵢ))`, and neighbouring
//! chambers are reached by stepping across each interior edge.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invariant, Error, Result};
use crate::group::{Character, GroupData, JuniorPoint, Monomial};

/// A rational point of the plane `Σ wᵢ = 1`.
pub type Point = [BigRational; 3];

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn dot_rat(d: &[i64; 3], p: &Point) -> BigRational {
    (0..3).fold(BigRational::zero(), |acc, i| acc + &p[i] * BigInt::from(d[i]))
}

fn point_string(p: &Point) -> String {
    format!("({}, {}, {})", p[0], p[1], p[2])
}

/// Monomials with exponents in `[0, |G|−1]³` grouped by weight, keeping only those
/// not divisible by a nontrivial invariant monomial (the others never minimize a
/// valuation that is positive on `σ₊`).
#[derive(Clone, Debug)]
pub struct WeightTable {
    by_char: Vec<Vec<Monomial>>,
}

impl WeightTable {
    pub fn new(g: &GroupData) -> Self {
        let n = g.order() as i64;
        let side = n as usize;
        let idx = |a: i64, b: i64, c: i64| ((a as usize) * side + b as usize) * side + c as usize;
        let mut divisible = vec![false; side * side * side];
        let mut by_char = vec![Vec::new(); g.order()];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let m = Monomial([a, b, c]);
                    let mut bad = m != Monomial::ONE && g.in_m(&m);
                    if a > 0 && divisible[idx(a - 1, b, c)] {
                        bad = true;
                    }
                    if b > 0 && divisible[idx(a, b - 1, c)] {
                        bad = true;
                    }
                    if c > 0 && divisible[idx(a, b, c - 1)] {
                        bad = true;
                    }
                    divisible[idx(a, b, c)] = bad;
                    if !bad {
                        by_char[g.weight(&m).index()].push(m);
                    }
                }
            }
        }
        WeightTable { by_char }
    }

    pub fn candidates(&self, chi: Character) -> &[Monomial] {
        &self.by_char[chi.index()]
    }
}

/// Result of a valuation argmin: the lexicographically smallest minimizer and whether
/// it was the unique one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Argmin {
    pub monomial: Monomial,
    pub unique: bool,
}

/// Scales a rational point to a primitive integer vector on the same ray.
fn integer_ray(p: &Point) -> Result<[i128; 3]> {
    let l = p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let v: Vec<i128> = p
        .iter()
        .map(|c| (c.numer() * (&l / c.denom())).to_i128())
        .collect::<Option<_>>()
        .ok_or_else(|| invariant("integer-ray", format!("coordinates of {} overflow", point_string(p))))?;
    Ok([v[0], v[1], v[2]])
}

fn argmin(cands: &[Monomial], w: &[i128; 3]) -> Argmin {
    let mut best: Option<(i128, Monomial)> = None;
    let mut unique = true;
    for m in cands {
        let val = w[0] * m.0[0] as i128 + w[1] * m.0[1] as i128 + w[2] * m.0[2] as i128;
        match best {
            None => best = Some((val, *m)),
            Some((bv, bm)) => {
                if val < bv {
                    best = Some((val, *m));
                    unique = true;
                } else if val == bv {
                    unique = false;
                    if *m < bm {
                        best = Some((val, *m));
                    }
                }
            }
        }
    }
    let (_, monomial) = best.expect("every character has a regular representative");
    Argmin { monomial, unique }
}

/// The weight-`χ` regular monomial with exponents below `|G|` minimizing `⟨v,·⟩`.
pub fn rep_monomial(table: &WeightTable, v: &Point, chi: Character) -> Result<Argmin> {
    let w = integer_ray(v)?;
    Ok(argmin(table.candidates(chi), &w))
}

/// The G-graph of a torus-fixed G-cluster: one monomial per character.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GGraph {
    pub reps: Vec<Monomial>,
}

impl GGraph {
    pub fn rep(&self, chi: Character) -> Monomial {
        self.reps[chi.index()]
    }

    /// Checks cardinality, `1` at the trivial character and division closure.
    pub fn validate(&self, g: &GroupData) -> Result<()> {
        if self.reps.len() != g.order() || self.reps[0] != Monomial::ONE {
            return Err(invariant("ggraph-shape", format!("{:?}", self.reps)));
        }
        let set: BTreeSet<Monomial> = self.reps.iter().copied().collect();
        if set.len() != self.reps.len() {
            return Err(invariant("ggraph-transversal", format!("{:?}", self.reps)));
        }
        for m in &self.reps {
            for i in 0..3 {
                if m.0[i] > 0 {
                    let mut d = *m;
                    d.0[i] -= 1;
                    if !set.contains(&d) {
                        return Err(invariant("ggraph-division-closed", format!("{m} in {:?}", self.reps)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The G-graph of the chamber containing the generic point `v`.
pub fn g_graph(g: &GroupData, table: &WeightTable, v: &Point) -> Result<GGraph> {
    let w = integer_ray(v)?;
    let mut reps = Vec::with_capacity(g.order());
    for chi in g.characters() {
        let a = argmin(table.candidates(chi), &w);
        if !a.unique {
            return Err(Error::Wall {
                point: point_string(v),
                detail: format!("character {} has several minimizers", g.label(chi)),
            });
        }
        reps.push(a.monomial);
    }
    let gg = GGraph { reps };
    gg.validate(g).map_err(|e| Error::Wall { point: point_string(v), detail: e.to_string() })?;
    Ok(gg)
}

/// A basic triangle of `Σ`: its vertex ids (sorted), G-graph and the dual basis of
/// its cone in `M` (`chart_ratios[i]` pairs to 1 with `v[i]` and 0 with the others).
#[derive(Clone, Debug)]
pub struct Triangle {
    pub v: [usize; 3],
    pub ggraph: GGraph,
    pub chart_ratios: [Monomial; 3],
}

/// An edge of `Σ` with its carving ratio `m1 : m2` and mark `χ = weight(m1)`.
#[derive(Clone, Debug)]
pub struct Edge {
    pub v: [usize; 2],
    pub m1: Monomial,
    pub m2: Monomial,
    pub chi: Character,
    /// False when the edge lies on the boundary of `Δ`.
    pub interior: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivisorKind {
    CornerStrictTransform,
    SideNonCompact,
    InteriorCompact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Surface {
    P2,
    ScrollBlownUp(u8),
    DelPezzo6,
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Surface::P2 => write!(f, "P2"),
            Surface::ScrollBlownUp(k) => write!(f, "scroll blown up in {k} points"),
            Surface::DelPezzo6 => write!(f, "dP6"),
        }
    }
}

/// Classification of a toric prime divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeDivisor {
    pub id: usize,
    pub kind: DivisorKind,
    /// Surface type of a compact divisor.
    pub surface: Option<Surface>,
    pub valence: usize,
}

/// The triangulation `Σ` together with adjacency data.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub points: Vec<JuniorPoint>,
    pub triangles: Vec<Triangle>,
    pub edges: Vec<Edge>,
    edge_index: HashMap<[usize; 2], usize>,
    edge_triangles: Vec<Vec<usize>>,
    vertex_triangles: Vec<Vec<usize>>,
    neighbors: Vec<BTreeSet<usize>>,
}

fn sorted2(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

fn cross(a: &[i64; 3], b: &[i64; 3]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn det3(r: &[[i64; 3]; 3]) -> i64 {
    let c = cross(&r[1], &r[2]);
    r[0][0] * c[0] + r[0][1] * c[1] + r[0][2] * c[2]
}

fn sub(a: &[i64; 3], b: &[i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn on_common_side(a: &JuniorPoint, b: &JuniorPoint) -> bool {
    (0..3).any(|i| a.num[i] == 0 && b.num[i] == 0)
}

/// Smallest positive multiple of `m` lying in `M`.
fn order_multiple(g: &GroupData, m: Monomial) -> Monomial {
    let chi = g.weight(&m);
    let mut k = 1;
    let mut c = chi;
    while c != g.trivial() {
        c = g.mul(c, chi);
        k += 1;
    }
    Monomial(m.0.map(|a| a * k))
}

/// The carving ratio of the pair `(e, f)`: the primitive generator of the
/// invariant monomials perpendicular to both, split as `m1 : m2` with `m1 ≥ m2`
/// lexicographically.
pub fn edge_ratio(g: &GroupData, e: &JuniorPoint, f: &JuniorPoint) -> Result<(Monomial, Monomial, Character)> {
    let c = cross(&e.num, &f.num);
    let gcd = c.iter().fold(0i64, |acc, &a| acc.gcd(&a));
    if gcd == 0 {
        return Err(invariant("edge-ratio-rank", format!("{e} and {f} are not independent")));
    }
    let m = order_multiple(g, Monomial(c.map(|a| a / gcd)));
    let (mut m1, mut m2) = m.split();
    if m1 < m2 {
        std::mem::swap(&mut m1, &mut m2);
    }
    let chi = g.weight(&m1);
    if g.weight(&m2) != chi || e.pair(&m).unwrap_or(1) != 0 || f.pair(&m).unwrap_or(1) != 0 {
        return Err(invariant("edge-ratio", format!("{m1}:{m2} for ({e}, {f})")));
    }
    Ok((m1, m2, chi))
}

/// Polygon clipping of `Δ` by the half-spaces `⟨w, d⟩ ≥ 0`.
fn clip_delta(halfspaces: &[[i64; 3]]) -> Vec<Point> {
    let mut poly: Vec<Point> = (0..3)
        .map(|i| {
            let mut p = [rat(0, 1), rat(0, 1), rat(0, 1)];
            p[i] = rat(1, 1);
            p
        })
        .collect();
    for d in halfspaces {
        if poly.is_empty() {
            break;
        }
        let vals: Vec<BigRational> = poly.iter().map(|p| dot_rat(d, p)).collect();
        if vals.iter().all(|v| !v.is_negative()) {
            continue;
        }
        let mut out = Vec::new();
        for k in 0..poly.len() {
            let (p, q) = (&poly[k], &poly[(k + 1) % poly.len()]);
            let (fp, fq) = (&vals[k], &vals[(k + 1) % poly.len()]);
            if !fp.is_negative() {
                out.push(p.clone());
            }
            if (fp.is_negative() && fq.is_positive()) || (fp.is_positive() && fq.is_negative()) {
                let t = fp / (fp - fq);
                out.push([0, 1, 2].map(|i| &p[i] + (&q[i] - &p[i]) * &t));
            }
        }
        out.dedup();
        if out.len() > 1 && out.first() == out.last() {
            out.pop();
        }
        poly = out;
    }
    // Drop vertices lying on the segment between their neighbours.
    let mut changed = true;
    while changed && poly.len() > 3 {
        changed = false;
        for k in 0..poly.len() {
            let a = &poly[(k + poly.len() - 1) % poly.len()];
            let b = &poly[k];
            let c = &poly[(k + 1) % poly.len()];
            let u: Vec<BigRational> = (0..3).map(|i| &b[i] - &a[i]).collect();
            let w: Vec<BigRational> = (0..3).map(|i| &c[i] - &a[i]).collect();
            let collinear = (0..3).all(|i| {
                let (j, l) = ((i + 1) % 3, (i + 2) % 3);
                &u[j] * &w[l] == &u[l] * &w[j]
            });
            if collinear {
                poly.remove(k);
                changed = true;
                break;
            }
        }
    }
    poly
}

/// Deterministic prime sequence for seed perturbations.
fn primes_from(offset: usize, count: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(count);
    let mut k = 101i64;
    let mut skipped = 0;
    while out.len() < count {
        if (2..).take_while(|d| d * d <= k).all(|d| k % d != 0) {
            if skipped >= offset {
                out.push(k);
            } else {
                skipped += 1;
            }
        }
        k += 1;
    }
    out
}

struct Builder<'a> {
    g: &'a GroupData,
    table: &'a WeightTable,
    points: Vec<JuniorPoint>,
    index: HashMap<[i64; 3], usize>,
}

impl Builder<'_> {
    /// The chamber of `Σ` containing the generic point `p`.
    fn chamber(&self, p: &Point) -> Result<Triangle> {
        let gg = g_graph(self.g, self.table, p)?;
        let mut hs: BTreeSet<[i64; 3]> = BTreeSet::new();
        for chi in self.g.characters() {
            for i in 0..3 {
                let target = self.g.mul(chi, self.g.kappa(i));
                let d = (Monomial::var(i) + gg.rep(chi) - gg.rep(target)).0;
                if d.iter().all(|&a| a >= 0) {
                    continue;
                }
                let k = d.iter().fold(0i64, |acc, &a| acc.gcd(&a));
                hs.insert(d.map(|a| a / k));
            }
        }
        let hs: Vec<[i64; 3]> = hs.into_iter().collect();
        let poly = clip_delta(&hs);
        let n = self.g.order() as i64;
        let mut ids = Vec::new();
        for q in &poly {
            let scaled: Vec<BigRational> = q.iter().map(|c| c * BigInt::from(n)).collect();
            if !scaled.iter().all(|c| c.is_integer()) {
                return Err(invariant("chamber-vertex", format!("vertex {} not in (1/|G|)ℤ³", point_string(q))));
            }
            let num = [0, 1, 2].map(|i| scaled[i].to_integer().to_i64().unwrap_or(i64::MAX));
            match self.index.get(&num) {
                Some(&id) => ids.push(id),
                None => return Err(invariant("chamber-vertex", format!("vertex {num:?}/{n} not in L ∩ Δ"))),
            }
        }
        if ids.len() != 3 {
            return Err(invariant(
                "chamber-triangle",
                format!("σ(Γ) ∩ Δ has vertices {ids:?} at seed {}", point_string(p)),
            ));
        }
        ids.sort_unstable();
        let v = [ids[0], ids[1], ids[2]];
        let rows = v.map(|i| self.points[i].num);
        let det = det3(&rows);
        if det.abs() != n * n {
            return Err(invariant("basic-triangle", format!("{v:?} has determinant {det}, expected ±{}", n * n)));
        }
        // Γ must be ⟨e,·⟩-minimal at every ray generator (ties allowed on the boundary).
        for &id in &v {
            let e = self.points[id];
            for chi in self.g.characters() {
                let own = e.pair_scaled(&gg.rep(chi));
                if self.table.candidates(chi).iter().any(|m| e.pair_scaled(m) < own) {
                    return Err(invariant("chart-minimality", format!("Γ({}) not minimal at {e}", self.g.label(chi))));
                }
            }
        }
        let chart_ratios = dual_basis(&rows, n)?;
        Ok(Triangle { v, ggraph: gg, chart_ratios })
    }
}

fn dual_basis(rows: &[[i64; 3]; 3], n: i64) -> Result<[Monomial; 3]> {
    let det = det3(rows);
    // Column i of n·adj(A)/det(A) pairs to δ with the rows scaled by 1/n.
    let adj_col = |i: usize| -> [i64; 3] {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        cross(&rows[j], &rows[k])
    };
    let mut out = [Monomial::ONE; 3];
    for (i, slot) in out.iter_mut().enumerate() {
        let c = adj_col(i);
        let scaled = c.map(|a| a * n);
        if scaled.iter().any(|a| a % det != 0) {
            return Err(invariant("chart-ratios", format!("non-integral dual basis for {rows:?}")));
        }
        *slot = Monomial(scaled.map(|a| a / det));
    }
    Ok(out)
}

impl Triangulation {
    /// Builds `Σ` by chamber flood-fill. `seed_offset` shifts the prime sequence used
    /// for the generic seed and the crossing perturbations.
    pub fn build(g: &GroupData, table: &WeightTable, seed_offset: usize) -> Result<Self> {
        let points = g.junior_points();
        let index = GroupData::point_index(&points);
        let b = Builder { g, table, points: points.clone(), index };
        let primes = primes_from(seed_offset, 64);

        let mut first = None;
        for pair in primes.windows(2) {
            let (p, q) = (pair[0], pair[1]);
            let seed = [rat(1, 3) + rat(1, p), rat(1, 3) + rat(1, q), rat(1, 3) - rat(1, p) - rat(1, q)];
            match b.chamber(&seed) {
                Ok(t) => {
                    first = Some(t);
                    break;
                }
                Err(Error::Wall { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        let first = first.ok_or_else(|| invariant("flood-fill-seed", "no generic seed found"))?;

        let mut triangles = vec![first];
        let mut by_vertices: HashMap<[usize; 3], usize> = HashMap::from([(triangles[0].v, 0)]);
        let mut edge_tris: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
        for k in 0..3 {
            edge_tris.entry(sorted2(triangles[0].v[k], triangles[0].v[(k + 1) % 3])).or_default().push(0);
        }
        let mut queue = VecDeque::from([0usize]);
        while let Some(ti) = queue.pop_front() {
            let v = triangles[ti].v;
            for k in 0..3 {
                let (a, c0, c) = (v[k], v[(k + 1) % 3], v[(k + 2) % 3]);
                let key = sorted2(a, c0);
                if on_common_side(&points[a], &points[c0]) || edge_tris[&key].len() >= 2 {
                    continue;
                }
                let n = g.order() as i64;
                let mid: Point = [0, 1, 2].map(|i| rat(points[a].num[i] + points[c0].num[i], 2 * n));
                let away: Point = [0, 1, 2].map(|i| &mid[i] - rat(points[c].num[i], n));
                let mut found = None;
                'attempts: for (attempt, &p) in primes.iter().enumerate() {
                    let t = rat(1, 4 * p * n) / BigInt::from(1i64 << attempt.min(40));
                    let q: Point = [0, 1, 2].map(|i| &mid[i] + &away[i] * &t);
                    match b.chamber(&q) {
                        Ok(tri) if tri.v.contains(&a) && tri.v.contains(&c0) && tri.v != v => {
                            found = Some(tri);
                            break 'attempts;
                        }
                        Ok(_) | Err(Error::Wall { .. }) => continue,
                        Err(e) => return Err(e),
                    }
                }
                let tri = found
                    .ok_or_else(|| invariant("flood-fill-cross", format!("could not cross edge {key:?} of {v:?}")))?;
                if let Some(&existing) = by_vertices.get(&tri.v) {
                    if !edge_tris[&key].contains(&existing) {
                        edge_tris.get_mut(&key).unwrap().push(existing);
                    }
                    continue;
                }
                let id = triangles.len();
                by_vertices.insert(tri.v, id);
                for j in 0..3 {
                    edge_tris.entry(sorted2(tri.v[j], tri.v[(j + 1) % 3])).or_default().push(id);
                }
                triangles.push(tri);
                queue.push_back(id);
            }
        }
        for (key, ts) in edge_tris.iter_mut() {
            ts.sort_unstable();
            ts.dedup();
            let boundary = on_common_side(&points[key[0]], &points[key[1]]);
            let expected = if boundary { 1 } else { 2 };
            if ts.len() != expected {
                return Err(invariant("tiling", format!("edge {key:?} borders triangles {ts:?}")));
            }
        }
        Self::assemble(g, points, triangles)
    }

    fn assemble(g: &GroupData, points: Vec<JuniorPoint>, mut triangles: Vec<Triangle>) -> Result<Self> {
        triangles.sort_by_key(|t| t.v);
        let n = g.order();
        if triangles.len() != n {
            return Err(invariant("tiling-area", format!("{} triangles for |G| = {n}", triangles.len())));
        }
        let mut edge_set: BTreeSet<[usize; 2]> = BTreeSet::new();
        for t in &triangles {
            for k in 0..3 {
                edge_set.insert(sorted2(t.v[k], t.v[(k + 1) % 3]));
            }
        }
        let mut edges = Vec::with_capacity(edge_set.len());
        for key in &edge_set {
            let (e, f) = (&points[key[0]], &points[key[1]]);
            let (m1, m2, chi) = edge_ratio(g, e, f)?;
            edges.push(Edge { v: *key, m1, m2, chi, interior: !on_common_side(e, f) });
        }
        let edge_index: HashMap<[usize; 2], usize> = edges.iter().enumerate().map(|(i, e)| (e.v, i)).collect();
        let mut edge_triangles = vec![Vec::new(); edges.len()];
        let mut vertex_triangles = vec![Vec::new(); points.len()];
        let mut neighbors = vec![BTreeSet::new(); points.len()];
        for (ti, t) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (t.v[k], t.v[(k + 1) % 3]);
                edge_triangles[edge_index[&sorted2(a, b)]].push(ti);
                vertex_triangles[a].push(ti);
                neighbors[a].insert(b);
                neighbors[b].insert(a);
            }
        }
        if let Some(lonely) = (0..points.len()).find(|&i| vertex_triangles[i].is_empty()) {
            return Err(invariant("crepancy", format!("junior point {} is not a vertex of Σ", points[lonely])));
        }
        Ok(Triangulation { points, triangles, edges, edge_index, edge_triangles, vertex_triangles, neighbors })
    }

    pub fn edge(&self, a: usize, b: usize) -> Option<&Edge> {
        self.edge_index.get(&sorted2(a, b)).map(|&i| &self.edges[i])
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&sorted2(a, b)).copied()
    }

    /// Triangles containing the edge with the given index.
    pub fn triangles_of_edge(&self, edge: usize) -> &[usize] {
        &self.edge_triangles[edge]
    }

    pub fn triangles_of_vertex(&self, v: usize) -> &[usize] {
        &self.vertex_triangles[v]
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.neighbors[v]
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors[a].contains(&b)
    }

    pub fn is_triangle(&self, mut v: [usize; 3]) -> bool {
        v.sort_unstable();
        self.triangles.binary_search_by_key(&v, |t| t.v).is_ok()
    }

    /// Any triangle containing vertex `v` (used as the chart for `E_v`).
    pub fn chart_of(&self, v: usize) -> &Triangle {
        &self.triangles[self.vertex_triangles[v][0]]
    }

    /// Whether the edge from `a` to `b` and the edge from `b` to `c` are collinear
    /// with `b` strictly between `a` and `c`.
    pub fn straight_through(&self, a: usize, b: usize, c: usize) -> bool {
        let (pa, pb, pc) = (&self.points[a].num, &self.points[b].num, &self.points[c].num);
        let (u, w) = (sub(pb, pa), sub(pc, pb));
        cross(&u, &w) == [0, 0, 0] && (0..3).map(|i| u[i] * w[i]).sum::<i64>() > 0
    }

    pub fn collinear(&self, ids: &[usize]) -> bool {
        if ids.len() < 3 {
            return true;
        }
        let p0 = self.points[ids[0]].num;
        let d = sub(&self.points[ids[1]].num, &p0);
        ids[2..].iter().all(|&k| cross(&d, &sub(&self.points[k].num, &p0)) == [0, 0, 0])
    }

    /// Classifies the prime divisor `E_v` by position and, for interior vertices, by star shape.
    pub fn classify_vertex(&self, v: usize) -> Result<PrimeDivisor> {
        let p = &self.points[v];
        let valence = self.neighbors[v].len();
        let kind = match p.zero_axes() {
            2 => DivisorKind::CornerStrictTransform,
            1 => DivisorKind::SideNonCompact,
            _ => DivisorKind::InteriorCompact,
        };
        if kind != DivisorKind::InteriorCompact {
            return Ok(PrimeDivisor { id: v, kind, surface: None, valence });
        }
        let nb: Vec<usize> = self.neighbors[v].iter().copied().collect();
        let mut lines = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if self.straight_through(a, v, b) {
                    lines += 1;
                }
            }
        }
        let on_corner_line = |f: usize| (0..3).any(|c| c == f || self.collinear(&[v, f, c]));
        let surface = match (valence, lines) {
            (3, 0) if nb.iter().all(|&f| on_corner_line(f)) => Surface::P2,
            (6, 3) => Surface::DelPezzo6,
            (4..=6, l) if l >= 1 => Surface::ScrollBlownUp((valence - 4) as u8),
            _ => {
                return Err(invariant(
                    "vertex-star",
                    format!("interior vertex {} has valence {valence} and {lines} through-lines", self.points[v]),
                ))
            }
        };
        Ok(PrimeDivisor { id: v, kind, surface: Some(surface), valence })
    }

    /// Compact components `𝒵₂` (interior vertices) and curve components `𝒵₁` (edges
    /// joining boundary points of `Δ` across its interior) of the fibre over the origin.
    pub fn zero_fibre(&self) -> (Vec<usize>, Vec<[usize; 2]>) {
        let z2 = (0..self.points.len()).filter(|&i| self.points[i].is_interior()).collect();
        let z1 = self
            .edges
            .iter()
            .filter(|e| {
                let (a, b) = (&self.points[e.v[0]], &self.points[e.v[1]]);
                !a.is_interior() && !b.is_interior() && e.interior
            })
            .map(|e| e.v)
            .collect();
        (z2, z1)
    }

    /// Normalized area of a triangle relative to `Δ`, as `(numerator, denominator)`.
    pub fn triangle_area(&self, t: &Triangle) -> (i64, i64) {
        let n = self.points[0].den;
        let det = det3(&t.v.map(|i| self.points[i].num)).abs();
        let g = det.gcd(&(n * n * n));
        (det / g, n * n * n / g)
    }
}
