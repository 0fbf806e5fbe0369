//! Transforms `Ψ(𝒪₀ ⊗ χ)`, computed twice: from the vanishing divisors of the
//! Koszul cube of `χ`, and from the role of `χ` in Reid's recipe.

use std::collections::BTreeSet;

use crate::divisor::DivisorSum;
use crate::error::{invariant, Result};
use crate::fan::Triangulation;
use crate::group::{Character, Monomial};
use crate::quiver::{Cube, Model};
use crate::recipe::RecipeRole;

/// Torus-invariant strata listed by their cones in `Σ`: divisors by vertex,
/// curves by edge and points by triangle.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct StratumSet {
    pub divisors: BTreeSet<usize>,
    pub curves: BTreeSet<[usize; 2]>,
    pub points: BTreeSet<[usize; 3]>,
}

impl StratumSet {
    pub fn from_divisors(ids: impl IntoIterator<Item = usize>) -> Self {
        StratumSet { divisors: ids.into_iter().collect(), ..Default::default() }
    }

    pub fn from_curves(curves: impl IntoIterator<Item = [usize; 2]>) -> Self {
        StratumSet { curves: curves.into_iter().map(sorted2).collect(), ..Default::default() }
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty() && self.curves.is_empty() && self.points.is_empty()
    }

    /// The cones of all listed strata.
    pub fn cones(&self) -> Vec<Vec<usize>> {
        let d = self.divisors.iter().map(|&v| vec![v]);
        let c = self.curves.iter().map(|c| c.to_vec());
        let p = self.points.iter().map(|t| t.to_vec());
        d.chain(c).chain(p).collect()
    }

    /// Drops every stratum lying inside another listed stratum.
    pub fn minimise(&mut self) {
        let divisors = self.divisors.clone();
        self.curves.retain(|c| !c.iter().any(|v| divisors.contains(v)));
        let curves = self.curves.clone();
        self.points.retain(|t| {
            !t.iter().any(|v| divisors.contains(v))
                && !(0..3).any(|k| curves.contains(&sorted2([t[k], t[(k + 1) % 3]])))
        });
    }

    pub fn union(&self, other: &StratumSet) -> StratumSet {
        let mut u = StratumSet {
            divisors: &self.divisors | &other.divisors,
            curves: &self.curves | &other.curves,
            points: &self.points | &other.points,
        };
        u.minimise();
        u
    }

    /// Whether the union of the strata is connected. Two closed strata meet
    /// exactly when the union of their cones is again a cone of `Σ`.
    pub fn is_connected(&self, fan: &Triangulation) -> bool {
        let cones = self.cones();
        if cones.is_empty() {
            return true;
        }
        let mut seen = vec![false; cones.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..cones.len() {
                if !seen[j] && is_cone(fan, cones[i].iter().chain(&cones[j]).copied()) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Prime divisors whose closure meets some listed stratum.
    pub fn meeting_primes(&self, fan: &Triangulation) -> BTreeSet<usize> {
        let cones = self.cones();
        (0..fan.points.len()).filter(|&f| cones.iter().any(|c| is_cone(fan, c.iter().copied().chain([f])))).collect()
    }
}

fn sorted2(mut c: [usize; 2]) -> [usize; 2] {
    c.sort_unstable();
    c
}

fn is_cone(fan: &Triangulation, ids: impl Iterator<Item = usize>) -> bool {
    let set: BTreeSet<usize> = ids.collect();
    let v: Vec<usize> = set.into_iter().collect();
    match v.len() {
        1 => true,
        2 => fan.adjacent(v[0], v[1]),
        3 => fan.is_triangle([v[0], v[1], v[2]]),
        _ => false,
    }
}

/// The inclusion-minimal cones of `Σ` having a ray in the support of every input,
/// i.e. the strata of the intersection of the reduced divisors.
pub fn intersect_reduced(fan: &Triangulation, divisors: &[&DivisorSum]) -> StratumSet {
    let meets = |cone: &[usize]| divisors.iter().all(|d| cone.iter().any(|&v| d.contains(v)));
    let mut s = StratumSet {
        divisors: (0..fan.points.len()).filter(|&v| meets(&[v])).collect(),
        curves: fan.edges.iter().filter(|e| meets(&e.v)).map(|e| e.v).collect(),
        points: fan.triangles.iter().filter(|t| meets(&t.v)).map(|t| t.v).collect(),
    };
    s.minimise();
    s
}

/// Named pieces of a cube: `Dⁱ`, `Dⁱⱼ`, `Dⁱⱼₖ` and `D̃ⁱⱼ` (0-based axes).
struct CubeDivisors<'a>(&'a Cube);

impl CubeDivisors<'_> {
    /// `Dⁱ`: the arrow `Lᵢ → L`.
    fn last(&self, i: usize) -> &DivisorSum {
        self.0.divisor(0, i)
    }

    /// `Dⁱⱼ`: the arrow `L_{ij} → L_j`.
    fn middle(&self, i: usize, j: usize) -> &DivisorSum {
        self.0.divisor(1 << j, i)
    }

    /// `Dⁱ_{jk}`: the arrow `L₁₂₃ → L_{jk}`.
    fn first(&self, i: usize) -> &DivisorSum {
        self.0.divisor(0b111 ^ (1 << i), i)
    }

    /// `D̃ⁱⱼ = Dⁱⱼ − gcd(Dⁱⱼ, Dʲᵢ)`.
    fn tilde(&self, i: usize, j: usize) -> DivisorSum {
        self.middle(i, j) - &self.middle(i, j).gcd(self.middle(j, i))
    }

    /// `L₁₂₃ = L(−path)`, the same along every path.
    fn top_twist(&self) -> DivisorSum {
        let path = &(self.last(0) + self.middle(1, 0)) + self.first(2);
        -&path
    }
}

/// Which `lcm` the quotient formula uses for the pair `{v, u}` with third index `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LcmVariant {
    /// `lcm(Dᵛₖ, Dᵘₖ)`.
    Plain,
    /// `lcm` with `Dʲₖ` replaced by `D̃ʲₖ`.
    OneTilde(usize),
    /// `lcm(D̃ᵛₖ, D̃ᵘₖ)`.
    BothTilde,
}

/// The pairs `{v, u}` oriented cyclically, so that the quotient for `{v, u}`
/// reads `D^k + lcm(Dᵛₖ, Dᵘₖ) − D̃ᵘᵥ − Dᵛ`.
pub const CYCLIC_PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

/// A graded piece of a filtration of `H⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    /// The cyclically oriented pair `(v, u)`.
    pub pair: (usize, usize),
    pub support: StratumSet,
    /// The twist relative to the bottom corner `L`: `−Dᵛ − D̃ᵘᵥ`.
    pub twist: DivisorSum,
}

fn quotient(fan: &Triangulation, c: &CubeDivisors, (v, u): (usize, usize), variant: LcmVariant) -> Quotient {
    let k = 3 - v - u;
    let side = |j: usize| match variant {
        LcmVariant::Plain => c.middle(j, k).clone(),
        LcmVariant::OneTilde(t) if t != j => c.middle(j, k).clone(),
        _ => c.tilde(j, k),
    };
    let g = c.middle(u, v).gcd(c.middle(v, u));
    let tilde_uv = c.tilde(u, v);
    let w = &(&(c.last(k) + &side(v).lcm(&side(u))) - &tilde_uv) - c.last(v);
    let w = w.effective();
    let support = if g.is_zero() || w.is_zero() { StratumSet::default() } else { intersect_reduced(fan, &[&g, &w]) };
    Quotient { pair: (v, u), support, twist: &(-c.last(v)) - &tilde_uv }
}

/// The cohomology sheaves of the total complex of a cube, as the divisor data
/// they are built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeCohomology {
    /// Support of `H⁰ = L ⊗ 𝒪_Z`.
    pub h0: StratumSet,
    /// For each ordering `(I, J, K)` of the three pairs, the quotients
    /// `F''_I`, `F'_J`, `F_K` of the filtration of `H⁻¹`.
    pub h_minus1: Vec<[Quotient; 3]>,
    /// `D = gcd(D¹₂₃, D²₁₃, D³₁₂)`; `H⁻² = L₁₂₃(D) ⊗ 𝒪_D`.
    pub h_minus2: DivisorSum,
    /// `L₁₂₃` relative to `L`.
    pub top_twist: DivisorSum,
}

impl CubeCohomology {
    /// Support of `H⁻¹`, read off one filtration.
    pub fn h_minus1_support(&self, ordering: usize) -> StratumSet {
        self.h_minus1[ordering].iter().fold(StratumSet::default(), |acc, q| acc.union(&q.support))
    }

    /// The degrees in `{−2, −1, 0}` whose sheaf is nonzero.
    pub fn nonzero_degrees(&self) -> Vec<i8> {
        let mut d = Vec::new();
        if !self.h_minus2.is_zero() {
            d.push(-2);
        }
        if !self.h_minus1_support(0).is_empty() {
            d.push(-1);
        }
        if !self.h0.is_empty() {
            d.push(0);
        }
        d
    }

    /// An ordering in which exactly one quotient is nonzero, with that quotient.
    pub fn single_quotient(&self) -> Option<&Quotient> {
        self.h_minus1.iter().find_map(|qs| {
            let mut nonzero = qs.iter().filter(|q| !q.support.is_empty());
            match (nonzero.next(), nonzero.next()) {
                (Some(q), None) => Some(q),
                _ => None,
            }
        })
    }
}

/// All six orderings `(I, J, K)` of the pairs, as indices into [`CYCLIC_PAIRS`].
const ORDERINGS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

pub fn cube_cohomology(model: &Model, chi: Character) -> Result<CubeCohomology> {
    cohomology_of_cube(&model.fan, &model.cube(chi), &model.group.label(chi))
}

/// The cohomology data of an arbitrary cube over `Σ`; `label` names it in errors.
pub fn cohomology_of_cube(fan: &Triangulation, cube: &Cube, label: &str) -> Result<CubeCohomology> {
    let c = CubeDivisors(cube);
    let h0 = intersect_reduced(fan, &[c.last(0), c.last(1), c.last(2)]);
    let h_minus2 = c.first(0).gcd(c.first(1)).gcd(c.first(2));
    let h_minus1: Vec<[Quotient; 3]> = ORDERINGS
        .iter()
        .map(|&[i, j, k]| {
            let (pi, pj, pk) = (CYCLIC_PAIRS[i], CYCLIC_PAIRS[j], CYCLIC_PAIRS[k]);
            let third_j = 3 - pj.0 - pj.1;
            let tilded = if pk.0 == third_j { pk.1 } else { pk.0 };
            [
                quotient(fan, &c, pi, LcmVariant::BothTilde),
                quotient(fan, &c, pj, LcmVariant::OneTilde(tilded)),
                quotient(fan, &c, pk, LcmVariant::Plain),
            ]
        })
        .collect();
    let result = CubeCohomology { h0, h_minus1, h_minus2, top_twist: c.top_twist() };
    let first = result.h_minus1_support(0);
    for o in 1..ORDERINGS.len() {
        if result.h_minus1_support(o) != first {
            return Err(invariant(
                "h-minus-one-filtrations",
                format!("{label}: filtrations disagree on the support of H^-1"),
            ));
        }
    }
    Ok(result)
}

/// For the pair `(v, u)` with third index `k`: `gcd(Dᵘᵥ, Dᵛᵤ)` and the effective part
/// of `Dᵏ + lcm(Dᵛₖ, Dᵘₖ) − D̃ᵘᵥ − Dᵛ`.
pub fn plain_quotient_divisors(cube: &Cube, (v, u): (usize, usize)) -> (DivisorSum, DivisorSum) {
    let c = CubeDivisors(cube);
    let k = 3 - v - u;
    let g = c.middle(u, v).gcd(c.middle(v, u));
    let w = &(&(c.last(k) + &c.middle(v, k).lcm(c.middle(u, k))) - &c.tilde(u, v)) - c.last(v);
    (g, w.effective())
}

/// `D¹, D², D³`: the divisors of the arrows into `L`.
pub fn final_divisors(cube: &Cube) -> [&DivisorSum; 3] {
    std::array::from_fn(|i| cube.divisor(0, i))
}

/// The xyz-path identity `Dᵏ_{vu} + gcd(Dᵘᵥ, Dᵛᵤ) = div(xyz) − lcm(Dᵛ, Dᵘ)` for every pair.
pub fn xyz_path_identity(cube: &Cube) -> bool {
    let c = CubeDivisors(cube);
    let xyz = DivisorSum::from_mults(vec![1; cube.arrows[0].divisor.len()]);
    CYCLIC_PAIRS.iter().all(|&(v, u)| {
        let k = 3 - v - u;
        c.first(k) + &c.middle(u, v).gcd(c.middle(v, u)) == &xyz - &c.last(v).lcm(c.last(u))
    })
}

/// Which dualizing sheaf a trivial-character component is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualizingComponent {
    /// `ω_{𝒵₂} = 𝒪(𝒵₂) ⊗ 𝒪_{𝒵₂}`.
    Surfaces,
    /// `ω_{𝒵₁}(𝒵₂)`.
    Curves,
}

/// The restriction of the champions sheaf to the locus `S₃` where all three
/// chains meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum S3Sheaf {
    /// `P` meets none of `E_x, E_y, E_z`: free of rank 2.
    Free,
    /// `P` meets exactly `E_a`: `𝒪(E_a) ⊕ 𝒪`.
    OneTwist(usize),
    /// `P` meets exactly `E_a` and `E_b`: `𝒪(E_a) ⊕ 𝒪(E_b)`.
    TwoTwists([usize; 2]),
    /// `P` meets all three: `S₃ = P ≅ ℙ²` and the sheaf is `T_{ℙ²}`.
    TangentP2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChampionsCokernel {
    pub centre: usize,
    /// `Z_axis`: the internal divisors of the chain through `P` avoiding `e_axis`.
    pub chains: [BTreeSet<usize>; 3],
    /// Divisors where the sheaf has rank 1.
    pub s2: BTreeSet<usize>,
    /// `P` and the curves `Q_a ∩ Q_b` between non-corner neighbours of `P`; rank 2.
    pub s3: StratumSet,
    pub s3_sheaf: S3Sheaf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Special {
    Champions(ChampionsCokernel),
    Dualizing {
        component: DualizingComponent,
        /// For curve components: the degree of the sheaf on each curve.
        curve_degrees: Vec<([usize; 2], i64)>,
    },
}

/// One nonzero cohomology sheaf `𝓛⁻¹_χ(twist) ⊗ F` on `support`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafDescriptor {
    pub degree: i8,
    pub twist: DivisorSum,
    pub support: StratumSet,
    pub special: Option<Special>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ByLemma,
    ByTheorem,
    CrossChecked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformResult {
    pub chi: Character,
    /// Nonzero degrees in increasing order.
    pub descriptors: Vec<SheafDescriptor>,
    pub provenance: Provenance,
}

impl TransformResult {
    pub fn degree(&self, d: i8) -> Option<&SheafDescriptor> {
        self.descriptors.iter().find(|s| s.degree == d)
    }
}

/// The dualizing-sheaf degree on each curve of `𝒵₁`: `−2` plus the number of
/// points where it meets the rest of `𝒵₁` and where it meets `𝒵₂`.
pub fn trivial_curve_degrees(fan: &Triangulation) -> Vec<([usize; 2], i64)> {
    let (z2, z1) = fan.zero_fibre();
    z1.iter()
        .map(|&c| {
            let e = fan.edge_id(c[0], c[1]).expect("curve is an edge");
            let mut deg = -2;
            for &t in fan.triangles_of_edge(e) {
                let apex = fan.triangles[t].v.into_iter().find(|v| !c.contains(v)).expect("apex");
                if z2.contains(&apex) {
                    deg += 1;
                }
                let node = z1.iter().any(|&d| d != c && d.iter().all(|v| fan.triangles[t].v.contains(v)));
                if node {
                    deg += 1;
                }
            }
            (c, deg)
        })
        .collect()
}

/// `Ψ(𝒪₀ ⊗ χ₀)`: dualizing sheaves of the two-dimensional and one-dimensional
/// parts of the zero fibre, or the skyscraper at the fixed point when `G` is trivial.
pub fn trivial_transform(model: &Model) -> Vec<SheafDescriptor> {
    let fan = &model.fan;
    let np = model.num_points();
    if model.group.order() == 1 {
        return vec![SheafDescriptor {
            degree: 0,
            twist: DivisorSum::zero(np),
            support: StratumSet { points: fan.triangles.iter().map(|t| t.v).collect(), ..Default::default() },
            special: None,
        }];
    }
    let (z2, z1) = fan.zero_fibre();
    let mut out = Vec::new();
    if !z2.is_empty() {
        out.push(SheafDescriptor {
            degree: -2,
            twist: DivisorSum::reduced(np, z2.iter().copied()),
            support: StratumSet::from_divisors(z2.iter().copied()),
            special: Some(Special::Dualizing { component: DualizingComponent::Surfaces, curve_degrees: vec![] }),
        });
    }
    if !z1.is_empty() {
        out.push(SheafDescriptor {
            degree: -1,
            twist: DivisorSum::zero(np),
            support: StratumSet::from_curves(z1.iter().copied()),
            special: Some(Special::Dualizing {
                component: DualizingComponent::Curves,
                curve_degrees: trivial_curve_degrees(fan),
            }),
        });
    }
    out
}

fn champions(model: &Model, centre: usize, branches: &[Vec<usize>; 3]) -> ChampionsCokernel {
    let fan = &model.fan;
    let interior = |k: usize| branches[k][..branches[k].len() - 1].iter().copied();
    let chains = std::array::from_fn(|a| {
        let mut z: BTreeSet<usize> = (0..3).filter(|&k| k != a).flat_map(interior).collect();
        z.insert(centre);
        z
    });
    let s2: BTreeSet<usize> = (0..3).flat_map(interior).collect();
    let touching: Vec<usize> = (0..3).filter(|&k| fan.adjacent(centre, k)).collect();
    let scrolls: Vec<usize> = (0..3).map(|k| branches[k][0]).filter(|&q| q > 2).collect();
    let mut s3 = StratumSet::from_divisors([centre]);
    for (i, &a) in scrolls.iter().enumerate() {
        for &b in &scrolls[i + 1..] {
            s3.curves.insert(sorted2([a, b]));
        }
    }
    let s3_sheaf = match touching[..] {
        [] => S3Sheaf::Free,
        [a] => S3Sheaf::OneTwist(a),
        [a, b] => S3Sheaf::TwoTwists([a, b]),
        _ => S3Sheaf::TangentP2,
    };
    ChampionsCokernel { centre, chains, s2, s3, s3_sheaf }
}

/// The transform read off the role of `χ` in Reid's recipe.
pub fn emit_by_theorem(model: &Model, role: &RecipeRole) -> Vec<SheafDescriptor> {
    let np = model.num_points();
    let line = |degree, twist: DivisorSum, support| vec![SheafDescriptor { degree, twist, support, special: None }];
    match role {
        RecipeRole::Trivial => trivial_transform(model),
        RecipeRole::SingleVertex { vertex } => line(0, DivisorSum::zero(np), StratumSet::from_divisors([*vertex])),
        RecipeRole::SingleChain { path, .. } | RecipeRole::LongSide { path, .. } if path.len() == 2 => {
            line(0, DivisorSum::zero(np), StratumSet::from_curves([[path[0], path[1]]]))
        }
        RecipeRole::SingleChain { path, .. } | RecipeRole::LongSide { path, .. } => {
            let ends = [path[0], path[path.len() - 1]];
            line(
                -1,
                -&DivisorSum::reduced(np, ends),
                StratumSet::from_divisors(path[1..path.len() - 1].iter().copied()),
            )
        }
        RecipeRole::MeetingOfChampions { centre, branches, .. } => {
            let special = champions(model, *centre, branches);
            let mut support = StratumSet::from_divisors(special.s2.iter().copied());
            support.divisors.insert(*centre);
            vec![SheafDescriptor {
                degree: -1,
                twist: -&DivisorSum::reduced(np, [0, 1, 2]),
                support,
                special: Some(Special::Champions(special)),
            }]
        }
    }
}

/// Whether `𝒪(diff)` is trivial near `support`: some invariant Laurent monomial
/// has divisor agreeing with `diff` on every prime meeting `support`.
pub fn twist_trivial_near(model: &Model, diff: &DivisorSum, support: &StratumSet) -> bool {
    let fan = &model.fan;
    let primes: Vec<usize> = support.meeting_primes(fan).into_iter().collect();
    let n = model.group.order() as i128;
    let rows: Vec<[i128; 3]> = primes.iter().map(|&f| fan.points[f].num.map(i128::from)).collect();
    let rhs: Vec<i128> = primes.iter().map(|&f| n * diff.get(f) as i128).collect();
    let Some(basis) = independent_triple(&rows) else {
        return primes.iter().all(|&f| diff.get(f) == 0);
    };
    let a = basis.map(|i| rows[i]);
    let b = basis.map(|i| rhs[i]);
    let det = det3(&a);
    let mut m = [0i64; 3];
    for (col, slot) in m.iter_mut().enumerate() {
        let mut ac = a;
        for r in 0..3 {
            ac[r][col] = b[r];
        }
        let num = det3(&ac);
        if num % det != 0 {
            return false;
        }
        *slot = (num / det) as i64;
    }
    let m = Monomial(m);
    model.group.in_m(&m)
        && rows.iter().zip(&rhs).all(|(r, &b)| (0..3).map(|i| r[i] * m.0[i] as i128).sum::<i128>() == b)
}

fn det3(a: &[[i128; 3]; 3]) -> i128 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

fn independent_triple(rows: &[[i128; 3]]) -> Option<[usize; 3]> {
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            for k in j + 1..rows.len() {
                if det3(&[rows[i], rows[j], rows[k]]) != 0 {
                    return Some([i, j, k]);
                }
            }
        }
    }
    None
}

/// `E_f · C` for every prime `f`, where `C` is the compact curve of the interior
/// edge `(a, b)`, from the relation `e_c + e_d + α e_a + β e_b = 0`.
pub fn curve_intersections(fan: &Triangulation, curve: [usize; 2]) -> Option<Vec<i64>> {
    let e = fan.edge_id(curve[0], curve[1])?;
    let tris = fan.triangles_of_edge(e);
    if tris.len() != 2 {
        return None;
    }
    let apex = |t: usize| fan.triangles[t].v.into_iter().find(|v| !curve.contains(v)).expect("apex");
    let (c, d) = (apex(tris[0]), apex(tris[1]));
    let p = |i: usize| fan.points[i].num;
    let rhs: [i64; 3] = std::array::from_fn(|k| -(p(c)[k] + p(d)[k]));
    let (pa, pb) = (p(curve[0]), p(curve[1]));
    // Solve α pa + β pb = rhs using the first pair of coordinates with a nonzero minor.
    let (k, l) = [(0, 1), (0, 2), (1, 2)].into_iter().find(|&(k, l)| pa[k] * pb[l] - pa[l] * pb[k] != 0)?;
    let det = pa[k] * pb[l] - pa[l] * pb[k];
    let (na, nb) = (rhs[k] * pb[l] - rhs[l] * pb[k], pa[k] * rhs[l] - pa[l] * rhs[k]);
    if na % det != 0 || nb % det != 0 {
        return None;
    }
    let (alpha, beta) = (na / det, nb / det);
    if (0..3).any(|m| alpha * pa[m] + beta * pb[m] != rhs[m]) {
        return None;
    }
    let mut out = vec![0; fan.points.len()];
    out[curve[0]] = alpha;
    out[curve[1]] = beta;
    out[c] += 1;
    out[d] += 1;
    Some(out)
}

fn degree_on(fan: &Triangulation, twist: &DivisorSum, curve: [usize; 2]) -> Option<i64> {
    let ints = curve_intersections(fan, curve)?;
    Some(twist.mults().iter().zip(&ints).map(|(a, b)| a * b).sum())
}

/// The transform of a nontrivial character is a single sheaf: exactly one nonzero degree, with
/// connected support.
pub fn check_single_sheaf(model: &Model, chi: Character, lemma: &CubeCohomology) -> Result<()> {
    let label = model.group.label(chi);
    let degrees = lemma.nonzero_degrees();
    if degrees.len() != 1 {
        return Err(invariant("single-sheaf", format!("{label}: nonzero degrees {degrees:?}")));
    }
    let support = match degrees[0] {
        0 => lemma.h0.clone(),
        -1 => lemma.h_minus1_support(0),
        _ => return Err(invariant("single-sheaf", format!("{label}: H^-2 is nonzero"))),
    };
    if !support.points.is_empty() {
        return Err(invariant("single-sheaf", format!("{label}: support contains torus fixed points")));
    }
    if !support.is_connected(&model.fan) {
        return Err(invariant("single-sheaf", format!("{label}: support is disconnected")));
    }
    Ok(())
}

fn mismatch(model: &Model, chi: Character, detail: String) -> crate::error::Error {
    invariant("derived-cross-check", format!("{}: {detail}", model.group.label(chi)))
}

/// Compares the two routes for `χ` and returns the theorem-route descriptors.
pub fn cross_check(model: &Model, role: &RecipeRole, chi: Character) -> Result<TransformResult> {
    let lemma = cube_cohomology(model, chi)?;
    let theorem = emit_by_theorem(model, role);
    let fan = &model.fan;
    if chi != model.group.trivial() {
        check_single_sheaf(model, chi, &lemma)?;
    }
    let lemma_degrees = lemma.nonzero_degrees();
    let theorem_degrees: Vec<i8> = theorem.iter().map(|d| d.degree).collect();
    if lemma_degrees != theorem_degrees {
        return Err(mismatch(
            model,
            chi,
            format!("degrees {lemma_degrees:?} by the cube, {theorem_degrees:?} by the recipe"),
        ));
    }
    for d in &theorem {
        let support = match d.degree {
            0 => lemma.h0.clone(),
            -1 => lemma.h_minus1_support(0),
            _ => StratumSet::from_divisors(lemma.h_minus2.support()),
        };
        if support != d.support {
            return Err(mismatch(
                model,
                chi,
                format!("H^{} support {:?} by the cube, {:?} by the recipe", d.degree, support, d.support),
            ));
        }
        match (d.degree, &d.special) {
            (0, _) => {}
            (-2, _) => {
                if !lemma.h_minus2.is_reduced() {
                    return Err(mismatch(model, chi, "H^-2 divisor is not reduced".into()));
                }
                let raw = &lemma.h_minus2 + &lemma.top_twist;
                if !twist_trivial_near(model, &(&raw - &d.twist), &d.support) {
                    return Err(mismatch(model, chi, "H^-2 twist differs".into()));
                }
            }
            // Both cases give several nonzero quotients in every filtration, so the
            // cube determines the support but not the extension.
            (_, Some(Special::Champions(_))) => {}
            (_, None) if matches!(role, RecipeRole::LongSide { .. }) => {}
            (_, Some(Special::Dualizing { curve_degrees, .. })) => {
                for &(curve, expected) in curve_degrees {
                    for qs in &lemma.h_minus1 {
                        let holding: Vec<&Quotient> = qs.iter().filter(|q| q.support.curves.contains(&curve)).collect();
                        let [q] = holding[..] else {
                            return Err(mismatch(
                                model,
                                chi,
                                format!("curve {curve:?} lies in {} quotients", holding.len()),
                            ));
                        };
                        if degree_on(fan, &q.twist, curve) != Some(expected) {
                            return Err(mismatch(model, chi, format!("degree on curve {curve:?} differs")));
                        }
                    }
                }
            }
            (_, None) => {
                let Some(q) = lemma.single_quotient() else {
                    return Err(mismatch(model, chi, "no filtration has a single nonzero quotient".into()));
                };
                if !twist_trivial_near(model, &(&q.twist - &d.twist), &d.support) {
                    return Err(mismatch(model, chi, format!("H^-1 twist {} by the cube", display_twist(&q.twist))));
                }
            }
        }
    }
    Ok(TransformResult { chi, descriptors: theorem, provenance: Provenance::CrossChecked })
}

fn display_twist(d: &DivisorSum) -> String {
    d.terms().iter().map(|(p, m)| format!("{m:+}{p}")).collect::<Vec<_>>().join("")
}

/// Cross-checked transforms of every character, in character order.
pub fn derived_table(model: &Model, roles: &[RecipeRole]) -> Result<Vec<TransformResult>> {
    model.group.characters().map(|chi| cross_check(model, &roles[chi.index()], chi)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recipe::{classify_all, Marking};
    use proptest::prelude::*;

    fn setup(s: &str) -> (Model, Vec<RecipeRole>) {
        let m = Model::new(&s.parse().unwrap()).unwrap();
        let marking = Marking::compute(&m).unwrap();
        let roles = classify_all(&m, &marking).unwrap();
        (m, roles)
    }

    fn chi(m: &Model, label: &str) -> Character {
        m.group.parse_label(label).unwrap()
    }

    #[test]
    fn intersections_of_final_divisors() {
        let (m, _) = setup("1/15:1,5,9");
        let finals = |c: Character| {
            let cube = m.cube(c);
            let d = CubeDivisors(&cube);
            intersect_reduced(&m.fan, &[d.last(0), d.last(1), d.last(2)])
        };
        // E_4 and the curve E_7 ∩ E_11.
        assert_eq!(finals(chi(&m, "1")), StratumSet::from_divisors([3]));
        assert_eq!(finals(chi(&m, "3")), StratumSet::from_curves([[6, 10]]));
        let a = DivisorSum::reduced(13, [3]);
        let b = DivisorSum::reduced(13, [12]);
        assert!(intersect_reduced(&m.fan, &[&a, &b]).is_empty());
    }

    #[test]
    fn chain_quotient_twist() {
        let (m, _) = setup("1/15:1,5,9");
        let lemma = cube_cohomology(&m, chi(&m, "5")).unwrap();
        assert_eq!(lemma.nonzero_degrees(), vec![-1]);
        let q = lemma.single_quotient().unwrap();
        assert_eq!(q.support, StratumSet::from_divisors([6, 9]));
        let expected = -&DivisorSum::reduced(13, [3, 11]);
        assert!(twist_trivial_near(&m, &(&q.twist - &expected), &q.support));
        assert!(!twist_trivial_near(&m, &(&q.twist - &DivisorSum::zero(13)), &q.support));
    }

    #[test]
    fn invariant_monomials_give_trivial_twists() {
        let (m, _) = setup("1/3:1,1,1");
        let p = StratumSet::from_divisors([3]);
        // div(x³) = 3E_x + E_4.
        assert!(twist_trivial_near(&m, &DivisorSum::from_mults(vec![3, 0, 0, 1]), &p));
        assert!(!twist_trivial_near(&m, &DivisorSum::from_mults(vec![0, 0, 0, 1]), &p));
    }

    #[test]
    fn line_in_the_projective_plane() {
        let (m, _) = setup("1/3:1,1,1");
        assert_eq!(curve_intersections(&m.fan, [0, 3]), Some(vec![1, 1, 1, -3]));
    }

    #[test]
    fn trivial_character_of_one_fifteenth() {
        let (m, roles) = setup("1/15:1,5,9");
        let r = cross_check(&m, &roles[0], m.group.trivial()).unwrap();
        let h2 = r.degree(-2).unwrap();
        assert_eq!(h2.support, StratumSet::from_divisors([3, 4, 6, 9]));
        assert_eq!(h2.twist, DivisorSum::reduced(13, [3, 4, 6, 9]));
        let h1 = r.degree(-1).unwrap();
        assert_eq!(h1.support, StratumSet::from_curves([[11, 12]]));
        let Some(Special::Dualizing { curve_degrees, .. }) = &h1.special else { panic!() };
        assert_eq!(curve_degrees, &vec![([11, 12], -1)]);
    }

    #[test]
    fn worked_example_rows() {
        let (m, roles) = setup("1/15:1,5,9");
        let table = derived_table(&m, &roles).unwrap();
        let row = |l: &str| &table[chi(&m, l).index()];
        let h0 = row("14").degree(0).unwrap();
        assert_eq!(h0.support, StratumSet::from_curves([[11, 12]]));
        let h1 = row("6").degree(-1).unwrap();
        assert_eq!(h1.twist, -&DivisorSum::reduced(13, [1, 5]));
        assert_eq!(h1.support, StratumSet::from_divisors([3]));
        for r in &table {
            assert_eq!(r.provenance, Provenance::CrossChecked);
        }
    }

    #[test]
    fn champions_of_one_third() {
        let (m, roles) = setup("1/3:1,1,1");
        let r = cross_check(&m, &roles[2], chi(&m, "2")).unwrap();
        assert_eq!(r.descriptors.len(), 1);
        let d = &r.descriptors[0];
        assert_eq!(d.degree, -1);
        assert_eq!(d.twist, DivisorSum::from_mults(vec![-1, -1, -1, 0]));
        let Some(Special::Champions(c)) = &d.special else { panic!() };
        assert_eq!(c.s3_sheaf, S3Sheaf::TangentP2);
        assert_eq!(c.s3, StratumSet::from_divisors([3]));
        assert!(c.s2.is_empty());
        let only_1 = trivial_transform(&m);
        assert_eq!(only_1.iter().map(|d| d.degree).collect::<Vec<_>>(), vec![-2]);
    }

    #[test]
    fn trivial_group_is_a_point() {
        let (m, roles) = setup("1/1:0,0,0");
        let r = cross_check(&m, &roles[0], m.group.trivial()).unwrap();
        assert_eq!(r.descriptors.len(), 1);
        assert_eq!(r.descriptors[0].degree, 0);
        assert_eq!(r.descriptors[0].support.points.len(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn transforms_are_single_sheaves(r in 2u32..16, a in 0i64..16, b in 0i64..16) {
            let (a, b) = (a % r as i64, b % r as i64);
            let c = (3 * r as i64 - a - b) % r as i64;
            let Ok(spec) = crate::group::GroupSpec::cyclic(r, a, b, c) else { return Ok(()) };
            let Ok(m) = Model::new(&spec) else { return Ok(()) };
            let roles = classify_all(&m, &Marking::compute(&m).unwrap()).unwrap();
            for chi in m.group.characters() {
                prop_assert!(xyz_path_identity(&m.cube(chi)));
                prop_assert!(cross_check(&m, &roles[chi.index()], chi).is_ok());
            }
        }
    }
}
