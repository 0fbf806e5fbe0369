//! Diagonal abelian subgroups of SL(3), their characters, monomial weights and
//! the lattices `M ⊂ ℤ³ ⊂ L`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{invariant, Error, Result};

/// One diagonal generator `1/r (a, b, c)`, acting as `diag(ξ^a, ξ^b, ξ^c)` with `ξ = e^{2πi/r}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub r: u32,
    pub w: [u32; 3],
}

impl Generator {
    /// Builds a generator, reducing the weights mod `r`. Fails if `r = 0`.
    pub fn new(r: u32, w: [i64; 3]) -> Result<Self> {
        if r == 0 {
            return Err(Error::Parse { pos: 0, msg: "order r must be at least 1".into() });
        }
        let ri = r as i64;
        Ok(Generator { r, w: w.map(|a| a.rem_euclid(ri) as u32) })
    }

    pub fn is_sl3(&self) -> bool {
        (self.w.iter().map(|&a| a as u64).sum::<u64>()) % self.r as u64 == 0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}:{},{},{}", self.r, self.w[0], self.w[1], self.w[2])
    }
}

/// A presentation of a finite diagonal abelian group by generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub generators: Vec<Generator>,
}

impl GroupSpec {
    /// The cyclic group `1/r (a, b, c)`.
    pub fn cyclic(r: u32, a: i64, b: i64, c: i64) -> Result<Self> {
        let spec = GroupSpec { generators: vec![Generator::new(r, [a, b, c])?] };
        spec.validate()?;
        Ok(spec)
    }

    pub fn trivial() -> Self {
        GroupSpec { generators: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        for (index, g) in self.generators.iter().enumerate() {
            if !g.is_sl3() {
                return Err(Error::NotSl3 { index, generator: g.to_string() });
            }
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.generators.as_slice() {
            [] => write!(f, "1/1:0,0,0"),
            [g] => write!(f, "{g}"),
            gens => {
                write!(f, "gens=")?;
                for (i, g) in gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{g}")?;
                }
                Ok(())
            }
        }
    }
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.s[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(self.err(format!("expected `{lit}`")))
        }
    }

    fn int(&mut self) -> Result<i64> {
        let rest = &self.s[self.pos..];
        let len =
            rest.char_indices().take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+'))).count();
        let text = &rest[..len];
        let value = text.parse::<i64>().map_err(|_| self.err("expected an integer"))?;
        self.pos += len;
        Ok(value)
    }

    fn generator(&mut self) -> Result<Generator> {
        let start = self.pos;
        self.expect("1/")?;
        let r = self.int()?;
        if r < 1 || r > u32::MAX as i64 {
            return Err(Error::Parse { pos: start + 2, msg: format!("order {r} out of range") });
        }
        self.expect(":")?;
        let a = self.int()?;
        self.expect(",")?;
        let b = self.int()?;
        self.expect(",")?;
        let c = self.int()?;
        Generator::new(r as u32, [a, b, c])
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Grammar: `1/r:a,b,c` or `gens=1/r1:a,b,c;1/r2:a,b,c;...`.
    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor { s: s.trim(), pos: 0 };
        if cur.s.is_empty() {
            return Err(cur.err("empty group specification"));
        }
        let mut generators = Vec::new();
        if cur.s.starts_with("gens=") {
            cur.expect("gens=")?;
            loop {
                generators.push(cur.generator()?);
                if cur.pos == cur.s.len() {
                    break;
                }
                cur.expect(";")?;
            }
        } else {
            generators.push(cur.generator()?);
        }
        if cur.pos != cur.s.len() {
            return Err(cur.err("trailing input"));
        }
        let spec = GroupSpec { generators };
        spec.validate()?;
        Ok(spec)
    }
}

/// A character of `G`, stored as an index into the character table of its
/// [`GroupData`]. Indices are ordered by the evaluation vector on the generators,
/// so for a faithful cyclic presentation `Character(k)` is `χ_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character(pub(crate) u32);

impl Character {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A Laurent monomial `x^a y^b z^c`, stored as its exponent triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(pub [i64; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn var(axis: usize) -> Self {
        let mut e = [0; 3];
        e[axis] = 1;
        Monomial(e)
    }

    pub fn is_regular(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        (0..3).all(|i| self.0[i] <= other.0[i])
    }

    /// Number of variables occurring with nonzero exponent.
    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&a| a != 0).count()
    }

    /// Splits a Laurent monomial `m` as `m₊ / m₋` with regular, coprime parts.
    pub fn split(&self) -> (Monomial, Monomial) {
        (Monomial(self.0.map(|a| a.max(0))), Monomial(self.0.map(|a| (-a).max(0))))
    }
}

impl Add for Monomial {
    type Output = Monomial;
    fn add(self, o: Monomial) -> Monomial {
        Monomial([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Monomial {
    type Output = Monomial;
    fn sub(self, o: Monomial) -> Monomial {
        Monomial([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == [0, 0, 0] {
            return write!(f, "1");
        }
        for (i, v) in ["x", "y", "z"].iter().enumerate() {
            match self.0[i] {
                0 => {}
                1 => write!(f, "{v}")?,
                e => write!(f, "{v}^{e}")?,
            }
        }
        Ok(())
    }
}

/// A point of `L ∩ Δ`, stored as integer numerators over the group order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JuniorPoint {
    pub num: [i64; 3],
    pub den: i64,
}

impl JuniorPoint {
    pub fn coords(&self) -> [BigRational; 3] {
        self.num.map(|a| BigRational::new(BigInt::from(a), BigInt::from(self.den)))
    }

    /// Numerators and denominator in lowest terms.
    pub fn reduced(&self) -> ([i64; 3], i64) {
        let g = self.num.iter().fold(self.den, |g, &a| g.gcd(&a));
        (self.num.map(|a| a / g), self.den / g)
    }

    /// The integer pairing `⟨e, m⟩`, or `None` when it is not integral.
    pub fn pair(&self, m: &Monomial) -> Option<i64> {
        let s: i64 = (0..3).map(|i| self.num[i] * m.0[i]).sum();
        (s % self.den == 0).then(|| s / self.den)
    }

    /// `|G| · ⟨e, m⟩`, always an integer.
    pub fn pair_scaled(&self, m: &Monomial) -> i64 {
        (0..3).map(|i| self.num[i] * m.0[i]).sum()
    }

    pub fn zero_axes(&self) -> usize {
        self.num.iter().filter(|&&a| a == 0).count()
    }

    pub fn is_corner(&self) -> bool {
        self.zero_axes() == 2
    }

    pub fn is_interior(&self) -> bool {
        self.zero_axes() == 0
    }

    pub fn is_side(&self) -> bool {
        self.zero_axes() == 1
    }

    /// For a corner, its axis; for a side point, the axis whose coordinate vanishes.
    pub fn distinguished_axis(&self) -> Option<usize> {
        match self.zero_axes() {
            2 => (0..3).find(|&i| self.num[i] != 0),
            1 => (0..3).find(|&i| self.num[i] == 0),
            _ => None,
        }
    }
}

impl fmt::Display for JuniorPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = self.reduced();
        if d == 1 {
            write!(f, "({},{},{})", n[0], n[1], n[2])
        } else {
            write!(f, "1/{}({},{},{})", d, n[0], n[1], n[2])
        }
    }
}

#[derive(Clone, Debug)]
struct CharInfo {
    residues: Vec<u32>,
    canonical: Monomial,
}

/// The group together with its lattices, element list and character table.
#[derive(Clone, Debug)]
pub struct GroupData {
    pub spec: GroupSpec,
    order: usize,
    exponent: i64,
    elements: Vec<[i64; 3]>,
    m_basis: [[i64; 3]; 3],
    radix: Vec<u32>,
    stride: Vec<usize>,
    code_to_char: Vec<u32>,
    chars: Vec<CharInfo>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    kappa: [Character; 3],
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let e = a.extended_gcd(&b);
    if e.gcd < 0 {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Inserts `v` into an upper-triangular row basis, keeping it in Hermite form.
fn hnf_insert(basis: &mut [[i64; 3]; 3], mut v: [i64; 3]) {
    for col in 0..3 {
        if v[col] == 0 {
            continue;
        }
        let b = basis[col];
        if b[col] == 0 {
            basis[col] = if v[col] < 0 { v.map(|a| -a) } else { v };
            return;
        }
        let (g, s, t) = ext_gcd(b[col], v[col]);
        let (p, q) = (v[col] / g, b[col] / g);
        let nb = [0, 1, 2].map(|k| s * b[k] + t * v[k]);
        let nv = [0, 1, 2].map(|k| p * b[k] - q * v[k]);
        basis[col] = nb;
        v = nv;
    }
    for col in 0..3 {
        let d = basis[col][col];
        if d == 0 {
            continue;
        }
        for row in 0..col {
            let f = Integer::div_floor(&basis[row][col], &d);
            if f != 0 {
                let pivot = basis[col];
                for (entry, p) in basis[row].iter_mut().zip(pivot) {
                    *entry -= f * p;
                }
            }
        }
    }
}

impl GroupData {
    /// Builds the group data: elements by closure, `M` as the kernel lattice of the
    /// generator pairings, and the character table.
    pub fn new(spec: &GroupSpec) -> Result<Self> {
        spec.validate()?;
        let exponent: i64 = spec.generators.iter().fold(1i64, |l, g| l.lcm(&(g.r as i64)));
        let gens: Vec<[i64; 3]> =
            spec.generators.iter().map(|g| g.w.map(|a| a as i64 * (exponent / g.r as i64))).collect();

        let mut seen: BTreeSet<[i64; 3]> = BTreeSet::new();
        let mut queue = VecDeque::from([[0i64; 3]]);
        seen.insert([0; 3]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = [0, 1, 2].map(|i| (x[i] + g[i]).rem_euclid(exponent));
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<[i64; 3]> = seen.into_iter().collect();
        let order = elements.len();

        let radix: Vec<u32> = spec.generators.iter().map(|g| g.r).collect();
        let mut stride = Vec::with_capacity(radix.len());
        let mut total = 1usize;
        for &r in &radix {
            stride.push(total);
            total *= r as usize;
        }

        let mut data = GroupData {
            spec: spec.clone(),
            order,
            exponent,
            elements,
            m_basis: [[0; 3]; 3],
            radix,
            stride,
            code_to_char: vec![u32::MAX; total],
            chars: Vec::new(),
            mul: Vec::new(),
            inv: Vec::new(),
            kappa: [Character(0); 3],
        };

        let mut basis = [[exponent, 0, 0], [0, exponent, 0], [0, 0, exponent]];
        let mut by_residue: std::collections::BTreeMap<Vec<u32>, Monomial> = Default::default();
        for a in 0..exponent {
            for b in 0..exponent {
                for c in 0..exponent {
                    let m = Monomial([a, b, c]);
                    let res = data.residues(&m);
                    if res.iter().all(|&r| r == 0) {
                        hnf_insert(&mut basis, m.0);
                    }
                    by_residue.entry(res).or_insert(m);
                }
            }
        }
        data.m_basis = basis;
        let det: i64 = (0..3).map(|i| basis[i][i]).product();
        if det as usize != order || by_residue.len() != order {
            return Err(invariant(
                "group-index",
                format!("[ℤ³:M] = {det}, |G^∨| = {}, |G| = {order}", by_residue.len()),
            ));
        }
        for (idx, (residues, canonical)) in by_residue.into_iter().enumerate() {
            let code = data.code(&residues);
            data.code_to_char[code] = idx as u32;
            data.chars.push(CharInfo { residues, canonical });
        }
        let n = order;
        data.mul = vec![0; n * n];
        data.inv = vec![0; n];
        for i in 0..n {
            for j in 0..n {
                let res: Vec<u32> = (0..data.radix.len())
                    .map(|k| (data.chars[i].residues[k] + data.chars[j].residues[k]) % data.radix[k])
                    .collect();
                let c = data.code_to_char[data.code(&res)];
                data.mul[i * n + j] = c;
                if c == 0 {
                    data.inv[i] = j as u32;
                }
            }
        }
        data.kappa = [0, 1, 2].map(|i| data.weight(&Monomial::var(i)));
        Ok(data)
    }

    fn residues(&self, m: &Monomial) -> Vec<u32> {
        self.spec
            .generators
            .iter()
            .map(|g| {
                let s: i64 = (0..3).map(|i| g.w[i] as i64 * m.0[i]).sum();
                (-s).rem_euclid(g.r as i64) as u32
            })
            .collect()
    }

    fn code(&self, residues: &[u32]) -> usize {
        residues.iter().zip(&self.stride).map(|(&r, &s)| r as usize * s).sum()
    }

    /// `|G|`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The least common multiple of the generator orders.
    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// Group elements as numerator triples over [`GroupData::exponent`], each in `[0, exponent)`.
    pub fn elements(&self) -> &[[i64; 3]] {
        &self.elements
    }

    /// Hermite basis of `M` (rows).
    pub fn lattice_m(&self) -> [[i64; 3]; 3] {
        self.m_basis
    }

    pub fn in_m(&self, m: &Monomial) -> bool {
        self.weight(m) == self.trivial()
    }

    /// The weight of a Laurent monomial: the character `χ` with `g·m = χ(g) m`.
    pub fn weight(&self, m: &Monomial) -> Character {
        let code: usize = self
            .spec
            .generators
            .iter()
            .zip(&self.stride)
            .map(|(g, &st)| {
                let s: i64 = (0..3).map(|i| g.w[i] as i64 * m.0[i]).sum();
                (-s).rem_euclid(g.r as i64) as usize * st
            })
            .sum();
        Character(self.code_to_char[code])
    }

    pub fn trivial(&self) -> Character {
        Character(0)
    }

    pub fn characters(&self) -> impl Iterator<Item = Character> + Clone {
        (0..self.order as u32).map(Character)
    }

    pub fn mul(&self, a: Character, b: Character) -> Character {
        Character(self.mul[a.index() * self.order + b.index()])
    }

    pub fn inv(&self, a: Character) -> Character {
        Character(self.inv[a.index()])
    }

    /// `κ(xᵢ)`.
    pub fn kappa(&self, axis: usize) -> Character {
        self.kappa[axis]
    }

    /// `χ · κ(xᵢ)` for every `i ∈ axes`.
    pub fn shift(&self, chi: Character, axes: impl IntoIterator<Item = usize>) -> Character {
        axes.into_iter().fold(chi, |c, i| self.mul(c, self.kappa[i]))
    }

    /// Evaluation vector of `χ` on the generators (residues mod each `rⱼ`).
    pub fn residues_of(&self, chi: Character) -> &[u32] {
        &self.chars[chi.index()].residues
    }

    /// The lexicographically smallest nonnegative exponent triple of weight `χ`.
    pub fn canonical_monomial(&self, chi: Character) -> Monomial {
        self.chars[chi.index()].canonical
    }

    pub fn is_cyclic_presentation(&self) -> bool {
        self.spec.generators.len() <= 1
    }

    /// Presentation-dependent label: `k` for a cyclic presentation, `(k₁,…)` otherwise.
    pub fn label(&self, chi: Character) -> String {
        let res = self.residues_of(chi);
        match res {
            [] => "0".into(),
            [k] => k.to_string(),
            ks => format!("({})", ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")),
        }
    }

    /// Resolves a label produced by [`GroupData::label`].
    pub fn parse_label(&self, s: &str) -> Option<Character> {
        self.characters().find(|&c| self.label(c) == s.trim())
    }

    /// All points of `L ∩ Δ`: the three corners first, then the remaining points in
    /// lexicographic order of their numerators.
    pub fn junior_points(&self) -> Vec<JuniorPoint> {
        let n = self.order as i64;
        let mut pts: Vec<JuniorPoint> = (0..3)
            .map(|i| {
                let mut num = [0; 3];
                num[i] = n;
                JuniorPoint { num, den: n }
            })
            .collect();
        let mut rest: Vec<JuniorPoint> = self
            .elements
            .iter()
            .filter(|k| k.iter().sum::<i64>() == self.exponent)
            .map(|k| JuniorPoint { num: k.map(|a| a * n / self.exponent), den: n })
            .filter(|p| !p.is_corner())
            .collect();
        rest.sort();
        pts.extend(rest);
        pts
    }

    /// Whether a rational point with numerators `num` over `|G|` lies in `L`.
    pub fn in_l(&self, num: &[i64; 3]) -> bool {
        let n = self.order as i64;
        self.m_basis.iter().all(|m| (0..3).map(|i| num[i] * m[i]).sum::<i64>() % n == 0)
    }

    /// Map from group-order numerators to indices into `points`.
    pub fn point_index(points: &[JuniorPoint]) -> HashMap<[i64; 3], usize> {
        points.iter().enumerate().map(|(i, p)| (p.num, i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupData {
        GroupData::new(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn parse_round_trip() {
        for s in ["1/15:1,5,9", "1/1:0,0,0", "gens=1/2:1,1,0;1/2:1,0,1"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!("1/3:-1,1,0".parse::<GroupSpec>().unwrap().generators[0].w, [2, 1, 0]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("".parse::<GroupSpec>(), Err(Error::Parse { .. })));
        assert!(matches!("1/15:1,5".parse::<GroupSpec>(), Err(Error::Parse { pos: 8, .. })));
        assert!(matches!("2/15:1,5,9".parse::<GroupSpec>(), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!("1/15:1,5,9x".parse::<GroupSpec>(), Err(Error::Parse { pos: 10, .. })));
        assert!(matches!("1/0:0,0,0".parse::<GroupSpec>(), Err(Error::Parse { .. })));
        assert_eq!(
            "gens=1/2:1,1,0;1/3:1,1,0".parse::<GroupSpec>(),
            Err(Error::NotSl3 { index: 1, generator: "1/3:1,1,0".into() })
        );
    }

    #[test]
    fn kappa_of_the_worked_example() {
        let g = g("1/15:1,5,9");
        assert_eq!(g.order(), 15);
        assert_eq!(g.label(g.kappa(0)), "14");
        assert_eq!(g.label(g.kappa(1)), "10");
        assert_eq!(g.label(g.kappa(2)), "6");
        for chi in g.characters() {
            assert_eq!(g.label(chi), chi.index().to_string());
        }
    }

    #[test]
    fn weights() {
        let g3 = g("1/3:1,1,1");
        assert_eq!(g3.label(g3.weight(&Monomial([0, 0, 2]))), "1");
        for s in ["1/15:1,5,9", "1/7:1,2,4", "gens=1/2:1,1,0;1/2:1,0,1"] {
            let g = g(s);
            assert_eq!(g.weight(&Monomial([1, 1, 1])), g.trivial());
            let n = g.order() as i64;
            for i in 0..3 {
                let mut e = [0; 3];
                e[i] = n;
                assert_eq!(g.weight(&Monomial(e)), g.trivial());
            }
        }
    }

    #[test]
    fn trivial_group() {
        for spec in [GroupSpec::trivial(), "1/1:0,0,0".parse().unwrap()] {
            let g = GroupData::new(&spec).unwrap();
            assert_eq!(g.order(), 1);
            assert_eq!(g.lattice_m(), [[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
            assert_eq!(g.junior_points().len(), 3);
        }
    }

    #[test]
    fn klein_four_group() {
        let g = g("gens=1/2:1,1,0;1/2:1,0,1");
        assert_eq!(g.order(), 4);
        assert!(g.characters().all(|c| g.mul(c, c) == g.trivial()));
        let pts = g.junior_points();
        assert_eq!(pts.len(), 6);
        assert!(pts.iter().all(|p| p.is_corner() || p.is_side()));
    }

    #[test]
    fn junior_points_of_the_worked_example() {
        let g = g("1/15:1,5,9");
        let nums: Vec<[i64; 3]> = g.junior_points().iter().map(|p| p.num).collect();
        assert_eq!(
            nums,
            vec![
                [15, 0, 0],
                [0, 15, 0],
                [0, 0, 15],
                [1, 5, 9],
                [2, 10, 3],
                [3, 0, 12],
                [4, 5, 6],
                [5, 10, 0],
                [6, 0, 9],
                [7, 5, 3],
                [9, 0, 6],
                [10, 5, 0],
                [12, 0, 3],
            ]
        );
        let g3 = g_three();
        assert_eq!(g3.junior_points()[3].num, [1, 1, 1]);
    }

    fn g_three() -> GroupData {
        g("1/3:1,1,1")
    }

    #[test]
    fn lattice_invariants() {
        for s in ["1/15:1,5,9", "1/3:1,1,1", "1/6:1,2,3", "gens=1/2:1,1,0;1/2:1,0,1", "1/4:0,1,3"] {
            let g = g(s);
            let m = g.lattice_m();
            let det = m[0][0] * m[1][1] * m[2][2];
            assert_eq!(det as usize, g.order());
            for row in m {
                assert!(g.in_m(&Monomial(row)));
            }
            for e in g.junior_points() {
                for row in m {
                    assert!(e.pair(&Monomial(row)).is_some(), "{s}: {e} against {row:?}");
                }
                assert!(g.in_l(&e.num));
            }
        }
    }

    #[test]
    fn canonical_monomials_are_lex_minimal() {
        let g = g("1/7:1,2,4");
        for chi in g.characters() {
            let c = g.canonical_monomial(chi);
            assert_eq!(g.weight(&c), chi);
            assert!(c.is_regular());
        }
        assert_eq!(g.canonical_monomial(g.trivial()), Monomial::ONE);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn cyclic() -> impl Strategy<Value = GroupData> {
            (2u32..24, 0i64..24, 0i64..24).prop_map(|(r, a, b)| {
                let c = (-(a + b)).rem_euclid(r as i64);
                GroupData::new(&GroupSpec::cyclic(r, a, b, c).unwrap()).unwrap()
            })
        }

        proptest! {
            #[test]
            fn weight_is_a_homomorphism(g in cyclic(), a in prop::array::uniform3(-30i64..30), b in prop::array::uniform3(-30i64..30)) {
                let (ma, mb) = (Monomial(a), Monomial(b));
                prop_assert_eq!(g.weight(&(ma + mb)), g.mul(g.weight(&ma), g.weight(&mb)));
                prop_assert_eq!(g.mul(g.weight(&ma), g.inv(g.weight(&ma))), g.trivial());
            }

            #[test]
            fn weight_kernel_is_m(g in cyclic(), a in prop::array::uniform3(-30i64..30)) {
                let m = Monomial(a);
                let in_span = {
                    // Solve against the upper-triangular basis.
                    let b = g.lattice_m();
                    let mut v = a;
                    let mut ok = true;
                    for col in 0..3 {
                        if v[col] % b[col][col] != 0 { ok = false; break; }
                        let f = v[col] / b[col][col];
                        for k in 0..3 { v[k] -= f * b[col][k]; }
                    }
                    ok
                };
                prop_assert_eq!(g.in_m(&m), in_span);
            }

            #[test]
            fn junior_points_lie_on_delta(g in cyclic()) {
                let n = g.order() as i64;
                for e in g.junior_points() {
                    prop_assert_eq!(e.num.iter().sum::<i64>(), n);
                    prop_assert!(e.num.iter().all(|&a| a >= 0));
                }
            }
        }
    }
}
