//! Golden fixtures: expected junior points, edge ratios, zero fibre, cube labels and
//! derived table of one group, compared against a computation as a list of
//! machine-readable mismatches.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::analysis::Analysis;
use crate::derived::{cohomology_of_cube, Special, StratumSet, TransformResult};
use crate::divisor::{parse_prime, prime_name, DivisorSum};
use crate::error::{Error, Result};
use crate::io::{s3_sheaf_name, ZeroFibreJson};
use crate::quiver::{Cube, Model};

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FixtureEdge {
    pub v: [String; 2],
    pub ratio: [String; 2],
    pub chi: String,
}

/// One nonzero cohomology sheaf of the derived table.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FixtureSheaf {
    pub degree: i8,
    /// Twist relative to `L⁻¹_χ`, as prime name to multiplicity.
    pub twist: BTreeMap<String, i64>,
    pub divisors: Vec<String>,
    #[serde(default)]
    pub curves: Vec<[String; 2]>,
    /// Name of the distinguished sheaf, when one is expected.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sheaf: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve_degrees: Option<Vec<([String; 2], i64)>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GoldenFixture {
    pub group: String,
    /// Numerators over `|G|`, keyed by prime name.
    pub points: BTreeMap<String, [i64; 3]>,
    pub triangles: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<FixtureEdge>>,
    pub zero_fibre: ZeroFibreJson,
    /// Character label to the twelve reduced arrow labels in display order.
    pub cubes: BTreeMap<String, Vec<String>>,
    /// Character label to its nonzero sheaves.
    pub derived: BTreeMap<String, Vec<FixtureSheaf>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub path: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Default)]
struct Diff(Vec<Mismatch>);

impl Diff {
    fn cmp<T: PartialEq + std::fmt::Debug>(&mut self, path: impl Into<String>, expected: &T, actual: &T) {
        if expected != actual {
            self.0.push(Mismatch {
                path: path.into(),
                expected: format!("{expected:?}"),
                actual: format!("{actual:?}"),
            });
        }
    }
}

impl GoldenFixture {
    pub fn load(text: &str) -> Result<Self> {
        crate::io::from_json_str(text)
    }

    /// Compare against a computation. `derived` holds one result per character.
    pub fn compare(&self, a: &Analysis, derived: &[TransformResult]) -> Vec<Mismatch> {
        let m = &a.model;
        let g = &m.group;
        let fan = &m.fan;
        let mut d = Diff::default();
        d.cmp("group", &self.group, &g.spec.to_string());
        let n = g.order() as i64;
        let points: BTreeMap<String, [i64; 3]> =
            fan.points.iter().enumerate().map(|(id, p)| (prime_name(id), p.num.map(|c| c * n / p.den))).collect();
        for (name, num) in &self.points {
            d.cmp(format!("points.{name}"), &Some(num), &points.get(name));
        }
        d.cmp("points.count", &self.points.len(), &points.len());
        d.cmp("triangles", &self.triangles, &fan.triangles.len());
        if let Some(edges) = &self.edges {
            let key = |v: &[String; 2]| v.iter().cloned().collect::<BTreeSet<_>>();
            let actual: BTreeMap<BTreeSet<String>, (BTreeSet<String>, String)> = fan
                .edges
                .iter()
                .map(|e| {
                    let ratio = [e.m1.to_string(), e.m2.to_string()].into_iter().collect();
                    (key(&e.v.map(prime_name)), (ratio, g.label(e.chi)))
                })
                .collect();
            for e in edges {
                let expected = (e.ratio.iter().cloned().collect(), e.chi.clone());
                d.cmp(format!("edges.{}-{}", e.v[0], e.v[1]), &Some(&expected), &actual.get(&key(&e.v)));
            }
            d.cmp("edges.count", &edges.len(), &actual.len());
        }
        let (z2, z1) = fan.zero_fibre();
        let z2: Vec<String> = z2.into_iter().map(prime_name).collect();
        let z1: Vec<[String; 2]> = z1.into_iter().map(|c| c.map(prime_name)).collect();
        d.cmp("zero_fibre.z2", &self.zero_fibre.z2, &z2);
        d.cmp("zero_fibre.z1", &self.zero_fibre.z1, &z1);
        for (label, expected) in &self.cubes {
            let Some(chi) = g.parse_label(label) else {
                d.cmp(format!("cubes.{label}"), &"a character".to_string(), &"no such character".to_string());
                continue;
            };
            for (k, (want, arrow)) in expected.iter().zip(&m.cube(chi).arrows).enumerate() {
                d.cmp(format!("cubes.{label}[{k}]"), want, &arrow.divisor.support_label());
            }
            d.cmp(format!("cubes.{label}.len"), &expected.len(), &12);
        }
        for (label, expected) in &self.derived {
            let actual = g.parse_label(label).and_then(|chi| derived.iter().find(|r| r.chi == chi));
            let actual: Vec<FixtureSheaf> = actual.map(result_rows).unwrap_or_default();
            d.cmp(format!("derived.{label}.degrees"), &degrees(expected), &degrees(&actual));
            for want in expected {
                let Some(got) = actual.iter().find(|s| s.degree == want.degree) else { continue };
                let path = format!("derived.{label}.H{}", want.degree);
                d.cmp(format!("{path}.twist"), &want.twist, &got.twist);
                d.cmp(format!("{path}.divisors"), &want.divisors, &got.divisors);
                d.cmp(format!("{path}.curves"), &want.curves, &got.curves);
                if want.sheaf.is_some() {
                    d.cmp(format!("{path}.sheaf"), &want.sheaf, &got.sheaf);
                }
                if want.curve_degrees.is_some() {
                    d.cmp(format!("{path}.curve_degrees"), &want.curve_degrees, &got.curve_degrees);
                }
            }
        }
        d.0
    }

    /// Rebuild every cube from the fixture's labels, check its squares and path
    /// sums, run the cube route on it and compare degrees and supports with the
    /// fixture's own derived table.
    pub fn self_consistency(&self, model: &Model) -> Vec<Mismatch> {
        let g = &model.group;
        let np = model.num_points();
        let mut d = Diff::default();
        for (label, rows) in &self.derived {
            let (Some(chi), Some(labels)) = (g.parse_label(label), self.cubes.get(label)) else { continue };
            let mut cube: Cube = model.cube(chi);
            for (arrow, l) in cube.arrows.iter_mut().zip(labels) {
                match parse_label(l, np) {
                    Ok(div) => arrow.divisor = div,
                    Err(e) => d.cmp(format!("cubes.{label}"), l, &e.to_string()),
                }
            }
            if let Err(e) = cube.validate() {
                d.cmp(format!("self.{label}.cube"), &"commuting cube".to_string(), &e.to_string());
            }
            let lemma = match cohomology_of_cube(&model.fan, &cube, label) {
                Ok(c) => c,
                Err(e) => {
                    d.cmp(format!("self.{label}"), &"cube cohomology".to_string(), &e.to_string());
                    continue;
                }
            };
            d.cmp(format!("self.{label}.degrees"), &degrees(rows), &lemma.nonzero_degrees());
            for row in rows {
                let mut support = match row.degree {
                    0 => lemma.h0.clone(),
                    -1 => lemma.h_minus1_support(0),
                    _ => StratumSet::from_divisors(lemma.h_minus2.support()),
                };
                support.minimise();
                let want = (row.divisors.clone(), row.curves.clone());
                let got = (
                    support.divisors.iter().map(|&i| prime_name(i)).collect::<Vec<_>>(),
                    support.curves.iter().map(|c| c.map(prime_name)).collect::<Vec<_>>(),
                );
                d.cmp(format!("self.{label}.H{}.support", row.degree), &want, &got);
            }
        }
        d.0
    }
}

fn degrees(rows: &[FixtureSheaf]) -> Vec<i8> {
    let mut v: Vec<i8> = rows.iter().map(|s| s.degree).collect();
    v.sort();
    v
}

/// The derived table rows of one computed character in fixture form.
pub fn result_rows(r: &TransformResult) -> Vec<FixtureSheaf> {
    let mut rows: Vec<FixtureSheaf> = r
        .descriptors
        .iter()
        .map(|s| {
            let (sheaf, curve_degrees) = match &s.special {
                Some(Special::Champions(c)) => (Some(s3_sheaf_name(c.s3_sheaf)), None),
                Some(Special::Dualizing { curve_degrees, .. }) if curve_degrees.is_empty() => (None, None),
                Some(Special::Dualizing { curve_degrees, .. }) => {
                    (None, Some(curve_degrees.iter().map(|(c, k)| (c.map(prime_name), *k)).collect()))
                }
                None => (None, None),
            };
            FixtureSheaf {
                degree: s.degree,
                twist: s.twist.terms().into_iter().collect(),
                divisors: s.support.divisors.iter().map(|&i| prime_name(i)).collect(),
                curves: s.support.curves.iter().map(|c| c.map(prime_name)).collect(),
                sheaf,
                curve_degrees,
            }
        })
        .collect();
    rows.sort_by_key(|s| s.degree);
    rows
}

/// Parse a reduced arrow label such as `E_{x812}` into a reduced divisor. Digits
/// are split into an increasing sequence of point numbers, each at least 4.
pub fn parse_label(label: &str, primes: usize) -> Result<DivisorSum> {
    let bad = |msg: &str| Error::Parse { pos: 0, msg: format!("{msg} in label `{label}`") };
    let body = label.strip_prefix("E_{").and_then(|s| s.strip_suffix('}')).ok_or_else(|| bad("expected E_{...}"))?;
    let letters = body.chars().take_while(|c| c.is_ascii_alphabetic()).count();
    let mut ids: Vec<usize> = Vec::new();
    for c in body[..letters].chars() {
        ids.push(parse_prime(&c.to_string()).ok_or_else(|| bad("unknown corner"))?);
    }
    fn split(digits: &[u8], min: usize, max: usize, out: &mut Vec<usize>) -> bool {
        if digits.is_empty() {
            return true;
        }
        let mut value = 0usize;
        for (len, &c) in digits.iter().enumerate() {
            value = value * 10 + (c - b'0') as usize;
            if value > max || (len == 0 && c == b'0') {
                return false;
            }
            if value >= min {
                out.push(value);
                if split(&digits[len + 1..], value + 1, max, out) {
                    return true;
                }
                out.pop();
            }
        }
        false
    }
    let digits = &body.as_bytes()[letters..];
    if !digits.iter().all(u8::is_ascii_digit) {
        return Err(bad("unexpected character"));
    }
    let mut numbers = Vec::new();
    if !split(digits, 4, primes, &mut numbers) {
        return Err(bad("cannot split into point numbers"));
    }
    ids.extend(numbers.into_iter().map(|k| k - 1));
    Ok(DivisorSum::reduced(primes, ids))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derived::derived_table;

    const G15: &str = include_str!("../fixtures/g15.json");
    const G3: &str = include_str!("../fixtures/g3.json");

    fn run(text: &str) -> (GoldenFixture, Vec<Mismatch>, Vec<Mismatch>) {
        let f = GoldenFixture::load(text).unwrap();
        let a = Analysis::new(&f.group.parse().unwrap(), 0).unwrap();
        let table = derived_table(&a.model, &a.roles).unwrap();
        let diff = f.compare(&a, &table);
        let own = f.self_consistency(&a.model);
        (f, diff, own)
    }

    #[test]
    fn labels_parse_into_point_numbers() {
        let d = parse_label("E_{x45678910111213}", 13).unwrap();
        assert_eq!(d.support(), vec![0, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]);
        assert_eq!(parse_label("E_{y812}", 13).unwrap().support(), vec![1, 7, 11]);
        assert_eq!(parse_label("E_{z}", 13).unwrap().support(), vec![2]);
        assert!(parse_label("E_{x3}", 13).is_err());
        assert!(parse_label("x4", 13).is_err());
    }

    #[test]
    fn labels_round_trip_through_support_label() {
        let d = DivisorSum::reduced(13, [1, 3, 9, 10, 12]);
        assert_eq!(parse_label(&d.support_label(), 13).unwrap(), d);
    }

    #[test]
    fn worked_example_matches_its_fixture() {
        let (f, diff, own) = run(G15);
        assert!(diff.is_empty(), "{diff:#?}");
        assert!(own.is_empty(), "{own:#?}");
        assert_eq!(f.cubes.len(), 15);
        assert_eq!(f.cubes.values().map(Vec::len).sum::<usize>(), 180);
    }

    #[test]
    fn one_third_matches_its_fixture() {
        let (_, diff, own) = run(G3);
        assert!(diff.is_empty(), "{diff:#?}");
        assert!(own.is_empty(), "{own:#?}");
    }

    #[test]
    fn a_changed_label_is_reported() {
        let mut f = GoldenFixture::load(G15).unwrap();
        f.cubes.get_mut("4").unwrap()[6] = "E_{x1213}".into();
        let a = Analysis::new(&f.group.parse().unwrap(), 0).unwrap();
        let table = derived_table(&a.model, &a.roles).unwrap();
        let diff = f.compare(&a, &table);
        assert_eq!(diff.len(), 1);
        assert_eq!(diff[0].path, "cubes.4[6]");
        assert_eq!(diff[0].actual, "\"E_{x812}\"");
        let own = f.self_consistency(&a.model);
        assert_eq!(own.len(), 1);
        assert_eq!(own[0].path, "self.4.cube");
    }
}
