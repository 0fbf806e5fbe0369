//! Torus-invariant divisors as integer combinations of the prime divisors `E_e`,
//! indexed by junior-point id.

use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Display name of the prime divisor with the given point id: `E_x`, `E_y`, `E_z`
/// for the corners and `E_{id+1}` otherwise.
pub fn prime_name(id: usize) -> String {
    match id {
        0 => "E_x".into(),
        1 => "E_y".into(),
        2 => "E_z".into(),
        k => format!("E_{}", k + 1),
    }
}

/// Inverse of [`prime_name`]; also accepts bare tokens `x`, `y`, `z` and numbers.
pub fn parse_prime(s: &str) -> Option<usize> {
    let t = s.trim();
    let t = t.strip_prefix("E_").unwrap_or(t);
    let t = t.trim_start_matches('{').trim_end_matches('}');
    match t {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        _ => t.parse::<usize>().ok().filter(|&k| k >= 4).map(|k| k - 1),
    }
}

/// A finitely supported integer combination of prime divisors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorSum {
    mults: Vec<i64>,
}

impl DivisorSum {
    pub fn zero(primes: usize) -> Self {
        DivisorSum { mults: vec![0; primes] }
    }

    pub fn from_mults(mults: Vec<i64>) -> Self {
        DivisorSum { mults }
    }

    /// The reduced divisor supported on `ids`.
    pub fn reduced(primes: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut d = Self::zero(primes);
        for i in ids {
            d.mults[i] = 1;
        }
        d
    }

    pub fn len(&self) -> usize {
        self.mults.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mults.is_empty()
    }

    pub fn get(&self, id: usize) -> i64 {
        self.mults[id]
    }

    pub fn set(&mut self, id: usize, m: i64) {
        self.mults[id] = m;
    }

    pub fn mults(&self) -> &[i64] {
        &self.mults
    }

    fn zip(&self, o: &DivisorSum, f: impl Fn(i64, i64) -> i64) -> DivisorSum {
        assert_eq!(self.mults.len(), o.mults.len(), "divisor inventories differ");
        DivisorSum { mults: self.mults.iter().zip(&o.mults).map(|(&a, &b)| f(a, b)).collect() }
    }

    pub fn gcd(&self, o: &DivisorSum) -> DivisorSum {
        self.zip(o, i64::min)
    }

    pub fn lcm(&self, o: &DivisorSum) -> DivisorSum {
        self.zip(o, i64::max)
    }

    pub fn effective(&self) -> DivisorSum {
        DivisorSum { mults: self.mults.iter().map(|&a| a.max(0)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.mults.iter().all(|&a| a == 0)
    }

    pub fn is_effective(&self) -> bool {
        self.mults.iter().all(|&a| a >= 0)
    }

    pub fn is_reduced(&self) -> bool {
        self.mults.iter().all(|&a| a == 0 || a == 1)
    }

    /// Ids with nonzero multiplicity.
    pub fn support(&self) -> Vec<usize> {
        (0..self.mults.len()).filter(|&i| self.mults[i] != 0).collect()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.mults[id] != 0
    }

    /// Keeps only the primes selected by `keep`.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> DivisorSum {
        DivisorSum { mults: (0..self.mults.len()).map(|i| if keep(i) { self.mults[i] } else { 0 }).collect() }
    }

    /// `(prime name, multiplicity)` pairs in id order.
    pub fn terms(&self) -> Vec<(String, i64)> {
        self.support().into_iter().map(|i| (prime_name(i), self.mults[i])).collect()
    }

    /// Compact label in the style `E_{x45678910111213}` listing the support.
    pub fn support_label(&self) -> String {
        let s: String = self
            .support()
            .into_iter()
            .map(|i| match i {
                0 => "x".to_string(),
                1 => "y".to_string(),
                2 => "z".to_string(),
                k => (k + 1).to_string(),
            })
            .collect();
        format!("E_{{{s}}}")
    }
}

impl Add for &DivisorSum {
    type Output = DivisorSum;
    fn add(self, o: &DivisorSum) -> DivisorSum {
        self.zip(o, |a, b| a + b)
    }
}

impl Sub for &DivisorSum {
    type Output = DivisorSum;
    fn sub(self, o: &DivisorSum) -> DivisorSum {
        self.zip(o, |a, b| a - b)
    }
}

impl Neg for &DivisorSum {
    type Output = DivisorSum;
    fn neg(self) -> DivisorSum {
        DivisorSum { mults: self.mults.iter().map(|&a| -a).collect() }
    }
}

impl fmt::Display for DivisorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (name, m)) in terms.iter().enumerate() {
            let sign = if *m < 0 {
                "-"
            } else if k > 0 {
                "+"
            } else {
                ""
            };
            let a = m.abs();
            if a == 1 {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{a}{name}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(v: &[i64]) -> DivisorSum {
        DivisorSum::from_mults(v.to_vec())
    }

    #[test]
    fn pointwise_operations() {
        // E₁ + 2E₂ and E₂ + E₃ on a four-prime inventory.
        let a = d(&[0, 1, 2, 0]);
        let b = d(&[0, 0, 1, 1]);
        assert_eq!(a.gcd(&b), d(&[0, 0, 1, 0]));
        assert_eq!(a.lcm(&b), d(&[0, 1, 2, 1]));
        assert_eq!(d(&[0, 1, -1, 0]).effective(), d(&[0, 1, 0, 0]));
        assert_eq!(&a - &b, d(&[0, 1, 1, -1]));
    }

    #[test]
    fn names_round_trip() {
        for id in 0..20 {
            assert_eq!(parse_prime(&prime_name(id)), Some(id));
        }
        assert_eq!(parse_prime("E_3"), None);
        let x = DivisorSum::reduced(13, [0, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]);
        assert_eq!(x.support_label(), "E_{x45678910111213}");
        assert_eq!(d(&[0, 0, 0, -1, 2]).to_string(), "-E_4+2E_5");
    }

    proptest! {
        #[test]
        fn lattice_laws(a in prop::collection::vec(-4i64..5, 6), b in prop::collection::vec(-4i64..5, 6)) {
            let (a, b) = (d(&a), d(&b));
            prop_assert_eq!(&a.gcd(&b) + &a.lcm(&b), &a + &b);
            prop_assert_eq!(a.gcd(&b), b.gcd(&a));
            prop_assert!((&a - &a.gcd(&b)).is_effective());
            prop_assert_eq!((&a - &b).effective(), &a.lcm(&b) - &b);
        }
    }
}
