//! Enumeration of the cyclic groups covered by the acceptance sweep.

use num_integer::Integer;

use crate::group::GroupSpec;

/// Every faithful `1/r(a,b,c)` with `r ≤ max_r`, `0 ≤ a ≤ b ≤ c < r` and
/// `a+b+c ≡ 0 mod r`, preceded by the trivial group.
pub fn cyclic_groups(max_r: u32) -> Vec<GroupSpec> {
    let mut out = vec![GroupSpec::trivial()];
    for r in 2..=max_r {
        let ri = r as i64;
        for a in 0..ri {
            for b in a..ri {
                for c in b..ri {
                    if (a + b + c) % ri != 0 || a.gcd(&b).gcd(&c).gcd(&ri) != 1 {
                        continue;
                    }
                    out.push(GroupSpec::cyclic(r, a, b, c).expect("weights sum to 0 mod r"));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep() {
        let names: Vec<String> = cyclic_groups(3).iter().map(|g| g.to_string()).collect();
        assert_eq!(names, vec!["1/1:0,0,0", "1/2:0,1,1", "1/3:0,1,2", "1/3:1,1,1", "1/3:2,2,2"]);
    }
}
