//! Outer-sum strategy: enumerate `π₁ ∈ S` and count the remaining
//! `d−1` summands against `f − π₁`, bottoming out in the pair DP.

use num_bigint::BigUint;

use super::dp::count_injective_tuples;
use crate::budget::Budgets;
use crate::combin::{factorial_u128, next_permutation, unrank_permutation};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::par;

pub(crate) fn count_outer_sum(g: &AbelianGroup, f: &[usize], d: usize, budgets: &Budgets) -> Result<BigUint> {
    let n = g.order();
    if d >= 4 && n > budgets.many_summands_max_n {
        return Err(Error::budget(
            "outer-sum n for four or more summands",
            n as u128,
            budgets.many_summands_max_n as u128,
        ));
    }
    let perms = factorial_u128(n).ok_or_else(|| Error::budget("outer-sum permutations", u128::MAX, budgets.outer_sum_calls))?;
    let calls = perms
        .checked_pow(d.saturating_sub(2).max(1) as u32)
        .unwrap_or(u128::MAX);
    if calls > budgets.outer_sum_calls {
        return Err(Error::budget("outer-sum kernel calls", calls, budgets.outer_sum_calls));
    }
    let chunks = par::chunks(perms as usize, 64);
    let parts = par::map_indexed(chunks.len(), |c| -> Result<u128> {
        let range = chunks[c].clone();
        let mut p = Vec::with_capacity(n);
        unrank_permutation(n, range.start as u128, &mut p);
        let mut acc = 0u128;
        let mut rest = vec![0usize; n];
        for _ in range {
            for i in 0..n {
                rest[i] = g.sub(f[i], p[i]);
            }
            acc += remaining(g, &rest, d - 1, budgets)?;
            next_permutation(&mut p);
        }
        Ok(acc)
    });
    let mut total = BigUint::from(0u32);
    for part in parts {
        total += part?;
    }
    Ok(total)
}

/// Count of `k`-tuples of bijections summing to `f`, sequentially.
fn remaining(g: &AbelianGroup, f: &[usize], k: usize, budgets: &Budgets) -> Result<u128> {
    let n = g.order();
    match k {
        1 => {
            let mut seen = 0u64;
            for &v in f {
                if seen >> v & 1 == 1 {
                    return Ok(0);
                }
                seen |= 1 << v;
            }
            Ok(1)
        }
        2 => Ok(count_injective_tuples(g, f, 2, budgets)? as u128),
        _ => {
            let mut p: Vec<usize> = (0..n).collect();
            let mut rest = vec![0usize; n];
            let mut acc = 0u128;
            loop {
                for i in 0..n {
                    rest[i] = g.sub(f[i], p[i]);
                }
                acc += remaining(g, &rest, k - 1, budgets)?;
                if !next_permutation(&mut p) {
                    break;
                }
            }
            Ok(acc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let b = Budgets::default();
        let z2 = AbelianGroup::cyclic(2).unwrap();
        assert_eq!(count_outer_sum(&z2, &[0, 1], 3, &b).unwrap(), 4u32.into());
        assert_eq!(count_outer_sum(&z2, &[0, 0], 2, &b).unwrap(), 2u32.into());
        let z3 = AbelianGroup::cyclic(3).unwrap();
        assert_eq!(count_outer_sum(&z3, &[0, 0, 0], 3, &b).unwrap(), 18u32.into());
    }

    #[test]
    fn guards() {
        let b = Budgets::default();
        let z6 = AbelianGroup::cyclic(6).unwrap();
        assert!(count_outer_sum(&z6, &[0; 6], 4, &b).unwrap_err().is_budget());
        let tight = Budgets {
            outer_sum_calls: 10,
            ..Budgets::default()
        };
        let z4 = AbelianGroup::cyclic(4).unwrap();
        assert!(count_outer_sum(&z4, &[0; 4], 3, &tight).unwrap_err().is_budget());
    }
}
