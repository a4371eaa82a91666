//! Level-synchronized bitmask DP for `π₁+⋯+π_d = f` over injective tables.
//!
//! Positions are processed in order. After `i` positions every summand has
//! used exactly `i` values, so a level holds all tuples of `d` masks with
//! popcount `i`, densely indexed by the masks' ranks. Each target state of
//! level `i+1` pulls from its predecessors, which keeps the fan-out free of
//! write contention and the result independent of the thread count.

use crate::budget::Budgets;
use crate::combin::{binomial, ln_factorial, MaskTable};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::par;

/// Number of `d`-tuples of injections `{0..L} → G` (with `L = f.len()`)
/// summing pointwise to `f`.
pub(crate) fn count_injective_tuples(
    g: &AbelianGroup,
    f: &[usize],
    d: usize,
    budgets: &Budgets,
) -> Result<u64> {
    let n = g.order();
    let len = f.len();
    assert!(d >= 2, "tuple DP needs at least two summands");
    if len > n {
        return Ok(0);
    }
    if n > 24 {
        return Err(Error::budget("bitmask DP group order", n as u128, 24u128));
    }
    // per-state counts never exceed (L!)^{d-1}
    let bits = ((d - 1) as f64 * ln_factorial(len) / std::f64::consts::LN_2).ceil() as u128;
    if bits > 63 {
        return Err(Error::budget("DP count bits", bits, 63u128));
    }
    let mut peak_states = 0u128;
    let mut peak_pair = 0u128;
    let mut prev_states = 1u128;
    for i in 1..=len {
        let s = binomial(n, i)
            .and_then(|c| c.checked_pow(d as u32))
            .unwrap_or(u128::MAX);
        peak_states = peak_states.max(s);
        peak_pair = peak_pair.max(s.saturating_add(prev_states));
        prev_states = s;
    }
    if peak_states > budgets.dp_states {
        return Err(Error::budget("DP states per level", peak_states, budgets.dp_states));
    }
    let bytes = peak_pair.saturating_mul(8);
    if bytes > budgets.dp_memory_bytes {
        return Err(Error::budget("DP memory bytes", bytes, budgets.dp_memory_bytes));
    }

    let masks = MaskTable::new(n);
    let mut level: Vec<u64> = vec![1];
    for i in 0..len {
        let prev_c = masks.by_size[i].len();
        let next_c = masks.by_size[i + 1].len();
        let total = next_c.pow(d as u32);
        let target = f[i];
        let mut next = vec![0u64; total];
        let prev = &level;
        let masks = &masks;
        par::fill_indexed(&mut next, |t| {
            pull(g, masks, prev, prev_c, next_c, i + 1, d, t, target)
        });
        level = next;
    }
    Ok(level.iter().sum())
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn pull(
    g: &AbelianGroup,
    masks: &MaskTable,
    prev: &[u64],
    prev_c: usize,
    next_c: usize,
    size: usize,
    d: usize,
    mut t: usize,
    target: usize,
) -> u64 {
    // decode the d masks of the target state (component 0 least significant)
    let mut m = [0u32; 8];
    for slot in m.iter_mut().take(d) {
        *slot = masks.by_size[size][t % next_c];
        t /= next_c;
    }
    let mut bits = [[0u8; 32]; 8];
    let mut nbits = [0usize; 8];
    for j in 0..d - 1 {
        let mut mm = m[j];
        while mm != 0 {
            bits[j][nbits[j]] = mm.trailing_zeros() as u8;
            nbits[j] += 1;
            mm &= mm - 1;
        }
    }
    let last = d - 1;
    let mut idx = [0usize; 8];
    let mut acc = 0u64;
    loop {
        let mut s = 0usize;
        for j in 0..last {
            s = g.add(s, bits[j][idx[j]] as usize);
        }
        let a_last = g.sub(target, s);
        if m[last] >> a_last & 1 == 1 {
            let mut p = 0usize;
            let mut scale = 1usize;
            for j in 0..last {
                let pm = m[j] & !(1u32 << bits[j][idx[j]]);
                p += masks.rank[pm as usize] as usize * scale;
                scale *= prev_c;
            }
            let pm = m[last] & !(1u32 << a_last);
            p += masks.rank[pm as usize] as usize * scale;
            acc += prev[p];
        }
        // odometer over the free summands
        let mut j = 0;
        while j < last {
            idx[j] += 1;
            if idx[j] < nbits[j] {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == last {
            break;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> AbelianGroup {
        AbelianGroup::cyclic(n).unwrap()
    }

    #[test]
    fn pairs_small() {
        let b = Budgets::default();
        assert_eq!(count_injective_tuples(&z(2), &[0, 0], 2, &b).unwrap(), 2);
        assert_eq!(count_injective_tuples(&z(3), &[0, 1, 2], 2, &b).unwrap(), 3);
        assert_eq!(count_injective_tuples(&z(2), &[0, 1], 2, &b).unwrap(), 0);
    }

    #[test]
    fn triples_small() {
        let b = Budgets::default();
        assert_eq!(count_injective_tuples(&z(2), &[0, 1], 3, &b).unwrap(), 4);
        assert_eq!(count_injective_tuples(&z(3), &[0, 0, 0], 3, &b).unwrap(), 18);
        assert_eq!(count_injective_tuples(&z(2), &[0, 0], 3, &b).unwrap(), 0);
    }

    #[test]
    fn injections_shorter_than_group() {
        // pairs of injections {0,1} -> Z/3 summing to (0,0): a, -a with a injective
        let b = Budgets::default();
        assert_eq!(count_injective_tuples(&z(3), &[0, 0], 2, &b).unwrap(), 6);
        assert_eq!(count_injective_tuples(&z(3), &[0, 1], 2, &b).unwrap(), 3);
        assert_eq!(count_injective_tuples(&z(3), &[], 2, &b).unwrap(), 1);
    }

    #[test]
    fn budget_rejects_big_levels() {
        let b = Budgets {
            dp_states: 100,
            ..Budgets::default()
        };
        assert!(count_injective_tuples(&z(7), &[0; 7], 2, &b).unwrap_err().is_budget());
    }
}
