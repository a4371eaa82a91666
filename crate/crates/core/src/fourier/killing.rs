//! Killing partitions: set partitions of the nonzero coordinates in which
//! every part sums to the trivial character.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::AbelianGroup;

/// Largest sparsity accepted by [`classify_killing`] (Bell(10) = 115975).
pub const MAX_KILLING_M: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KillingClassification {
    pub m: usize,
    /// Largest number of parts over killing partitions, `None` if nothing kills.
    pub max_parts: Option<usize>,
    /// Killing partitions with exactly `m/2` parts (0 for odd `m`).
    pub half_partitions: usize,
    /// Exactly one killing partition has `m/2` parts.
    pub unique_max_pairing: bool,
    /// Membership in the major-arc set: `m` even and `unique_max_pairing`.
    pub in_major_set: bool,
}

/// Classifies the nonzero coordinates `χ₁,…,χ_m` (character indices).
pub fn classify_killing(group: &AbelianGroup, nonzero: &[usize]) -> Result<KillingClassification> {
    let m = nonzero.len();
    if m > MAX_KILLING_M {
        return Err(Error::budget("killing partition m", m as u128, MAX_KILLING_M as u128));
    }
    if nonzero.iter().any(|&c| c == 0 || c >= group.order()) {
        return Err(Error::InvalidArgument(
            "killing classification needs nonzero characters of the group".into(),
        ));
    }
    let mut max_parts: Option<usize> = None;
    let mut half = 0usize;

    // restricted growth string: rgs[0] = 0, rgs[i] ≤ 1 + max(rgs[..i])
    let mut rgs = vec![0usize; m];
    let mut sums = vec![0usize; m.max(1)];
    loop {
        let parts = if m == 0 { 0 } else { rgs.iter().max().unwrap() + 1 };
        sums[..parts].iter_mut().for_each(|s| *s = 0);
        for (i, &b) in rgs.iter().enumerate() {
            sums[b] = group.add(sums[b], nonzero[i]);
        }
        if sums[..parts].iter().all(|&s| s == 0) {
            max_parts = Some(max_parts.map_or(parts, |p| p.max(parts)));
            if m % 2 == 0 && parts == m / 2 {
                half += 1;
            }
        }
        if !next_rgs(&mut rgs) {
            break;
        }
    }
    let unique = m % 2 == 0 && half == 1;
    Ok(KillingClassification {
        m,
        max_parts,
        half_partitions: half,
        unique_max_pairing: unique,
        in_major_set: unique,
    })
}

fn next_rgs(rgs: &mut [usize]) -> bool {
    let m = rgs.len();
    if m <= 1 {
        return false;
    }
    let mut i = m - 1;
    loop {
        let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
        if rgs[i] <= prefix_max {
            rgs[i] += 1;
            rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
            return true;
        }
        if i == 1 {
            return false;
        }
        i -= 1;
    }
}
