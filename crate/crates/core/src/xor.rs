//! The xor of two independent permutations of `{0,1}^k` as a PRF.
//!
//! For `m` distinct fixed queries the response tuple of `π₁ ⊕ π₂` is the sum
//! of two independent uniform injections `{1,…,m} → (Z/2)^k`, so its distance
//! from uniform is [`injection_distribution_distance`] on that group. Only
//! this non-adaptive distributional distance is computed.

use serde::Serialize;

use crate::budget::Budgets;
use crate::counting::injection_distribution_distance;
use crate::error::{Error, Result};
use crate::group::AbelianGroup;

/// Widest block size accepted for exact enumeration.
pub const MAX_EXACT_BITS: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdvantageReport {
    pub k: u32,
    pub m: usize,
    /// Exact total variation distance of the `m` responses from uniform.
    pub exact_tv: Option<f64>,
    /// `2·prp_advantage_input + C·m/2^{3k/2}`.
    pub bound_value: f64,
    pub prp_advantage_input: f64,
    /// The caller-supplied `C`.
    pub constant: f64,
    /// `tv·2^{3k/2}/m`, present with `exact_tv`.
    pub empirical_constant: Option<f64>,
}

fn block_group(k: u32) -> Result<AbelianGroup> {
    if k == 0 || k > 63 {
        return Err(Error::InvalidArgument(format!("bit width {k} out of range 1..=63")));
    }
    AbelianGroup::elementary_two(k as usize)
}

fn check_queries(k: u32, m: usize) -> Result<()> {
    if m == 0 || (m as u128) >= 1u128 << k {
        return Err(Error::InvalidArgument(format!("queries must satisfy 1 <= m < 2^{k}")));
    }
    Ok(())
}

/// `2·prp_adv + constant·m/2^{3k/2}`.
pub fn advantage_bound(k: u32, m: usize, prp_adv: f64, constant: f64) -> Result<f64> {
    check_queries(k, m)?;
    if !(constant > 0.0 && constant.is_finite()) {
        return Err(Error::InvalidArgument("constant must be positive".into()));
    }
    if !(0.0..=1.0).contains(&prp_adv) {
        return Err(Error::InvalidArgument("prp advantage must lie in [0,1]".into()));
    }
    Ok(2.0 * prp_adv + constant * m as f64 / 2f64.powf(1.5 * k as f64))
}

/// Exact distance for `k`-bit blocks and `m` queries, with the bound
/// evaluated at `prp_adv = 0` and `constant = 1`.
pub fn xor_tv(k: u32, m: usize, budgets: &Budgets) -> Result<AdvantageReport> {
    advantage_report(k, m, 0.0, 1.0, true, budgets)
}

pub fn advantage_report(
    k: u32,
    m: usize,
    prp_adv: f64,
    constant: f64,
    exact: bool,
    budgets: &Budgets,
) -> Result<AdvantageReport> {
    let bound_value = advantage_bound(k, m, prp_adv, constant)?;
    let exact_tv = if exact {
        if k > MAX_EXACT_BITS {
            return Err(Error::budget("exact xor block bits", k as u128, MAX_EXACT_BITS as u128));
        }
        Some(injection_distribution_distance(&block_group(k)?, m, budgets)?.tv)
    } else {
        None
    };
    Ok(AdvantageReport {
        k,
        m,
        exact_tv,
        bound_value,
        prp_advantage_input: prp_adv,
        constant,
        empirical_constant: exact_tv.map(|tv| tv * 2f64.powf(1.5 * k as f64) / m as f64),
    })
}

/// Exact reports for every `m` in `1..2^k`.
pub fn tv_grid(k: u32, budgets: &Budgets) -> Result<Vec<AdvantageReport>> {
    (1..1usize << k).map(|m| xor_tv(k, m, budgets)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_widths() {
        let b = Budgets::default();
        let g = tv_grid(2, &b).unwrap();
        assert_eq!(g[0].exact_tv, Some(0.0));
        assert!((g[1].exact_tv.unwrap() - 1.0 / 12.0).abs() < 1e-12);
        assert!((g[2].exact_tv.unwrap() - 5.0 / 48.0).abs() < 1e-12);
        assert!((g[1].empirical_constant.unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let g = tv_grid(3, &b).unwrap();
        let want = [0.0, 1.0 / 56.0, 25.0 / 672.0, 5717.0 / 134400.0];
        for (r, w) in g.iter().zip(want) {
            assert!((r.exact_tv.unwrap() - w).abs() < 1e-12, "{r:?}");
        }
        for r in &g {
            assert!(r.empirical_constant.unwrap() <= 10.0);
            assert!(r.bound_value >= 2.0 * r.prp_advantage_input);
        }
    }

    #[test]
    fn bound_arithmetic() {
        assert!((advantage_bound(2, 1, 0.1, 8.0).unwrap() - 1.2).abs() < 1e-12);
        assert!(advantage_bound(2, 4, 0.0, 1.0).is_err());
        assert!(advantage_bound(2, 2, 0.0, 0.0).is_err());
        assert!(advantage_bound(2, 2, 1.5, 1.0).is_err());
        let r = advantage_report(40, 1000, 0.0, 2.0, false, &Budgets::default()).unwrap();
        assert!(r.exact_tv.is_none() && r.empirical_constant.is_none());
        assert!(advantage_report(7, 2, 0.0, 1.0, true, &Budgets::default()).unwrap_err().is_budget());
    }
}
