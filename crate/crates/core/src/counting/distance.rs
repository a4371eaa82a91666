//! Exact distance of `π₁+π₂` from uniform on `Gᵐ`, for independent uniform
//! injections `π₁, π₂ : {1,…,m} → G`.
//!
//! With `c(y)` the number of injection pairs summing to `y` and
//! `T = (n!/(n−m)!)²`, the normalized density is `D(y) = nᵐ c(y)/T`. All
//! deviations `nᵐ c(y) − T` are integers, so the norms are accumulated
//! exactly and only the final ratios are rounded.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::dp::count_injective_tuples;
use crate::budget::Budgets;
use crate::combin::{binomial, multinomial};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceMethod {
    /// Enumerate every injection pair and histogram the sums.
    Enumerate,
    /// One pair DP per multiset of `y`'s coordinates, weighted by the number
    /// of arrangements; `c(y)` is invariant under permuting positions.
    ClassDp,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceReport {
    /// `‖D − 1‖₂` under the uniform probability measure on `Gᵐ`.
    pub l2: f64,
    /// `‖D − 1‖₁` under the same measure.
    pub l1: f64,
    /// Total variation distance, `l1/2`.
    pub tv: f64,
    pub m: usize,
    pub n: usize,
    pub method: DistanceMethod,
}

pub fn injection_distribution_distance(g: &AbelianGroup, m: usize, budgets: &Budgets) -> Result<DistanceReport> {
    injection_distribution_distance_with(g, m, DistanceMethod::Auto, budgets)
}

pub fn injection_distribution_distance_with(
    g: &AbelianGroup,
    m: usize,
    method: DistanceMethod,
    budgets: &Budgets,
) -> Result<DistanceReport> {
    let n = g.order();
    if m >= n {
        return Err(Error::InvalidArgument(format!(
            "query count m = {m} must be below the group order {n}"
        )));
    }
    let injections = falling(n, m);
    let pairs = injections.saturating_mul(injections);
    let cells = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    let method = match method {
        DistanceMethod::Auto if pairs <= budgets.injection_pairs && cells <= budgets.bins => {
            DistanceMethod::Enumerate
        }
        DistanceMethod::Auto => DistanceMethod::ClassDp,
        other => other,
    };
    let (abs_sum, sq_sum) = match method {
        DistanceMethod::Enumerate => {
            if pairs > budgets.injection_pairs {
                return Err(Error::budget("injection pairs", pairs, budgets.injection_pairs));
            }
            if cells > budgets.bins {
                return Err(Error::budget("histogram cells", cells, budgets.bins));
            }
            deviations_by_enumeration(g, m, cells as usize, pairs)
        }
        DistanceMethod::ClassDp => {
            let classes = binomial(n + m - 1, m).unwrap_or(u128::MAX);
            if classes > budgets.bins {
                return Err(Error::budget("coordinate multisets", classes, budgets.bins));
            }
            deviations_by_classes(g, m, cells, pairs, budgets)?
        }
        DistanceMethod::Auto => unreachable!(),
    };
    let t = BigUint::from(pairs);
    let nm = BigUint::from(cells);
    let l1 = ratio(&abs_sum, &(&t * &nm));
    let l2 = ratio(&sq_sum, &(&t * &t * &nm)).sqrt();
    Ok(DistanceReport {
        l2,
        l1,
        tv: l1 / 2.0,
        m,
        n,
        method,
    })
}

fn falling(n: usize, m: usize) -> u128 {
    (0..m).map(|i| (n - i) as u128).product()
}

fn ratio(a: &BigUint, b: &BigUint) -> f64 {
    // keep ~60 significant bits of each side before converting
    let shift = a.bits().max(b.bits()).saturating_sub(1000);
    let (a, b) = (a >> shift, b >> shift);
    a.to_f64().unwrap() / b.to_f64().unwrap()
}

fn injections(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, m: usize, cur: &mut Vec<usize>, used: u64, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if used >> v & 1 == 0 {
                cur.push(v);
                rec(n, m, cur, used | 1 << v, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(n, m, &mut Vec::with_capacity(m), 0, &mut out);
    out
}

fn deviations_by_enumeration(g: &AbelianGroup, m: usize, cells: usize, pairs: u128) -> (BigUint, BigUint) {
    let n = g.order();
    let inj = injections(n, m);
    let workers = par::current_threads().max(1);
    // cap the transient histograms at roughly 256 MiB
    let max_copies = (64usize << 20) / cells.max(1);
    let chunks = par::chunks(inj.len(), inj.len().div_ceil(workers.min(max_copies.max(1))));
    let hists = par::map_indexed(chunks.len(), |c| {
        let mut h = vec![0u32; cells];
        for a in &inj[chunks[c].clone()] {
            for b in &inj {
                let mut y = 0usize;
                for i in 0..m {
                    y = y * n + g.add(a[i], b[i]);
                }
                h[y] += 1;
            }
        }
        h
    });
    let mut hist = vec![0u64; cells];
    for h in hists {
        for (acc, x) in hist.iter_mut().zip(h) {
            *acc += x as u64;
        }
    }
    let nm = cells as i128;
    let t = pairs as i128;
    let mut abs = BigUint::from(0u32);
    let mut sq = BigUint::from(0u32);
    for &c in &hist {
        let dev = BigInt::from(nm * c as i128 - t);
        abs += dev.abs().to_biguint().unwrap();
        sq += (&dev * &dev).to_biguint().unwrap();
    }
    (abs, sq)
}

/// Nondecreasing sequences of length `m` over `0..n`.
fn multisets(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut y = vec![0usize; m];
    loop {
        out.push(y.clone());
        let Some(i) = (0..m).rev().find(|&i| y[i] + 1 < n) else {
            break;
        };
        let v = y[i] + 1;
        y[i..].iter_mut().for_each(|x| *x = v);
    }
    out
}

fn deviations_by_classes(
    g: &AbelianGroup,
    m: usize,
    cells: u128,
    pairs: u128,
    budgets: &Budgets,
) -> Result<(BigUint, BigUint)> {
    let n = g.order();
    let classes = multisets(n, m);
    let parts = par::map_indexed(classes.len(), |k| -> Result<(BigUint, BigUint)> {
        let y = &classes[k];
        let c = count_injective_tuples(g, y, 2, budgets)?;
        let mut mult = Vec::new();
        let mut i = 0;
        while i < y.len() {
            let mut j = i;
            while j < y.len() && y[j] == y[i] {
                j += 1;
            }
            mult.push(j - i);
            i = j;
        }
        let weight = BigInt::from(multinomial(&mult));
        let dev = BigInt::from(cells) * BigInt::from(c) - BigInt::from(pairs);
        let abs = (&weight * dev.abs()).to_biguint().unwrap();
        let sq = (&weight * &dev * &dev).to_biguint().unwrap();
        Ok((abs, sq))
    });
    let mut abs = BigUint::from(0u32);
    let mut sq = BigUint::from(0u32);
    for p in parts {
        let (a, s) = p?;
        abs += a;
        sq += s;
    }
    Ok((abs, sq))
}
