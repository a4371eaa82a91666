//! Small exact combinatorics shared by the kernels.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn factorial_u128(n: usize) -> Option<u128> {
    (2..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

/// `C(n, k)` as a `u128`; `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp().round()
}

/// `ln(n!)` by direct summation; exact enough for the `n` used here.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `n! / n^n` in double precision.
pub fn bijection_density(n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    (ln_factorial(n) - n as f64 * (n as f64).ln()).exp()
}

/// Exact multinomial coefficient `(Σ parts)! / Π parts!`.
pub fn multinomial(parts: &[usize]) -> BigUint {
    let total: usize = parts.iter().sum();
    let denom = parts
        .iter()
        .fold(BigUint::one(), |acc, &a| acc * factorial(a));
    factorial(total) / denom
}

/// Natural log of a big integer without losing range.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Writes the permutation of `0..n` with lexicographic rank `rank` into `out`.
pub fn unrank_permutation(n: usize, mut rank: u128, out: &mut Vec<usize>) {
    out.clear();
    let mut pool: Vec<usize> = (0..n).collect();
    let mut fact = factorial_u128(n.saturating_sub(1)).expect("n too large for u128");
    for i in 0..n {
        let idx = (rank / fact) as usize;
        rank %= fact;
        out.push(pool.remove(idx));
        if n - 1 - i > 0 {
            fact /= (n - 1 - i) as u128;
        }
    }
}

/// Advances `p` to the next permutation in lexicographic order.
pub fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Subsets of `0..n` grouped by cardinality, with a dense rank for each.
#[derive(Debug, Clone)]
pub struct MaskTable {
    pub n: usize,
    /// `by_size[k]` lists every `k`-subset as a bitmask, in increasing order.
    pub by_size: Vec<Vec<u32>>,
    /// `rank[mask]` is the position of `mask` inside `by_size[popcount(mask)]`.
    pub rank: Vec<u32>,
}

impl MaskTable {
    pub fn new(n: usize) -> Self {
        assert!(n <= 24, "mask table limited to 24 bits");
        let mut by_size = vec![Vec::new(); n + 1];
        let mut rank = vec![0u32; 1 << n];
        for mask in 0u32..(1u32 << n) {
            let k = mask.count_ones() as usize;
            rank[mask as usize] = by_size[k].len() as u32;
            by_size[k].push(mask);
        }
        MaskTable { n, by_size, rank }
    }
}

/// Iterates the `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let c = cur.as_mut().unwrap();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - k + i {
                c[i] += 1;
                for j in i + 1..k {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}
