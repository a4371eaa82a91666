//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the fast kernels.
#![allow(dead_code)]

use std::collections::HashMap;

use bijsum_core::combin::next_permutation;
use bijsum_core::{AbelianGroup, CharacterVector};
use num_complex::Complex64;

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

/// `n^{−n} Σ_{x distinct} Π χᵢ(xᵢ)` by summing over all orderings of `G`.
pub fn brute_coeff(g: &AbelianGroup, chi: &[usize]) -> Complex64 {
    let n = g.order();
    let s: Complex64 = permutations(n)
        .iter()
        .map(|x| chi.iter().zip(x).map(|(&c, &xi)| g.pair(c, xi)).product::<Complex64>())
        .sum();
    s / (n as f64).powi(n as i32)
}

/// Number of `(π₁,…,π_d)` with `Σπⱼ = f`, enumerating `π₁,…,π_{d−1}`.
pub fn brute_count(g: &AbelianGroup, f: &[usize], d: usize) -> u64 {
    let n = g.order();
    let perms = permutations(n);
    let mut idx = vec![0usize; d - 1];
    let mut count = 0;
    loop {
        let mut seen = vec![false; n];
        let ok = (0..n).all(|i| {
            let partial = g.sum(idx.iter().map(|&k| perms[k][i]));
            let last = g.sub(f[i], partial);
            !std::mem::replace(&mut seen[last], true)
        });
        count += ok as u64;
        let mut a = 0;
        loop {
            if a == d - 1 {
                return count;
            }
            idx[a] += 1;
            if idx[a] < perms.len() {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
    }
}

/// Transversals of a Latin square given by rows.
pub fn brute_transversals(rows: &[Vec<usize>]) -> u64 {
    let n = rows.len();
    permutations(n)
        .iter()
        .filter(|p| {
            let mut seen = vec![false; n];
            (0..n).all(|r| !std::mem::replace(&mut seen[rows[r][p[r]]], true))
        })
        .count() as u64
}

/// `(l2, l1)` of the normalized density of `π₁+π₂` on `Gᵐ` in floating point.
pub fn brute_distance(g: &AbelianGroup, m: usize) -> (f64, f64) {
    let n = g.order();
    let injections: Vec<Vec<usize>> = {
        let mut seen = std::collections::BTreeSet::new();
        for p in permutations(n) {
            seen.insert(p[..m].to_vec());
        }
        seen.into_iter().collect()
    };
    let mut hist: HashMap<Vec<usize>, u64> = HashMap::new();
    for a in &injections {
        for b in &injections {
            let y: Vec<usize> = a.iter().zip(b).map(|(&x, &z)| g.add(x, z)).collect();
            *hist.entry(y).or_insert(0) += 1;
        }
    }
    let total = (injections.len() * injections.len()) as f64;
    let cells = (n as f64).powi(m as i32);
    let mut l2 = 0.0;
    let mut l1 = 0.0;
    let occupied = hist.len() as f64;
    for &c in hist.values() {
        let dev = cells * c as f64 / total - 1.0;
        l2 += dev * dev;
        l1 += dev.abs();
    }
    // empty cells have deviation −1
    l2 += cells - occupied;
    l1 += cells - occupied;
    ((l2 / cells).sqrt(), l1 / cells)
}

/// Every character of `Ĝⁿ` with exactly `m` nonzero coordinates.
pub fn sparse_characters(g: &AbelianGroup, m: usize) -> Vec<CharacterVector> {
    let n = g.order();
    let mut out = Vec::new();
    for support in bijsum_core::combin::combinations(n, m) {
        let mut vals = vec![1usize; m];
        loop {
            let mut coords = vec![0; n];
            for (&p, &v) in support.iter().zip(&vals) {
                coords[p] = v;
            }
            out.push(CharacterVector::new(g, coords).unwrap());
            let mut i = 0;
            while i < m {
                vals[i] += 1;
                if vals[i] < n {
                    break;
                }
                vals[i] = 1;
                i += 1;
            }
            if i == m {
                break;
            }
        }
    }
    out
}

/// All of `Ĝⁿ`, first coordinate most significant.
pub fn all_characters(g: &AbelianGroup) -> impl Iterator<Item = CharacterVector> + '_ {
    let n = g.order();
    (0..n.pow(n as u32)).map(move |mut i| {
        let mut coords = vec![0; n];
        for c in coords.iter_mut().rev() {
            *c = i % n;
            i /= n;
        }
        CharacterVector::new(g, coords).unwrap()
    })
}

pub fn groups_between(lo: usize, hi: usize) -> Vec<AbelianGroup> {
    AbelianGroup::all_up_to(hi as u64)
        .into_iter()
        .filter(|g| g.order() >= lo)
        .collect()
}

pub fn z(n: u64) -> AbelianGroup {
    AbelianGroup::cyclic(n).unwrap()
}
