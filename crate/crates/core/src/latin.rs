//! Group-induced Latin hypercubes `L^d(G,π)` and transversal counting.
//!
//! The cube's `(i₁,…,i_d)` entry is `π^{−1}(π(i₁)+⋯+π(i_d))`; symbols are the
//! position labels `0..n`. [`count_transversals`] works through the
//! [`LatinHypercube`] trait only and never looks at the group, so it is an
//! independent check on the group-theoretic counts in [`crate::counting`].

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use crate::budget::Budgets;
use crate::combin::{binomial, factorial, ln_big};
use crate::counting::{count_tuples, FunctionTable, Strategy};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::par;

/// Read access to a `d`-dimensional Latin hypercube of order `n`.
pub trait LatinHypercube: Sync {
    fn order(&self) -> usize;
    fn dim(&self) -> usize;
    /// Symbol in `0..n` at the cell with coordinates `idx` (`idx.len() == dim`).
    fn entry(&self, idx: &[usize]) -> usize;
}

/// `L^d(G,π)`, computed on demand and tabulated when small.
#[derive(Debug, Clone)]
pub struct LatinCube {
    group: AbelianGroup,
    pi: Vec<usize>,
    pi_inv: Vec<usize>,
    d: usize,
    table: Option<Vec<u16>>,
}

const MATERIALIZE_LIMIT: usize = 1 << 20;

impl LatinCube {
    pub fn build(group: &AbelianGroup, pi: &FunctionTable, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument("cube dimension must be at least 2".into()));
        }
        if !pi.is_bijective(group) {
            return Err(Error::NotBijective);
        }
        let n = group.order();
        let mut pi_inv = vec![0; n];
        for (i, &x) in pi.values().iter().enumerate() {
            pi_inv[x] = i;
        }
        let mut cube = LatinCube {
            group: group.clone(),
            pi: pi.values().to_vec(),
            pi_inv,
            d,
            table: None,
        };
        let cells = (n as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
        if d <= 3 && cells <= MATERIALIZE_LIMIT as u128 {
            let mut table = Vec::with_capacity(cells as usize);
            let mut idx = vec![0usize; d];
            for _ in 0..cells {
                table.push(cube.compute(&idx) as u16);
                odometer(&mut idx, n);
            }
            cube.table = Some(table);
        }
        Ok(cube)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    fn compute(&self, idx: &[usize]) -> usize {
        self.pi_inv[self.group.sum(idx.iter().map(|&i| self.pi[i]))]
    }

    /// Exhaustive line check: along every axis-parallel line each symbol
    /// appears exactly once.
    pub fn verify_latin(&self) -> bool {
        verify_latin(self)
    }
}

impl LatinHypercube for LatinCube {
    fn order(&self) -> usize {
        self.group.order()
    }

    fn dim(&self) -> usize {
        self.d
    }

    fn entry(&self, idx: &[usize]) -> usize {
        match &self.table {
            Some(t) => {
                let n = self.group.order();
                t[idx.iter().fold(0, |acc, &i| acc * n + i)] as usize
            }
            None => self.compute(idx),
        }
    }
}

/// Increments `idx` as a base-`n` counter, last coordinate fastest.
fn odometer(idx: &mut [usize], n: usize) -> bool {
    for x in idx.iter_mut().rev() {
        *x += 1;
        if *x < n {
            return true;
        }
        *x = 0;
    }
    false
}

pub fn verify_latin<L: LatinHypercube + ?Sized>(cube: &L) -> bool {
    let n = cube.order();
    let d = cube.dim();
    if n == 0 {
        return true;
    }
    let mut idx = vec![0usize; d];
    for axis in 0..d {
        // every line along `axis`: iterate the other coordinates
        let mut others = vec![0usize; d - 1];
        loop {
            let mut seen = vec![false; n];
            for v in 0..n {
                let mut k = 0;
                for (a, slot) in idx.iter_mut().enumerate() {
                    if a == axis {
                        *slot = v;
                    } else {
                        *slot = others[k];
                        k += 1;
                    }
                }
                let s = cube.entry(&idx);
                if s >= n || std::mem::replace(&mut seen[s], true) {
                    return false;
                }
            }
            if !odometer(&mut others, n) {
                break;
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransversalCount {
    #[serde(serialize_with = "decimal")]
    pub count: BigUint,
    pub d: usize,
    pub n: usize,
    pub taranenko_ratio: f64,
}

fn decimal<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

/// Largest order accepted for each dimension.
pub fn transversal_max_n(d: usize) -> usize {
    match d {
        2 => 12,
        3 => 8,
        _ => 5,
    }
}

/// Counts transversals by a DP over the first axis. The state is the set of
/// used hyperplanes on axes `2..d` together with the set of used symbols.
pub fn count_transversals<L: LatinHypercube + ?Sized>(cube: &L, budgets: &Budgets) -> Result<TransversalCount> {
    let n = cube.order();
    let d = cube.dim();
    if n > transversal_max_n(d) {
        return Err(Error::budget("transversal order", n as u128, transversal_max_n(d) as u128));
    }
    if d * n > 64 {
        return Err(Error::budget("transversal state bits", (d * n) as u128, 64u128));
    }
    let peak = (0..=n)
        .map(|i| binomial(n, i).and_then(|c| c.checked_pow(d as u32)).unwrap_or(u128::MAX))
        .max()
        .unwrap_or(1);
    if peak > budgets.dp_states {
        return Err(Error::budget("transversal states per level", peak, budgets.dp_states));
    }
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    // state: d masks of n bits; masks 0..d-1 are axes 2..d, mask d-1 is symbols
    let mut level: Vec<(u64, u128)> = vec![(0, 1)];
    for row in 0..n {
        let chunks = par::chunks(level.len(), 512);
        let partials = par::map_indexed(chunks.len(), |c| {
            let mut out: HashMap<u64, u128> = HashMap::new();
            let mut idx = vec![0usize; d];
            idx[0] = row;
            let mut free: Vec<Vec<usize>> = vec![Vec::new(); d - 1];
            for &(state, count) in &level[chunks[c].clone()] {
                for (a, list) in free.iter_mut().enumerate() {
                    let used = (state >> (a * n)) & full;
                    list.clear();
                    list.extend((0..n).filter(|&v| used >> v & 1 == 0));
                }
                let sym_used = (state >> ((d - 1) * n)) & full;
                let mut pos = vec![0usize; d - 1];
                'cells: loop {
                    for a in 0..d - 1 {
                        idx[a + 1] = free[a][pos[a]];
                    }
                    let s = cube.entry(&idx);
                    if sym_used >> s & 1 == 0 {
                        let mut next = state | 1u64 << ((d - 1) * n + s);
                        for a in 0..d - 1 {
                            next |= 1u64 << (a * n + idx[a + 1]);
                        }
                        *out.entry(next).or_insert(0) += count;
                    }
                    let mut a = 0;
                    loop {
                        if a == d - 1 {
                            break 'cells;
                        }
                        pos[a] += 1;
                        if pos[a] < free[a].len() {
                            break;
                        }
                        pos[a] = 0;
                        a += 1;
                    }
                }
            }
            out
        });
        let mut merged: HashMap<u64, u128> = HashMap::new();
        for part in partials {
            for (k, v) in part {
                *merged.entry(k).or_insert(0) += v;
            }
        }
        let mut next: Vec<(u64, u128)> = merged.into_iter().collect();
        next.sort_unstable_by_key(|&(k, _)| k);
        level = next;
    }
    let count: BigUint = level.iter().map(|&(_, c)| BigUint::from(c)).sum();
    Ok(TransversalCount {
        taranenko_ratio: taranenko_ratio(d, n, &count),
        count,
        d,
        n,
    })
}

/// `count / (n^{d−1}/e^d)ⁿ`.
pub fn taranenko_ratio(d: usize, n: usize, count: &BigUint) -> f64 {
    if count.is_zero() {
        return 0.0;
    }
    let nf = n as f64;
    (ln_big(count) - nf * ((d as f64 - 1.0) * nf.ln() - d as f64)).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosscheckReport {
    pub n: usize,
    pub d: usize,
    #[serde(serialize_with = "decimal")]
    pub transversals: BigUint,
    /// Solutions of `π₁+⋯+π_d = π`.
    #[serde(serialize_with = "decimal")]
    pub solutions: BigUint,
    /// Solutions of `π₁+⋯+π_d = π_{d+1}` over all `d+1` bijections.
    #[serde(serialize_with = "decimal")]
    pub extended_solutions: BigUint,
    pub ok: bool,
}

/// Checks that transversals of `L^d(G,π)` match the solutions of
/// `π₁+⋯+π_d = π`, and that `n!` times their number counts
/// `π₁+⋯+π_d = π_{d+1}`.
pub fn lemma_crosscheck(
    group: &AbelianGroup,
    pi: &FunctionTable,
    d: usize,
    budgets: &Budgets,
) -> Result<CrosscheckReport> {
    let cube = LatinCube::build(group, pi, d)?;
    let transversals = count_transversals(&cube, budgets)?.count;
    let solutions = count_tuples(group, pi, d, Strategy::Auto, budgets)?.count;
    // π₁+⋯+π_d = π_{d+1} iff π₁+⋯+π_d+(−π_{d+1}) = 0, and −π_{d+1} ranges over S
    let zero = FunctionTable::zero(group.order());
    let extended_solutions = count_tuples(group, &zero, d + 1, Strategy::Auto, budgets)?.count;
    let ok = transversals == solutions && &transversals * factorial(group.order()) == extended_solutions;
    Ok(CrosscheckReport {
        n: group.order(),
        d,
        transversals,
        solutions,
        extended_solutions,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> AbelianGroup {
        AbelianGroup::cyclic(n).unwrap()
    }

    struct Explicit(Vec<Vec<usize>>);

    impl LatinHypercube for Explicit {
        fn order(&self) -> usize {
            self.0.len()
        }
        fn dim(&self) -> usize {
            2
        }
        fn entry(&self, idx: &[usize]) -> usize {
            self.0[idx[0]][idx[1]]
        }
    }

    #[test]
    fn cyclic_squares() {
        let b = Budgets::default();
        let g = z(3);
        let cube = LatinCube::build(&g, &FunctionTable::identity(&g), 2).unwrap();
        assert_eq!(cube.entry(&[1, 2]), 0);
        assert_eq!(cube.entry(&[2, 2]), 1);
        for j in 0..3 {
            assert_eq!(cube.entry(&[0, j]), j);
        }
        assert!(cube.verify_latin());
        assert_eq!(count_transversals(&cube, &b).unwrap().count, 3u32.into());

        let g2 = z(2);
        let sq = LatinCube::build(&g2, &FunctionTable::identity(&g2), 2).unwrap();
        assert_eq!((sq.entry(&[0, 0]), sq.entry(&[0, 1])), (0, 1));
        assert_eq!((sq.entry(&[1, 0]), sq.entry(&[1, 1])), (1, 0));
        assert!(count_transversals(&sq, &b).unwrap().count.is_zero());

        let cube3 = LatinCube::build(&g2, &FunctionTable::identity(&g2), 3).unwrap();
        assert_eq!(count_transversals(&cube3, &b).unwrap().count, 4u32.into());
    }

    #[test]
    fn explicit_square_matches_brute_force() {
        // a non-group Latin square of order 5
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 3, 4, 0, 1],
            vec![3, 4, 1, 2, 0],
            vec![4, 2, 0, 1, 3],
        ];
        let sq = Explicit(rows.clone());
        assert!(verify_latin(&sq));
        let mut p: Vec<usize> = (0..5).collect();
        let mut brute = 0u32;
        loop {
            let mut seen = [false; 5];
            if (0..5).all(|r| !std::mem::replace(&mut seen[rows[r][p[r]]], true)) {
                brute += 1;
            }
            if !crate::combin::next_permutation(&mut p) {
                break;
            }
        }
        assert_eq!(count_transversals(&sq, &Budgets::default()).unwrap().count, brute.into());
    }

    #[test]
    fn broken_square_fails_check() {
        assert!(!verify_latin(&Explicit(vec![vec![0, 1], vec![0, 1]])));
    }

    #[test]
    fn rejects_bad_input() {
        let g = z(3);
        let bad = FunctionTable::new(&g, vec![0, 0, 1]).unwrap();
        assert!(matches!(LatinCube::build(&g, &bad, 2), Err(Error::NotBijective)));
        assert!(LatinCube::build(&g, &FunctionTable::identity(&g), 1).is_err());
        let g9 = z(9);
        let big = LatinCube::build(&g9, &FunctionTable::identity(&g9), 3).unwrap();
        assert!(count_transversals(&big, &Budgets::default()).unwrap_err().is_budget());
    }

    #[test]
    fn virtual_cube_matches_formula() {
        let g = AbelianGroup::new(&[2, 2]).unwrap();
        let pi = FunctionTable::new(&g, vec![3, 1, 0, 2]).unwrap();
        let cube = LatinCube::build(&g, &pi, 4).unwrap();
        assert!(cube.table.is_none());
        assert!(cube.verify_latin());
        let x = g.sum([3, 1, 0, 2]);
        assert_eq!(cube.entry(&[0, 1, 2, 3]), pi.values().iter().position(|&v| v == x).unwrap());
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(taranenko_ratio(2, 7, &BigUint::zero()), 0.0);
        assert!((taranenko_ratio(2, 7, &133u32.into()) - 194.2173873057208).abs() < 1e-9);
        assert!((taranenko_ratio(2, 3, &3u32.into()) - 44.82542149919278).abs() < 1e-10);
    }

    #[test]
    fn crosscheck_small() {
        let b = Budgets::default();
        let g = z(3);
        let r = lemma_crosscheck(&g, &FunctionTable::identity(&g), 2, &b).unwrap();
        assert_eq!(r.transversals, 3u32.into());
        assert_eq!(r.extended_solutions, 18u32.into());
        assert!(r.ok);
        let g2 = z(2);
        let r = lemma_crosscheck(&g2, &FunctionTable::identity(&g2), 3, &b).unwrap();
        assert_eq!(r.transversals, 4u32.into());
        assert!(r.ok);
    }
}
