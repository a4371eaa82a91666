//! Fast kernels against the brute-force oracles, plus frozen reference values.

mod common;

use bijsum_core::counting::{
    count_pairs, count_tuples, injection_distribution_distance, injection_distribution_distance_with,
    random_feasible_f, DistanceMethod, FunctionTable, Strategy,
};
use bijsum_core::latin::{count_transversals, LatinCube, LatinHypercube};
use bijsum_core::{AbelianGroup, Budgets, CharacterVector, FourierEngine};
use common::*;
use num_bigint::BigUint;

fn table(g: &AbelianGroup, v: &[usize]) -> FunctionTable {
    FunctionTable::new(g, v.to_vec()).unwrap()
}

#[test]
fn coefficients_match_permutation_sum() {
    for g in groups_between(2, 5) {
        let e = FourierEngine::new(&g);
        let tol = 1e-9 * e.density();
        for chi in all_characters(&g).step_by(7) {
            let want = brute_coeff(&g, chi.coords());
            assert!((e.coeff_direct(&chi).unwrap() - want).norm() < tol, "{g} {chi:?}");
            assert!((e.coeff_recursive(&chi).unwrap() - want).norm() < tol, "{g} {chi:?}");
        }
    }
}

#[test]
fn frozen_coefficients() {
    let z4 = z(4);
    let e = FourierEngine::new(&z4);
    let chi = CharacterVector::new(&z4, vec![2, 2, 0, 0]).unwrap();
    assert!((e.coeff_recursive(&chi).unwrap().re + 0.03125).abs() < 1e-15);
    let z5 = z(5);
    let e = FourierEngine::new(&z5);
    let chi = CharacterVector::new(&z5, vec![1, 4, 0, 0, 0]).unwrap();
    assert!((e.coeff_direct(&chi).unwrap().re + 0.0096).abs() < 1e-15);
}

#[test]
fn counts_match_tuple_enumeration() {
    let b = Budgets::default();
    for g in groups_between(1, 4) {
        let n = g.order();
        for d in 2..=3usize {
            let mut tables = vec![FunctionTable::zero(n), FunctionTable::identity(&g)];
            tables.extend((0..3).map(|s| random_feasible_f(&g, d, s)));
            for f in &tables {
                let want = brute_count(&g, f.values(), d);
                for s in [Strategy::Auto, Strategy::OuterSum, Strategy::Fourier] {
                    let got = count_tuples(&g, f, d, s, &b).unwrap().count;
                    assert_eq!(got, BigUint::from(want), "{g} d={d} f={:?} {s}", f.values());
                }
            }
        }
    }
    for g in groups_between(1, 3) {
        for s in 0..3 {
            let f = random_feasible_f(&g, 4, s);
            let want = brute_count(&g, f.values(), 4);
            assert_eq!(count_tuples(&g, &f, 4, Strategy::Auto, &b).unwrap().count, BigUint::from(want));
        }
    }
}

#[test]
fn frozen_counts() {
    let b = Budgets::default();
    let z2 = z(2);
    let z3 = z(3);
    assert_eq!(count_pairs(&z2, &table(&z2, &[0, 0]), &b).unwrap().count, 2u32.into());
    assert_eq!(count_pairs(&z3, &table(&z3, &[0, 1, 2]), &b).unwrap().count, 3u32.into());
    let c = |g: &AbelianGroup, v: &[usize], d| count_tuples(g, &table(g, v), d, Strategy::Auto, &b).unwrap().count;
    assert_eq!(c(&z2, &[0, 1], 3), 4u32.into());
    assert_eq!(c(&z3, &[0, 0, 0], 3), 18u32.into());
    assert_eq!(c(&z2, &[0, 0], 3), 0u32.into());
    assert_eq!(c(&z(5), &[0; 5], 3), 1800u32.into());
    assert_eq!(c(&z(7), &[0; 7], 3), 670320u32.into());
}

#[test]
fn transversals_match_permutation_search() {
    let b = Budgets::default();
    for g in groups_between(2, 6) {
        for seed in 0..2 {
            let pi = bijsum_core::counting::random_bijection(&g, seed);
            let cube = LatinCube::build(&g, &pi, 2).unwrap();
            let n = g.order();
            let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| cube.entry(&[i, j])).collect()).collect();
            assert_eq!(
                count_transversals(&cube, &b).unwrap().count,
                BigUint::from(brute_transversals(&rows)),
                "{g}"
            );
        }
    }
    let t = |n| count_transversals(&LatinCube::build(&z(n), &FunctionTable::identity(&z(n)), 2).unwrap(), &b).unwrap().count;
    assert_eq!(t(5), 15u32.into());
    assert_eq!(t(7), 133u32.into());
}

#[test]
fn distances_match_histogram() {
    let b = Budgets::default();
    for g in groups_between(2, 5) {
        for m in 1..g.order() {
            let (l2, l1) = brute_distance(&g, m);
            for method in [DistanceMethod::Enumerate, DistanceMethod::ClassDp] {
                let r = injection_distribution_distance_with(&g, m, method, &b).unwrap();
                assert!((r.l2 - l2).abs() < 1e-12 && (r.l1 - l1).abs() < 1e-12, "{g} m={m} {method:?}");
            }
        }
    }
    let r = injection_distribution_distance(&z(3), 2, &b).unwrap();
    assert!((r.l2 - 0.125f64.sqrt()).abs() < 1e-12);
    assert!((r.tv - 1.0 / 6.0).abs() < 1e-12);
    assert!((r.l1 - 1.0 / 3.0).abs() < 1e-12);
}
