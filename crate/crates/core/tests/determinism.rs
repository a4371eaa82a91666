//! Results are bit-identical at every thread count.

use bijsum_core::counting::{count_tuples, injection_distribution_distance, random_feasible_f, FunctionTable, Strategy};
use bijsum_core::latin::{count_transversals, LatinCube};
use bijsum_core::par::with_threads;
use bijsum_core::{AbelianGroup, Budgets, FourierEngine};

fn snapshot() -> (Vec<u64>, Vec<String>) {
    let b = Budgets::default();
    let mut floats = Vec::new();
    let mut counts = Vec::new();
    let z5 = AbelianGroup::cyclic(5).unwrap();
    let f = random_feasible_f(&z5, 3, 1);
    let e = FourierEngine::new(&z5);
    let s = e.full_power_sum(3, f.values()).unwrap();
    floats.extend([s.re.to_bits(), s.im.to_bits()]);
    let z8 = AbelianGroup::cyclic(8).unwrap();
    let e8 = FourierEngine::new(&z8);
    let sp = e8.sparse_power_sum(3, 3, &[0; 8]).unwrap();
    floats.extend([sp.re.to_bits(), sp.im.to_bits()]);
    let d = injection_distribution_distance(&AbelianGroup::new(&[2, 2, 2]).unwrap(), 3, &b).unwrap();
    floats.extend([d.l2.to_bits(), d.l1.to_bits()]);
    let z7 = AbelianGroup::cyclic(7).unwrap();
    for s in [Strategy::TripleDp, Strategy::OuterSum] {
        counts.push(count_tuples(&z7, &FunctionTable::zero(7), 3, s, &b).unwrap().count.to_string());
    }
    let z6 = AbelianGroup::cyclic(6).unwrap();
    counts.push(count_tuples(&z6, &random_feasible_f(&z6, 2, 9), 2, Strategy::Auto, &b).unwrap().count.to_string());
    let cube = LatinCube::build(&z7, &FunctionTable::identity(&z7), 2).unwrap();
    counts.push(count_transversals(&cube, &b).unwrap().count.to_string());
    (floats, counts)
}

#[test]
fn thread_count_does_not_change_results() {
    let one = with_threads(Some(1), snapshot);
    for t in [2, 3, 8] {
        assert_eq!(with_threads(Some(t), snapshot), one, "{t} threads");
    }
    assert_eq!(snapshot(), one);
}
