//! Seeded table generators. Every draw uses `ChaCha8Rng::seed_from_u64`, so
//! a seed reproduces the same table on every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FunctionTable;
use crate::group::AbelianGroup;

/// Uniform values with `f(n)` adjusted so that `Σf = d·ΣG`.
pub fn random_feasible_f(group: &AbelianGroup, d: usize, seed: u64) -> FunctionTable {
    let n = group.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let target = group.scale(d as u64, group.sigma_index());
    let head = group.sum(values[..n - 1].iter().copied());
    values[n - 1] = group.sub(target, head);
    FunctionTable::new(group, values).expect("values in range")
}

/// A uniformly shuffled bijection `{1,…,n} → G`.
pub fn random_bijection(group: &AbelianGroup, seed: u64) -> FunctionTable {
    let mut values: Vec<usize> = (0..group.order()).collect();
    values.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    FunctionTable::new(group, values).expect("values in range")
}
