//! Fourier coefficients of the bijection indicator `1_S` on `Ĝⁿ`.
//!
//! With `G` carrying the uniform measure,
//! `\hat{1_S}(χ) = n^{−n} Σ' χ₁(x₁)⋯χ_n(x_n)` over distinct `x₁,…,x_n`.
//! The value is real because `S = −S`, but it is carried as a complex number
//! so both evaluation routes share one type.
//!
//! Two independent routes are provided: [`FourierEngine::coeff_direct`]
//! evaluates the permanent of `M[i][x] = χᵢ(x)`, and
//! [`FourierEngine::coeff_recursive`] folds the pivot coordinate into each of
//! the others, memoized on the multiset of nonzero coordinates.

mod entropy;
mod killing;
mod permanent;
mod sums;

use std::sync::Arc;

use dashmap::DashMap;
use num_complex::Complex64;

use crate::budget::Budgets;
use crate::combin::bijection_density;
use crate::error::{Error, Result};
use crate::group::AbelianGroup;

pub use entropy::{entropy_report, EntropyReport};
pub use killing::{classify_killing, KillingClassification, MAX_KILLING_M};
pub use permanent::ryser_permanent;
pub use sums::{BoundReport, Decomposition, SparsevalReport};

/// `χ = (χ₁,…,χ_n) ∈ Ĝⁿ`, stored as dual-character indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharacterVector {
    coords: Vec<usize>,
}

impl CharacterVector {
    /// Checks that there is one coordinate per element of `group` and that
    /// every index names a character of `group`.
    pub fn new(group: &AbelianGroup, coords: Vec<usize>) -> Result<Self> {
        let n = group.order();
        if coords.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: coords.len(),
            });
        }
        if let Some(&bad) = coords.iter().find(|&&c| c >= n) {
            return Err(Error::InvalidArgument(format!(
                "character index {bad} out of range for order {n}"
            )));
        }
        Ok(CharacterVector { coords })
    }

    /// Unchecked constructor for coordinates already known to be in range.
    pub(crate) fn from_raw(coords: Vec<usize>) -> Self {
        CharacterVector { coords }
    }

    pub fn trivial(n: usize) -> Self {
        CharacterVector { coords: vec![0; n] }
    }

    /// `(χ_1,…,χ_m, 0^{n−m})` from the nonzero part.
    pub fn padded(group: &AbelianGroup, nonzero: &[usize]) -> Result<Self> {
        let mut coords = nonzero.to_vec();
        coords.resize(group.order(), 0);
        Self::new(group, coords)
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Number of nontrivial coordinates.
    pub fn sparsity(&self) -> usize {
        self.coords.iter().filter(|&&c| c != 0).count()
    }

    /// `(character index, multiplicity)` sorted by index; Σ multiplicities = n.
    pub fn canonical(&self) -> Vec<(usize, usize)> {
        let mut sorted = self.coords.clone();
        sorted.sort_unstable();
        let mut out: Vec<(usize, usize)> = Vec::new();
        for c in sorted {
            match out.last_mut() {
                Some((v, k)) if *v == c => *k += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.canonical().into_iter().map(|(_, a)| a).collect()
    }

    /// Sorted nonzero coordinates: the memo key of the recursion.
    pub fn nonzero_key(&self) -> Vec<u16> {
        let mut k: Vec<u16> = self
            .coords
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| c as u16)
            .collect();
        k.sort_unstable();
        k
    }

    /// `χ'ᵢ = χᵢ + ψ` for every coordinate.
    pub fn shifted(&self, group: &AbelianGroup, psi: usize) -> Self {
        CharacterVector {
            coords: self.coords.iter().map(|&c| group.add(c, psi)).collect(),
        }
    }

    pub fn negated(&self, group: &AbelianGroup) -> Self {
        CharacterVector {
            coords: self.coords.iter().map(|&c| group.neg(c)).collect(),
        }
    }

    /// `χ(f) = Π χᵢ(f(i))` for a table of element indices.
    pub fn apply(&self, group: &AbelianGroup, f: &[usize]) -> Complex64 {
        let e = self
            .coords
            .iter()
            .zip(f)
            .map(|(&c, &x)| group.phase(c, x))
            .sum::<u64>();
        group.root(e)
    }
}

/// `shift_character`: adds `ψ` to every coordinate.
pub fn shift_character(group: &AbelianGroup, chi: &CharacterVector, psi: usize) -> CharacterVector {
    chi.shifted(group, psi)
}

/// Evaluates `\hat{1_S}` for one group, caching recursion results.
///
/// The memo is a concurrent map; racing inserts write identical values, so
/// the engine can be shared across worker threads.
#[derive(Debug, Clone)]
pub struct FourierEngine {
    group: AbelianGroup,
    budgets: Budgets,
    memo: Arc<DashMap<Box<[u16]>, Complex64>>,
    base: f64,
    sign: f64,
}

impl FourierEngine {
    pub fn new(group: &AbelianGroup) -> Self {
        Self::with_budgets(group, Budgets::default())
    }

    pub fn with_budgets(group: &AbelianGroup, budgets: Budgets) -> Self {
        FourierEngine {
            group: group.clone(),
            budgets,
            memo: Arc::new(DashMap::new()),
            base: bijection_density(group.order()),
            sign: -1.0,
        }
    }

    /// Flips the sign of the recursion step. Only useful for checking that
    /// the verification suite catches a broken recursion.
    #[doc(hidden)]
    pub fn with_faulty_recursion_sign(mut self) -> Self {
        self.sign = -self.sign;
        self.memo = Arc::new(DashMap::new());
        self
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn budgets(&self) -> &Budgets {
        &self.budgets
    }

    pub fn n(&self) -> usize {
        self.group.order()
    }

    /// `n!/nⁿ`, the coefficient at the trivial character.
    pub fn density(&self) -> f64 {
        self.base
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn check_len(&self, chi: &CharacterVector) -> Result<()> {
        if chi.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: chi.len(),
            });
        }
        Ok(())
    }

    /// `n^{−n}·perm(M)` with `M[i][x] = χᵢ(x)`.
    pub fn coeff_direct(&self, chi: &CharacterVector) -> Result<Complex64> {
        self.check_len(chi)?;
        let n = self.n();
        if n > self.budgets.direct_max_n {
            return Err(Error::budget(
                "direct coefficient n",
                n as u128,
                self.budgets.direct_max_n as u128,
            ));
        }
        let mut m = Vec::with_capacity(n * n);
        for &c in chi.coords() {
            m.extend((0..n).map(|x| self.group.pair(c, x)));
        }
        let scale = (n as f64).powi(n as i32);
        Ok(ryser_permanent(&m, n) / scale)
    }

    pub fn coeff_recursive(&self, chi: &CharacterVector) -> Result<Complex64> {
        self.check_len(chi)?;
        self.coeff_by_key(&chi.nonzero_key())
    }

    /// Coefficient of `(χ₁,…,χ_m, 0^{n−m})` from its sorted nonzero
    /// coordinates.
    pub fn coeff_by_key(&self, key: &[u16]) -> Result<Complex64> {
        debug_assert!(key.windows(2).all(|w| w[0] <= w[1]));
        debug_assert!(key.iter().all(|&c| c != 0));
        let m = key.len();
        if m > self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: m,
            });
        }
        match m {
            0 => return Ok(Complex64::new(self.base, 0.0)),
            1 => return Ok(Complex64::new(0.0, 0.0)),
            _ => {}
        }
        if let Some(v) = self.memo.get(key) {
            return Ok(*v);
        }
        let value = self.recursion_step(key, m - 1)?;
        if self.memo.len() >= self.budgets.memo_entries {
            return Err(Error::budget(
                "recursion memo entries",
                self.memo.len() as u128 + 1,
                self.budgets.memo_entries as u128,
            ));
        }
        self.memo.insert(key.into(), value);
        Ok(value)
    }

    /// One application of the recursion with `key[pivot]` playing the role of
    /// the eliminated coordinate; the children use the default pivot.
    pub fn coeff_with_pivot(&self, key: &[u16], pivot: usize) -> Result<Complex64> {
        let mut sorted = key.to_vec();
        let pv = *key.get(pivot).ok_or_else(|| {
            Error::InvalidArgument(format!("pivot {pivot} out of range for {} coordinates", key.len()))
        })?;
        sorted.sort_unstable();
        if sorted.len() < 2 {
            return self.coeff_by_key(&sorted);
        }
        let pos = sorted.iter().position(|&c| c == pv).unwrap();
        self.recursion_step(&sorted, pos)
    }

    /// `−(n−m+1)^{−1} Σ_{i≠p} \hat{1_S}(χ^i)` where `χ^i` replaces `χᵢ` by
    /// `χᵢ + χ_p` and drops `χ_p`. Equal coordinates give equal children, so
    /// each distinct value is evaluated once and weighted by its count.
    fn recursion_step(&self, key: &[u16], pivot: usize) -> Result<Complex64> {
        let m = key.len();
        let n = self.n();
        let p = key[pivot] as usize;
        let rest: Vec<u16> = key
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pivot)
            .map(|(_, &c)| c)
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut child = Vec::with_capacity(m);
        let mut i = 0;
        while i < rest.len() {
            let v = rest[i];
            let mut j = i;
            while j < rest.len() && rest[j] == v {
                j += 1;
            }
            let w = self.group.add(v as usize, p) as u16;
            child.clear();
            child.extend_from_slice(&rest[..i]);
            child.extend_from_slice(&rest[i + 1..]);
            if w != 0 {
                let at = child.partition_point(|&c| c < w);
                child.insert(at, w);
            }
            acc += self.coeff_by_key(&child)? * (j - i) as f64;
            i = j;
        }
        Ok(acc * (self.sign / (n - m + 1) as f64))
    }
}
