//! Character sums built on the coefficient engine: sparse power sums,
//! sparseval, Parseval, full inversion sums, and the bound diagnostics.

use num_complex::Complex64;
use serde::Serialize;

use super::entropy::entropy_report;
use super::{CharacterVector, FourierEngine};
use crate::combin::{binomial, binomial_f64, combinations, ln_big, ln_factorial, multinomial};
use crate::error::{Error, Result};
use crate::par;

/// `|\hat{1_S}(χ)|` measured against the constant-free bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub m: usize,
    pub k: usize,
    pub magnitude: f64,
    /// `C(n,m)^{−1/2}·n!/nⁿ`.
    pub elementary_bound: f64,
    pub elementary_ratio: f64,
    /// The elementary bound is only claimed for `m ≤ n/2`.
    pub elementary_applicable: bool,
    /// `C(n+k−1,k−1)^{1/2}·multinomial^{−1/2}·n!/nⁿ`.
    pub sqrt_cancel_bound: f64,
    pub sqrt_cancel_ratio: f64,
    /// Multiplicity of the most repeated nonzero 2-torsion coordinate over `m`.
    pub torsion_repetition_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SparsevalReport {
    pub m: usize,
    pub sum: f64,
    /// `C(n,m)^{1/2}(n!/nⁿ)²`.
    pub reference: f64,
    pub ratio: f64,
}

/// Exact split of `Σ_χ \hat{1_S}(χ)^d χ(f)` over `Ĝⁿ`.
///
/// A character with a strict-majority coordinate is a shift of a unique
/// `m`-sparse character with `m < n/2`. Those with `m ≤ max_sparsity` form
/// the major part, the remaining majority characters the sparse tail, and
/// characters without a strict majority the high-entropy remainder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decomposition {
    pub max_sparsity: usize,
    pub total: Complex64,
    pub major: Complex64,
    /// `n·Σ_{m ≤ max_sparsity} Σ_{m-sparse} \hat{1_S}(χ)^d χ(f)`; equals
    /// `major` when `Σf = d·ΣG`.
    pub major_from_sparse: Complex64,
    pub tail: Complex64,
    pub remainder: Complex64,
}

fn sum_in_order(parts: Vec<Complex64>) -> Complex64 {
    parts.into_iter().fold(Complex64::new(0.0, 0.0), |a, b| a + b)
}

impl FourierEngine {
    /// `C(n,m)·(n−1)^m`, checked against the character budget.
    fn sparse_count(&self, m: usize) -> Result<u128> {
        let n = self.n();
        let count = binomial(n, m)
            .and_then(|b| b.checked_mul((n as u128 - 1).checked_pow(m as u32)?))
            .unwrap_or(u128::MAX);
        if count > self.budgets.characters {
            return Err(Error::budget("sparse characters", count, self.budgets.characters));
        }
        Ok(count)
    }

    /// Visits every `m`-sparse character, grouped by support, and reduces the
    /// per-support partial sums in support order.
    fn sparse_reduce<F>(&self, m: usize, term: F) -> Result<Complex64>
    where
        F: Fn(&[usize], &[u16], &[u16]) -> Result<Complex64> + Sync + Send,
    {
        let n = self.n();
        if m > n {
            return Ok(Complex64::new(0.0, 0.0));
        }
        self.sparse_count(m)?;
        let supports: Vec<Vec<usize>> = combinations(n, m).collect();
        let parts = par::map_indexed(supports.len(), |s| -> Result<Complex64> {
            let support = &supports[s];
            let mut vals = vec![1u16; m];
            let mut key = vec![0u16; m];
            let mut acc = Complex64::new(0.0, 0.0);
            loop {
                key.copy_from_slice(&vals);
                key.sort_unstable();
                acc += term(support, &vals, &key)?;
                // odometer over nonzero values 1..n
                let mut i = 0;
                while i < m {
                    vals[i] += 1;
                    if (vals[i] as usize) < n {
                        break;
                    }
                    vals[i] = 1;
                    i += 1;
                }
                if i == m {
                    break;
                }
            }
            Ok(acc)
        });
        Ok(sum_in_order(parts.into_iter().collect::<Result<Vec<_>>>()?))
    }

    /// `Σ_{m-sparse χ} \hat{1_S}(χ)^d χ(f)`.
    pub fn sparse_power_sum(&self, m: usize, d: u32, f: &[usize]) -> Result<Complex64> {
        if d < 2 {
            return Err(Error::InvalidArgument("power d must be at least 2".into()));
        }
        self.check_table(f)?;
        let g = &self.group;
        self.sparse_reduce(m, |support, vals, key| {
            let c = self.coeff_by_key(key)?;
            if c.norm_sqr() == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let e: u64 = support
                .iter()
                .zip(vals)
                .map(|(&pos, &v)| g.phase(v as usize, f[pos]))
                .sum();
            Ok(c.powu(d) * g.root(e))
        })
    }

    /// `Σ_{m-sparse χ} |\hat{1_S}(χ)|²` against `C(n,m)^{1/2}(n!/nⁿ)²`.
    pub fn sparseval_sum(&self, m: usize) -> Result<SparsevalReport> {
        let s = self.sparse_reduce(m, |_, _, key| {
            Ok(Complex64::new(self.coeff_by_key(key)?.norm_sqr(), 0.0))
        })?;
        let reference = binomial_f64(self.n(), m).sqrt() * self.density().powi(2);
        Ok(SparsevalReport {
            m,
            sum: s.re,
            reference,
            ratio: s.re / reference,
        })
    }

    fn check_table(&self, f: &[usize]) -> Result<()> {
        if f.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: f.len(),
            });
        }
        if f.iter().any(|&x| x >= self.n()) {
            return Err(Error::InvalidArgument("table value out of range".into()));
        }
        Ok(())
    }

    fn full_count(&self) -> Result<usize> {
        let n = self.n();
        if n > self.budgets.fourier_max_n {
            return Err(Error::budget(
                "full character sum n",
                n as u128,
                self.budgets.fourier_max_n as u128,
            ));
        }
        let count = (n as u128).pow(n as u32);
        if count > self.budgets.characters {
            return Err(Error::budget("characters", count, self.budgets.characters));
        }
        Ok(count as usize)
    }

    fn character_at(&self, mut t: usize) -> CharacterVector {
        let n = self.n();
        let mut coords = vec![0; n];
        for c in coords.iter_mut().rev() {
            *c = t % n;
            t /= n;
        }
        CharacterVector { coords }
    }

    /// Reduces `term(χ)` over all of `Ĝⁿ` in index order.
    pub fn full_reduce<F>(&self, term: F) -> Result<Complex64>
    where
        F: Fn(&CharacterVector) -> Result<Complex64> + Sync + Send,
    {
        let count = self.full_count()?;
        let chunks = par::chunks(count, 256);
        let parts = par::map_indexed(chunks.len(), |c| -> Result<Complex64> {
            let mut acc = Complex64::new(0.0, 0.0);
            for t in chunks[c].clone() {
                acc += term(&self.character_at(t))?;
            }
            Ok(acc)
        });
        Ok(sum_in_order(parts.into_iter().collect::<Result<Vec<_>>>()?))
    }

    /// `Σ_{χ∈Ĝⁿ} \hat{1_S}(χ)^d χ(f)`, i.e. `n^{−(d−1)n}` times the number of
    /// solutions of `π₁+⋯+π_d = f`.
    pub fn full_power_sum(&self, d: u32, f: &[usize]) -> Result<Complex64> {
        self.check_table(f)?;
        self.full_reduce(|chi| Ok(self.coeff_recursive(chi)?.powu(d) * chi.apply(&self.group, f)))
    }

    /// `Σ_{χ∈Ĝⁿ} |\hat{1_S}(χ)|²`, evaluated with the permanent route when
    /// `direct` is set and with the recursion otherwise.
    pub fn parseval_sum(&self, direct: bool) -> Result<f64> {
        let s = self.full_reduce(|chi| {
            let c = if direct {
                self.coeff_direct(chi)?
            } else {
                self.coeff_recursive(chi)?
            };
            Ok(Complex64::new(c.norm_sqr(), 0.0))
        })?;
        Ok(s.re)
    }

    pub fn decomposition(&self, d: u32, f: &[usize], max_sparsity: usize) -> Result<Decomposition> {
        self.check_table(f)?;
        let n = self.n();
        if max_sparsity > 0 && 2 * max_sparsity >= n {
            return Err(Error::InvalidArgument(format!(
                "major part needs max_sparsity < n/2 (n = {n})"
            )));
        }
        let g = &self.group;
        let classify = |chi: &CharacterVector| -> usize {
            // 0 major, 1 tail, 2 remainder
            let top = chi.canonical().iter().map(|&(_, a)| a).max().unwrap_or(0);
            if 2 * top > n {
                if n - top <= max_sparsity {
                    0
                } else {
                    1
                }
            } else {
                2
            }
        };
        let part = |which: usize| {
            self.full_reduce(|chi| {
                if classify(chi) != which {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                Ok(self.coeff_recursive(chi)?.powu(d) * chi.apply(g, f))
            })
        };
        let major = part(0)?;
        let tail = part(1)?;
        let remainder = part(2)?;
        let total = self.full_power_sum(d, f)?;
        let mut sparse = Complex64::new(0.0, 0.0);
        for m in 0..=max_sparsity {
            sparse += self.sparse_power_sum(m, d, f)?;
        }
        Ok(Decomposition {
            max_sparsity,
            total,
            major,
            major_from_sparse: sparse * n as f64,
            tail,
            remainder,
        })
    }

    /// Compares `|\hat{1_S}(χ)|` with the elementary and square-root
    /// cancellation bounds.
    pub fn bound_ratios(&self, chi: &CharacterVector) -> Result<BoundReport> {
        let n = self.n();
        let magnitude = self.coeff_recursive(chi)?.norm();
        let m = chi.sparsity();
        let parts = chi.multiplicities();
        let k = parts.len();
        let ln_density = self.density().ln();
        let elementary_bound = (ln_density - 0.5 * (ln_factorial(n) - ln_factorial(m) - ln_factorial(n - m))).exp();
        let ln_stars = ln_factorial(n + k - 1) - ln_factorial(k - 1) - ln_factorial(n);
        let sqrt_cancel_bound = (ln_density + 0.5 * ln_stars - 0.5 * ln_big(&multinomial(&parts))).exp();
        let torsion_max = chi
            .canonical()
            .iter()
            .filter(|&&(c, _)| c != 0 && self.group.is_two_torsion(c))
            .map(|&(_, a)| a)
            .max()
            .unwrap_or(0);
        Ok(BoundReport {
            m,
            k,
            magnitude,
            elementary_bound,
            elementary_ratio: magnitude / elementary_bound,
            elementary_applicable: 2 * m <= n,
            sqrt_cancel_bound,
            sqrt_cancel_ratio: magnitude / sqrt_cancel_bound,
            torsion_repetition_fraction: if m == 0 { 0.0 } else { torsion_max as f64 / m as f64 },
        })
    }

    pub fn entropy(&self, chi: &CharacterVector) -> super::EntropyReport {
        entropy_report(chi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::AbelianGroup;

    fn engine(n: u64) -> FourierEngine {
        FourierEngine::new(&AbelianGroup::cyclic(n).unwrap())
    }

    #[test]
    fn sparse_sum_small_cases() {
        let e = engine(5);
        let f = vec![0; 5];
        let s0 = e.sparse_power_sum(0, 3, &f).unwrap();
        assert!((s0.re - 0.0384f64.powi(3)).abs() < 1e-18);
        assert!((s0.re - 5.6623104e-5).abs() < 1e-12);
        assert_eq!(e.sparse_power_sum(1, 3, &f).unwrap().norm(), 0.0);
        assert_eq!(e.sparse_power_sum(1, 4, &[0, 1, 2, 3, 4]).unwrap().norm(), 0.0);
        let s2 = e.sparse_power_sum(2, 3, &f).unwrap();
        // brute-force enumeration of the 160 two-sparse characters
        assert!((s2.re + 3.538944e-05).abs() < 1e-15);
        assert!(s2.im.abs() < 1e-15);
        assert!(e.sparse_power_sum(2, 1, &f).is_err());
    }

    #[test]
    fn sparse_budget() {
        let g = AbelianGroup::cyclic(9).unwrap();
        let b = crate::Budgets {
            characters: 1000,
            ..Default::default()
        };
        let e = FourierEngine::with_budgets(&g, b);
        assert!(e.sparse_power_sum(3, 3, &[0; 9]).unwrap_err().is_budget());
    }

    #[test]
    fn sparseval_examples() {
        let e = engine(5);
        let r0 = e.sparseval_sum(0).unwrap();
        assert!((r0.sum - 0.0384f64.powi(2)).abs() < 1e-18);
        assert_eq!(e.sparseval_sum(1).unwrap().sum, 0.0);
        let r2 = e.sparseval_sum(2).unwrap();
        assert!((r2.sum - 0.0036864).abs() < 1e-15);
        assert!((r2.ratio - 0.7905694150420948).abs() < 1e-12);
    }

    #[test]
    fn bound_ratio_examples() {
        let g = AbelianGroup::cyclic(4).unwrap();
        let e = FourierEngine::new(&g);
        let triv = e.bound_ratios(&CharacterVector::trivial(4)).unwrap();
        assert!((triv.sqrt_cancel_ratio - 1.0).abs() < 1e-12);
        assert!((triv.elementary_ratio - 1.0).abs() < 1e-12);
        let chi = CharacterVector::new(&g, vec![2, 2, 0, 0]).unwrap();
        let r = e.bound_ratios(&chi).unwrap();
        assert!((r.elementary_bound - 0.038273277230987154).abs() < 1e-15);
        assert!((r.elementary_ratio - 0.8164965809277261).abs() < 1e-12);
        assert!(r.sqrt_cancel_ratio <= 1.0 + 1e-9);
        assert_eq!(r.torsion_repetition_fraction, 1.0);
        let one = CharacterVector::new(&g, vec![0, 1, 0, 0]).unwrap();
        let r = e.bound_ratios(&one).unwrap();
        assert_eq!((r.elementary_ratio, r.sqrt_cancel_ratio), (0.0, 0.0));
    }

    #[test]
    fn parseval_both_routes() {
        for n in 1..=4 {
            let e = engine(n);
            let want = e.density();
            assert!((e.parseval_sum(true).unwrap() - want).abs() < 1e-12);
            assert!((e.parseval_sum(false).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn decomposition_is_exact() {
        let e = engine(5);
        let f = vec![0; 5];
        for max in 0..=2 {
            let dec = e.decomposition(3, &f, max).unwrap();
            assert!((dec.major + dec.tail + dec.remainder - dec.total).norm() < 1e-15);
            assert!((dec.major - dec.major_from_sparse).norm() < 1e-15);
        }
        assert!(e.decomposition(3, &f, 3).is_err());
    }
}
