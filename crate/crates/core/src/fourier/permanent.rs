//! Ryser's inclusion–exclusion permanent with Gray-code column updates.

use num_complex::Complex64;

/// Permanent of the row-major `n×n` matrix `a`.
///
/// `perm(A) = (−1)ⁿ Σ_{T ⊆ cols} (−1)^{|T|} Πᵢ Σ_{j∈T} a[i][j]`, visiting the
/// subsets in Gray-code order so each step touches one column.
pub fn ryser_permanent(a: &[Complex64], n: usize) -> Complex64 {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    assert!(n < 64);
    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    let mut gray: u64 = 0;
    for k in 1u64..(1u64 << n) {
        let j = k.trailing_zeros() as usize;
        gray ^= 1 << j;
        if gray & (1 << j) != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += a[i * n + j];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= a[i * n + j];
            }
        }
        let prod: Complex64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn small_permanents() {
        assert_eq!(ryser_permanent(&[], 0), c(1.0));
        assert_eq!(ryser_permanent(&[c(7.0)], 1), c(7.0));
        // [[1,2],[3,4]] -> 1*4 + 2*3
        assert!((ryser_permanent(&[c(1.0), c(2.0), c(3.0), c(4.0)], 2) - c(10.0)).norm() < 1e-12);
        // all-ones 5x5 -> 5!
        let ones = vec![c(1.0); 25];
        assert!((ryser_permanent(&ones, 5) - c(120.0)).norm() < 1e-9);
    }

    #[test]
    fn matches_expansion_on_3x3() {
        let a: Vec<Complex64> = (0..9).map(|k| Complex64::new(k as f64 * 0.5 - 1.0, (k % 4) as f64)).collect();
        let idx = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let brute: Complex64 = idx
            .iter()
            .map(|p| a[p[0]] * a[3 + p[1]] * a[6 + p[2]])
            .sum();
        assert!((ryser_permanent(&a, 3) - brute).norm() < 1e-10);
    }
}
