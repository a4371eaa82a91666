use serde::Serialize;

use super::CharacterVector;
use crate::combin::{ln_big, multinomial};

/// Entropy of the multiplicity pattern `(a₁,…,a_k)` of a character vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyReport {
    /// `n^{−1} ln multinomial(n; a₁,…,a_k)`.
    pub h: f64,
    /// `Σ (aᵢ/n) ln(n/aᵢ)`.
    pub h_shannon: f64,
    /// Number of distinct coordinates.
    pub k: usize,
}

pub fn entropy_report(chi: &CharacterVector) -> EntropyReport {
    entropy_of_multiplicities(&chi.multiplicities())
}

pub(crate) fn entropy_of_multiplicities(parts: &[usize]) -> EntropyReport {
    let n: usize = parts.iter().sum();
    if n == 0 {
        return EntropyReport {
            h: 0.0,
            h_shannon: 0.0,
            k: 0,
        };
    }
    let nf = n as f64;
    let h = ln_big(&multinomial(parts)) / nf;
    let h_shannon = parts
        .iter()
        .filter(|&&a| a > 0)
        .map(|&a| (a as f64 / nf) * (nf / a as f64).ln())
        .sum();
    EntropyReport {
        h,
        h_shannon,
        k: parts.iter().filter(|&&a| a > 0).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = entropy_of_multiplicities(&[4]);
        assert_eq!((r.h, r.h_shannon, r.k), (0.0, 0.0, 1));
        let r = entropy_of_multiplicities(&[2, 2]);
        assert!((r.h - 6f64.ln() / 4.0).abs() < 1e-15);
        assert!((r.h - 0.4479398673).abs() < 1e-9);
        let r = entropy_of_multiplicities(&[1, 1, 1, 1]);
        assert!((r.h - 0.7945134576).abs() < 1e-9);
        assert!((r.h_shannon - 4f64.ln()).abs() < 1e-15);
        assert_eq!(r.k, 4);
    }

    #[test]
    fn zero_parts_are_ignored() {
        assert_eq!(entropy_of_multiplicities(&[2, 0, 2]), entropy_of_multiplicities(&[2, 2]));
    }
}
