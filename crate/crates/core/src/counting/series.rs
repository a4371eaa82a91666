use serde::Serialize;

use super::{feasibility, FunctionTable};
use crate::combin::ln_factorial;
use crate::error::{Error, Result};
use crate::group::AbelianGroup;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularSeries {
    /// `exp(−(2n²)^{−1} Σ_x |f^{−1}(x)|²)`.
    pub value: f64,
    /// `H₂(f) = −ln Σ_x P(f = x)²`.
    pub collision_entropy: f64,
    /// `exp(−½e^{−H₂(f)})`, the same quantity by the entropy route.
    pub value_from_entropy: f64,
}

pub fn singular_series(group: &AbelianGroup, f: &FunctionTable) -> SingularSeries {
    let n = f.len().max(1) as f64;
    let fibers = f.fiber_sizes(group);
    let squares: f64 = fibers.iter().map(|&k| (k * k) as f64).sum();
    let collision: f64 = fibers.iter().map(|&k| (k as f64 / n).powi(2)).sum();
    let h2 = -collision.ln();
    SingularSeries {
        value: (-squares / (2.0 * n * n)).exp(),
        collision_entropy: h2,
        value_from_entropy: (-0.5 * (-h2).exp()).exp(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaTag {
    /// `e^{−1/2}·n!²/n^{n−1}` for two summands and bijective `f`.
    TwoSummandsBijective,
    /// `𝔖(f)·n!³/n^{n−1}`.
    ThreeSummands,
    /// `n!^d/n^{n−1}` for `d ≥ 4`.
    ManySummands,
    /// `Σf ≠ d·ΣG`: no solutions.
    Infeasible,
}

/// Asymptotic main term for the number of solutions; the `o(1)` and
/// `O(n^{3−d})` corrections are not included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction {
    pub main_value: f64,
    pub singular_series: f64,
    pub feasible: bool,
    pub formula_tag: FormulaTag,
}

pub fn predict(group: &AbelianGroup, f: &FunctionTable, d: usize) -> Result<Prediction> {
    if d < 2 {
        return Err(Error::InvalidArgument("need at least two summands".into()));
    }
    if f.len() != group.order() {
        return Err(Error::DimensionMismatch {
            expected: group.order(),
            got: f.len(),
        });
    }
    if d == 2 && !f.is_bijective(group) {
        return Err(Error::NoPrediction("two summands need a bijective target"));
    }
    let n = group.order();
    let series = singular_series(group, f).value;
    let feasible = feasibility(group, f, d);
    if !feasible {
        return Ok(Prediction {
            main_value: 0.0,
            singular_series: series,
            feasible,
            formula_tag: FormulaTag::Infeasible,
        });
    }
    let ln_base = d as f64 * ln_factorial(n) - (n as f64 - 1.0) * (n as f64).ln();
    let (factor, tag) = match d {
        2 => ((-0.5f64).exp(), FormulaTag::TwoSummandsBijective),
        3 => (series, FormulaTag::ThreeSummands),
        _ => (1.0, FormulaTag::ManySummands),
    };
    Ok(Prediction {
        main_value: factor * ln_base.exp(),
        singular_series: series,
        feasible,
        formula_tag: tag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_examples() {
        let g = AbelianGroup::cyclic(4).unwrap();
        let c = singular_series(&g, &FunctionTable::zero(4));
        assert!((c.value - (-0.5f64).exp()).abs() < 1e-15);
        assert!((c.value - 0.606531).abs() < 1e-6);
        let b = singular_series(&g, &FunctionTable::identity(&g));
        assert!((b.value - (-0.125f64).exp()).abs() < 1e-15);
        let f = FunctionTable::new(&g, vec![0, 0, 1, 2]).unwrap();
        let s = singular_series(&g, &f);
        assert!((s.value - 0.8290291181804004).abs() < 1e-12);
        for r in [c, b, s] {
            assert!((r.value - r.value_from_entropy).abs() < 1e-12);
        }
    }

    #[test]
    fn prediction_examples() {
        let z7 = AbelianGroup::cyclic(7).unwrap();
        let p = predict(&z7, &FunctionTable::zero(7), 3).unwrap();
        assert!((p.main_value / 660018.529668866 - 1.0).abs() < 1e-12);
        assert_eq!(p.formula_tag, FormulaTag::ThreeSummands);

        let z2 = AbelianGroup::cyclic(2).unwrap();
        let p = predict(&z2, &FunctionTable::zero(2), 3).unwrap();
        assert_eq!((p.main_value, p.feasible), (0.0, false));

        let z5 = AbelianGroup::cyclic(5).unwrap();
        let p = predict(&z5, &FunctionTable::identity(&z5), 2).unwrap();
        assert!((p.main_value / 13.974466399779075 - 1.0).abs() < 1e-12);

        assert!(matches!(
            predict(&z5, &FunctionTable::zero(5), 2),
            Err(Error::NoPrediction(_))
        ));
        let p = predict(&z5, &FunctionTable::zero(5), 4).unwrap();
        assert!((p.main_value - 120f64.powi(4) / 625.0).abs() < 1e-6);
    }
}
