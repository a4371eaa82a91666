//! Exact counts of `π₁+⋯+π_d = f` over bijections `π_j : {1,…,n} → G`.

mod distance;
mod dp;
mod outer;
mod random;
mod series;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::fourier::FourierEngine;
use crate::group::AbelianGroup;

pub use distance::{
    injection_distribution_distance, injection_distribution_distance_with, DistanceMethod,
    DistanceReport,
};
pub use random::{random_bijection, random_feasible_f};
pub use series::{predict, singular_series, FormulaTag, Prediction, SingularSeries};

/// A function from positions `{1,…,L}` to `G`, as element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionTable {
    values: Vec<usize>,
}

/// On-disk form: `{"group":[m1,...],"values":[[c...],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionFile {
    pub group: Vec<u64>,
    pub values: Vec<Vec<u64>>,
}

impl FunctionTable {
    pub fn new(group: &AbelianGroup, values: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v >= group.order()) {
            return Err(Error::InvalidArgument(format!(
                "element index {bad} out of range for order {}",
                group.order()
            )));
        }
        Ok(FunctionTable { values })
    }

    pub fn zero(len: usize) -> Self {
        FunctionTable { values: vec![0; len] }
    }

    /// The enumeration bijection `i ↦ element i`.
    pub fn identity(group: &AbelianGroup) -> Self {
        FunctionTable {
            values: (0..group.order()).collect(),
        }
    }

    /// An injection table; rejects repeated values.
    pub fn injection(group: &AbelianGroup, values: Vec<usize>) -> Result<Self> {
        let t = Self::new(group, values)?;
        if !t.is_injective() {
            return Err(Error::InvalidArgument("injection table repeats a value".into()));
        }
        Ok(t)
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.values.len());
        self.values.iter().all(|v| seen.insert(*v))
    }

    pub fn is_bijective(&self, group: &AbelianGroup) -> bool {
        self.values.len() == group.order() && self.is_injective()
    }

    /// `|f^{−1}(x)|` for every element `x`.
    pub fn fiber_sizes(&self, group: &AbelianGroup) -> Vec<usize> {
        let mut fib = vec![0; group.order()];
        for &v in &self.values {
            fib[v] += 1;
        }
        fib
    }

    pub fn sum(&self, group: &AbelianGroup) -> usize {
        group.sum(self.values.iter().copied())
    }

    /// Pointwise `self − other`.
    pub fn sub(&self, group: &AbelianGroup, other: &[usize]) -> Self {
        FunctionTable {
            values: self
                .values
                .iter()
                .zip(other)
                .map(|(&a, &b)| group.sub(a, b))
                .collect(),
        }
    }

    pub fn from_file(file: &FunctionFile) -> Result<(AbelianGroup, Self)> {
        let group = AbelianGroup::new(&file.group)?;
        let values = file
            .values
            .iter()
            .map(|c| group.element_index(&crate::GroupElement { coords: c.clone() }))
            .collect::<Result<Vec<_>>>()?;
        Ok((group, FunctionTable { values }))
    }

    pub fn to_file(&self, group: &AbelianGroup) -> FunctionFile {
        FunctionFile {
            group: group.factors().to_vec(),
            values: self.values.iter().map(|&v| group.coords(v)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    PairDp,
    TripleDp,
    OuterSum,
    Fourier,
    Auto,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::PairDp => "pair-dp",
            Strategy::TripleDp => "triple-dp",
            Strategy::OuterSum => "outer-sum",
            Strategy::Fourier => "fourier",
            Strategy::Auto => "auto",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "pair-dp" => Strategy::PairDp,
            "triple-dp" => Strategy::TripleDp,
            "outer-sum" => Strategy::OuterSum,
            "fourier" => Strategy::Fourier,
            "auto" => Strategy::Auto,
            other => return Err(Error::InvalidArgument(format!("unknown strategy {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountResult {
    #[serde(serialize_with = "serialize_decimal")]
    pub count: BigUint,
    pub d: usize,
    pub strategy: Strategy,
    pub elapsed_ms: f64,
}

fn serialize_decimal<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

/// `Σᵢ f(i) = d·ΣG`, the necessary condition for any solution.
pub fn feasibility(group: &AbelianGroup, f: &FunctionTable, d: usize) -> bool {
    f.sum(group) == group.scale(d as u64, group.sigma_index())
}

fn check_domain(group: &AbelianGroup, f: &FunctionTable) -> Result<()> {
    if f.len() != group.order() {
        return Err(Error::DimensionMismatch {
            expected: group.order(),
            got: f.len(),
        });
    }
    Ok(())
}

/// Number of pairs of bijections with `π₂ + π₃ = g`.
pub fn count_pairs(group: &AbelianGroup, g: &FunctionTable, budgets: &Budgets) -> Result<CountResult> {
    check_domain(group, g)?;
    let start = Instant::now();
    let c = dp::count_injective_tuples(group, g.values(), 2, budgets)?;
    Ok(CountResult {
        count: BigUint::from(c),
        d: 2,
        strategy: Strategy::PairDp,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Strategy `auto` resolves to for this instance.
pub fn resolve_strategy(group: &AbelianGroup, d: usize, budgets: &Budgets) -> Strategy {
    match d {
        2 => Strategy::PairDp,
        3 if group.order() <= budgets.triple_dp_max_n => Strategy::TripleDp,
        _ => Strategy::OuterSum,
    }
}

/// Number of `d`-tuples of bijections with `π₁+⋯+π_d = f`.
pub fn count_tuples(
    group: &AbelianGroup,
    f: &FunctionTable,
    d: usize,
    strategy: Strategy,
    budgets: &Budgets,
) -> Result<CountResult> {
    check_domain(group, f)?;
    if d < 2 {
        return Err(Error::InvalidArgument("need at least two summands".into()));
    }
    let start = Instant::now();
    let (count, used) = match strategy {
        Strategy::Auto => {
            let s = resolve_strategy(group, d, budgets);
            match run(group, f, d, s, budgets) {
                Err(e) if e.is_budget() && s == Strategy::TripleDp => {
                    (run(group, f, d, Strategy::OuterSum, budgets)?, Strategy::OuterSum)
                }
                other => (other?, s),
            }
        }
        s => (run(group, f, d, s, budgets)?, s),
    };
    Ok(CountResult {
        count,
        d,
        strategy: used,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn run(group: &AbelianGroup, f: &FunctionTable, d: usize, s: Strategy, budgets: &Budgets) -> Result<BigUint> {
    let n = group.order();
    match s {
        Strategy::PairDp => {
            if d != 2 {
                return Err(Error::InvalidArgument("pair-dp counts exactly two summands".into()));
            }
            Ok(dp::count_injective_tuples(group, f.values(), 2, budgets)?.into())
        }
        Strategy::TripleDp => {
            if d != 3 {
                return Err(Error::InvalidArgument("triple-dp counts exactly three summands".into()));
            }
            if n > budgets.triple_dp_max_n {
                return Err(Error::budget(
                    "triple-dp n",
                    n as u128,
                    budgets.triple_dp_max_n as u128,
                ));
            }
            Ok(dp::count_injective_tuples(group, f.values(), 3, budgets)?.into())
        }
        Strategy::OuterSum => outer::count_outer_sum(group, f.values(), d, budgets),
        Strategy::Fourier => count_fourier(group, f, d, budgets),
        Strategy::Auto => unreachable!("resolved by caller"),
    }
}

/// `n^{(d−1)n} Σ_χ \hat{1_S}(χ)^d χ(f)`, rounded; fails if the rounding
/// residual is not below 1/2.
fn count_fourier(group: &AbelianGroup, f: &FunctionTable, d: usize, budgets: &Budgets) -> Result<BigUint> {
    let (value, _) = fourier_count_value(group, f, d, budgets)?;
    let rounded = value.re.round();
    let residual = (value - Complex64::new(rounded, 0.0)).norm();
    if residual >= 0.5 || rounded < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "fourier sum {value} does not round to a count"
        )));
    }
    Ok(BigUint::from(rounded as u128))
}

/// The unrounded Fourier-side count and its rounding residual.
pub fn fourier_count_value(
    group: &AbelianGroup,
    f: &FunctionTable,
    d: usize,
    budgets: &Budgets,
) -> Result<(Complex64, f64)> {
    check_domain(group, f)?;
    let n = group.order();
    let engine = FourierEngine::with_budgets(group, budgets.clone());
    let s = engine.full_power_sum(d as u32, f.values())?;
    let scale = (n as f64).powi(((d - 1) * n) as i32);
    let value = s * scale;
    let residual = (value - Complex64::new(value.re.round(), 0.0)).norm();
    Ok((value, residual))
}
