//! Finite abelian groups as products of cyclic factors, their duals, and the
//! character pairing.
//!
//! Elements and characters are both identified with residue vectors and
//! indexed `0..n` in lexicographic coordinate order (first factor most
//! significant). Index 0 is the identity and the trivial character. Every
//! kernel in the crate works on these indices.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orders above this keep no operation tables and compute on the fly.
const TABLE_LIMIT: usize = 256;

/// A group element as a residue vector `(c₁,…,c_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

/// A dual character as a residue vector `(d₁,…,d_r)`; it sends `x` to
/// `exp(2πi Σ d_j c_j / m_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualCharacter {
    pub coords: Vec<u64>,
}

#[derive(Clone)]
pub struct AbelianGroup {
    factors: Vec<u64>,
    order: usize,
    strides: Vec<usize>,
    exponent: u64,
    roots: Vec<Complex64>,
    add_table: Option<Vec<u16>>,
    phase_table: Option<Vec<u32>>,
    neg_table: Vec<usize>,
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AbelianGroup")
            .field("factors", &self.factors)
            .field("order", &self.order)
            .finish()
    }
}

impl PartialEq for AbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
    }
}

impl Eq for AbelianGroup {}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|m| format!("Z{m}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl AbelianGroup {
    /// Builds `Z/m₁ × ⋯ × Z/m_r`. The empty list gives the trivial group.
    pub fn new(factors: &[u64]) -> Result<Self> {
        if let Some(&bad) = factors.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidFactor(bad));
        }
        let order = factors
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(usize::try_from(m).ok()?))
            .ok_or_else(|| Error::InvalidArgument("group order overflows".into()))?;
        let mut strides = vec![1usize; factors.len()];
        for j in (0..factors.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * factors[j + 1] as usize;
        }
        let exponent = factors.iter().fold(1u64, |l, &m| l / gcd(l, m) * m);
        let roots = (0..exponent)
            .map(|e| Complex64::from_polar(1.0, TAU * e as f64 / exponent as f64))
            .collect();
        let mut g = AbelianGroup {
            factors: factors.to_vec(),
            order,
            strides,
            exponent,
            roots,
            add_table: None,
            phase_table: None,
            neg_table: Vec::new(),
        };
        g.neg_table = (0..order).map(|x| g.compute_neg(x)).collect();
        if order <= TABLE_LIMIT {
            let n = order;
            let mut add = vec![0u16; n * n];
            let mut phase = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    add[a * n + b] = g.compute_add(a, b) as u16;
                    phase[a * n + b] = g.compute_phase(a, b) as u32;
                }
            }
            g.add_table = Some(add);
            g.phase_table = Some(phase);
        }
        Ok(g)
    }

    /// The cyclic group `Z/n`; `n = 1` gives the trivial group.
    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 1 {
            Self::new(&[])
        } else {
            Self::new(&[n])
        }
    }

    /// The elementary abelian group `(Z/2)^k`.
    pub fn elementary_two(k: usize) -> Result<Self> {
        Self::new(&vec![2; k])
    }

    pub fn trivial() -> Self {
        Self::new(&[]).expect("trivial group")
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Least common multiple of the factors; character values are
    /// `exponent`-th roots of unity.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn coords(&self, idx: usize) -> Vec<u64> {
        self.strides
            .iter()
            .zip(&self.factors)
            .map(|(&s, &m)| ((idx / s) % m as usize) as u64)
            .collect()
    }

    pub fn index_of(&self, coords: &[u64]) -> Result<usize> {
        if coords.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                got: coords.len(),
            });
        }
        Ok(coords
            .iter()
            .zip(&self.factors)
            .zip(&self.strides)
            .map(|((&c, &m), &s)| (c % m) as usize * s)
            .sum())
    }

    pub fn element(&self, idx: usize) -> GroupElement {
        GroupElement {
            coords: self.coords(idx),
        }
    }

    pub fn character(&self, idx: usize) -> DualCharacter {
        DualCharacter {
            coords: self.coords(idx),
        }
    }

    pub fn element_index(&self, x: &GroupElement) -> Result<usize> {
        self.check_reduced(&x.coords)?;
        self.index_of(&x.coords)
    }

    pub fn character_index(&self, chi: &DualCharacter) -> Result<usize> {
        self.check_reduced(&chi.coords)?;
        self.index_of(&chi.coords)
    }

    fn check_reduced(&self, coords: &[u64]) -> Result<()> {
        if coords.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                got: coords.len(),
            });
        }
        if let Some((c, m)) = coords.iter().zip(&self.factors).find(|(c, m)| c >= m) {
            return Err(Error::InvalidArgument(format!(
                "coordinate {c} not reduced modulo {m}"
            )));
        }
        Ok(())
    }

    /// All elements in index order.
    pub fn elements(&self) -> Vec<GroupElement> {
        (0..self.order).map(|i| self.element(i)).collect()
    }

    /// All dual characters in index order.
    pub fn characters(&self) -> Vec<DualCharacter> {
        (0..self.order).map(|i| self.character(i)).collect()
    }

    fn compute_add(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for ((&s, &m), _) in self.strides.iter().zip(&self.factors).zip(0..) {
            let m = m as usize;
            out += ((a / s % m + b / s % m) % m) * s;
        }
        out
    }

    fn compute_neg(&self, a: usize) -> usize {
        let mut out = 0;
        for (&s, &m) in self.strides.iter().zip(&self.factors) {
            let m = m as usize;
            out += ((m - a / s % m) % m) * s;
        }
        out
    }

    fn compute_phase(&self, chi: usize, x: usize) -> u64 {
        let mut e = 0u64;
        for (&s, &m) in self.strides.iter().zip(&self.factors) {
            let d = (chi / s % m as usize) as u64;
            let c = (x / s % m as usize) as u64;
            e = (e + d * c % m * (self.exponent / m)) % self.exponent;
        }
        e
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        match &self.add_table {
            Some(t) => t[a * self.order + b] as usize,
            None => self.compute_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg_table[a]
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// `k·a` for a nonnegative integer `k`.
    pub fn scale(&self, k: u64, a: usize) -> usize {
        let mut out = 0;
        for (&s, &m) in self.strides.iter().zip(&self.factors) {
            let c = (a / s % m as usize) as u64;
            out += ((k % m) * c % m) as usize * s;
        }
        out
    }

    pub fn sum<I: IntoIterator<Item = usize>>(&self, it: I) -> usize {
        it.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    /// Exponent `e` with `χ(x) = exp(2πi e / exponent)`.
    #[inline]
    pub fn phase(&self, chi: usize, x: usize) -> u64 {
        match &self.phase_table {
            Some(t) => t[chi * self.order + x] as u64,
            None => self.compute_phase(chi, x),
        }
    }

    #[inline]
    pub fn root(&self, e: u64) -> Complex64 {
        self.roots[(e % self.exponent) as usize]
    }

    /// `χ(x)` on indices.
    #[inline]
    pub fn pair(&self, chi: usize, x: usize) -> Complex64 {
        self.root(self.phase(chi, x))
    }

    /// `χ(x)` on coordinate vectors.
    pub fn char_apply(&self, chi: &DualCharacter, x: &GroupElement) -> Result<Complex64> {
        let c = self.character_index(chi)?;
        let e = self.element_index(x)?;
        Ok(self.pair(c, e))
    }

    /// Index of `ΣG`, the sum of all elements.
    pub fn sigma_index(&self) -> usize {
        self.sum(0..self.order)
    }

    /// `ΣG`: the unique element of order 2 if there is one, else the identity.
    pub fn sigma_g(&self) -> GroupElement {
        self.element(self.sigma_index())
    }

    /// Whether `2x = 0`.
    pub fn is_two_torsion(&self, x: usize) -> bool {
        self.add(x, x) == 0
    }

    /// One representative of every isomorphism class of order `n`, as
    /// invariant factors `m₁ | m₂ | ⋯ | m_r`.
    pub fn all_of_order(n: u64) -> Vec<AbelianGroup> {
        fn rec(rest: u64, min: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if rest == 1 {
                out.push(acc.clone());
                return;
            }
            // next factor must be a multiple of `min` dividing `rest`, and the
            // remaining cofactor must itself be a multiple of it
            let mut f = min.max(2);
            while f <= rest {
                if rest % f == 0 && f % min == 0 && (rest / f == 1 || (rest / f) % f == 0) {
                    acc.push(f);
                    rec(rest / f, f, acc, out);
                    acc.pop();
                }
                f += 1;
            }
        }
        let mut out = Vec::new();
        rec(n, 1, &mut Vec::new(), &mut out);
        out.iter()
            .map(|f| AbelianGroup::new(f).expect("valid factors"))
            .collect()
    }

    /// Every isomorphism class of order `1..=nmax`.
    pub fn all_up_to(nmax: u64) -> Vec<AbelianGroup> {
        (1..=nmax).flat_map(Self::all_of_order).collect()
    }
}

impl FromStr for AbelianGroup {
    type Err = Error;

    /// Parses `"4x2"`, `"Z4xZ2"`, `"z/8"`, `"2x2x2"`. `"1"` is the trivial group.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "1" || t == "z1" || t == "trivial" {
            return Ok(AbelianGroup::trivial());
        }
        if t.is_empty() {
            return Err(Error::GroupSpec(s.to_string()));
        }
        let factors = t
            .split('x')
            .map(|part| {
                let p = part.trim();
                let p = p.strip_prefix('z').unwrap_or(p);
                let p = p.strip_prefix('/').unwrap_or(p);
                p.parse::<u64>().map_err(|_| Error::GroupSpec(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        AbelianGroup::new(&factors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn orders() {
        assert_eq!(AbelianGroup::new(&[4]).unwrap().order(), 4);
        assert_eq!(AbelianGroup::new(&[2, 2]).unwrap().order(), 4);
        assert_eq!(AbelianGroup::new(&[3]).unwrap().order(), 3);
        assert_eq!(AbelianGroup::new(&[]).unwrap().order(), 1);
        assert_eq!(AbelianGroup::new(&[1]), Err(Error::InvalidFactor(1)));
        assert_eq!(AbelianGroup::new(&[4, 0]), Err(Error::InvalidFactor(0)));
    }

    #[test]
    fn sigma_examples() {
        let z4 = AbelianGroup::new(&[4]).unwrap();
        assert_eq!(z4.sigma_g().coords, vec![2]);
        let v4 = AbelianGroup::new(&[2, 2]).unwrap();
        assert_eq!(v4.sigma_g().coords, vec![0, 0]);
        let z3 = AbelianGroup::new(&[3]).unwrap();
        assert_eq!(z3.sigma_g().coords, vec![0]);
        assert_eq!(AbelianGroup::trivial().sigma_index(), 0);
    }

    #[test]
    fn char_apply_examples() {
        let z4 = AbelianGroup::new(&[4]).unwrap();
        let one = DualCharacter { coords: vec![1] };
        let x = GroupElement { coords: vec![1] };
        assert!(close(z4.char_apply(&one, &x).unwrap(), Complex64::i()));
        let triv = DualCharacter { coords: vec![0] };
        assert!(close(z4.char_apply(&triv, &x).unwrap(), Complex64::new(1.0, 0.0)));

        let v4 = AbelianGroup::new(&[2, 2]).unwrap();
        let chi = DualCharacter { coords: vec![1, 0] };
        let y = GroupElement { coords: vec![1, 1] };
        assert!(close(v4.char_apply(&chi, &y).unwrap(), Complex64::new(-1.0, 0.0)));

        let bad = DualCharacter { coords: vec![1, 0] };
        assert!(matches!(
            z4.char_apply(&bad, &x),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn enumeration() {
        let z3 = AbelianGroup::new(&[3]).unwrap();
        let els: Vec<_> = z3.elements().into_iter().map(|e| e.coords[0]).collect();
        assert_eq!(els, vec![0, 1, 2]);
        let v4 = AbelianGroup::new(&[2, 2]).unwrap();
        assert_eq!(v4.elements().len(), 4);
        assert_eq!(v4.characters().len(), 4);
        assert_eq!(v4.element(1).coords, vec![0, 1]);
        assert_eq!(v4.element(2).coords, vec![1, 0]);
        let t = AbelianGroup::trivial();
        assert_eq!(t.elements().len(), 1);
        assert_eq!(t.characters().len(), 1);
        for g in AbelianGroup::all_up_to(12) {
            for i in 0..g.order() {
                assert_eq!(g.element_index(&g.element(i)).unwrap(), i);
            }
            assert!(g.element(0).coords.iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn parse_specs() {
        let g: AbelianGroup = "Z4xZ2".parse().unwrap();
        assert_eq!(g.factors(), &[4, 2]);
        let g: AbelianGroup = "4X2".parse().unwrap();
        assert_eq!(g.factors(), &[4, 2]);
        let g: AbelianGroup = "z/8".parse().unwrap();
        assert_eq!(g.factors(), &[8]);
        let g: AbelianGroup = "2x2x2".parse().unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!("1".parse::<AbelianGroup>().unwrap().order(), 1);
        assert!("4x1".parse::<AbelianGroup>().is_err());
        assert!("abc".parse::<AbelianGroup>().is_err());
        assert!("".parse::<AbelianGroup>().is_err());
        assert_eq!(g.to_string().parse::<AbelianGroup>().unwrap(), g);
    }

    #[test]
    fn isomorphism_classes() {
        let counts: Vec<usize> = (1..=16).map(|n| AbelianGroup::all_of_order(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]);
    }

    #[test]
    fn orthogonality() {
        for g in AbelianGroup::all_up_to(12) {
            let n = g.order();
            for chi in 0..n {
                let s: Complex64 = (0..n).map(|x| g.pair(chi, x)).sum();
                let want = if chi == 0 { n as f64 } else { 0.0 };
                assert!((s - Complex64::new(want, 0.0)).norm() <= 1e-9 * n as f64);
            }
        }
    }

    #[test]
    fn sigma_is_two_torsion_and_detects_cyclic_two_part() {
        for g in AbelianGroup::all_up_to(12) {
            let s = g.sigma_index();
            assert_eq!(g.add(s, s), 0);
            // ΣG ≠ 0 iff exactly one invariant factor is even
            let even = g.factors().iter().filter(|&&m| m % 2 == 0).count();
            assert_eq!(s != 0, even == 1, "{g}");
        }
    }

    #[test]
    fn large_group_without_tables() {
        let g = AbelianGroup::elementary_two(10).unwrap();
        assert_eq!(g.order(), 1024);
        assert_eq!(g.add(3, 5), 6);
        assert_eq!(g.neg(7), 7);
        assert!(close(g.pair(1, 1), Complex64::new(-1.0, 0.0)));
    }
}
