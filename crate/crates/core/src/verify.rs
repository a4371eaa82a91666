//! Invariant batteries run by the `verify` command.
//!
//! Every check enumerates its cases exhaustively (or from fixed seeds), tallies
//! failures and keeps the first failing case as a witness. A check that hits
//! a budget or argument error is reported as failed with the error text.

use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::Budgets;
use crate::combin::{bijection_density, combinations, next_permutation};
use crate::counting::{
    count_pairs, count_tuples, feasibility, injection_distribution_distance, predict, random_bijection,
    random_feasible_f, singular_series, FunctionTable, Strategy,
};
use crate::error::{Error, Result};
use crate::fourier::{classify_killing, entropy_report, CharacterVector, FourierEngine};
use crate::group::AbelianGroup;
use crate::latin::{count_transversals, lemma_crosscheck, LatinCube};
use crate::par;
use crate::xor::tv_grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyLevel {
    Quick,
    Full,
}

impl FromStr for VerifyLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(VerifyLevel::Quick),
            "full" => Ok(VerifyLevel::Full),
            other => Err(Error::InvalidArgument(format!("unknown verify level '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub budgets: Budgets,
    /// Run the Fourier checks against an engine whose recursion has the
    /// wrong sign.
    pub faulty_recursion: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub statement: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub passed: bool,
    /// First failing case, or the error that stopped the check.
    pub detail: Option<String>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub level: VerifyLevel,
    pub checks: Vec<IdentityCheck>,
    pub passed: bool,
    pub elapsed_ms: f64,
}

impl VerifyReport {
    pub fn failed(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Default)]
struct Tally {
    cases: u64,
    failures: u64,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(witness());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failures += other.failures;
        if self.first.is_none() {
            self.first = other.first;
        }
    }
}

/// Runs `case(i)` for `i in 0..total` in parallel; `Ok(None)` is a pass.
fn par_cases<F>(total: usize, case: F) -> Result<Tally>
where
    F: Fn(usize) -> Result<Option<String>> + Sync + Send,
{
    let ranges = par::chunks(total, 256);
    let parts = par::map_indexed(ranges.len(), |c| -> Result<Tally> {
        let mut t = Tally::default();
        for i in ranges[c].clone() {
            let w = case(i)?;
            let ok = w.is_none();
            t.record(ok, || w.unwrap_or_default());
        }
        Ok(t)
    });
    let mut total_tally = Tally::default();
    for p in parts {
        total_tally.merge(p?);
    }
    Ok(total_tally)
}

struct Runner {
    checks: Vec<IdentityCheck>,
}

impl Runner {
    fn run(&mut self, name: &'static str, statement: &'static str, body: impl FnOnce() -> Result<Tally>) {
        let start = Instant::now();
        let (cases, failures, detail) = match body() {
            Ok(t) => (t.cases, t.failures, t.first),
            Err(e) => (0, 1, Some(format!("error: {e}"))),
        };
        self.checks.push(IdentityCheck {
            name,
            statement,
            cases,
            failures,
            passed: failures == 0 && cases > 0,
            detail,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
}

fn engine(g: &AbelianGroup, opts: &VerifyOptions) -> FourierEngine {
    let e = FourierEngine::with_budgets(g, opts.budgets.clone());
    if opts.faulty_recursion {
        e.with_faulty_recursion_sign()
    } else {
        e
    }
}

fn groups_between(lo: u64, hi: u64) -> Vec<AbelianGroup> {
    AbelianGroup::all_up_to(hi).into_iter().filter(|g| g.order() as u64 >= lo).collect()
}

/// The `idx`-th element of `Ĝⁿ`, first coordinate most significant.
fn character_at(n: usize, mut idx: usize) -> CharacterVector {
    let mut coords = vec![0; n];
    for c in coords.iter_mut().rev() {
        *c = idx % n;
        idx /= n;
    }
    CharacterVector::from_raw(coords)
}

/// Every character with exactly `m` nonzero coordinates.
fn sparse_characters(n: usize, m: usize) -> Vec<CharacterVector> {
    let mut out = Vec::new();
    for support in combinations(n, m) {
        let mut vals = vec![1usize; m];
        loop {
            let mut coords = vec![0; n];
            for (&p, &v) in support.iter().zip(&vals) {
                coords[p] = v;
            }
            out.push(CharacterVector::from_raw(coords));
            let mut i = 0;
            while i < m {
                vals[i] += 1;
                if vals[i] < n {
                    break;
                }
                vals[i] = 1;
                i += 1;
            }
            if i == m {
                break;
            }
        }
    }
    out
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

fn all_functions(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n.pow(n as u32)).map(move |i| character_at(n, i).coords().to_vec())
}

fn all_bijections(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

/// Limits for the Fourier battery.
#[derive(Debug, Clone, Copy)]
struct FourierPlan {
    /// Exhaustive checks over all of `Ĝⁿ`.
    all_n: usize,
    /// Parseval over `Ĝⁿ`.
    parseval_n: usize,
    /// `m`-sparse checks with `m ≤ 4`.
    sparse_n: usize,
    /// Elementary bound over `m`-sparse characters.
    bound_sparse_n: usize,
    torsion_n6: bool,
    entropy_samples: usize,
    entropy_n: usize,
    killing_n: usize,
    major_arc: bool,
}

fn fourier_checks(r: &mut Runner, p: FourierPlan, opts: &VerifyOptions) {
    r.run(
        "parseval",
        "sum over all characters of |coefficient|^2 equals n!/n^n",
        || {
            let mut t = Tally::default();
            for g in groups_between(1, p.parseval_n as u64) {
                let e = engine(&g, opts);
                let s = e.parseval_sum(true)?;
                t.record((s - e.density()).abs() <= 1e-9 * e.density(), || format!("{g}: {s}"));
            }
            Ok(t)
        },
    );

    r.run(
        "recursion-vs-direct",
        "the memoized recursion matches the permanent for every character, and for m-sparse ones with m <= 4",
        || {
            let mut t = Tally::default();
            for g in groups_between(1, p.sparse_n as u64) {
                let n = g.order();
                let e = engine(&g, opts);
                let tol = 1e-9 * e.density();
                let cmp = |chi: &CharacterVector| -> Result<Option<String>> {
                    let a = e.coeff_direct(chi)?;
                    let b = e.coeff_recursive(chi)?;
                    Ok((!close(a, b, tol)).then(|| format!("{g} chi={:?}: direct {a} recursive {b}", chi.coords())))
                };
                if n <= p.all_n {
                    t.merge(par_cases(n.pow(n as u32), |i| cmp(&character_at(n, i)))?);
                } else {
                    for m in 0..=4.min(n) {
                        let chars = sparse_characters(n, m);
                        t.merge(par_cases(chars.len(), |i| cmp(&chars[i]))?);
                    }
                }
            }
            Ok(t)
        },
    );

    r.run(
        "symmetries",
        "coefficients are invariant under coordinate permutations and pivot choice, conjugate under negation, and pick up psi(sum G) under shifts",
        || {
            let mut t = Tally::default();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for g in groups_between(2, p.all_n as u64) {
                let n = g.order();
                let e = engine(&g, opts);
                let tol = 1e-9 * e.density();
                for _ in 0..64 {
                    let coords: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                    let chi = CharacterVector::new(&g, coords.clone())?;
                    let base = e.coeff_direct(&chi)?;
                    let rec = e.coeff_recursive(&chi)?;
                    let mut perm = coords.clone();
                    let shuffle_seed: u64 = rng.gen();
                    rand::seq::SliceRandom::shuffle(&mut perm[..], &mut ChaCha8Rng::seed_from_u64(shuffle_seed));
                    let permuted = e.coeff_direct(&CharacterVector::new(&g, perm)?)?;
                    t.record(close(base, permuted, 1e-12), || format!("{g} permutation of {coords:?}"));
                    let key = chi.nonzero_key();
                    for pivot in 0..key.len() {
                        let v = e.coeff_with_pivot(&key, pivot)?;
                        t.record(close(v, rec, tol), || format!("{g} pivot {pivot} of {coords:?}"));
                    }
                    let neg = e.coeff_direct(&chi.negated(&g))?;
                    t.record(close(neg, base.conj(), 1e-12), || format!("{g} conjugation of {coords:?}"));
                    let psi = rng.gen_range(0..n);
                    let phase = g.pair(psi, g.sigma_index());
                    let shifted = chi.shifted(&g, psi);
                    let sd = e.coeff_direct(&shifted)?;
                    let sr = e.coeff_recursive(&shifted)?;
                    t.record(close(sd, base * phase, tol) && close(sr, rec * phase, tol), || {
                        format!("{g} shift of {coords:?} by {psi}")
                    });
                }
            }
            Ok(t)
        },
    );

    r.run(
        "elementary-bound",
        "|coefficient| <= C(n,m)^(-1/2) n!/n^n whenever m <= n/2",
        || {
            let mut t = Tally::default();
            for g in groups_between(1, p.bound_sparse_n as u64) {
                let n = g.order();
                let e = engine(&g, opts);
                let mmax = if n <= p.all_n { n / 2 } else { 4.min(n / 2) };
                for m in 0..=mmax {
                    let chars = sparse_characters(n, m);
                    t.merge(par_cases(chars.len(), |i| {
                        let b = e.bound_ratios(&chars[i])?;
                        Ok((b.magnitude > b.elementary_bound + 1e-12)
                            .then(|| format!("{g} chi={:?}: {} > {}", chars[i].coords(), b.magnitude, b.elementary_bound)))
                    })?);
                }
            }
            Ok(t)
        },
    );

    r.run(
        "square-root-cancellation",
        "|coefficient| <= C(n+k-1,k-1)^(1/2) multinomial^(-1/2) n!/n^n for every character",
        || {
            let mut t = Tally::default();
            for g in groups_between(1, p.parseval_n as u64) {
                let n = g.order();
                let e = engine(&g, opts);
                t.merge(par_cases(n.pow(n as u32), |i| {
                    let chi = character_at(n, i);
                    let b = e.bound_ratios(&chi)?;
                    Ok((b.sqrt_cancel_ratio > 1.0 + 1e-9).then(|| format!("{g} chi={:?}", chi.coords())))
                })?);
            }
            Ok(t)
        },
    );

    r.run(
        "two-torsion-equality",
        "for chi = (x^m, 0^(n-m)) with 2x = 0, |coefficient| = (m-1)(m-3)...1 / (n-m+1)(n-m+3)...(n-1) * n!/n^n",
        || {
            let mut groups = vec![AbelianGroup::cyclic(4)?, AbelianGroup::new(&[2, 2])?];
            if p.torsion_n6 {
                groups.push(AbelianGroup::cyclic(6)?);
            }
            let mut t = Tally::default();
            for g in groups {
                let n = g.order();
                let e = engine(&g, opts);
                for x in (1..n).filter(|&x| g.is_two_torsion(x)) {
                    for m in (2..=n).step_by(2) {
                        let mut coords = vec![0; n];
                        coords[..m].iter_mut().for_each(|c| *c = x);
                        let chi = CharacterVector::new(&g, coords)?;
                        let want = torsion_closed_form(n, m);
                        for v in [e.coeff_direct(&chi)?, e.coeff_recursive(&chi)?] {
                            t.record((v.norm() - want).abs() <= 1e-12, || {
                                format!("{g} x={x} m={m}: {} vs {want}", v.norm())
                            });
                        }
                    }
                }
            }
            Ok(t)
        },
    );

    r.run(
        "entropy-sandwich",
        "H_shannon - k ln(n+1)/n <= H <= H_shannon",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let mut t = Tally::default();
            for _ in 0..p.entropy_samples {
                let n = rng.gen_range(1..=p.entropy_n);
                let coords: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
                let rep = entropy_report(&CharacterVector::from_raw(coords.clone()));
                let lower = rep.h_shannon - rep.k as f64 * ((n + 1) as f64).ln() / n as f64;
                t.record(lower <= rep.h + 1e-12 && rep.h <= rep.h_shannon + 1e-12, || format!("{coords:?}"));
            }
            Ok(t)
        },
    );

    r.run(
        "killing-classifier",
        "no odd m lies in the major set, and every major-set tuple splits into m/2 zero-sum pairs",
        || {
            let mut t = Tally::default();
            for g in groups_between(2, p.killing_n as u64) {
                let n = g.order();
                for m in 1..=4usize {
                    let total = (n - 1).pow(m as u32);
                    for i in 0..total {
                        let mut x = i;
                        let tuple: Vec<usize> = (0..m)
                            .map(|_| {
                                let c = x % (n - 1) + 1;
                                x /= n - 1;
                                c
                            })
                            .collect();
                        let k = classify_killing(&g, &tuple)?;
                        let ok = if m % 2 == 1 {
                            !k.in_major_set
                        } else {
                            !k.in_major_set || pairable(&g, &tuple)
                        };
                        t.record(ok, || format!("{g} {tuple:?}"));
                    }
                }
            }
            Ok(t)
        },
    );

    if p.major_arc {
        r.run(
            "major-arc-main-term",
            "over Z/n, n = 5..9, f = 0, d = 3: the 2-sparse sum is within (5/n)(n!/n^n)^3 of -(1/2)(n!/n^n)^3, and the 1- and 3-sparse sums within (5/n)(n!/n^n)^3 of 0",
            || {
                let mut t = Tally::default();
                for n in 5..=9u64 {
                    let g = AbelianGroup::cyclic(n)?;
                    let e = engine(&g, opts);
                    let nn = n as usize;
                    let cube = e.density().powi(3);
                    let tol = cube * 5.0 / n as f64;
                    let f = vec![0; nn];
                    let s2 = e.sparse_power_sum(2, 3, &f)?;
                    t.record(s2.re < 0.0 && (s2 + 0.5 * cube).norm() <= tol, || format!("Z{n} m=2: {s2}"));
                    for m in [1, 3] {
                        let s = e.sparse_power_sum(m, 3, &f)?;
                        t.record(s.norm() <= tol, || format!("Z{n} m={m}: {s}"));
                    }
                }
                Ok(t)
            },
        );
    }
}

/// `[(m−1)(m−3)⋯1] / [(n−m+1)(n−m+3)⋯(n−1)] · n!/nⁿ` for even `m`.
fn torsion_closed_form(n: usize, m: usize) -> f64 {
    let mut v = bijection_density(n);
    for j in 0..m / 2 {
        v *= (m - 1 - 2 * j) as f64 / (n - m + 1 + 2 * j) as f64;
    }
    v
}

fn pairable(g: &AbelianGroup, tuple: &[usize]) -> bool {
    if tuple.is_empty() {
        return true;
    }
    let first = tuple[0];
    (1..tuple.len()).any(|j| {
        g.add(first, tuple[j]) == 0 && {
            let rest: Vec<usize> = tuple[1..].iter().enumerate().filter(|&(i, _)| i + 1 != j).map(|(_, &c)| c).collect();
            pairable(g, &rest)
        }
    })
}

/// Limits for the counting and Latin batteries.
#[derive(Debug, Clone, Copy)]
struct CountPlan {
    identity_n: usize,
    infeasible_n: usize,
    decomposition_n: usize,
    symmetry_n: usize,
    latin_n2: usize,
    latin_n3: usize,
    latin_property_n: usize,
    pi_invariance_n: usize,
    full_transversals: bool,
    distance_n: usize,
    xor_max_bits: u32,
    brackets: bool,
}

fn count_checks(r: &mut Runner, p: CountPlan, opts: &VerifyOptions) {
    let b = &opts.budgets;
    r.run(
        "fourier-count-identity",
        "n^((d-1)n) times the sum of coefficient^d chi(f) over all characters rounds to the exact count, d = 2,3,4",
        || {
            let mut t = Tally::default();
            for g in groups_between(1, p.identity_n as u64) {
                let n = g.order();
                let e = engine(&g, opts);
                for d in 2..=4usize {
                    let mut tables = vec![FunctionTable::zero(n)];
                    tables.extend((1..=3).map(|s| random_feasible_f(&g, d, s)));
                    for f in &tables {
                        let exact = count_tuples(&g, f, d, Strategy::Auto, b)?.count;
                        let v = e.full_power_sum(d as u32, f.values())? * (n as f64).powi(((d - 1) * n) as i32);
                        let residual = (v - Complex64::new(v.re.round(), 0.0)).norm();
                        let ok = residual < 0.5 && v.re.round() >= 0.0 && BigUint::from(v.re.round() as u128) == exact;
                        t.record(ok, || format!("{g} d={d} f={:?}: {v} vs {exact}", f.values()));
                    }
                }
            }
            Ok(t)
        },
    );

    r.run(
        "strategy-agreement",
        "pair-dp, triple-dp and outer-sum give identical counts",
        || {
            let mut t = Tally::default();
            for g in groups_between(1, p.identity_n as u64) {
                let n = g.order();
                for d in 2..=3usize {
                    let mut tables = vec![FunctionTable::zero(n)];
                    tables.extend((1..=3).map(|s| random_feasible_f(&g, d, s)));
                    for f in &tables {
                        let dp = if d == 2 { Strategy::PairDp } else { Strategy::TripleDp };
                        let a = count_tuples(&g, f, d, dp, b)?.count;
                        let c = count_tuples(&g, f, d, Strategy::OuterSum, b)?.count;
                        t.record(a == c, || format!("{g} d={d} f={:?}: {a} vs {c}", f.values()));
                    }
                }
            }
            Ok(t)
        },
    );

    r.run(
        "zero-on-infeasible",
        "a table with sum f != d sum G has no solutions, and feasible counts are invariant under translation",
        || {
            let mut t = Tally::default();
            for g in groups_between(1, p.infeasible_n as u64) {
                let n = g.order();
                for v in all_functions(n) {
                    let f = FunctionTable::new(&g, v.clone())?;
                    for d in 2..=3usize {
                        let c = count_tuples(&g, &f, d, Strategy::Auto, b)?.count;
                        if !feasibility(&g, &f, d) {
                            t.record(c == BigUint::default(), || format!("{g} d={d} f={v:?}: {c}"));
                        } else if d == 2 {
                            for k in 1..n {
                                let shifted: Vec<usize> = v.iter().map(|&x| g.add(x, k)).collect();
                                let c2 = count_pairs(&g, &FunctionTable::new(&g, shifted)?, b)?.count;
                                t.record(c == c2, || format!("{g} translate {v:?} by {k}"));
                            }
                        }
                    }
                }
            }
            Ok(t)
        },
    );

    r.run(
        "major-minor-decomposition",
        "major part + sparse tail + high-entropy remainder equals the full character sum, and the major part equals n times the sparse power sums",
        || {
            let mut t = Tally::default();
            for g in groups_between(3, p.decomposition_n as u64) {
                let n = g.order();
                let e = engine(&g, opts);
                let max_m = (n - 1) / 2;
                for d in [3u32, 4] {
                    let mut tables = vec![FunctionTable::zero(n)];
                    tables.extend((1..=2).map(|s| random_feasible_f(&g, d as usize, s)));
                    // the shift identity behind the major part needs Σf = d·ΣG
                    for f in tables.iter().filter(|f| feasibility(&g, f, d as usize)) {
                        let dec = e.decomposition(d, f.values(), max_m)?;
                        let tol = 1e-9 * dec.total.norm().max(e.density().powi(d as i32));
                        let ok = close(dec.major + dec.tail + dec.remainder, dec.total, tol)
                            && close(dec.major, dec.major_from_sparse, tol);
                        t.record(ok, || format!("{g} d={d} f={:?}: {dec:?}", f.values()));
                    }
                }
            }
            Ok(t)
        },
    );

    r.run(
        "three-summand-symmetry",
        "the count for pi1+pi2+pi3 = pi equals the sum over bijections b of the pair count for pi - b",
        || {
            let mut t = Tally::default();
            for g in groups_between(1, p.symmetry_n as u64) {
                let pi = random_bijection(&g, 5);
                let lhs = count_tuples(&g, &pi, 3, Strategy::Auto, b)?.count;
                let mut rhs = BigUint::default();
                for bij in all_bijections(g.order()) {
                    rhs += count_pairs(&g, &pi.sub(&g, &bij), b)?.count;
                }
                t.record(lhs == rhs, || format!("{g}: {lhs} vs {rhs}"));
            }
            Ok(t)
        },
    );

    r.run(
        "latin-property",
        "every axis-parallel line of L^d(G,pi) is a permutation of the symbols",
        || {
            let mut t = Tally::default();
            for g in groups_between(1, p.latin_property_n as u64) {
                for d in 2..=3 {
                    let cube = LatinCube::build(&g, &random_bijection(&g, 3), d)?;
                    t.record(cube.verify_latin(), || format!("{g} d={d}"));
                }
            }
            Ok(t)
        },
    );

    r.run(
        "transversals-vs-pairs",
        "the group-blind transversal DP on L^2(G,pi) matches the pair count for pi",
        || {
            let mut t = Tally::default();
            let mut cases: Vec<(AbelianGroup, Option<u32>)> =
                groups_between(2, p.latin_n2.min(4) as u64).into_iter().map(|g| (g, None)).collect();
            if p.full_transversals {
                for (n, want) in [(3u64, 3u32), (5, 15), (7, 133)] {
                    cases.push((AbelianGroup::cyclic(n)?, Some(want)));
                }
            }
            for (g, want) in cases {
                let id = FunctionTable::identity(&g);
                let cube = LatinCube::build(&g, &id, 2)?;
                let tc = count_transversals(&cube, b)?.count;
                let pairs = count_pairs(&g, &id, b)?.count;
                let ok = tc == pairs && want.is_none_or(|w| tc == BigUint::from(w));
                t.record(ok, || format!("{g}: transversals {tc}, pairs {pairs}, expected {want:?}"));
            }
            Ok(t)
        },
    );

    r.run(
        "transversal-lemma",
        "transversals of L^d(G,pi) equal solutions of pi1+...+pid = pi, and n! times that equals the (d+1)-bijection count",
        || {
            let mut t = Tally::default();
            for (d, nmax) in [(2usize, p.latin_n2), (3, p.latin_n3)] {
                for g in groups_between(2, nmax as u64) {
                    let rep = lemma_crosscheck(&g, &random_bijection(&g, 9), d, b)?;
                    t.record(rep.ok, || format!("{g} d={d}: {rep:?}"));
                }
            }
            Ok(t)
        },
    );

    r.run(
        "transversal-pi-invariance",
        "the transversal count of L^2(G,pi) does not depend on pi",
        || {
            let mut t = Tally::default();
            for g in groups_between(2, p.pi_invariance_n as u64) {
                let counts: Vec<BigUint> = all_bijections(g.order())
                    .into_iter()
                    .map(|v| {
                        let cube = LatinCube::build(&g, &FunctionTable::new(&g, v)?, 2)?;
                        Ok(count_transversals(&cube, b)?.count)
                    })
                    .collect::<Result<_>>()?;
                for c in &counts {
                    t.record(*c == counts[0], || format!("{g}: {c} vs {}", counts[0]));
                }
            }
            Ok(t)
        },
    );

    r.run(
        "distance-normalization",
        "tv = l1/2 and l1 <= l2 for injection sums; Z/3 with m = 2 gives l2^2 = 1/8 and tv = 1/6; the xor grid has tv(m=1) = 0 and tv 2^(3k/2)/m <= 10",
        || {
            let mut t = Tally::default();
            for g in groups_between(2, p.distance_n as u64) {
                for m in 1..g.order() {
                    let d = injection_distribution_distance(&g, m, b)?;
                    t.record(d.tv == d.l1 / 2.0 && d.l1 <= d.l2 + 1e-12, || format!("{g} m={m}: {d:?}"));
                }
            }
            let d = injection_distribution_distance(&AbelianGroup::cyclic(3)?, 2, b)?;
            t.record(
                (d.l2 - 0.125f64.sqrt()).abs() <= 1e-12 && (d.tv - 1.0 / 6.0).abs() <= 1e-12,
                || format!("Z3 m=2: {d:?}"),
            );
            for k in 2..=p.xor_max_bits {
                for rep in tv_grid(k, b)? {
                    let ok = rep.empirical_constant.is_some_and(|c| c <= 10.0) && (rep.m != 1 || rep.exact_tv == Some(0.0));
                    t.record(ok, || format!("{rep:?}"));
                }
            }
            Ok(t)
        },
    );

    r.run(
        "singular-series",
        "exp(-sum |f^-1(x)|^2 / 2n^2) = exp(-exp(-H2)/2) and lies in [e^(-1/2), e^(-1/(2n))]",
        || {
            let mut t = Tally::default();
            for g in groups_between(1, 12) {
                let n = g.order();
                for seed in 0..16 {
                    let f = random_feasible_f(&g, 3, seed);
                    let s = singular_series(&g, &f);
                    let lo = (-0.5f64).exp() - 1e-12;
                    let hi = (-0.5 / n as f64).exp() + 1e-12;
                    let ok = (s.value - s.value_from_entropy).abs() <= 1e-12 && (lo..=hi).contains(&s.value);
                    t.record(ok, || format!("{g} f={:?}: {s:?}", f.values()));
                }
            }
            Ok(t)
        },
    );

    if p.brackets {
        r.run(
            "prediction-brackets",
            "exact/predicted lies in [0.9, 1.2] for d = 2 transversal counts at n = 5, 7, and in [0.5, 2] for d = 3, Z/5, f = 0",
            || {
                let mut t = Tally::default();
                for n in [5u64, 7] {
                    let g = AbelianGroup::cyclic(n)?;
                    let id = FunctionTable::identity(&g);
                    let ratio = count_ratio(&g, &id, 2, b)?;
                    t.record((0.9..=1.2).contains(&ratio), || format!("Z{n} d=2: {ratio}"));
                }
                let g = AbelianGroup::cyclic(5)?;
                let ratio = count_ratio(&g, &FunctionTable::zero(5), 3, b)?;
                t.record((0.5..=2.0).contains(&ratio), || format!("Z5 d=3: {ratio}"));
                Ok(t)
            },
        );
    }
}

/// Exact count over predicted main term.
pub fn count_ratio(g: &AbelianGroup, f: &FunctionTable, d: usize, b: &Budgets) -> Result<f64> {
    let exact = count_tuples(g, f, d, Strategy::Auto, b)?.count;
    let pred = predict(g, f, d)?;
    Ok(crate::combin::ln_big(&exact).exp() / pred.main_value)
}

fn finish(level: VerifyLevel, r: Runner, start: Instant) -> VerifyReport {
    VerifyReport {
        level,
        passed: r.checks.iter().all(|c| c.passed),
        checks: r.checks,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Runs the full battery. `Quick` stays at `n ≤ 4`; `Full` uses the ranges
/// stated by each check.
pub fn run_verify(level: VerifyLevel, opts: &VerifyOptions) -> VerifyReport {
    let start = Instant::now();
    let mut r = Runner { checks: Vec::new() };
    let quick = level == VerifyLevel::Quick;
    let fp = if quick {
        FourierPlan {
            all_n: 4,
            parseval_n: 4,
            sparse_n: 4,
            bound_sparse_n: 4,
            torsion_n6: false,
            entropy_samples: 1_000,
            entropy_n: 4,
            killing_n: 4,
            major_arc: false,
        }
    } else {
        FourierPlan {
            all_n: 6,
            parseval_n: 5,
            sparse_n: 8,
            bound_sparse_n: 7,
            torsion_n6: true,
            entropy_samples: 10_000,
            entropy_n: 12,
            killing_n: 6,
            major_arc: true,
        }
    };
    fourier_checks(&mut r, fp, opts);
    let cp = if quick {
        CountPlan {
            identity_n: 4,
            infeasible_n: 3,
            decomposition_n: 4,
            symmetry_n: 3,
            latin_n2: 4,
            latin_n3: 3,
            latin_property_n: 4,
            pi_invariance_n: 3,
            full_transversals: false,
            distance_n: 4,
            xor_max_bits: 2,
            brackets: false,
        }
    } else {
        CountPlan {
            identity_n: 5,
            infeasible_n: 4,
            decomposition_n: 5,
            symmetry_n: 4,
            latin_n2: 5,
            latin_n3: 4,
            latin_property_n: 8,
            pi_invariance_n: 4,
            full_transversals: true,
            distance_n: 6,
            xor_max_bits: 3,
            brackets: true,
        }
    };
    count_checks(&mut r, cp, opts);
    finish(level, r, start)
}

/// The Fourier battery alone, with every range capped at `nmax`.
pub fn run_fourier_verify(nmax: usize, opts: &VerifyOptions) -> VerifyReport {
    let start = Instant::now();
    let mut r = Runner { checks: Vec::new() };
    let cap = |x: usize| x.min(nmax);
    fourier_checks(
        &mut r,
        FourierPlan {
            all_n: cap(6),
            parseval_n: cap(5),
            sparse_n: cap(8),
            bound_sparse_n: cap(7),
            torsion_n6: nmax >= 6,
            entropy_samples: 10_000,
            entropy_n: cap(12).max(1),
            killing_n: cap(6),
            major_arc: nmax >= 9,
        },
        opts,
    );
    let level = if nmax <= 4 { VerifyLevel::Quick } else { VerifyLevel::Full };
    finish(level, r, start)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_passes() {
        let rep = run_verify(VerifyLevel::Quick, &VerifyOptions::default());
        let failed: Vec<_> = rep.failed().collect();
        assert!(rep.passed, "{failed:#?}");
        assert!(rep.checks.len() >= 15);
    }

    #[test]
    fn injected_fault_is_caught() {
        let opts = VerifyOptions {
            faulty_recursion: true,
            ..Default::default()
        };
        let rep = run_verify(VerifyLevel::Quick, &opts);
        assert!(!rep.passed);
        let by_name = |n: &str| rep.checks.iter().find(|c| c.name == n).unwrap().passed;
        assert!(by_name("parseval"));
        assert!(!by_name("recursion-vs-direct"));
    }

    #[test]
    fn closed_form_values() {
        assert!((torsion_closed_form(4, 2) - 1.0 / 32.0).abs() < 1e-15);
        assert!((torsion_closed_form(6, 6) - bijection_density(6)).abs() < 1e-15);
        assert_eq!(sparse_characters(4, 2).len(), 6 * 9);
        assert_eq!(character_at(3, 5).coords(), &[0, 1, 2]);
    }

    #[test]
    fn level_parsing() {
        assert_eq!("quick".parse::<VerifyLevel>().unwrap(), VerifyLevel::Quick);
        assert!("slow".parse::<VerifyLevel>().is_err());
    }
}
