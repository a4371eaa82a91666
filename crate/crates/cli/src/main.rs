//! `bijsum`: exact counts, Fourier coefficients and transversal data for sums
//! of bijections `{1,…,n} → G`.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 budget exceeded,
//! 4 verification failure.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use bijsum_core::counting::{
    count_tuples, feasibility, injection_distribution_distance_with, predict, random_bijection, random_feasible_f,
    singular_series, DistanceMethod, FunctionFile, FunctionTable, Strategy,
};
use bijsum_core::fourier::entropy_report;
use bijsum_core::latin::{count_transversals, lemma_crosscheck, taranenko_ratio};
use bijsum_core::verify::{run_fourier_verify, run_verify, VerifyLevel, VerifyOptions, VerifyReport};
use bijsum_core::xor::advantage_report;
use bijsum_core::{par, AbelianGroup, Budgets, CharacterVector, Error, FourierEngine, LatinCube};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use output::{render, Format, ROWS};

#[derive(Debug, Parser)]
#[command(name = "bijsum", version, about = "Exact arithmetic for sums of bijections into finite abelian groups")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cap on states per DP level.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_states: Option<u64>,
    /// Cap on characters enumerated by one character sum.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_characters: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Group structure.
    Group {
        #[command(subcommand)]
        command: GroupCommand,
    },
    /// Fourier coefficients of the bijection indicator.
    Fourier {
        #[command(subcommand)]
        command: FourierCommand,
    },
    /// Exact number of solutions of π₁+⋯+π_d = f.
    Count(CountArgs),
    /// Distance of a sum of two random injections from uniform.
    Dist(DistArgs),
    /// Latin hypercubes L^d(G,π).
    Latin {
        #[command(subcommand)]
        command: LatinCommand,
    },
    /// Distance and advantage bound for the xor of two permutations.
    XorAdvantage(XorArgs),
    /// Run the invariant batteries.
    Verify(VerifyArgs),
    /// Exact/predicted ratio table over all groups up to a given order.
    Sweep(SweepArgs),
}

#[derive(Debug, Subcommand)]
enum GroupCommand {
    Info {
        /// Cyclic factors, e.g. `4`, `2x2`, `Z4xZ2`.
        #[arg(long)]
        group: AbelianGroup,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CoeffMethod {
    Direct,
    Recursive,
}

#[derive(Debug, Subcommand)]
enum FourierCommand {
    Coeff {
        #[arg(long)]
        group: AbelianGroup,
        /// Comma-separated dual indices, one per position.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        chi: Vec<usize>,
        #[arg(long, value_enum, default_value_t = CoeffMethod::Recursive)]
        method: CoeffMethod,
    },
    SparseSum {
        #[arg(long)]
        group: AbelianGroup,
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        d: u32,
        #[arg(long, default_value = "zero")]
        f: TableSource,
    },
    Verify {
        #[arg(long, default_value_t = 5)]
        nmax: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long)]
    group: AbelianGroup,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    d: u64,
    /// `zero`, `identity`, `random:<seed>` or a JSON table file.
    #[arg(long, default_value = "zero")]
    f: TableSource,
    #[arg(long, default_value = "auto")]
    strategy: StrategyArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistMethodArg {
    Auto,
    Enumerate,
    ClassDp,
}

#[derive(Debug, Args)]
struct DistArgs {
    #[arg(long)]
    group: AbelianGroup,
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum, default_value_t = DistMethodArg::Auto)]
    method: DistMethodArg,
}

#[derive(Debug, Subcommand)]
enum LatinCommand {
    Transversals {
        #[arg(long)]
        group: AbelianGroup,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
        /// `identity` or `random:<seed>`.
        #[arg(long, default_value = "identity")]
        pi: TableSource,
        /// Also compare with the tuple counts.
        #[arg(long)]
        crosscheck: bool,
    },
    Crosscheck {
        #[arg(long)]
        group: AbelianGroup,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        d: u64,
        #[arg(long, default_value = "identity")]
        pi: TableSource,
    },
}

#[derive(Debug, Args)]
struct XorArgs {
    /// Block width k; the group is (Z/2)^k.
    #[arg(long)]
    bits: u32,
    #[arg(long)]
    queries: usize,
    #[arg(long, default_value_t = 0.0)]
    prp_adv: f64,
    /// The constant C in 2·adv + C·m/2^{3k/2}.
    #[arg(long, default_value_t = 1.0)]
    constant: f64,
    /// Compute the exact distance by enumeration.
    #[arg(long)]
    exact: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
    level: LevelArg,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    d: u64,
    #[arg(long)]
    nmax: u64,
    /// Target table; defaults to `identity` for d = 2 and `zero` otherwise.
    #[arg(long)]
    f: Option<TableSource>,
    /// Only cyclic groups.
    #[arg(long)]
    cyclic: bool,
}

#[derive(Debug, Clone)]
struct StrategyArg(Strategy);

impl FromStr for StrategyArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.parse().map(StrategyArg)
    }
}

#[derive(Debug, Clone)]
enum TableSource {
    Zero,
    Identity,
    Random(u64),
    File(PathBuf),
}

impl FromStr for TableSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "zero" => TableSource::Zero,
            "identity" => TableSource::Identity,
            _ => match s.strip_prefix("random:") {
                Some(seed) => TableSource::Random(seed.parse().map_err(|e| format!("bad seed {seed:?}: {e}"))?),
                None => TableSource::File(PathBuf::from(s)),
            },
        })
    }
}

impl TableSource {
    /// The table and, for random tables, the seed. Random targets are
    /// feasible for `d` summands; random `π` are bijections (`d = None`).
    fn resolve(&self, g: &AbelianGroup, d: Option<usize>) -> Result<(FunctionTable, Option<u64>), Error> {
        Ok(match self {
            TableSource::Zero => (FunctionTable::zero(g.order()), None),
            TableSource::Identity => (FunctionTable::identity(g), None),
            TableSource::Random(seed) => match d {
                Some(d) => (random_feasible_f(g, d, *seed), Some(*seed)),
                None => (random_bijection(g, *seed), Some(*seed)),
            },
            TableSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
                let file: FunctionFile = serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
                let (fg, table) = FunctionTable::from_file(&file)?;
                if fg.factors() != g.factors() {
                    return Err(Error::InvalidArgument(format!(
                        "table is over {fg}, expected {g}"
                    )));
                }
                if table.len() != g.order() {
                    return Err(Error::DimensionMismatch {
                        expected: g.order(),
                        got: table.len(),
                    });
                }
                (table, None)
            }
        })
    }
}

/// A rendered result; `ok = false` maps to the verification exit code.
struct Outcome {
    value: Value,
    ok: bool,
}

impl From<Value> for Outcome {
    fn from(value: Value) -> Self {
        Outcome { value, ok: true }
    }
}

fn budgets(cli: &Cli) -> Budgets {
    let mut b = Budgets::default();
    if let Some(s) = cli.max_states {
        b.dp_states = s as u128;
    }
    if let Some(c) = cli.max_characters {
        b.characters = c as u128;
    }
    b
}

fn with_seed(mut v: Value, seed: Option<u64>) -> Value {
    if let (Some(s), Some(obj)) = (seed, v.as_object_mut()) {
        obj.insert("seed".into(), json!(s));
    }
    v
}

fn report_value(rep: &VerifyReport) -> Value {
    json!({
        "level": rep.level,
        "passed": rep.passed,
        "elapsed_ms": rep.elapsed_ms,
        ROWS: rep.checks,
    })
}

fn count_row(g: &AbelianGroup, f: &FunctionTable, d: usize, strategy: Strategy, b: &Budgets) -> Result<Value, Error> {
    let res = count_tuples(g, f, d, strategy, b)?;
    let prediction = match predict(g, f, d) {
        Ok(p) => Some(p.main_value),
        Err(Error::NoPrediction(_)) => None,
        Err(e) => return Err(e),
    };
    let exact = res.count.to_string();
    let ratio = prediction
        .filter(|&p| p > 0.0)
        .map(|p| exact.parse::<f64>().unwrap_or(f64::NAN) / p);
    Ok(json!({
        "group": g.to_string(),
        "n": g.order(),
        "d": d,
        "feasible": feasibility(g, f, d),
        "exact": exact,
        "prediction": prediction,
        "singular_series": singular_series(g, f).value,
        "ratio": ratio,
        "strategy": res.strategy,
        "elapsed_ms": res.elapsed_ms,
    }))
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let b = budgets(cli);
    Ok(match &cli.command {
        Command::Group {
            command: GroupCommand::Info { group: g },
        } => {
            let two_torsion = (1..g.order()).filter(|&x| g.is_two_torsion(x)).count();
            json!({
                "group": g.to_string(),
                "factors": g.factors(),
                "n": g.order(),
                "exponent": g.exponent(),
                "sigma_g": g.sigma_g().coords,
                "nonzero_two_torsion": two_torsion,
                "groups_of_this_order": AbelianGroup::all_of_order(g.order() as u64).len(),
            })
            .into()
        }
        Command::Fourier { command } => match command {
            FourierCommand::Coeff { group: g, chi, method } => {
                let chi = CharacterVector::new(g, chi.clone())?;
                let e = FourierEngine::with_budgets(g, b);
                let (v, name) = match method {
                    CoeffMethod::Direct => (e.coeff_direct(&chi)?, "direct"),
                    CoeffMethod::Recursive => (e.coeff_recursive(&chi)?, "recursive"),
                };
                json!({
                    "group": g.to_string(),
                    "chi": chi.coords(),
                    "re": v.re,
                    "im": v.im,
                    "method": name,
                    "n": g.order(),
                    "m": chi.sparsity(),
                    "entropy": entropy_report(&chi),
                    "bounds": e.bound_ratios(&chi)?,
                })
                .into()
            }
            FourierCommand::SparseSum { group: g, m, d, f } => {
                let (table, seed) = f.resolve(g, Some(*d as usize))?;
                let e = FourierEngine::with_budgets(g, b);
                let s = e.sparse_power_sum(*m, *d, table.values())?;
                let sv = e.sparseval_sum(*m)?;
                let n = g.order();
                let main_term = (*d == 3 && m % 2 == 0).then(|| {
                    let squares: usize = table.fiber_sizes(g).iter().map(|k| k * k).sum();
                    let x = -(squares as f64) / (2.0 * (n * n) as f64);
                    let half = (m / 2) as i32;
                    let fact: f64 = (1..=half).map(f64::from).product();
                    x.powi(half) / fact * e.density().powi(3)
                });
                with_seed(
                    json!({
                        "group": g.to_string(),
                        "n": n,
                        "m": m,
                        "d": d,
                        "re": s.re,
                        "im": s.im,
                        "main_term": main_term,
                        "sparseval": sv,
                    }),
                    seed,
                )
                .into()
            }
            FourierCommand::Verify { nmax, inject_fault } => {
                let opts = VerifyOptions {
                    budgets: b,
                    faulty_recursion: *inject_fault,
                };
                let rep = run_fourier_verify(*nmax, &opts);
                Outcome {
                    value: report_value(&rep),
                    ok: rep.passed,
                }
            }
        },
        Command::Count(a) => {
            let d = a.d as usize;
            let (f, seed) = a.f.resolve(&a.group, Some(d))?;
            with_seed(count_row(&a.group, &f, d, a.strategy.0, &b)?, seed).into()
        }
        Command::Dist(a) => {
            let method = match a.method {
                DistMethodArg::Auto => DistanceMethod::Auto,
                DistMethodArg::Enumerate => DistanceMethod::Enumerate,
                DistMethodArg::ClassDp => DistanceMethod::ClassDp,
            };
            let r = injection_distribution_distance_with(&a.group, a.m, method, &b)?;
            json!({
                "group": a.group.to_string(),
                "n": r.n,
                "m": r.m,
                "l2": r.l2,
                "l1": r.l1,
                "tv": r.tv,
                "method": r.method,
            })
            .into()
        }
        Command::Latin { command } => match command {
            LatinCommand::Transversals {
                group: g,
                d,
                pi,
                crosscheck,
            } => {
                let d = *d as usize;
                let (pi, seed) = pi.resolve(g, None)?;
                let tc = count_transversals(&LatinCube::build(g, &pi, d)?, &b)?;
                let check = if *crosscheck {
                    Some(lemma_crosscheck(g, &pi, d, &b)?)
                } else {
                    None
                };
                let ok = check.as_ref().is_none_or(|c| c.ok && c.transversals == tc.count);
                Outcome {
                    value: with_seed(
                        json!({
                            "group": g.to_string(),
                            "n": tc.n,
                            "d": tc.d,
                            "transversals": tc.count.to_string(),
                            "taranenko_ratio": tc.taranenko_ratio,
                            "crosscheck_ok": check.map(|_| ok),
                        }),
                        seed,
                    ),
                    ok,
                }
            }
            LatinCommand::Crosscheck { group: g, d, pi } => {
                let d = *d as usize;
                let (pi, seed) = pi.resolve(g, None)?;
                let r = lemma_crosscheck(g, &pi, d, &b)?;
                Outcome {
                    value: with_seed(
                        json!({
                            "group": g.to_string(),
                            "n": r.n,
                            "d": r.d,
                            "transversals": r.transversals.to_string(),
                            "solutions": r.solutions.to_string(),
                            "extended_solutions": r.extended_solutions.to_string(),
                            "taranenko_ratio": taranenko_ratio(d, r.n, &r.transversals),
                            "crosscheck_ok": r.ok,
                        }),
                        seed,
                    ),
                    ok: r.ok,
                }
            }
        },
        Command::XorAdvantage(a) => {
            let r = advantage_report(a.bits, a.queries, a.prp_adv, a.constant, a.exact, &b)?;
            serde_json::to_value(r).expect("report serializes").into()
        }
        Command::Verify(a) => {
            let level = match a.level {
                LevelArg::Quick => VerifyLevel::Quick,
                LevelArg::Full => VerifyLevel::Full,
            };
            let opts = VerifyOptions {
                budgets: b,
                faulty_recursion: a.inject_fault,
            };
            let rep = run_verify(level, &opts);
            Outcome {
                value: report_value(&rep),
                ok: rep.passed,
            }
        }
        Command::Sweep(a) => {
            let d = a.d as usize;
            let source = a.f.clone().unwrap_or(if d == 2 { TableSource::Identity } else { TableSource::Zero });
            let mut rows = Vec::new();
            let mut stopped = None;
            for g in AbelianGroup::all_up_to(a.nmax) {
                if a.cyclic && g.factors().len() > 1 {
                    continue;
                }
                let (f, _) = source.resolve(&g, Some(d))?;
                match count_row(&g, &f, d, Strategy::Auto, &b) {
                    Ok(row) => rows.push(row),
                    Err(e) if e.is_budget() => {
                        stopped = Some(format!("{g}: {e}"));
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            let seed = match source {
                TableSource::Random(s) => Some(s),
                _ => None,
            };
            with_seed(json!({ "d": d, "stopped_at": stopped, ROWS: rows }), seed).into()
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.map(|t| t as usize);
    match par::with_threads(threads, || run(&cli)) {
        Ok(out) => {
            println!("{}", render(&out.value, cli.format));
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { 3 } else { 2 })
        }
    }
}
