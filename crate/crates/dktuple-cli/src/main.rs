//! `dktuple` — command-line front end for the generalized Diophantine tuple
//! toolkit.
//!
//! Exit codes: 0 on success, 1 when a mathematical check fails (a tuple does
//! not verify, an inequality does not hold, a search was interrupted on
//! budget), 2 on invalid input or usage.

mod emit;
mod parse;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;

use dktuple::tuples::{self, PowerPolicy, SearchCheckpoint, SearchParams, TupleRecord};
use dktuple::{approx, bounds, characters, gap, sieve};

use emit::{to_line, Emitter};

const EXIT_OK: i32 = 0;
const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_BAD_INPUT: i32 = 2;

#[derive(Parser)]
#[command(
    name = "dktuple",
    version,
    about = "Exact computations around generalized Diophantine tuples with property D_k(n)",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify property D_k(n) for an explicit set, reporting root witnesses.
    Verify(VerifyArgs),
    /// Euler's D(1) family member for a pair (a, b) with ab + 1 square.
    Euler(EulerArgs),
    /// All admissible extensions of a tuple up to a bound.
    Extend(ExtendArgs),
    /// Exhaustive m-tuple search over [1, B].
    Search(SearchArgs),
    /// Gap-principle inequality checks.
    #[command(subcommand)]
    GapCheck(GapCmd),
    /// Order-k character sum with its sqrt(p|A||B|) bound.
    CharSum(CharSumArgs),
    /// Gallagher's larger sieve.
    #[command(subcommand)]
    Sieve(SieveCmd),
    /// Solution pairs, heights, and approximation-lemma checks.
    #[command(subcommand)]
    Approx(ApproxCmd),
    /// Closed-form constants and prior bounds.
    #[command(subcommand)]
    Bounds(BoundsCmd),
}

#[derive(Args)]
struct PolicyArgs {
    /// Admit r = 0 as a k-th power root.
    #[arg(long)]
    allow_zero: bool,
    /// Admit negative roots for odd k.
    #[arg(long)]
    allow_negative: bool,
}

impl PolicyArgs {
    fn policy(&self) -> PowerPolicy {
        PowerPolicy {
            allow_zero: self.allow_zero,
            allow_negative: self.allow_negative,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// The shift n (nonzero integer; decimal string of any size).
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    /// Power exponent k >= 2.
    #[arg(long)]
    k: u32,
    /// Comma-separated elements, any order.
    #[arg(long)]
    set: String,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Write results as JSON Lines to this file (plus a run manifest).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EulerArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExtendArgs {
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    set: String,
    /// Inclusive upper bound for new elements.
    #[arg(long)]
    max: String,
    #[command(flatten)]
    policy: PolicyArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    /// The shift n (nonzero).
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
    #[arg(long)]
    k: u32,
    /// Tuple size m >= 2.
    #[arg(long)]
    m: usize,
    /// Inclusive element bound B.
    #[arg(long)]
    max: u64,
    #[command(flatten)]
    policy: PolicyArgs,
    /// Worker threads; output is byte-identical for every count.
    #[arg(long, env = "DKN_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Node budget per first-element subtree; exceeding it interrupts the
    /// search with a checkpoint.
    #[arg(long)]
    node_budget: Option<u64>,
    /// Resume from a checkpoint file produced by an interrupted run.
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Where to write the checkpoint if the search is interrupted
    /// (default: <out>.checkpoint.json when --out is given).
    #[arg(long)]
    checkpoint_out: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GapCmd {
    /// bd >= k^k n^-k (ac)^(k-1), given the four cross products + n are k-th powers.
    Gyar(GapQuadArgs),
    /// (ac - n)(bd - n) >= abcd/2 for n^3 <= a < b < c < d (no power hypotheses).
    Abcd(GapQuadNoKArgs),
    /// bd >= k^k 2^-k n^-k (ac)^(k-1) on the D_k(-n) side.
    Neg(GapQuadArgs),
    /// Super-exponential growth certificate a_{2+3j} >= a_2^((k-1)^j).
    Growth(GrowthArgs),
}

#[derive(Args)]
struct GapQuadArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long)]
    c: String,
    #[arg(long)]
    d: String,
    /// Positive n.
    #[arg(long)]
    n: String,
    #[arg(long)]
    k: u32,
}

#[derive(Args)]
struct GapQuadNoKArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    #[arg(long)]
    c: String,
    #[arg(long)]
    d: String,
    #[arg(long)]
    n: String,
}

#[derive(Args)]
struct GrowthArgs {
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    set: String,
    /// +1 for the D_k(n) family (n > 0), -1 for D_k(-n).
    #[arg(long, allow_hyphen_values = true)]
    sign: i8,
    /// Size regime exponent L >= 3.
    #[arg(long, default_value_t = 3)]
    level: u32,
}

#[derive(Args)]
struct CharSumArgs {
    /// Prime modulus p = 1 (mod k).
    #[arg(long)]
    p: u64,
    /// Character order k >= 2.
    #[arg(long)]
    k: u32,
    /// Nonzero residues, comma-separated.
    #[arg(long)]
    set_a: String,
    /// Residues (0 allowed), comma-separated.
    #[arg(long)]
    set_b: String,
    /// Shift n, coprime to p.
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
}

#[derive(Subcommand)]
enum SieveCmd {
    /// Sieve an explicit set with true residue counts.
    Gallagher(GallagherArgs),
    /// A-priori bound for D_k(n) sets in [1, |n|^3] with character weights.
    Apriori(AprioriArgs),
    /// Compare theta(Q; k, a) against Q/phi(k) and the 1/160 allowance.
    PntCheck(PntArgs),
}

#[derive(Args)]
struct GallagherArgs {
    #[arg(long)]
    set: String,
    /// Interval bound N with the set inside [1, N].
    #[arg(long)]
    n_limit: String,
    /// Prime cutoff Q > 1.
    #[arg(long)]
    q: u64,
    /// Restrict primes to p = 1 (mod K); default is all primes.
    #[arg(long)]
    one_mod_k: Option<u64>,
    /// Write per-prime rows (p,log_p,weight,residues) as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct AprioriArgs {
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[arg(long)]
    k: u32,
    /// Override the default cutoff ceil((phi(k) log N)^2).
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct PntArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    k: u64,
    #[arg(long, allow_hyphen_values = true)]
    a: i64,
}

#[derive(Subcommand)]
enum ApproxCmd {
    /// Solution pairs (u_i, v_i) of the linked system for i >= 3.
    Pairs(TupleArgs),
    /// Degree and absolute height of (a1/a2)^(1/k).
    Height(HeightArgs),
    /// Approximation-lemma verdicts for the pair at --index.
    Check(ApproxCheckArgs),
}

#[derive(Args)]
struct TupleArgs {
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    set: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HeightArgs {
    #[arg(long)]
    a1: String,
    #[arg(long)]
    a2: String,
    #[arg(long)]
    k: u32,
}

#[derive(Args)]
struct ApproxCheckArgs {
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[arg(long)]
    k: u32,
    #[arg(long)]
    set: String,
    /// 1-based element index i >= 3.
    #[arg(long)]
    index: usize,
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Evertse's exception count 2^25 kappa^-3 log(2r) log(kappa^-1 log(2r)).
    Evertse {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        kappa: f64,
    },
    /// Large-element bound 2^28 log(2k) log(2 log(2k)) + additive constant.
    Large {
        #[arg(long)]
        k: u64,
        /// Use 2 + 3 j0(k) instead of 14.
        #[arg(long)]
        refined: bool,
    },
    /// Main term 3 phi(k) log |n|.
    MainTerm {
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long)]
        k: u64,
    },
    /// Prime-counting threshold Q0(k).
    Q0 {
        #[arg(long)]
        k: u64,
    },
    /// Previously known bounds on M_k(n).
    Prior {
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long)]
        k: u64,
    },
    /// Markdown table of every bound evaluated at (n, k).
    Table {
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        #[arg(long)]
        k: u64,
    },
}

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let code = match run(cli, argv) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            EXIT_BAD_INPUT
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli, argv: Vec<String>) -> Result<i32> {
    match cli.command {
        Command::Verify(args) => cmd_verify(args, argv),
        Command::Euler(args) => cmd_euler(args, argv),
        Command::Extend(args) => cmd_extend(args, argv),
        Command::Search(args) => cmd_search(args, argv),
        Command::GapCheck(cmd) => cmd_gap(cmd),
        Command::CharSum(args) => cmd_char_sum(args),
        Command::Sieve(cmd) => cmd_sieve(cmd),
        Command::Approx(cmd) => cmd_approx(cmd, argv),
        Command::Bounds(cmd) => cmd_bounds(cmd),
    }
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    #[serde(flatten)]
    record: &'a TupleRecord,
    #[serde(flatten)]
    report: &'a tuples::VerifyReport,
}

fn cmd_verify(args: VerifyArgs, argv: Vec<String>) -> Result<i32> {
    let record = TupleRecord::new(
        args.k,
        parse::bigint(&args.n)?,
        parse::element_set(&args.set)?,
    )?;
    let report = tuples::verify(&record, args.policy.policy())?;
    let line = to_line(&VerifyOutput {
        record: &record,
        report: &report,
    })?;
    Emitter {
        out: args.out,
        argv,
    }
    .emit(&[line], None)?;
    Ok(if report.ok {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

fn cmd_euler(args: EulerArgs, argv: Vec<String>) -> Result<i32> {
    let a = parse::biguint(&args.a)?;
    let b = parse::biguint(&args.b)?;
    let family = tuples::euler_family(&a, &b)?;
    let line = to_line(&json!({
        "a": a.to_string(),
        "b": b.to_string(),
        "quadruple": family,
    }))?;
    Emitter {
        out: args.out,
        argv,
    }
    .emit(&[line], None)?;
    Ok(EXIT_OK)
}

fn cmd_extend(args: ExtendArgs, argv: Vec<String>) -> Result<i32> {
    let record = TupleRecord::new(
        args.k,
        parse::bigint(&args.n)?,
        parse::element_set(&args.set)?,
    )?;
    let bound = parse::biguint(&args.max)?;
    let extension = tuples::extend(&record, &bound, args.policy.policy())?;
    if !extension.base_verified {
        eprintln!("warning: base tuple does not verify; extension computed against all elements");
    }
    let line = to_line(&extension)?;
    Emitter {
        out: args.out,
        argv,
    }
    .emit(&[line], None)?;
    Ok(EXIT_OK)
}

fn cmd_search(args: SearchArgs, argv: Vec<String>) -> Result<i32> {
    let mut params = SearchParams {
        n: args.n,
        k: args.k,
        m: args.m,
        bound: args.max,
        policy: args.policy.policy(),
        node_budget: args.node_budget,
        workers: args.workers,
        start_after: None,
    };
    if let Some(path) = &args.resume {
        let raw = std::fs::read_to_string(path)?;
        let checkpoint: SearchCheckpoint = serde_json::from_str(raw.trim())?;
        if checkpoint.digest != params.digest() || checkpoint.max != params.bound {
            anyhow::bail!(
                "checkpoint {} does not match these search parameters",
                path.display()
            );
        }
        params.start_after = checkpoint.resume_point();
    }

    let emitter = Emitter {
        out: args.out.clone(),
        argv,
    };
    match tuples::search(&params) {
        Ok(records) => {
            let lines = record_lines(&records)?;
            let done = SearchCheckpoint {
                prefix: vec![params.bound],
                max: params.bound,
                digest: params.digest(),
            };
            emitter.emit(&lines, Some(&done))?;
            Ok(EXIT_OK)
        }
        Err(dktuple::Error::SearchInterrupted {
            partial,
            checkpoint,
        }) => {
            let lines = record_lines(&partial)?;
            emitter.emit(&lines, Some(&checkpoint))?;
            let checkpoint_line = serde_json::to_string(&checkpoint)?;
            let checkpoint_path = args.checkpoint_out.or_else(|| {
                args.out.map(|out| {
                    let mut name = out.file_name().unwrap_or_default().to_os_string();
                    name.push(".checkpoint.json");
                    out.with_file_name(name)
                })
            });
            match checkpoint_path {
                Some(path) => std::fs::write(&path, format!("{checkpoint_line}\n"))?,
                None => println!("{checkpoint_line}"),
            }
            eprintln!("search interrupted: node budget exceeded; checkpoint written");
            Ok(EXIT_CHECK_FAILED)
        }
        Err(other) => Err(other.into()),
    }
}

fn record_lines(records: &[TupleRecord]) -> Result<Vec<String>> {
    records.iter().map(to_line).collect()
}

fn cmd_gap(cmd: GapCmd) -> Result<i32> {
    match cmd {
        GapCmd::Gyar(args) => {
            let check = gap::check_gyar(
                &parse::biguint(&args.a)?,
                &parse::biguint(&args.b)?,
                &parse::biguint(&args.c)?,
                &parse::biguint(&args.d)?,
                &parse::biguint(&args.n)?,
                args.k,
            )?;
            println!("{}", to_line(&check)?);
            Ok(check_exit(check.holds))
        }
        GapCmd::Abcd(args) => {
            let check = gap::check_abcd(
                &parse::biguint(&args.a)?,
                &parse::biguint(&args.b)?,
                &parse::biguint(&args.c)?,
                &parse::biguint(&args.d)?,
                &parse::biguint(&args.n)?,
            )?;
            println!("{}", to_line(&check)?);
            Ok(check_exit(check.holds))
        }
        GapCmd::Neg(args) => {
            let check = gap::check_gap_neg(
                &parse::biguint(&args.a)?,
                &parse::biguint(&args.b)?,
                &parse::biguint(&args.c)?,
                &parse::biguint(&args.d)?,
                &parse::biguint(&args.n)?,
                args.k,
            )?;
            println!("{}", to_line(&check)?);
            Ok(check_exit(check.holds))
        }
        GapCmd::Growth(args) => {
            let record = TupleRecord::new(
                args.k,
                parse::bigint(&args.n)?,
                parse::element_set(&args.set)?,
            )?;
            let verdicts = gap::growth_certificate(&record, args.sign, args.level)?;
            let items: Vec<_> = verdicts
                .iter()
                .map(|(j, holds)| json!({"j": j, "holds": holds}))
                .collect();
            println!("{}", to_line(&items)?);
            Ok(check_exit(verdicts.iter().all(|(_, h)| *h)))
        }
    }
}

fn check_exit(holds: bool) -> i32 {
    if holds {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn cmd_char_sum(args: CharSumArgs) -> Result<i32> {
    let chi = characters::make_character(args.p, args.k)?;
    let result = characters::char_sum(
        &chi,
        &parse::residue_set(&args.set_a)?,
        &parse::residue_set(&args.set_b)?,
        args.n,
    )?;
    let mut value = serde_json::to_value(&result)?;
    value["p"] = json!(args.p);
    value["k"] = json!(args.k);
    value["generator"] = json!(chi.generator());
    println!("{}", serde_json::to_string(&value)?);
    Ok(check_exit(result.holds))
}

fn cmd_sieve(cmd: SieveCmd) -> Result<i32> {
    match cmd {
        SieveCmd::Gallagher(args) => {
            let set = parse::element_set(&args.set)?;
            let n_limit = parse::biguint(&args.n_limit)?;
            let spec = match args.one_mod_k {
                Some(k) => sieve::PrimeSpec::OneModK(k),
                None => sieve::PrimeSpec::All,
            };
            let report = sieve::gallagher_bound(&set, &n_limit, spec, args.q)?;
            if let Some(path) = &args.csv {
                emit::write_sieve_csv(path, &report.rows)?;
            }
            println!("{}", to_line(&report)?);
            Ok(EXIT_OK)
        }
        SieveCmd::Apriori(args) => {
            let n = parse::bigint(&args.n)?;
            let report = sieve::apriori_sieve_bound(&n, args.k, args.q)?;
            if let Some(path) = &args.csv {
                emit::write_sieve_csv(path, &report.rows)?;
            }
            println!("{}", to_line(&report)?);
            Ok(EXIT_OK)
        }
        SieveCmd::PntCheck(args) => {
            let check = sieve::pnt_check(args.q, args.k, args.a)?;
            println!("{}", to_line(&check)?);
            Ok(EXIT_OK)
        }
    }
}

fn cmd_approx(cmd: ApproxCmd, argv: Vec<String>) -> Result<i32> {
    match cmd {
        ApproxCmd::Pairs(args) => {
            let record = TupleRecord::new(
                args.k,
                parse::bigint(&args.n)?,
                parse::element_set(&args.set)?,
            )?;
            let pairs = approx::solution_pairs(&record)?;
            let lines: Vec<String> = pairs.iter().map(to_line).collect::<Result<_>>()?;
            Emitter {
                out: args.out,
                argv,
            }
            .emit(&lines, None)?;
            Ok(EXIT_OK)
        }
        ApproxCmd::Height(args) => {
            let alpha = approx::height_of_root(
                &parse::biguint(&args.a1)?,
                &parse::biguint(&args.a2)?,
                args.k,
            )?;
            println!("{}", to_line(&alpha)?);
            Ok(EXIT_OK)
        }
        ApproxCmd::Check(args) => {
            let record = TupleRecord::new(
                args.k,
                parse::bigint(&args.n)?,
                parse::element_set(&args.set)?,
            )?;
            let check = approx::approx_check(&record, args.index)?;
            println!("{}", to_line(&check)?);
            Ok(check_exit(
                check.lem31_holds && check.lem32_holds != Some(false),
            ))
        }
    }
}

fn cmd_bounds(cmd: BoundsCmd) -> Result<i32> {
    match cmd {
        BoundsCmd::Evertse { r, kappa } => {
            let value = bounds::evertse_count(r, kappa)?;
            println!(
                "{}",
                to_line(&json!({
                    "name": "evertse_count",
                    "inputs": {"r": r.to_string(), "kappa": kappa.to_string()},
                    "value": {"real": value},
                    "applicable": true,
                }))?
            );
            Ok(EXIT_OK)
        }
        BoundsCmd::Large { k, refined } => {
            let report = bounds::effective_large_bound(k, refined)?;
            println!("{}", to_line(&report)?);
            Ok(EXIT_OK)
        }
        BoundsCmd::MainTerm { n, k } => {
            let report = bounds::main_term(&parse::bigint(&n)?, k)?;
            println!("{}", to_line(&report)?);
            Ok(EXIT_OK)
        }
        BoundsCmd::Q0 { k } => {
            let report = bounds::q0(k)?;
            println!("{}", to_line(&report)?);
            Ok(EXIT_OK)
        }
        BoundsCmd::Prior { n, k } => {
            let report = bounds::prior_bounds(&parse::bigint(&n)?, k)?;
            println!("{}", to_line(&report)?);
            Ok(EXIT_OK)
        }
        BoundsCmd::Table { n, k } => {
            let n = parse::bigint(&n)?;
            print_bounds_table(&n, k)?;
            Ok(EXIT_OK)
        }
    }
}

fn print_bounds_table(n: &BigInt, k: u64) -> Result<()> {
    println!("| bound | value | applicable | notes |");
    println!("|---|---|---|---|");
    let row = |name: &str, report: dktuple::Result<bounds::BoundReport>| match report {
        Ok(r) => {
            let value = match &r.value {
                bounds::BoundValue::Real(v) => format!("{v}"),
                bounds::BoundValue::Int(v) => format!("{v}"),
                bounds::BoundValue::LnScale(ln) => format!("exp({ln})"),
                bounds::BoundValue::Unavailable => "-".into(),
            };
            let notes = r.reason.unwrap_or_default();
            println!("| {name} | {value} | {} | {notes} |", r.applicable);
        }
        Err(err) => println!("| {name} | - | false | {err} |"),
    };
    row("main_term", bounds::main_term(n, k));
    row(
        "large_element_bound",
        bounds::effective_large_bound(k, false),
    );
    row(
        "large_element_bound (refined)",
        bounds::effective_large_bound(k, true),
    );
    row("prior_bound", bounds::prior_bounds(n, k));
    row("q0", bounds::q0(k));
    match bounds::q_condition(n, k) {
        Ok(ok) => println!("| q_condition (Q > Q0) | {ok} | true |  |"),
        Err(err) => println!("| q_condition (Q > Q0) | - | false | {err} |"),
    }
    Ok(())
}
