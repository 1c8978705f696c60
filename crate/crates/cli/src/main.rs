use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use selmer3::classgroups::{rank_l, DirectRanks, RankValue};
use selmer3::curves::{check_type_ii, good_primes_one_mod_three, CurveTypeI, CurveTypeII};
use selmer3::selmer::{compute_sa, is_k_square, sel3_bound_type_i, selmer_bound_type_i};
use selmer3::sieve::{parse_grid, run_experiment, ExperimentKind, ExperimentRow};
use selmer3::verify::{run_suite_seeded, Suite};
use selmer3::{arith, Error};

#[derive(Parser)]
#[command(name = "selmer3", version, about = "Cubic form counts, class group 3-ranks and Selmer bounds")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a check suite and print one line per check.
    Verify {
        #[arg(long)]
        suite: String,
        /// Seed for the sampled checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare observed counts with predicted constants over a grid.
    Experiment {
        #[arg(long)]
        kind: String,
        /// Comma-separated, increasing; `1e5` style accepted.
        #[arg(long)]
        grid: String,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Accepted for symmetry with `verify`; experiments are exhaustive,
        /// so the output does not depend on it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Local data and Selmer bounds for `y^2 = x^3 + a`, or the Type II
    /// curve `y^2 = x^3 + a(x - b)^2` when `--b` is given.
    Curve {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<i64>,
    },
}

enum Failure {
    Check,
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) => Failure::Config(e.to_string()),
            other => {
                eprintln!("error: {other}");
                Failure::Check
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::Verify { suite, seed } => verify(&suite, seed),
        Command::Experiment { kind, grid, out, seed: _ } => experiment(&kind, &grid, out),
        Command::Curve { a, b } => curve(a, b),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn verify(suite: &str, seed: u64) -> Result<(), Failure> {
    let suite: Suite = suite.parse()?;
    let report = run_suite_seeded(suite, seed);
    for line in &report.checks {
        println!("{line}");
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn render(rows: &[ExperimentRow]) -> String {
    let mut s = String::from(ExperimentRow::CSV_HEADER);
    s.push('\n');
    for row in rows {
        s.push_str(&row.csv_line());
        s.push('\n');
    }
    s
}

fn experiment(kind: &str, grid: &str, out: Option<PathBuf>) -> Result<(), Failure> {
    let kind: ExperimentKind = kind.parse()?;
    let grid = parse_grid(grid)?;
    let csv = render(&run_experiment(kind, &grid)?);
    match out {
        None => {
            print!("{csv}");
            Ok(())
        }
        Some(path) => write_atomically(&path, &csv).map_err(|e| Failure::Config(format!("{}: {e}", path.display()))),
    }
}

/// Writes next to the target and renames, so readers never see a partial file.
fn write_atomically(path: &std::path::Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn list<T: std::fmt::Display>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn curve(a: i64, b: Option<i64>) -> Result<(), Failure> {
    match b {
        Some(b) => curve_type_ii(a, b),
        None => curve_type_i(a),
    }
}

fn curve_type_i(a: i64) -> Result<(), Failure> {
    let curve = CurveTypeI::new(a)?;
    let sa = compute_sa(a)?;
    let ranks = DirectRanks::new();
    let sign = if a < 0 { '-' } else { '+' };
    println!("curve: y^2 = x^3 {sign} {}", a.unsigned_abs());
    println!("discriminant: {}", curve.discriminant());
    println!("S_a: {}", list(&sa.places));
    println!("S_a(Q): {}", list(&sa.sa_q));
    println!("T_3(Q): {}", list(&sa.t3.into_iter().collect::<Vec<_>>()));
    if is_k_square(a) {
        println!("r3(L): n/a (a is a square in K)");
    } else {
        match rank_l(arith::squarefree_kernel(a), &ranks) {
            Ok(RankValue::Exact(r)) => println!("r3(L): {r}"),
            Ok(RankValue::Bracket { lower, upper }) => println!("r3(L): in [{lower}, {upper}]"),
            Err(e) => println!("r3(L): unsupported ({e})"),
        }
    }
    match selmer_bound_type_i(a, &ranks) {
        Ok(b) => println!("selmer bound: {} ({}, {})", b.mode, b.lower, b.upper),
        Err(e) => println!("selmer bound: unsupported ({e})"),
    }
    match sel3_bound_type_i(a, &ranks) {
        Ok(Some(n)) => println!("sel3 bound: <= {n}"),
        Ok(None) => println!("sel3 bound: no certificate"),
        Err(e) => println!("sel3 bound: unsupported ({e})"),
    }
    Ok(())
}

/// `y^2 = x^3 + a(x - b)^2` with signs folded in.
fn type_ii_equation(a: i64, b: i64) -> String {
    let sign = if a < 0 { '-' } else { '+' };
    let shift = if b < 0 { format!("x + {}", -b) } else { format!("x - {b}") };
    format!("y^2 = x^3 {sign} {}({shift})^2", a.unsigned_abs())
}

fn curve_type_ii(a: i64, b: i64) -> Result<(), Failure> {
    let curve = CurveTypeII::new(a, b)?;
    println!("curve: {}", type_ii_equation(a, b));
    println!("discriminant: {}", curve.discriminant());
    println!("isogenous curve: {}", type_ii_equation(-27 * a, curve.d()));
    let primes = good_primes_one_mod_three(&curve.discriminant(), 20);
    let mut failed = Vec::new();
    for &p in &primes {
        if !check_type_ii(curve, p)?.passed() {
            failed.push(p);
        }
    }
    println!(
        "isogeny check over {} primes up to {}: {}",
        primes.len(),
        primes.last().copied().unwrap_or(0),
        if failed.is_empty() { "pass".to_string() } else { format!("fail at {failed:?}") }
    );
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
