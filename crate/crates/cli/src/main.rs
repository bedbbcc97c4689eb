//! Command line front end for the congruence prime pipeline.
//!
//! Exit codes: 0 on success, 1 when the mathematics rejects the input (a
//! degenerate level, a vector inside the rational old subspace, routes
//! that disagree), 2 when the input itself is unusable (bad flags, bad
//! JSON, non-prime argument to check-prime).  All output is deterministic
//! for a fixed input.

mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;

use oldcong_core::congruence::{self, CongruenceReport, Method};
use oldcong_core::{arith, integral_basis, oldspace_matrix, sturm_bound, Error, Level};

use report::ReportDocument;

/// CLI-level failure: usage problems always exit 2, mathematical
/// rejections map core error variants onto exit 1 or 2.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Flagged(String),
    Math(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Flagged(_) => 1,
            Failure::Math(e) => match e {
                Error::InvalidInput(_)
                | Error::InvalidSymbol { .. }
                | Error::MissingData(_)
                | Error::PrecisionTooSmall { .. } => 2,
                Error::DegenerateLevel { .. }
                | Error::NotANewform { .. }
                | Error::SingularCurve
                | Error::NonMinimalModel { .. }
                | Error::FactorizationIncomplete(_)
                | Error::RouteDisagreement { .. } => 1,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(msg) | Failure::Flagged(msg) => format!("error: {msg}"),
            Failure::Math(e) => format!("error: {e}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "oldcong",
    version,
    about = "Congruence primes between a rational newform and the old subspace"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Sturm bound for weight 2 and level N.
    #[command(name = "sturm-bound")]
    SturmBound {
        /// Level N >= 1.
        level: u64,
    },
    /// Print an integral basis of the weight-2 cusp forms of level N,
    /// one row of q-expansion coefficients a_1 .. a_prec per line.
    #[command(name = "basis")]
    Basis {
        /// Level N >= 1.
        level: u64,
        /// Number of q-expansion coefficients per row (at least the Sturm bound).
        #[arg(long, value_name = "B")]
        prec: usize,
    },
    /// Print the old subspace coefficient matrix of level N together with
    /// the provenance (source level, degeneracy parameter) of each row.
    #[command(name = "oldspace-matrix")]
    OldspaceMatrix {
        /// Level N >= 1.
        level: u64,
    },
    /// Decide whether one prime is a congruence prime for the given curve.
    /// Prints "yes" with a witness combination, or "no".
    #[command(name = "check-prime")]
    CheckPrime {
        /// Path to a curve record (JSON).
        #[arg(long, value_name = "FILE")]
        curve: PathBuf,
        /// The prime to test.
        #[arg(short, value_name = "P")]
        p: u64,
    },
    /// Compute every congruence prime for the given curve.
    #[command(name = "congruence-primes")]
    CongruencePrimes {
        /// Path to a curve record (JSON).
        #[arg(long, value_name = "FILE")]
        curve: PathBuf,
        /// Candidate route: theorem3 (modular degree), smith (saturation
        /// index), or both (run the two and cross-check).
        #[arg(long, value_name = "NAME", default_value = "smith")]
        method: String,
        /// Also write the report as JSON to this file.
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
    },
    /// Print the congruence exponent: the index of the saturation step,
    /// whose prime factors are exactly the congruence primes.
    #[command(name = "congruence-number")]
    CongruenceNumber {
        /// Path to a curve record (JSON).
        #[arg(long, value_name = "FILE")]
        curve: PathBuf,
    },
    /// Check the odd part of the Tamagawa product against the torsion
    /// order and the congruence primes, one verdict per odd prime.
    #[command(name = "check-conjecture1")]
    CheckConjecture1 {
        /// Path to a curve record (JSON).
        #[arg(long, value_name = "FILE")]
        curve: PathBuf,
        /// Also write the full report (verdicts included) as JSON.
        #[arg(long, value_name = "OUT")]
        json: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes early (e.g. piping into
    // `head` or `grep -q`), as line-oriented Unix tools do, instead of
    // panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Err(f) = validate_thread_env().and_then(|()| run(cli.command)) {
        eprintln!("{}", f.message());
        return ExitCode::from(f.exit_code());
    }
    ExitCode::SUCCESS
}

/// OLDCONG_THREADS caps internal parallelism.  The current build evaluates
/// everything sequentially, but the variable is validated so that scripts
/// written against it fail loudly on typos rather than silently.
fn validate_thread_env() -> Result<(), Failure> {
    match std::env::var("OLDCONG_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => match raw.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(()),
            _ => Err(Failure::Usage(format!(
                "OLDCONG_THREADS must be a positive integer, got {raw:?}"
            ))),
        },
    }
}

fn parse_level(n: u64) -> Result<Level, Failure> {
    if n == 0 {
        return Err(Failure::Usage("level must be a positive integer".into()));
    }
    Ok(Level::new(n))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::SturmBound { level } => {
            let level = parse_level(level)?;
            println!("{}", sturm_bound(level));
            Ok(())
        }
        Command::Basis { level, prec } => {
            let level = parse_level(level)?;
            let basis = integral_basis(level, prec)?;
            for i in 0..basis.rows() {
                println!("{}", join_row(&basis, i));
            }
            Ok(())
        }
        Command::OldspaceMatrix { level } => {
            let level = parse_level(level)?;
            let old = oldspace_matrix(level);
            println!("level: {}", old.level().get());
            println!("precision: {}", old.precision());
            println!("rows: {}", old.matrix().rows());
            for (i, (source, d)) in old.provenance().iter().enumerate() {
                println!(
                    "row {i} (source level {}, map {d}): {}",
                    source.get(),
                    join_row(old.matrix(), i)
                );
            }
            Ok(())
        }
        Command::CheckPrime { curve, p } => {
            if !arith::is_prime(p) {
                return Err(Failure::Usage(format!("{p} is not prime")));
            }
            let record = input::load_curve(&curve)?;
            reject_degenerate(record.level)?;
            let old = oldspace_matrix(record.level);
            let vf = record.coefficient_vector(old.precision())?;
            match congruence::is_congruence_prime(&vf, &old, &BigUint::from(p)) {
                Some(witness) => {
                    println!("yes");
                    println!("witness mod {p}: {}", format_witness(witness.components()));
                }
                None => println!("no"),
            }
            Ok(())
        }
        Command::CongruencePrimes { curve, method, json } => {
            let method = Method::from_str(&method).map_err(Failure::Math)?;
            let record = input::load_curve(&curve)?;
            let report = congruence::congruence_primes(&record, method)?;
            // The file is the durable output: write it before printing so
            // it exists even if stdout vanishes mid-report.
            if let Some(path) = json {
                write_json(&path, &ReportDocument::from_report(&report))?;
            }
            print_report(&report);
            Ok(())
        }
        Command::CongruenceNumber { curve } => {
            let record = input::load_curve(&curve)?;
            let report = congruence::congruence_primes(&record, Method::Smith)?;
            let exponent = report
                .congruence_exponent
                .expect("saturation route always reports an exponent");
            println!("{exponent}");
            Ok(())
        }
        Command::CheckConjecture1 { curve, json } => {
            let record = input::load_curve(&curve)?;
            let mut report = congruence::congruence_primes(&record, Method::Smith)?;
            let verdicts = congruence::check_conjecture1(&report, &record)?;
            let all_consistent = verdicts
                .iter()
                .all(|v| v.verdict == congruence::Verdict::Consistent);
            report.conjecture1 = Some(verdicts);
            // The file is the durable output: write it before printing so
            // it exists even if stdout vanishes mid-report.
            if let Some(path) = json {
                write_json(&path, &ReportDocument::from_report(&report))?;
            }
            let verdicts = report.conjecture1.as_deref().unwrap_or_default();
            if verdicts.is_empty() {
                println!("no odd prime divides the Tamagawa product");
            }
            for v in verdicts {
                println!("ell {}: {} ({})", v.ell, v.verdict, v.reason);
            }
            if !all_consistent {
                return Err(Failure::Flagged(
                    "local-factor check flagged a prime for manual inspection".into(),
                ));
            }
            Ok(())
        }
    }
}

fn reject_degenerate(level: Level) -> Result<(), Failure> {
    if sturm_bound(level) == 0 || arith::genus_x0(level) == 0 {
        return Err(Failure::Math(Error::DegenerateLevel {
            level: level.get(),
        }));
    }
    Ok(())
}

fn join_row(m: &oldcong_core::IntMatrix, i: usize) -> String {
    (0..m.cols())
        .map(|j| m[(i, j)].to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn format_witness(components: &[BigUint]) -> String {
    let inner = components
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    format!("({inner})")
}

fn print_report(report: &CongruenceReport) {
    println!("level: {}", report.level.get());
    println!("sturm bound: {}", report.sturm_bound);
    println!("method: {}", report.method);
    if report.candidates.is_empty() {
        println!("candidates: (none)");
    } else {
        println!("candidates:");
        for c in &report.candidates {
            let tags = c
                .provenance
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            println!("  {} [{}]", c.prime, tags);
        }
    }
    if report.congruence_primes.is_empty() {
        println!("congruence primes: (none)");
    } else {
        let list = report
            .congruence_primes
            .iter()
            .map(|p| p.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        println!("congruence primes: {list}");
    }
    if let Some(exponent) = &report.congruence_exponent {
        println!("congruence exponent: {exponent}");
    }
    for (p, witness) in &report.witnesses {
        println!("witness mod {p}: {}", format_witness(witness.components()));
    }
    for note in &report.notes {
        println!("note: {note}");
    }
}

fn write_json(path: &std::path::Path, doc: &ReportDocument) -> Result<(), Failure> {
    std::fs::write(path, doc.to_json())
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}
