//! `trunczeta`: counts, tables, verification and constants for subrings of
//! `Z[t]/(t^4)`.
//!
//! Exit status: 0 on success, 1 on a failed verification or internal error,
//! 2 on a usage error, 3 when a work budget is exceeded.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use trunczeta::budget::Budget;
use trunczeta::closed_forms::{self, Form, Parity};
use trunczeta::dirichlet::{self, IndexFilter, Kind};
use trunczeta::enumerate::{self, CountTable, Method};
use trunczeta::verify::{self, Suite};
use trunczeta::Error;

#[derive(Parser)]
#[command(
    name = "trunczeta",
    version,
    about = "Subring counts and local zeta factors of Z[t]/(t^4)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number of subrings (or cocyclic subrings) of index p^m.
    Count {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        exponent: u32,
        #[arg(long)]
        cocyclic: bool,
        #[arg(long, value_enum, default_value = "enum")]
        method: MethodArg,
    },
    /// Counts for m = 0..=max-exponent as JSON or CSV.
    Table {
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        max_exponent: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long, value_enum, default_value = "enum")]
        method: MethodArg,
    },
    /// Run verification suites; nonzero exit on any failed check.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Coefficients x^0..=x^terms of a local factor.
    Zeta {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        terms: usize,
    },
    /// Growth constant C or D with its truncation tail bound.
    Constants {
        #[arg(long, value_enum)]
        which: ConstantArg,
        #[arg(long, default_value_t = 100_000)]
        truncation: u64,
    },
    /// Partial sums s(B) and s(B)/B^(3/2) at each power of ten up to B.
    Asymptotics {
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        cocyclic: bool,
        #[arg(long)]
        odd_only: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Enum,
    Cells,
    Formula,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Enum => Method::Enumeration,
            MethodArg::Cells => Method::Cells,
            MethodArg::Formula => Method::Formula,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Lemma,
    Volumes,
    Formulas,
    Identities,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Lemma => Suite::Lemma,
            SuiteArg::Volumes => Suite::Volumes,
            SuiteArg::Formulas => Suite::Formulas,
            SuiteArg::Identities => Suite::Identities,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Subring,
    Cocyclic,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstantArg {
    #[value(name = "C", alias = "c")]
    C,
    #[value(name = "D", alias = "d")]
    D,
}

enum Failure {
    Usage(String),
    Budget(String),
    Verification,
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotPrime(_) | Error::Domain(_) | Error::InvalidCell { .. } => {
                Failure::Usage(e.to_string())
            }
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    prime: u64,
    m: u32,
    subrings: String,
    cocyclic: String,
    method: &'a str,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let budget = Budget::from_env()?;
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Count {
            prime,
            exponent,
            cocyclic,
            method,
        } => {
            let method = Method::from(method);
            let n = enumerate::count_with_budget(prime, exponent, cocyclic, method, &budget)?;
            writeln!(out, "{n} ({method})")?;
        }
        Command::Table {
            prime,
            max_exponent,
            format,
            method,
        } => {
            let table = CountTable::build(prime, max_exponent, method.into(), &budget)?;
            match format {
                Format::Json => {
                    let s = serde_json::to_string_pretty(&table)
                        .map_err(|e| Failure::Internal(e.to_string()))?;
                    writeln!(out, "{s}")?;
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    for r in &table.rows {
                        w.serialize(CsvRow {
                            prime: table.prime,
                            m: r.m,
                            subrings: r.subrings.to_string(),
                            cocyclic: r.cocyclic.to_string(),
                            method: r.method.as_str(),
                        })
                        .map_err(|e| Failure::Internal(e.to_string()))?;
                    }
                    w.flush()?;
                }
            }
        }
        Command::Verify { suite, json } => {
            let report = verify::run(suite.into(), &budget);
            if json {
                let s = serde_json::to_string_pretty(&report)
                    .map_err(|e| Failure::Internal(e.to_string()))?;
                writeln!(out, "{s}")?;
            } else {
                writeln!(out, "{report}")?;
            }
            if !report.passed() {
                return Err(Failure::Verification);
            }
        }
        Command::Zeta {
            which,
            prime,
            terms,
        } => {
            trunczeta::require_prime(prime)?;
            let parity = Parity::of(prime);
            let f = match (which, parity) {
                (Which::Subring, Parity::Odd) => closed_forms::subring_local_factor(Parity::Odd),
                (Which::Subring, Parity::Two) => closed_forms::subring_two_case_sum(),
                (Which::Cocyclic, _) => closed_forms::cocyclic_local_factor(parity, Form::Theorem)?,
            };
            if matches!((which, parity), (Which::Cocyclic, Parity::Two)) {
                eprintln!("note: the displayed p = 2 cocyclic factor departs from enumeration from x^6 on");
            }
            let s: Vec<String> = f
                .series(prime, terms)
                .iter()
                .map(|c| c.to_string())
                .collect();
            writeln!(out, "{}", s.join(","))?;
        }
        Command::Constants { which, truncation } => {
            let est = match which {
                ConstantArg::C => dirichlet::constant_c(truncation)?,
                ConstantArg::D => dirichlet::constant_d(truncation)?,
            };
            writeln!(out, "value {:.12}", est.value)?;
            writeln!(out, "tail_bound {:.3e}", est.tail_bound)?;
            writeln!(out, "prime_bound {}", est.prime_bound)?;
            writeln!(out, "plain_truncated_product_value {:.12}", est.plain_value)?;
        }
        Command::Asymptotics {
            bound,
            cocyclic,
            odd_only,
        } => {
            let kind = if cocyclic {
                Kind::Cocyclic
            } else {
                Kind::Subring
            };
            let filter = if odd_only {
                IndexFilter::Odd
            } else {
                IndexFilter::All
            };
            let mut bounds: Vec<u64> = std::iter::successors(Some(1u64), |b| b.checked_mul(10))
                .take_while(|&b| b < bound)
                .collect();
            bounds.push(bound);
            let rows = dirichlet::growth_diagnostic(&bounds, kind, filter, &budget)?;
            let reference = if cocyclic {
                dirichlet::constant_d(100_000)?
            } else {
                dirichlet::constant_c(100_000)?
            };
            writeln!(out, "B,s(B),s(B)/B^1.5")?;
            for r in rows {
                writeln!(out, "{},{},{:.6}", r.bound, r.sum, r.ratio)?;
            }
            writeln!(
                out,
                "reference constant {} = {:.6}",
                if cocyclic { "D" } else { "C" },
                reference.value
            )?;
        }
    }
    Ok(())
}
