//! Command-line front end. [`run`] parses arguments, dispatches, and maps
//! outcomes to exit codes: 0 success, 1 usage or input error, 2 a table or
//! search check that did not confirm.

mod commands;
mod output;
mod parse;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::catalog::TableCheck;
pub use output::{Format, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "padic-lds", version, about = "Polynomial low-discrepancy sequences in the p-adic integers")]
pub struct Cli {
    /// Output format (each subcommand has its own default)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output to PATH instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Worker threads for search, scan and table verification
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=1024))]
    workers: u32,

    #[command(subcommand)]
    command: Command,
}

/// Which sequence to generate: a polynomial `f(n)` or `n*a + b`.
#[derive(Debug, Args)]
struct SequenceArgs {
    /// Polynomial in x, e.g. "x^3 + x", "2*x^5 - x" or "[1, 0, 1, 0]"
    #[arg(allow_hyphen_values = true, required_unless_present = "linear", conflicts_with = "linear")]
    poly: Option<String>,

    /// The linear sequence n*A + B
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true, value_parser = parse::bigint)]
    linear: Option<Vec<BigInt>>,

    /// p-adic precision K (digits); with --linear, A and B are taken mod p^K
    #[arg(long = "K", visible_alias = "k", value_parser = clap::value_parser!(u32).range(1..=100_000))]
    precision: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether (f(n)) is low-discrepancy in Z_p (JSON)
    Classify {
        #[arg(long, value_parser = parse::prime)]
        p: u64,
        /// Polynomial in x
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },

    /// Print the first N terms (CSV columns: n, then value | d0..d{K-1} | monna, monna_approx)
    Generate {
        #[arg(long, value_parser = parse::prime)]
        p: u64,
        #[command(flatten)]
        sequence: SequenceArgs,
        /// Number of terms
        #[arg(long = "N", visible_alias = "n")]
        n: usize,
        #[arg(long, value_enum, default_value_t = GenerateMode::Integers)]
        mode: GenerateMode,
    },

    /// Exact p-adic discrepancy D_N
    /// (CSV columns: N, D_N, N_times_D_N, witness_level, witness_residue, D_N_approx)
    Discrepancy {
        #[arg(long, value_parser = parse::prime)]
        p: u64,
        #[command(flatten)]
        sequence: SequenceArgs,
        /// N schedule: "a..b", "a,b,c" or "pk:k1..k2", comma-combinable
        #[arg(long = "N", visible_alias = "n")]
        schedule: String,
    },

    /// Pair-correlation statistic F_{N,alpha,p}(s)
    /// (CSV columns: N, s, level, pairs, F, F_approx)
    Paircorr {
        #[arg(long, value_parser = parse::prime)]
        p: u64,
        #[command(flatten)]
        sequence: SequenceArgs,
        /// Exponent u/v with 0 < alpha <= 1
        #[arg(long, default_value = "1/1")]
        alpha: String,
        /// Scales s > 0, comma-separated or repeated
        #[arg(long, required = true, value_delimiter = ',', value_parser = parse::rational)]
        s: Vec<BigRational>,
        #[arg(long = "N", visible_alias = "n")]
        schedule: String,
    },

    /// Check the permutation-polynomial tables (exit 2 on a failed row)
    /// (CSV columns: row, p, polynomial, reading, parameters, passed)
    VerifyTables {
        #[arg(long, value_enum)]
        which: TableCheck,
        /// Only rows admitting this prime
        #[arg(long, value_parser = parse::prime)]
        p: Option<u64>,
        /// Print the encoded tables as JSON and exit
        #[arg(long)]
        dump: bool,
    },

    /// Exhaustive low-discrepancy search compared against the tables (exit 2 on unexplained hits)
    /// (CSV columns: polynomial, degree, category, detail)
    Search {
        #[arg(long, value_parser = parse::prime)]
        p: u64,
        /// Maximum degree
        #[arg(long)]
        degree: usize,
        /// Allow any nonzero leading coefficient
        #[arg(long)]
        no_monic: bool,
        /// Allow any constant term
        #[arg(long)]
        any_constant: bool,
        /// Require a nonzero linear coefficient
        #[arg(long)]
        nonzero_linear: bool,
        /// Maximum number of candidates
        #[arg(long, default_value_t = crate::permcheck::DEFAULT_SCAN_CAP)]
        cap: u64,
    },

    /// p-adic versus real discrepancy of the Monna images
    /// (CSV columns: N, delta_N, d_N, upper_bound_approx, lower, upper, holds, N_d_over_ln_N_approx)
    Bridge {
        #[arg(long, value_parser = parse::prime)]
        p: u64,
        #[command(flatten)]
        sequence: SequenceArgs,
        #[arg(long = "N", visible_alias = "n")]
        schedule: String,
    },

    /// Polynomials on which the associated-polynomial verdict disagrees with enumeration
    /// (CSV columns: polynomial, g1, g2, ground_truth, associated, modulus, x, y, value)
    Scan {
        #[arg(long, value_parser = parse::prime)]
        p: u64,
        #[arg(long)]
        degree: usize,
        /// Coefficient range a..b (exclusive end), default 0..p
        #[arg(long, allow_hyphen_values = true)]
        coefficients: Option<String>,
        #[arg(long, default_value_t = crate::permcheck::DEFAULT_SCAN_CAP)]
        cap: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum GenerateMode {
    Digits,
    Monna,
    Integers,
}

/// What a subcommand concluded.
pub(crate) enum Outcome {
    Done,
    /// Ran to completion but a check did not confirm.
    Unconfirmed,
}

pub(crate) type CommandResult = std::result::Result<Outcome, String>;

/// Runs the CLI on `args` (program name first), writing results to `stdout`
/// (unless `--out` is given) and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };

    let mut file;
    let sink: &mut dyn Write = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => {
                file = BufWriter::new(f);
                &mut file
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot create {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
        None => stdout,
    };

    let result = commands::dispatch(&cli, sink).and_then(|outcome| {
        sink.flush().map_err(|e| format!("cannot write output: {e}"))?;
        Ok(outcome)
    });
    match result {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::Unconfirmed) => EXIT_VERIFICATION,
        Err(message) => {
            let _ = writeln!(stderr, "error: {message}");
            EXIT_USAGE
        }
    }
}
