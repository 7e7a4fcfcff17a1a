//! Command-line front end: instance files, subcommands and exit codes.
//!
//! | command  | 0              | 1               | 2                       | 3           |
//! |----------|----------------|-----------------|-------------------------|-------------|
//! | `check`  | some PASS      | all FAIL        | otherwise               | input error |
//! | `oracle` | UNIQUE         | NOT_UNIQUE      | INCONCLUSIVE_SINGULAR   | input/size  |
//! | `solve`  | converged      | not converged   |                         | input error |
//! | `gen`    | files written  |                 |                         | input error |
//! | `bench`  | CSV written    |                 |                         | input error |

pub mod commands;
pub mod error;
pub mod file;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use sylave::gen::EntryDist;

pub use error::CliError;
pub use file::InstanceFile;

pub const EXIT_INPUT: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "sylave", version, about = "Certify, decide and solve A·X·B − |C·X·D| = F")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the sufficient conditions for unique solvability.
    Check {
        path: PathBuf,
        #[arg(long)]
        json: bool,
        /// Also run the sampled falsifier with this many random samples.
        #[arg(long = "sample-21", value_name = "N")]
        sample_21: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide uniqueness exactly on the flattened system.
    Oracle {
        path: PathBuf,
        /// Largest flattened dimension k to sweep.
        #[arg(long, default_value_t = 20)]
        cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Compute the solution X.
    Solve {
        path: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long = "max-iter", default_value_t = 10_000)]
        max_iter: usize,
        /// Enumerate sign patterns instead of iterating (k ≤ 16).
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        json: bool,
    },
    /// Write seeded random instance files.
    Gen {
        #[arg(long, num_args = 4, value_names = ["M", "N", "P", "Q"], required = true)]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        margin: Option<f64>,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Dist::Uniform)]
        dist: Dist,
    },
    /// Time certifiers and the oracle over a dimension sweep.
    Bench {
        /// Comma-separated sizes: `d` means d×d A and B, `MxNxPxQ` a full shape.
        #[arg(long = "dims-sweep", value_delimiter = ',', required = true)]
        dims_sweep: Vec<String>,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        margin: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Skip the oracle when k exceeds this.
        #[arg(long = "oracle-cap", default_value_t = 16)]
        oracle_cap: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Dist {
    Uniform,
    Gaussian,
}

impl From<Dist> for EntryDist {
    fn from(d: Dist) -> Self {
        match d {
            Dist::Uniform => EntryDist::Uniform,
            Dist::Gaussian => EntryDist::Gaussian,
        }
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// reports to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match commands::dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}
