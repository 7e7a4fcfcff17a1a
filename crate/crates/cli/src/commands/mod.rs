mod bench;
mod check;
mod gen;
mod oracle;
mod solve;

use std::io::Write;

pub use bench::{bench, parse_shape, BenchOptions, BenchRow, BenchSummary, BENCH_HEADER};
pub use check::{check, certificates, check_exit_code, CheckOptions};
pub use gen::{gen, GenOptions};
pub use oracle::{oracle, oracle_exit_code};
pub use solve::{solve, SolveOptions};

use crate::{CliError, Command};

pub(crate) fn dispatch(command: Command, out: &mut dyn Write) -> Result<u8, CliError> {
    match command {
        Command::Check { path, json, sample_21, seed } => check(&path, &CheckOptions { json, sample_21, seed }, out),
        Command::Oracle { path, cap, json } => oracle(&path, cap, json, out),
        Command::Solve { path, tol, max_iter, exact, json } => {
            solve(&path, &SolveOptions { tol, max_iter, exact, json }, out)
        }
        Command::Gen { dims, seed, margin, count, out: dir, dist } => gen(
            &GenOptions { dims: [dims[0], dims[1], dims[2], dims[3]], seed, margin, count, dir, dist: dist.into() },
            out,
        ),
        Command::Bench { dims_sweep, count, seed, margin, out: csv_path, oracle_cap } => {
            let shapes = dims_sweep.iter().map(|s| parse_shape(s)).collect::<Result<Vec<_>, _>>()?;
            let opts = BenchOptions { shapes, count, seed, margin, oracle_cap };
            let summary = bench(&opts, &csv_path)?;
            writeln!(out, "{}", summary.line())?;
            Ok(0)
        }
    }
}
