use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sylave::oracle::OracleConfig;
use sylave::solver::{solve_picard, solve_small_exact, PicardConfig, SolveError};
use sylave::SolveReport64;

use crate::file::OutMatrix;
use crate::{CliError, InstanceFile};

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub exact: bool,
    pub json: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 10_000, exact: false, json: false }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    #[serde(rename = "X")]
    x: OutMatrix<'a>,
    #[serde(flatten)]
    report: &'a SolveReport64,
}

pub fn solve(path: &Path, opts: &SolveOptions, out: &mut dyn Write) -> Result<u8, CliError> {
    let file = InstanceFile::read(path)?;
    let inst = &file.instance;
    let result = if opts.exact {
        let dims = inst.dims();
        if dims.flat_shape().0 != dims.flat_shape().1 {
            return Err(CliError::Usage("--exact needs a square flattened system (m*q = n*p)".into()));
        }
        solve_small_exact(inst, &OracleConfig::default())
    } else {
        solve_picard(inst, None, &PicardConfig { max_iter: opts.max_iter, residual_tol: opts.tol })
    };
    let report = match result {
        Ok(r) => r,
        Err(SolveError::Oracle(e)) => return Err(CliError::Usage(e.to_string())),
        Err(SolveError::Model(e)) => return Err(CliError::Usage(e.to_string())),
        Err(e @ SolveError::Multiplicity { .. }) => {
            writeln!(out, "no unique solution: {e}")?;
            if let SolveError::Multiplicity { solutions, .. } = &e {
                for (i, x) in solutions.iter().enumerate() {
                    writeln!(out, "solution {i}:")?;
                    write_matrix(out, x.as_slice(), x.cols())?;
                }
            }
            return Ok(1);
        }
        Err(e) => {
            writeln!(out, "solver failed: {e}")?;
            return Ok(1);
        }
    };
    let code = if report.converged { 0 } else { 1 };
    if opts.json {
        serde_json::to_writer_pretty(&mut *out, &Report { x: OutMatrix(&report.x), report: &report })
            .map_err(std::io::Error::from)?;
        writeln!(out)?;
        return Ok(code);
    }
    writeln!(out, "X =")?;
    write_matrix(out, report.x.as_slice(), report.x.cols())?;
    writeln!(out, "iterations: {}", report.iterations)?;
    writeln!(out, "residual: {:e}", report.final_residual)?;
    writeln!(out, "converged: {}", report.converged)?;
    writeln!(out, "rate estimate: {:.6}", report.rate_estimate)?;
    if report.diverged {
        writeln!(out, "diverged: residual grew tenfold over 50 iterations")?;
    }
    match report.certificate_used {
        Some(id) => writeln!(out, "certificate: {id}")?,
        None => writeln!(out, "certificate: none passed")?,
    }
    Ok(code)
}

fn write_matrix(out: &mut dyn Write, data: &[f64], cols: usize) -> std::io::Result<()> {
    let cells: Vec<String> = data.iter().map(|x| format!("{x:?}")).collect();
    let width = cells.iter().map(String::len).max().unwrap_or(0);
    for row in cells.chunks(cols) {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        writeln!(out, "  {}", line.join("  "))?;
    }
    Ok(())
}
