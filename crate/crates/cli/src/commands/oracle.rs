use std::io::Write;
use std::path::Path;

use sylave::model::reformulate;
use sylave::oracle::{decide, MethodOutcome, OracleConfig, OracleError};
use sylave::Uniqueness;

use crate::{CliError, InstanceFile};

pub fn oracle_exit_code(verdict: Uniqueness) -> u8 {
    match verdict {
        Uniqueness::Unique => 0,
        Uniqueness::NotUnique => 1,
        Uniqueness::InconclusiveSingular => 2,
    }
}

pub fn oracle(path: &Path, cap: usize, json: bool, out: &mut dyn Write) -> Result<u8, CliError> {
    let file = InstanceFile::read(path)?;
    let dims = file.instance.dims();
    let (rows, cols) = dims.flat_shape();
    if rows != cols {
        return Err(CliError::Usage(format!("flattened system is {rows}x{cols}; the oracle needs m*q = n*p")));
    }
    if cols > cap {
        return Err(CliError::Usage(format!("flattened dimension k = {cols} exceeds --cap {cap}")));
    }
    let form = reformulate(&file.instance).map_err(|e| CliError::Usage(e.to_string()))?;
    let config = OracleConfig { det_cap: cap, ..OracleConfig::default() };
    let verdict = decide(&form, &config).map_err(|e| match e {
        OracleError::TooLarge { .. } | OracleError::NotSquare { .. } => CliError::Usage(e.to_string()),
        other => CliError::Invalid(other.to_string()),
    })?;
    let code = oracle_exit_code(verdict.verdict);
    if json {
        serde_json::to_writer_pretty(&mut *out, &verdict).map_err(std::io::Error::from)?;
        writeln!(out)?;
        return Ok(code);
    }
    writeln!(out, "verdict: {}", verdict.verdict)?;
    writeln!(out, "k = {cols}, det_range = [{:?}, {:?}]", verdict.det_range.0, verdict.det_range.1)?;
    if let Some(w) = &verdict.witness {
        writeln!(out, "witness vertex (bits set where lambda = 1): {:?}", w.support())?;
    }
    for r in &verdict.method_results {
        let status = match &r.outcome {
            MethodOutcome::Decided(v) => v.to_string(),
            MethodOutcome::Abstained(why) => format!("ABSTAINED ({why})"),
        };
        let range = r.value_range.map(|(lo, hi)| format!(", range [{lo:?}, {hi:?}]")).unwrap_or_default();
        writeln!(out, "  {:<10} {status}, {} evaluated{range}", r.method.as_str(), r.evaluated)?;
    }
    if !verdict.methods_agree {
        writeln!(out, "warning: methods disagree; the vertex sweep is authoritative")?;
    }
    Ok(code)
}
