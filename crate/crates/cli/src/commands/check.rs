use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sylave::certify::{check_all, check_lem_2_4_flat, falsify_thm_2_1, ConditionId, FalsifierConfig};
use sylave::model::reformulate;
use sylave::{Certificate64, Instance64, Verdict};

use crate::{CliError, InstanceFile};

#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    pub json: bool,
    /// Run the sampled falsifier with this many random samples.
    pub sample_21: Option<usize>,
    pub seed: u64,
}

/// The matrix-form certificates, the flattened one when the flattened
/// system fits, and the falsifier when requested.
pub fn certificates(inst: &Instance64, opts: &CheckOptions) -> Vec<Certificate64> {
    let mut certs = check_all(inst).to_vec();
    if let Ok(form) = reformulate(inst) {
        certs.push(check_lem_2_4_flat(&form));
    }
    if let Some(samples) = opts.sample_21 {
        let config = FalsifierConfig { samples, seed: opts.seed, ..FalsifierConfig::default() };
        certs.push(falsify_thm_2_1(inst, &config));
    }
    certs
}

/// 0 if any sufficient condition passes, 1 if all fail, 2 otherwise. The
/// falsifier can only refute, so it does not take part.
pub fn check_exit_code(certs: &[Certificate64]) -> u8 {
    let verdicts: Vec<Verdict> = certs
        .iter()
        .filter(|c| c.condition_id != ConditionId::Thm21Sampled)
        .map(|c| c.verdict)
        .collect();
    if verdicts.contains(&Verdict::Pass) {
        0
    } else if !verdicts.is_empty() && verdicts.iter().all(|&v| v == Verdict::Fail) {
        1
    } else {
        2
    }
}

#[derive(Serialize)]
struct Report<'a> {
    certificates: &'a [Certificate64],
    exit_code: u8,
}

pub fn check(path: &Path, opts: &CheckOptions, out: &mut dyn Write) -> Result<u8, CliError> {
    let file = InstanceFile::read(path)?;
    let certs = certificates(&file.instance, opts);
    let code = check_exit_code(&certs);
    if opts.json {
        serde_json::to_writer_pretty(&mut *out, &Report { certificates: &certs, exit_code: code })
            .map_err(std::io::Error::from)?;
        writeln!(out)?;
        return Ok(code);
    }
    writeln!(out, "{:<16} {:<12} {:>24} {:>24} {:>24}", "condition", "verdict", "lhs", "rhs", "margin")?;
    for c in &certs {
        writeln!(
            out,
            "{:<16} {:<12} {:>24} {:>24} {:>24}",
            c.condition_id.as_str(),
            c.verdict.as_str(),
            fmt_num(c.lhs),
            fmt_num(c.rhs),
            fmt_num(c.margin)
        )?;
    }
    for c in &certs {
        writeln!(out, "  {}: {}", c.condition_id, c.notes)?;
        if let Some(w) = &c.witness {
            writeln!(out, "  {} witness lambda: {w:?}", c.condition_id)?;
        }
    }
    Ok(code)
}

fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "n/a".into()
    } else {
        format!("{x:?}")
    }
}
