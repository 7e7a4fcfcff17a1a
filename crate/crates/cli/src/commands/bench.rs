use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sylave::certify::{check_thm_2_2, check_thm_2_3, check_thm_2_4};
use sylave::gen::{generate, GenSpec};
use sylave::model::reformulate;
use sylave::oracle::{decide, OracleConfig};

use crate::CliError;

pub const BENCH_HEADER: &str = "instance_id,m,n,p,q,thm22_verdict,thm22_margin,thm23_verdict,thm23_margin,\
thm24_verdict,thm24_margin,oracle_verdict,check_micros_22,check_micros_23,check_micros_24,oracle_micros";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance_id: usize,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub thm22_verdict: String,
    pub thm22_margin: f64,
    pub thm23_verdict: String,
    pub thm23_margin: f64,
    pub thm24_verdict: String,
    pub thm24_margin: f64,
    /// Oracle verdict, or `SKIPPED` when `k` is above the cap or the
    /// flattened system is not square.
    pub oracle_verdict: String,
    pub check_micros_22: f64,
    pub check_micros_23: f64,
    pub check_micros_24: f64,
    pub oracle_micros: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub shapes: Vec<[usize; 4]>,
    pub count: usize,
    pub seed: u64,
    pub margin: Option<f64>,
    pub oracle_cap: usize,
}

/// `d` is shorthand for `(d, d, d, d)`; otherwise `MxNxPxQ`.
pub fn parse_shape(s: &str) -> Result<[usize; 4], CliError> {
    let bad = || CliError::Usage(format!("bad sweep entry {s:?}: expected d or MxNxPxQ with positive integers"));
    let parts: Vec<usize> = s.trim().split('x').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
    let shape = match parts[..] {
        [d] => [d, d, d, d],
        [m, n, p, q] => [m, n, p, q],
        _ => return Err(bad()),
    };
    if shape.contains(&0) {
        return Err(bad());
    }
    Ok(shape)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSummary {
    pub shape: [usize; 4],
    /// Flattened dimension `n·p`.
    pub k: usize,
    pub median_certifier_micros: f64,
    pub median_oracle_micros: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub rows: Vec<BenchRow>,
    pub shapes: Vec<ShapeSummary>,
    /// Least-squares slope of log(median certifier time) against
    /// log(largest dimension); `None` with fewer than two distinct sizes.
    pub certifier_exponent: Option<f64>,
    /// Least-squares slope of log2(median oracle time) against `k`.
    pub oracle_log2_per_k: Option<f64>,
}

impl BenchSummary {
    pub fn line(&self) -> String {
        let fmt_opt = |x: Option<f64>, digits: usize| x.map_or("n/a".to_string(), |v| format!("{v:.digits$}"));
        let mut parts: Vec<String> = self
            .shapes
            .iter()
            .map(|s| {
                format!(
                    "{}x{}x{}x{} (k={}): certifiers {:.1}us, oracle {}",
                    s.shape[0],
                    s.shape[1],
                    s.shape[2],
                    s.shape[3],
                    s.k,
                    s.median_certifier_micros,
                    s.median_oracle_micros.map_or("skipped".into(), |v| format!("{v:.1}us"))
                )
            })
            .collect();
        let ratios: Vec<String> = self
            .shapes
            .windows(2)
            .map(|w| {
                let cert = w[1].median_certifier_micros / w[0].median_certifier_micros;
                let orc = w[0].median_oracle_micros.zip(w[1].median_oracle_micros).map(|(a, b)| b / a);
                format!("x{cert:.2}/{}", orc.map_or("-".into(), |r| format!("x{r:.2}")))
            })
            .collect();
        parts.push(format!("step ratios (certifiers/oracle): {}", if ratios.is_empty() { "-".into() } else { ratios.join(" ") }));
        parts.push(format!("certifier log-log exponent {}", fmt_opt(self.certifier_exponent, 2)));
        parts.push(format!("oracle log2 growth per unit k {}", fmt_opt(self.oracle_log2_per_k, 2)));
        format!("summary: medians {}", parts.join("; "))
    }
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    Some(if xs.len() % 2 == 1 { xs[mid] } else { (xs[mid - 1] + xs[mid]) / 2.0 })
}

/// Ordinary least-squares slope; `None` when the abscissae are all equal.
pub fn slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}

fn timed<R>(f: impl FnOnce() -> R) -> (R, f64) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed().as_secs_f64() * 1e6)
}

/// Runs the sweep sequentially (so timings do not compete for cores) and
/// writes one CSV row per instance, ordered by `instance_id`.
pub fn bench(opts: &BenchOptions, csv_path: &Path) -> Result<BenchSummary, CliError> {
    let mut rows = Vec::new();
    let mut shapes = Vec::new();
    let config = OracleConfig { det_cap: opts.oracle_cap, ..OracleConfig::default() };
    for &shape in &opts.shapes {
        let [m, n, p, q] = shape;
        let mut cert_times = Vec::new();
        let mut oracle_times = Vec::new();
        for _ in 0..opts.count {
            let id = rows.len();
            let mut spec = GenSpec::new(m, n, p, q, opts.seed.wrapping_add(id as u64));
            spec.margin = opts.margin;
            let inst = generate(&spec).map_err(|e| CliError::Usage(e.to_string()))?;
            let (c22, t22) = timed(|| check_thm_2_2(&inst));
            let (c23, t23) = timed(|| check_thm_2_3(&inst));
            let (c24, t24) = timed(|| check_thm_2_4(&inst));
            cert_times.push(t22 + t23 + t24);
            let k = n * p;
            let (oracle_verdict, oracle_micros) = if m * q == k && k <= opts.oracle_cap {
                let (verdict, t) = timed(|| reformulate(&inst).ok().and_then(|form| decide(&form, &config).ok()));
                match verdict {
                    Some(v) => {
                        oracle_times.push(t);
                        (v.verdict.to_string(), Some(t))
                    }
                    None => ("SKIPPED".to_string(), None),
                }
            } else {
                ("SKIPPED".to_string(), None)
            };
            rows.push(BenchRow {
                instance_id: id,
                m,
                n,
                p,
                q,
                thm22_verdict: c22.verdict.to_string(),
                thm22_margin: c22.margin,
                thm23_verdict: c23.verdict.to_string(),
                thm23_margin: c23.margin,
                thm24_verdict: c24.verdict.to_string(),
                thm24_margin: c24.margin,
                oracle_verdict,
                check_micros_22: t22,
                check_micros_23: t23,
                check_micros_24: t24,
                oracle_micros,
            });
        }
        if let Some(median_certifier_micros) = median(cert_times) {
            shapes.push(ShapeSummary { shape, k: n * p, median_certifier_micros, median_oracle_micros: median(oracle_times) });
        }
    }

    let mut writer = csv::Writer::from_path(csv_path)
        .map_err(|e| CliError::Io { path: csv_path.to_path_buf(), source: e.into() })?;
    let csv_err = |e: csv::Error| CliError::Io { path: csv_path.to_path_buf(), source: e.into() };
    if rows.is_empty() {
        writer.write_record(BENCH_HEADER.split(',')).map_err(csv_err)?;
    }
    for row in &rows {
        writer.serialize(row).map_err(csv_err)?;
    }
    writer.flush().map_err(|source| CliError::Io { path: csv_path.to_path_buf(), source })?;

    let size = |s: &ShapeSummary| *s.shape.iter().max().expect("four dims") as f64;
    let cert_points: Vec<(f64, f64)> = shapes.iter().map(|s| (size(s).ln(), s.median_certifier_micros.ln())).collect();
    let oracle_points: Vec<(f64, f64)> = shapes
        .iter()
        .filter_map(|s| s.median_oracle_micros.map(|t| (s.k as f64, t.log2())))
        .collect();
    Ok(BenchSummary {
        certifier_exponent: slope(&cert_points),
        oracle_log2_per_k: slope(&oracle_points),
        rows,
        shapes,
    })
}
