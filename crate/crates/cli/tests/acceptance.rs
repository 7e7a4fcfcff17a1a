//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use sylave::certify::{check_all, check_thm_2_2, check_thm_2_3, check_thm_2_4, Verdict};
use sylave::gen::{generate, GenSpec};
use sylave::linalg::{kron, singular_extremes, spectral_radius_nonneg, vec};
use sylave::model::{ngave_residual, reformulate, NgaveForm};
use sylave::oracle::{decide, enumerate_solutions, OracleConfig, OracleMethod};
use sylave::rng::SeededRng;
use sylave::solver::{solve_picard, solve_small_exact, PicardConfig};
use sylave::{Instance64, Matrix64, Uniqueness};
use sylave_cli::commands::{bench, BenchOptions};
use sylave_cli::InstanceFile;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

/// Square-coefficient shapes `(m, n, p, q)` with flattened dimension at most 9.
const SHAPES: [(usize, usize, usize, usize); 4] = [(1, 1, 1, 1), (2, 2, 2, 2), (3, 3, 1, 1), (1, 1, 3, 3)];
const PER_SHAPE: usize = 1000;
const MARGINS: [Option<f64>; 8] = [Some(0.2), Some(0.5), Some(0.8), Some(0.95), Some(1.05), Some(1.5), Some(3.0), None];

struct Case {
    inst: Instance64,
    form: NgaveForm<f64>,
}

fn ensemble() -> Vec<Case> {
    let mut cases = Vec::with_capacity(SHAPES.len() * PER_SHAPE);
    for (s, &(m, n, p, q)) in SHAPES.iter().enumerate() {
        for i in 0..PER_SHAPE {
            let mut spec = GenSpec::new(m, n, p, q, (s * 100_000 + i) as u64);
            spec.margin = MARGINS[i % MARGINS.len()];
            let inst = generate(&spec).expect("generation succeeds");
            let form = reformulate(&inst).expect("small flattening");
            cases.push(Case { inst, form });
        }
    }
    cases
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Laplace expansion, independent of the library's LU.
fn cofactor_det(m: &Matrix64) -> f64 {
    let n = m.rows();
    if n == 1 {
        return m.get(0, 0);
    }
    (0..n)
        .map(|j| {
            let minor: Vec<f64> = (1..n)
                .flat_map(|i| (0..n).filter(move |&c| c != j).map(move |c| (i, c)))
                .map(|(i, c)| m.get(i, c))
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * m.get(0, j) * cofactor_det(&Matrix64::from_row_major(n - 1, n - 1, minor).unwrap())
        })
        .sum()
}

fn random(rng: &mut SeededRng, rows: usize, cols: usize) -> Matrix64 {
    Matrix64::from_row_major(rows, cols, (0..rows * cols).map(|_| rng.uniform_pm1()).collect()).unwrap()
}

fn criterion_1(cases: &[Case]) -> Outcome {
    let start = Instant::now();
    let cfg = OracleConfig::default();
    let (mut passes, mut violations) = (0, Vec::new());
    for (i, case) in cases.iter().enumerate() {
        let certs = check_all(&case.inst);
        if certs.iter().any(|c| c.verdict == Verdict::Pass) {
            passes += 1;
            let v = decide(&case.form, &cfg).map_err(|e| e.to_string())?;
            if v.verdict != Uniqueness::Unique {
                violations.push(i);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(violations.is_empty(), || format!("{} certified instances not UNIQUE: {violations:?}", violations.len()))?;
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{} instances, {passes} certified, 0 violations, {secs:.2}s", cases.len()))
}

fn criterion_2(cases: &[Case]) -> Outcome {
    let cfg = OracleConfig::default();
    let mut rng = SeededRng::new(2);
    let (mut pm_ran, mut unique, mut disagreements) = (0, 0, 0);
    for case in cases {
        let v = decide(&case.form, &cfg).map_err(|e| e.to_string())?;
        let vertex = v.method(OracleMethod::VertexDet).and_then(|r| r.verdict());
        let row = v.method(OracleMethod::RowRep).and_then(|r| r.verdict());
        let pm = v.method(OracleMethod::PMatrix).and_then(|r| r.verdict());
        if vertex != row || pm.is_some_and(|p| Some(p) != vertex) || !v.methods_agree {
            disagreements += 1;
        }
        pm_ran += usize::from(pm.is_some());
        if v.verdict != Uniqueness::Unique {
            continue;
        }
        unique += 1;
        let k = case.form.unknowns();
        let plus = case.form.s().add(case.form.t()).unwrap();
        let minus = case.form.s().sub(case.form.t()).unwrap();
        let expected = v.det_range.0.signum();
        for _ in 0..100 {
            // nonnegative diagonals with a positive sum on every row
            let f1: Vec<f64> = (0..k).map(|_| if rng.uniform01() < 0.2 { 0.0 } else { rng.uniform01() }).collect();
            let f2: Vec<f64> =
                f1.iter().map(|&a| if a == 0.0 { 0.05 + rng.uniform01() } else { rng.uniform01() }).collect();
            let combo = plus.scale_rows(&f1).unwrap().add(&minus.scale_rows(&f2).unwrap()).unwrap();
            let det = cofactor_det(&combo);
            ensure(det != 0.0 && det.signum() == expected, || {
                format!("diagonal combination determinant {det:e} against vertex sign {expected}")
            })?;
        }
    }
    ensure(disagreements == 0, || format!("{disagreements} method disagreements"))?;
    Ok(format!(
        "{} instances, 0 disagreements ({pm_ran} with P_MATRIX), sign test on {unique} UNIQUE instances x 100 pairs",
        cases.len()
    ))
}

fn criterion_3(cases: &[Case]) -> Outcome {
    let cfg = OracleConfig::default();
    let mut rng = SeededRng::new(3);
    let mut unique = 0;
    for (i, case) in cases.iter().enumerate() {
        if decide(&case.form, &cfg).map_err(|e| e.to_string())?.verdict != Uniqueness::Unique {
            continue;
        }
        unique += 1;
        let k = case.form.unknowns();
        for _ in 0..25 {
            let f = random(&mut rng, k, 1);
            let set = enumerate_solutions(&case.form, &f, &cfg).map_err(|e| e.to_string())?;
            ensure(set.is_unique(), || format!("case {i}: {} solutions, family {}", set.solutions.len(), set.family_detected))?;
            let r = ngave_residual(&case.form.with_rhs(f).unwrap(), &set.solutions[0]).unwrap();
            ensure(r <= 1e-9, || format!("case {i}: residual {r:e}"))?;
        }
    }
    let one = Matrix64::scalar(1.0).unwrap();
    let zero = Matrix64::scalar(0.0).unwrap();
    let degenerate = NgaveForm::new(one.clone(), one, zero.clone()).unwrap();
    let set = enumerate_solutions(&degenerate, &zero, &cfg).map_err(|e| e.to_string())?;
    ensure(set.family_detected && !set.is_unique(), || "S=T=[1], f=0: family not detected".into())?;
    Ok(format!("{unique} UNIQUE instances x 25 rhs each have exactly one solution; S=T=[1] family detected"))
}

fn criterion_4() -> Outcome {
    let shapes = [(1, 1, 1, 1), (2, 2, 2, 2), (3, 3, 3, 3), (4, 4, 1, 1), (2, 2, 4, 4), (5, 5, 5, 5)];
    let cfg = OracleConfig::default();
    let mut compared = 0;
    let mut worst_rate_gap = f64::NEG_INFINITY;
    for i in 0..200u64 {
        let (m, n, p, q) = shapes[i as usize % shapes.len()];
        let ratio = 0.05 + 0.75 * (i as f64 / 199.0);
        let inst = generate(&GenSpec::new(m, n, p, q, 40_000 + i).with_margin(ratio)).map_err(|e| e.to_string())?;
        let cert = check_thm_2_4(&inst);
        ensure(cert.ratio() <= 0.8 + 1e-9, || format!("seed {}: ratio {}", 40_000 + i, cert.ratio()))?;
        let report = solve_picard(&inst, None, &PicardConfig::default()).map_err(|e| e.to_string())?;
        ensure(report.converged && report.final_residual <= 1e-10, || {
            format!("seed {}: residual {:e}", 40_000 + i, report.final_residual)
        })?;
        ensure(report.rate_estimate <= cert.ratio() + 0.05, || {
            format!("seed {}: rate {} vs ratio {}", 40_000 + i, report.rate_estimate, cert.ratio())
        })?;
        worst_rate_gap = worst_rate_gap.max(report.rate_estimate - cert.ratio());
        if n * p <= 16 {
            let exact = solve_small_exact(&inst, &cfg).map_err(|e| e.to_string())?;
            let diff = exact.x.sub(&report.x).unwrap().max_abs();
            ensure(diff <= 1e-8, || format!("seed {}: exact vs iterative differ by {diff:e}", 40_000 + i))?;
            compared += 1;
        }
    }
    Ok(format!(
        "200 instances converged, max(rate - ratio) = {worst_rate_gap:.3}, {compared} matched the exact solver"
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = SeededRng::new(5);
    let dim = |rng: &mut SeededRng| 1 + (rng.next_u64() % 3) as usize;
    let (mut worst_vec, mut worst_sigma, mut worst_rho) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..500 {
        let (r, s, t, u) = (dim(&mut rng), dim(&mut rng), dim(&mut rng), dim(&mut rng));
        let (a, x, b) = (random(&mut rng, r, s), random(&mut rng, s, t), random(&mut rng, t, u));
        let lhs = vec(&a.matmul(&x).unwrap().matmul(&b).unwrap());
        let rhs = kron(&b.transpose(), &a).unwrap().matmul(&vec(&x)).unwrap();
        worst_vec = worst_vec.max(lhs.sub(&rhs).unwrap().max_abs());

        let (m, n) = (random(&mut rng, r, s), random(&mut rng, t, u));
        let k = singular_extremes(&kron(&m, &n).unwrap()).sigma_max;
        worst_sigma = worst_sigma.max((k - singular_extremes(&m).sigma_max * singular_extremes(&n).sigma_max).abs());

        let abs = |x: Matrix64| x.map(f64::abs);
        let (m, n) = (abs(random(&mut rng, r, r)), abs(random(&mut rng, t, t)));
        let rho = |x: &Matrix64| spectral_radius_nonneg(x).map_err(|e| e.to_string());
        worst_rho = worst_rho.max((rho(&kron(&m, &n).unwrap())? - rho(&m)? * rho(&n)?).abs());
    }
    ensure(worst_vec <= 1e-10, || format!("vec identity off by {worst_vec:e}"))?;
    ensure(worst_sigma <= 1e-8, || format!("sigma1 identity off by {worst_sigma:e}"))?;
    ensure(worst_rho <= 1e-8, || format!("rho identity off by {worst_rho:e}"))?;
    Ok(format!(
        "500 draws each: vec {worst_vec:.1e}, sigma1 {worst_sigma:.1e}, rho {worst_rho:.1e} (max abs errors)"
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = SeededRng::new(6);
    let mut tightest = f64::INFINITY;
    for i in 0..1000 {
        let n = 1 + i % 5;
        let (m, e) = (random(&mut rng, n, n), random(&mut rng, n, n).scale(rng.uniform01()));
        let lhs = singular_extremes(&m.add(&e).unwrap()).sigma_min;
        let bound = singular_extremes(&m).sigma_min - singular_extremes(&e).sigma_max;
        tightest = tightest.min(lhs - bound);
        ensure(lhs >= bound - 1e-10, || format!("pair {i}: {lhs} < {bound}"))?;
    }
    Ok(format!("1000 pairs, smallest slack {tightest:.2e}"))
}

fn criterion_7() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let cfg = OracleConfig::default();
    let mut seen = Vec::new();
    for (name, want22, want23) in
        [("pass22_fail23.json", Verdict::Pass, Verdict::Fail), ("pass23_fail22.json", Verdict::Fail, Verdict::Pass)]
    {
        let file = InstanceFile::read(&dir.join(name)).map_err(|e| e.to_string())?;
        let (c22, c23) = (check_thm_2_2(&file.instance), check_thm_2_3(&file.instance));
        ensure(c22.verdict == want22 && c23.verdict == want23, || {
            format!("{name}: got {} / {}", c22.verdict, c23.verdict)
        })?;
        let form = reformulate(&file.instance).map_err(|e| e.to_string())?;
        let v = decide(&form, &cfg).map_err(|e| e.to_string())?;
        ensure(v.verdict == Uniqueness::Unique, || format!("{name}: oracle says {}", v.verdict))?;
        let spec = file.genspec.ok_or_else(|| format!("{name}: no genspec provenance"))?;
        ensure(generate(&spec).map_err(|e| e.to_string())? == file.instance, || format!("{name}: does not replay"))?;
        seen.push(format!("{name} (seed {})", spec.seed));
    }
    Ok(format!("{}; both oracle UNIQUE", seen.join(", ")))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    // A is d×d and B is 1×1, so k = d and the oracle sweeps 2^d determinants;
    // the larger sizes time the certifiers alone
    let shapes: Vec<[usize; 4]> = (1..=11).chain([16, 24, 32, 48, 64]).map(|d| [d, d, 1, 1]).collect();
    let opts = BenchOptions { shapes, count: 10, seed: 8, margin: Some(0.9), oracle_cap: 11 };
    let summary = bench(&opts, &dir.path().join("bench.csv")).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let exponent = summary.certifier_exponent.ok_or("no certifier fit")?;
    let growth = summary.oracle_log2_per_k.ok_or("no oracle fit")?;
    let first = summary.shapes.first().and_then(|s| s.median_oracle_micros).ok_or("no oracle timing")?;
    let last = summary.shapes.iter().rev().find_map(|s| s.median_oracle_micros).ok_or("no oracle timing")?;
    ensure(exponent <= 4.0, || format!("certifier fit exponent {exponent:.2}"))?;
    // 2^k determinants: at least a doubling per unit of k
    ensure(growth >= 0.9, || format!("oracle log2 growth per k only {growth:.2}"))?;
    ensure(secs < 300.0, || format!("sweep took {secs:.0}s"))?;
    Ok(format!(
        "certifier exponent {exponent:.2}, oracle log2 growth {growth:.2}/k (k=1: {first:.0}us, k=11: {last:.0}us), {secs:.1}s"
    ))
}

fn criterion_9() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_sylave");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |args: &[&str]| Command::new(bin).args(args).output().map_err(|e| e.to_string());
    let mut outputs = Vec::new();
    for pass in ["a", "b"] {
        let out = dir.path().join(pass);
        let out_str = out.to_str().unwrap();
        let gen = run(&["gen", "--dims", "2", "2", "2", "2", "--seed", "99", "--margin", "0.9", "--count", "20", "--out", out_str])?;
        ensure(gen.status.code() == Some(0), || "gen failed".into())?;
        let mut files = Vec::new();
        let mut verdicts = Vec::new();
        for i in 0..20 {
            let path = sylave_cli::file::instance_path(&out, 99, i);
            files.push(std::fs::read(&path).map_err(|e| e.to_string())?);
            let p = path.to_str().unwrap();
            let check = run(&["check", "--json", "--sample-21", "64", p])?;
            let oracle = run(&["oracle", "--json", p])?;
            verdicts.push((check.stdout, check.status.code(), oracle.stdout, oracle.status.code()));
        }
        outputs.push((files, verdicts));
    }
    ensure(outputs[0].0 == outputs[1].0, || "instance files differ between runs".into())?;
    ensure(outputs[0].1 == outputs[1].1, || "check/oracle reports differ between runs".into())?;
    Ok("20 generated files bit-identical across runs; check and oracle reports identical".into())
}

fn main() -> ExitCode {
    let started = Instant::now();
    let cases = ensemble();
    let criteria: [Criterion<'_>; 9] = [
        ("certifier soundness vs exact oracle", Box::new(|| criterion_1(&cases))),
        ("oracle method agreement and diagonal sign test", Box::new(|| criterion_2(&cases))),
        ("uniqueness semantics", Box::new(|| criterion_3(&cases))),
        ("fixed-point contraction", Box::new(criterion_4)),
        ("Kronecker identities", Box::new(criterion_5)),
        ("sigma_min perturbation bound", Box::new(criterion_6)),
        ("non-implication fixtures", Box::new(criterion_7)),
        ("complexity visibility", Box::new(criterion_8)),
        ("determinism", Box::new(criterion_9)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {}/9 passed in {:.1}s", 9 - failed, started.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
