mod common;

use common::{fro, naive_mul, random};
use sylave::certify::{
    check_all, check_lem_2_4_flat, check_thm_2_2, check_thm_2_3, check_thm_2_4, falsify_thm_2_1, FalsifierConfig,
};
use sylave::gen::{generate, generate_ensemble, GenSpec};
use sylave::linalg::{kron, vec};
use sylave::model::{ngave_residual, reformulate, residual};
use sylave::oracle::{decide, OracleConfig};
use sylave::rng::SeededRng;
use sylave::{Instance64, Matrix64, Uniqueness, Verdict};

fn m(rows: &[&[f64]]) -> Matrix64 {
    Matrix64::from_rows(rows).unwrap()
}

#[test]
fn residual_forms_agree() {
    let mut rng = SeededRng::new(30);
    for (i, dims) in [(1, 1, 1, 1), (2, 2, 2, 2), (2, 3, 3, 2), (3, 1, 1, 3), (1, 2, 2, 3)].into_iter().enumerate() {
        let (mm, n, p, q) = dims;
        let inst = generate(&GenSpec::new(mm, n, p, q, i as u64)).unwrap();
        let form = reformulate(&inst).unwrap();
        for _ in 0..20 {
            let x = random(&mut rng, n, p);
            let r1 = residual(&inst, &x).unwrap();
            let r2 = ngave_residual(&form, &vec(&x)).unwrap();
            assert!((r1 - r2).abs() <= 1e-12 * (1.0 + fro(inst.f())), "{dims:?}: {r1} vs {r2}");
        }
    }
}

#[test]
fn flattened_operator_matches_matrix_form() {
    let mut rng = SeededRng::new(31);
    let inst = generate(&GenSpec::new(2, 3, 4, 2, 5)).unwrap();
    let form = reformulate(&inst).unwrap();
    let x = random(&mut rng, 3, 4);
    let axb = naive_mul(&naive_mul(inst.a(), &x), inst.b());
    let sx = naive_mul(form.s(), &vec(&x));
    assert!(common::max_abs_diff(&vec(&axb), &sx) < 1e-12);
    assert_eq!(form.s(), &kron(&inst.b().transpose(), inst.a()).unwrap());
}

#[test]
fn residual_of_a_known_solution_is_zero() {
    // A=B=I, C=D=0.5 I, X=[[1,-1],[2,0]]: F = X - 0.5|X|
    let x = m(&[&[1.0, -1.0], &[2.0, 0.0]]);
    let half = m(&[&[0.5, 0.0], &[0.0, 0.5]]);
    let f = m(&[&[0.5, -1.5], &[1.0, 0.0]]);
    let inst = Instance64::new(Matrix64::identity(2), Matrix64::identity(2), half.clone(), Matrix64::identity(2), f).unwrap();
    assert_eq!(residual(&inst, &x).unwrap(), 0.0);
}

fn inv2(a: &Matrix64) -> Matrix64 {
    let d = a.get(0, 0) * a.get(1, 1) - a.get(0, 1) * a.get(1, 0);
    m(&[&[a.get(1, 1) / d, -a.get(0, 1) / d], &[-a.get(1, 0) / d, a.get(0, 0) / d]])
}

fn rho2_abs(a: &Matrix64) -> f64 {
    let (p, q, r, s) = (a.get(0, 0).abs(), a.get(0, 1).abs(), a.get(1, 0).abs(), a.get(1, 1).abs());
    (p + s + ((p - s).powi(2) + 4.0 * q * r).sqrt()) / 2.0
}

fn sigma1_2(a: &Matrix64) -> f64 {
    let t: f64 = a.as_slice().iter().map(|x| x * x).sum();
    let d = a.get(0, 0) * a.get(1, 1) - a.get(0, 1) * a.get(1, 0);
    ((t + (t * t - 4.0 * d * d).max(0.0).sqrt()) / 2.0).sqrt()
}

#[test]
fn certificate_values_match_closed_forms() {
    for inst in generate_ensemble(&GenSpec::new(2, 2, 2, 2, 400).with_margin(0.9), 100).unwrap() {
        let bd = naive_mul(&inv2(inst.b()), inst.d());
        let ca = naive_mul(inst.c(), &inv2(inst.a()));
        let c22 = check_thm_2_2(&inst);
        let expected22 = rho2_abs(&bd) * rho2_abs(&ca);
        assert!((c22.lhs - expected22).abs() <= 1e-8 * expected22.max(1.0));
        let c23 = check_thm_2_3(&inst);
        let expected23 = sigma1_2(&bd) * sigma1_2(&ca);
        assert!((c23.lhs - expected23).abs() <= 1e-8 * expected23.max(1.0));
        for c in [c22, c23] {
            assert_eq!(c.margin, c.rhs - c.lhs);
            assert_eq!(c.verdict, Verdict::from_margin(c.margin, 1e-10));
        }
    }
}

#[test]
fn boundary_and_scalar_examples() {
    let s = |x: f64| Matrix64::scalar(x).unwrap();
    let ones = Instance64::new(s(1.0), s(1.0), s(1.0), s(1.0), s(0.0)).unwrap();
    for c in check_all(&ones) {
        assert_eq!(c.verdict, Verdict::Inconclusive, "{:?}", c.condition_id);
        assert_eq!(c.margin, 0.0);
    }
    let pass = Instance64::new(s(2.0), s(2.0), s(1.0), s(1.0), s(0.0)).unwrap();
    assert_eq!(check_thm_2_2(&pass).lhs, 0.25);
    assert_eq!(check_thm_2_3(&pass).lhs, 0.25);
    let eye = Instance64::new(
        Matrix64::identity(2),
        Matrix64::identity(2),
        Matrix64::identity(2),
        Matrix64::identity(2),
        Matrix64::zeros(2, 2),
    )
    .unwrap();
    let c23 = check_thm_2_3(&eye);
    assert!((c23.lhs - 1.0).abs() < 1e-15);
    assert_eq!(c23.verdict, Verdict::Inconclusive);
}

#[test]
fn singular_coefficients_are_inconclusive() {
    let a = m(&[&[1.0, 2.0], &[2.0, 4.0]]);
    let inst = Instance64::new(a, Matrix64::identity(2), Matrix64::identity(2), Matrix64::identity(2), Matrix64::zeros(2, 2))
        .unwrap();
    for c in [check_thm_2_2(&inst), check_thm_2_3(&inst), falsify_thm_2_1(&inst, &FalsifierConfig::default())] {
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert!(c.notes.contains("requires square nonsingular A,B"), "{}", c.notes);
    }
}

#[test]
fn sigma_bound_scale_covariance() {
    let inst = generate(&GenSpec::new(3, 3, 2, 2, 77)).unwrap();
    let base = check_thm_2_4(&inst);
    let (alpha, beta) = (0.37, 5.5);
    let scaled = inst.with_cd(inst.c().scale(alpha), inst.d().scale(beta)).unwrap();
    let c = check_thm_2_4(&scaled);
    assert!((c.lhs - alpha * beta * base.lhs).abs() <= 1e-12 * c.lhs);
    assert_eq!(c.rhs, base.rhs);
    let (a, b, cc, d, f) = inst.clone().into_parts();
    let scaled_a = Instance64::new(a.scale(3.0), b, cc, d, f).unwrap();
    let c = check_thm_2_4(&scaled_a);
    assert!((c.rhs - 3.0 * base.rhs).abs() <= 1e-12 * c.rhs);
}

#[test]
fn flat_and_matrix_sigma_bounds_agree() {
    for (i, (mm, n, p, q)) in [(1, 1, 1, 1), (2, 2, 2, 2), (3, 3, 1, 1), (1, 1, 3, 3), (3, 3, 2, 2)].into_iter().enumerate() {
        for inst in generate_ensemble(&GenSpec::new(mm, n, p, q, 100 * i as u64), 20).unwrap() {
            let flat = check_lem_2_4_flat(&reformulate(&inst).unwrap());
            let direct = check_thm_2_4(&inst);
            assert!((flat.lhs - direct.lhs).abs() <= 1e-8);
            assert!((flat.rhs - direct.rhs).abs() <= 1e-8);
        }
    }
}

#[test]
fn certifiers_are_sound_against_the_oracle() {
    let margins = [0.3, 0.7, 0.95, 1.1, 2.0];
    let cfg = OracleConfig::default();
    let mut passes = 0;
    for (i, shape) in [(1, 1, 1, 1), (2, 2, 2, 2), (3, 3, 1, 1), (1, 1, 3, 3)].into_iter().enumerate() {
        let (mm, n, p, q) = shape;
        for j in 0..150u64 {
            let spec = GenSpec::new(mm, n, p, q, 1000 * i as u64 + j).with_margin(margins[j as usize % margins.len()]);
            let inst = generate(&spec).unwrap();
            if check_all(&inst).iter().any(|c| c.verdict == Verdict::Pass) {
                passes += 1;
                let verdict = decide(&reformulate(&inst).unwrap(), &cfg).unwrap();
                assert_eq!(verdict.verdict, Uniqueness::Unique, "{shape:?} seed {}", spec.seed);
            }
        }
    }
    assert!(passes > 100, "too few passing certificates to be meaningful: {passes}");
}

#[test]
fn falsifier_finds_violations_only_above_one() {
    let cfg = FalsifierConfig::default();
    let mut found = 0;
    for inst in generate_ensemble(&GenSpec::new(2, 2, 2, 2, 900).with_margin(3.0), 30).unwrap() {
        let c = falsify_thm_2_1(&inst, &cfg);
        assert_ne!(c.verdict, Verdict::Pass);
        if c.verdict == Verdict::Fail {
            found += 1;
            assert!(c.lhs >= 1.0 + 1e-6);
            assert_eq!(c.witness.as_ref().unwrap().len(), 4);
        }
    }
    assert!(found > 0);
    for inst in generate_ensemble(&GenSpec::new(2, 2, 2, 2, 950).with_margin(0.5), 20).unwrap() {
        // the sigma bound dominates every scaled spectral radius
        let c = falsify_thm_2_1(&inst, &cfg);
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert!(c.lhs < 1.0);
    }
}
