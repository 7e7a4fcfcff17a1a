#![allow(dead_code)]

use sylave::rng::SeededRng;
use sylave::Matrix64;

pub fn random(rng: &mut SeededRng, rows: usize, cols: usize) -> Matrix64 {
    let data = (0..rows * cols).map(|_| rng.uniform_pm1()).collect();
    Matrix64::from_row_major(rows, cols, data).unwrap()
}

pub fn random_nonneg(rng: &mut SeededRng, rows: usize, cols: usize) -> Matrix64 {
    let data = (0..rows * cols).map(|_| rng.uniform01()).collect();
    Matrix64::from_row_major(rows, cols, data).unwrap()
}

/// Naive triple loop, independent of `Matrix::matmul`.
pub fn naive_mul(a: &Matrix64, b: &Matrix64) -> Matrix64 {
    assert_eq!(a.cols(), b.rows());
    let mut out = vec![0.0; a.rows() * b.cols()];
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            out[i * b.cols() + j] = (0..a.cols()).map(|k| a.get(i, k) * b.get(k, j)).sum();
        }
    }
    Matrix64::from_row_major(a.rows(), b.cols(), out).unwrap()
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &Matrix64) -> f64 {
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

pub fn max_abs_diff(a: &Matrix64, b: &Matrix64) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Frobenius norm by direct summation.
pub fn fro(a: &Matrix64) -> f64 {
    a.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt()
}
