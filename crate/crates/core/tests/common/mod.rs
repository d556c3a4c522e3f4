//! Shared generators and independent oracles (nalgebra) for the integration tests.
#![allow(dead_code)]

use eigensens_core::{DataMatrix, Divisor, Matrix};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Correlated Gaussian rows with geometrically decaying column scales, so the
/// spectrum is well separated most of the time.
pub fn gaussian_rows(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Vec<Vec<f64>> {
    let mix: Vec<Vec<f64>> = (0..p)
        .map(|_| {
            (0..p)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect()
        })
        .collect();
    (0..n)
        .map(|_| {
            let z: Vec<f64> = (0..p)
                .map(|k| rng.sample::<f64, _>(StandardNormal) * 2f64.powi(-(k as i32)) * 3.0)
                .collect();
            (0..p)
                .map(|c| (0..p).map(|k| z[k] * mix[k][c]).sum::<f64>() + 0.1 * rng.gen::<f64>())
                .collect()
        })
        .collect()
}

pub fn data(rows: &[Vec<f64>]) -> DataMatrix {
    DataMatrix::from_rows(rows).unwrap()
}

pub fn random_data(seed: u64, n: usize, p: usize) -> DataMatrix {
    data(&gaussian_rows(&mut rng(seed), n, p))
}

pub fn rows_of(x: &DataMatrix) -> Vec<Vec<f64>> {
    (0..x.n()).map(|i| x.row(i).to_vec()).collect()
}

/// Rows of `x` with row `i` removed, rebuilt from scratch.
pub fn delete_row(x: &DataMatrix, i: usize) -> DataMatrix {
    let rows: Vec<Vec<f64>> = rows_of(x)
        .into_iter()
        .enumerate()
        .filter(|(r, _)| *r != i)
        .map(|(_, v)| v)
        .collect();
    data(&rows)
}

/// Textbook two-pass covariance.
pub fn naive_covariance(rows: &[Vec<f64>], divisor: Divisor) -> DMatrix<f64> {
    let n = rows.len();
    let p = rows[0].len();
    let mean: Vec<f64> = (0..p)
        .map(|c| rows.iter().map(|r| r[c]).sum::<f64>() / n as f64)
        .collect();
    let d = match divisor {
        Divisor::N => n as f64,
        Divisor::NMinusOne => (n - 1) as f64,
    };
    DMatrix::from_fn(p, p, |a, b| {
        rows.iter()
            .map(|r| (r[a] - mean[a]) * (r[b] - mean[b]))
            .sum::<f64>()
            / d
    })
}

pub fn to_na(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(r, c)])
}

pub fn from_na(m: &DMatrix<f64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

/// Descending eigenvalues and matching unit eigenvectors from nalgebra.
pub fn oracle_eigen(m: &DMatrix<f64>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let e = SymmetricEigen::new(m.clone());
    let mut idx: Vec<usize> = (0..m.nrows()).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[b].total_cmp(&e.eigenvalues[a]));
    let values = idx.iter().map(|&k| e.eigenvalues[k]).collect();
    let vectors = idx
        .iter()
        .map(|&k| e.eigenvectors.column(k).iter().copied().collect())
        .collect();
    (values, vectors)
}

pub fn oracle_values(m: &DMatrix<f64>) -> Vec<f64> {
    oracle_eigen(m).0
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, p: usize) -> Matrix {
    let a = Matrix::from_fn(p, p, |_, _| rng.sample::<f64, _>(StandardNormal));
    Matrix::from_fn(p, p, |r, c| 0.5 * (a[(r, c)] + a[(c, r)]))
}

pub fn random_spd(rng: &mut ChaCha8Rng, p: usize) -> Matrix {
    let a = Matrix::from_fn(p, p, |_, _| rng.sample::<f64, _>(StandardNormal));
    let m = a.transpose().matmul(&a).unwrap();
    Matrix::from_fn(p, p, |r, c| m[(r, c)] + if r == c { 0.1 } else { 0.0 })
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Spearman rank correlation without tie handling.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&x, &y| v[x].total_cmp(&v[y]));
        let mut r = vec![0.0; v.len()];
        for (rank, &i) in idx.iter().enumerate() {
            r[i] = rank as f64;
        }
        r
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let m = (n - 1.0) / 2.0;
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - m) * (y - m)).sum();
    let var: f64 = ra.iter().map(|x| (x - m) * (x - m)).sum();
    cov / var
}

pub fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}
