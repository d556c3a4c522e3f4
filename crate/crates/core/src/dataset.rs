//! Observation matrices and the symmetric estimates built from them.
//!
//! Covariance and correlation are computed by a two-pass accumulator (column
//! means, then centered cross-products). Leave-one-out estimates come in two
//! flavours: [`estimate_loo`] re-runs the accumulator while skipping a row, so
//! it agrees bit-for-bit with estimating on the physically reduced matrix, and
//! [`LooDowndate`] applies the rank-one update of the scatter matrix in
//! `O(p²)` per removal for sweeps over all observations.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// An `n × p` sample with row and column labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Matrix,
    row_labels: Vec<String>,
    col_labels: Vec<String>,
}

impl DataMatrix {
    pub fn new(values: Matrix, row_labels: Vec<String>, col_labels: Vec<String>) -> Result<Self> {
        if values.rows() == 0 || values.cols() == 0 {
            return Err(Error::EmptyData);
        }
        if row_labels.len() != values.rows() {
            return Err(Error::LabelCount {
                what: "row",
                expected: values.rows(),
                found: row_labels.len(),
            });
        }
        if col_labels.len() != values.cols() {
            return Err(Error::LabelCount {
                what: "column",
                expected: values.cols(),
                found: col_labels.len(),
            });
        }
        for r in 0..values.rows() {
            if let Some(c) = values.row(r).iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    row: r + 1,
                    col: c + 1,
                });
            }
        }
        Ok(Self {
            values,
            row_labels,
            col_labels,
        })
    }

    /// Rows labelled `"1"..="n"`, columns `"V1"..="Vp"`.
    pub fn from_matrix(values: Matrix) -> Result<Self> {
        let row_labels = (1..=values.rows()).map(|i| i.to_string()).collect();
        let col_labels = (1..=values.cols()).map(|j| format!("V{j}")).collect();
        Self::new(values, row_labels, col_labels)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::from_matrix(Matrix::from_rows(rows)?)
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.values.rows()
    }

    /// Number of variables.
    pub fn p(&self) -> usize {
        self.values.cols()
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.values.row(i)
    }

    pub fn row_labels(&self) -> &[String] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[String] {
        &self.col_labels
    }

    /// Copy without the listed (0-based) rows; labels travel with their rows.
    pub fn without_rows(&self, drop: &[usize]) -> Result<Self> {
        let n = self.n();
        if let Some(&bad) = drop.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange {
                what: "observation",
                index: bad,
                len: n,
            });
        }
        let keep: Vec<usize> = (0..n).filter(|i| !drop.contains(i)).collect();
        if keep.is_empty() {
            return Err(Error::EmptyData);
        }
        let values = Matrix::from_fn(keep.len(), self.p(), |r, c| self.values[(keep[r], c)]);
        let row_labels = keep.iter().map(|&i| self.row_labels[i].clone()).collect();
        Ok(Self {
            values,
            row_labels,
            col_labels: self.col_labels.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EstimatorKind {
    #[default]
    Covariance,
    Correlation,
}

/// Divisor applied to the centered scatter matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Divisor {
    N,
    #[default]
    NMinusOne,
}

impl Divisor {
    fn value(self, n: usize) -> f64 {
        match self {
            Divisor::N => n as f64,
            Divisor::NMinusOne => (n - 1) as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EstimatorSpec {
    pub kind: EstimatorKind,
    pub divisor: Divisor,
}

impl EstimatorSpec {
    pub const fn covariance(divisor: Divisor) -> Self {
        Self {
            kind: EstimatorKind::Covariance,
            divisor,
        }
    }

    pub const fn correlation(divisor: Divisor) -> Self {
        Self {
            kind: EstimatorKind::Correlation,
            divisor,
        }
    }
}

/// A `p × p` symmetric matrix estimate together with how it was produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEstimate {
    pub matrix: Matrix,
    pub spec: EstimatorSpec,
    pub n_used: usize,
}

impl SymmetricEstimate {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

/// Column means.
pub fn mean_vector(x: &DataMatrix) -> Vec<f64> {
    masked_mean(x.values(), None)
}

fn masked_mean(values: &Matrix, skip: Option<usize>) -> Vec<f64> {
    let p = values.cols();
    let mut sum = alloc::vec![0.0; p];
    let mut count = 0usize;
    for r in (0..values.rows()).filter(|&r| Some(r) != skip) {
        for (s, v) in sum.iter_mut().zip(values.row(r)) {
            *s += v;
        }
        count += 1;
    }
    sum.iter().map(|s| s / count as f64).collect()
}

/// Upper-triangle accumulation mirrored to the lower triangle.
fn masked_scatter(values: &Matrix, mean: &[f64], skip: Option<usize>) -> Matrix {
    let p = values.cols();
    let mut s = Matrix::zeros(p, p);
    let mut centered = alloc::vec![0.0; p];
    for r in (0..values.rows()).filter(|&r| Some(r) != skip) {
        for ((c, v), m) in centered.iter_mut().zip(values.row(r)).zip(mean) {
            *c = v - m;
        }
        for a in 0..p {
            for b in a..p {
                s[(a, b)] += centered[a] * centered[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            s[(a, b)] = s[(b, a)];
        }
    }
    s
}

fn finish(scatter: Matrix, n_used: usize, spec: EstimatorSpec) -> Result<SymmetricEstimate> {
    let d = spec.divisor.value(n_used);
    let cov = scatter.scale(1.0 / d);
    let matrix = match spec.kind {
        EstimatorKind::Covariance => cov,
        EstimatorKind::Correlation => correlation_from_covariance(&cov)?,
    };
    Ok(SymmetricEstimate {
        matrix,
        spec,
        n_used,
    })
}

fn correlation_from_covariance(cov: &Matrix) -> Result<Matrix> {
    let p = cov.rows();
    let mut sd = Vec::with_capacity(p);
    for j in 0..p {
        let v = cov[(j, j)];
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::ZeroVariance { column: j + 1 });
        }
        sd.push(libm::sqrt(v));
    }
    Ok(Matrix::from_fn(p, p, |a, b| {
        if a == b {
            1.0
        } else {
            cov[(a, b)] / (sd[a] * sd[b])
        }
    }))
}

/// Covariance or correlation estimate over all rows.
pub fn estimate(x: &DataMatrix, spec: EstimatorSpec) -> Result<SymmetricEstimate> {
    if x.n() < 2 {
        return Err(Error::TooFewObservations {
            n: x.n(),
            required: 2,
        });
    }
    let mean = masked_mean(x.values(), None);
    finish(masked_scatter(x.values(), &mean, None), x.n(), spec)
}

/// Estimate over the `n − 1` rows other than `i` (0-based).
pub fn estimate_loo(x: &DataMatrix, spec: EstimatorSpec, i: usize) -> Result<SymmetricEstimate> {
    if i >= x.n() {
        return Err(Error::IndexOutOfRange {
            what: "observation",
            index: i,
            len: x.n(),
        });
    }
    if x.n() < 3 {
        return Err(Error::TooFewObservations {
            n: x.n(),
            required: 3,
        });
    }
    let mean = masked_mean(x.values(), Some(i));
    finish(masked_scatter(x.values(), &mean, Some(i)), x.n() - 1, spec)
}

/// Rank-one downdate of the centered scatter matrix.
///
/// With `d = xᵢ − x̄`, removing row `i` gives
/// `S₍ᵢ₎ = S − n/(n−1) · d dᵀ`.
#[derive(Debug, Clone)]
pub struct LooDowndate {
    mean: Vec<f64>,
    scatter: Matrix,
    n: usize,
}

impl LooDowndate {
    pub fn new(x: &DataMatrix) -> Result<Self> {
        if x.n() < 3 {
            return Err(Error::TooFewObservations {
                n: x.n(),
                required: 3,
            });
        }
        let mean = mean_vector(x);
        let scatter = masked_scatter(x.values(), &mean, None);
        Ok(Self {
            mean,
            scatter,
            n: x.n(),
        })
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn estimate_without(
        &self,
        x: &DataMatrix,
        spec: EstimatorSpec,
        i: usize,
    ) -> Result<SymmetricEstimate> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                what: "observation",
                index: i,
                len: self.n,
            });
        }
        let p = self.mean.len();
        let d: Vec<f64> = x
            .row(i)
            .iter()
            .zip(&self.mean)
            .map(|(v, m)| v - m)
            .collect();
        let w = self.n as f64 / (self.n - 1) as f64;
        let mut s = self.scatter.clone();
        for a in 0..p {
            for b in a..p {
                let v = s[(a, b)] - w * d[a] * d[b];
                s[(a, b)] = v;
                s[(b, a)] = v;
            }
        }
        finish(s, self.n - 1, spec)
    }
}
