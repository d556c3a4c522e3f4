//! Symmetric eigen-decomposition and the subspace quantities built on it.
//!
//! The solver is cyclic Jacobi: slow for large `p` but accurate to a few ulps
//! of the matrix norm and fully deterministic, which matters because the
//! diagnostics downstream compare decompositions of nearly identical matrices.
//!
//! Conventions for [`EigenSystem`]:
//! - eigenvalues are sorted non-increasing (ties keep solver order);
//! - each eigenvector's largest-magnitude entry is positive, ties resolved
//!   toward the lowest index;
//! - adjacent pairs with `(λ_j − λ_{j+1}) / (1 + |λ₁|) < 1e-10` are recorded
//!   in `gap_warnings` (1-based) instead of failing.

use alloc::vec::Vec;

use crate::dataset::{DataMatrix, SymmetricEstimate};
use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};

/// Relative gap below which adjacent eigenvalues are treated as tied.
pub const GAP_TOLERANCE: f64 = 1e-10;

/// Eigenvalues in `(-NEGATIVE_CLAMP, 0)` are reported as exactly zero.
pub const NEGATIVE_CLAMP: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: Matrix,
    gap_warnings: Vec<(usize, usize)>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Descending eigenvalues.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvectors as columns.
    pub fn vectors(&self) -> &Matrix {
        &self.vectors
    }

    /// The `j`-th (0-based) eigenvector.
    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.vectors.column(j)
    }

    /// Adjacent 1-based pairs whose eigenvalues are numerically tied.
    pub fn gap_warnings(&self) -> &[(usize, usize)] {
        &self.gap_warnings
    }

    /// True when eigenvalue `j` (0-based) is tied with either neighbour.
    pub fn is_degenerate(&self, j: usize) -> bool {
        self.gap_warnings
            .iter()
            .any(|&(a, b)| a == j + 1 || b == j + 1)
    }

    /// True when the boundary between the first `l` and the rest is tied.
    pub fn boundary_degenerate(&self, l: usize) -> bool {
        self.gap_warnings.contains(&(l, l + 1))
    }

    /// `Σ λ_j η_j η_jᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let p = self.dim();
        Matrix::from_fn(p, p, |a, b| {
            (0..p)
                .map(|j| self.values[j] * self.vectors[(a, j)] * self.vectors[(b, j)])
                .sum()
        })
    }

    /// Relative gap between eigenvalues `j` and `k` (0-based), as used for
    /// `gap_warnings`.
    pub fn relative_gap(&self, j: usize, k: usize) -> f64 {
        (self.values[j] - self.values[k]).abs() / (1.0 + self.values[0].abs())
    }
}

/// Full decomposition of a symmetric estimate.
pub fn eigh(w: &SymmetricEstimate) -> Result<EigenSystem> {
    eigh_matrix(&w.matrix)
}

/// Full decomposition of any symmetric matrix.
pub fn eigh_matrix(w: &Matrix) -> Result<EigenSystem> {
    if !w.is_square() {
        return Err(Error::DimensionMismatch {
            what: "eigh input",
            expected: w.rows(),
            found: w.cols(),
        });
    }
    let p = w.rows();
    if p == 0 {
        return Err(Error::EmptyData);
    }
    let asym = w.max_asymmetry();
    if asym > 1e-12 * (1.0 + w.max_abs()) {
        return Err(Error::NotSymmetric {
            max_asymmetry: asym,
        });
    }
    let (raw_values, raw_vectors) = jacobi(w)?;

    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| raw_values[b].total_cmp(&raw_values[a]).then(a.cmp(&b)));

    let mut values = Vec::with_capacity(p);
    let mut vectors = Matrix::zeros(p, p);
    for (dst, &src) in order.iter().enumerate() {
        let v = raw_values[src];
        values.push(if v < 0.0 && v > -NEGATIVE_CLAMP {
            0.0
        } else {
            v
        });
        let mut pivot = 0;
        for r in 0..p {
            vectors[(r, dst)] = raw_vectors[(r, src)];
            if raw_vectors[(r, src)].abs() > raw_vectors[(pivot, src)].abs() {
                pivot = r;
            }
        }
        if vectors[(pivot, dst)] < 0.0 {
            for r in 0..p {
                vectors[(r, dst)] = -vectors[(r, dst)];
            }
        }
    }

    let scale = 1.0 + values[0].abs();
    let gap_warnings = (1..p)
        .filter(|&j| (values[j - 1] - values[j]) / scale < GAP_TOLERANCE)
        .map(|j| (j, j + 1))
        .collect();

    Ok(EigenSystem {
        values,
        vectors,
        gap_warnings,
    })
}

/// Cyclic Jacobi rotations; returns unsorted eigenvalues and eigenvector columns.
fn jacobi(w: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let p = w.rows();
    let mut a = w.clone();
    // exact symmetry keeps the rotation updates consistent
    for r in 0..p {
        for c in 0..r {
            let m = 0.5 * (a[(r, c)] + a[(c, r)]);
            a[(r, c)] = m;
            a[(c, r)] = m;
        }
    }
    let mut v = Matrix::identity(p);
    let norm = a.frobenius_norm();
    if norm == 0.0 || p == 1 {
        return Ok(((0..p).map(|i| a[(i, i)]).collect(), v));
    }

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for r in 0..p {
            for c in r + 1..p {
                off += a[(r, c)] * a[(r, c)];
            }
        }
        if libm::sqrt(off) <= f64::EPSILON * 1e-2 * norm {
            return Ok(((0..p).map(|i| a[(i, i)]).collect(), v));
        }

        for r in 0..p {
            for c in r + 1..p {
                let apq = a[(r, c)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(r, r)];
                let aqq = a[(c, c)];
                // negligible relative to both diagonal entries: drop it
                let g = 100.0 * apq.abs();
                if app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[(r, c)] = 0.0;
                    a[(c, r)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let t = 1.0 / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let cos = 1.0 / libm::sqrt(t * t + 1.0);
                let sin = t * cos;
                rotate(&mut a, &mut v, r, c, cos, sin, t, apq);
            }
        }
    }
    Err(Error::NotConverged { sweeps: MAX_SWEEPS })
}

#[allow(clippy::too_many_arguments)]
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64, t: f64, apq: f64) {
    let n = a.rows();
    let app = a[(p, p)];
    let aqq = a[(q, q)];
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp;
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq;
    }
    a[(p, p)] = app - t * apq;
    a[(q, q)] = aqq + t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// Span of the leading `l` eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: Matrix,
    /// Set when eigenvalues `l` and `l + 1` are tied, so the span is not
    /// uniquely determined.
    pub boundary_degenerate: bool,
}

impl Subspace {
    /// Wraps a basis whose columns the caller guarantees are orthonormal.
    pub fn from_orthonormal(basis: Matrix) -> Self {
        Self {
            basis,
            boundary_degenerate: false,
        }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn retained(&self) -> usize {
        self.basis.cols()
    }
}

pub fn subspace(e: &EigenSystem, l: usize) -> Result<Subspace> {
    let p = e.dim();
    if l == 0 || l > p {
        return Err(Error::InvalidParameter {
            name: "L",
            reason: alloc::format!("{l} is outside 1..={p}"),
        });
    }
    Ok(Subspace {
        basis: e.vectors.leading_columns(l),
        boundary_degenerate: e.boundary_degenerate(l),
    })
}

/// `P = Γ Γᵀ`.
pub fn projector(s: &Subspace) -> Matrix {
    let g = &s.basis;
    let p = g.rows();
    Matrix::from_fn(p, p, |a, b| {
        (0..g.cols()).map(|l| g[(a, l)] * g[(b, l)]).sum()
    })
}

/// Principal component scores `Γᵀ(xᵢ − x̄)` (or `Γᵀxᵢ` when `centered` is false).
pub fn pc_scores(x: &DataMatrix, s: &Subspace, centered: bool) -> Result<Matrix> {
    if x.p() != s.dim() {
        return Err(Error::DimensionMismatch {
            what: "pc_scores",
            expected: s.dim(),
            found: x.p(),
        });
    }
    let mean = if centered {
        crate::dataset::mean_vector(x)
    } else {
        alloc::vec![0.0; x.p()]
    };
    let g = &s.basis;
    Ok(Matrix::from_fn(x.n(), g.cols(), |i, l| {
        x.row(i)
            .iter()
            .zip(&mean)
            .enumerate()
            .map(|(r, (v, m))| (v - m) * g[(r, l)])
            .sum()
    }))
}

/// Canonical correlations between the column spaces of `a` and `b`, descending.
///
/// Both score matrices are column-centered and orthonormalised; the squared
/// correlations are the eigenvalues of `(QₐᵀQ_b)(QₐᵀQ_b)ᵀ`, i.e. the non-zero
/// spectrum of `P_A P_B`, clipped to `[0, 1]`.
pub fn canonical_correlations(a: &Matrix, b: &Matrix) -> Result<Vec<f64>> {
    Ok(squared_canonical_correlations(a, b)?
        .into_iter()
        .map(libm::sqrt)
        .collect())
}

/// Squared canonical correlations, descending and clipped to `[0, 1]`.
pub fn squared_canonical_correlations(a: &Matrix, b: &Matrix) -> Result<Vec<f64>> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            what: "canonical correlation rows",
            expected: a.rows(),
            found: b.rows(),
        });
    }
    let qa = centered_orthonormal_basis(a).ok_or(Error::RankDeficient { which: "A" })?;
    let qb = centered_orthonormal_basis(b).ok_or(Error::RankDeficient { which: "B" })?;
    let (qa, qb) = if qa.cols() <= qb.cols() {
        (qa, qb)
    } else {
        (qb, qa)
    };
    let m = qa.transpose().matmul(&qb)?;
    let k = m.rows();
    let mmt = Matrix::from_fn(k, k, |r, c| dot(m.row(r), m.row(c)));
    let e = eigh_matrix(&mmt)?;
    Ok(e.values.iter().map(|v| v.clamp(0.0, 1.0)).collect())
}

/// Modified Gram–Schmidt with one re-orthogonalisation pass; `None` when a
/// column collapses relative to its centered norm.
fn centered_orthonormal_basis(m: &Matrix) -> Option<Matrix> {
    let (n, k) = (m.rows(), m.cols());
    if k == 0 || n <= k {
        return None;
    }
    let mut cols: Vec<Vec<f64>> = (0..k)
        .map(|c| {
            let col = m.column(c);
            let mean = col.iter().sum::<f64>() / n as f64;
            col.into_iter().map(|v| v - mean).collect()
        })
        .collect();
    let scale = cols
        .iter()
        .map(|c| crate::matrix::norm(c))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for c in 0..k {
        let original = crate::matrix::norm(&cols[c]);
        for _ in 0..2 {
            for prev in 0..c {
                let proj = dot(&cols[prev], &cols[c]);
                let (done, rest) = cols.split_at_mut(c);
                for (x, q) in rest[0].iter_mut().zip(&done[prev]) {
                    *x -= proj * q;
                }
            }
        }
        let nrm = crate::matrix::norm(&cols[c]);
        if nrm <= 1e-10 * original.max(1e-300) || nrm <= 1e-14 * scale {
            return None;
        }
        for x in cols[c].iter_mut() {
            *x /= nrm;
        }
    }
    Matrix::from_columns(&cols).ok()
}
