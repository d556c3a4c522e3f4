//! Influence of single observations on eigenvalues.
//!
//! Three flavours are provided per observation `i` and component `j`:
//!
//! - sample influence, `SIF = −(n−1)(λ̂ⱼ₍ᵢ₎ − λ̂ⱼ)`, from a true re-decomposition;
//! - empirical influence, `EIF = ω̂ⱼᵢ² − λ̂ⱼ`, closed form for covariance only;
//! - hybrid influence, `HIF = −(n−1) η̂ⱼᵀ(Ŵ₍ᵢ₎ − Ŵ)η̂ⱼ`, valid for any
//!   symmetric estimator.
//!
//! Rearranging `HIF ≈ SIF` gives the post-removal approximation
//! `λ̃ⱼ₍ᵢ₎ = η̂ⱼᵀŴ₍ᵢ₎η̂ⱼ`, which keeps the full-data rank positions and so
//! exposes order reversals that the sorted exact eigenvalues hide.

use alloc::vec::Vec;

use crate::analysis::Analysis;
use crate::dataset::EstimatorKind;
use crate::eigen::{eigh_matrix, EigenSystem};
use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};

/// `ω̂ₗᵢ = η̂ₗᵀ(xᵢ − x̄)` for a 0-based component `l`.
pub fn omega(e: &EigenSystem, mean: &[f64], x: &[f64], l: usize) -> f64 {
    let v = e.vectors();
    let mut acc = 0.0;
    for r in 0..mean.len() {
        acc += v[(r, l)] * (x[r] - mean[r]);
    }
    acc
}

/// Post-removal eigenvalues for one observation.
#[derive(Debug, Clone, PartialEq)]
pub struct LooEigenApprox {
    /// 1-based observation number.
    pub obs: usize,
    /// `λ̃ⱼ₍ᵢ₎` in full-data rank order; deliberately not re-sorted.
    pub approx_values: Vec<f64>,
    /// Sorted exact `λ̂ⱼ₍ᵢ₎`, when requested.
    pub exact_values: Option<Vec<f64>>,
    /// `trace(Ŵ₍ᵢ₎)`.
    pub loo_trace: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentInfluence {
    /// 1-based component number.
    pub j: usize,
    pub sif: Option<f64>,
    pub eif: Option<f64>,
    pub hif: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenInfluence {
    /// 1-based observation number.
    pub obs: usize,
    pub components: Vec<ComponentInfluence>,
}

impl Analysis<'_> {
    /// Rayleigh-quotient approximation of every post-removal eigenvalue.
    pub fn approx_eigenvalues_loo(&self, i: usize) -> Result<LooEigenApprox> {
        let w = self.loo_estimate(i)?;
        let approx_values = (0..self.p()).map(|j| self.rayleigh(&w, j)).collect();
        Ok(LooEigenApprox {
            obs: i + 1,
            approx_values,
            exact_values: None,
            loo_trace: w.trace(),
        })
    }

    /// As [`Analysis::approx_eigenvalues_loo`], also filling the exact values
    /// (one counted decomposition).
    pub fn approx_and_exact_eigenvalues_loo(&self, i: usize) -> Result<LooEigenApprox> {
        let mut out = self.approx_eigenvalues_loo(i)?;
        out.exact_values = Some(self.loo_eigen(i)?.values().to_vec());
        Ok(out)
    }

    /// `−(n−1)(λ̂ⱼ₍ᵢ₎ − λ̂ⱼ)` matched by rank position.
    pub fn sif_eigenvalue(&self, j: usize, i: usize) -> Result<f64> {
        self.check_component(j)?;
        self.check_obs(i)?;
        if self.eigen().is_degenerate(j) {
            return Err(Error::DegenerateEigenvalue { j: j + 1 });
        }
        let loo = self.loo_eigen(i)?;
        Ok(self.sif_from(&loo, j))
    }

    fn sif_from(&self, loo: &EigenSystem, j: usize) -> f64 {
        -((self.n() - 1) as f64) * (loo.values()[j] - self.eigen().values()[j])
    }

    /// `(xᵢ − x̄)(xᵢ − x̄)ᵀ − Σ̂`.
    pub fn eif_covariance(&self, i: usize) -> Result<Matrix> {
        self.require_covariance("eif_covariance")?;
        self.check_obs(i)?;
        let d: Vec<f64> = self
            .data()
            .row(i)
            .iter()
            .zip(self.mean())
            .map(|(v, m)| v - m)
            .collect();
        Matrix::outer(&d).sub(&self.estimate().matrix)
    }

    /// `ω̂ⱼᵢ² − λ̂ⱼ`.
    pub fn eif_eigenvalue(&self, j: usize, i: usize) -> Result<f64> {
        self.require_covariance("eif_eigenvalue")?;
        self.check_component(j)?;
        self.check_obs(i)?;
        if self.eigen().is_degenerate(j) {
            return Err(Error::DegenerateEigenvalue { j: j + 1 });
        }
        let w = omega(self.eigen(), self.mean(), self.data().row(i), j);
        Ok(w * w - self.eigen().values()[j])
    }

    /// `−(n−1) η̂ⱼᵀ(Ŵ₍ᵢ₎ − Ŵ)η̂ⱼ`, evaluated as `−(n−1)(λ̃ⱼ₍ᵢ₎ − λ̂ⱼ)`.
    pub fn hif_eigenvalue(&self, j: usize, i: usize) -> Result<f64> {
        self.check_component(j)?;
        let approx = self.approx_eigenvalues_loo(i)?;
        Ok(self.hif_from(&approx, j))
    }

    fn hif_from(&self, approx: &LooEigenApprox, j: usize) -> f64 {
        -((self.n() - 1) as f64) * (approx.approx_values[j] - self.eigen().values()[j])
    }

    /// Every eigenvalue influence for observation `i`. With `exact`, one
    /// decomposition of `Ŵ₍ᵢ₎` fills the SIF column; EIF is present for
    /// covariance estimates only. Tied eigenvalues get `None` for SIF/EIF.
    pub fn eigen_influence(&self, i: usize, exact: bool) -> Result<EigenInfluence> {
        self.check_obs(i)?;
        let loo = if exact {
            Some(self.loo_eigen(i)?)
        } else {
            None
        };
        self.eigen_influence_from(i, loo.as_ref())
    }

    /// As [`Analysis::eigen_influence`], with SIF taken from a precomputed
    /// leave-one-out decomposition of row `i` when given.
    pub fn eigen_influence_from(
        &self,
        i: usize,
        loo: Option<&EigenSystem>,
    ) -> Result<EigenInfluence> {
        let approx = self.approx_eigenvalues_loo(i)?;
        let covariance = self.spec().kind == EstimatorKind::Covariance;
        let components = (0..self.p())
            .map(|j| {
                let degenerate = self.eigen().is_degenerate(j);
                let sif = loo.filter(|_| !degenerate).map(|l| self.sif_from(l, j));
                let eif = (covariance && !degenerate).then(|| {
                    let w = omega(self.eigen(), self.mean(), self.data().row(i), j);
                    w * w - self.eigen().values()[j]
                });
                ComponentInfluence {
                    j: j + 1,
                    sif,
                    eif,
                    hif: self.hif_from(&approx, j),
                }
            })
            .collect();
        Ok(EigenInfluence {
            obs: i + 1,
            components,
        })
    }

    pub(crate) fn require_covariance(&self, operation: &'static str) -> Result<()> {
        match self.spec().kind {
            EstimatorKind::Covariance => Ok(()),
            EstimatorKind::Correlation => Err(Error::UnsupportedEstimator {
                operation,
                hint: "use the hybrid influence (hif) for other estimators",
            }),
        }
    }
}

/// Finite-difference and analytic derivative of an eigenvalue under point
/// contamination of a covariance functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Check {
    /// `(λⱼ(W_ε) − λⱼ(W)) / ε`.
    pub finite_difference: f64,
    /// `ηⱼᵀ[(x₀−μ)(x₀−μ)ᵀ − W]ηⱼ`.
    pub analytic: f64,
}

impl Lemma1Check {
    pub fn error(&self) -> f64 {
        (self.finite_difference - self.analytic).abs()
    }
}

/// Default step for [`lemma1_numeric_check`].
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Compares the eigenvalue influence `ηⱼᵀ IF(W) ηⱼ` with a forward difference
/// of `W_ε = (1−ε)W + ε(1−ε)(x₀−μ)(x₀−μ)ᵀ`, the covariance of the mixture
/// `(1−ε)F + εΔ_{x₀}`.
pub fn lemma1_numeric_check(
    w: &Matrix,
    x0: &[f64],
    mu: &[f64],
    j: usize,
    epsilon: f64,
) -> Result<Lemma1Check> {
    if !(epsilon > 0.0 && epsilon <= 1e-4) {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            reason: alloc::format!("{epsilon} is outside (0, 1e-4]"),
        });
    }
    let p = w.rows();
    if x0.len() != p || mu.len() != p {
        return Err(Error::DimensionMismatch {
            what: "contaminant",
            expected: p,
            found: x0.len().min(mu.len()),
        });
    }
    if j >= p {
        return Err(Error::IndexOutOfRange {
            what: "component",
            index: j,
            len: p,
        });
    }
    let base = eigh_matrix(w)?;
    if base.is_degenerate(j) {
        return Err(Error::DegenerateEigenvalue { j: j + 1 });
    }
    let d: Vec<f64> = x0.iter().zip(mu).map(|(a, b)| a - b).collect();
    let perturbed = w
        .scale(1.0 - epsilon)
        .add(&Matrix::outer(&d).scale(epsilon * (1.0 - epsilon)))?;
    let moved = eigh_matrix(&perturbed)?;

    let eta = base.vector(j);
    let proj = dot(&eta, &d);
    let analytic = proj * proj - w.quadratic_form(&eta);
    // λⱼ(W_ε) − λⱼ(W) = vᵀ(W_ε − W)v + Σₖ (λₖ − λⱼ)(ηₖᵀv)² for the perturbed
    // eigenvector v; neither term subtracts two O(λ) quantities.
    let v = moved.vector(j);
    let pv = dot(&v, &d);
    let direct = (1.0 - epsilon) * pv * pv - w.quadratic_form(&v);
    let values = base.values();
    let rotation: f64 = (0..p)
        .filter(|&k| k != j)
        .map(|k| {
            let c = dot(&base.vector(k), &v);
            (values[k] - values[j]) * c * c
        })
        .sum();
    let finite_difference = direct + rotation / epsilon;
    Ok(Lemma1Check {
        finite_difference,
        analytic,
    })
}
