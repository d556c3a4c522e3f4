//! Influence on the retained eigenvector subspace and on the retained
//! principal component scores.
//!
//! Sample versions (`SIF_B`, `SCI`) need one leave-one-out decomposition per
//! observation; the empirical versions (`EIF_B`, `SCIA`) use only the
//! full-data eigenpairs and the projections `ω̂ₗᵢ`. Signs follow the usual
//! printing: `SIF_B`, `EIF_B ≤ 0` and `SCI`, `SCIA ≥ 0`. Compare magnitudes.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::analysis::Analysis;
use crate::eigen::{
    pc_scores, squared_canonical_correlations, subspace, EigenSystem, Subspace, GAP_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::matrix::{dot, norm};

/// `ρ = 1 − (1/L) Σₗ ‖(I − P_loo) η̂ₗ‖`, in `[0, 1]`.
pub fn rho(full: &Subspace, loo: &Subspace) -> Result<f64> {
    Ok((1.0 - mean_residual(full, loo)?).clamp(0.0, 1.0))
}

fn mean_residual(full: &Subspace, loo: &Subspace) -> Result<f64> {
    if full.dim() != loo.dim() {
        return Err(Error::DimensionMismatch {
            what: "subspace ambient dimension",
            expected: full.dim(),
            found: loo.dim(),
        });
    }
    if full.retained() != loo.retained() {
        return Err(Error::DimensionMismatch {
            what: "retained count",
            expected: full.retained(),
            found: loo.retained(),
        });
    }
    let g = loo.basis();
    let l = full.retained();
    let mut total = 0.0;
    for c in 0..l {
        let eta = full.basis().column(c);
        let coeffs: Vec<f64> = (0..l).map(|k| dot(&g.column(k), &eta)).collect();
        let residual: Vec<f64> = (0..eta.len())
            .map(|r| eta[r] - (0..l).map(|k| g[(r, k)] * coeffs[k]).sum::<f64>())
            .collect();
        total += norm(&residual);
    }
    Ok(total / l as f64)
}

fn check_retained(l: usize, p: usize) -> Result<()> {
    if l == 0 || l > p {
        return Err(Error::InvalidParameter {
            name: "L",
            reason: alloc::format!("{l} is outside 1..={p}"),
        });
    }
    Ok(())
}

fn check_denominators(e: &EigenSystem, l: usize) -> Result<()> {
    for a in 0..l {
        for b in l..e.dim() {
            if e.relative_gap(a, b) < GAP_TOLERANCE {
                return Err(Error::DegenerateDenominator { l: a + 1, k: b + 1 });
            }
        }
    }
    Ok(())
}

/// `−(1/L) Σ_{l≤L} { Σ_{k>L} ω̂ₗ² ω̂ₖ² / (λ̂ₗ − λ̂ₖ)² }^{1/2}` from full-data eigenpairs.
pub fn eif_b_from(e: &EigenSystem, omegas: &[f64], l: usize) -> Result<f64> {
    check_retained(l, e.dim())?;
    check_denominators(e, l)?;
    let lam = e.values();
    let total: f64 = (0..l)
        .map(|a| {
            let inner: f64 = (l..e.dim())
                .map(|k| {
                    let gap = lam[a] - lam[k];
                    omegas[a] * omegas[a] * omegas[k] * omegas[k] / (gap * gap)
                })
                .sum();
            libm::sqrt(inner)
        })
        .sum();
    Ok(-total / l as f64)
}

/// `(1/L) Σ_{l≤L} Σ_{k>L} (λ̂ₖ/λ̂ₗ) ω̂ₗ² ω̂ₖ² / (λ̂ₗ − λ̂ₖ)²` from full-data eigenpairs.
pub fn scia_from(e: &EigenSystem, omegas: &[f64], l: usize) -> Result<f64> {
    check_retained(l, e.dim())?;
    check_denominators(e, l)?;
    let lam = e.values();
    if let Some(a) = (0..l).find(|&a| lam[a] == 0.0) {
        return Err(Error::ZeroEigenvalue { l: a + 1 });
    }
    let mut total = 0.0;
    for a in 0..l {
        for k in l..e.dim() {
            let gap = lam[a] - lam[k];
            total +=
                (lam[k] / lam[a]) * omegas[a] * omegas[a] * omegas[k] * omegas[k] / (gap * gap);
        }
    }
    Ok(total / l as f64)
}

/// Exact subspace measures for one observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleMeasures {
    pub sif_b: f64,
    pub sci: f64,
    /// The `(L, L+1)` boundary is tied in the full or leave-one-out spectrum.
    pub boundary_degenerate: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RecordFlags {
    pub switching: bool,
    pub near_switch: bool,
    pub replaced: bool,
}

/// Per-observation subspace influence; `None` entries were not requested or
/// could not be computed (see `notes`).
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceRecord {
    /// 1-based observation number.
    pub obs: usize,
    pub l: usize,
    pub sif_b: Option<f64>,
    pub eif_b: Option<f64>,
    pub sci: Option<f64>,
    pub scia: Option<f64>,
    pub flags: RecordFlags,
    pub notes: Vec<String>,
}

impl Analysis<'_> {
    /// `SIF_B` and `SCI` from a single leave-one-out decomposition.
    pub fn sample_measures(&self, l: usize, i: usize) -> Result<SampleMeasures> {
        check_retained(l, self.p())?;
        self.check_obs(i)?;
        let loo = self.loo_eigen(i)?;
        self.sample_measures_from(l, &loo)
    }

    /// `SIF_B` and `SCI` given the leave-one-out decomposition of some row.
    pub fn sample_measures_from(
        &self,
        l: usize,
        loo_eigen: &EigenSystem,
    ) -> Result<SampleMeasures> {
        check_retained(l, self.p())?;
        let full = subspace(self.eigen(), l)?;
        let loo = subspace(loo_eigen, l)?;
        let boundary_degenerate = full.boundary_degenerate || loo.boundary_degenerate;
        if l == self.p() {
            return Ok(SampleMeasures {
                sif_b: 0.0,
                sci: 0.0,
                boundary_degenerate,
            });
        }
        let n1 = (self.n() - 1) as f64;
        let sif_b = -n1 * mean_residual(&full, &loo)?;

        let a = pc_scores(self.data(), &full, true)?;
        let b = pc_scores(self.data(), &loo, true)?;
        let r2 = squared_canonical_correlations(&a, &b)?;
        let mean_r2 = r2.iter().sum::<f64>() / r2.len() as f64;
        let sci = (n1 * n1 * (1.0 - mean_r2)).max(0.0);
        Ok(SampleMeasures {
            sif_b,
            sci,
            boundary_degenerate,
        })
    }

    /// `(n−1)[ρ(Γ̂_L, Γ̂_{L,(i)}) − 1]`.
    pub fn sif_b(&self, l: usize, i: usize) -> Result<f64> {
        Ok(self.sample_measures(l, i)?.sif_b)
    }

    /// `(n−1)²(1 − r̄²)` between full-data scores on the two eigenvector sets.
    pub fn sci(&self, l: usize, i: usize) -> Result<f64> {
        Ok(self.sample_measures(l, i)?.sci)
    }

    pub fn eif_b(&self, l: usize, i: usize) -> Result<f64> {
        self.require_covariance("eif_b")?;
        eif_b_from(self.eigen(), &self.omegas(i)?, l)
    }

    pub fn scia(&self, l: usize, i: usize) -> Result<f64> {
        self.require_covariance("scia")?;
        scia_from(self.eigen(), &self.omegas(i)?, l)
    }

    /// Empirical measures for observation `i`, and the sample measures too
    /// when `exact` is set. Failures become `None` plus a note.
    pub fn influence_record(&self, l: usize, i: usize, exact: bool) -> Result<InfluenceRecord> {
        self.check_obs(i)?;
        let loo = if exact {
            Some(self.loo_eigen(i)?)
        } else {
            None
        };
        self.influence_record_from(l, i, loo.as_ref())
    }

    /// As [`Analysis::influence_record`], with sample measures taken from a
    /// precomputed leave-one-out decomposition of row `i` when given.
    pub fn influence_record_from(
        &self,
        l: usize,
        i: usize,
        loo: Option<&EigenSystem>,
    ) -> Result<InfluenceRecord> {
        check_retained(l, self.p())?;
        self.check_obs(i)?;
        let exact = loo.is_some();
        let mut notes = Vec::new();
        let mut keep = |what: &str, r: Result<f64>| match r {
            Ok(v) => Some(v),
            Err(e) => {
                notes.push(alloc::format!("{what}: {e}"));
                None
            }
        };
        let eif_b = keep("eif_b", self.eif_b(l, i));
        let scia = keep("scia", self.scia(l, i));
        let (sif_b, sci) = if let Some(loo) = loo {
            match self.sample_measures_from(l, loo) {
                Ok(m) => {
                    if m.boundary_degenerate {
                        notes.push(alloc::format!(
                            "eigenvalues {l} and {} are tied; retained subspace is not unique",
                            l + 1
                        ));
                    }
                    (Some(m.sif_b), Some(m.sci))
                }
                Err(e) => {
                    let msg = e.to_string();
                    notes.push(alloc::format!("sif_b: {msg}"));
                    notes.push(alloc::format!("sci: {msg}"));
                    (None, None)
                }
            }
        } else {
            (None, None)
        };
        if exact && l == self.p() {
            notes.push("L = p: subspace measures are identically zero".to_string());
        }
        Ok(InfluenceRecord {
            obs: i + 1,
            l,
            sif_b,
            eif_b,
            sci,
            scia,
            flags: RecordFlags::default(),
            notes,
        })
    }
}
