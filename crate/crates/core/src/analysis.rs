//! Full-data state shared by every per-observation diagnostic.

use core::sync::atomic::{AtomicUsize, Ordering};

use alloc::vec::Vec;

use crate::dataset::{estimate, DataMatrix, EstimatorSpec, LooDowndate, SymmetricEstimate};
use crate::eigen::{eigh, EigenSystem};
use crate::error::{Error, Result};

/// One full-data decomposition plus everything needed to derive
/// leave-one-out estimates cheaply.
///
/// Every symmetric eigen-decomposition of an estimate performed through this
/// value is counted, starting with the full-data one in [`Analysis::new`];
/// see [`Analysis::decompositions`]. The type is `Sync`, so callers may fan
/// out over observations.
#[derive(Debug)]
pub struct Analysis<'a> {
    data: &'a DataMatrix,
    spec: EstimatorSpec,
    estimate: SymmetricEstimate,
    eigen: EigenSystem,
    downdate: LooDowndate,
    decompositions: AtomicUsize,
}

impl<'a> Analysis<'a> {
    pub fn new(data: &'a DataMatrix, spec: EstimatorSpec) -> Result<Self> {
        if data.n() < 3 {
            return Err(Error::TooFewObservations {
                n: data.n(),
                required: 3,
            });
        }
        let estimate = estimate(data, spec)?;
        let eigen = eigh(&estimate)?;
        let downdate = LooDowndate::new(data)?;
        Ok(Self {
            data,
            spec,
            estimate,
            eigen,
            downdate,
            decompositions: AtomicUsize::new(1),
        })
    }

    pub fn data(&self) -> &'a DataMatrix {
        self.data
    }

    pub fn spec(&self) -> EstimatorSpec {
        self.spec
    }

    pub fn n(&self) -> usize {
        self.data.n()
    }

    pub fn p(&self) -> usize {
        self.data.p()
    }

    pub fn estimate(&self) -> &SymmetricEstimate {
        &self.estimate
    }

    pub fn eigen(&self) -> &EigenSystem {
        &self.eigen
    }

    pub fn mean(&self) -> &[f64] {
        self.downdate.mean()
    }

    /// Symmetric eigen-decompositions performed so far (full data included).
    pub fn decompositions(&self) -> usize {
        self.decompositions.load(Ordering::Relaxed)
    }

    pub(crate) fn check_obs(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange {
                what: "observation",
                index: i,
                len: self.n(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_component(&self, j: usize) -> Result<()> {
        if j >= self.p() {
            return Err(Error::IndexOutOfRange {
                what: "component",
                index: j,
                len: self.p(),
            });
        }
        Ok(())
    }

    /// `Ŵ₍ᵢ₎` via rank-one downdate.
    pub fn loo_estimate(&self, i: usize) -> Result<SymmetricEstimate> {
        self.check_obs(i)?;
        self.downdate.estimate_without(self.data, self.spec, i)
    }

    /// Exact decomposition of `Ŵ₍ᵢ₎` (counted).
    pub fn loo_eigen(&self, i: usize) -> Result<EigenSystem> {
        let w = self.loo_estimate(i)?;
        self.decompositions.fetch_add(1, Ordering::Relaxed);
        eigh(&w)
    }

    /// `ω̂ₗᵢ = η̂ₗᵀ(xᵢ − x̄)` for every `l`.
    pub fn omegas(&self, i: usize) -> Result<Vec<f64>> {
        self.check_obs(i)?;
        let x = self.data.row(i);
        Ok((0..self.p())
            .map(|l| crate::influence::omega(&self.eigen, self.mean(), x, l))
            .collect())
    }

    /// Rayleigh quotient `η̂ⱼᵀ W η̂ⱼ` at a full-data eigenvector.
    pub(crate) fn rayleigh(&self, w: &SymmetricEstimate, j: usize) -> f64 {
        w.matrix.quadratic_form(&self.eigen.vector(j))
    }
}
