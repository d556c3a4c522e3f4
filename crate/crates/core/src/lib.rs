//! Leave-one-out influence diagnostics for eigenvalues and eigenvector
//! subspaces of symmetric matrix estimates, with detection of eigenvalue
//! switching.
//!
//! The entry point is [`Analysis`], which decomposes the full-data estimate
//! once and derives every per-observation quantity from it:
//!
//! - [`influence`]: sample, empirical and hybrid influence on eigenvalues and
//!   the rank-preserving post-removal eigenvalue approximation;
//! - [`subspace_diag`]: `SIF_B`/`EIF_B` and `SCI`/`SCIA` for the retained
//!   subspace and scores;
//! - [`switching`]: switch and near-switch detection, exact confirmation,
//!   retention advice, SIF-replaced series and deletion cascades.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod dataset;
pub mod eigen;
pub mod error;
pub mod influence;
pub mod matrix;
pub mod subspace_diag;
pub mod switching;

pub use analysis::Analysis;
pub use dataset::{
    estimate, estimate_loo, mean_vector, DataMatrix, Divisor, EstimatorKind, EstimatorSpec,
    LooDowndate, SymmetricEstimate,
};
pub use eigen::{
    canonical_correlations, eigh, eigh_matrix, pc_scores, projector, subspace, EigenSystem,
    Subspace,
};
pub use error::{Error, Result};
pub use influence::{lemma1_numeric_check, omega, EigenInfluence, Lemma1Check, LooEigenApprox};
pub use matrix::Matrix;
pub use subspace_diag::{rho, InfluenceRecord, SampleMeasures};
pub use switching::{
    cascade_scan, recommend_l, CascadeRound, DetectionMode, HybridSeries, Measure, Pair,
    Recommendation, SwitchEvent, SwitchKind, SwitchOptions, SwitchReport,
};
