//! Parallel per-observation influence sweeps.

use std::collections::BTreeSet;

use eigensens_core::switching::{
    merge_events, near_switch_events, resolve_pairs, switch_events, Pair, SwitchKind,
};
use eigensens_core::{Analysis, EigenInfluence, InfluenceRecord, LooEigenApprox};
use rayon::prelude::*;

/// Which rows get a leave-one-out decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepMode {
    /// None: empirical measures only.
    #[default]
    Approx,
    /// Every row.
    Exact,
    /// Only rows flagged by switch or near-switch detection.
    Hybrid,
}

impl SweepMode {
    pub fn name(self) -> &'static str {
        match self {
            SweepMode::Approx => "approx",
            SweepMode::Exact => "exact",
            SweepMode::Hybrid => "hybrid",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub l: usize,
    pub mode: SweepMode,
    pub pairs: Option<Vec<Pair>>,
    /// Near-switch scope; `None` means the same as `pairs`.
    pub near_pairs: Option<Vec<Pair>>,
    pub delta: f64,
    /// Worker threads; `None` uses rayon's default.
    pub jobs: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            l: 2,
            mode: SweepMode::Approx,
            pairs: None,
            near_pairs: None,
            delta: eigensens_core::switching::DEFAULT_DELTA,
            jobs: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ObservationInfluence {
    pub record: InfluenceRecord,
    pub eigen: EigenInfluence,
}

#[derive(Debug, Clone)]
pub struct InfluenceSweep {
    pub l: usize,
    pub mode: SweepMode,
    pub delta: f64,
    /// Row order.
    pub rows: Vec<ObservationInfluence>,
    /// 1-based observations that received a leave-one-out decomposition in hybrid mode.
    pub flagged: Vec<usize>,
    /// Decompositions spent, including the full-data one.
    pub decompositions: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Core(#[from] eigensens_core::Error),
    #[error("cannot build thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, SweepError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        b = b.num_threads(j);
    }
    Ok(b.build()?)
}

/// Approximate leave-one-out eigenvalues for every row, computed in parallel.
pub fn approx_table(
    analysis: &Analysis<'_>,
    jobs: Option<usize>,
) -> Result<Vec<LooEigenApprox>, SweepError> {
    let table = pool(jobs)?.install(|| {
        (0..analysis.n())
            .into_par_iter()
            .map(|i| analysis.approx_eigenvalues_loo(i))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(table)
}

/// Influence of every observation. Switch flags are always filled in from
/// approximate detection, which costs no decompositions.
pub fn influence_sweep(
    analysis: &Analysis<'_>,
    opts: &SweepOptions,
) -> Result<InfluenceSweep, SweepError> {
    let pairs = resolve_pairs(analysis.p(), opts.pairs.as_deref())?;
    let near_pairs = match &opts.near_pairs {
        Some(np) => resolve_pairs(analysis.p(), Some(np))?,
        None => pairs.clone(),
    };
    let table = approx_table(analysis, opts.jobs)?;
    let events = merge_events(
        &switch_events(&table, &pairs),
        &near_switch_events(&table, &near_pairs, opts.delta),
    );
    let switching: BTreeSet<usize> = events
        .iter()
        .filter(|e| e.kind == SwitchKind::Switch)
        .map(|e| e.row())
        .collect();
    let near: BTreeSet<usize> = events
        .iter()
        .filter(|e| e.kind == SwitchKind::NearSwitch)
        .map(|e| e.row())
        .collect();
    let flagged: BTreeSet<usize> = switching.union(&near).copied().collect();

    let exact_for = |i: usize| match opts.mode {
        SweepMode::Approx => false,
        SweepMode::Exact => true,
        SweepMode::Hybrid => flagged.contains(&i),
    };
    let rows = pool(opts.jobs)?.install(|| {
        (0..analysis.n())
            .into_par_iter()
            .map(|i| {
                let loo = if exact_for(i) {
                    Some(analysis.loo_eigen(i)?)
                } else {
                    None
                };
                let mut record = analysis.influence_record_from(opts.l, i, loo.as_ref())?;
                record.flags.switching = switching.contains(&i);
                record.flags.near_switch = near.contains(&i);
                record.flags.replaced = opts.mode == SweepMode::Hybrid && loo.is_some();
                let eigen = analysis.eigen_influence_from(i, loo.as_ref())?;
                Ok(ObservationInfluence { record, eigen })
            })
            .collect::<Result<Vec<_>, eigensens_core::Error>>()
    })?;

    Ok(InfluenceSweep {
        l: opts.l,
        mode: opts.mode,
        delta: opts.delta,
        rows,
        flagged: if opts.mode == SweepMode::Hybrid {
            flagged.iter().map(|i| i + 1).collect()
        } else {
            Vec::new()
        },
        decompositions: analysis.decompositions(),
    })
}
