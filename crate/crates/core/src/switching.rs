//! Eigenvalue switching: detection, exact confirmation, retention advice,
//! SIF-replaced influence series and deletion cascades.
//!
//! An observation switches the pair `(j, j+1)` when its removal reverses the
//! order of those eigenvalues. Sorted post-removal eigenvalues cannot show
//! this, so detection compares the rank-preserving approximations
//! `λ̃ⱼ₍ᵢ₎ < λ̃ⱼ₊₁₍ᵢ₎`. Exact confirmation aligns the leave-one-out
//! eigenvectors of the pair with the full-data ones instead.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::analysis::Analysis;
use crate::dataset::{DataMatrix, EstimatorSpec};
use crate::eigen::EigenSystem;
use crate::error::{Error, Result};
use crate::influence::LooEigenApprox;
use crate::matrix::dot;

/// Adjacent 1-based component pair `(j, j+1)`.
pub type Pair = (usize, usize);

/// Default near-switch threshold.
pub const DEFAULT_DELTA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SwitchKind {
    Switch,
    NearSwitch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchEvent {
    /// 1-based observation number.
    pub obs: usize,
    pub pair: Pair,
    /// Value at rank `j` (approximation, or aligned exact value in exact mode).
    pub approx_lo: f64,
    /// Value at rank `j + 1`.
    pub approx_hi: f64,
    pub kind: SwitchKind,
    pub verified_exact: Option<bool>,
}

impl SwitchEvent {
    /// 0-based row index.
    pub fn row(&self) -> usize {
        self.obs - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetectionMode {
    /// Rank-preserving approximations; no extra decompositions.
    #[default]
    Approx,
    /// Aligned exact leave-one-out decompositions (`n` extra decompositions).
    Exact,
}

/// Which influence pair a hybrid series is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// `EIF_B`, replaced by `SIF_B`.
    B,
    /// `SCIA`, replaced by `SCI`.
    C,
}

/// All adjacent pairs of a `p`-dimensional problem, or the validated
/// subset given, sorted and deduplicated.
pub fn resolve_pairs(p: usize, pairs: Option<&[Pair]>) -> Result<Vec<Pair>> {
    match pairs {
        None => Ok((1..p).map(|j| (j, j + 1)).collect()),
        Some(list) => {
            let mut set = BTreeSet::new();
            for &(j, k) in list {
                if j == 0 || k != j + 1 || k > p {
                    return Err(Error::InvalidPair { j, k });
                }
                set.insert((j, k));
            }
            Ok(set.into_iter().collect())
        }
    }
}

fn sort_events(events: &mut [SwitchEvent]) {
    events.sort_by_key(|e| (e.pair, e.obs));
}

/// Switch events in a table of approximations.
pub fn switch_events(table: &[LooEigenApprox], pairs: &[Pair]) -> Vec<SwitchEvent> {
    let mut out = Vec::new();
    for row in table {
        for &(j, k) in pairs {
            let lo = row.approx_values[j - 1];
            let hi = row.approx_values[k - 1];
            if lo < hi {
                out.push(SwitchEvent {
                    obs: row.obs,
                    pair: (j, k),
                    approx_lo: lo,
                    approx_hi: hi,
                    kind: SwitchKind::Switch,
                    verified_exact: None,
                });
            }
        }
    }
    sort_events(&mut out);
    out
}

/// Events with `|λ̃ⱼ₍ᵢ₎ − λ̃ⱼ₊₁₍ᵢ₎| < delta`; those that also switch are
/// reported with kind `Switch`.
pub fn near_switch_events(
    table: &[LooEigenApprox],
    pairs: &[Pair],
    delta: f64,
) -> Vec<SwitchEvent> {
    let mut out = Vec::new();
    for row in table {
        for &(j, k) in pairs {
            let lo = row.approx_values[j - 1];
            let hi = row.approx_values[k - 1];
            if (lo - hi).abs() < delta {
                let kind = if lo < hi {
                    SwitchKind::Switch
                } else {
                    SwitchKind::NearSwitch
                };
                out.push(SwitchEvent {
                    obs: row.obs,
                    pair: (j, k),
                    approx_lo: lo,
                    approx_hi: hi,
                    kind,
                    verified_exact: None,
                });
            }
        }
    }
    sort_events(&mut out);
    out
}

/// Switch events plus near-switch events that are not already switches.
pub fn merge_events(switches: &[SwitchEvent], near: &[SwitchEvent]) -> Vec<SwitchEvent> {
    let seen: BTreeSet<(Pair, usize)> = switches.iter().map(|e| (e.pair, e.obs)).collect();
    let mut out: Vec<SwitchEvent> = switches.to_vec();
    out.extend(
        near.iter()
            .filter(|e| !seen.contains(&(e.pair, e.obs)))
            .copied(),
    );
    sort_events(&mut out);
    out
}

/// Outcome of checking one pair against an exact leave-one-out decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactPairCheck {
    /// The leave-one-out eigenvectors at ranks `j, j+1` align crosswise with
    /// the full-data ones.
    pub crossed: bool,
    /// Exact value whose eigenvector aligns with full-data `η̂ⱼ`.
    pub aligned_lo: f64,
    /// Exact value whose eigenvector aligns with full-data `η̂ⱼ₊₁`.
    pub aligned_hi: f64,
}

/// Aligns ranks `j, j+1` of `loo` to `full` by the assignment maximising the
/// summed squared eigenvector overlaps.
pub fn exact_pair_check(full: &EigenSystem, loo: &EigenSystem, pair: Pair) -> ExactPairCheck {
    let (a, b) = (pair.0 - 1, pair.1 - 1);
    let overlap = |f: usize, l: usize| {
        let d = dot(&full.vector(f), &loo.vector(l));
        d * d
    };
    let straight = overlap(a, a) + overlap(b, b);
    let crossed = overlap(a, b) + overlap(b, a) > straight;
    let v = loo.values();
    let (aligned_lo, aligned_hi) = if crossed { (v[b], v[a]) } else { (v[a], v[b]) };
    ExactPairCheck {
        crossed,
        aligned_lo,
        aligned_hi,
    }
}

/// Retention advice.
#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation {
    pub candidate: usize,
    /// `None` when every admissible boundary switches.
    pub l: Option<usize>,
    pub rationale: String,
}

/// Moves the retained count off switching boundaries, preferring `L + 1`
/// (both eigenvectors of the switching pair retained) and falling back to
/// `L − 1` when the upward search would reach `p`.
pub fn recommend_l(p: usize, candidate: usize, events: &[SwitchEvent]) -> Result<Recommendation> {
    if candidate == 0 || candidate >= p {
        return Err(Error::InvalidParameter {
            name: "candidate L",
            reason: format!("{candidate} is outside 1..{p}"),
        });
    }
    let switching: BTreeSet<usize> = events
        .iter()
        .filter(|e| e.kind == SwitchKind::Switch)
        .map(|e| e.pair.0)
        .collect();
    let describe = |j: usize| {
        let obs: Vec<String> = events
            .iter()
            .filter(|e| e.kind == SwitchKind::Switch && e.pair.0 == j)
            .map(|e| e.obs.to_string())
            .collect();
        format!(
            "pair ({j},{}) switches for observations {}",
            j + 1,
            obs.join(", ")
        )
    };
    if !switching.contains(&candidate) {
        return Ok(Recommendation {
            candidate,
            l: Some(candidate),
            rationale: format!(
                "no switching between eigenvalues {candidate} and {}",
                candidate + 1
            ),
        });
    }

    let mut crossed: Vec<String> = Vec::new();
    let mut up = candidate;
    while switching.contains(&up) && up + 1 < p {
        crossed.push(describe(up));
        up += 1;
    }
    if !switching.contains(&up) {
        return Ok(Recommendation {
            candidate,
            l: Some(up),
            rationale: format!(
                "{}; retaining {up} keeps both eigenvectors of each switching pair",
                crossed.join("; ")
            ),
        });
    }

    let mut down = candidate - 1;
    while down >= 1 && switching.contains(&down) {
        down -= 1;
    }
    if down >= 1 {
        return Ok(Recommendation {
            candidate,
            l: Some(down),
            rationale: format!(
                "{}; no larger count below p avoids switching, retaining {down} instead",
                describe(candidate)
            ),
        });
    }
    Err(Error::NoValidRetention {
        candidate,
        switching_pairs: switching.iter().map(|&j| (j, j + 1)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridEntry {
    /// 1-based observation number.
    pub obs: usize,
    pub value: Option<f64>,
    pub replaced: bool,
    pub note: Option<String>,
}

/// Empirical influence with selected entries replaced by sample influence.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridSeries {
    pub l: usize,
    pub measure: Measure,
    pub entries: Vec<HybridEntry>,
    /// Leave-one-out decompositions spent on the replaced entries.
    pub loo_decompositions: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchOptions {
    pub pairs: Option<Vec<Pair>>,
    /// Pairs scanned for near-switches; `None` means the same as `pairs`.
    /// Must be a subset of the switch pairs.
    pub near_pairs: Option<Vec<Pair>>,
    pub delta: f64,
    pub candidate_l: Option<usize>,
    pub mode: DetectionMode,
    /// Confirm approximation events with exact decompositions.
    pub verify: bool,
    /// Build a hybrid series for `(L, measure)` over the flagged observations.
    pub hybrid: Option<(usize, Measure)>,
}

impl Default for SwitchOptions {
    fn default() -> Self {
        Self {
            pairs: None,
            near_pairs: None,
            delta: DEFAULT_DELTA,
            candidate_l: None,
            mode: DetectionMode::Approx,
            verify: false,
            hybrid: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchReport {
    /// Sorted by `(pair, obs)`.
    pub events: Vec<SwitchEvent>,
    pub recommendation: Option<Recommendation>,
    pub hybrid: Option<HybridSeries>,
    pub delta: f64,
    pub mode: DetectionMode,
    /// Approximated post-removal eigenvalues of every observation with an event.
    pub flagged_table: Vec<LooEigenApprox>,
}

impl SwitchReport {
    /// Distinct observations (1-based) with at least one event of `kind`.
    pub fn observations(&self, kind: SwitchKind) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .events
            .iter()
            .filter(|e| e.kind == kind)
            .map(|e| e.obs)
            .collect();
        set.into_iter().collect()
    }
}

impl Analysis<'_> {
    /// Approximations for every observation, in row order.
    pub fn approx_table(&self) -> Result<Vec<LooEigenApprox>> {
        (0..self.n())
            .map(|i| self.approx_eigenvalues_loo(i))
            .collect()
    }

    pub fn detect_switching(&self, pairs: Option<&[Pair]>) -> Result<Vec<SwitchEvent>> {
        let pairs = resolve_pairs(self.p(), pairs)?;
        Ok(switch_events(&self.approx_table()?, &pairs))
    }

    pub fn detect_near_switch(
        &self,
        pairs: Option<&[Pair]>,
        delta: f64,
    ) -> Result<Vec<SwitchEvent>> {
        let pairs = resolve_pairs(self.p(), pairs)?;
        Ok(near_switch_events(&self.approx_table()?, &pairs, delta))
    }

    /// Exact-mode detection: one decomposition per observation; switch and
    /// near-switch events from aligned exact eigenvalues, all marked verified.
    pub fn detect_exact(&self, pairs: Option<&[Pair]>, delta: f64) -> Result<Vec<SwitchEvent>> {
        let pairs = resolve_pairs(self.p(), pairs)?;
        let mut out = Vec::new();
        for i in 0..self.n() {
            let loo = self.loo_eigen(i)?;
            for &pair in &pairs {
                let check = exact_pair_check(self.eigen(), &loo, pair);
                let (lo, hi) = (check.aligned_lo, check.aligned_hi);
                let kind = if check.crossed && lo < hi {
                    Some(SwitchKind::Switch)
                } else if (lo - hi).abs() < delta {
                    Some(SwitchKind::NearSwitch)
                } else {
                    None
                };
                if let Some(kind) = kind {
                    out.push(SwitchEvent {
                        obs: i + 1,
                        pair,
                        approx_lo: lo,
                        approx_hi: hi,
                        kind,
                        verified_exact: Some(kind == SwitchKind::Switch),
                    });
                }
            }
        }
        sort_events(&mut out);
        Ok(out)
    }

    /// Fills `verified_exact` using one decomposition per distinct observation.
    pub fn verify_exact(&self, events: &[SwitchEvent]) -> Result<Vec<SwitchEvent>> {
        let mut cache: Vec<(usize, EigenSystem)> = Vec::new();
        let mut out = Vec::with_capacity(events.len());
        for ev in events {
            self.check_obs(ev.row())?;
            resolve_pairs(self.p(), Some(&[ev.pair]))?;
            let pos = match cache.iter().position(|(o, _)| *o == ev.obs) {
                Some(pos) => pos,
                None => {
                    cache.push((ev.obs, self.loo_eigen(ev.row())?));
                    cache.len() - 1
                }
            };
            let check = exact_pair_check(self.eigen(), &cache[pos].1, ev.pair);
            out.push(SwitchEvent {
                verified_exact: Some(check.crossed),
                ..*ev
            });
        }
        Ok(out)
    }

    /// Runs switch detection on every pair and applies [`recommend_l`].
    pub fn recommend_l(&self, candidate: usize) -> Result<Recommendation> {
        let events = self.detect_switching(None)?;
        recommend_l(self.p(), candidate, &events)
    }

    /// Empirical series for `measure` with `flagged` (0-based) rows replaced by
    /// the sample measure; spends exactly one decomposition per distinct
    /// flagged row.
    pub fn hybrid_influence(
        &self,
        l: usize,
        flagged: &[usize],
        measure: Measure,
    ) -> Result<HybridSeries> {
        if l == 0 || l > self.p() {
            return Err(Error::InvalidParameter {
                name: "L",
                reason: format!("{l} is outside 1..={}", self.p()),
            });
        }
        for &i in flagged {
            self.check_obs(i)?;
        }
        let flagged: BTreeSet<usize> = flagged.iter().copied().collect();
        let before = self.decompositions();
        let mut entries = Vec::with_capacity(self.n());
        for i in 0..self.n() {
            let replaced = flagged.contains(&i);
            let value = if replaced {
                self.sample_measures(l, i).map(|m| match measure {
                    Measure::B => m.sif_b,
                    Measure::C => m.sci,
                })
            } else {
                match measure {
                    Measure::B => self.eif_b(l, i),
                    Measure::C => self.scia(l, i),
                }
            };
            let (value, note) = match value {
                Ok(v) => (Some(v), None),
                Err(e) => (None, Some(e.to_string())),
            };
            entries.push(HybridEntry {
                obs: i + 1,
                value,
                replaced,
                note,
            });
        }
        Ok(HybridSeries {
            l,
            measure,
            entries,
            loo_decompositions: self.decompositions() - before,
        })
    }

    /// Detection, optional verification, retention advice and hybrid series.
    pub fn switch_report(&self, opts: &SwitchOptions) -> Result<SwitchReport> {
        let pairs = resolve_pairs(self.p(), opts.pairs.as_deref())?;
        let near_pairs = match &opts.near_pairs {
            Some(np) => {
                let np = resolve_pairs(self.p(), Some(np))?;
                if let Some(pair) = np.iter().find(|q| !pairs.contains(q)) {
                    return Err(Error::InvalidParameter {
                        name: "near_pairs",
                        reason: format!("({}, {}) is not among the scanned pairs", pair.0, pair.1),
                    });
                }
                np
            }
            None => pairs.clone(),
        };
        let table = self.approx_table()?;
        let mut events = match opts.mode {
            DetectionMode::Approx => merge_events(
                &switch_events(&table, &pairs),
                &near_switch_events(&table, &near_pairs, opts.delta),
            ),
            DetectionMode::Exact => {
                let mut ev = self.detect_exact(Some(&pairs), opts.delta)?;
                ev.retain(|e| e.kind == SwitchKind::Switch || near_pairs.contains(&e.pair));
                ev
            }
        };
        if opts.verify && opts.mode == DetectionMode::Approx {
            events = self.verify_exact(&events)?;
        }
        let recommendation = opts
            .candidate_l
            .map(|c| recommendation_or_failure(self.p(), c, &events))
            .transpose()?;
        let flagged: BTreeSet<usize> = events.iter().map(|e| e.row()).collect();
        let hybrid = match opts.hybrid {
            Some((l, measure)) => {
                let rows: Vec<usize> = flagged.iter().copied().collect();
                Some(self.hybrid_influence(l, &rows, measure)?)
            }
            None => None,
        };
        let flagged_table = flagged.iter().map(|&i| table[i].clone()).collect();
        Ok(SwitchReport {
            events,
            recommendation,
            hybrid,
            delta: opts.delta,
            mode: opts.mode,
            flagged_table,
        })
    }
}

/// Turns a failed recommendation into a report entry; parameter errors still propagate.
fn recommendation_or_failure(
    p: usize,
    candidate: usize,
    events: &[SwitchEvent],
) -> Result<Recommendation> {
    match recommend_l(p, candidate, events) {
        Ok(r) => Ok(r),
        Err(e @ Error::NoValidRetention { .. }) => Ok(Recommendation {
            candidate,
            l: None,
            rationale: e.to_string(),
        }),
        Err(e) => Err(e),
    }
}

/// One round of a deletion cascade.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeRound {
    /// 1-based round number.
    pub round: usize,
    /// Rows analysed in this round.
    pub rows: usize,
    /// Report with observation numbers mapped back to the original data.
    pub report: SwitchReport,
    /// Original observation numbers deleted after this round.
    pub removed: Vec<usize>,
}

/// Repeatedly deletes every switching observation and re-detects, until no
/// switch remains or `max_rounds` is reached.
pub fn cascade_scan(
    data: &DataMatrix,
    spec: EstimatorSpec,
    opts: &SwitchOptions,
    max_rounds: usize,
) -> Result<Vec<CascadeRound>> {
    if max_rounds == 0 {
        return Err(Error::InvalidParameter {
            name: "max_rounds",
            reason: "must be at least 1".to_string(),
        });
    }
    let opts = SwitchOptions {
        hybrid: None,
        ..opts.clone()
    };
    let mut current = data.clone();
    let mut original: Vec<usize> = (0..data.n()).collect();
    let mut rounds = Vec::new();
    loop {
        let analysis = Analysis::new(&current, spec)?;
        let local = SwitchOptions {
            candidate_l: None,
            ..opts.clone()
        };
        let mut report = analysis.switch_report(&local)?;
        for ev in &mut report.events {
            ev.obs = original[ev.row()] + 1;
        }
        for row in &mut report.flagged_table {
            row.obs = original[row.obs - 1] + 1;
        }
        report.recommendation = opts
            .candidate_l
            .map(|c| recommendation_or_failure(current.p(), c, &report.events))
            .transpose()?;

        let local_rows: BTreeSet<usize> = report
            .events
            .iter()
            .filter(|e| e.kind == SwitchKind::Switch)
            .map(|e| {
                original
                    .iter()
                    .position(|&o| o + 1 == e.obs)
                    .expect("event maps to a current row")
            })
            .collect();
        let removed: Vec<usize> = local_rows.iter().map(|&r| original[r] + 1).collect();
        let done = removed.is_empty() || rounds.len() + 1 == max_rounds;
        rounds.push(CascadeRound {
            round: rounds.len() + 1,
            rows: current.n(),
            report,
            removed,
        });
        if done {
            break;
        }
        let drop: Vec<usize> = local_rows.into_iter().collect();
        if current.n() - drop.len() < 3 {
            return Err(Error::TooFewObservations {
                n: current.n() - drop.len(),
                required: 3,
            });
        }
        current = current.without_rows(&drop)?;
        original = original
            .into_iter()
            .enumerate()
            .filter(|(r, _)| !drop.contains(r))
            .map(|(_, o)| o)
            .collect();
    }
    Ok(rounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(obs: usize, j: usize, kind: SwitchKind) -> SwitchEvent {
        SwitchEvent {
            obs,
            pair: (j, j + 1),
            approx_lo: 1.0,
            approx_hi: 2.0,
            kind,
            verified_exact: None,
        }
    }

    fn row(obs: usize, values: &[f64]) -> LooEigenApprox {
        LooEigenApprox {
            obs,
            approx_values: values.to_vec(),
            exact_values: None,
            loo_trace: values.iter().sum(),
        }
    }

    #[test]
    fn pairs_validated() {
        assert_eq!(resolve_pairs(4, None).unwrap(), [(1, 2), (2, 3), (3, 4)]);
        assert_eq!(
            resolve_pairs(4, Some(&[(3, 4), (1, 2), (3, 4)])).unwrap(),
            [(1, 2), (3, 4)]
        );
        assert_eq!(
            resolve_pairs(4, Some(&[(2, 4)])),
            Err(Error::InvalidPair { j: 2, k: 4 })
        );
        assert_eq!(
            resolve_pairs(4, Some(&[(4, 5)])),
            Err(Error::InvalidPair { j: 4, k: 5 })
        );
        assert_eq!(
            resolve_pairs(4, Some(&[(0, 1)])),
            Err(Error::InvalidPair { j: 0, k: 1 })
        );
    }

    #[test]
    fn switch_and_near_switch_from_table() {
        let table = [
            row(1, &[5.0, 2.0, 2.05, 1.0]),
            row(2, &[5.0, 2.0, 1.0, 0.5]),
            row(3, &[5.0, 1.9, 1.95, 1.9]),
        ];
        let pairs = resolve_pairs(4, None).unwrap();
        let sw = switch_events(&table, &pairs);
        assert_eq!(
            sw.iter().map(|e| (e.obs, e.pair)).collect::<Vec<_>>(),
            [(1, (2, 3)), (3, (2, 3))]
        );
        let near = near_switch_events(&table, &pairs, 0.1);
        assert!(near
            .iter()
            .any(|e| e.obs == 3 && e.pair == (3, 4) && e.kind == SwitchKind::NearSwitch));
        assert!(near.iter().all(|e| (e.approx_lo - e.approx_hi).abs() < 0.1));
        assert!(near_switch_events(&table, &pairs, 0.0).is_empty());
        assert_eq!(near_switch_events(&table, &pairs, f64::INFINITY).len(), 9);
        let merged = merge_events(&sw, &near);
        let dup = merged
            .iter()
            .filter(|e| e.obs == 1 && e.pair == (2, 3))
            .count();
        assert_eq!(dup, 1);
    }

    #[test]
    fn recommend_unchanged_without_events() {
        let r = recommend_l(7, 2, &[]).unwrap();
        assert_eq!(r.l, Some(2));
    }

    #[test]
    fn recommend_prefers_larger() {
        let r = recommend_l(
            7,
            2,
            &[
                ev(57, 2, SwitchKind::Switch),
                ev(9, 2, SwitchKind::NearSwitch),
            ],
        )
        .unwrap();
        assert_eq!(r.l, Some(3));
        assert!(r.rationale.contains("pair (2,3)") && r.rationale.contains("57"));
    }

    #[test]
    fn recommend_escalates_past_consecutive_boundaries() {
        let events = [ev(1, 2, SwitchKind::Switch), ev(4, 3, SwitchKind::Switch)];
        assert_eq!(recommend_l(6, 2, &events).unwrap().l, Some(4));
    }

    #[test]
    fn recommend_falls_back_at_top() {
        // candidate + 1 = p
        assert_eq!(
            recommend_l(4, 3, &[ev(1, 3, SwitchKind::Switch)])
                .unwrap()
                .l,
            Some(2)
        );
        // upward search runs into p
        let events = [ev(1, 2, SwitchKind::Switch), ev(1, 3, SwitchKind::Switch)];
        assert_eq!(recommend_l(4, 2, &events).unwrap().l, Some(1));
    }

    #[test]
    fn recommend_fails_when_all_boundaries_switch() {
        let events = [ev(1, 1, SwitchKind::Switch), ev(1, 2, SwitchKind::Switch)];
        assert_eq!(
            recommend_l(3, 1, &events),
            Err(Error::NoValidRetention {
                candidate: 1,
                switching_pairs: alloc::vec![(1, 2), (2, 3)]
            })
        );
        assert!(recommend_l(3, 3, &[]).is_err());
    }
}
