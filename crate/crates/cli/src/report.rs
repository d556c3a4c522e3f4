//! Serializable reports and their CSV renderings.
//!
//! Observation numbers are 1-based everywhere and every row carries the
//! original row label. CSV headers are fixed; new columns are only ever
//! appended.

use std::io::Write;

use eigensens_core::switching::{
    CascadeRound, HybridSeries, Measure, SwitchEvent, SwitchKind, SwitchReport,
};
use eigensens_core::{Analysis, Divisor, EstimatorKind, EstimatorSpec};
use serde::{Deserialize, Serialize};

use crate::sweep::InfluenceSweep;

/// Rounds to `digits` significant digits.
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{:.*e}", digits.saturating_sub(1), v)
        .parse()
        .unwrap_or(v)
}

fn round_opt(v: Option<f64>, digits: usize) -> Option<f64> {
    v.map(|x| round_sig(x, digits))
}

fn round_all(v: &[f64], digits: usize) -> Vec<f64> {
    v.iter().map(|&x| round_sig(x, digits)).collect()
}

pub fn estimator_name(kind: EstimatorKind) -> &'static str {
    match kind {
        EstimatorKind::Covariance => "cov",
        EstimatorKind::Correlation => "cor",
    }
}

pub fn divisor_name(d: Divisor) -> &'static str {
    match d {
        Divisor::N => "n",
        Divisor::NMinusOne => "n-1",
    }
}

/// Fields shared by every report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Header {
    pub command: String,
    pub input: String,
    pub estimator: String,
    pub divisor: String,
    pub n: usize,
    pub p: usize,
    pub columns: Vec<String>,
    pub eigenvalues: Vec<f64>,
    pub gap_warnings: Vec<[usize; 2]>,
}

impl Header {
    pub fn new(command: &str, input: &str, analysis: &Analysis<'_>, digits: usize) -> Self {
        let spec: EstimatorSpec = analysis.spec();
        Self {
            command: command.to_string(),
            input: input.to_string(),
            estimator: estimator_name(spec.kind).to_string(),
            divisor: divisor_name(spec.divisor).to_string(),
            n: analysis.n(),
            p: analysis.p(),
            columns: analysis.data().col_labels().to_vec(),
            eigenvalues: round_all(analysis.eigen().values(), digits),
            gap_warnings: analysis
                .eigen()
                .gap_warnings()
                .iter()
                .map(|&(a, b)| [a, b])
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScreeRow {
    pub component: usize,
    pub eigenvalue: f64,
    pub proportion: f64,
    pub cumulative: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LoadingRow {
    pub variable: String,
    pub loadings: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScoreRow {
    pub obs: usize,
    pub label: String,
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AnalyzeReport {
    #[serde(flatten)]
    pub header: Header,
    pub retained: usize,
    pub scree: Vec<ScreeRow>,
    pub loadings: Vec<LoadingRow>,
    pub scores: Vec<ScoreRow>,
}

impl AnalyzeReport {
    pub fn build(
        input: &str,
        analysis: &Analysis<'_>,
        l: usize,
        digits: usize,
    ) -> eigensens_core::Result<Self> {
        let values = analysis.eigen().values();
        let total: f64 = values.iter().sum();
        let mut cumulative = 0.0;
        let scree = values
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let proportion = if total > 0.0 { v / total } else { 0.0 };
                cumulative += proportion;
                ScreeRow {
                    component: j + 1,
                    eigenvalue: round_sig(v, digits),
                    proportion: round_sig(proportion, digits),
                    cumulative: round_sig(cumulative, digits),
                }
            })
            .collect();
        let sub = eigensens_core::subspace(analysis.eigen(), l)?;
        let loadings = analysis
            .data()
            .col_labels()
            .iter()
            .enumerate()
            .map(|(r, name)| LoadingRow {
                variable: name.clone(),
                loadings: round_all(sub.basis().row(r), digits),
            })
            .collect();
        let scores_m = eigensens_core::pc_scores(analysis.data(), &sub, true)?;
        let scores = (0..analysis.n())
            .map(|i| ScoreRow {
                obs: i + 1,
                label: analysis.data().row_labels()[i].clone(),
                scores: round_all(scores_m.row(i), digits),
            })
            .collect();
        Ok(Self {
            header: Header::new("analyze", input, analysis, digits),
            retained: l,
            scree,
            loadings,
            scores,
        })
    }

    /// Long format: `section,index,label,series,value`.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["section", "index", "label", "series", "value"])?;
        for row in &self.scree {
            let idx = row.component.to_string();
            for (series, v) in [
                ("eigenvalue", row.eigenvalue),
                ("proportion", row.proportion),
                ("cumulative", row.cumulative),
            ] {
                w.write_record(["scree", &idx, "", series, &v.to_string()])?;
            }
        }
        for row in &self.loadings {
            for (l, v) in row.loadings.iter().enumerate() {
                w.write_record([
                    "loadings",
                    &(l + 1).to_string(),
                    &row.variable,
                    &format!("PC{}", l + 1),
                    &v.to_string(),
                ])?;
            }
        }
        for row in &self.scores {
            for (l, v) in row.scores.iter().enumerate() {
                w.write_record([
                    "scores",
                    &row.obs.to_string(),
                    &row.label,
                    &format!("PC{}", l + 1),
                    &v.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EigenInfluenceRow {
    pub j: usize,
    pub sif: Option<f64>,
    pub eif: Option<f64>,
    pub hif: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InfluenceRow {
    pub obs: usize,
    pub label: String,
    pub sif_b: Option<f64>,
    pub eif_b: Option<f64>,
    pub sci: Option<f64>,
    pub scia: Option<f64>,
    pub switching: bool,
    pub near_switch: bool,
    pub replaced: bool,
    pub eigen: Vec<EigenInfluenceRow>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InfluenceReport {
    #[serde(flatten)]
    pub header: Header,
    pub retained: usize,
    pub mode: String,
    pub delta: f64,
    pub decompositions: usize,
    pub flagged: Vec<usize>,
    pub rows: Vec<InfluenceRow>,
}

impl InfluenceReport {
    pub fn build(
        input: &str,
        analysis: &Analysis<'_>,
        sweep: &InfluenceSweep,
        digits: usize,
    ) -> Self {
        let labels = analysis.data().row_labels();
        let rows = sweep
            .rows
            .iter()
            .map(|o| InfluenceRow {
                obs: o.record.obs,
                label: labels[o.record.obs - 1].clone(),
                sif_b: round_opt(o.record.sif_b, digits),
                eif_b: round_opt(o.record.eif_b, digits),
                sci: round_opt(o.record.sci, digits),
                scia: round_opt(o.record.scia, digits),
                switching: o.record.flags.switching,
                near_switch: o.record.flags.near_switch,
                replaced: o.record.flags.replaced,
                eigen: o
                    .eigen
                    .components
                    .iter()
                    .map(|c| EigenInfluenceRow {
                        j: c.j,
                        sif: round_opt(c.sif, digits),
                        eif: round_opt(c.eif, digits),
                        hif: round_sig(c.hif, digits),
                    })
                    .collect(),
                notes: o.record.notes.clone(),
            })
            .collect();
        Self {
            header: Header::new("influence", input, analysis, digits),
            retained: sweep.l,
            mode: sweep.mode.name().to_string(),
            delta: sweep.delta,
            decompositions: sweep.decompositions,
            flagged: sweep.flagged.clone(),
            rows,
        }
    }

    /// Wide format: `obs,label,sif_b,eif_b,sci,scia,switching,near_switch,replaced,
    /// sif_1..sif_p,eif_1..eif_p,hif_1..hif_p,notes`; empty cells are missing values.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let p = self.header.p;
        let mut w = csv::Writer::from_writer(out);
        let mut head: Vec<String> = [
            "obs",
            "label",
            "sif_b",
            "eif_b",
            "sci",
            "scia",
            "switching",
            "near_switch",
            "replaced",
        ]
        .map(String::from)
        .to_vec();
        for name in ["sif", "eif", "hif"] {
            head.extend((1..=p).map(|j| format!("{name}_{j}")));
        }
        head.push("notes".into());
        w.write_record(&head)?;
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            let mut rec = vec![
                r.obs.to_string(),
                r.label.clone(),
                cell(r.sif_b),
                cell(r.eif_b),
                cell(r.sci),
                cell(r.scia),
                r.switching.to_string(),
                r.near_switch.to_string(),
                r.replaced.to_string(),
            ];
            rec.extend(r.eigen.iter().map(|e| cell(e.sif)));
            rec.extend(r.eigen.iter().map(|e| cell(e.eif)));
            rec.extend(r.eigen.iter().map(|e| e.hif.to_string()));
            rec.push(r.notes.join("; "));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EventRow {
    pub obs: usize,
    pub label: String,
    pub pair: [usize; 2],
    pub kind: String,
    pub approx_lo: f64,
    pub approx_hi: f64,
    pub verified_exact: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RecommendationRow {
    pub candidate: usize,
    pub recommended_l: Option<usize>,
    pub rationale: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ApproxRow {
    pub obs: usize,
    pub label: String,
    pub approx_eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HybridRow {
    pub obs: usize,
    pub label: String,
    pub value: Option<f64>,
    pub replaced: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HybridBlock {
    pub retained: usize,
    pub measure: String,
    pub loo_decompositions: usize,
    pub series: Vec<HybridRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CascadeRow {
    pub round: usize,
    pub rows: usize,
    pub removed: Vec<usize>,
    pub events: Vec<EventRow>,
    pub recommendation: Option<RecommendationRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SwitchingReport {
    #[serde(flatten)]
    pub header: Header,
    pub mode: String,
    pub delta: f64,
    pub pairs: Vec<[usize; 2]>,
    pub near_pairs: Vec<[usize; 2]>,
    pub events: Vec<EventRow>,
    pub switching_observations: Vec<usize>,
    pub near_switch_observations: Vec<usize>,
    pub recommendation: Option<RecommendationRow>,
    pub approx_table: Vec<ApproxRow>,
    pub hybrid: Option<HybridBlock>,
    pub cascade: Option<Vec<CascadeRow>>,
}

fn kind_name(kind: SwitchKind) -> &'static str {
    match kind {
        SwitchKind::Switch => "switch",
        SwitchKind::NearSwitch => "near_switch",
    }
}

fn event_rows(events: &[SwitchEvent], labels: &[String], digits: usize) -> Vec<EventRow> {
    events
        .iter()
        .map(|e| EventRow {
            obs: e.obs,
            label: labels[e.obs - 1].clone(),
            pair: [e.pair.0, e.pair.1],
            kind: kind_name(e.kind).to_string(),
            approx_lo: round_sig(e.approx_lo, digits),
            approx_hi: round_sig(e.approx_hi, digits),
            verified_exact: e.verified_exact,
        })
        .collect()
}

fn recommendation_row(r: &eigensens_core::Recommendation) -> RecommendationRow {
    RecommendationRow {
        candidate: r.candidate,
        recommended_l: r.l,
        rationale: r.rationale.clone(),
    }
}

fn hybrid_block(h: &HybridSeries, labels: &[String], digits: usize) -> HybridBlock {
    HybridBlock {
        retained: h.l,
        measure: match h.measure {
            Measure::B => "B",
            Measure::C => "C",
        }
        .to_string(),
        loo_decompositions: h.loo_decompositions,
        series: h
            .entries
            .iter()
            .map(|e| HybridRow {
                obs: e.obs,
                label: labels[e.obs - 1].clone(),
                value: round_opt(e.value, digits),
                replaced: e.replaced,
                note: e.note.clone(),
            })
            .collect(),
    }
}

impl SwitchingReport {
    pub fn build(
        input: &str,
        analysis: &Analysis<'_>,
        pairs: &[(usize, usize)],
        near_pairs: &[(usize, usize)],
        report: &SwitchReport,
        cascade: Option<&[CascadeRound]>,
        digits: usize,
    ) -> Self {
        let labels = analysis.data().row_labels();
        let mode = match report.mode {
            eigensens_core::DetectionMode::Approx if report.hybrid.is_some() => "hybrid",
            eigensens_core::DetectionMode::Approx => "approx",
            eigensens_core::DetectionMode::Exact => "exact",
        };
        Self {
            header: Header::new("switching", input, analysis, digits),
            mode: mode.to_string(),
            delta: report.delta,
            pairs: pairs.iter().map(|&(a, b)| [a, b]).collect(),
            near_pairs: near_pairs.iter().map(|&(a, b)| [a, b]).collect(),
            events: event_rows(&report.events, labels, digits),
            switching_observations: report.observations(SwitchKind::Switch),
            near_switch_observations: report.observations(SwitchKind::NearSwitch),
            recommendation: report.recommendation.as_ref().map(recommendation_row),
            approx_table: report
                .flagged_table
                .iter()
                .map(|r| ApproxRow {
                    obs: r.obs,
                    label: labels[r.obs - 1].clone(),
                    approx_eigenvalues: round_all(&r.approx_values, digits),
                })
                .collect(),
            hybrid: report
                .hybrid
                .as_ref()
                .map(|h| hybrid_block(h, labels, digits)),
            cascade: cascade.map(|rounds| {
                rounds
                    .iter()
                    .map(|r| CascadeRow {
                        round: r.round,
                        rows: r.rows,
                        removed: r.removed.clone(),
                        events: event_rows(&r.report.events, labels, digits),
                        recommendation: r.report.recommendation.as_ref().map(recommendation_row),
                    })
                    .collect()
            }),
        }
    }

    /// Event table: `obs,label,j,k,kind,approx_lo,approx_hi,verified_exact`.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "obs",
            "label",
            "j",
            "k",
            "kind",
            "approx_lo",
            "approx_hi",
            "verified_exact",
        ])?;
        for e in &self.events {
            w.write_record([
                e.obs.to_string(),
                e.label.clone(),
                e.pair[0].to_string(),
                e.pair[1].to_string(),
                e.kind.clone(),
                e.approx_lo.to_string(),
                e.approx_hi.to_string(),
                e.verified_exact.map(|b| b.to_string()).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
