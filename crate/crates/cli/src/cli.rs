//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eigensens_core::switching::{
    cascade_scan, resolve_pairs, DetectionMode, Measure, Pair, SwitchOptions,
};
use eigensens_core::{Analysis, DataMatrix, Divisor, EstimatorKind, EstimatorSpec};
use serde::Serialize;

use crate::assets;
use crate::csv_input::{load_csv, CsvOptions, LoadError};
use crate::report::{AnalyzeReport, InfluenceReport, SwitchingReport};
use crate::sweep::{influence_sweep, SweepError, SweepMode, SweepOptions};

/// `--input` value selecting the bundled fatty acid data.
pub const BUILTIN_FATTY_ACIDS: &str = "builtin:fatty-acids";

#[derive(Debug, Parser)]
#[command(
    name = "eigensens",
    version,
    about = "Influence diagnostics and eigenvalue switching for principal component analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues, loadings and scores.
    Analyze(CommonArgs),
    /// Per-observation influence on eigenvalues and the retained subspace.
    Influence(InfluenceArgs),
    /// Eigenvalue switching detection and retention advice.
    Switching(SwitchingArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Cov,
    Cor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DivisorArg {
    #[value(name = "n")]
    N,
    #[value(name = "n-1")]
    NMinusOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Approx,
    Exact,
    Hybrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "C", alias = "c")]
    C,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// CSV file, or `builtin:fatty-acids`.
    #[arg(long, short)]
    pub input: String,
    /// Column holding row labels (name, or 1-based position with --no-header).
    #[arg(long)]
    pub label_col: Option<String>,
    /// The first row is data.
    #[arg(long)]
    pub no_header: bool,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Cov)]
    pub estimator: EstimatorArg,
    #[arg(long, value_enum, default_value_t = DivisorArg::NMinusOne)]
    pub divisor: DivisorArg,
    /// Number of retained components.
    #[arg(long = "L", short = 'L', default_value_t = 2)]
    pub l: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Significant digits in the output.
    #[arg(long, default_value_t = 6)]
    pub precision: usize,
    /// Worker threads.
    #[arg(long, env = "EIGENSENS_JOBS")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct DetectionArgs {
    /// Near-switch threshold on approximate eigenvalue differences.
    #[arg(long, default_value_t = eigensens_core::switching::DEFAULT_DELTA)]
    pub delta: f64,
    /// Adjacent 1-based pairs to scan, e.g. `1:2,2:3`; all pairs when absent.
    #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
    pub pairs: Option<Vec<Pair>>,
    #[arg(long, value_enum, default_value_t = ModeArg::Approx)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Args)]
pub struct InfluenceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub detection: DetectionArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SwitchingArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub detection: DetectionArgs,
    /// Check approximate events against exact leave-one-out decompositions.
    #[arg(long)]
    pub verify: bool,
    /// Subspace measure for the hybrid series.
    #[arg(long, value_enum, default_value_t = MeasureArg::B)]
    pub measure: MeasureArg,
    /// Repeat detection after deleting switching observations, at most this many rounds.
    #[arg(long)]
    pub cascade_rounds: Option<usize>,
}

fn parse_pair(s: &str) -> Result<Pair, String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("{s:?} is not of the form j:k"))?;
    let j = a
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("{a:?}: {e}"))?;
    let k = b
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("{b:?}: {e}"))?;
    Ok((j, k))
}

/// Failure with its exit status: 2 for configuration, 1 for data.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Data(String),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) | CliError::Output(_) => 1,
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Io { .. } | LoadError::MissingLabelColumn(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<eigensens_core::Error> for CliError {
    fn from(e: eigensens_core::Error) -> Self {
        use eigensens_core::Error as E;
        match e {
            E::IndexOutOfRange { .. }
            | E::InvalidPair { .. }
            | E::InvalidParameter { .. }
            | E::UnsupportedEstimator { .. } => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Core(c) => c.into(),
            SweepError::Pool(p) => CliError::Config(p.to_string()),
        }
    }
}

impl CommonArgs {
    fn spec(&self) -> EstimatorSpec {
        EstimatorSpec {
            kind: match self.estimator {
                EstimatorArg::Cov => EstimatorKind::Covariance,
                EstimatorArg::Cor => EstimatorKind::Correlation,
            },
            divisor: match self.divisor {
                DivisorArg::N => Divisor::N,
                DivisorArg::NMinusOne => Divisor::NMinusOne,
            },
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.l == 0 {
            return Err(CliError::Config("--L must be at least 1".into()));
        }
        if !(1..=17).contains(&self.precision) {
            return Err(CliError::Config(
                "--precision must be between 1 and 17".into(),
            ));
        }
        if self.jobs == Some(0) {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        Ok(())
    }

    fn load(&self) -> Result<DataMatrix, CliError> {
        if self.input == BUILTIN_FATTY_ACIDS {
            if self.no_header || self.label_col.is_some() {
                return Err(CliError::Config(
                    "--no-header and --label-col do not apply to bundled data".into(),
                ));
            }
            return Ok(assets::fatty_acids()?);
        }
        let mut opts = CsvOptions {
            has_header: !self.no_header,
            label_column: self.label_col.clone(),
        };
        if opts.label_column.as_deref() == Some("") {
            opts.label_column = None;
        }
        Ok(load_csv(&self.input, &opts)?)
    }

    fn check_l(&self, p: usize) -> Result<(), CliError> {
        if self.l > p {
            return Err(CliError::Config(format!(
                "--L {} exceeds the number of variables ({p})",
                self.l
            )));
        }
        Ok(())
    }
}

impl DetectionArgs {
    fn validate(&self) -> Result<(), CliError> {
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(CliError::Config("--delta must be a positive number".into()));
        }
        Ok(())
    }

    /// Switch and near-switch pairs. Without `--pairs`, switches are sought on
    /// every adjacent pair and near-switches only at the retention boundary.
    fn scopes(&self, p: usize, l: usize) -> Result<(Vec<Pair>, Vec<Pair>), CliError> {
        let pairs = resolve_pairs(p, self.pairs.as_deref())?;
        let near = match &self.pairs {
            Some(_) => pairs.clone(),
            None if l < p => vec![(l, l + 1)],
            None => Vec::new(),
        };
        Ok((pairs, near))
    }
}

fn warn_gaps(analysis: &Analysis<'_>, err: &mut dyn Write) {
    for (j, k) in analysis.eigen().gap_warnings() {
        let _ = writeln!(err, "warning: eigenvalues {j} and {k} are numerically tied; their eigenvectors are not unique");
    }
}

fn emit<T: Serialize>(
    common: &CommonArgs,
    report: &T,
    csv: impl FnOnce(&mut dyn Write) -> csv::Result<()>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let out_err = |e: &dyn std::fmt::Display| CliError::Output(e.to_string());
    let mut file;
    let sink: &mut dyn Write = match &common.out {
        Some(path) => {
            file = std::io::BufWriter::new(std::fs::File::create(path).map_err(|e| out_err(&e))?);
            &mut file
        }
        None => stdout,
    };
    match common.format {
        FormatArg::Json => {
            serde_json::to_writer_pretty(&mut *sink, report).map_err(|e| out_err(&e))?;
            writeln!(sink).map_err(|e| out_err(&e))?;
        }
        FormatArg::Csv => csv(&mut *sink).map_err(|e| out_err(&e))?,
    }
    sink.flush().map_err(|e| out_err(&e))
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    match run(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(common) => {
            common.validate()?;
            let data = common.load()?;
            common.check_l(data.p())?;
            let analysis = Analysis::new(&data, common.spec())?;
            warn_gaps(&analysis, stderr);
            let report =
                AnalyzeReport::build(&common.input, &analysis, common.l, common.precision)?;
            emit(common, &report, |w| report.write_csv(w), stdout)
        }
        Command::Influence(args) => {
            let common = &args.common;
            common.validate()?;
            args.detection.validate()?;
            let data = common.load()?;
            common.check_l(data.p())?;
            let (pairs, near_pairs) = args.detection.scopes(data.p(), common.l)?;
            let analysis = Analysis::new(&data, common.spec())?;
            warn_gaps(&analysis, stderr);
            let opts = SweepOptions {
                l: common.l,
                mode: match args.detection.mode {
                    ModeArg::Approx => SweepMode::Approx,
                    ModeArg::Exact => SweepMode::Exact,
                    ModeArg::Hybrid => SweepMode::Hybrid,
                },
                pairs: Some(pairs),
                near_pairs: Some(near_pairs),
                delta: args.detection.delta,
                jobs: common.jobs,
            };
            let sweep = influence_sweep(&analysis, &opts)?;
            if common.spec().kind == EstimatorKind::Correlation {
                let _ = writeln!(
                    stderr,
                    "warning: empirical measures are defined for the covariance estimator only"
                );
            }
            let report = InfluenceReport::build(&common.input, &analysis, &sweep, common.precision);
            emit(common, &report, |w| report.write_csv(w), stdout)
        }
        Command::Switching(args) => {
            let common = &args.common;
            common.validate()?;
            args.detection.validate()?;
            if args.cascade_rounds == Some(0) {
                return Err(CliError::Config(
                    "--cascade-rounds must be at least 1".into(),
                ));
            }
            let data = common.load()?;
            if common.l >= data.p() {
                return Err(CliError::Config(format!(
                    "--L {} leaves no discarded component among {} variables",
                    common.l,
                    data.p()
                )));
            }
            let (pairs, near_pairs) = args.detection.scopes(data.p(), common.l)?;
            let analysis = Analysis::new(&data, common.spec())?;
            warn_gaps(&analysis, stderr);
            let measure = match args.measure {
                MeasureArg::B => Measure::B,
                MeasureArg::C => Measure::C,
            };
            if args.detection.mode == ModeArg::Hybrid
                && common.spec().kind == EstimatorKind::Correlation
            {
                return Err(CliError::Config(
                    "hybrid mode needs the covariance estimator".into(),
                ));
            }
            let opts = SwitchOptions {
                pairs: Some(pairs.clone()),
                near_pairs: Some(near_pairs.clone()),
                delta: args.detection.delta,
                candidate_l: Some(common.l),
                mode: match args.detection.mode {
                    ModeArg::Exact => DetectionMode::Exact,
                    ModeArg::Approx | ModeArg::Hybrid => DetectionMode::Approx,
                },
                verify: args.verify,
                hybrid: (args.detection.mode == ModeArg::Hybrid).then_some((common.l, measure)),
            };
            let report = analysis.switch_report(&opts)?;
            if let Some(rec) = &report.recommendation {
                if rec.l.is_none() {
                    let _ = writeln!(stderr, "warning: {}", rec.rationale);
                }
            }
            let cascade = match args.cascade_rounds {
                Some(rounds) => Some(cascade_scan(&data, common.spec(), &opts, rounds)?),
                None => None,
            };
            let out = SwitchingReport::build(
                &common.input,
                &analysis,
                &pairs,
                &near_pairs,
                &report,
                cascade.as_deref(),
                common.precision,
            );
            emit(common, &out, |w| out.write_csv(w), stdout)
        }
    }
}
