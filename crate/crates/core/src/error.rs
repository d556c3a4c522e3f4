use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong in the core diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    EmptyData,
    /// A value failed to be finite; `row` and `col` are 1-based.
    NonFinite {
        row: usize,
        col: usize,
    },
    LabelCount {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    TooFewObservations {
        n: usize,
        required: usize,
    },
    /// `index` is 0-based, `len` the exclusive bound.
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },
    /// `column` is 1-based.
    ZeroVariance {
        column: usize,
    },
    NotSymmetric {
        max_asymmetry: f64,
    },
    NotConverged {
        sweeps: usize,
    },
    /// Eigenvalue `j` (1-based) is tied with a neighbour.
    DegenerateEigenvalue {
        j: usize,
    },
    /// `λ_l − λ_k` vanishes for a retained `l` and discarded `k` (1-based).
    DegenerateDenominator {
        l: usize,
        k: usize,
    },
    ZeroEigenvalue {
        l: usize,
    },
    RankDeficient {
        which: &'static str,
    },
    UnsupportedEstimator {
        operation: &'static str,
        hint: &'static str,
    },
    InvalidPair {
        j: usize,
        k: usize,
    },
    InvalidParameter {
        name: &'static str,
        reason: String,
    },
    /// Every admissible retention count sits on a switching boundary.
    NoValidRetention {
        candidate: usize,
        switching_pairs: Vec<(usize, usize)>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyData => write!(f, "data matrix is empty"),
            Error::NonFinite { row, col } => {
                write!(f, "non-finite value at row {row}, column {col}")
            }
            Error::LabelCount { what, expected, found } => {
                write!(f, "expected {expected} {what} labels, found {found}")
            }
            Error::DimensionMismatch { what, expected, found } => {
                write!(f, "{what}: expected dimension {expected}, found {found}")
            }
            Error::TooFewObservations { n, required } => {
                write!(f, "{n} observations available, at least {required} required")
            }
            Error::IndexOutOfRange { what, index, len } => {
                write!(f, "{what} index {} out of range 1..={len}", index + 1)
            }
            Error::ZeroVariance { column } => {
                write!(f, "column {column} has zero variance; correlation is undefined")
            }
            Error::NotSymmetric { max_asymmetry } => {
                write!(f, "matrix is not symmetric (max |a_jk - a_kj| = {max_asymmetry:e})")
            }
            Error::NotConverged { sweeps } => {
                write!(f, "Jacobi eigensolver did not converge after {sweeps} sweeps")
            }
            Error::DegenerateEigenvalue { j } => write!(
                f,
                "eigenvalue {j} is not unique (tied with a neighbour); its influence is undefined"
            ),
            Error::DegenerateDenominator { l, k } => write!(
                f,
                "eigenvalues {l} and {k} are numerically equal; empirical measure has a zero denominator"
            ),
            Error::ZeroEigenvalue { l } => write!(f, "retained eigenvalue {l} is zero"),
            Error::RankDeficient { which } => {
                write!(f, "score matrix {which} is rank deficient after centering")
            }
            Error::UnsupportedEstimator { operation, hint } => {
                write!(f, "{operation} is only available for the covariance estimator; {hint}")
            }
            Error::InvalidPair { j, k } => {
                write!(f, "({j}, {k}) is not an adjacent eigenvalue pair of this problem")
            }
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::NoValidRetention { candidate, switching_pairs } => {
                write!(f, "no retention count near {candidate} avoids switching; switching pairs:")?;
                for (j, k) in switching_pairs {
                    write!(f, " ({j},{k})")?;
                }
                Ok(())
            }
        }
    }
}

impl core::error::Error for Error {}
