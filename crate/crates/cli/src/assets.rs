//! Bundled datasets.

use eigensens_core::DataMatrix;

use crate::csv_input::{read_csv, CsvOptions, LoadError};

/// Fatty acid composition (%) of 96 commercial vegetable oils: palmitic,
/// stearic, oleic, linoleic, linolenic, eicosanoic and eicosenoic acid, plus
/// the oil type in the `class` column.
pub const FATTY_ACIDS_CSV: &str = include_str!("../data/fatty_acids.csv");

/// Label column of [`FATTY_ACIDS_CSV`].
pub const FATTY_ACIDS_LABEL: &str = "class";

pub fn fatty_acids() -> Result<DataMatrix, LoadError> {
    read_csv(
        FATTY_ACIDS_CSV.as_bytes(),
        &CsvOptions::with_header().label(FATTY_ACIDS_LABEL),
    )
}
