//! CSV ingestion into a [`DataMatrix`].

use std::io::Read;
use std::path::Path;

use eigensens_core::{DataMatrix, Matrix};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("input is empty")]
    Empty,
    #[error("row {row} has {found} fields, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column {col} ({name}): cannot parse {value:?} as a finite number")]
    Parse {
        row: usize,
        col: usize,
        name: String,
        value: String,
    },
    #[error("label column {0:?} not found")]
    MissingLabelColumn(String),
    #[error("{n} observations read, at least 3 required")]
    TooFew { n: usize },
    #[error("no numeric columns")]
    NoNumericColumns,
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Data(#[from] eigensens_core::Error),
}

/// How to interpret the input file.
#[derive(Debug, Clone, Default)]
pub struct CsvOptions {
    /// First row holds column names.
    pub has_header: bool,
    /// Column holding row labels: its header name, or a 1-based position when
    /// the file has no header. Excluded from the numeric values.
    pub label_column: Option<String>,
}

impl CsvOptions {
    pub fn with_header() -> Self {
        Self {
            has_header: true,
            label_column: None,
        }
    }

    pub fn label(mut self, name: impl Into<String>) -> Self {
        self.label_column = Some(name.into());
        self
    }
}

pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<DataMatrix, LoadError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_csv(file, options)
}

/// Parses CSV from any reader. Rows without a label column are labelled by
/// their 1-based position.
pub fn read_csv<R: Read>(reader: R, options: &CsvOptions) -> Result<DataMatrix, LoadError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(options.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers: Option<Vec<String>> = if options.has_header {
        Some(rdr.headers()?.iter().map(str::to_string).collect())
    } else {
        None
    };

    let mut records = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        records.push(rec);
    }
    let width = match (&headers, records.first()) {
        (Some(h), _) if !h.is_empty() && !(h.len() == 1 && h[0].is_empty()) => h.len(),
        (None, Some(first)) => first.len(),
        _ => return Err(LoadError::Empty),
    };
    if records.is_empty() {
        return Err(LoadError::Empty);
    }

    let label_idx = match &options.label_column {
        None => None,
        Some(name) => Some(resolve_label(name, headers.as_deref(), width)?),
    };
    let names: Vec<String> = (0..width)
        .map(|c| {
            headers
                .as_ref()
                .map_or_else(|| format!("V{}", c + 1), |h| h[c].clone())
        })
        .collect();
    let numeric_cols: Vec<usize> = (0..width).filter(|&c| Some(c) != label_idx).collect();
    if numeric_cols.is_empty() {
        return Err(LoadError::NoNumericColumns);
    }

    let mut values = Vec::with_capacity(records.len() * numeric_cols.len());
    let mut row_labels = Vec::with_capacity(records.len());
    for (r, rec) in records.iter().enumerate() {
        if rec.len() != width {
            return Err(LoadError::Ragged {
                row: r + 1,
                expected: width,
                found: rec.len(),
            });
        }
        for &c in &numeric_cols {
            let cell = &rec[c];
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(LoadError::Parse {
                        row: r + 1,
                        col: c + 1,
                        name: names[c].clone(),
                        value: cell.to_string(),
                    })
                }
            }
        }
        row_labels.push(match label_idx {
            Some(c) => rec[c].to_string(),
            None => (r + 1).to_string(),
        });
    }
    let n = records.len();
    if n < 3 {
        return Err(LoadError::TooFew { n });
    }
    let matrix = Matrix::from_row_major(n, numeric_cols.len(), values)?;
    let col_labels = numeric_cols.iter().map(|&c| names[c].clone()).collect();
    Ok(DataMatrix::new(matrix, row_labels, col_labels)?)
}

fn resolve_label(name: &str, headers: Option<&[String]>, width: usize) -> Result<usize, LoadError> {
    if let Some(h) = headers {
        if let Some(pos) = h.iter().position(|x| x == name) {
            return Ok(pos);
        }
    }
    match name.parse::<usize>() {
        Ok(k) if headers.is_none() && (1..=width).contains(&k) => Ok(k - 1),
        _ => Err(LoadError::MissingLabelColumn(name.to_string())),
    }
}
