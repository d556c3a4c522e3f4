//! File formats, parallel sweeps and the command-line front end for
//! `eigensens-core`.

pub mod assets;
pub mod cli;
pub mod csv_input;
pub mod report;
pub mod sweep;

pub use eigensens_core as core;
