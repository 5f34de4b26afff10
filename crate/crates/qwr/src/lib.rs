//! File formats, reporting and the command-line front end for `qwr-core`.

pub mod cli;
pub mod error;
pub mod format;
pub mod report;

pub use error::CliError;
pub use format::{CodeFile, FormatError};
pub use report::{ReportFile, REPORT_SCHEMA_VERSION};
