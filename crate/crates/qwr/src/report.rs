use qwr_core::TransformReport;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Version of the report file layout; bumped on incompatible changes.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// A report file: the command, its full configuration and one report per step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub seed: Option<u64>,
    pub config: Value,
    pub reports: Vec<TransformReport>,
}

impl ReportFile {
    pub fn new(command: &str, seed: Option<u64>, config: Value, reports: Vec<TransformReport>) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME").into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            config,
            reports,
        }
    }
}
