use qwr_core::code::CodeError;
use qwr_core::cone::ConeError;
use qwr_core::copygauge::CopyGaugeError;
use qwr_core::fixtures::FixtureError;
use qwr_core::metrics::MetricsError;
use qwr_core::pipeline::PipelineError;
use qwr_core::randapplic::RandApplicError;
use qwr_core::robustify::RobustifyError;
use qwr_core::thicken::ThickenError;
use serde_json::{json, Value};

use crate::format::FormatError;

/// Everything a subcommand can fail with.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    CopyGauge(#[from] CopyGaugeError),
    #[error(transparent)]
    Thicken(#[from] ThickenError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Robustify(#[from] RobustifyError),
    #[error(transparent)]
    Applic(#[from] RandApplicError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    fn code_error(&self) -> Option<&CodeError> {
        match self {
            CliError::Code(e) | CliError::Format(FormatError::Code(e)) => Some(e),
            CliError::Metrics(MetricsError::Code(e))
            | CliError::CopyGauge(CopyGaugeError::Code(e))
            | CliError::Thicken(ThickenError::Code(e))
            | CliError::Cone(ConeError::Code(e))
            | CliError::Robustify(RobustifyError::Code(e))
            | CliError::Applic(RandApplicError::Code(e))
            | CliError::Pipeline(PipelineError::Code(e)) => Some(e),
            _ => None,
        }
    }

    /// Short machine-readable name of the failure.
    pub fn kind(&self) -> &'static str {
        if let Some(e) = self.code_error() {
            return match e {
                CodeError::ColumnMismatch { .. } => "ColumnMismatch",
                CodeError::CommutationViolation { .. } => "CommutationViolation",
                CodeError::QubitOutOfRange { .. } => "QubitOutOfRange",
                CodeError::NotReasonable { .. } => "NotReasonable",
                CodeError::F2(_) => "MalformedMatrix",
            };
        }
        match self {
            CliError::Usage(_) => "Usage",
            CliError::Format(FormatError::Io { .. }) => "Io",
            CliError::Format(FormatError::Json { .. }) => "Json",
            CliError::Format(_) => "Parse",
            CliError::Metrics(MetricsError::BudgetExceeded { .. }) => "BudgetExceeded",
            CliError::Metrics(_) => "Metrics",
            CliError::CopyGauge(_) => "CopyGauge",
            CliError::Thicken(ThickenError::RetriesExhausted { .. }) => "RetriesExhausted",
            CliError::Thicken(_) => "Thicken",
            CliError::Cone(_) => "Cone",
            CliError::Robustify(RobustifyError::NotReasonable { .. }) => "NotReasonable",
            CliError::Robustify(_) => "Robustify",
            CliError::Applic(_) => "RandomCode",
            CliError::Pipeline(PipelineError::LemmaViolation { .. }) => "LemmaViolation",
            CliError::Pipeline(_) => "Pipeline",
            CliError::Fixture(_) => "Fixture",
            CliError::Code(_) => unreachable!("handled above"),
        }
    }

    /// The JSON object written to standard error.
    pub fn payload(&self) -> Value {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        let details = match (self.code_error(), self) {
            (Some(CodeError::CommutationViolation { x_stab, z_stab }), _) => json!({ "x_stab": x_stab, "z_stab": z_stab }),
            (Some(CodeError::QubitOutOfRange { qubit, n }), _) => json!({ "qubit": qubit, "n": n }),
            (_, CliError::Metrics(MetricsError::BudgetExceeded { lower_bound })) => json!({ "lower_bound": lower_bound }),
            (_, CliError::Thicken(ThickenError::RetriesExhausted { retries, qubit, multiplicity, suggested_ell })) => {
                json!({ "retries": retries, "qubit": qubit, "multiplicity": multiplicity, "suggested_ell": suggested_ell })
            }
            (_, CliError::Pipeline(PipelineError::LemmaViolation { step, expression, measured, bound })) => {
                json!({ "step": step, "expression": expression, "measured": measured, "bound": bound })
            }
            _ => Value::Null,
        };
        if !details.is_null() {
            v["details"] = details;
        }
        v
    }
}
