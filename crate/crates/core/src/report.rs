//! Per-step provenance: configuration, parameter ledgers and bound checks.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::code::CodeParams;

/// How a bound check relates to what is proved about a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum BoundKind {
    /// A proved property of the construction; a violation is a bug.
    Lemma,
    /// A target the end-to-end construction aims for; reported, never enforced.
    Target,
    /// A measured quantity with no proved constant (slack carries the value).
    Measured,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundCheck {
    pub expression: String,
    pub kind: BoundKind,
    pub measured: i64,
    pub bound: i64,
    pub satisfied: bool,
    /// `bound − measured` for upper bounds, `measured − bound` for lower bounds.
    pub slack: i64,
}

impl BoundCheck {
    pub fn at_most(expression: &str, kind: BoundKind, measured: usize, bound: usize) -> Self {
        let (m, b) = (measured as i64, bound as i64);
        Self { expression: expression.to_string(), kind, measured: m, bound: b, satisfied: m <= b, slack: b - m }
    }

    pub fn at_least(expression: &str, kind: BoundKind, measured: usize, bound: usize) -> Self {
        let (m, b) = (measured as i64, bound as i64);
        Self { expression: expression.to_string(), kind, measured: m, bound: b, satisfied: m >= b, slack: m - b }
    }

    pub fn equal(expression: &str, kind: BoundKind, measured: usize, bound: usize) -> Self {
        let (m, b) = (measured as i64, bound as i64);
        Self { expression: expression.to_string(), kind, measured: m, bound: b, satisfied: m == b, slack: b - m }
    }

    pub fn measured(expression: &str, value: i64) -> Self {
        Self { expression: expression.to_string(), kind: BoundKind::Measured, measured: value, bound: value, satisfied: true, slack: 0 }
    }
}

/// Record of one transform application.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransformReport {
    pub step: String,
    pub seed: Option<u64>,
    /// Configuration as ordered key/value pairs.
    pub config: Vec<(String, String)>,
    pub params_before: CodeParams,
    pub params_after: CodeParams,
    pub bound_checks: Vec<BoundCheck>,
    /// Chosen heights, pairings and other per-run choices.
    pub details: Vec<(String, String)>,
}

impl TransformReport {
    pub fn new(step: &str, seed: Option<u64>, before: CodeParams, after: CodeParams) -> Self {
        Self {
            step: step.to_string(),
            seed,
            config: Vec::new(),
            params_before: before,
            params_after: after,
            bound_checks: Vec::new(),
            details: Vec::new(),
        }
    }

    pub fn config(mut self, key: &str, value: impl ToString) -> Self {
        self.config.push((key.to_string(), value.to_string()));
        self
    }

    pub fn detail(&mut self, key: &str, value: impl ToString) {
        self.details.push((key.to_string(), value.to_string()));
    }

    pub fn check(&mut self, c: BoundCheck) {
        self.bound_checks.push(c);
    }

    /// Lemma checks that failed.
    pub fn lemma_violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.bound_checks.iter().filter(|c| c.kind == BoundKind::Lemma && !c.satisfied)
    }

    pub fn targets_met(&self) -> bool {
        self.bound_checks.iter().filter(|c| c.kind == BoundKind::Target).all(|c| c.satisfied)
    }
}
