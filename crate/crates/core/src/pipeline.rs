//! End-to-end weight reduction: copy and gauge, thicken, connect if needed,
//! cone, and reduce the cone, with a parameter ledger per step.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;

use crate::code::{CodeError, CodeParams, CssCode, PauliKind, Reasonableness, TaggedDistance};
use crate::cone::{self, ConeError, ConeInput, ReduceConfig};
use crate::copygauge::{self, CopyGaugeError};
use crate::metrics::{distance_estimate, MetricsError};
use crate::randapplic::{build_applic_code, ApplicDiagnostics, RandApplicError, RandomCodeSpec};
use crate::report::{BoundCheck, BoundKind, TransformReport};
use crate::robustify::{self, RobustifyError};
use crate::rng;
use crate::thicken::{self, HeightAssignment, ThickenError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("copy-gauge: {0}")]
    CopyGauge(#[from] CopyGaugeError),
    #[error("thicken: {0}")]
    Thicken(#[from] ThickenError),
    #[error("connect/improve-soundness: {0}")]
    Robustify(#[from] RobustifyError),
    #[error("cone: {0}")]
    Cone(#[from] ConeError),
    #[error("random code: {0}")]
    Applic(#[from] RandApplicError),
    #[error("distance estimate: {0}")]
    Metrics(#[from] MetricsError),
    #[error("input: {0}")]
    Code(#[from] CodeError),
    #[error("{step}: proved bound violated: {expression} (measured {measured}, bound {bound})")]
    LemmaViolation { step: String, expression: String, measured: i64, bound: i64 },
}

/// How thickening heights are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case", tag = "kind"))]
pub enum HeightStrategy {
    /// Random heights with at most `target_w` same-height stabilizers per qubit.
    Random { target_w: usize },
    /// Greedy coloring with `ℓ = q_Z·w_Z + 1`.
    Coloring,
}

/// Which Z-stabilizers the cone keeps verbatim.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DirectPolicy {
    /// Stabilizers appended after copy-gauge (thickening products and
    /// connecting triples); every other stabilizer is induced.
    ProductEdges,
    /// Induce every Z-stabilizer.
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct PipelineConfig {
    pub copy_gauge: bool,
    pub thicken: bool,
    /// Thickening levels; `None` picks the smallest that admits valid heights.
    pub ell: Option<usize>,
    pub heights: HeightStrategy,
    pub max_retries: usize,
    pub connect: bool,
    /// Augment the cone graphs until their Cheeger constants reach this value.
    pub soundness_target: Option<Rational>,
    pub direct: DirectPolicy,
    pub cone: bool,
    pub reduce: ReduceConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            copy_gauge: true,
            thicken: true,
            ell: None,
            heights: HeightStrategy::Random { target_w: 3 },
            max_retries: thicken::DEFAULT_RETRIES,
            connect: true,
            soundness_target: None,
            direct: DirectPolicy::ProductEdges,
            cone: true,
            reduce: ReduceConfig::default(),
        }
    }
}

/// Retries per level when searching upward for the smallest workable `ℓ`.
const AUTO_ELL_RETRIES: usize = 200;

fn enforce(report: &TransformReport) -> Result<(), PipelineError> {
    match report.lemma_violations().next() {
        Some(c) => Err(PipelineError::LemmaViolation {
            step: report.step.clone(),
            expression: c.expression.clone(),
            measured: c.measured,
            bound: c.bound,
        }),
        None => Ok(()),
    }
}

fn choose_thickening(code: &CssCode, config: &PipelineConfig, seed: u64) -> Result<(usize, HeightAssignment), PipelineError> {
    match (config.heights, config.ell) {
        (HeightStrategy::Coloring, ell) => {
            let (formula, h) = thicken::choose_heights_coloring(code);
            Ok((ell.unwrap_or(formula).max(formula).max(2), h))
        }
        (HeightStrategy::Random { target_w }, Some(ell)) => {
            Ok((ell, thicken::choose_heights_random(code, ell, target_w, seed, config.max_retries)?))
        }
        (HeightStrategy::Random { target_w }, None) => {
            let p = code.params_unchecked();
            let cap = thicken::suggested_ell(p.q_z, p.w_z, p.n, target_w);
            for ell in 2..cap {
                if let Ok(h) = thicken::choose_heights_random(code, ell, target_w, rng::derive_index(seed, ell as u64), AUTO_ELL_RETRIES) {
                    return Ok((ell, h));
                }
            }
            Ok((cap, thicken::choose_heights_random(code, cap, target_w, rng::derive_index(seed, cap as u64), config.max_retries)?))
        }
    }
}

/// Runs the enabled steps in order and returns the final code with one report per step.
pub fn reduce_full(code: &CssCode, config: &PipelineConfig, seed: u64) -> Result<(CssCode, Vec<TransformReport>), PipelineError> {
    let initial = code.validate()?;
    let mut reports = Vec::new();
    let mut cur = code.clone();

    if config.copy_gauge && initial.q_x > 0 {
        let (out, _, report) = copygauge::x_reduce(&cur)?;
        enforce(&report)?;
        reports.push(report);
        cur = out;
    }

    let kept_z = cur.hz().num_rows();
    if config.thicken {
        let (ell, heights) = choose_thickening(&cur, config, rng::derive(seed, "thicken"))?;
        let (out, report) = thicken::thicken(&cur, ell, &heights)?;
        enforce(&report)?;
        reports.push(report.config("strategy", strategy_name(config.heights)));
        cur = out;
    }

    if config.connect && !cur.is_reasonable().is_reasonable() {
        let (out, _, report) = robustify::connect(&cur)?;
        enforce(&report)?;
        reports.push(report);
        cur = out;
    }

    if config.cone {
        if let Reasonableness::Unreasonable { stabilizer, .. } = cur.is_reasonable() {
            return Err(RobustifyError::NotReasonable { stabilizer }.into());
        }
        let direct: Vec<usize> = match config.direct {
            DirectPolicy::ProductEdges => (kept_z..cur.hz().num_rows()).collect(),
            DirectPolicy::None => Vec::new(),
        };
        let mut input = ConeInput::from_supports(cur.clone(), direct);
        input.q_sets.retain(|q| !q.is_empty());
        let complexes = match config.soundness_target {
            Some(target) => {
                let (complexes, _, report) = robustify::improve_soundness(&cur, &input.q_sets, target, rng::derive(seed, "improve-soundness"))?;
                reports.push(report);
                complexes
            }
            None => input.complexes()?,
        };
        let (coned, layout, report) = cone::cone_code(&input, &complexes)?;
        enforce(&report)?;
        reports.push(report);
        let (out, report) = cone::reduce_cone(&coned, &layout, &config.reduce, rng::derive(seed, "reduce-cone"))?;
        enforce(&report)?;
        reports.push(report);
        cur = out;
    }

    let last = cur.validate()?;
    let mut summary = TransformReport::new("pipeline", Some(seed), initial.clone(), last.clone());
    summary.check(BoundCheck::equal("K' = K", BoundKind::Lemma, last.k, initial.k));
    summary.check(BoundCheck::at_most("w_X' <= 5", BoundKind::Target, last.w_x, 5));
    summary.check(BoundCheck::at_most("q_X' <= 3", BoundKind::Target, last.q_x, 3));
    summary.check(BoundCheck::at_most("w_Z' <= 5", BoundKind::Target, last.w_z, 5));
    summary.check(BoundCheck::at_most("q_Z' <= 5", BoundKind::Target, last.q_z, 5));
    enforce(&summary)?;
    reports.push(summary);
    Ok((cur, reports))
}

fn strategy_name(s: HeightStrategy) -> String {
    match s {
        HeightStrategy::Random { target_w } => alloc::format!("random(w={target_w})"),
        HeightStrategy::Coloring => "coloring".to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ApplicConfig {
    /// Thickening levels before weight reduction are `max(2, ⌈ell_factor·N⌉)`.
    pub ell_factor: Rational,
    pub pipeline: PipelineConfig,
    /// Dual-thicken at the end to balance the estimated distances.
    pub balance: bool,
    pub distance_trials: usize,
    /// Distances are estimated only for codes with at most this many qubits.
    pub estimate_limit: usize,
}

impl Default for ApplicConfig {
    fn default() -> Self {
        Self { ell_factor: Rational::new(1, 16), pipeline: PipelineConfig::default(), balance: true, distance_trials: 32, estimate_limit: DEFAULT_ESTIMATE_LIMIT }
    }
}

/// Default qubit count above which [`reduce_applic`] skips distance estimates.
pub const DEFAULT_ESTIMATE_LIMIT: usize = 4096;

/// One row of a scaling table.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingRow {
    pub n_input: usize,
    pub n_final: usize,
    pub k: usize,
    /// `None` when the final code exceeded the estimate limit.
    pub d_x: Option<TaggedDistance>,
    pub d_z: Option<TaggedDistance>,
    pub ell: usize,
    pub ell_balance: usize,
}

fn uniform_heights(count: usize, ell: usize, seed: u64) -> HeightAssignment {
    let mut rng = rng::rng(seed);
    HeightAssignment { heights: (0..count).map(|_| rng.gen_range(0..ell)).collect() }
}

fn estimates(code: &CssCode, config: &ApplicConfig, seed: u64) -> Result<Option<(TaggedDistance, TaggedDistance)>, PipelineError> {
    if code.n() > config.estimate_limit {
        return Ok(None);
    }
    let dx = distance_estimate(code, PauliKind::X, config.distance_trials, rng::derive(seed, "distance-x"))?.tagged();
    let dz = distance_estimate(code, PauliKind::Z, config.distance_trials, rng::derive(seed, "distance-z"))?.tagged();
    Ok(Some((dx, dz)))
}

/// Samples a random code, thickens it by `max(2, ⌈c·N⌉)`, weight-reduces it and balances distances.
pub fn reduce_applic(
    spec: &RandomCodeSpec,
    config: &ApplicConfig,
) -> Result<(CssCode, Vec<TransformReport>, ScalingRow, ApplicDiagnostics), PipelineError> {
    let seed = spec.seed;
    let (code, diag) = build_applic_code(spec)?;
    let ell = ((config.ell_factor * Rational::from_integer(spec.n as u64)).ceil().to_integer() as usize).max(2);
    let heights = uniform_heights(code.hz().num_rows(), ell, rng::derive(seed, "applic-heights"));
    let (thick, report) = thicken::thicken(&code, ell, &heights)?;
    enforce(&report)?;
    let mut reports = alloc::vec![report];
    let (reduced, more) = reduce_full(&thick, &config.pipeline, rng::derive(seed, "reduce"))?;
    reports.extend(more);
    let mut est = estimates(&reduced, config, rng::derive(seed, "estimate"))?;
    let mut out = reduced;
    let mut ell_balance = 1;
    if let (true, Some((dx, dz))) = (config.balance, est) {
        if let (Some(x), Some(z)) = (dx.value.finite(), dz.value.finite()) {
            let factor = (x + z / 2) / z.max(1);
            if factor >= 2 {
                ell_balance = factor;
                let dual = out.dual();
                let h = uniform_heights(dual.hz().num_rows(), ell_balance, rng::derive(seed, "balance-heights"));
                let (thick, report) = thicken::thicken(&dual, ell_balance, &h)?;
                enforce(&report)?;
                reports.push(report.config("balance", "dual"));
                out = thick.dual();
                est = estimates(&out, config, rng::derive(seed, "estimate-balanced"))?;
            }
        }
    }
    let p: CodeParams = out.validate()?;
    let row = ScalingRow { n_input: spec.n, n_final: p.n, k: p.k, d_x: est.map(|e| e.0), d_z: est.map(|e| e.1), ell, ell_balance };
    Ok((out, reports, row, diag))
}
