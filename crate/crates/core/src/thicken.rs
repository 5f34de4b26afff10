//! Thickening: the product of a code with an interval complex, keeping one
//! copy of each original Z-stabilizer at a chosen height.
//!
//! Heights are 0-based. Layout of the thickened code (ℓ levels, `N` qubits,
//! `n_X` X-stabilizers, `n_Z` Z-stabilizers):
//! * qubit `(q, m)` is `m·N + q`; qubit `(x, e_m)` is `ℓ·N + m·n_X + x`,
//! * X-stabilizer `(x, m)` is `m·n_X + x`,
//! * kept Z-stabilizer `S` keeps index `S`; `(q, e_m)` is `n_Z + m·N + q`.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::code::{CodeError, CssCode};
use crate::f2::SparseBitMatrix;
use crate::report::{BoundCheck, BoundKind, TransformReport};
use crate::rng;

/// Default cap on random height retries.
pub const DEFAULT_RETRIES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThickenError {
    #[error("thickening needs at least 2 levels, got {0}")]
    TooFewLevels(usize),
    #[error("height {height} of Z-stabilizer {stabilizer} is outside 0..{ell}")]
    HeightOutOfRange { stabilizer: usize, height: usize, ell: usize },
    #[error("expected {expected} heights, got {got}")]
    HeightCount { expected: usize, got: usize },
    #[error("no valid heights after {retries} retries: qubit {qubit} has multiplicity {multiplicity}; try ell >= {suggested_ell}")]
    RetriesExhausted { retries: usize, qubit: usize, multiplicity: usize, suggested_ell: usize },
    #[error("levels and target multiplicity must be positive")]
    ZeroParameter,
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// The cellulated interval with `ℓ` 0-cells and `ℓ−1` 1-cells; 1-cell `e_m` joins `m` and `m+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalComplex {
    ell: usize,
    boundary: SparseBitMatrix,
}

impl IntervalComplex {
    pub fn new(ell: usize) -> Result<Self, ThickenError> {
        if ell < 2 {
            return Err(ThickenError::TooFewLevels(ell));
        }
        let rows = (0..ell).map(|m| (m.saturating_sub(1)..(m + 1).min(ell - 1)).collect()).collect();
        Ok(Self { ell, boundary: SparseBitMatrix::new(ell - 1, rows).expect("interval rows are valid") })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// `ℓ × (ℓ−1)`: rows are 0-cells, columns 1-cells.
    pub fn boundary(&self) -> &SparseBitMatrix {
        &self.boundary
    }
}

/// One 0-based height per Z-stabilizer.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HeightAssignment {
    pub heights: Vec<usize>,
}

impl HeightAssignment {
    pub fn constant(count: usize, height: usize) -> Self {
        Self { heights: vec![height; count] }
    }
}

/// The largest number of Z-stabilizers sharing a qubit at the same height, and that qubit.
pub fn multiplicity(code: &CssCode, heights: &[usize]) -> (usize, usize) {
    let mut worst = (0, 0);
    let mut counts: Vec<(usize, usize)> = Vec::new();
    for (q, stabs) in code.hz().col_supports().iter().enumerate() {
        counts.clear();
        for &s in stabs {
            match counts.iter_mut().find(|(h, _)| *h == heights[s]) {
                Some(c) => c.1 += 1,
                None => counts.push((heights[s], 1)),
            }
        }
        let m = counts.iter().map(|c| c.1).max().unwrap_or(0);
        if m > worst.0 {
            worst = (m, q);
        }
    }
    worst
}

fn check_heights(code: &CssCode, ell: usize, heights: &HeightAssignment) -> Result<(), ThickenError> {
    let n_z = code.hz().num_rows();
    if heights.heights.len() != n_z {
        return Err(ThickenError::HeightCount { expected: n_z, got: heights.heights.len() });
    }
    if let Some((s, &h)) = heights.heights.iter().enumerate().find(|(_, &h)| h >= ell) {
        return Err(ThickenError::HeightOutOfRange { stabilizer: s, height: h, ell });
    }
    Ok(())
}

/// The thickened code without a report.
pub fn thicken_code(code: &CssCode, ell: usize, heights: &HeightAssignment) -> Result<CssCode, ThickenError> {
    if ell < 2 {
        return Err(ThickenError::TooFewLevels(ell));
    }
    check_heights(code, ell, heights)?;
    let n = code.n();
    let n_x = code.hx().num_rows();
    let edge_qubit = |x: usize, m: usize| ell * n + m * n_x + x;
    let mut x_rows = Vec::with_capacity(ell * n_x);
    for m in 0..ell {
        for (x, row) in code.hx().rows().enumerate() {
            let mut r: Vec<usize> = row.iter().map(|&q| m * n + q).collect();
            if m >= 1 {
                r.push(edge_qubit(x, m - 1));
            }
            if m + 1 < ell {
                r.push(edge_qubit(x, m));
            }
            x_rows.push(r);
        }
    }
    let mut z_rows: Vec<Vec<usize>> = code
        .hz()
        .rows()
        .zip(&heights.heights)
        .map(|(row, &h)| row.iter().map(|&q| h * n + q).collect())
        .collect();
    let x_of_qubit = code.hx().col_supports();
    for m in 0..ell - 1 {
        for (q, xs) in x_of_qubit.iter().enumerate() {
            let mut r = vec![m * n + q, (m + 1) * n + q];
            r.extend(xs.iter().map(|&x| edge_qubit(x, m)));
            z_rows.push(r);
        }
    }
    let total = ell * n + (ell - 1) * n_x;
    Ok(CssCode::new(total, SparseBitMatrix::new(total, x_rows).map_err(CodeError::from)?, SparseBitMatrix::new(total, z_rows).map_err(CodeError::from)?)?)
}

/// Thickens `code` by `ell` levels, keeping each Z-stabilizer at its assigned height.
pub fn thicken(code: &CssCode, ell: usize, heights: &HeightAssignment) -> Result<(CssCode, TransformReport), ThickenError> {
    let out = thicken_code(code, ell, heights)?;
    let before = code.validate()?;
    let after = out.validate()?;
    let mut report = TransformReport::new("thicken", None, before.clone(), after.clone()).config("ell", ell);
    let (mult, _) = multiplicity(code, &heights.heights);
    report.detail("multiplicity", mult);
    report.detail("heights", format_list(&heights.heights));
    report.check(BoundCheck::equal("K' = K", BoundKind::Lemma, after.k, before.k));
    report.check(BoundCheck::equal("N' = N*ell + n_X*(ell-1)", BoundKind::Lemma, after.n, before.n * ell + before.n_x * (ell - 1)));
    report.check(BoundCheck::equal("n_X' = ell*n_X", BoundKind::Lemma, after.n_x, ell * before.n_x));
    report.check(BoundCheck::equal("n_Z' = n_Z + (ell-1)*N", BoundKind::Lemma, after.n_z, before.n_z + (ell - 1) * before.n));
    if before.n_x > 0 {
        let extra = if ell == 2 { 1 } else { 2 };
        report.check(BoundCheck::equal("w_X' = w_X + (ell == 2 ? 1 : 2)", BoundKind::Lemma, after.w_x, before.w_x + extra));
        report.check(BoundCheck::equal("q_X' = max(q_X, 2)", BoundKind::Lemma, after.q_x, before.q_x.max(2)));
    }
    if before.n > 0 {
        report.check(BoundCheck::equal("w_Z' = max(w_Z, 2 + q_X)", BoundKind::Lemma, after.w_z, before.w_z.max(2 + before.q_x)));
    }
    report.check(BoundCheck::at_most("q_Z' <= max(mult + 2, w_X)", BoundKind::Lemma, after.q_z, (mult + 2).max(before.w_x)));
    Ok((out, report))
}

pub(crate) fn format_list(v: &[usize]) -> alloc::string::String {
    let parts: Vec<_> = v.iter().map(|h| h.to_string()).collect();
    parts.join(",")
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// The smallest `ℓ ≥ 2` with `2e·C(q_Z, w+1)·ℓ^{−w}·min(q_Z·w_Z, N) ≤ 1`.
pub fn suggested_ell(q_z: usize, w_z: usize, n: usize, w: usize) -> usize {
    let c = 2.0 * core::f64::consts::E * binomial(q_z, w + 1) * (q_z * w_z).min(n) as f64;
    if c <= 1.0 || w == 0 {
        return 2;
    }
    let mut ell = (libm::ceil(libm::pow(c, 1.0 / w as f64)) as usize).max(2);
    while ell > 2 && c * libm::pow((ell - 1) as f64, -(w as f64)) <= 1.0 {
        ell -= 1;
    }
    while c * libm::pow(ell as f64, -(w as f64)) > 1.0 {
        ell += 1;
    }
    ell
}

/// Uniform i.i.d. heights in `0..ell`, resampled until every qubit has at most
/// `w` kept Z-stabilizers at any one height. Attempt `r` uses sub-seed `r` of `seed`.
pub fn choose_heights_random(code: &CssCode, ell: usize, w: usize, seed: u64, max_retries: usize) -> Result<HeightAssignment, ThickenError> {
    if ell == 0 || w == 0 {
        return Err(ThickenError::ZeroParameter);
    }
    let n_z = code.hz().num_rows();
    let mut last = (0, 0);
    for r in 0..max_retries {
        let mut rng = rng::rng(rng::derive_index(seed, r as u64));
        let heights: Vec<usize> = (0..n_z).map(|_| rng.gen_range(0..ell)).collect();
        last = multiplicity(code, &heights);
        if last.0 <= w {
            return Ok(HeightAssignment { heights });
        }
    }
    let p = code.params_unchecked();
    Err(ThickenError::RetriesExhausted {
        retries: max_retries,
        qubit: last.1,
        multiplicity: last.0,
        suggested_ell: suggested_ell(p.q_z, p.w_z, p.n, w).max(ell + 1),
    })
}

/// Greedy proper coloring of the Z-stabilizer conflict graph (stabilizers
/// adjacent when they share a qubit). Returns `ℓ = q_Z·w_Z + 1` and heights of multiplicity 1.
pub fn choose_heights_coloring(code: &CssCode) -> (usize, HeightAssignment) {
    let hz = code.hz();
    let cols = hz.col_supports();
    let mut heights = vec![usize::MAX; hz.num_rows()];
    let mut used = Vec::new();
    for s in 0..hz.num_rows() {
        used.clear();
        for &q in hz.row(s) {
            used.extend(cols[q].iter().map(|&t| heights[t]).filter(|&h| h != usize::MAX));
        }
        used.sort_unstable();
        used.dedup();
        heights[s] = used.iter().enumerate().find(|&(i, &h)| i != h).map_or(used.len(), |(i, _)| i);
    }
    (hz.max_col_weight() * hz.max_row_weight() + 1, HeightAssignment { heights })
}

/// Swaps X and Z.
pub fn dual(code: &CssCode) -> CssCode {
    code.dual()
}
