//! Copying and gauging: every qubit is copied `q_X` times (joined by
//! weight-2 X-stabilizers) and every X-stabilizer is split into a chain of
//! weight ≤ 3 stabilizers through new qubits.
//!
//! Layout: copy `j` of qubit `q` is `q·q_X + j`; new qubit `[s, k]`
//! (`k = 1..d_s−1`) follows at `N·q_X + offset(s) + k − 1`. X-stabilizers
//! are the copied chains `(s, k)` in stabilizer order, then `[q, j]` for each
//! qubit and `j < q_X − 1`. Z-stabilizers keep their indices.

use alloc::vec::Vec;

use crate::code::{CodeError, CssCode};
use crate::f2::SparseBitMatrix;
use crate::report::{BoundCheck, BoundKind, TransformReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CopyGaugeError {
    #[error("code has no qubit in any X-stabilizer")]
    NoXStabilizers,
    #[error(transparent)]
    Code(#[from] CodeError),
}

/// Qubit orderings and copy assignments used by [`x_reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct XReductionPlan {
    /// Number of copies of each qubit.
    pub copies: usize,
    /// Qubits `q_1..q_{d_s}` of each X-stabilizer, in chain order.
    pub orderings: Vec<Vec<usize>>,
    /// The copy `j_{s,k}` used at each chain position.
    pub assignments: Vec<Vec<usize>>,
    new_offsets: Vec<usize>,
    n: usize,
}

impl XReductionPlan {
    pub fn copy_qubit(&self, q: usize, j: usize) -> usize {
        q * self.copies + j
    }

    /// New qubit `[s, k]` for `1 ≤ k < d_s`.
    pub fn new_qubit(&self, s: usize, k: usize) -> usize {
        self.n * self.copies + self.new_offsets[s] + k - 1
    }
}

/// Copies and gauges the X-stabilizers of `code`.
pub fn x_reduce(code: &CssCode) -> Result<(CssCode, XReductionPlan, TransformReport), CopyGaugeError> {
    let before = code.validate()?;
    let copies = before.q_x;
    if copies == 0 {
        return Err(CopyGaugeError::NoXStabilizers);
    }
    let n = code.n();
    let hx = code.hx();
    let x_of_qubit = hx.col_supports();
    let orderings: Vec<Vec<usize>> = hx.rows().map(|r| r.to_vec()).collect();
    let assignments: Vec<Vec<usize>> = orderings
        .iter()
        .enumerate()
        .map(|(s, qs)| qs.iter().map(|&q| x_of_qubit[q].binary_search(&s).expect("column supports match rows")).collect())
        .collect();
    let mut new_offsets = Vec::with_capacity(orderings.len());
    let mut total_new = 0;
    for qs in &orderings {
        new_offsets.push(total_new);
        total_new += qs.len().saturating_sub(1);
    }
    let plan = XReductionPlan { copies, orderings, assignments, new_offsets, n };
    let n_out = n * copies + total_new;

    let mut x_rows = Vec::new();
    for (s, qs) in plan.orderings.iter().enumerate() {
        let d = qs.len();
        for k in 1..=d {
            let mut row = Vec::with_capacity(3);
            if k > 1 {
                row.push(plan.new_qubit(s, k - 1));
            }
            if k < d {
                row.push(plan.new_qubit(s, k));
            }
            row.push(plan.copy_qubit(qs[k - 1], plan.assignments[s][k - 1]));
            x_rows.push(row);
        }
    }
    for q in 0..n {
        for j in 0..copies - 1 {
            x_rows.push(alloc::vec![plan.copy_qubit(q, j), plan.copy_qubit(q, j + 1)]);
        }
    }

    let mut z_rows = Vec::with_capacity(code.hz().num_rows());
    for row in code.hz().rows() {
        let mut z: Vec<usize> = row.iter().flat_map(|&q| (0..copies).map(move |j| q * copies + j)).collect();
        let mut touched: Vec<usize> = row.iter().flat_map(|&q| x_of_qubit[q].iter().copied()).collect();
        touched.sort_unstable();
        touched.dedup();
        for s in touched {
            let crossings: Vec<usize> =
                plan.orderings[s].iter().enumerate().filter(|(_, q)| row.binary_search(q).is_ok()).map(|(k, _)| k + 1).collect();
            if crossings.len() % 2 == 1 {
                return Err(CodeError::CommutationViolation { x_stab: s, z_stab: z_rows.len() }.into());
            }
            for pair in crossings.chunks(2) {
                z.extend((pair[0]..pair[1]).map(|k| plan.new_qubit(s, k)));
            }
        }
        z.sort_unstable();
        z_rows.push(z);
    }

    let out = CssCode::new(
        n_out,
        SparseBitMatrix::new(n_out, x_rows).map_err(CodeError::from)?,
        SparseBitMatrix::new(n_out, z_rows).map_err(CodeError::from)?,
    )?;
    let after = out.validate()?;
    let mut report = TransformReport::new("copy-gauge", None, before.clone(), after.clone()).config("copies", copies);
    report.check(BoundCheck::equal("K' = K", BoundKind::Lemma, after.k, before.k));
    report.check(BoundCheck::equal("N' = N*q_X + sum_s (d_s - 1)", BoundKind::Lemma, after.n, n * copies + total_new));
    report.check(BoundCheck::at_most("w_X' <= 3", BoundKind::Lemma, after.w_x, 3));
    report.check(BoundCheck::at_most("q_X' <= 3", BoundKind::Lemma, after.q_x, 3));
    report.check(BoundCheck::at_most("q_Z' <= max(q_Z, w_X*q_Z)", BoundKind::Lemma, after.q_z, before.q_z.max(before.w_x * before.q_z)));
    report.check(BoundCheck::at_most("w_Z' <= w_Z*q_X*(1 + w_X)", BoundKind::Lemma, after.w_z, before.w_z * before.q_x * (1 + before.w_x)));
    Ok((out, plan, report))
}
