use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{xor_sorted, SparseBitMatrix};

/// Incrementally built row-space basis over sparse rows, keyed by leading (lowest) column.
///
/// Supports independence tests and membership queries without densifying.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    cols: usize,
    basis: BTreeMap<usize, Vec<usize>>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Self { cols, basis: BTreeMap::new() }
    }

    pub fn from_matrix(m: &SparseBitMatrix) -> Self {
        let mut e = Self::new(m.num_cols());
        for row in m.rows() {
            e.insert(row.to_vec());
        }
        e
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Residual of `row` after eliminating every basis leading column it meets.
    pub fn reduce(&self, row: &[usize]) -> Vec<usize> {
        let mut r = row.to_vec();
        let mut floor = 0;
        loop {
            let Some(pos) = r.iter().position(|&c| c >= floor && self.basis.contains_key(&c)) else {
                return r;
            };
            let lead = r[pos];
            r = xor_sorted(&r, &self.basis[&lead]);
            floor = lead + 1;
        }
    }

    /// Adds `row` to the span; returns whether it was independent.
    pub fn insert(&mut self, row: Vec<usize>) -> bool {
        let r = self.reduce(&row);
        match r.first() {
            None => false,
            Some(&lead) => {
                self.basis.insert(lead, r);
                true
            }
        }
    }

    pub fn contains(&self, row: &[usize]) -> bool {
        self.reduce(row).is_empty()
    }
}
