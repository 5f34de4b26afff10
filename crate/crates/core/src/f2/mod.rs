//! Exact linear algebra over GF(2).
//!
//! [`SparseBitMatrix`] is the interchange type for every boundary map and
//! check matrix in the crate. Elimination runs on bit-packed rows internally
//! ([`dense`]) or on sparse rows through [`Echelon`] for large, sparse inputs.
//! Pivots are always taken at the lowest available column so that kernel
//! bases are reproducible.

pub(crate) mod bits;
mod dense;
mod echelon;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use echelon::Echelon;

pub(crate) use bits::BitSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum F2Error {
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("duplicate index {0} in support")]
    DuplicateIndex(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// A GF(2) vector stored as its sorted support.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BitVector {
    len: usize,
    support: Vec<usize>,
}

impl BitVector {
    /// Builds a vector from a sorted, duplicate-free support.
    pub fn new(len: usize, support: Vec<usize>) -> Result<Self, F2Error> {
        check_support(&support, len)?;
        Ok(Self { len, support })
    }

    /// Builds a vector from arbitrary indices; repeated indices cancel in pairs.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Result<Self, F2Error> {
        let mut support: Vec<usize> = indices.into_iter().collect();
        support.sort_unstable();
        let support = cancel_pairs(support);
        if let Some(&last) = support.last() {
            if last >= len {
                return Err(F2Error::IndexOutOfRange { index: last, len });
            }
        }
        Ok(Self { len, support })
    }

    pub fn zeros(len: usize) -> Self {
        Self { len, support: Vec::new() }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        assert!(index < len, "unit index {index} out of range {len}");
        Self { len, support: vec![index] }
    }

    pub fn ones(len: usize) -> Self {
        Self { len, support: (0..len).collect() }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn into_support(self) -> Vec<usize> {
        self.support
    }

    pub fn get(&self, index: usize) -> bool {
        self.support.binary_search(&index).is_ok()
    }

    /// Coordinate-wise sum.
    pub fn add(&self, other: &BitVector) -> Result<BitVector, F2Error> {
        if self.len != other.len {
            return Err(F2Error::DimensionMismatch { left: self.len, right: other.len });
        }
        Ok(BitVector { len: self.len, support: xor_sorted(&self.support, &other.support) })
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        overlap_parity(&self.support, &other.support)
    }

    pub(crate) fn to_bitset(&self) -> BitSet {
        BitSet::from_support(self.len, &self.support)
    }

    pub(crate) fn from_bitset(bits: &BitSet) -> Self {
        Self { len: bits.len(), support: bits.ones().collect() }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A GF(2) matrix stored as rows of sorted column indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SparseBitMatrix {
    cols: usize,
    rows: Vec<Vec<usize>>,
}

impl SparseBitMatrix {
    /// Builds a matrix from row supports. Each row is sorted; duplicates are rejected.
    pub fn new(cols: usize, rows: Vec<Vec<usize>>) -> Result<Self, F2Error> {
        let mut rows = rows;
        for row in rows.iter_mut() {
            row.sort_unstable();
            check_support(row, cols)?;
        }
        Ok(Self { cols, rows })
    }

    /// Builds a matrix from rows whose indices may repeat; repeats cancel mod 2.
    pub fn from_rows_mod2(cols: usize, rows: Vec<Vec<usize>>) -> Result<Self, F2Error> {
        let mut out = Vec::with_capacity(rows.len());
        for mut row in rows {
            row.sort_unstable();
            let row = cancel_pairs(row);
            check_support(&row, cols)?;
            out.push(row);
        }
        Ok(Self { cols, rows: out })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { cols, rows: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Self { cols: n, rows: (0..n).map(|i| vec![i]).collect() }
    }

    pub fn from_bit_vectors(cols: usize, vectors: &[BitVector]) -> Result<Self, F2Error> {
        let mut rows = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != cols {
                return Err(F2Error::DimensionMismatch { left: v.len(), right: cols });
            }
            rows.push(v.support().to_vec());
        }
        Ok(Self { cols, rows })
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.rows[i]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn row_vector(&self, i: usize) -> BitVector {
        BitVector { len: self.cols, support: self.rows[i].clone() }
    }

    pub fn into_rows(self) -> Vec<Vec<usize>> {
        self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].binary_search(&col).is_ok()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn max_row_weight(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.rows {
            for &c in row {
                w[c] += 1;
            }
        }
        w
    }

    pub fn max_col_weight(&self) -> usize {
        self.col_weights().into_iter().max().unwrap_or(0)
    }

    /// Rows containing each column.
    pub fn col_supports(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                cols[c].push(r);
            }
        }
        cols
    }

    pub fn transpose(&self) -> SparseBitMatrix {
        SparseBitMatrix { cols: self.rows.len(), rows: self.col_supports() }
    }

    pub fn push_row(&mut self, row: Vec<usize>) -> Result<(), F2Error> {
        let mut row = row;
        row.sort_unstable();
        check_support(&row, self.cols)?;
        self.rows.push(row);
        Ok(())
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &SparseBitMatrix) -> Result<SparseBitMatrix, F2Error> {
        if self.cols != other.cols {
            return Err(F2Error::DimensionMismatch { left: self.cols, right: other.cols });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(SparseBitMatrix { cols: self.cols, rows })
    }

    pub fn select_rows(&self, indices: &[usize]) -> SparseBitMatrix {
        SparseBitMatrix { cols: self.cols, rows: indices.iter().map(|&i| self.rows[i].clone()).collect() }
    }

    /// `self · v` as a vector of length `num_rows`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector, F2Error> {
        if v.len() != self.cols {
            return Err(F2Error::DimensionMismatch { left: self.cols, right: v.len() });
        }
        let support = self
            .rows
            .iter()
            .enumerate()
            .filter(|(_, row)| overlap_parity(row, v.support()))
            .map(|(i, _)| i)
            .collect();
        Ok(BitVector { len: self.rows.len(), support })
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub(crate) fn to_dense(&self) -> dense::DenseMatrix {
        dense::DenseMatrix::from_sparse(self)
    }
}

/// GF(2) row rank.
///
/// Singleton rows and columns are peeled first (this never fills in), then
/// the remaining core is eliminated densely or, when large, sparsely.
pub fn rank(m: &SparseBitMatrix) -> usize {
    let (peeled, core) = peel(m);
    peeled + core_rank(&core)
}

fn core_rank(m: &SparseBitMatrix) -> usize {
    let (r, c) = (m.num_rows(), m.num_cols());
    if r == 0 || c == 0 {
        return 0;
    }
    // Dense elimination costs ~r*c*min(r,c)/64 word ops.
    let dense_cost = (r as u128) * (c as u128) * (r.min(c) as u128) / 64;
    if dense_cost <= 1 << 28 || m.nnz() * 8 > r * c {
        m.to_dense().rank()
    } else {
        let mut e = Echelon::new(c);
        for row in m.rows() {
            e.insert(row.to_vec());
        }
        e.rank()
    }
}

/// Removes rows that are alone in some column and rows of weight one
/// (together with their column), counting each removal as one unit of rank.
/// Returns the count and the remaining matrix on the surviving columns.
fn peel(m: &SparseBitMatrix) -> (usize, SparseBitMatrix) {
    let cols = m.col_supports();
    let mut row_alive = vec![true; m.num_rows()];
    let mut col_alive = vec![true; m.num_cols()];
    let mut row_count: Vec<usize> = m.rows().map(<[usize]>::len).collect();
    let mut col_count: Vec<usize> = cols.iter().map(Vec::len).collect();
    let mut col_queue: Vec<usize> = (0..m.num_cols()).filter(|&c| col_count[c] == 1).collect();
    let mut row_queue: Vec<usize> = (0..m.num_rows()).filter(|&r| row_count[r] == 1).collect();
    let mut peeled = 0;
    loop {
        if let Some(c) = col_queue.pop() {
            if !col_alive[c] || col_count[c] != 1 {
                continue;
            }
            let r = cols[c].iter().copied().find(|&r| row_alive[r]).expect("column has one live row");
            peeled += 1;
            row_alive[r] = false;
            col_alive[c] = false;
            for &c2 in m.row(r) {
                if col_alive[c2] {
                    col_count[c2] -= 1;
                    if col_count[c2] == 1 {
                        col_queue.push(c2);
                    }
                }
            }
        } else if let Some(r) = row_queue.pop() {
            if !row_alive[r] || row_count[r] != 1 {
                continue;
            }
            let c = m.row(r).iter().copied().find(|&c| col_alive[c]).expect("row has one live column");
            peeled += 1;
            row_alive[r] = false;
            col_alive[c] = false;
            for &r2 in &cols[c] {
                if row_alive[r2] {
                    row_count[r2] -= 1;
                    if row_count[r2] == 1 {
                        row_queue.push(r2);
                    }
                }
            }
        } else {
            break;
        }
    }
    let mut remap = vec![usize::MAX; m.num_cols()];
    let mut next = 0;
    for c in 0..m.num_cols() {
        if col_alive[c] && col_count[c] > 0 {
            remap[c] = next;
            next += 1;
        }
    }
    let rows = (0..m.num_rows())
        .filter(|&r| row_alive[r] && row_count[r] > 0)
        .map(|r| m.row(r).iter().filter(|&&c| remap[c] != usize::MAX).map(|&c| remap[c]).collect())
        .collect();
    (peeled, SparseBitMatrix { cols: next, rows })
}

/// A basis of `{v : m·v = 0}`, one vector per free column of the reduced row echelon form.
pub fn kernel_basis(m: &SparseBitMatrix) -> Vec<BitVector> {
    let mut d = m.to_dense();
    let pivots = d.rref();
    let cols = m.num_cols();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut support = vec![f];
            for (row, &p) in pivots.iter().enumerate() {
                if d.get(row, f) {
                    support.push(p);
                }
            }
            support.sort_unstable();
            BitVector { len: cols, support }
        })
        .collect()
}

/// GF(2) product `a · b`.
pub fn mat_mul(a: &SparseBitMatrix, b: &SparseBitMatrix) -> Result<SparseBitMatrix, F2Error> {
    if a.num_cols() != b.num_rows() {
        return Err(F2Error::DimensionMismatch { left: a.num_cols(), right: b.num_rows() });
    }
    let mut acc = BitSet::new(b.num_cols());
    let rows = a
        .rows()
        .map(|row| {
            acc.clear();
            for &k in row {
                for &c in b.row(k) {
                    acc.flip(c);
                }
            }
            acc.ones().collect()
        })
        .collect();
    Ok(SparseBitMatrix { cols: b.num_cols(), rows })
}

/// Some `v` with `m·v = target`, or `None` when the system is inconsistent.
pub fn solve(m: &SparseBitMatrix, target: &BitVector) -> Option<BitVector> {
    if target.len() != m.num_rows() {
        return None;
    }
    // Eliminate on [m | target]; the target becomes the last column.
    let cols = m.num_cols();
    let mut aug = dense::DenseMatrix::zeros(m.num_rows(), cols + 1);
    for (r, row) in m.rows().enumerate() {
        for &c in row {
            aug.set(r, c);
        }
    }
    for &r in target.support() {
        aug.set(r, cols);
    }
    let pivots = aug.rref();
    if pivots.last() == Some(&cols) {
        return None;
    }
    let support: Vec<usize> =
        pivots.iter().enumerate().filter(|(row, _)| aug.get(*row, cols)).map(|(_, &p)| p).collect();
    Some(BitVector { len: cols, support })
}

/// Whether `v` lies in the row space of `m`.
pub fn in_row_space(m: &SparseBitMatrix, v: &BitVector) -> bool {
    let mut e = Echelon::new(m.num_cols());
    for row in m.rows() {
        e.insert(row.to_vec());
    }
    e.contains(v.support())
}

/// Whether the row spaces of `a` and `b` coincide, by two-sided inclusion.
pub fn same_row_space(a: &SparseBitMatrix, b: &SparseBitMatrix) -> bool {
    if a.num_cols() != b.num_cols() {
        return false;
    }
    let ea = Echelon::from_matrix(a);
    let eb = Echelon::from_matrix(b);
    a.rows().all(|r| eb.contains(r)) && b.rows().all(|r| ea.contains(r))
}

fn check_support(support: &[usize], len: usize) -> Result<(), F2Error> {
    for w in support.windows(2) {
        if w[0] == w[1] {
            return Err(F2Error::DuplicateIndex(w[0]));
        }
        debug_assert!(w[0] < w[1]);
    }
    match support.last() {
        Some(&last) if last >= len => Err(F2Error::IndexOutOfRange { index: last, len }),
        _ => Ok(()),
    }
}

fn cancel_pairs(sorted: Vec<usize>) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(sorted.len());
    for x in sorted {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Symmetric difference of two sorted index lists.
pub(crate) fn xor_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub(crate) fn overlap_count(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub(crate) fn overlap_parity(a: &[usize], b: &[usize]) -> bool {
    overlap_count(a, b) % 2 == 1
}
