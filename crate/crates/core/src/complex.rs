//! Finite chain complexes over GF(2), chain maps and mapping cones.

use alloc::vec::Vec;

use crate::f2::{mat_mul, rank, F2Error, SparseBitMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("boundary maps at grades {grade} and {} do not compose to zero", grade - 1)]
    NotAComplex { grade: i32 },
    #[error("boundary at grade {grade} has shape {rows}x{cols}, expected {want_rows}x{want_cols}")]
    Shape { grade: i32, rows: usize, cols: usize, want_rows: usize, want_cols: usize },
    #[error("chain map is not compatible with the boundaries at grade {grade}")]
    NotAChainMap { grade: i32 },
    #[error(transparent)]
    F2(#[from] F2Error),
}

/// A bounded complex `C_top → … → C_low`.
///
/// `boundaries[k]` is the map from grade `low + k + 1` to grade `low + k`,
/// stored with rows indexed by target cells and columns by source cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    low: i32,
    dims: Vec<usize>,
    boundaries: Vec<SparseBitMatrix>,
}

impl ChainComplex {
    /// Validates shapes and that consecutive boundaries compose to zero.
    pub fn new(low: i32, dims: Vec<usize>, boundaries: Vec<SparseBitMatrix>) -> Result<Self, ComplexError> {
        let c = Self::new_unchecked(low, dims, boundaries)?;
        for k in 1..c.boundaries.len() {
            if !mat_mul(&c.boundaries[k - 1], &c.boundaries[k])?.is_zero() {
                return Err(ComplexError::NotAComplex { grade: low + k as i32 + 1 });
            }
        }
        Ok(c)
    }

    /// Validates shapes only.
    pub fn new_unchecked(low: i32, dims: Vec<usize>, boundaries: Vec<SparseBitMatrix>) -> Result<Self, ComplexError> {
        assert!(!dims.is_empty(), "complex needs at least one grade");
        assert_eq!(boundaries.len() + 1, dims.len(), "one boundary per adjacent pair of grades");
        for (k, b) in boundaries.iter().enumerate() {
            if b.num_rows() != dims[k] || b.num_cols() != dims[k + 1] {
                return Err(ComplexError::Shape {
                    grade: low + k as i32 + 1,
                    rows: b.num_rows(),
                    cols: b.num_cols(),
                    want_rows: dims[k],
                    want_cols: dims[k + 1],
                });
            }
        }
        Ok(Self { low, dims, boundaries })
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn high(&self) -> i32 {
        self.low + self.dims.len() as i32 - 1
    }

    /// Number of cells in grade `j` (zero outside the stored range).
    pub fn dim(&self, j: i32) -> usize {
        self.index(j).map_or(0, |k| self.dims[k])
    }

    /// Boundary from grade `j` to grade `j - 1`, if both grades are stored.
    pub fn boundary(&self, j: i32) -> Option<&SparseBitMatrix> {
        let k = j - self.low - 1;
        (k >= 0).then(|| self.boundaries.get(k as usize)).flatten()
    }

    fn boundary_or_zero(&self, j: i32) -> SparseBitMatrix {
        self.boundary(j).cloned().unwrap_or_else(|| SparseBitMatrix::zeros(self.dim(j - 1), self.dim(j)))
    }

    fn index(&self, j: i32) -> Option<usize> {
        let k = j - self.low;
        (k >= 0 && (k as usize) < self.dims.len()).then_some(k as usize)
    }

    /// Betti numbers `b_j = dim C_j − rank ∂_j − rank ∂_{j+1}`, lowest grade first.
    pub fn homology_ranks(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.boundaries.iter().map(rank).collect();
        (0..self.dims.len())
            .map(|k| {
                let out = if k > 0 { ranks[k - 1] } else { 0 };
                let inc = ranks.get(k).copied().unwrap_or(0);
                self.dims[k] - out - inc
            })
            .collect()
    }

    /// Σ (−1)^j dim C_j.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(k, &d)| sign(self.low + k as i32) * d as i64).sum()
    }
}

fn sign(j: i32) -> i64 {
    if j.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Degree-preserving chain map `source → target`: `components[j]` maps grade `j`.
#[derive(Debug, Clone)]
pub struct ChainMap<'a> {
    pub source: &'a ChainComplex,
    pub target: &'a ChainComplex,
    /// Per source grade (from `source.low()`), matrix with target cells as rows.
    pub components: Vec<SparseBitMatrix>,
}

impl ChainMap<'_> {
    fn component(&self, j: i32) -> SparseBitMatrix {
        let k = j - self.source.low();
        if k >= 0 && (k as usize) < self.components.len() {
            self.components[k as usize].clone()
        } else {
            SparseBitMatrix::zeros(self.target.dim(j), self.source.dim(j))
        }
    }

    /// Checks `∂_A ∘ f = f ∘ ∂_B` in every grade.
    pub fn check(&self) -> Result<(), ComplexError> {
        for j in self.source.low()..=self.source.high() {
            let f_j = self.component(j);
            if f_j.num_rows() != self.target.dim(j) || f_j.num_cols() != self.source.dim(j) {
                return Err(ComplexError::Shape {
                    grade: j,
                    rows: f_j.num_rows(),
                    cols: f_j.num_cols(),
                    want_rows: self.target.dim(j),
                    want_cols: self.source.dim(j),
                });
            }
            let lhs = mat_mul(&self.target.boundary_or_zero(j), &f_j)?;
            let rhs = mat_mul(&self.component(j - 1), &self.source.boundary_or_zero(j))?;
            if lhs != rhs {
                return Err(ComplexError::NotAChainMap { grade: j });
            }
        }
        Ok(())
    }

    /// `Cone(f)_j = A_j ⊕ B_{j−1}` with boundary `[[∂_A, f], [0, ∂_B]]`.
    ///
    /// Within each grade, target cells come first, then the shifted source cells.
    pub fn cone(&self) -> Result<ChainComplex, ComplexError> {
        let (a, b) = (self.target, self.source);
        let low = a.low().min(b.low() + 1);
        let high = a.high().max(b.high() + 1);
        let dims: Vec<usize> = (low..=high).map(|j| a.dim(j) + b.dim(j - 1)).collect();
        let mut boundaries = Vec::new();
        for j in (low + 1)..=high {
            let da = a.boundary_or_zero(j);
            let db = b.boundary_or_zero(j - 1);
            let f = self.component(j - 1);
            let (a_lo, a_hi) = (a.dim(j - 1), a.dim(j));
            let mut rows: Vec<Vec<usize>> = Vec::with_capacity(a_lo + b.dim(j - 2));
            for r in 0..a_lo {
                let mut row = da.row(r).to_vec();
                row.extend(f.row(r).iter().map(|&c| c + a_hi));
                rows.push(row);
            }
            for r in 0..db.num_rows() {
                rows.push(db.row(r).iter().map(|&c| c + a_hi).collect());
            }
            boundaries.push(SparseBitMatrix::new(a_hi + b.dim(j - 1), rows)?);
        }
        ChainComplex::new(low, dims, boundaries)
    }
}
