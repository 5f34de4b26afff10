use alloc::vec;
use alloc::vec::Vec;

use super::SparseBitMatrix;

/// Row-major bit-packed matrix used for elimination.
#[derive(Debug, Clone)]
pub(crate) struct DenseMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64).max(1);
        Self { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn from_sparse(m: &SparseBitMatrix) -> Self {
        let mut d = Self::zeros(m.num_rows(), m.num_cols());
        for (r, row) in m.rows().enumerate() {
            for &c in row {
                d.set(r, c);
            }
        }
        d
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.stride + c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize) {
        self.data[r * self.stride + c / 64] |= 1 << (c % 64);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * s);
        head[lo * s..lo * s + s].swap_with_slice(&mut tail[..s]);
    }

    /// `row[dst] ^= row[src]`, touching words from `from_word` on.
    fn xor_row(&mut self, dst: usize, src: usize, from_word: usize) {
        let s = self.stride;
        let (d0, s0) = (dst * s, src * s);
        if dst < src {
            let (head, tail) = self.data.split_at_mut(s0);
            for w in from_word..s {
                head[d0 + w] ^= tail[w];
            }
        } else {
            let (head, tail) = self.data.split_at_mut(d0);
            for w in from_word..s {
                tail[w] ^= head[s0 + w];
            }
        }
    }

    /// Reduced row echelon form in place; returns the pivot column of each leading row.
    pub fn rref(&mut self) -> Vec<usize> {
        self.eliminate(true)
    }

    pub fn rank(&mut self) -> usize {
        self.eliminate(false).len()
    }

    fn eliminate(&mut self, reduce_above: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(next, p);
            let word = c / 64;
            let start = if reduce_above { 0 } else { next + 1 };
            for r in start..self.rows {
                if r != next && self.get(r, c) {
                    self.xor_row(r, next, word);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }
}
