//! Random codes with logarithmic-weight X-checks and random homology
//! Z-stabilizers, with the diagnostics that test their expected properties.

use alloc::vec::Vec;

use rand::Rng;

use crate::code::{CodeError, CssCode, PauliKind};
use crate::cone::{build_b_complex, random_pairing, ConeError};
use crate::f2::{kernel_basis, rank, BitSet, BitVector, SparseBitMatrix};
use crate::graph::{cheeger, GraphError};
use crate::metrics::{distance_estimate, MetricsError};
use crate::rng;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RandApplicError {
    #[error("random codes need at least 8 qubits, got {0}")]
    TooSmall(usize),
    #[error("beta must be positive")]
    NonPositiveBeta,
    #[error("check density {delta}/{n} exceeds 1")]
    DensityAboveOne { delta: u64, n: usize },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Parameters of a random code: `Δ = β·ln N` expected X-check weight.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RandomCodeSpec {
    pub n: usize,
    pub beta: Rational,
    /// X-checks per qubit.
    pub x_check_fraction: Rational,
    /// Number of Z-stabilizers; `None` means `N/4`.
    pub z_count: Option<usize>,
    pub seed: u64,
}

impl RandomCodeSpec {
    pub fn new(n: usize, beta: Rational, seed: u64) -> Self {
        Self { n, beta, x_check_fraction: Rational::new(1, 2), z_count: None, seed }
    }

    pub fn delta(&self) -> f64 {
        ratio_f64(self.beta) * libm::log(self.n as f64)
    }

    pub fn x_rows(&self) -> usize {
        (self.x_check_fraction * Rational::from_integer(self.n as u64)).floor().to_integer() as usize
    }

    pub fn z_rows(&self) -> usize {
        self.z_count.unwrap_or(self.n / 4)
    }

    fn check(&self) -> Result<(), RandApplicError> {
        if self.n < 8 {
            return Err(RandApplicError::TooSmall(self.n));
        }
        if *self.beta.numer() == 0 {
            return Err(RandApplicError::NonPositiveBeta);
        }
        if self.delta() > self.n as f64 * (1.0 + 1e-12) {
            return Err(RandApplicError::DensityAboveOne { delta: libm::ceil(self.delta()) as u64, n: self.n });
        }
        Ok(())
    }
}

pub(crate) fn ratio_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// A `rows × cols` matrix of i.i.d. Bernoulli(`p`) entries (`p` clamped to `[0, 1]`).
pub fn sample_bernoulli(rows: usize, cols: usize, p: f64, seed: u64) -> SparseBitMatrix {
    let p = p.clamp(0.0, 1.0);
    let mut rng = rng::rng(seed);
    let data = (0..rows).map(|_| (0..cols).filter(|_| p >= 1.0 || rng.gen::<f64>() < p).collect()).collect();
    SparseBitMatrix::new(cols, data).expect("indices are in range")
}

/// The X-checks of the random code: `x_rows × N` with density `Δ/N`.
pub fn sample_classical(spec: &RandomCodeSpec) -> Result<SparseBitMatrix, RandApplicError> {
    spec.check()?;
    Ok(sample_bernoulli(spec.x_rows(), spec.n, spec.delta() / spec.n as f64, rng::derive(spec.seed, "x-checks")))
}

/// Uniform kernel elements and whether they are independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSample {
    pub rows: SparseBitMatrix,
    pub rank: usize,
    pub independent: bool,
    /// The kernel is zero, so every row is zero.
    pub degenerate: bool,
}

/// Draws `count` uniform elements of the kernel of `x_checks`.
pub fn sample_z_stabilizers(x_checks: &SparseBitMatrix, count: usize, seed: u64) -> ZSample {
    let n = x_checks.num_cols();
    let basis: Vec<BitSet> = kernel_basis(x_checks).iter().map(BitVector::to_bitset).collect();
    let mut rng = rng::rng(seed);
    let mut rows = Vec::with_capacity(count);
    for _ in 0..count {
        let mut acc = BitSet::new(n);
        for b in &basis {
            if rng.gen::<bool>() {
                acc.xor_with(b);
            }
        }
        rows.push(BitVector::from_bitset(&acc).into_support());
    }
    let rows = SparseBitMatrix::new(n, rows).expect("indices are in range");
    let r = rank(&rows);
    ZSample { rank: r, independent: r == count, degenerate: basis.is_empty(), rows }
}

/// Connectivity and expansion of one Z-stabilizer's graph under a random pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QSetDiagnostic {
    pub size: usize,
    pub components: usize,
    pub cheeger: Option<Rational>,
    pub cheeger_exact: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ApplicDiagnostics {
    pub n: usize,
    pub delta: f64,
    pub x_rows: usize,
    pub x_rank: usize,
    pub b0: usize,
    pub b1: usize,
    /// `b₁ = N − x_rows + b₀`.
    pub euler_holds: bool,
    pub isolated_qubits: usize,
    /// Estimated minimum weight of a nonzero vector annihilated by the X-checks.
    pub classical_distance: Option<usize>,
    pub relative_distance: f64,
    pub z_rows: usize,
    pub z_rank: usize,
    pub z_independent: bool,
    pub z_degenerate: bool,
    pub k: usize,
    pub q_sets: Vec<QSetDiagnostic>,
    pub all_connected: bool,
    pub min_cheeger: Option<Rational>,
}

/// Trials used for the classical distance estimate.
pub const CLASSICAL_DISTANCE_TRIALS: usize = 64;

/// Samples the code and measures its diagnostics.
pub fn build_applic_code(spec: &RandomCodeSpec) -> Result<(CssCode, ApplicDiagnostics), RandApplicError> {
    let hx = sample_classical(spec)?;
    let z = sample_z_stabilizers(&hx, spec.z_rows(), rng::derive(spec.seed, "z-stabilizers"));
    let code = CssCode::new(spec.n, hx.clone(), z.rows.clone())?;
    let n = spec.n;
    let x_rank = rank(&hx);
    let b0 = hx.num_rows() - x_rank;
    let b1 = n - x_rank;
    let isolated_qubits = hx.col_weights().iter().filter(|&&w| w == 0).count();
    let classical = CssCode::new(n, hx.clone(), SparseBitMatrix::zeros(0, n))?;
    let classical_distance =
        distance_estimate(&classical, PauliKind::Z, CLASSICAL_DISTANCE_TRIALS, rng::derive(spec.seed, "classical-distance"))?.value.finite();
    let mut q_sets = Vec::new();
    let pairing_seed = rng::derive(spec.seed, "pairing");
    for (i, row) in z.rows.rows().enumerate() {
        if row.is_empty() {
            continue;
        }
        let pairing = random_pairing(&code, row, rng::derive_index(pairing_seed, i as u64))?;
        let (_, g) = build_b_complex(&code, row, Some(&pairing))?;
        let h = cheeger(&g)?;
        q_sets.push(QSetDiagnostic { size: row.len(), components: g.num_components(), cheeger: h.value, cheeger_exact: h.exact });
    }
    let all_connected = q_sets.iter().all(|q| q.components == 1);
    let min_cheeger = q_sets.iter().map(|q| q.cheeger.unwrap_or(Rational::from_integer(0))).min();
    let diag = ApplicDiagnostics {
        n,
        delta: spec.delta(),
        x_rows: hx.num_rows(),
        x_rank,
        b0,
        b1,
        euler_holds: b1 + hx.num_rows() == n + b0,
        isolated_qubits,
        classical_distance,
        relative_distance: classical_distance.map_or(0.0, |d| d as f64 / n as f64),
        z_rows: z.rows.num_rows(),
        z_rank: z.rank,
        z_independent: z.independent,
        z_degenerate: z.degenerate,
        k: code.k(),
        q_sets,
        all_connected,
        min_cheeger,
    };
    Ok((code, diag))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_extremes() {
        let ones = sample_bernoulli(3, 5, 1.0, 1);
        assert!(ones.rows().all(|r| r.len() == 5));
        let zeros = sample_bernoulli(3, 5, 0.0, 1);
        assert!(zeros.is_zero());
        let n = 16.0f64;
        let spec = RandomCodeSpec::new(16, Rational::new((n / libm::log(n) * 1e6) as u64, 1_000_000), 3);
        assert!(sample_classical(&spec).unwrap().rows().all(|r| r.len() >= 15));
    }

    #[test]
    fn classical_sampling_is_seeded() {
        let spec = RandomCodeSpec::new(64, Rational::from_integer(4), 1);
        let a = sample_classical(&spec).unwrap();
        assert_eq!(a, sample_classical(&spec).unwrap());
        assert_ne!(a, sample_classical(&RandomCodeSpec { seed: 2, ..spec.clone() }).unwrap());
        assert_eq!(a.num_rows(), 32);
    }

    #[test]
    fn spec_validation() {
        assert_eq!(sample_classical(&RandomCodeSpec::new(4, Rational::from_integer(1), 0)), Err(RandApplicError::TooSmall(4)));
        assert_eq!(sample_classical(&RandomCodeSpec::new(16, Rational::from_integer(0), 0)), Err(RandApplicError::NonPositiveBeta));
        assert!(matches!(sample_classical(&RandomCodeSpec::new(16, Rational::from_integer(10), 0)), Err(RandApplicError::DensityAboveOne { .. })));
    }

    #[test]
    fn z_sampling() {
        let full = SparseBitMatrix::identity(6);
        let z = sample_z_stabilizers(&full, 3, 0);
        assert!(z.degenerate && z.rows.is_zero());
        let none = SparseBitMatrix::zeros(0, 40);
        let z = sample_z_stabilizers(&none, 10, 0);
        assert!(!z.degenerate && z.independent);
        let spec = RandomCodeSpec::new(64, Rational::from_integer(4), 5);
        let hx = sample_classical(&spec).unwrap();
        let z = sample_z_stabilizers(&hx, 16, 9);
        for row in z.rows.rows() {
            let v = BitVector::new(64, row.to_vec()).unwrap();
            assert!(hx.mul_vec(&v).unwrap().is_zero());
        }
    }

    #[test]
    fn applic_code_diagnostics() {
        let (code, d) = build_applic_code(&RandomCodeSpec::new(48, Rational::from_integer(5), 7)).unwrap();
        code.validate().unwrap();
        assert!(d.euler_holds);
        assert_eq!(d.k, code.k());
        assert_eq!(d.q_sets.len(), 12);
        let (_, thin) = build_applic_code(&RandomCodeSpec::new(48, Rational::new(1, 10), 7)).unwrap();
        assert!(thin.isolated_qubits > 0 || !thin.all_connected);
    }
}
