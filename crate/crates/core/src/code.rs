//! CSS codes as graded 2-complexes, their parameter ledger and support graphs.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::complex::ChainComplex;
use crate::f2::{overlap_parity, rank, BitVector, Echelon, F2Error, SparseBitMatrix};
use crate::graph::{DisjointSets, Graph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error("{kind:?}-check matrix has {cols} columns but the code has {n} qubits")]
    ColumnMismatch { kind: PauliKind, cols: usize, n: usize },
    #[error("X-stabilizer {x_stab} anticommutes with Z-stabilizer {z_stab}")]
    CommutationViolation { x_stab: usize, z_stab: usize },
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("Z-stabilizer {stabilizer} is unreasonable: component {component:?} is not in the stabilizer group")]
    NotReasonable { stabilizer: usize, component: Vec<usize> },
    #[error(transparent)]
    F2(#[from] F2Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PauliKind {
    X,
    Z,
}

impl PauliKind {
    pub fn opposite(self) -> Self {
        match self {
            PauliKind::X => PauliKind::Z,
            PauliKind::Z => PauliKind::X,
        }
    }
}

/// A distance value; codes without logical qubits have no nontrivial logicals at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Distance {
    Finite(usize),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Distance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Distance::Finite(d) => s.serialize_u64(*d as u64),
            Distance::Infinite => s.serialize_str("inf"),
        }
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Distance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw<'a> {
            Num(u64),
            Str(&'a str),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(Distance::Finite(n as usize)),
            Raw::Str("inf") => Ok(Distance::Infinite),
            Raw::Str(other) => Err(serde::de::Error::custom(alloc::format!("bad distance {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DistanceMethod {
    Exact,
    LowerBound,
    Estimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TaggedDistance {
    pub value: Distance,
    pub method: DistanceMethod,
}

/// The parameter ledger of a code.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub n_x: usize,
    pub n_z: usize,
    pub w_x: usize,
    pub w_z: usize,
    pub q_x: usize,
    pub q_z: usize,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub d_x: Option<TaggedDistance>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub d_z: Option<TaggedDistance>,
}

/// A CSS code: `hx` rows are X-stabilizers, `hz` rows are Z-stabilizers, columns are qubits.
///
/// As a complex, Z-stabilizers are 2-cells, qubits 1-cells and X-stabilizers
/// 0-cells, with `∂₁ = hx` and `∂₂ = hzᵀ`. Rows are generators and may be dependent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CssCode {
    n: usize,
    hx: SparseBitMatrix,
    hz: SparseBitMatrix,
}

/// Bipartite graph between a set of qubits and the X-stabilizers touching them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportGraph {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// `(qubit, x-stabilizer)` incidences, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl SupportGraph {
    /// Left-vertex sets of the connected components, ordered by lowest qubit.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let nl = self.left.len();
        let mut dsu = DisjointSets::new(nl + self.right.len());
        for &(q, x) in &self.edges {
            let a = self.left.binary_search(&q).expect("edge qubit is a left vertex");
            let b = self.right.binary_search(&x).expect("edge stabilizer is a right vertex");
            dsu.union(a, nl + b);
        }
        let mut root_index: Vec<(usize, usize)> = Vec::new();
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for (i, &q) in self.left.iter().enumerate() {
            let r = dsu.find(i);
            match root_index.iter().find(|(root, _)| *root == r) {
                Some(&(_, c)) => comps[c].push(q),
                None => {
                    root_index.push((r, comps.len()));
                    comps.push(vec![q]);
                }
            }
        }
        comps
    }

    /// The graph on left vertices only, one edge per consecutive pair within each stabilizer.
    pub fn qubit_graph(&self) -> Graph {
        let mut edges = Vec::new();
        let mut by_stab: Vec<Vec<usize>> = vec![Vec::new(); self.right.len()];
        for &(q, x) in &self.edges {
            let a = self.left.binary_search(&q).expect("edge qubit is a left vertex");
            let b = self.right.binary_search(&x).expect("edge stabilizer is a right vertex");
            by_stab[b].push(a);
        }
        for qs in by_stab {
            for w in qs.windows(2) {
                edges.push((w[0], w[1]));
            }
        }
        Graph::new(self.left.len(), edges).expect("consecutive distinct qubits")
    }
}

/// Outcome of [`CssCode::is_reasonable`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reasonableness {
    Reasonable,
    /// A component of the support graph of `stabilizer` whose Z-product is not a stabilizer.
    Unreasonable { stabilizer: usize, component: Vec<usize> },
}

impl Reasonableness {
    pub fn is_reasonable(&self) -> bool {
        matches!(self, Reasonableness::Reasonable)
    }
}

impl CssCode {
    pub fn new(n: usize, hx: SparseBitMatrix, hz: SparseBitMatrix) -> Result<Self, CodeError> {
        for (kind, m) in [(PauliKind::X, &hx), (PauliKind::Z, &hz)] {
            if m.num_cols() != n {
                return Err(CodeError::ColumnMismatch { kind, cols: m.num_cols(), n });
            }
        }
        Ok(Self { n, hx, hz })
    }

    /// Builds from row supports, rejecting malformed rows.
    pub fn from_rows(n: usize, x_rows: Vec<Vec<usize>>, z_rows: Vec<Vec<usize>>) -> Result<Self, CodeError> {
        Self::new(n, SparseBitMatrix::new(n, x_rows)?, SparseBitMatrix::new(n, z_rows)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hx(&self) -> &SparseBitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &SparseBitMatrix {
        &self.hz
    }

    pub fn checks(&self, kind: PauliKind) -> &SparseBitMatrix {
        match kind {
            PauliKind::X => &self.hx,
            PauliKind::Z => &self.hz,
        }
    }

    pub fn into_parts(self) -> (usize, SparseBitMatrix, SparseBitMatrix) {
        (self.n, self.hx, self.hz)
    }

    /// First anticommuting `(x, z)` pair in row order.
    pub fn commutation_violation(&self) -> Option<(usize, usize)> {
        let z_of_qubit = self.hz.col_supports();
        for (x, row) in self.hx.rows().enumerate() {
            let mut touched: Vec<usize> = row.iter().flat_map(|&q| z_of_qubit[q].iter().copied()).collect();
            touched.sort_unstable();
            touched.dedup();
            for z in touched {
                if overlap_parity(row, self.hz.row(z)) {
                    return Some((x, z));
                }
            }
        }
        None
    }

    pub fn check_commutation(&self) -> Result<(), CodeError> {
        match self.commutation_violation() {
            Some((x_stab, z_stab)) => Err(CodeError::CommutationViolation { x_stab, z_stab }),
            None => Ok(()),
        }
    }

    /// `N − rank(hx) − rank(hz)`; meaningful only for commuting codes.
    pub fn k(&self) -> usize {
        self.n - rank(&self.hx) - rank(&self.hz)
    }

    /// Checks commutation and returns the ledger without distances.
    pub fn validate(&self) -> Result<CodeParams, CodeError> {
        self.check_commutation()?;
        Ok(self.params_unchecked())
    }

    pub(crate) fn params_unchecked(&self) -> CodeParams {
        CodeParams {
            n: self.n,
            k: self.k(),
            n_x: self.hx.num_rows(),
            n_z: self.hz.num_rows(),
            w_x: self.hx.max_row_weight(),
            w_z: self.hz.max_row_weight(),
            q_x: self.hx.max_col_weight(),
            q_z: self.hz.max_col_weight(),
            d_x: None,
            d_z: None,
        }
    }

    /// The complex `A₂ → A₁ → A₀` with grades 0, 1, 2.
    pub fn to_complex(&self) -> Result<ChainComplex, crate::complex::ComplexError> {
        ChainComplex::new(0, vec![self.hx.num_rows(), self.n, self.hz.num_rows()], vec![
            self.hx.clone(),
            self.hz.transpose(),
        ])
    }

    /// Swaps the roles of X and Z.
    pub fn dual(&self) -> CssCode {
        CssCode { n: self.n, hx: self.hz.clone(), hz: self.hx.clone() }
    }

    pub fn support_graph(&self, q_set: &[usize]) -> Result<SupportGraph, CodeError> {
        self.support_graph_with(&self.hx.col_supports(), q_set)
    }

    /// [`support_graph`](Self::support_graph) with precomputed X-stabilizers per qubit.
    pub(crate) fn support_graph_with(&self, x_of_qubit: &[Vec<usize>], q_set: &[usize]) -> Result<SupportGraph, CodeError> {
        let mut left: Vec<usize> = q_set.to_vec();
        left.sort_unstable();
        left.dedup();
        if let Some(&q) = left.last() {
            if q >= self.n {
                return Err(CodeError::QubitOutOfRange { qubit: q, n: self.n });
            }
        }
        let mut edges = Vec::new();
        let mut right = BTreeSet::new();
        for &q in &left {
            for &x in &x_of_qubit[q] {
                edges.push((q, x));
                right.insert(x);
            }
        }
        edges.sort_unstable();
        Ok(SupportGraph { left, right: right.into_iter().collect(), edges })
    }

    /// Support-graph components of every Z-stabilizer.
    pub(crate) fn z_components(&self) -> Vec<Vec<Vec<usize>>> {
        let x_of_qubit = self.hx.col_supports();
        self.hz.rows().map(|row| self.support_graph_with(&x_of_qubit, row).expect("rows are in range").components()).collect()
    }

    /// Whether every component of every Z-stabilizer's support graph carries a stabilizer.
    pub fn is_reasonable(&self) -> Reasonableness {
        let mut echelon: Option<Echelon> = None;
        for (s, comps) in self.z_components().into_iter().enumerate() {
            if comps.len() < 2 {
                continue;
            }
            let e = echelon.get_or_insert_with(|| Echelon::from_matrix(&self.hz));
            for c in comps {
                if !e.contains(&c) {
                    return Reasonableness::Unreasonable { stabilizer: s, component: c };
                }
            }
        }
        Reasonableness::Reasonable
    }

    /// Whether every Z-stabilizer has a connected support graph.
    pub fn is_connected(&self) -> bool {
        self.z_components().iter().all(|c| c.len() < 2)
    }

    /// Replaces each Z-stabilizer by one stabilizer per support-graph component.
    ///
    /// Unsplit stabilizers are kept verbatim; component rows that duplicate an
    /// existing row are dropped.
    pub fn make_connected(&self) -> Result<CssCode, CodeError> {
        if let Reasonableness::Unreasonable { stabilizer, component } = self.is_reasonable() {
            return Err(CodeError::NotReasonable { stabilizer, component });
        }
        let split = self.z_components();
        if split.iter().all(|c| c.len() < 2) {
            return Ok(self.clone());
        }
        let mut seen: BTreeSet<Vec<usize>> =
            split.iter().zip(self.hz.rows()).filter(|(c, _)| c.len() < 2).map(|(_, r)| r.to_vec()).collect();
        let mut rows = Vec::new();
        for (comps, row) in split.into_iter().zip(self.hz.rows()) {
            if comps.len() < 2 {
                rows.push(row.to_vec());
                continue;
            }
            for c in comps {
                if seen.insert(c.clone()) {
                    rows.push(c);
                }
            }
        }
        CssCode::new(self.n, self.hx.clone(), SparseBitMatrix::new(self.n, rows)?)
    }

    /// Whether `v` is a stabilizer of the given kind (in the row space).
    pub fn is_stabilizer(&self, kind: PauliKind, v: &BitVector) -> bool {
        crate::f2::in_row_space(self.checks(kind), v)
    }
}
