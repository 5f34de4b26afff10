//! Coning: inducing Z-stabilizers on chosen qubit sets through a mapping cone,
//! then reducing the cone code by disc cellulation and dual thickening.
//!
//! For a qubit set `Q`, the complex `B` has the qubits of `Q` as 1-cells, one
//! 0-cell per crossing pair `(s, {a, b})` of an X-stabilizer `s` with `Q`, and
//! one −1-cell per fundamental cycle of the graph `G` whose vertices are the
//! 1-cells and whose edges are the 0-cells. The chain map into the code sends
//! each 1-cell to its qubit and each 0-cell to its stabilizer.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::code::{CodeError, CodeParams, CssCode};
use crate::complex::{ChainComplex, ComplexError};
use crate::f2::{rank, SparseBitMatrix};
use crate::graph::{cycle_basis, Cycle, DisjointSets, Graph};
use crate::report::{BoundCheck, BoundKind, TransformReport};
use crate::rng;
use crate::thicken::{self, HeightAssignment, ThickenError};

/// Added X-stabilizers heavier than this are cellulated by [`reduce_cone`].
pub const DEFAULT_CELLULATION_THRESHOLD: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error("X-stabilizer {stabilizer} crosses the qubit set an odd number of times")]
    OddCrossingParity { stabilizer: usize },
    #[error("pairing for X-stabilizer {stabilizer} does not partition its crossings")]
    InvalidPairing { stabilizer: usize },
    #[error("complex {block} has zeroth homology of dimension {dimension}")]
    NontrivialHomology { block: usize, dimension: usize },
    #[error("direct Z-stabilizer index {0} out of range")]
    DirectOutOfRange(usize),
    #[error("expected {expected} complexes, got {got}")]
    ComplexCount { expected: usize, got: usize },
    #[error("no disc heights found; try ell_prime >= {suggested}")]
    HeightSearchFailed { suggested: usize },
    #[error("ell_prime must be at least 1")]
    ZeroLevels,
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Thicken(#[from] ThickenError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// For each X-stabilizer crossing the qubit set, a partition of its crossing qubits into pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Pairing {
    /// `(stabilizer, pairs)` in ascending stabilizer order; pairs hold qubit ids.
    pub stabilizers: Vec<(usize, Vec<(usize, usize)>)>,
}

/// A 0-cell of a B-complex: a graph edge between two local 1-cells, mapped to an
/// X-stabilizer (or to zero for augmentation edges).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZeroCell {
    pub stabilizer: Option<usize>,
    pub ends: (usize, usize),
}

/// The complex `B` of a qubit set with its graph and cycle redundancies.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BComplex {
    /// Qubit of each 1-cell (sorted).
    pub qubits: Vec<usize>,
    /// 0-cells; the i-th is edge i of `graph`.
    pub zero_cells: Vec<ZeroCell>,
    /// Graph on local 1-cell indices.
    pub graph: Graph,
    /// −1-cells.
    pub cycles: Vec<Cycle>,
}

impl BComplex {
    /// A complex whose 1-cells are the vertices `0..n` of `g` and whose 0-cells map to zero.
    pub fn from_graph(g: Graph, with_cycles: bool) -> Self {
        let zero_cells = g.edges().iter().map(|&ends| ZeroCell { stabilizer: None, ends }).collect();
        let cycles = if with_cycles { cycle_basis(&g) } else { Vec::new() };
        Self { qubits: (0..g.num_vertices()).collect(), zero_cells, graph: g, cycles }
    }

    /// The same complex without −1-cells.
    pub fn without_cycles(&self) -> Self {
        Self { cycles: Vec::new(), ..self.clone() }
    }

    /// Adds 0-cells mapped to zero between local vertices, recomputing the cycle basis.
    pub fn augment(&self, edges: &[(usize, usize)]) -> Result<Self, crate::graph::GraphError> {
        let mut all = self.graph.edges().to_vec();
        all.extend_from_slice(edges);
        let graph = Graph::new(self.qubits.len(), all)?;
        let mut zero_cells = self.zero_cells.clone();
        zero_cells.extend(edges.iter().map(|&ends| ZeroCell { stabilizer: None, ends }));
        let cycles = cycle_basis(&graph);
        Ok(Self { qubits: self.qubits.clone(), zero_cells, graph, cycles })
    }

    /// `∂₁`: rows are 0-cells, columns 1-cells.
    pub fn boundary_one(&self) -> SparseBitMatrix {
        let rows = self.zero_cells.iter().map(|z| vec![z.ends.0.min(z.ends.1), z.ends.0.max(z.ends.1)]).collect();
        SparseBitMatrix::new(self.qubits.len(), rows).expect("ends are in range")
    }

    /// `∂₀`: rows are −1-cells, columns 0-cells.
    pub fn boundary_zero(&self) -> SparseBitMatrix {
        SparseBitMatrix::new(self.zero_cells.len(), self.cycles.iter().map(Cycle::edge_set).collect()).expect("cycle edges are in range")
    }

    /// Grades −1, 0, 1.
    pub fn to_complex(&self) -> Result<ChainComplex, ComplexError> {
        ChainComplex::new(-1, vec![self.cycles.len(), self.zero_cells.len(), self.qubits.len()], vec![self.boundary_zero(), self.boundary_one()])
    }

    /// Dimension of the homology at the 0-cells.
    pub fn zeroth_homology(&self) -> usize {
        self.zero_cells.len() - rank(&self.boundary_zero()) - rank(&self.boundary_one())
    }
}

fn sorted_set(code: &CssCode, q_set: &[usize]) -> Result<Vec<usize>, ConeError> {
    let mut q = q_set.to_vec();
    q.sort_unstable();
    q.dedup();
    if let Some(&last) = q.last() {
        if last >= code.n() {
            return Err(CodeError::QubitOutOfRange { qubit: last, n: code.n() }.into());
        }
    }
    Ok(q)
}

/// Crossing qubits of every X-stabilizer touching `q` (sorted set).
fn crossings(code: &CssCode, q: &[usize]) -> Result<Vec<(usize, Vec<usize>)>, ConeError> {
    let x_of_qubit = code.hx().col_supports();
    let mut by_stab: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &qubit in q {
        for &s in &x_of_qubit[qubit] {
            by_stab.entry(s).or_default().push(qubit);
        }
    }
    for (&s, c) in &by_stab {
        if c.len() % 2 == 1 {
            return Err(ConeError::OddCrossingParity { stabilizer: s });
        }
    }
    Ok(by_stab.into_iter().collect())
}

fn validate_pairing(cross: &[(usize, Vec<usize>)], pairing: &Pairing) -> Result<(), ConeError> {
    let expected: Vec<usize> = cross.iter().map(|c| c.0).collect();
    let got: Vec<usize> = pairing.stabilizers.iter().map(|p| p.0).collect();
    if expected != got {
        let first_diff = expected.iter().zip(&got).find(|(a, b)| a != b).map(|(a, b)| *a.min(b));
        let s = first_diff.or_else(|| expected.get(got.len()).or(got.get(expected.len())).copied());
        return Err(ConeError::InvalidPairing { stabilizer: s.expect("lists differ") });
    }
    for ((s, qs), (_, pairs)) in cross.iter().zip(&pairing.stabilizers) {
        let mut flat: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        flat.sort_unstable();
        if flat != *qs || pairs.iter().any(|(a, b)| a == b) {
            return Err(ConeError::InvalidPairing { stabilizer: *s });
        }
    }
    Ok(())
}

fn pairing_graph(q: &[usize], pairing: &Pairing) -> (Graph, Vec<ZeroCell>) {
    let local = |qubit: usize| q.binary_search(&qubit).expect("paired qubits are in the set");
    let mut cells = Vec::new();
    for (s, pairs) in &pairing.stabilizers {
        for &(a, b) in pairs {
            cells.push(ZeroCell { stabilizer: Some(*s), ends: (local(a), local(b)) });
        }
    }
    let g = Graph::new(q.len(), cells.iter().map(|c| c.ends).collect()).expect("pairs join distinct qubits");
    (g, cells)
}

fn consecutive_pairing(cross: &[(usize, Vec<usize>)]) -> Pairing {
    Pairing { stabilizers: cross.iter().map(|(s, qs)| (*s, qs.chunks(2).map(|c| (c[0], c[1])).collect())).collect() }
}

/// Pairs the crossings of every X-stabilizer uniformly at random, then
/// merges components with [`fix_pairing`].
pub fn random_pairing(code: &CssCode, q_set: &[usize], seed: u64) -> Result<Pairing, ConeError> {
    let q = sorted_set(code, q_set)?;
    let mut cross = crossings(code, &q)?;
    let mut r = rng::rng(seed);
    for (_, qs) in &mut cross {
        qs.shuffle(&mut r);
    }
    let mut pairing = consecutive_pairing(&cross);
    for (_, pairs) in &mut pairing.stabilizers {
        for p in pairs.iter_mut() {
            *p = (p.0.min(p.1), p.0.max(p.1));
        }
    }
    fix_pairing(code, &q, &pairing)
}

/// Re-pairs crossings across components of `G` until its component count
/// matches the support graph of `q_set`, or no single re-pairing lowers it.
pub fn fix_pairing(code: &CssCode, q_set: &[usize], initial: &Pairing) -> Result<Pairing, ConeError> {
    let q = sorted_set(code, q_set)?;
    let cross = crossings(code, &q)?;
    validate_pairing(&cross, initial)?;
    let target = code.support_graph(&q)?.components().len();
    let mut pairing = initial.clone();
    let mut count = pairing_graph(&q, &pairing).0.num_components();
    'improve: while count > target {
        let (labels, _) = pairing_graph(&q, &pairing).0.component_labels();
        let comp = |qubit: usize| labels[q.binary_search(&qubit).expect("in set")];
        for si in 0..pairing.stabilizers.len() {
            let pairs = pairing.stabilizers[si].1.clone();
            for i in 0..pairs.len() {
                for j in i + 1..pairs.len() {
                    if comp(pairs[i].0) == comp(pairs[j].0) {
                        continue;
                    }
                    let ((a, b), (c, d)) = (pairs[i], pairs[j]);
                    for (p1, p2) in [((a, c), (b, d)), ((a, d), (b, c))] {
                        let mut trial = pairing.clone();
                        trial.stabilizers[si].1[i] = p1;
                        trial.stabilizers[si].1[j] = p2;
                        let n = pairing_graph(&q, &trial).0.num_components();
                        if n < count {
                            pairing = trial;
                            count = n;
                            continue 'improve;
                        }
                    }
                }
            }
        }
        break;
    }
    Ok(pairing)
}

/// Zero-mapped edges joining components of `g` that share an X-stabilizer,
/// one per merge, until `g` has the components of the support graph.
fn bridge_edges(q: &[usize], cross: &[(usize, Vec<usize>)], g: &Graph) -> Vec<(usize, usize)> {
    let local = |qubit: usize| q.binary_search(&qubit).expect("crossings lie in the set");
    let mut dsu = DisjointSets::new(q.len());
    for &(a, b) in g.edges() {
        dsu.union(a, b);
    }
    let mut bridges = Vec::new();
    for (_, qs) in cross {
        for w in qs.windows(2) {
            let (a, b) = (local(w[0]), local(w[1]));
            if dsu.union(a, b) {
                bridges.push((a, b));
            }
        }
    }
    bridges
}

/// Builds `B` for `q_set` with cycle redundancies, and its graph `G`.
///
/// Without an explicit pairing, crossings are paired consecutively and then
/// merged across components by [`fix_pairing`]. Components that re-pairing
/// cannot merge are joined by 0-cells mapped to zero, so that `G` always has
/// the components of the support graph.
pub fn build_b_complex(code: &CssCode, q_set: &[usize], pairing: Option<&Pairing>) -> Result<(BComplex, Graph), ConeError> {
    let q = sorted_set(code, q_set)?;
    let cross = crossings(code, &q)?;
    let explicit = pairing.is_some();
    let pairing = match pairing {
        Some(p) => {
            validate_pairing(&cross, p)?;
            p.clone()
        }
        None => fix_pairing(code, &q, &consecutive_pairing(&cross))?,
    };
    let (graph, zero_cells) = pairing_graph(&q, &pairing);
    let b = BComplex { qubits: q, zero_cells, graph, cycles: Vec::new() };
    let bridges = if explicit { Vec::new() } else { bridge_edges(&b.qubits, &cross, &b.graph) };
    let b = if bridges.is_empty() {
        BComplex { cycles: cycle_basis(&b.graph), ..b }
    } else {
        b.augment(&bridges).expect("bridges join distinct vertices of the set")
    };
    let graph = b.graph.clone();
    Ok((b, graph))
}

/// The code `C`, the Z-stabilizers kept verbatim, and the qubit sets to induce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeInput {
    pub base: CssCode,
    pub direct_z: Vec<usize>,
    pub q_sets: Vec<Vec<usize>>,
}

impl ConeInput {
    /// Takes the support of every non-direct Z-stabilizer as a qubit set.
    pub fn from_supports(base: CssCode, direct_z: Vec<usize>) -> Self {
        let q_sets = (0..base.hz().num_rows()).filter(|s| !direct_z.contains(s)).map(|s| base.hz().row(s).to_vec()).collect();
        Self { base, direct_z, q_sets }
    }

    /// Default complexes for every qubit set.
    pub fn complexes(&self) -> Result<Vec<BComplex>, ConeError> {
        self.q_sets.iter().map(|q| build_b_complex(&self.base, q, None).map(|(b, _)| b)).collect()
    }

    fn direct_rows(&self) -> Result<Vec<Vec<usize>>, ConeError> {
        self.direct_z
            .iter()
            .map(|&s| if s < self.base.hz().num_rows() { Ok(self.base.hz().row(s).to_vec()) } else { Err(ConeError::DirectOutOfRange(s)) })
            .collect()
    }
}

/// The code whose Z-stabilizers are the direct ones plus the Z-product over
/// every connected component of every graph.
pub fn induced_code(input: &ConeInput, complexes: &[BComplex]) -> Result<CssCode, ConeError> {
    let mut rows = input.direct_rows()?;
    for b in complexes {
        for comp in b.graph.components() {
            rows.push(comp.iter().map(|&v| b.qubits[v]).collect());
        }
    }
    Ok(CssCode::new(input.base.n(), input.base.hx().clone(), SparseBitMatrix::new(input.base.n(), rows).map_err(CodeError::from)?)?)
}

/// Where each complex landed in a cone code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    /// Cone qubit of 0-cell `e` is `qubit_offset + e`.
    pub qubit_offset: usize,
    /// Cone X-stabilizer of −1-cell `c` is `x_offset + c`.
    pub x_offset: usize,
    /// Cone Z-stabilizer of 1-cell `v` is `z_offset + v`.
    pub z_offset: usize,
    pub complex: BComplex,
}

/// Structure of a cone code retained for [`reduce_cone`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeLayout {
    pub base_params: CodeParams,
    /// Largest weight among direct Z-stabilizers.
    pub direct_w_z: usize,
    pub blocks: Vec<BlockLayout>,
}

/// An added X-stabilizer over a cycle, with its boundary in cyclic order:
/// `edge_qubits[k]` joins the vertices of `vertex_z_rows[k]` and `vertex_z_rows[k + 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Disc {
    pub x_row: usize,
    pub vertex_z_rows: Vec<usize>,
    pub edge_qubits: Vec<usize>,
}

impl ConeLayout {
    pub fn discs(&self) -> Vec<Disc> {
        let mut out = Vec::new();
        for b in &self.blocks {
            for (c, cycle) in b.complex.cycles.iter().enumerate() {
                out.push(Disc {
                    x_row: b.x_offset + c,
                    vertex_z_rows: cycle.vertices.iter().map(|&v| b.z_offset + v).collect(),
                    edge_qubits: cycle.edges.iter().map(|&e| b.qubit_offset + e).collect(),
                });
            }
        }
        out
    }

    pub fn total_q_size(&self) -> usize {
        self.blocks.iter().map(|b| b.complex.qubits.len()).sum()
    }
}

/// The cone code with a check that every complex has trivial zeroth homology.
pub fn cone_code(input: &ConeInput, complexes: &[BComplex]) -> Result<(CssCode, ConeLayout, TransformReport), ConeError> {
    for (i, b) in complexes.iter().enumerate() {
        let h0 = b.zeroth_homology();
        if h0 != 0 {
            return Err(ConeError::NontrivialHomology { block: i, dimension: h0 });
        }
    }
    cone_code_unchecked(input, complexes)
}

/// The cone code without the homology check. With complexes lacking cycle
/// redundancies the induced stabilizers are not recovered, and the result is a punctured code.
pub fn cone_code_unchecked(input: &ConeInput, complexes: &[BComplex]) -> Result<(CssCode, ConeLayout, TransformReport), ConeError> {
    if complexes.len() != input.q_sets.len() {
        return Err(ConeError::ComplexCount { expected: input.q_sets.len(), got: complexes.len() });
    }
    let base = &input.base;
    let n = base.n();
    let direct = input.direct_rows()?;
    let base_x = base.hx().num_rows();
    let mut x_rows: Vec<Vec<usize>> = base.hx().rows().map(|r| r.to_vec()).collect();
    let mut z_rows = direct.clone();
    let mut blocks = Vec::with_capacity(complexes.len());
    let (mut qubit_offset, mut x_offset, mut z_offset) = (n, base_x, direct.len());
    for b in complexes {
        for (e, cell) in b.zero_cells.iter().enumerate() {
            if let Some(s) = cell.stabilizer {
                x_rows[s].push(qubit_offset + e);
            }
        }
        blocks.push(BlockLayout { qubit_offset, x_offset, z_offset, complex: b.clone() });
        qubit_offset += b.zero_cells.len();
        x_offset += b.cycles.len();
        z_offset += b.qubits.len();
    }
    for bl in &blocks {
        for cycle in &bl.complex.cycles {
            x_rows.push(cycle.edge_set().iter().map(|&e| bl.qubit_offset + e).collect());
        }
    }
    for bl in &blocks {
        let adj = bl.complex.graph.adjacency();
        for (v, &q) in bl.complex.qubits.iter().enumerate() {
            let mut row = vec![q];
            row.extend(adj[v].iter().map(|&(_, e)| bl.qubit_offset + e));
            z_rows.push(row);
        }
    }
    for r in &mut x_rows {
        r.sort_unstable();
    }
    for r in &mut z_rows {
        r.sort_unstable();
    }
    let total = qubit_offset;
    let out = CssCode::new(
        total,
        SparseBitMatrix::new(total, x_rows).map_err(CodeError::from)?,
        SparseBitMatrix::new(total, z_rows).map_err(CodeError::from)?,
    )?;
    let before = base.validate()?;
    let after = out.validate()?;
    let induced = induced_code(input, complexes)?;
    let direct_w_z = direct.iter().map(Vec::len).max().unwrap_or(0);
    let max_deg = complexes.iter().flat_map(|b| b.graph.degrees()).max().unwrap_or(0);
    let mut report = TransformReport::new("cone", None, before.clone(), after.clone())
        .config("direct_z", input.direct_z.len())
        .config("q_sets", input.q_sets.len());
    report.check(BoundCheck::equal("K' = K(induced)", BoundKind::Lemma, after.k, induced.k()));
    report.check(BoundCheck::at_most("w_Z' <= max(w'_Z, 1 + max deg G_i)", BoundKind::Lemma, after.w_z, direct_w_z.max(1 + max_deg)));
    report.detail("cycles", blocks.iter().map(|b| b.complex.cycles.len()).sum::<usize>());
    report.detail("added_qubits", total - n);
    let layout = ConeLayout { base_params: before, direct_w_z, blocks };
    Ok((out, layout, report))
}

/// Options for [`reduce_cone`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReduceConfig {
    /// Levels of the dual thickening; `None` uses the fewest the greedy disc coloring needs.
    pub ell_prime: Option<usize>,
    /// Discs over cycles longer than this are cellulated.
    pub threshold: usize,
    pub max_retries: usize,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        Self { ell_prime: None, threshold: DEFAULT_CELLULATION_THRESHOLD, max_retries: thicken::DEFAULT_RETRIES }
    }
}

/// Greedy coloring of discs (adjacent when sharing an edge qubit) in `order`, with at most `limit` colors.
fn color_discs(discs: &[Disc], order: &[usize], limit: usize) -> Option<Vec<usize>> {
    let mut by_qubit: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, d) in discs.iter().enumerate() {
        for &q in &d.edge_qubits {
            by_qubit.entry(q).or_default().push(i);
        }
    }
    let mut color = vec![usize::MAX; discs.len()];
    let mut used = Vec::new();
    for &i in order {
        used.clear();
        for q in &discs[i].edge_qubits {
            used.extend(by_qubit[q].iter().map(|&j| color[j]).filter(|&c| c != usize::MAX));
        }
        used.sort_unstable();
        used.dedup();
        let c = used.iter().enumerate().find(|&(k, &u)| k != u).map_or(used.len(), |(k, _)| k);
        if c >= limit {
            return None;
        }
        color[i] = c;
    }
    Some(color)
}

/// Chord cellulation of a `w`-gon: chords join vertices `j` and `w − j` for
/// `1 ≤ j ≤ ⌊(w−2)/2⌋`. Returns faces as lists of `Ok(edge k)` / `Err(chord j)`.
pub fn chord_faces(w: usize) -> Vec<Vec<Result<usize, usize>>> {
    let chords = w.saturating_sub(2) / 2;
    if chords == 0 {
        return vec![(0..w).map(Ok).collect()];
    }
    let mut faces = vec![vec![Ok(w - 1), Ok(0), Err(1)]];
    for j in 1..chords {
        faces.push(vec![Err(j), Ok(j), Err(j + 1), Ok(w - j - 1)]);
    }
    let mut last: Vec<Result<usize, usize>> = (chords..w - chords).map(Ok).collect();
    last.push(Err(chords));
    faces.push(last);
    faces
}

/// Places each disc at a height where it is the only disc on its qubits
/// (dual thickening when more than one height is needed), then cellulates
/// discs heavier than the threshold with chords.
pub fn reduce_cone(cone: &CssCode, layout: &ConeLayout, config: &ReduceConfig, seed: u64) -> Result<(CssCode, TransformReport), ConeError> {
    let discs = layout.discs();
    let natural: Vec<usize> = (0..discs.len()).collect();
    let greedy = color_discs(&discs, &natural, usize::MAX).expect("unbounded coloring succeeds");
    let needed = greedy.iter().map(|&c| c + 1).max().unwrap_or(1);
    let (ell, colors) = match config.ell_prime {
        Some(0) => return Err(ConeError::ZeroLevels),
        None => (needed, greedy),
        Some(l) if l >= needed => (l, greedy),
        Some(l) => {
            let mut found = None;
            for r in 0..config.max_retries {
                let mut order = natural.clone();
                order.shuffle(&mut rng::rng(rng::derive_index(seed, r as u64)));
                if let Some(c) = color_discs(&discs, &order, l) {
                    found = Some(c);
                    break;
                }
            }
            (l, found.ok_or(ConeError::HeightSearchFailed { suggested: needed })?)
        }
    };

    let n_c = cone.n();
    let n_zc = cone.hz().num_rows();
    let (n_thick, mut x_rows, mut z_rows) = if ell == 1 {
        (n_c, cone.hx().rows().map(|r| r.to_vec()).collect::<Vec<_>>(), cone.hz().rows().map(|r| r.to_vec()).collect::<Vec<_>>())
    } else {
        let mut heights = vec![0; cone.hx().num_rows()];
        for (d, &c) in discs.iter().zip(&colors) {
            heights[d.x_row] = c;
        }
        let thick = thicken::thicken_code(&cone.dual(), ell, &HeightAssignment { heights })?.dual();
        (thick.n(), thick.hx().rows().map(|r| r.to_vec()).collect(), thick.hz().rows().map(|r| r.to_vec()).collect())
    };

    let mut n_out = n_thick;
    let mut chords_added = 0;
    for (d, &h) in discs.iter().zip(&colors) {
        let w = d.edge_qubits.len();
        if w <= config.threshold {
            continue;
        }
        let edge = |k: usize| h * n_c + d.edge_qubits[k];
        let chords = (w - 2) / 2;
        let chord_qubit = |j: usize| n_out + j - 1;
        for j in 1..=chords {
            z_rows[h * n_zc + d.vertex_z_rows[j]].push(chord_qubit(j));
            z_rows[h * n_zc + d.vertex_z_rows[w - j]].push(chord_qubit(j));
        }
        let faces: Vec<Vec<usize>> = chord_faces(w)
            .into_iter()
            .map(|f| f.into_iter().map(|c| c.map_or_else(chord_qubit, edge)).collect())
            .collect();
        let mut faces = faces.into_iter();
        x_rows[d.x_row] = faces.next().expect("at least one face");
        x_rows.extend(faces);
        n_out += chords;
        chords_added += chords;
    }
    for r in x_rows.iter_mut().chain(z_rows.iter_mut()) {
        r.sort_unstable();
    }
    let out = CssCode::new(
        n_out,
        SparseBitMatrix::new(n_out, x_rows).map_err(CodeError::from)?,
        SparseBitMatrix::new(n_out, z_rows).map_err(CodeError::from)?,
    )?;

    let before = cone.validate()?;
    let after = out.validate()?;
    let base = &layout.base_params;
    let mut report = TransformReport::new("reduce-cone", Some(seed), before.clone(), after.clone())
        .config("ell_prime", ell)
        .config("threshold", config.threshold);
    report.detail("disc_heights", thicken::format_list(&colors));
    report.detail("chords", chords_added);
    report.check(BoundCheck::equal("K' = K(cone)", BoundKind::Lemma, after.k, before.k));
    let per_height = discs_per_qubit_height(&discs, &colors);
    report.check(BoundCheck::at_most("discs per qubit per height <= 1", BoundKind::Lemma, per_height, 1));
    let signed = |a: usize, b: usize| a as i64 - b as i64;
    report.check(BoundCheck::measured("w_Z' - (q_X + 1 + w'_Z)", signed(after.w_z, base.q_x + 1 + layout.direct_w_z)));
    report.check(BoundCheck::measured("q_Z' - q_Z", signed(after.q_z, base.q_z)));
    report.check(BoundCheck::measured("w_X' - w_X", signed(after.w_x, base.w_x)));
    report.check(BoundCheck::measured("q_X' - q_X", signed(after.q_x, base.q_x)));
    let scale = (base.n + layout.total_q_size() * base.q_x.max(1)) * ell;
    report.detail("N' / ((N + sum|Q_i| q_X) ell')", format!("{}/{}", after.n, scale));
    Ok((out, report))
}

fn discs_per_qubit_height(discs: &[Disc], colors: &[usize]) -> usize {
    let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (d, &h) in discs.iter().zip(colors) {
        for &q in &d.edge_qubits {
            *count.entry((q, h)).or_default() += 1;
        }
    }
    count.values().copied().max().unwrap_or(0)
}
