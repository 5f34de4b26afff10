//! Connecting unreasonable codes, and augmenting the graphs of qubit sets
//! with random matchings until their Cheeger constants reach a target.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::code::{CodeError, CssCode};
use crate::cone::{build_b_complex, BComplex, ConeError};
use crate::f2::{xor_sorted, Echelon, SparseBitMatrix};
use crate::graph::{cheeger, Cheeger, Graph, GraphError};
use crate::report::{BoundCheck, BoundKind, TransformReport};
use crate::rng;
use crate::Rational;

/// Default cap on augmentation rounds.
pub const DEFAULT_ROUNDS: usize = 20;
/// Candidate matchings sampled per component and round.
pub const CANDIDATES_PER_ROUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RobustifyError {
    #[error("code is not reasonable: Z-stabilizer {stabilizer} has a component outside the stabilizer group")]
    NotReasonable { stabilizer: usize },
    #[error("augmentation stopped after {rounds} rounds with Cheeger constant {best:?}")]
    AugmentationFailed { rounds: usize, best: Option<Rational> },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Connecting qubits added for one Z-stabilizer.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConnectEntry {
    pub stabilizer: usize,
    /// `(q′_a, q_{a+1})`: the lowest qubits of components `a` and `a + 1`.
    pub representatives: Vec<(usize, usize)>,
    /// `r_a`, one per adjacent component pair.
    pub connecting: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConnectPlan {
    pub entries: Vec<ConnectEntry>,
}

/// Joins the support-graph components of every unreasonable Z-stabilizer.
///
/// For components `C_1..C_k` ordered by lowest qubit, qubit `r_a` is added
/// with Z-stabilizer `Z_{q′_a} Z_{q_{a+1}} Z_{r_a}`; every X-stabilizer on
/// `q′_a` or `q_{a+1}` gains `r_a`, and the stabilizer is multiplied by all
/// the new triples. Triples are appended after the existing Z-stabilizers.
pub fn connect(code: &CssCode) -> Result<(CssCode, ConnectPlan, TransformReport), RobustifyError> {
    let before = code.validate()?;
    let x_of_qubit = code.hx().col_supports();
    let mut x_rows: Vec<Vec<usize>> = code.hx().rows().map(|r| r.to_vec()).collect();
    let mut z_rows: Vec<Vec<usize>> = code.hz().rows().map(|r| r.to_vec()).collect();
    let mut triples = Vec::new();
    let mut plan = ConnectPlan::default();
    let mut echelon: Option<Echelon> = None;
    let mut n = code.n();
    for s in 0..z_rows.len() {
        let comps = code.support_graph_with(&x_of_qubit, code.hz().row(s))?.components();
        if comps.len() < 2 {
            continue;
        }
        let e = echelon.get_or_insert_with(|| Echelon::from_matrix(code.hz()));
        if comps.iter().all(|c| e.contains(c)) {
            continue;
        }
        let mut entry = ConnectEntry { stabilizer: s, representatives: Vec::new(), connecting: Vec::new() };
        for pair in comps.windows(2) {
            let (q1, q2, r) = (pair[0][0], pair[1][0], n);
            n += 1;
            for x in xor_sorted(&x_of_qubit[q1], &x_of_qubit[q2]) {
                x_rows[x].push(r);
            }
            let triple = vec![q1.min(q2), q1.max(q2), r];
            z_rows[s] = xor_sorted(&z_rows[s], &triple);
            triples.push(triple);
            entry.representatives.push((q1, q2));
            entry.connecting.push(r);
        }
        plan.entries.push(entry);
    }
    z_rows.extend(triples);
    let out = CssCode::new(
        n,
        SparseBitMatrix::new(n, x_rows).map_err(CodeError::from)?,
        SparseBitMatrix::new(n, z_rows).map_err(CodeError::from)?,
    )?;
    let after = out.validate()?;
    let added: usize = plan.entries.iter().map(|e| e.connecting.len()).sum();
    let mut report = TransformReport::new("connect", None, before.clone(), after.clone());
    report.check(BoundCheck::equal("K' = K", BoundKind::Lemma, after.k, before.k));
    report.check(BoundCheck::equal("N' = N + sum_S (components(S) - 1)", BoundKind::Lemma, after.n, before.n + added));
    report.detail("reasonable_after", out.is_reasonable().is_reasonable());
    report.detail("connected_stabilizers", plan.entries.len());
    Ok((out, plan, report))
}

/// Edges added to one graph and the resulting Cheeger constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphAugmentation {
    pub added: Vec<(usize, usize)>,
    pub cheeger: Cheeger,
    /// Largest number of added edges at any vertex.
    pub degree_increase: usize,
    pub rounds: usize,
}

fn meets(h: &Cheeger, target: Rational) -> bool {
    h.value.is_none_or(|v| v >= target)
}

fn random_matching(comp: &[usize], seed: u64) -> Vec<(usize, usize)> {
    let mut order = comp.to_vec();
    order.shuffle(&mut rng::rng(seed));
    order.chunks_exact(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect()
}

/// Adds random near-perfect matchings inside components whose Cheeger
/// constant is below `target`, keeping the best of several candidates per
/// round, until every component reaches it or `max_rounds` pass.
pub fn augment_graph(g: &Graph, target: Rational, seed: u64, max_rounds: usize) -> Result<GraphAugmentation, RobustifyError> {
    let mut graph = g.clone();
    let mut added = Vec::new();
    let comps: Vec<Vec<usize>> = g.components().into_iter().filter(|c| c.len() >= 2).collect();
    let mut rounds = 0;
    loop {
        let mut failing = Vec::new();
        for (ci, comp) in comps.iter().enumerate() {
            if !meets(&cheeger(&graph.induced(comp))?, target) {
                failing.push(ci);
            }
        }
        if failing.is_empty() || rounds == max_rounds {
            break;
        }
        for ci in failing {
            let comp = &comps[ci];
            let mut best: Option<(Vec<(usize, usize)>, Option<Rational>)> = None;
            for c in 0..CANDIDATES_PER_ROUND {
                let sub_seed = rng::derive_index(rng::derive_index(seed, rounds as u64), (ci * CANDIDATES_PER_ROUND + c) as u64);
                let matching = random_matching(comp, sub_seed);
                let mut trial = graph.induced(comp);
                let local = |v: usize| comp.binary_search(&v).expect("vertex in component");
                for &(a, b) in &matching {
                    trial.add_edge(local(a), local(b))?;
                }
                let h = cheeger(&trial)?.value;
                if best.as_ref().is_none_or(|(_, bh)| h > *bh) {
                    best = Some((matching, h));
                }
            }
            for (a, b) in best.expect("at least one candidate").0 {
                graph.add_edge(a, b)?;
                added.push((a, b));
            }
        }
        rounds += 1;
    }
    let h = cheeger(&graph)?;
    let mut degree = vec![0; g.num_vertices()];
    for &(a, b) in &added {
        degree[a] += 1;
        degree[b] += 1;
    }
    let degree_increase = degree.into_iter().max().unwrap_or(0);
    if !meets(&h, target) {
        return Err(RobustifyError::AugmentationFailed { rounds, best: h.value });
    }
    Ok(GraphAugmentation { added, cheeger: h, degree_increase, rounds })
}

/// Augments the graph of every qubit set of a reasonable code. The returned
/// complexes carry the added edges as 0-cells mapped to zero.
pub fn improve_soundness(
    code: &CssCode,
    q_sets: &[Vec<usize>],
    target_h: Rational,
    seed: u64,
) -> Result<(Vec<BComplex>, Vec<GraphAugmentation>, TransformReport), RobustifyError> {
    let params = code.validate()?;
    if let crate::code::Reasonableness::Unreasonable { stabilizer, .. } = code.is_reasonable() {
        return Err(RobustifyError::NotReasonable { stabilizer });
    }
    let mut complexes = Vec::with_capacity(q_sets.len());
    let mut augmentations = Vec::with_capacity(q_sets.len());
    for (i, q) in q_sets.iter().enumerate() {
        let (b, g) = build_b_complex(code, q, None)?;
        if g.num_vertices() == 0 {
            complexes.push(b);
            augmentations.push(GraphAugmentation { added: Vec::new(), cheeger: Cheeger { value: None, exact: true }, degree_increase: 0, rounds: 0 });
            continue;
        }
        let aug = augment_graph(&g, target_h, rng::derive_index(seed, i as u64), DEFAULT_ROUNDS)?;
        complexes.push(b.augment(&aug.added)?);
        augmentations.push(aug);
    }
    let mut report = TransformReport::new("improve-soundness", Some(seed), params.clone(), params)
        .config("target_h", target_h)
        .config("max_rounds", DEFAULT_ROUNDS);
    let max_increase = augmentations.iter().map(|a| a.degree_increase).max().unwrap_or(0);
    report.check(BoundCheck::measured("max vertex degree increase", max_increase as i64));
    report.detail("added_edges", augmentations.iter().map(|a| a.added.len()).sum::<usize>());
    Ok((complexes, augmentations, report))
}
