//! Distance and soundness oracles.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::code::{CssCode, Distance, DistanceMethod, PauliKind, TaggedDistance};
use crate::cone::BComplex;
use crate::f2::{kernel_basis, rank, BitSet, BitVector, Echelon};
use crate::rng;
use crate::Rational;

/// Default cap on enumerated states for exhaustive searches.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("search budget exhausted; no logical of weight below {lower_bound}")]
    BudgetExceeded { lower_bound: usize },
    #[error("complex has nontrivial zeroth homology (dimension {0})")]
    NontrivialHomology(usize),
    #[error("soundness enumeration needs {needed} states, over budget")]
    SoundnessBudgetExceeded { needed: u128 },
    #[error("code has {0} logical qubits; at most 128 are supported")]
    TooManyLogicals(usize),
    #[error("number of trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Code(#[from] crate::code::CodeError),
}

/// A distance with the method that produced it and, when found, a minimum-weight logical.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistanceResult {
    pub value: Distance,
    pub method: DistanceMethod,
    pub witness: Option<BitVector>,
}

impl DistanceResult {
    pub fn tagged(&self) -> TaggedDistance {
        TaggedDistance { value: self.value, method: self.method }
    }
}

/// Representatives of `kind` logicals: vectors in the kernel of the opposite checks,
/// independent modulo the row space of the `kind` checks.
pub fn logical_basis(code: &CssCode, kind: PauliKind) -> Vec<BitVector> {
    let mut e = Echelon::from_matrix(code.checks(kind));
    kernel_basis(code.checks(kind.opposite())).into_iter().filter(|v| e.insert(v.support().to_vec())).collect()
}

/// Whether `v` is a nontrivial `kind` logical: it commutes with the opposite
/// checks and is not a `kind` stabilizer.
pub fn is_nontrivial_logical(code: &CssCode, kind: PauliKind, v: &BitVector) -> bool {
    let syndrome_free = code.checks(kind.opposite()).mul_vec(v).is_ok_and(|s| s.is_zero());
    syndrome_free && !code.is_stabilizer(kind, v)
}

/// Kernel vectors or single columns, with their logical masks.
struct Search {
    vectors: Vec<(BitSet, u128)>,
}

fn masks(conj: &[BitVector], v: &BitSet) -> u128 {
    conj.iter().enumerate().fold(0u128, |m, (i, l)| if v.dot(&l.to_bitset()) { m | 1 << i } else { m })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    r
}

/// Exact minimum weight of a nontrivial `kind` logical.
///
/// Chooses per weight between exhaustive supports of that weight and a Gray-code
/// walk over the kernel of the opposite checks, whichever is cheaper. Fails with
/// the best proven lower bound when `budget` states would be exceeded.
pub fn distance_exact(code: &CssCode, kind: PauliKind, budget: u64) -> Result<DistanceResult, MetricsError> {
    code.check_commutation()?;
    let k = code.k();
    if k == 0 {
        return Ok(DistanceResult { value: Distance::Infinite, method: DistanceMethod::Exact, witness: None });
    }
    if k > 128 {
        return Err(MetricsError::TooManyLogicals(k));
    }
    let n = code.n();
    let opp = code.checks(kind.opposite());
    let conj = logical_basis(code, kind.opposite());
    let kernel_dim = n - rank(opp);
    let gray_cost: u128 = if kernel_dim >= 127 { u128::MAX } else { 1u128 << kernel_dim };
    let mut spent: u128 = 0;
    let budget = budget as u128;

    let columns = column_search(code, kind, &conj);
    let mut searched = 0;
    for w in 1..=n {
        let level = binomial(n, w);
        if spent + level > gray_cost.min(budget) {
            break;
        }
        spent += level;
        if let Some(v) = weight_level(&columns, opp.num_rows(), w) {
            let witness = BitVector::new(n, v).expect("sorted distinct columns");
            return Ok(DistanceResult { value: Distance::Finite(w), method: DistanceMethod::Exact, witness: Some(witness) });
        }
        searched = w;
    }
    if spent + gray_cost > budget {
        return Err(MetricsError::BudgetExceeded { lower_bound: searched + 1 });
    }
    let (w, v) = gray_walk(code, kind, &conj);
    Ok(DistanceResult { value: Distance::Finite(w), method: DistanceMethod::Exact, witness: Some(v) })
}

/// Per-qubit syndrome (against the opposite checks) and logical mask.
fn column_search(code: &CssCode, kind: PauliKind, conj: &[BitVector]) -> Search {
    let opp = code.checks(kind.opposite());
    let rows = opp.num_rows();
    let cols = opp.col_supports();
    let n = code.n();
    let vectors = (0..n)
        .map(|q| {
            let syn = BitSet::from_support(rows, &cols[q]);
            let mask = conj.iter().enumerate().fold(0u128, |m, (i, l)| if l.get(q) { m | 1 << i } else { m });
            (syn, mask)
        })
        .collect();
    Search { vectors }
}

/// A support of exactly `w` columns with zero syndrome and nonzero logical mask.
fn weight_level(s: &Search, rows: usize, w: usize) -> Option<Vec<usize>> {
    let n = s.vectors.len();
    let mut stack_syn: Vec<BitSet> = vec![BitSet::new(rows); w + 1];
    let mut stack_mask = vec![0u128; w + 1];
    let mut chosen = vec![0usize; w];
    // Iterative combination walk with incremental accumulation.
    let mut depth = 0usize;
    let mut next = 0usize;
    loop {
        if depth == w {
            if stack_mask[w] != 0 && stack_syn[w].is_zero() {
                return Some(chosen.clone());
            }
            depth -= 1;
            next = chosen[depth] + 1;
            continue;
        }
        if next + (w - depth) > n {
            if depth == 0 {
                return None;
            }
            depth -= 1;
            next = chosen[depth] + 1;
            continue;
        }
        chosen[depth] = next;
        let (lo, hi) = stack_syn.split_at_mut(depth + 1);
        hi[0].clone_from(&lo[depth]);
        hi[0].xor_with(&s.vectors[next].0);
        stack_mask[depth + 1] = stack_mask[depth] ^ s.vectors[next].1;
        depth += 1;
        next += 1;
    }
}

/// Minimum over the whole kernel of the opposite checks, by Gray code.
fn gray_walk(code: &CssCode, kind: PauliKind, conj: &[BitVector]) -> (usize, BitVector) {
    let n = code.n();
    let basis = kernel_basis(code.checks(kind.opposite()));
    let search = Search {
        vectors: basis
            .iter()
            .map(|v| {
                let b = v.to_bitset();
                let m = masks(conj, &b);
                (b, m)
            })
            .collect(),
    };
    let r = search.vectors.len();
    let mut cur = BitSet::new(n);
    let mut mask = 0u128;
    let mut best = (usize::MAX, 0u128);
    let mut best_vec = BitSet::new(n);
    for step in 1u128..(1u128 << r) {
        let i = step.trailing_zeros() as usize;
        cur.xor_with(&search.vectors[i].0);
        mask ^= search.vectors[i].1;
        if mask != 0 {
            let w = cur.count_ones();
            if w < best.0 {
                best = (w, step);
                best_vec.clone_from(&cur);
            }
        }
    }
    (best.0, BitVector::from_bitset(&best_vec))
}

/// Randomised upper bound on the distance, by information-set sampling.
///
/// Each trial permutes the columns, reduces a kernel basis of the opposite checks
/// to echelon form in that order and inspects its rows (and pairwise sums when the
/// kernel is small). Trials use independent derived seeds.
pub fn distance_estimate(code: &CssCode, kind: PauliKind, trials: usize, seed: u64) -> Result<DistanceResult, MetricsError> {
    if trials == 0 {
        return Err(MetricsError::NoTrials);
    }
    code.check_commutation()?;
    let k = code.k();
    if k == 0 {
        return Ok(DistanceResult { value: Distance::Infinite, method: DistanceMethod::Estimate, witness: None });
    }
    if k > 128 {
        return Err(MetricsError::TooManyLogicals(k));
    }
    let n = code.n();
    let conj = logical_basis(code, kind.opposite());
    let conj_bits: Vec<BitSet> = conj.iter().map(BitVector::to_bitset).collect();
    let nontrivial = |v: &BitSet| conj_bits.iter().any(|l| v.dot(l));
    let basis: Vec<BitSet> = kernel_basis(code.checks(kind.opposite())).iter().map(BitVector::to_bitset).collect();
    let mut best: Option<BitSet> = None;
    let consider = |v: &BitSet, best: &mut Option<BitSet>| {
        if !v.is_zero() && nontrivial(v) && best.as_ref().is_none_or(|b| v.count_ones() < b.count_ones()) {
            *best = Some(v.clone());
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    for t in 0..trials {
        let mut rng = rng::rng(rng::derive_index(seed, t as u64));
        order.shuffle(&mut rng);
        let rows = echelon_in_order(&basis, &order);
        for r in &rows {
            consider(r, &mut best);
        }
        if rows.len() <= 32 {
            for a in 0..rows.len() {
                for b in (a + 1)..rows.len() {
                    let mut s = rows[a].clone();
                    s.xor_with(&rows[b]);
                    consider(&s, &mut best);
                }
            }
        }
    }
    let v = best.expect("a kernel basis spans some nontrivial logical");
    Ok(DistanceResult {
        value: Distance::Finite(v.count_ones()),
        method: DistanceMethod::Estimate,
        witness: Some(BitVector::from_bitset(&v)),
    })
}

/// Fully reduced echelon form of `rows`, taking pivots in the given column order.
fn echelon_in_order(rows: &[BitSet], order: &[usize]) -> Vec<BitSet> {
    let mut rows: Vec<BitSet> = rows.to_vec();
    let mut pivot_row = 0;
    for &c in order {
        if pivot_row == rows.len() {
            break;
        }
        let Some(p) = (pivot_row..rows.len()).find(|&r| rows[r].get(c)) else { continue };
        rows.swap(pivot_row, p);
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && row.get(c) {
                row.xor_with(&pivot);
            }
        }
        pivot_row += 1;
    }
    rows
}

/// Soundness factor of a B-complex: the minimum over nonzero boundaries `u = ∂v`
/// of `|u| / min |v'|`, the inner minimum over all `v'` with `∂v' = u`.
///
/// Returns `None` when `∂` is zero. Requires trivial zeroth homology.
pub fn soundness(b: &BComplex, budget: u64) -> Result<Option<Rational>, MetricsError> {
    let d1 = b.boundary_one();
    let d0 = b.boundary_zero();
    let n1 = d1.num_cols();
    let n0 = d1.num_rows();
    let h0 = n0 - rank(&d0) - rank(&d1);
    if h0 != 0 {
        return Err(MetricsError::NontrivialHomology(h0));
    }
    let kernel: Vec<u64> = kernel_basis(&d1).iter().map(|v| v.support().iter().fold(0u64, |m, &i| m | 1 << i)).collect();
    let needed = if n1 + kernel.len() >= 127 { u128::MAX } else { 1u128 << (n1 + kernel.len()) };
    if n1 > 63 || needed > budget as u128 {
        return Err(MetricsError::SoundnessBudgetExceeded { needed });
    }
    let edges: Vec<(u32, u32)> = b.graph.edges().iter().map(|&(a, c)| (a as u32, c as u32)).collect();
    let mut best: Option<Rational> = None;
    for v in 1u64..(1u64 << n1) {
        let u = edges.iter().filter(|&&(a, c)| (v >> a ^ v >> c) & 1 == 1).count() as u64;
        if u == 0 {
            continue;
        }
        let mut min_v = u64::MAX;
        for combo in 0u64..(1u64 << kernel.len()) {
            let shift = kernel.iter().enumerate().fold(0u64, |m, (i, &kv)| if combo >> i & 1 == 1 { m ^ kv } else { m });
            min_v = min_v.min(u64::from((v ^ shift).count_ones()));
        }
        let r = Rational::new(u, min_v);
        if best.is_none_or(|bb| r < bb) {
            best = Some(r);
        }
    }
    Ok(best)
}

/// Fills in exact distances where the budget allows, else estimates.
pub fn distances(code: &CssCode, budget: u64, trials: usize, seed: u64) -> Result<(TaggedDistance, TaggedDistance), MetricsError> {
    let one = |kind: PauliKind| -> Result<TaggedDistance, MetricsError> {
        match distance_exact(code, kind, budget) {
            Ok(d) => Ok(d.tagged()),
            Err(MetricsError::BudgetExceeded { .. }) => {
                let name = if kind == PauliKind::X { "distance-x" } else { "distance-z" };
                Ok(distance_estimate(code, kind, trials, rng::derive(seed, name))?.tagged())
            }
            Err(e) => Err(e),
        }
    };
    Ok((one(PauliKind::X)?, one(PauliKind::Z)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::build_b_complex;
    use crate::fixtures;
    use crate::graph::{cheeger, Graph};
    use proptest::prelude::*;

    fn brute_distance(code: &CssCode, kind: PauliKind) -> Option<usize> {
        let n = code.n();
        assert!(n <= 20);
        (1u32..(1 << n))
            .filter_map(|m| {
                let v = BitVector::new(n, (0..n).filter(|&i| m >> i & 1 == 1).collect()).unwrap();
                is_nontrivial_logical(code, kind, &v).then_some(v.weight())
            })
            .min()
    }

    #[test]
    fn exact_distance_examples() {
        let steane = fixtures::steane();
        let d = distance_exact(&steane, PauliKind::Z, DEFAULT_BUDGET).unwrap();
        assert_eq!((d.value, d.method), (Distance::Finite(3), DistanceMethod::Exact));
        assert!(is_nontrivial_logical(&steane, PauliKind::Z, d.witness.as_ref().unwrap()));
        let toric = fixtures::toric(3);
        assert_eq!(distance_exact(&toric, PauliKind::X, DEFAULT_BUDGET).unwrap().value, Distance::Finite(3));
        let trivial = CssCode::from_rows(2, vec![vec![0, 1]], vec![vec![0, 1]]).unwrap();
        let d = distance_exact(&trivial, PauliKind::Z, DEFAULT_BUDGET).unwrap();
        assert_eq!((d.value, d.method, d.witness), (Distance::Infinite, DistanceMethod::Exact, None));
    }

    #[test]
    fn exact_distance_matches_brute_force() {
        for code in [fixtures::steane(), fixtures::toric(2), fixtures::toric(3), fixtures::fig1(3, 6)] {
            if code.n() > 20 {
                continue;
            }
            for kind in [PauliKind::X, PauliKind::Z] {
                let d = distance_exact(&code, kind, DEFAULT_BUDGET).unwrap();
                assert_eq!(d.value.finite(), brute_distance(&code, kind));
            }
        }
    }

    #[test]
    fn gray_walk_agrees_with_weight_levels() {
        let toric = fixtures::toric(4);
        for kind in [PauliKind::X, PauliKind::Z] {
            let conj = logical_basis(&toric, kind.opposite());
            let (w, v) = gray_walk(&toric, kind, &conj);
            assert_eq!(w, 4);
            assert!(is_nontrivial_logical(&toric, kind, &v));
            assert_eq!(distance_exact(&toric, kind, DEFAULT_BUDGET).unwrap().value, Distance::Finite(4));
        }
    }

    #[test]
    fn budget_exceeded_reports_lower_bound() {
        let toric = fixtures::toric(4);
        match distance_exact(&toric, PauliKind::X, 40) {
            Err(MetricsError::BudgetExceeded { lower_bound }) => assert_eq!(lower_bound, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn estimate_examples() {
        let steane = fixtures::steane();
        let d = distance_estimate(&steane, PauliKind::Z, 100, 11).unwrap();
        assert_eq!(d.method, DistanceMethod::Estimate);
        assert_eq!(d.value, Distance::Finite(3));
        assert_eq!(distance_estimate(&steane, PauliKind::Z, 100, 11).unwrap(), d);
        let trivial = CssCode::from_rows(2, vec![vec![0, 1]], vec![vec![0, 1]]).unwrap();
        assert_eq!(distance_estimate(&trivial, PauliKind::X, 5, 1).unwrap().value, Distance::Infinite);
        assert_eq!(distance_estimate(&steane, PauliKind::X, 0, 1), Err(MetricsError::NoTrials));
    }

    #[test]
    fn estimate_never_below_exact() {
        for (i, code) in [fixtures::toric(3), fixtures::toric(4), fixtures::fig1(4, 8)].iter().enumerate() {
            for kind in [PauliKind::X, PauliKind::Z] {
                let exact = distance_exact(code, kind, DEFAULT_BUDGET).unwrap().value;
                let est = distance_estimate(code, kind, 200, i as u64).unwrap();
                assert!(est.value >= exact);
                assert_eq!(est.value, exact, "200 trials reach the minimum on small codes");
                assert!(is_nontrivial_logical(code, kind, est.witness.as_ref().unwrap()));
            }
        }
    }

    #[test]
    fn soundness_examples() {
        let edge = BComplex::from_graph(Graph::path(2), false);
        assert_eq!(soundness(&edge, DEFAULT_BUDGET).unwrap(), Some(Rational::new(1, 1)));
        let c4 = BComplex::from_graph(Graph::cycle(4), true);
        assert_eq!(soundness(&c4, DEFAULT_BUDGET).unwrap(), Some(Rational::new(1, 1)));
        // An extra parallel edge with no cycle to absorb it leaves a 0-cycle unkilled.
        let open = BComplex::from_graph(Graph::new(2, vec![(0, 1), (0, 1)]).unwrap(), false);
        assert_eq!(soundness(&open, DEFAULT_BUDGET), Err(MetricsError::NontrivialHomology(1)));
    }

    #[test]
    fn soundness_on_toric_face() {
        let toric = fixtures::toric(4);
        let face = toric.hz().row(0).to_vec();
        let (b, g) = build_b_complex(&toric, &face, None).unwrap();
        let h = cheeger(&g).unwrap().value.unwrap();
        assert_eq!(soundness(&b, DEFAULT_BUDGET).unwrap(), Some(h));
    }

    proptest! {
        #[test]
        fn soundness_at_least_cheeger(n in 2usize..9, pairs in proptest::collection::vec((0usize..9, 0usize..9), 0..16)) {
            let edges: Vec<_> = pairs.into_iter().map(|(a, b)| (a % n, b % n)).filter(|(a, b)| a != b).collect();
            let g = Graph::new(n, edges).unwrap();
            let b = BComplex::from_graph(g.clone(), true);
            let lambda = soundness(&b, DEFAULT_BUDGET).unwrap();
            let h = cheeger(&g).unwrap().value;
            match (lambda, h) {
                (Some(l), Some(h)) => prop_assert!(l >= h),
                (None, _) => prop_assert_eq!(g.num_edges(), 0),
                (Some(_), None) => prop_assert!(false, "edges exist but no component has two vertices"),
            }
        }
    }
}
