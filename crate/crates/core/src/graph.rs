//! Multigraphs, connected components, Cheeger constants and cycle bases.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::Rational;

/// Components up to this size are searched exhaustively by [`cheeger`].
pub const DEFAULT_EXHAUSTIVE_VERTICES: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("edge {edge} endpoint {vertex} out of range for {vertices} vertices")]
    OutOfRange { edge: usize, vertex: usize, vertices: usize },
    #[error("exhaustive threshold {0} exceeds the supported maximum of 30 vertices")]
    ThresholdTooLarge(usize),
}

/// Undirected multigraph without self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        for (i, &(a, b)) in edges.iter().enumerate() {
            for v in [a, b] {
                if v >= vertices {
                    return Err(GraphError::OutOfRange { edge: i, vertex: v, vertices });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop { edge: i, vertex: a });
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn empty(vertices: usize) -> Self {
        Self { vertices, edges: Vec::new() }
    }

    pub fn cycle(n: usize) -> Self {
        Self { vertices: n, edges: (0..n).map(|i| (i, (i + 1) % n)).collect() }
    }

    pub fn path(n: usize) -> Self {
        Self { vertices: n, edges: (1..n).map(|i| (i - 1, i)).collect() }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        Self { vertices: n, edges }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<usize, GraphError> {
        let edge = self.edges.len();
        if a >= self.vertices || b >= self.vertices {
            let vertex = if a >= self.vertices { a } else { b };
            return Err(GraphError::OutOfRange { edge, vertex, vertices: self.vertices });
        }
        if a == b {
            return Err(GraphError::SelfLoop { edge, vertex: a });
        }
        self.edges.push((a, b));
        Ok(edge)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// Incident `(neighbor, edge index)` pairs per vertex, in edge order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        adj
    }

    /// Component label per vertex, labels ordered by lowest vertex.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut dsu = DisjointSets::new(self.vertices);
        for &(a, b) in &self.edges {
            dsu.union(a, b);
        }
        dsu.labels()
    }

    /// Vertex sets of the connected components, each sorted, ordered by lowest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let (labels, count) = self.component_labels();
        let mut comps = vec![Vec::new(); count];
        for (v, &l) in labels.iter().enumerate() {
            comps[l].push(v);
        }
        comps
    }

    pub fn num_components(&self) -> usize {
        self.component_labels().1
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() <= 1
    }

    /// Induced subgraph on `vertices` (sorted), relabelled to `0..vertices.len()`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.vertices];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| index[a] != usize::MAX && index[b] != usize::MAX)
            .map(|&(a, b)| (index[a], index[b]))
            .collect();
        Graph { vertices: vertices.len(), edges }
    }
}

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    pub fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut label_of_root = vec![usize::MAX; n];
        let mut labels = vec![0; n];
        let mut count = 0;
        for v in 0..n {
            let r = self.find(v);
            if label_of_root[r] == usize::MAX {
                label_of_root[r] = count;
                count += 1;
            }
            labels[v] = label_of_root[r];
        }
        (labels, count)
    }
}

/// Cheeger constant of a graph, minimised over components with at least two vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Cheeger {
    /// `None` when every component is a single vertex.
    pub value: Option<Rational>,
    /// False when some component was too large and only a certified lower bound was computed.
    pub exact: bool,
}

/// [`cheeger_with_threshold`] at [`DEFAULT_EXHAUSTIVE_VERTICES`].
pub fn cheeger(g: &Graph) -> Result<Cheeger, GraphError> {
    cheeger_with_threshold(g, DEFAULT_EXHAUSTIVE_VERTICES)
}

/// `min |∂w| / |w|` over vertex sets `w` of size `1..=⌊n/2⌋` within each component.
///
/// Components with more than `threshold` vertices get a lower bound instead:
/// the larger of `λ₂/2` (certified by an LDLᵀ factorisation) and `1/⌊n/2⌋`.
pub fn cheeger_with_threshold(g: &Graph, threshold: usize) -> Result<Cheeger, GraphError> {
    if g.num_vertices() == 0 {
        return Err(GraphError::Empty);
    }
    if threshold > 30 {
        return Err(GraphError::ThresholdTooLarge(threshold));
    }
    let mut best: Option<Rational> = None;
    let mut exact = true;
    for comp in g.components() {
        if comp.len() < 2 {
            continue;
        }
        let sub = g.induced(&comp);
        let h = if comp.len() <= threshold {
            exhaustive_connected(&sub)
        } else {
            exact = false;
            spectral_lower_bound(&sub)
        };
        best = Some(match best {
            Some(b) if b <= h => b,
            _ => h,
        });
    }
    Ok(Cheeger { value: best, exact })
}

/// Exhaustive Cheeger constant of a connected graph with at most 30 vertices.
fn exhaustive_connected(g: &Graph) -> Rational {
    let n = g.num_vertices();
    let half = n / 2;
    let mut nbr: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for &(a, b) in g.edges() {
        for (x, y) in [(a, b), (b, a)] {
            match nbr[x].iter_mut().find(|(v, _)| *v as usize == y) {
                Some(e) => e.1 += 1,
                None => nbr[x].push((y as u32, 1)),
            }
        }
    }
    let deg = g.degrees();
    let (mut best_num, mut best_den) = (u64::MAX, 1u64);
    let mut set: u32 = 0;
    let mut size = 0usize;
    let mut boundary: i64 = 0;
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let inside: i64 = nbr[v].iter().filter(|(u, _)| set >> u & 1 == 1).map(|&(_, m)| i64::from(m)).sum();
        if set >> v & 1 == 0 {
            boundary += deg[v] as i64 - 2 * inside;
            size += 1;
        } else {
            boundary -= deg[v] as i64 - 2 * inside;
            size -= 1;
        }
        set ^= 1 << v;
        if size >= 1 && size <= half {
            let b = boundary as u64;
            if (b as u128) * (best_den as u128) < (best_num as u128) * (size as u128) {
                best_num = b;
                best_den = size as u64;
            }
        }
    }
    Rational::new(best_num, best_den)
}

/// Certified lower bound for a connected graph: `max(λ₂/2, 1/⌊n/2⌋)`.
fn spectral_lower_bound(g: &Graph) -> Rational {
    let n = g.num_vertices();
    let trivial = Rational::new(1, (n / 2) as u64);
    let deg = g.degrees();
    let mut lap = vec![0.0f64; n * n];
    for &(a, b) in g.edges() {
        lap[a * n + b] -= 1.0;
        lap[b * n + a] -= 1.0;
    }
    for (v, &d) in deg.iter().enumerate() {
        lap[v * n + v] = d as f64;
    }
    // L + cJ has the same spectrum as L except that 0 moves to cn.
    let max_deg = deg.iter().copied().max().unwrap_or(0) as f64;
    let upper = 2.0 * max_deg;
    let c = (upper + 1.0) / n as f64;
    let (mut lo, mut hi) = (0.0f64, upper);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if positive_definite_shifted(&lap, n, c, mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Back off from the floating-point boundary before rationalising.
    let lambda2 = lo * (1.0 - 1e-9) - 1e-12;
    let denom = 1u64 << 20;
    let num = if lambda2 > 0.0 { (lambda2 / 2.0 * denom as f64) as u64 } else { 0 };
    let spectral = Rational::new(num, denom);
    if spectral > trivial {
        spectral
    } else {
        trivial
    }
}

/// Whether `L + cJ − tI` is positive definite: every LDLᵀ pivot is positive.
fn positive_definite_shifted(lap: &[f64], n: usize, c: f64, t: f64) -> bool {
    let mut a: Vec<f64> = lap.iter().map(|&x| x + c).collect();
    for i in 0..n {
        a[i * n + i] -= t;
    }
    for k in 0..n {
        let d = a[k * n + k];
        if d.is_nan() || d <= 0.0 {
            return false;
        }
        for i in (k + 1)..n {
            let f = a[i * n + k] / d;
            if f == 0.0 {
                continue;
            }
            for j in (k + 1)..n {
                a[i * n + j] -= f * a[k * n + j];
            }
        }
    }
    true
}

/// A simple cycle: `edges[k]` joins `vertices[k]` and `vertices[(k + 1) % len]`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Cycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Edge indices in ascending order.
    pub fn edge_set(&self) -> Vec<usize> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }
}

/// Fundamental cycles of a breadth-first spanning forest, one per non-tree edge in edge order.
pub fn cycle_basis(g: &Graph) -> Vec<Cycle> {
    let n = g.num_vertices();
    let adj = g.adjacency();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree_edge = vec![false; g.num_edges()];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &(u, e) in &adj[v] {
                if depth[u] == usize::MAX {
                    depth[u] = depth[v] + 1;
                    parent[u] = Some((v, e));
                    tree_edge[e] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    let mut cycles = Vec::new();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        let (mut x, mut y) = (a, b);
        let (mut up_v, mut up_e) = (vec![a], Vec::new());
        let (mut down_v, mut down_e) = (vec![b], Vec::new());
        while x != y {
            if depth[x] >= depth[y] {
                let (p, pe) = parent[x].expect("non-root has a parent");
                up_e.push(pe);
                up_v.push(p);
                x = p;
            } else {
                let (p, pe) = parent[y].expect("non-root has a parent");
                down_e.push(pe);
                down_v.push(p);
                y = p;
            }
        }
        // up_v ends at the meeting vertex, as does down_v; drop the duplicate.
        down_v.pop();
        let mut vertices = up_v;
        vertices.extend(down_v.into_iter().rev());
        let mut edges = up_e;
        edges.extend(down_e.into_iter().rev());
        edges.push(e);
        cycles.push(Cycle { vertices, edges });
    }
    cycles
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::{rank, SparseBitMatrix};
    use proptest::prelude::*;

    fn brute_cheeger(g: &Graph) -> Option<Rational> {
        let mut best: Option<Rational> = None;
        for comp in g.components() {
            if comp.len() < 2 {
                continue;
            }
            let m = comp.len();
            for mask in 1u32..(1 << m) {
                let size = mask.count_ones() as usize;
                if size > m / 2 {
                    continue;
                }
                let inside = |v: usize| comp.iter().position(|&c| c == v).is_some_and(|i| mask >> i & 1 == 1);
                let boundary =
                    g.edges().iter().filter(|&&(a, b)| comp.contains(&a) && inside(a) != inside(b)).count();
                let r = Rational::new(boundary as u64, size as u64);
                if best.is_none_or(|b| r < b) {
                    best = Some(r);
                }
            }
        }
        best
    }

    fn check_cycle(g: &Graph, c: &Cycle) {
        assert_eq!(c.vertices.len(), c.edges.len());
        let len = c.len();
        let mut seen = c.vertices.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), len, "cycle repeats a vertex");
        for k in 0..len {
            let (a, b) = g.edge(c.edges[k]);
            let (x, y) = (c.vertices[k], c.vertices[(k + 1) % len]);
            assert!((a, b) == (x, y) || (a, b) == (y, x));
        }
    }

    #[test]
    fn cheeger_examples() {
        assert_eq!(cheeger(&Graph::complete(4)).unwrap().value, Some(Rational::new(2, 1)));
        assert_eq!(cheeger(&Graph::cycle(6)).unwrap().value, Some(Rational::new(2, 3)));
        assert_eq!(cheeger(&Graph::path(2)).unwrap().value, Some(Rational::new(1, 1)));
        assert_eq!(cheeger(&Graph::empty(0)), Err(GraphError::Empty));
        assert_eq!(cheeger(&Graph::empty(3)).unwrap().value, None);
    }

    #[test]
    fn cheeger_of_disconnected_is_component_min() {
        let mut g = Graph::complete(4);
        let shifted = Graph::cycle(6);
        g.vertices += 6;
        for &(a, b) in shifted.edges() {
            g.add_edge(a + 4, b + 4).unwrap();
        }
        assert_eq!(cheeger(&g).unwrap().value, Some(Rational::new(2, 3)));
    }

    #[test]
    fn spectral_fallback_is_a_lower_bound() {
        for g in [Graph::cycle(10), Graph::complete(8), Graph::path(9)] {
            let exact = cheeger(&g).unwrap();
            let bound = cheeger_with_threshold(&g, 2).unwrap();
            assert!(exact.exact && !bound.exact);
            assert!(bound.value.unwrap() <= exact.value.unwrap());
            assert!(bound.value.unwrap() > Rational::new(0, 1));
        }
    }

    #[test]
    fn cycle_basis_examples() {
        assert!(cycle_basis(&Graph::path(6)).is_empty());
        let c5 = cycle_basis(&Graph::cycle(5));
        assert_eq!(c5.len(), 1);
        assert_eq!(c5[0].len(), 5);
        let k4 = Graph::complete(4);
        let basis = cycle_basis(&k4);
        assert_eq!(basis.len(), 3);
        let m = SparseBitMatrix::new(6, basis.iter().map(Cycle::edge_set).collect()).unwrap();
        assert_eq!(rank(&m), 3);
        for c in &basis {
            check_cycle(&k4, c);
        }
    }

    #[test]
    fn parallel_edges_form_two_cycles() {
        let g = Graph::new(2, vec![(0, 1), (1, 0), (0, 1)]).unwrap();
        let basis = cycle_basis(&g);
        assert_eq!(basis.len(), 2);
        for c in &basis {
            assert_eq!(c.len(), 2);
            check_cycle(&g, c);
        }
    }

    fn arb_graph(max_v: usize, max_e: usize) -> impl Strategy<Value = Graph> {
        (2..=max_v).prop_flat_map(move |n| {
            proptest::collection::vec((0..n, 0..n), 0..=max_e).prop_map(move |pairs| {
                let edges = pairs.into_iter().filter(|(a, b)| a != b).collect();
                Graph::new(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn cheeger_matches_brute_force(g in arb_graph(10, 20)) {
            prop_assert_eq!(cheeger(&g).unwrap().value, brute_cheeger(&g));
        }

        #[test]
        fn cycle_basis_is_a_basis(g in arb_graph(12, 24)) {
            let basis = cycle_basis(&g);
            let expected = g.num_edges() + g.num_components() - g.num_vertices();
            prop_assert_eq!(basis.len(), expected);
            for c in &basis {
                check_cycle(&g, c);
            }
            let m = SparseBitMatrix::new(g.num_edges(), basis.iter().map(Cycle::edge_set).collect()).unwrap();
            prop_assert_eq!(rank(&m), expected);
        }
    }
}
