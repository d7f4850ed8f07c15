//! The dynamic-graph program representation.
//!
//! A [`DynamicGraph`] is an ordered list of [`TimedGraph`] steps over a fixed
//! vertex set. Each step evolves the walker under `A/‖A‖` for an exact
//! duration expressed as a [`RationalAngle`].

mod io;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::numerics::{self, ComplexMatrix, EigenDecomposition, C64};
use crate::tolerance;

pub use crate::angle::{AngleError, RationalAngle};
pub use io::{parse_dynamic_graph, serialize_dynamic_graph, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("vertex {vertex} out of range for {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },
    #[error("edge ({0}, {0}) joins a vertex to itself; use a loop")]
    SelfEdge(usize),
    #[error("vertex count mismatch: expected {expected}, found {found}")]
    VertexCountMismatch { expected: usize, found: usize },
}

/// Simple undirected graph with optional self-loops.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n_vertices: usize,
    edges: BTreeSet<(usize, usize)>,
    loops: BTreeSet<usize>,
}

impl Graph {
    /// Builds a graph, normalising each edge to `(min, max)` and dropping duplicates.
    pub fn new(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        loops: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GraphError> {
        if n_vertices == 0 {
            return Err(GraphError::NoVertices);
        }
        let check = |v: usize| {
            if v < n_vertices {
                Ok(v)
            } else {
                Err(GraphError::VertexOutOfRange { vertex: v, n_vertices })
            }
        };
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            let (a, b) = (check(a)?, check(b)?);
            if a == b {
                return Err(GraphError::SelfEdge(a));
            }
            edge_set.insert((a.min(b), a.max(b)));
        }
        let loops = loops.into_iter().map(check).collect::<Result<_, _>>()?;
        Ok(Self { n_vertices, edges: edge_set, loops })
    }

    /// Edgeless, loopless graph.
    pub fn empty(n_vertices: usize) -> Self {
        assert!(n_vertices > 0, "a graph needs at least one vertex");
        Self { n_vertices, edges: BTreeSet::new(), loops: BTreeSet::new() }
    }

    /// Loops on the given vertices and no edges.
    pub fn loops_only(n_vertices: usize, loops: impl IntoIterator<Item = usize>) -> Result<Self, GraphError> {
        Self::new(n_vertices, [], loops)
    }

    /// Loops on every vertex.
    pub fn all_loops(n_vertices: usize) -> Self {
        Self::loops_only(n_vertices, 0..n_vertices).expect("indices in range")
    }

    /// Matching joining `v` and `v ^ mask` for every `v` where both endpoints pass `keep`.
    pub fn xor_matching(n_vertices: usize, mask: usize, keep: impl Fn(usize) -> bool) -> Self {
        assert!(mask != 0 && mask < n_vertices.next_power_of_two());
        let edges = (0..n_vertices)
            .filter(|&v| v < v ^ mask && (v ^ mask) < n_vertices && keep(v) && keep(v ^ mask))
            .map(|v| (v, v ^ mask));
        Self::new(n_vertices, edges, []).expect("indices in range")
    }

    /// Joins every pair of vertices that differ in exactly one bit of `bits`.
    pub fn hypercube(n_vertices: usize, bits: usize) -> Self {
        let edges = (0..usize::BITS).map(|b| 1usize << b).filter(|b| bits & b != 0).flat_map(|b| {
            (0..n_vertices).filter(move |&v| v & b == 0 && (v | b) < n_vertices).map(move |v| (v, v | b))
        });
        Self::new(n_vertices, edges, []).expect("indices in range")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn loops(&self) -> &BTreeSet<usize> {
        &self.loops
    }

    /// No edges and no loops.
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.loops.is_empty()
    }

    pub fn is_loops_only(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.loops.contains(&v)
    }

    /// True when no edge touches `v` (loops are allowed).
    pub fn is_edge_free(&self, v: usize) -> bool {
        !self.edges.iter().any(|&(a, b)| a == v || b == v)
    }

    /// Vertices incident to an edge or carrying a loop.
    pub fn support(&self) -> BTreeSet<usize> {
        self.edges.iter().flat_map(|&(a, b)| [a, b]).chain(self.loops.iter().copied()).collect()
    }

    pub fn supports_disjoint(&self, other: &Self) -> bool {
        self.support().is_disjoint(&other.support())
    }

    /// Edge and loop union of two graphs on the same vertex set.
    pub fn union(&self, other: &Self) -> Result<Self, GraphError> {
        same_size(self.n_vertices, other.n_vertices)?;
        Ok(Self {
            n_vertices: self.n_vertices,
            edges: self.edges.union(&other.edges).copied().collect(),
            loops: self.loops.union(&other.loops).copied().collect(),
        })
    }

    /// Copy with the loop set replaced.
    pub fn with_loops(&self, loops: impl IntoIterator<Item = usize>) -> Result<Self, GraphError> {
        Self::new(self.n_vertices, self.edges.iter().copied(), loops)
    }

    /// Row-major real adjacency matrix; a loop sets the diagonal entry to 1.
    pub fn adjacency_real(&self) -> Vec<f64> {
        let n = self.n_vertices;
        let mut a = vec![0.0; n * n];
        for &(i, j) in &self.edges {
            a[i * n + j] = 1.0;
            a[j * n + i] = 1.0;
        }
        for &v in &self.loops {
            a[v * n + v] = 1.0;
        }
        a
    }

    pub fn adjacency_matrix(&self) -> ComplexMatrix {
        let n = self.n_vertices;
        let a = self.adjacency_real();
        ComplexMatrix::from_fn(n, |r, c| C64::new(a[r * n + c], 0.0))
    }

    pub fn eigen(&self) -> EigenDecomposition {
        numerics::symmetric_eigh(&self.adjacency_real(), self.n_vertices).expect("adjacency matrices are symmetric")
    }

    pub fn spectral_norm(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        if self.is_loops_only() {
            return 1.0;
        }
        self.eigen().spectral_norm()
    }

    /// Connected components under the edge relation, each sorted, in order of smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n_vertices;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn period(&self) -> Period {
        if self.is_empty() {
            return Period::Finite(RationalAngle::ZERO);
        }
        if self.is_loops_only() {
            return Period::Finite(RationalAngle::TWO_PI);
        }
        period_from_eigen(&self.eigen())
    }
}

/// Period of `e^{-iAt/‖A‖}` in `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Period {
    /// Least `T` with `U(T) = I`; zero for the empty graph, where every duration is equivalent.
    Finite(RationalAngle),
    Infinite,
}

/// Period from a spectrum: lcm of `2π‖A‖/|λ|` over nonzero eigenvalues.
pub fn period_from_eigen(eig: &EigenDecomposition) -> Period {
    let norm = eig.spectral_norm();
    if norm < tolerance::ZERO_NORM {
        return Period::Finite(RationalAngle::ZERO);
    }
    let mut acc: Option<RationalAngle> = None;
    for &lambda in &eig.values {
        let r = lambda.abs() / norm;
        if r < tolerance::RATIONAL_RESIDUAL {
            continue;
        }
        let Some((p, q)) = small_rational(r) else {
            return Period::Infinite;
        };
        // 2π / (p/q) = (2q/p)·π
        let term = RationalAngle::try_new(2 * q, p).expect("positive");
        acc = Some(acc.map_or(term, |a| a.lcm(term)));
    }
    Period::Finite(acc.unwrap_or(RationalAngle::ZERO))
}

fn small_rational(r: f64) -> Option<(i64, i64)> {
    (1..=tolerance::RATIONAL_MAX_DEN).find_map(|q| {
        let p = (r * q as f64).round();
        (p >= 1.0 && (r - p / q as f64).abs() < tolerance::RATIONAL_RESIDUAL).then_some((p as i64, q))
    })
}

/// A graph paired with its evolution time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TimedGraph {
    pub graph: Graph,
    pub duration: RationalAngle,
}

impl TimedGraph {
    pub fn new(graph: Graph, duration: RationalAngle) -> Self {
        Self { graph, duration }
    }

    /// Duration reduced modulo the graph's period when that period is finite.
    pub fn reduced(&self) -> Self {
        self.reduced_with(self.graph.period())
    }

    pub(crate) fn reduced_with(&self, period: Period) -> Self {
        let duration = match period {
            Period::Finite(t) => self.duration.rem(t),
            Period::Infinite => self.duration,
        };
        Self { graph: self.graph.clone(), duration }
    }
}

/// Ordered sequence of timed graphs on a common vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DynamicGraph {
    n_vertices: usize,
    sequence: Vec<TimedGraph>,
}

impl DynamicGraph {
    /// The identity program on `n_vertices` vertices.
    pub fn new(n_vertices: usize) -> Self {
        assert!(n_vertices > 0, "a dynamic graph needs at least one vertex");
        Self { n_vertices, sequence: Vec::new() }
    }

    pub fn from_steps(n_vertices: usize, steps: impl IntoIterator<Item = TimedGraph>) -> Result<Self, GraphError> {
        if n_vertices == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut dg = Self::new(n_vertices);
        for step in steps {
            dg.push(step)?;
        }
        Ok(dg)
    }

    pub fn push(&mut self, step: TimedGraph) -> Result<(), GraphError> {
        same_size(self.n_vertices, step.graph.n_vertices())?;
        self.sequence.push(step);
        Ok(())
    }

    /// Appends every step of `other`.
    pub fn extend(&mut self, other: &Self) -> Result<(), GraphError> {
        same_size(self.n_vertices, other.n_vertices)?;
        self.sequence.extend(other.sequence.iter().cloned());
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn steps(&self) -> &[TimedGraph] {
        &self.sequence
    }

    pub fn into_steps(self) -> Vec<TimedGraph> {
        self.sequence
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn total_time(&self) -> RationalAngle {
        self.sequence.iter().map(|s| s.duration).sum()
    }

    /// Replaces `range` with `replacement`.
    pub fn splice(&self, range: std::ops::Range<usize>, replacement: impl IntoIterator<Item = TimedGraph>) -> Self {
        let mut sequence = self.sequence.clone();
        sequence.splice(range, replacement);
        Self { n_vertices: self.n_vertices, sequence }
    }
}

fn same_size(expected: usize, found: usize) -> Result<(), GraphError> {
    if expected == found {
        Ok(())
    } else {
        Err(GraphError::VertexCountMismatch { expected, found })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Graph {
        Graph::new(2, [(0, 1)], []).unwrap()
    }

    #[test]
    fn adjacency_examples() {
        assert_eq!(p2().adjacency_real(), vec![0.0, 1.0, 1.0, 0.0]);
        let looped = Graph::loops_only(2, [0]).unwrap();
        assert_eq!(looped.adjacency_real(), vec![1.0, 0.0, 0.0, 0.0]);
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)], []).unwrap();
        assert_eq!(&c4.adjacency_real()[..4], &[0.0, 1.0, 0.0, 1.0]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Graph::new(0, [], []), Err(GraphError::NoVertices));
        assert_eq!(Graph::new(2, [(0, 2)], []), Err(GraphError::VertexOutOfRange { vertex: 2, n_vertices: 2 }));
        assert_eq!(Graph::new(2, [(1, 1)], []), Err(GraphError::SelfEdge(1)));
    }

    #[test]
    fn spectral_norms() {
        let c4 = Graph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0)], []).unwrap();
        assert!((c4.spectral_norm() - 2.0).abs() < 1e-11);
        assert!((p2().spectral_norm() - 1.0).abs() < 1e-11);
        assert_eq!(Graph::empty(3).spectral_norm(), 0.0);
    }

    #[test]
    fn periods() {
        assert_eq!(Graph::loops_only(4, [1, 2]).unwrap().period(), Period::Finite(RationalAngle::TWO_PI));
        assert_eq!(p2().period(), Period::Finite(RationalAngle::TWO_PI));
        let p2_p3 = Graph::new(5, [(0, 1), (2, 3), (3, 4)], []).unwrap();
        assert_eq!(p2_p3.period(), Period::Infinite);
        assert_eq!(Graph::empty(2).period(), Period::Finite(RationalAngle::ZERO));
        let c4 = Graph::hypercube(4, 0b11);
        assert_eq!(c4.period(), Period::Finite(RationalAngle::TWO_PI));
    }

    #[test]
    fn reduce_time_examples() {
        let loops = Graph::loops_only(2, [0]).unwrap();
        let tg = TimedGraph::new(loops.clone(), RationalAngle::new(3, 1));
        assert_eq!(tg.reduced().duration, RationalAngle::PI);
        let tg = TimedGraph::new(loops, RationalAngle::TWO_PI);
        assert!(tg.reduced().duration.is_zero());
        let tg = TimedGraph::new(p2(), RationalAngle::new(1, 2));
        assert_eq!(tg.reduced(), tg);
    }

    #[test]
    fn support_examples() {
        let g = Graph::new(4, [(0, 1)], []).unwrap();
        assert_eq!(g.support(), BTreeSet::from([0, 1]));
        assert_eq!(Graph::loops_only(4, [3]).unwrap().support(), BTreeSet::from([3]));
        assert!(Graph::empty(4).support().is_empty());
        let l0 = Graph::loops_only(2, [0]).unwrap();
        let l1 = Graph::loops_only(2, [1]).unwrap();
        assert!(l0.supports_disjoint(&l1));
        assert!(!p2().supports_disjoint(&l0));
        assert!(Graph::empty(2).supports_disjoint(&p2()));
    }

    #[test]
    fn hypercube_on_two_of_three_bits_is_two_four_cycles() {
        let g = Graph::hypercube(8, 0b101);
        assert_eq!(g.edges().len(), 8);
        let comps = g.components();
        assert_eq!(comps, vec![vec![0, 1, 4, 5], vec![2, 3, 6, 7]]);
    }

    #[test]
    fn dynamic_graph_rejects_mismatched_step() {
        let mut dg = DynamicGraph::new(4);
        let err = dg.push(TimedGraph::new(p2(), RationalAngle::PI)).unwrap_err();
        assert_eq!(err, GraphError::VertexCountMismatch { expected: 4, found: 2 });
    }
}
