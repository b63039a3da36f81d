//! Immutable simple graphs on vertices `0..n`.
//!
//! Every operation that "changes" a graph returns a new value. Edge lists are
//! kept in canonical `(min, max)` order and sorted, so two graphs compare equal
//! exactly when they have the same labeled edge set.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex set is not strictly increasing")]
    UnsortedVertexSet,
    #[error("cycle needs at least 3 vertices, got {0}")]
    CycleTooShort(usize),
    #[error("matching complement needs an even vertex count, got {0}")]
    OddMatchingComplement(usize),
    #[error("vertex sets overlap at vertex {0}")]
    OverlappingSets(usize),
    #[error("degree sum {degree_sum} does not equal twice the edge count {edges}")]
    HandshakeMismatch { degree_sum: usize, edges: usize },
    #[error("adjacency lists are inconsistent at vertex {0}")]
    InconsistentAdjacency(usize),
}

/// Sorted set of distinct vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    /// Builds a set from arbitrary indices, sorting and checking bounds.
    /// Repeated indices are rejected.
    pub fn new(mut vertices: Vec<usize>, n: usize) -> Result<Self, GraphError> {
        vertices.sort_unstable();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::UnsortedVertexSet);
            }
        }
        if let Some(&v) = vertices.last() {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
        }
        Ok(Self(vertices))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// All vertices `0..n`.
    pub fn full(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub(crate) fn from_sorted(vertices: Vec<usize>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Self(vertices)
    }

    pub fn from_mask(mask: u64) -> Self {
        Self((0..64).filter(|&v| mask >> v & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    fn check_bounds(&self, n: usize) -> Result<(), GraphError> {
        match self.0.last() {
            Some(&v) if v >= n => Err(GraphError::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

impl From<VertexSet> for Vec<usize> {
    fn from(s: VertexSet) -> Self {
        s.0
    }
}

/// Old-to-new vertex labels produced by deletions and induced subgraphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling {
    old_to_new: Vec<Option<usize>>,
    new_to_old: Vec<usize>,
}

impl Relabeling {
    pub fn new_index(&self, old: usize) -> Option<usize> {
        self.old_to_new.get(old).copied().flatten()
    }

    pub fn old_index(&self, new: usize) -> usize {
        self.new_to_old[new]
    }

    /// Maps a set of new labels back to the original graph.
    pub fn lift(&self, s: &VertexSet) -> VertexSet {
        // new_to_old is increasing, so the image stays sorted
        VertexSet::from_sorted(s.iter().map(|v| self.new_to_old[v]).collect())
    }
}

/// Building blocks of the extremal constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardKind {
    Complete,
    Cycle,
    Empty,
    /// `K_k` minus a perfect matching, the complement of `(k/2) K_2`.
    MatchingComplement,
}

pub fn standard_graph(kind: StandardKind, k: usize) -> Result<Graph, GraphError> {
    match kind {
        StandardKind::Complete => Ok(Graph::complete(k)),
        StandardKind::Cycle => Graph::cycle(k),
        StandardKind::Empty => Ok(Graph::empty(k)),
        StandardKind::MatchingComplement => Graph::matching_complement(k),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting loops, duplicates and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_canonical(n, canon))
    }

    /// `edges` must already be canonical, sorted and duplicate free.
    fn from_canonical(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self { n, edges, adjacency }
    }

    fn from_unsorted_canonical(n: usize, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        Self::from_canonical(n, edges)
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_canonical(n, edges)
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        if n < 3 {
            return Err(GraphError::CycleTooShort(n));
        }
        let edges = (0..n).map(|i| (i, (i + 1) % n)).map(|(u, v)| (u.min(v), u.max(v)));
        Ok(Self::from_unsorted_canonical(n, edges.collect()))
    }

    pub fn path(n: usize) -> Self {
        Self::from_canonical(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    /// `K_n` minus the perfect matching `{2i, 2i+1}`.
    pub fn matching_complement(n: usize) -> Result<Self, GraphError> {
        if n % 2 == 1 {
            return Err(GraphError::OddMatchingComplement(n));
        }
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !(u % 2 == 0 && v == u + 1))
            .collect();
        Ok(Self::from_canonical(n, edges))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Self::join(&Self::empty(a), &Self::empty(b))
    }

    pub fn star(leaves: usize) -> Self {
        Self::complete_bipartite(1, leaves)
    }

    /// The Petersen graph as the Kneser graph on 2-subsets of a 5-set.
    pub fn petersen() -> Self {
        let pairs: Vec<(usize, usize)> =
            (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        let mut edges = Vec::new();
        for (i, p) in pairs.iter().enumerate() {
            for (j, q) in pairs.iter().enumerate().skip(i + 1) {
                if p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1 {
                    edges.push((i, j));
                }
            }
        }
        Self::from_canonical(10, edges)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Common degree if every vertex has the same degree. `None` for the
    /// empty vertex set.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = self.adjacency.first()?.len();
        self.adjacency.iter().all(|a| a.len() == first).then_some(first)
    }

    /// Checks the structural invariants: canonical sorted edges without
    /// loops or repeats, symmetric adjacency, and the handshake identity.
    pub fn validate(&self) -> Result<(), GraphError> {
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
            if u >= v {
                return Err(if u == v { GraphError::SelfLoop(u) } else { GraphError::InconsistentAdjacency(u) });
            }
            if i > 0 && self.edges[i - 1] >= (u, v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        if self.adjacency.len() != self.n {
            return Err(GraphError::InconsistentAdjacency(self.adjacency.len()));
        }
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list {
                let key = (u.min(v), u.max(v));
                if self.edges.binary_search(&key).is_err() || !self.adjacency[v].contains(&u) {
                    return Err(GraphError::InconsistentAdjacency(u));
                }
            }
        }
        let degree_sum: usize = self.adjacency.iter().map(Vec::len).sum();
        if degree_sum != 2 * self.edges.len() {
            return Err(GraphError::HandshakeMismatch { degree_sum, edges: self.edges.len() });
        }
        Ok(())
    }

    pub fn complement(&self) -> Self {
        let n = self.n;
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !self.has_edge(u, v))
            .collect();
        Self::from_canonical(n, edges)
    }

    /// Disjoint union plus every edge between the two parts. `self` keeps
    /// labels `0..n1`, `other` is shifted by `n1`.
    pub fn join(&self, other: &Self) -> Self {
        let n1 = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|&(u, v)| (u + n1, v + n1)));
        edges.extend((0..n1).flat_map(|u| (0..other.n).map(move |v| (u, v + n1))));
        Self::from_unsorted_canonical(n1 + other.n, edges)
    }

    pub fn disjoint_union(parts: &[Self]) -> Self {
        let mut offset = 0;
        let mut edges = Vec::new();
        for g in parts {
            edges.extend(g.edges.iter().map(|&(u, v)| (u + offset, v + offset)));
            offset += g.n;
        }
        // parts are visited in order, so shifted edges are already sorted
        Self::from_canonical(offset, edges)
    }

    /// Induced subgraph on `keep`, relabeled to `0..|keep|` in increasing order.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<(Self, Relabeling), GraphError> {
        keep.check_bounds(self.n)?;
        let mut old_to_new = vec![None; self.n];
        for (new, old) in keep.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(u, v)| Some((old_to_new[u]?, old_to_new[v]?)))
            .collect();
        let relabel = Relabeling { old_to_new, new_to_old: keep.as_slice().to_vec() };
        // relabeling is monotone, so canonical order is preserved
        Ok((Self::from_canonical(keep.len(), edges), relabel))
    }

    /// `G - S`: the subgraph induced by the vertices outside `s`.
    pub fn delete_vertices(&self, s: &VertexSet) -> Result<(Self, Relabeling), GraphError> {
        s.check_bounds(self.n)?;
        let keep = VertexSet::from_sorted((0..self.n).filter(|&v| !s.contains(v)).collect());
        self.induced_subgraph(&keep)
    }

    /// Connected components, ordered by their smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(VertexSet::from_sorted(comp));
        }
        out
    }

    pub fn odd_components(&self) -> Vec<VertexSet> {
        self.components().into_iter().filter(|c| c.len() % 2 == 1).collect()
    }

    /// `o(G)`, the number of components of odd order.
    pub fn odd_component_count(&self) -> usize {
        self.components().iter().filter(|c| c.len() % 2 == 1).count()
    }

    /// Number of edges with one endpoint in `a` and the other in `b`.
    pub fn edge_boundary(&self, a: &VertexSet, b: &VertexSet) -> Result<usize, GraphError> {
        a.check_bounds(self.n)?;
        b.check_bounds(self.n)?;
        if let Some(v) = a.iter().find(|&v| b.contains(v)) {
            return Err(GraphError::OverlappingSets(v));
        }
        Ok(a.iter().map(|u| self.adjacency[u].iter().filter(|&&w| b.contains(w)).count()).sum())
    }

    /// Neighborhoods as bitmasks; only valid for graphs with at most 64 vertices.
    pub(crate) fn neighbor_masks(&self) -> Vec<u64> {
        debug_assert!(self.n <= 64);
        self.adjacency.iter().map(|list| list.iter().fold(0u64, |m, &v| m | 1 << v)).collect()
    }
}
