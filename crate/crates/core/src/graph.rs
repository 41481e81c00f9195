//! Simple undirected graphs over dense vertex ids `0..n`.

use std::collections::BTreeSet;

use thiserror::Error;

pub type Vertex = usize;

/// An undirected edge, always stored with the smaller endpoint first.
pub type Edge = (Vertex, Vertex);

/// Orders the endpoints of an edge so that `u < v`.
#[inline]
pub fn edge(u: Vertex, v: Vertex) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: Vertex, v: Vertex, n: usize },
    #[error("vertex {vertex} outside 0..{n}")]
    UnknownVertex { vertex: Vertex, n: usize },
    #[error("vertex sets overlap at vertex {0}")]
    OverlappingSets(Vertex),
    #[error("({0}, {1}) is not an edge")]
    MissingEdge(Vertex, Vertex),
    #[error("({0}, {1}) is already an edge")]
    DuplicateEdge(Vertex, Vertex),
}

/// A simple undirected graph.
///
/// Adjacency lists are kept sorted, and the edge list is sorted
/// lexicographically with `u < v` for every pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Vec<Vertex>>,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate pairs (in either
    /// orientation) collapse into one edge; self-loops are rejected.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        for (u, v) in pairs {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            edges.push(edge(u, v));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_sorted_edges(n, edges))
    }

    fn from_sorted_edges(n: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph { n, adjacency, edges }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_sorted_edges(n, edges)
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are valid")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
    }

    /// `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|i| (0, i))).expect("star edges are valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex { vertex: v, n: self.n })
        }
    }

    /// Membership mask for a vertex set, validating every id.
    pub(crate) fn mask<'a>(&self, set: impl IntoIterator<Item = &'a Vertex>) -> Result<Vec<bool>, GraphError> {
        let mut mask = vec![false; self.n];
        for &v in set {
            self.check_vertex(v)?;
            mask[v] = true;
        }
        Ok(mask)
    }

    /// `|E(A, B)|` for disjoint vertex sets `A` and `B`.
    pub fn edge_cut_size(&self, a: &BTreeSet<Vertex>, b: &BTreeSet<Vertex>) -> Result<u64, GraphError> {
        let in_b = self.mask(b)?;
        self.mask(a)?;
        if let Some(&v) = a.iter().find(|&&v| in_b[v]) {
            return Err(GraphError::OverlappingSets(v));
        }
        Ok(a.iter().map(|&u| self.adjacency[u].iter().filter(|&&w| in_b[w]).count() as u64).sum())
    }

    /// Size of the cut between `set` and its complement, computed as
    /// `sum of degrees - 2 |E(G[set])|`.
    pub fn degree_sum_cut(&self, set: &BTreeSet<Vertex>) -> Result<u64, GraphError> {
        let inside = self.mask(set)?;
        let degree_sum: u64 = set.iter().map(|&v| self.degree(v) as u64).sum();
        // every internal edge is seen from both endpoints
        let internal_twice: u64 =
            set.iter().map(|&v| self.adjacency[v].iter().filter(|&&w| inside[w]).count() as u64).sum();
        Ok(degree_sum - internal_twice)
    }

    /// Minimum degree of the subgraph induced by `set` (0 for the empty set).
    pub fn induced_min_degree(&self, set: &BTreeSet<Vertex>) -> Result<usize, GraphError> {
        let inside = self.mask(set)?;
        Ok(set.iter().map(|&v| self.adjacency[v].iter().filter(|&&w| inside[w]).count()).min().unwrap_or(0))
    }

    pub fn is_clique(&self, set: &[Vertex]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Copy of the graph with one edge deleted.
    pub fn without_edge(&self, u: Vertex, v: Vertex) -> Result<Self, GraphError> {
        let e = edge(u, v);
        let pos = self.edges.binary_search(&e).map_err(|_| GraphError::MissingEdge(e.0, e.1))?;
        let mut edges = self.edges.clone();
        edges.remove(pos);
        Ok(Self::from_sorted_edges(self.n, edges))
    }

    /// Copy of the graph with one extra edge.
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Self, GraphError> {
        if u >= self.n || v >= self.n {
            return Err(GraphError::VertexOutOfRange { u, v, n: self.n });
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let e = edge(u, v);
        match self.edges.binary_search(&e) {
            Ok(_) => Err(GraphError::DuplicateEdge(e.0, e.1)),
            Err(pos) => {
                let mut edges = self.edges.clone();
                edges.insert(pos, e);
                Ok(Self::from_sorted_edges(self.n, edges))
            }
        }
    }

    /// Relabels vertices: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length must match vertex count");
        Self::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
            .expect("relabelling preserves simplicity")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[Vertex]) -> BTreeSet<Vertex> {
        vs.iter().copied().collect()
    }

    #[test]
    fn triangle_degrees() {
        let g = Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!((0..3).map(|v| g.degree(v)).collect::<Vec<_>>(), vec![2, 2, 2]);
    }

    #[test]
    fn duplicates_collapse() {
        let g = Graph::new(4, [(0, 1), (1, 0), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(g, Graph::path(4));
    }

    #[test]
    fn rejects_bad_pairs() {
        assert_eq!(Graph::new(2, [(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert!(matches!(Graph::new(2, [(0, 2)]), Err(GraphError::VertexOutOfRange { .. })));
    }

    #[test]
    fn adjacency_matches_edge_list() {
        let g = Graph::new(6, [(5, 0), (2, 4), (1, 3), (3, 5), (0, 2)]).unwrap();
        let mut from_adj = Vec::new();
        for u in g.vertices() {
            for &w in g.neighbors(u) {
                assert!(g.neighbors(w).contains(&u));
                if u < w {
                    from_adj.push((u, w));
                }
            }
        }
        from_adj.sort();
        assert_eq!(from_adj, g.edges());
        assert!(g.edges().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cut_sizes() {
        assert_eq!(Graph::complete(4).edge_cut_size(&set(&[0, 1]), &set(&[2, 3])), Ok(4));
        assert_eq!(Graph::path(4).edge_cut_size(&set(&[0, 1]), &set(&[2, 3])), Ok(1));
        // K6, a 3-set against its complement: all 3 x 3 cross pairs.
        let k6 = Graph::complete(6);
        let a = set(&[0, 2, 5]);
        let b = set(&[1, 3, 4]);
        let brute = a.iter().flat_map(|&u| b.iter().map(move |&v| (u, v))).filter(|&(u, v)| k6.has_edge(u, v)).count();
        assert_eq!(brute, 9);
        assert_eq!(k6.edge_cut_size(&a, &b), Ok(9));
        assert_eq!(k6.degree_sum_cut(&a), Ok(9));
    }

    #[test]
    fn overlapping_cut_sets_rejected() {
        let g = Graph::complete(4);
        assert_eq!(g.edge_cut_size(&set(&[0, 1]), &set(&[1, 2])), Err(GraphError::OverlappingSets(1)));
    }

    #[test]
    fn edge_mutation() {
        let g = Graph::cycle(5);
        let h = g.without_edge(4, 0).unwrap();
        assert_eq!(h, Graph::path(5));
        assert_eq!(h.with_edge(0, 4).unwrap(), g);
        assert_eq!(h.without_edge(0, 4), Err(GraphError::MissingEdge(0, 4)));
        assert_eq!(g.with_edge(1, 0), Err(GraphError::DuplicateEdge(0, 1)));
    }

    #[test]
    fn connectivity() {
        assert!(Graph::cycle(6).is_connected());
        assert!(!Graph::new(4, [(0, 1), (2, 3)]).unwrap().is_connected());
    }
}
