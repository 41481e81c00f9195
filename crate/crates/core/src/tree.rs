//! Spanning trees of a host graph, fundamental cuts and tree shapes.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{edge, Edge, Graph, GraphError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("({0}, {1}) is not an edge of the host graph")]
    NotHostEdge(Vertex, Vertex),
    #[error("({0}, {1}) is not a tree edge")]
    NotTreeEdge(Vertex, Vertex),
    #[error("expected {expected} tree edges, got {actual}")]
    WrongEdgeCount { expected: usize, actual: usize },
    #[error("tree edges contain a cycle through ({0}, {1})")]
    Cycle(Vertex, Vertex),
    #[error("tree edges do not connect all vertices")]
    Disconnected,
    #[error("the host graph has no vertices")]
    EmptyHost,
    #[error("vertex set is empty")]
    EmptySet,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A spanning tree of a borrowed host graph.
#[derive(Debug, Clone)]
pub struct SpanningTree<'g> {
    host: &'g Graph,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<Vertex>>,
}

impl PartialEq for SpanningTree<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges && self.host == other.host
    }
}

impl Eq for SpanningTree<'_> {}

impl<'g> SpanningTree<'g> {
    /// Validates `pairs` as a spanning tree of `host`.
    pub fn new(host: &'g Graph, pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self, TreeError> {
        let n = host.vertex_count();
        if n == 0 {
            return Err(TreeError::EmptyHost);
        }
        let mut edges: Vec<Edge> = pairs.into_iter().map(|(u, v)| edge(u, v)).collect();
        edges.sort_unstable();
        for &(u, v) in &edges {
            if !host.has_edge(u, v) {
                return Err(TreeError::NotHostEdge(u, v));
            }
        }
        if edges.len() != n - 1 {
            return Err(TreeError::WrongEdgeCount { expected: n - 1, actual: edges.len() });
        }
        let mut dsu = UnionFind::new(n);
        for &(u, v) in &edges {
            if !dsu.union(u, v) {
                return Err(TreeError::Cycle(u, v));
            }
        }
        Ok(Self::from_sorted_unchecked(host, edges))
    }

    /// `edges` must be sorted and form a spanning tree of `host`.
    pub(crate) fn from_sorted_unchecked(host: &'g Graph, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); host.vertex_count()];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        SpanningTree { host, edges, adjacency }
    }

    pub fn host(&self) -> &'g Graph {
        self.host
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    pub fn contains_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.binary_search(&edge(u, v)).is_ok()
    }

    fn check_tree_edge(&self, e: Edge) -> Result<Edge, TreeError> {
        let e = edge(e.0, e.1);
        if self.contains_edge(e.0, e.1) {
            Ok(e)
        } else {
            Err(TreeError::NotTreeEdge(e.0, e.1))
        }
    }

    /// Vertex mask of the component of `T - e` that contains `e.0`.
    fn side_of(&self, e: Edge) -> Vec<bool> {
        let mut side = vec![false; self.adjacency.len()];
        let mut stack = vec![e.0];
        side[e.0] = true;
        while let Some(u) = stack.pop() {
            for &w in &self.adjacency[u] {
                if !side[w] && edge(u, w) != e {
                    side[w] = true;
                    stack.push(w);
                }
            }
        }
        side
    }

    /// The congestion of tree edge `e`: the number of host edges between the
    /// two components of `T - e`. Uses one traversal of `T - e`.
    pub fn edge_congestion(&self, e: Edge) -> Result<u64, TreeError> {
        let e = self.check_tree_edge(e)?;
        let side = self.side_of(e);
        Ok(self.host.edges().iter().filter(|&&(u, v)| side[u] != side[v]).count() as u64)
    }

    /// Per-edge congestion of the whole tree.
    ///
    /// Roots the tree at vertex 0; each host edge `{u, v}` adds one unit to
    /// every tree edge on the `u`-`v` tree path, accumulated as `+1` at both
    /// endpoints and `-2` at their lowest common ancestor, then summed up
    /// the subtrees.
    pub fn congestion(&self) -> CongestionReport {
        let n = self.adjacency.len();
        let rooted = RootedTree::new(self, 0);
        let mut load = vec![0i64; n];
        for &(u, v) in self.host.edges() {
            load[u] += 1;
            load[v] += 1;
            load[rooted.lca(u, v)] -= 2;
        }
        let mut per_edge = BTreeMap::new();
        for &v in rooted.order.iter().rev() {
            if let Some(p) = rooted.parent[v] {
                load[p] += load[v];
                per_edge.insert(edge(v, p), load[v] as u64);
            }
        }
        CongestionReport::from_per_edge(per_edge)
    }

    /// Same report as [`SpanningTree::congestion`], computed with one
    /// traversal of `T - e` per tree edge.
    pub fn congestion_by_cuts(&self) -> CongestionReport {
        let per_edge = self.edges.iter().map(|&e| (e, self.edge_congestion(e).expect("own edge"))).collect();
        CongestionReport::from_per_edge(per_edge)
    }

    /// The two sides of `S` separated by tree edge `e`.
    pub fn split_of_edge(&self, e: Edge, set: &BTreeSet<Vertex>) -> Result<Split, TreeError> {
        let e = self.check_tree_edge(e)?;
        self.host.mask(set)?;
        let side = self.side_of(e);
        let (a, b): (BTreeSet<_>, BTreeSet<_>) = set.iter().partition(|&&v| side[v]);
        Ok(Split::ordered(a, b))
    }

    /// Vertex set of the component of `T - e` that does not contain `keep`.
    pub fn component_away_from(&self, e: Edge, keep: Vertex) -> Result<BTreeSet<Vertex>, TreeError> {
        let e = self.check_tree_edge(e)?;
        let side = self.side_of(e);
        Ok((0..side.len()).filter(|&v| side[v] != side[keep]).collect())
    }

    /// The unique minimal subtree containing every vertex of `set`, obtained
    /// by repeatedly removing leaves outside `set`.
    pub fn minimal_subtree(&self, set: &BTreeSet<Vertex>) -> Result<Subtree, TreeError> {
        if set.is_empty() {
            return Err(TreeError::EmptySet);
        }
        let keep = self.host.mask(set)?;
        let n = self.adjacency.len();
        let mut alive = vec![true; n];
        let mut degree: Vec<usize> = self.adjacency.iter().map(Vec::len).collect();
        let mut queue: VecDeque<Vertex> = (0..n).filter(|&v| degree[v] <= 1 && !keep[v]).collect();
        while let Some(v) = queue.pop_front() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &w in &self.adjacency[v] {
                if alive[w] {
                    degree[w] -= 1;
                    if degree[w] <= 1 && !keep[w] {
                        queue.push_back(w);
                    }
                }
            }
        }
        let vertices = (0..n).filter(|&v| alive[v]).collect();
        let edges = self.edges.iter().copied().filter(|&(u, v)| alive[u] && alive[v]).collect();
        Ok(Subtree { vertices, edges })
    }

    /// The whole tree viewed as a [`Subtree`].
    pub fn as_subtree(&self) -> Subtree {
        Subtree { vertices: (0..self.adjacency.len()).collect(), edges: self.edges.clone() }
    }

    /// Parent pointers and BFS order with the tree rooted at `root`.
    pub fn rooted_at(&self, root: Vertex) -> RootedTree {
        RootedTree::new(self, root)
    }
}

/// A spanning tree with a chosen root.
#[derive(Debug, Clone)]
pub struct RootedTree {
    pub root: Vertex,
    pub parent: Vec<Option<Vertex>>,
    pub depth: Vec<usize>,
    /// Vertices in BFS order from the root.
    pub order: Vec<Vertex>,
}

impl RootedTree {
    fn new(tree: &SpanningTree<'_>, root: Vertex) -> Self {
        let n = tree.adjacency.len();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &tree.adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    depth[w] = depth[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        RootedTree { root, parent, depth, order }
    }

    pub fn lca(&self, mut u: Vertex, mut v: Vertex) -> Vertex {
        while self.depth[u] > self.depth[v] {
            u = self.parent[u].expect("non-root has a parent");
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent[v].expect("non-root has a parent");
        }
        while u != v {
            u = self.parent[u].expect("non-root has a parent");
            v = self.parent[v].expect("non-root has a parent");
        }
        u
    }

    /// Whether `ancestor` lies on the path from `v` to the root (inclusive).
    pub fn is_ancestor(&self, ancestor: Vertex, mut v: Vertex) -> bool {
        loop {
            if v == ancestor {
                return true;
            }
            match self.parent[v] {
                Some(p) => v = p,
                None => return false,
            }
        }
    }
}

/// Per-edge congestion of a spanning tree together with its maximum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongestionReport {
    pub per_edge: BTreeMap<Edge, u64>,
    pub max: u64,
    /// Smallest edge (lexicographically) attaining `max`; `None` only for
    /// the single-vertex tree.
    pub argmax_edge: Option<Edge>,
}

impl CongestionReport {
    fn from_per_edge(per_edge: BTreeMap<Edge, u64>) -> Self {
        let mut max = 0;
        let mut argmax_edge = None;
        for (&e, &c) in &per_edge {
            if argmax_edge.is_none() || c > max {
                max = c;
                argmax_edge = Some(e);
            }
        }
        CongestionReport { per_edge, max, argmax_edge }
    }

    /// All tree edges attaining the maximum, in canonical order.
    pub fn maximizers(&self) -> Vec<Edge> {
        self.per_edge.iter().filter(|&(_, &c)| c == self.max).map(|(&e, _)| e).collect()
    }
}

/// A subtree given by its vertex and edge sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subtree {
    pub vertices: BTreeSet<Vertex>,
    pub edges: Vec<Edge>,
}

impl Subtree {
    pub fn new(vertices: impl IntoIterator<Item = Vertex>, pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut edges: Vec<Edge> = pairs.into_iter().map(|(u, v)| edge(u, v)).collect();
        edges.sort_unstable();
        Subtree { vertices: vertices.into_iter().collect(), edges }
    }

    pub fn degrees(&self) -> BTreeMap<Vertex, usize> {
        let mut degree: BTreeMap<Vertex, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for &(u, v) in &self.edges {
            *degree.entry(u).or_default() += 1;
            *degree.entry(v).or_default() += 1;
        }
        degree
    }

    fn validate(&self) -> Result<(), TreeError> {
        if self.vertices.is_empty() {
            return Err(TreeError::EmptySet);
        }
        let index: BTreeMap<Vertex, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut dsu = UnionFind::new(self.vertices.len());
        for &(u, v) in &self.edges {
            let (Some(&iu), Some(&iv)) = (index.get(&u), index.get(&v)) else {
                return Err(TreeError::Disconnected);
            };
            if !dsu.union(iu, iv) {
                return Err(TreeError::Cycle(u, v));
            }
        }
        if self.edges.len() + 1 != self.vertices.len() {
            return Err(TreeError::Disconnected);
        }
        Ok(())
    }

    /// Classifies the subtree as a path, star, spider or other tree.
    ///
    /// A star needs a center adjacent to every other vertex and at least
    /// three leaves; smaller stars are reported as paths. Stars take
    /// precedence over spiders.
    pub fn shape(&self) -> Result<TreeShape, TreeError> {
        self.validate()?;
        let degree = self.degrees();
        let leaves = degree.iter().filter(|&(_, &d)| d <= 1).map(|(&v, _)| v).collect();
        let degree2_vertices = degree.iter().filter(|&(_, &d)| d == 2).map(|(&v, _)| v).collect();
        let branching: Vec<Vertex> = degree.iter().filter(|&(_, &d)| d >= 3).map(|(&v, _)| v).collect();
        let kind = match branching.as_slice() {
            [] => ShapeKind::Path,
            &[b] if degree[&b] + 1 == self.vertices.len() => ShapeKind::Star { center: b },
            &[b] => ShapeKind::Spider { branch: b },
            _ => ShapeKind::Other,
        };
        Ok(TreeShape { kind, leaves, degree2_vertices })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeKind {
    Path,
    Star { center: Vertex },
    Spider { branch: Vertex },
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeShape {
    pub kind: ShapeKind,
    pub leaves: BTreeSet<Vertex>,
    pub degree2_vertices: BTreeSet<Vertex>,
}

impl TreeShape {
    /// The star center or spider branch vertex.
    pub fn branch_vertex(&self) -> Option<Vertex> {
        match self.kind {
            ShapeKind::Star { center } => Some(center),
            ShapeKind::Spider { branch } => Some(branch),
            _ => None,
        }
    }
}

/// The two parts of a vertex set on either side of a tree edge, smaller
/// part first (ties go to the part holding the smallest vertex id).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub first: BTreeSet<Vertex>,
    pub second: BTreeSet<Vertex>,
}

impl Split {
    fn ordered(a: BTreeSet<Vertex>, b: BTreeSet<Vertex>) -> Self {
        let a_first = match a.len().cmp(&b.len()) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => a.first() <= b.first(),
        };
        if a_first {
            Split { first: a, second: b }
        } else {
            Split { first: b, second: a }
        }
    }

    /// Both sides hold at least two vertices of the set.
    pub fn is_nontrivial(&self) -> bool {
        self.first.len() >= 2 && self.second.len() >= 2
    }
}

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns false when `u` and `v` were already joined.
    pub(crate) fn union(&mut self, u: usize, v: usize) -> bool {
        let (mut a, mut b) = (self.find(u), self.find(v));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}
