//! Exact spanning tree congestion by exhaustive enumeration.
//!
//! Spanning trees are enumerated by include/exclude recursion over the
//! canonical (sorted) edge order. An edge whose endpoints are already joined
//! by chosen edges is skipped; an edge whose exclusion would disconnect the
//! remaining graph is forced. Every leaf of the recursion is therefore a
//! spanning tree and no branch dies empty.
//!
//! The optimizing searches additionally prune a partial forest as soon as a
//! chosen edge already separates more host edges than allowed: if removing
//! chosen edge `f` splits its forest component into `P` and `Q`, every
//! completion keeps `P` and `Q` on opposite sides of `f`, so `|E(P, Q)|`
//! is a lower bound on the final congestion of `f`.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};
use crate::tree::{ShapeKind, SpanningTree, TreeError, TreeShape, UnionFind};

/// Largest spanning-tree count the solvers accept unless told otherwise.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StcError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph needs at least two vertices")]
    TooSmall,
    #[error("infeasible at desk scale: {count} spanning trees exceed the budget of {budget}")]
    BudgetExceeded { count: BigUint, budget: u64 },
    #[error("target congestion must be at least 1")]
    ZeroTarget,
}

/// Number of spanning trees of `graph` by the matrix-tree theorem.
///
/// Takes the determinant of the reduced Laplacian with fraction-free
/// (Bareiss) elimination, so every intermediate value is an exact integer.
pub fn spanning_tree_count(graph: &Graph) -> BigUint {
    let n = graph.vertex_count();
    if n <= 1 {
        return BigUint::from(n as u32);
    }
    let size = n - 1;
    let mut m: Vec<Vec<BigInt>> = (1..n)
        .map(|u| {
            (1..n)
                .map(|v| {
                    if u == v {
                        BigInt::from(graph.degree(u))
                    } else if graph.has_edge(u, v) {
                        -BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size {
        if m[k][k].is_zero() {
            match (k + 1..size).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigUint::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let value = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = value;
            }
        }
        prev = m[k][k].clone();
    }
    let det = sign * &m[size - 1][size - 1];
    det.abs().to_biguint().expect("absolute value is non-negative")
}

struct Search<'g> {
    graph: &'g Graph,
    dsu_parent: Vec<usize>,
    chosen: Vec<Edge>,
    /// Prune partial forests whose lower bound reaches this value.
    limit: Option<u64>,
    in_part: Vec<bool>,
    in_component: Vec<bool>,
}

impl<'g> Search<'g> {
    fn new(graph: &'g Graph, limit: Option<u64>) -> Self {
        let n = graph.vertex_count();
        Search {
            graph,
            dsu_parent: (0..n).collect(),
            chosen: Vec::with_capacity(n.saturating_sub(1)),
            limit,
            in_part: vec![false; n],
            in_component: vec![false; n],
        }
    }

    // No path compression so that unions can be undone by resetting one slot.
    fn root(&self, mut v: usize) -> usize {
        while self.dsu_parent[v] != v {
            v = self.dsu_parent[v];
        }
        v
    }

    /// Whether chosen edges plus `edges[from..]` still connect the graph.
    fn connected_with_rest(&self, from: usize) -> bool {
        let n = self.graph.vertex_count();
        let mut dsu = UnionFind::new(n);
        let mut components = n;
        for &(u, v) in self.chosen.iter().chain(&self.graph.edges()[from..]) {
            if dsu.union(u, v) {
                components -= 1;
                if components == 1 {
                    return true;
                }
            }
        }
        components == 1
    }

    /// Largest `|E(P, Q)|` over chosen edges inside the component of `v`.
    fn component_lower_bound(&mut self, v: Vertex) -> u64 {
        let root = self.root(v);
        let n = self.graph.vertex_count();
        let members: Vec<Vertex> = (0..n).filter(|&w| self.root(w) == root).collect();
        for &w in &members {
            self.in_component[w] = true;
        }
        let forest: Vec<Edge> = self.chosen.iter().copied().filter(|&(a, _)| self.in_component[a]).collect();
        let mut best = 0;
        for &cut in &forest {
            // grow P from cut.0 without crossing `cut`
            let mut stack = vec![cut.0];
            self.in_part[cut.0] = true;
            let mut part = vec![cut.0];
            while let Some(u) = stack.pop() {
                for &(a, b) in &forest {
                    if (a, b) == cut {
                        continue;
                    }
                    let w = if a == u {
                        b
                    } else if b == u {
                        a
                    } else {
                        continue;
                    };
                    if !self.in_part[w] {
                        self.in_part[w] = true;
                        part.push(w);
                        stack.push(w);
                    }
                }
            }
            let crossing: u64 = part
                .iter()
                .map(|&p| {
                    self.graph.neighbors(p).iter().filter(|&&w| self.in_component[w] && !self.in_part[w]).count() as u64
                })
                .sum();
            best = best.max(crossing);
            for &p in &part {
                self.in_part[p] = false;
            }
        }
        for &w in &members {
            self.in_component[w] = false;
        }
        best
    }

    fn run<F>(&mut self, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Edge], &mut Option<u64>) -> ControlFlow<()>,
    {
        self.recurse(0, visit)
    }

    fn recurse<F>(&mut self, i: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Edge], &mut Option<u64>) -> ControlFlow<()>,
    {
        let n = self.graph.vertex_count();
        if self.chosen.len() + 1 == n {
            return visit(&self.chosen, &mut self.limit);
        }
        let edges = self.graph.edges();
        if i == edges.len() {
            return ControlFlow::Continue(());
        }
        let (u, v) = edges[i];
        let (ru, rv) = (self.root(u), self.root(v));
        if ru == rv {
            // would close a cycle; excluding keeps connectivity
            return self.recurse(i + 1, visit);
        }

        let (big, small) = if ru < rv { (ru, rv) } else { (rv, ru) };
        self.dsu_parent[small] = big;
        self.chosen.push((u, v));
        let prune = match self.limit {
            Some(limit) => self.component_lower_bound(u) >= limit,
            None => false,
        };
        let flow = if prune { ControlFlow::Continue(()) } else { self.recurse(i + 1, visit) };
        self.chosen.pop();
        self.dsu_parent[small] = small;
        flow?;

        if self.connected_with_rest(i + 1) {
            self.recurse(i + 1, visit)
        } else {
            ControlFlow::Continue(())
        }
    }
}

/// Visits every spanning tree of a connected graph exactly once, in
/// include-before-exclude order over the sorted edge list. The visitor may
/// stop early with `ControlFlow::Break`. Returns the number of trees visited.
pub fn enumerate_spanning_trees<'g, F>(graph: &'g Graph, mut visitor: F) -> Result<u64, StcError>
where
    F: FnMut(&SpanningTree<'g>) -> ControlFlow<()>,
{
    if graph.vertex_count() == 0 || !graph.is_connected() {
        return Err(StcError::Disconnected);
    }
    let mut count = 0;
    let mut search = Search::new(graph, None);
    let _ = search.run(&mut |edges: &[Edge], _: &mut Option<u64>| {
        count += 1;
        visitor(&SpanningTree::from_sorted_unchecked(graph, edges.to_vec()))
    });
    Ok(count)
}

#[derive(Debug, Clone)]
pub struct StcResult<'g> {
    pub value: u64,
    pub witness: SpanningTree<'g>,
    /// Complete spanning trees whose congestion was evaluated.
    pub trees_examined: u64,
    /// Total number of spanning trees of the graph.
    pub tree_count: BigUint,
}

#[derive(Debug, Clone)]
pub struct Decision<'g> {
    pub feasible: bool,
    pub witness: Option<SpanningTree<'g>>,
    pub trees_examined: u64,
    pub tree_count: BigUint,
}

fn precheck(graph: &Graph, budget: Option<u64>) -> Result<BigUint, StcError> {
    if graph.vertex_count() < 2 {
        return Err(StcError::TooSmall);
    }
    if !graph.is_connected() {
        return Err(StcError::Disconnected);
    }
    let budget = budget.unwrap_or(DEFAULT_BUDGET);
    let count = spanning_tree_count(graph);
    if count > BigUint::from(budget) {
        return Err(StcError::BudgetExceeded { count, budget });
    }
    Ok(count)
}

/// Exact spanning tree congestion with a minimizing witness.
///
/// The witness is the first minimizing tree in enumeration order, the same
/// tree an unpruned search would report. `budget` caps the spanning-tree
/// count (default [`DEFAULT_BUDGET`]).
pub fn stc_exact(graph: &Graph, budget: Option<u64>) -> Result<StcResult<'_>, StcError> {
    let tree_count = precheck(graph, budget)?;
    // every tree has a leaf, whose edge carries its full degree
    let floor = graph.min_degree() as u64;
    let mut best: Option<(u64, Vec<Edge>)> = None;
    let mut examined = 0;
    let mut search = Search::new(graph, None);
    let _ = search.run(&mut |edges: &[Edge], limit: &mut Option<u64>| {
        examined += 1;
        let value = SpanningTree::from_sorted_unchecked(graph, edges.to_vec()).congestion().max;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, edges.to_vec()));
            *limit = Some(value);
            if value <= floor {
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    let (value, edges) = best.expect("a connected graph has a spanning tree");
    Ok(StcResult {
        value,
        witness: SpanningTree::from_sorted_unchecked(graph, edges),
        trees_examined: examined,
        tree_count,
    })
}

/// Decides whether some spanning tree has congestion at most `k`.
pub fn stc_decide(graph: &Graph, k: u64, budget: Option<u64>) -> Result<Decision<'_>, StcError> {
    if k == 0 {
        return Err(StcError::ZeroTarget);
    }
    let tree_count = precheck(graph, budget)?;
    let mut witness = None;
    let mut examined = 0;
    let mut search = Search::new(graph, Some(k + 1));
    let _ = search.run(&mut |edges: &[Edge], _: &mut Option<u64>| {
        examined += 1;
        let tree = SpanningTree::from_sorted_unchecked(graph, edges.to_vec());
        if tree.congestion().max <= k {
            witness = Some(tree);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(Decision { feasible: witness.is_some(), witness, trees_examined: examined, tree_count })
}

/// Itemized premises of the spider lemma.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpiderPremises {
    pub rhos_positive: bool,
    pub set_has_four: bool,
    pub set_exceeds_rho1_k: bool,
    pub min_degree_exceeds_rho2_set: bool,
    pub rho_product_at_least_half: bool,
    pub rho2_at_least_half: bool,
    pub congestion_within_k: bool,
}

impl SpiderPremises {
    pub fn all(&self) -> bool {
        self.rhos_positive
            && self.set_has_four
            && self.set_exceeds_rho1_k
            && self.min_degree_exceeds_rho2_set
            && self.rho_product_at_least_half
            && self.rho2_at_least_half
            && self.congestion_within_k
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpiderVerdict {
    pub premises: SpiderPremises,
    pub premises_hold: bool,
    /// Shape of the minimal subtree over `S` (absent for empty `S`).
    pub shape: Option<TreeShape>,
    pub conclusion_holds: bool,
    /// Degree of the star center / spider branch vertex in the subtree, or
    /// the largest subtree degree when there is no branching vertex.
    pub branch_degree: usize,
    /// A degree-2 subtree vertex that lies in `S`.
    pub offending_vertex: Option<Vertex>,
}

impl SpiderVerdict {
    /// Premises hold but the conclusion fails. The lemma rules this out, so
    /// it points at a bug in this crate.
    pub fn is_counterexample(&self) -> bool {
        self.premises_hold && !self.conclusion_holds
    }
}

/// Evaluates the spider lemma on a concrete tree: if `T` has congestion at
/// most `k`, `|S| >= 4`, `|S| >= rho1 k + 1` and `delta(G[S]) >= rho2 |S| + 1`
/// (with `rho1 rho2 >= 1/2`, `rho2 >= 1/2`), then the minimal subtree over
/// `S` is a spider whose degree-2 vertices avoid `S` and whose branch
/// vertex has degree at least `|S| - 1`.
pub fn check_spider_lemma(
    tree: &SpanningTree<'_>,
    set: &BTreeSet<Vertex>,
    rho1: Ratio<i64>,
    rho2: Ratio<i64>,
    k: u64,
) -> Result<SpiderVerdict, TreeError> {
    let graph = tree.host();
    let size = Ratio::from_integer(set.len() as i64);
    let k_ratio = Ratio::from_integer(k as i64);
    let one = Ratio::from_integer(1);
    let half = Ratio::new(1, 2);
    let min_degree = graph.induced_min_degree(set)? as i64;
    let premises = SpiderPremises {
        rhos_positive: rho1 > Ratio::zero() && rho2 > Ratio::zero(),
        set_has_four: set.len() >= 4,
        set_exceeds_rho1_k: size >= rho1 * k_ratio + one,
        min_degree_exceeds_rho2_set: Ratio::from_integer(min_degree) >= rho2 * size + one,
        rho_product_at_least_half: rho1 * rho2 >= half,
        rho2_at_least_half: rho2 >= half,
        congestion_within_k: tree.congestion().max <= k,
    };
    let premises_hold = premises.all();

    if set.is_empty() {
        return Ok(SpiderVerdict {
            premises,
            premises_hold,
            shape: None,
            conclusion_holds: false,
            branch_degree: 0,
            offending_vertex: None,
        });
    }
    let subtree = tree.minimal_subtree(set)?;
    let shape = subtree.shape()?;
    let degrees = subtree.degrees();
    let branch_degree = match shape.branch_vertex() {
        Some(b) => degrees[&b],
        None => degrees.values().copied().max().unwrap_or(0),
    };
    let offending_vertex = shape.degree2_vertices.iter().copied().find(|v| set.contains(v));
    let spider_like = matches!(shape.kind, ShapeKind::Star { .. } | ShapeKind::Spider { .. });
    let conclusion_holds = spider_like && offending_vertex.is_none() && branch_degree + 1 >= set.len();
    Ok(SpiderVerdict { premises, premises_hold, shape: Some(shape), conclusion_holds, branch_degree, offending_vertex })
}
