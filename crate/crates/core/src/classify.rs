//! Proper-interval certificates: ordering checks, claw search and the
//! three-clique cover.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("order has {actual} entries, graph has {expected} vertices")]
    WrongLength { expected: usize, actual: usize },
    #[error("vertex {0} is repeated or out of range in the order")]
    NotAPermutation(Vertex),
    #[error("vertex {0} is in more than one part or out of range")]
    PartsOverlap(Vertex),
    #[error("vertex {0} is in no part")]
    PartsIncomplete(Vertex),
}

/// Result of checking a candidate proper interval ordering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderingWitness {
    pub valid: bool,
    /// `(u, v, w)` with `u ≺ v ≺ w`, `{u, w} ∈ E` and `{u, v}` or `{v, w}`
    /// missing.
    pub violation: Option<(Vertex, Vertex, Vertex)>,
}

fn check_permutation(n: usize, order: &[Vertex]) -> Result<Vec<usize>, ClassifyError> {
    if order.len() != n {
        return Err(ClassifyError::WrongLength { expected: n, actual: order.len() });
    }
    let mut position = vec![usize::MAX; n];
    for (p, &v) in order.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return Err(ClassifyError::NotAPermutation(v));
        }
        position[v] = p;
    }
    Ok(position)
}

/// Checks that `u ≺ v ≺ w` and `{u, w} ∈ E` always imply `{u, v}, {v, w} ∈ E`.
///
/// Scans `u` in order, its later neighbours `w` in order, then each `v`
/// strictly between; the first violation found in that order is reported.
pub fn is_proper_interval_ordering(graph: &Graph, order: &[Vertex]) -> Result<OrderingWitness, ClassifyError> {
    let position = check_permutation(graph.vertex_count(), order)?;
    for (pu, &u) in order.iter().enumerate() {
        let mut later: Vec<usize> = graph.neighbors(u).iter().map(|&w| position[w]).filter(|&pw| pw > pu).collect();
        later.sort_unstable();
        for pw in later {
            let w = order[pw];
            if let Some(&v) = order[pu + 1..pw].iter().find(|&&v| !graph.has_edge(u, v) || !graph.has_edge(v, w)) {
                return Ok(OrderingWitness { valid: false, violation: Some((u, v, w)) });
            }
        }
    }
    Ok(OrderingWitness { valid: true, violation: None })
}

/// An induced `K_{1,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Claw {
    pub center: Vertex,
    pub leaves: [Vertex; 3],
}

/// Finds the lexicographically first claw `(center, l1 < l2 < l3)`, if any.
pub fn find_claw(graph: &Graph) -> Option<Claw> {
    for center in graph.vertices() {
        let nbrs = graph.neighbors(center);
        for (i, &a) in nbrs.iter().enumerate() {
            for (j, &b) in nbrs.iter().enumerate().skip(i + 1) {
                if graph.has_edge(a, b) {
                    continue;
                }
                if let Some(&c) = nbrs[j + 1..].iter().find(|&&c| !graph.has_edge(a, c) && !graph.has_edge(b, c)) {
                    return Some(Claw { center, leaves: [a, b, c] });
                }
            }
        }
    }
    None
}

/// Whether the three parts, which must partition the vertex set, are all
/// cliques. A yes answer bounds the independence number by 3.
pub fn clique_cover_3(graph: &Graph, parts: [&[Vertex]; 3]) -> Result<bool, ClassifyError> {
    let mut covered = vec![false; graph.vertex_count()];
    for &v in parts.iter().flat_map(|p| p.iter()) {
        match covered.get_mut(v) {
            Some(slot) if !*slot => *slot = true,
            _ => return Err(ClassifyError::PartsOverlap(v)),
        }
    }
    if let Some(v) = covered.iter().position(|&c| !c) {
        return Err(ClassifyError::PartsIncomplete(v));
    }
    Ok(parts.iter().all(|part| graph.is_clique(part)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn permutations(items: &[Vertex]) -> Vec<Vec<Vertex>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..items.len() {
            let mut rest = items.to_vec();
            let head = rest.remove(i);
            for mut tail in permutations(&rest) {
                tail.insert(0, head);
                out.push(tail);
            }
        }
        out
    }

    #[test]
    fn triangle_orders_are_all_valid() {
        let g = Graph::complete(3);
        for order in permutations(&[0, 1, 2]) {
            assert!(is_proper_interval_ordering(&g, &order).unwrap().valid);
        }
    }

    #[test]
    fn claw_has_no_valid_order() {
        let g = Graph::star(3);
        let orders = permutations(&[0, 1, 2, 3]);
        assert_eq!(orders.len(), 24);
        for order in orders {
            let witness = is_proper_interval_ordering(&g, &order).unwrap();
            assert!(!witness.valid);
            let (u, v, w) = witness.violation.unwrap();
            assert!(g.has_edge(u, w));
            assert!(!g.has_edge(u, v) || !g.has_edge(v, w));
        }
    }

    #[test]
    fn order_must_be_permutation() {
        let g = Graph::path(3);
        assert_eq!(
            is_proper_interval_ordering(&g, &[0, 1]),
            Err(ClassifyError::WrongLength { expected: 3, actual: 2 })
        );
        assert_eq!(is_proper_interval_ordering(&g, &[0, 1, 1]), Err(ClassifyError::NotAPermutation(1)));
    }

    #[test]
    fn claws() {
        assert_eq!(find_claw(&Graph::star(3)), Some(Claw { center: 0, leaves: [1, 2, 3] }));
        assert_eq!(find_claw(&Graph::cycle(6)), None);
        assert_eq!(find_claw(&Graph::complete(5)), None);
    }

    #[test]
    fn clique_covers() {
        let p3 = Graph::path(3);
        assert_eq!(clique_cover_3(&p3, [&[0], &[1], &[2]]), Ok(true));
        let c4 = Graph::cycle(4);
        assert_eq!(clique_cover_3(&c4, [&[0, 2], &[1], &[3]]), Ok(false));
        assert_eq!(clique_cover_3(&c4, [&[0, 2], &[1], &[1, 3]]), Err(ClassifyError::PartsOverlap(1)));
        assert_eq!(clique_cover_3(&c4, [&[0, 2], &[1], &[]]), Err(ClassifyError::PartsIncomplete(3)));
    }
}
