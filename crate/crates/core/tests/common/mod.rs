#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use stc_core::{Graph, Instance, SpanningTree, Vertex};

/// Connected graph on 2..=max_n vertices: a shuffled spanning path plus a
/// random subset of the remaining pairs.
pub fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(any::<bool>(), pairs)).prop_map(
            move |(perm, mask)| {
                let mut edges: Vec<(usize, usize)> = perm.windows(2).map(|w| (w[0], w[1])).collect();
                let mut idx = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if mask[idx] {
                            edges.push((u, v));
                        }
                        idx += 1;
                    }
                }
                Graph::new(n, edges).unwrap()
            },
        )
    })
}

pub fn random_connected_graph<R: Rng>(rng: &mut R, n: usize, density: f64) -> Graph {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let mut edges: Vec<(usize, usize)> = perm.windows(2).map(|w| (w[0], w[1])).collect();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// A uniformly random spanning tree via a random edge order (Kruskal).
pub fn random_spanning_tree<'g, R: Rng>(rng: &mut R, g: &'g Graph) -> SpanningTree<'g> {
    let mut edges = g.edges().to_vec();
    for i in (1..edges.len()).rev() {
        edges.swap(i, rng.gen_range(0..=i));
    }
    let mut comp: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(c: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while c[r] != r {
            r = c[r];
        }
        c[v] = r;
        r
    }
    let mut chosen = Vec::new();
    for (u, v) in edges {
        let (a, b) = (find(&mut comp, u), find(&mut comp, v));
        if a != b {
            comp[a] = b;
            chosen.push((u, v));
        }
    }
    SpanningTree::new(g, chosen).unwrap()
}

/// Every (n-1)-subset of edges that forms a spanning tree, by plain subset
/// enumeration. Independent of the library's enumerator.
pub fn trees_by_subsets(g: &Graph) -> Vec<Vec<(Vertex, Vertex)>> {
    let n = g.vertex_count();
    let edges = g.edges();
    let mut out = Vec::new();
    let mut pick = Vec::new();
    fn go(
        edges: &[(usize, usize)],
        from: usize,
        need: usize,
        n: usize,
        pick: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if need == 0 {
            // n-1 edges without a cycle span all n vertices
            let mut comp: Vec<usize> = (0..n).collect();
            for &(u, v) in pick.iter() {
                let (cu, cv) = (comp[u], comp[v]);
                if cu == cv {
                    return;
                }
                for c in comp.iter_mut() {
                    if *c == cv {
                        *c = cu;
                    }
                }
            }
            out.push(pick.clone());
            return;
        }
        for i in from..edges.len() {
            if edges.len() - i < need {
                break;
            }
            pick.push(edges[i]);
            go(edges, i + 1, need - 1, n, pick, out);
            pick.pop();
        }
    }
    go(edges, 0, n - 1, n, &mut pick, &mut out);
    out
}

/// Congestion of every tree edge computed from scratch: for each edge, flood
/// fill one side and count host edges with exactly one endpoint inside.
pub fn naive_max_congestion(g: &Graph, tree: &[(Vertex, Vertex)]) -> u64 {
    let n = g.vertex_count();
    tree.iter()
        .map(|&cut| {
            let mut side = vec![false; n];
            side[cut.0] = true;
            let mut changed = true;
            while changed {
                changed = false;
                for &(u, v) in tree {
                    if (u, v) == cut {
                        continue;
                    }
                    if side[u] != side[v] {
                        side[u] = true;
                        side[v] = true;
                        changed = true;
                    }
                }
            }
            g.edges().iter().filter(|&&(u, v)| side[u] != side[v]).count() as u64
        })
        .max()
        .unwrap_or(0)
}

/// Random instance built from `m` triples that each sum to `B`.
pub fn random_yes_instance<R: Rng>(rng: &mut R, m: usize, b: i64) -> Instance {
    let mut a = Vec::new();
    while a.len() < 3 * m {
        let x = rng.gen_range(b / 4 + 1..=(b - 1) / 2);
        let y = rng.gen_range(b / 4 + 1..=(b - 1) / 2);
        let z = b - x - y;
        if 4 * z > b && 2 * z < b {
            a.extend([x, y, z]);
        }
    }
    for i in (1..a.len()).rev() {
        a.swap(i, rng.gen_range(0..=i));
    }
    Instance::new(m as i64, b, a).unwrap()
}

/// Random valid instance that may or may not be solvable: perturb a
/// yes-instance by moving one unit between two values when bounds allow.
pub fn random_instance<R: Rng>(rng: &mut R, m: usize, b: i64) -> Instance {
    let base = random_yes_instance(rng, m, b);
    let mut a: Vec<i64> = base.values().iter().map(|&v| v as i64).collect();
    for _ in 0..3 {
        let i = rng.gen_range(0..a.len());
        let j = rng.gen_range(0..a.len());
        if i != j && 4 * (a[i] - 1) > b && 2 * (a[j] + 1) < b {
            a[i] -= 1;
            a[j] += 1;
        }
    }
    Instance::new(m as i64, b, a).unwrap()
}

/// Solvability by trying every assignment of values to groups.
pub fn solvable_by_labelling(instance: &Instance) -> bool {
    let m = instance.m() as usize;
    let a = instance.values();
    let total = (m as u64).pow(a.len() as u32);
    (0..total).any(|mut code| {
        let mut sums = vec![0u64; m];
        for &v in a {
            sums[(code % m as u64) as usize] += v;
            code /= m as u64;
        }
        sums.iter().all(|&s| s == instance.b())
    })
}
