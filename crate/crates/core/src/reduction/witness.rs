//! Both directions of the equivalence on concrete trees: the witness tree
//! built from a 3-partition, partition extraction from a low-congestion
//! tree, and closed-form congestion for star-family trees.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use thiserror::Error;

use super::{Part, ReductionArtifact, ReductionError};
use crate::graph::{edge, Edge, Vertex};
use crate::threepart::{verify_partition, Partition};
use crate::tree::{ShapeKind, SpanningTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("tree congestion {congestion} exceeds k = {k}")]
    HypothesisViolated { congestion: u64, k: u64 },
    #[error("lemma contradiction: claim '{claim}' fails although congestion <= k ({detail})")]
    LemmaContradiction { claim: &'static str, detail: String },
    #[error("tree is not a spanning tree of this artifact's graph")]
    ForeignTree,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

fn contradiction(claim: &'static str, detail: impl Into<String>) -> ExtractError {
    ExtractError::LemmaContradiction { claim, detail: detail.into() }
}

/// Hangs each `x` vertex below one `y` vertex; keys and values are 1-based
/// role indices (`x_j -> y_i`).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StarAssignment {
    pub targets: BTreeMap<usize, usize>,
}

impl StarAssignment {
    /// Group `g` (0-based sorted positions) goes below `y_{g+1}`.
    pub fn from_partition(partition: &Partition) -> Self {
        let targets = partition
            .groups
            .iter()
            .enumerate()
            .flat_map(|(g, members)| members.iter().map(move |&j| (j + 1, g + 1)))
            .collect();
        StarAssignment { targets }
    }

    /// `X_i`: the `x` indices assigned to `y_i`.
    pub fn groups(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (&x, &y) in &self.targets {
            groups.entry(y).or_default().push(x);
        }
        groups
    }
}

/// Closed-form congestions of a star-family tree: `z_1` adjacent to every
/// other vertex of `Y ∪ Z`, each `x_j` hanging below its assigned `y_i`.
#[derive(Debug, Clone)]
pub struct StarFamily<'a> {
    /// Congestion of `{z_1, y_i}` keyed by `i`.
    pub y_edges: BTreeMap<usize, u64>,
    /// Closed form for every tree edge; present when every `x` is assigned.
    pub per_edge: Option<BTreeMap<Edge, u64>>,
    /// The induced tree; present when every `x` is assigned.
    pub tree: Option<SpanningTree<'a>>,
}

impl StarFamily<'_> {
    /// Largest closed-form congestion over all tree edges (only `Y` edges
    /// when the assignment is partial).
    pub fn max(&self) -> u64 {
        match &self.per_edge {
            Some(all) => all.values().copied().max().unwrap_or(0),
            None => self.y_edges.values().copied().max().unwrap_or(0),
        }
    }
}

impl ReductionArtifact {
    /// The witness tree for a solution: a star at `z_1` over `Y ∪ Z` with the
    /// members of group `i` hanging below `y_i`. Partition indices are
    /// 0-based positions in the sorted instance.
    pub fn build_witness_tree(&self, partition: &Partition) -> Result<SpanningTree<'_>, ReductionError> {
        for (group, members) in partition.groups.iter().enumerate() {
            if members.len() != 3 {
                return Err(ReductionError::GroupSize { group, size: members.len() });
            }
        }
        verify_partition(&self.instance.base, partition)?;
        let center = self.z(1);
        let mut pairs: Vec<(Vertex, Vertex)> =
            self.y.iter().chain(&self.z).filter(|&&w| w != center).map(|&w| (center, w)).collect();
        for (i, members) in partition.groups.iter().enumerate() {
            pairs.extend(members.iter().map(|&j| (self.y(i + 1), self.x(j + 1))));
        }
        Ok(SpanningTree::new(&self.graph, pairs)?)
    }

    /// Recovers a solution from a spanning tree of congestion at most `k`.
    ///
    /// Follows the argument for the converse direction: the minimal subtree
    /// over `Y ∪ Z` must be a star centred at some `z*`, every other `z` and
    /// every `y_i` with `i > m` must be a leaf, and the `x` vertices below
    /// `y_i` (rooting at `z*`) form group `i`. Any failed step while the
    /// congestion is within `k` is reported as a contradiction.
    pub fn extract_partition(&self, tree: &SpanningTree<'_>) -> Result<Partition, ExtractError> {
        if !std::ptr::eq(tree.host(), &self.graph) && tree.host() != &self.graph {
            return Err(ExtractError::ForeignTree);
        }
        let congestion = tree.congestion().max;
        if congestion > self.k {
            return Err(ExtractError::HypothesisViolated { congestion, k: self.k });
        }

        let yz: BTreeSet<Vertex> = self.y.iter().chain(&self.z).copied().collect();
        let subtree = tree.minimal_subtree(&yz)?;
        let shape = subtree.shape()?;
        let center = match shape.kind {
            ShapeKind::Star { center } => center,
            other => return Err(contradiction("subtree over Y ∪ Z is a star", format!("shape is {other:?}"))),
        };
        if self.roles[center].part != Part::Z {
            return Err(contradiction(
                "the star over Y ∪ Z is centred in Z",
                format!("center is {}", self.roles[center]),
            ));
        }
        if subtree.vertices != yz {
            return Err(contradiction("the star over Y ∪ Z is centred in Z", "the star passes through X"));
        }
        if let Some(&z) = self.z.iter().find(|&&z| z != center && tree.degree(z) != 1) {
            return Err(contradiction(
                "every z other than the center is a leaf",
                format!("{} has tree degree {}", self.roles[z], tree.degree(z)),
            ));
        }
        let m = self.m();
        if let Some(i) = (m + 1..=self.y.len()).find(|&i| tree.degree(self.y(i)) != 1) {
            return Err(contradiction(
                "y_i is a leaf for i > m",
                format!("y{i} has tree degree {}", tree.degree(self.y(i))),
            ));
        }

        let rooted = tree.rooted_at(center);
        let mut groups = vec![Vec::new(); m];
        for j in 1..=self.x.len() {
            let mut v = self.x(j);
            while self.roles[v].part == Part::X {
                v = rooted.parent[v].expect("x vertices are never the root");
            }
            let role = self.roles[v];
            if role.part != Part::Y || role.index > m {
                return Err(contradiction("x vertices hang below y_1..y_m", format!("x{j} hangs below {role}")));
            }
            groups[role.index - 1].push(j - 1);
        }
        let partition = Partition::new(groups);
        verify_partition(&self.instance.base, &partition)
            .map_err(|defect| contradiction("each group sums to B", defect.to_string()))?;
        Ok(partition)
    }

    /// Closed-form congestions for the star-family tree of `assignment`.
    ///
    /// For `i <= m` the edge `{z_1, y_i}` carries
    /// `(k - B - 9m + 15) + Σ a_j + |X_i|((3m - 2) - |X_i|)`, and for `i > m`
    /// it carries `k + Σ ((a_j + 3m - 1) - (|X_i| + 1))`, both instances of
    /// `deg(y_i) + Σ deg(x_j) - 2·C(|X_i| + 1, 2)` for the clique
    /// `{y_i} ∪ X_i`. Leaf edges carry the leaf's degree.
    pub fn star_family_congestion(&self, assignment: &StarAssignment) -> Result<StarFamily<'_>, ReductionError> {
        for (&x, &y) in &assignment.targets {
            if x == 0 || x > self.x.len() {
                return Err(ReductionError::NoSuchX(x));
            }
            if y == 0 || y > self.y.len() || !self.graph.has_edge(self.x(x), self.y(y)) {
                return Err(ReductionError::NotAdjacent { x, y });
            }
        }
        let groups = assignment.groups();
        let m = self.m() as i64;
        let k = self.k as i64;
        let b = self.b() as i64;
        let mut y_edges = BTreeMap::new();
        for i in 1..=self.y.len() {
            let members = groups.get(&i).map(Vec::as_slice).unwrap_or(&[]);
            let size = members.len() as i64;
            let value = if i <= self.m() {
                let sum: i64 = members.iter().map(|&j| self.a(j) as i64).sum();
                (k - b - 9 * m + 15) + sum + size * ((3 * m - 2) - size)
            } else {
                k + members.iter().map(|&j| (self.a(j) as i64 + 3 * m - 1) - (size + 1)).sum::<i64>()
            };
            y_edges.insert(i, value as u64);
        }

        if assignment.targets.len() != self.x.len() {
            return Ok(StarFamily { y_edges, per_edge: None, tree: None });
        }
        let center = self.z(1);
        let mut per_edge = BTreeMap::new();
        for &z in self.z.iter().skip(1) {
            per_edge.insert(edge(center, z), self.expected_degree(z)?);
        }
        for (&i, &value) in &y_edges {
            per_edge.insert(edge(center, self.y(i)), value);
        }
        for (&x, &y) in &assignment.targets {
            per_edge.insert(edge(self.y(y), self.x(x)), self.expected_degree(self.x(x))?);
        }
        let tree = SpanningTree::new(&self.graph, per_edge.keys().copied())?;
        Ok(StarFamily { y_edges, per_edge: Some(per_edge), tree: Some(tree) })
    }

    /// A random total assignment: each `x_j` picks, with equal chance, a
    /// uniform `y_i` with `i <= m` or a uniform neighbour among `y_1..y_{a_j}`.
    pub fn random_star_assignment<R: Rng + ?Sized>(&self, rng: &mut R) -> StarAssignment {
        let m = self.m();
        let targets = (1..=self.x.len())
            .map(|j| {
                let y = if rng.gen_bool(0.5) { rng.gen_range(1..=m) } else { rng.gen_range(1..=self.a(j) as usize) };
                (j, y)
            })
            .collect();
        StarAssignment { targets }
    }
}
