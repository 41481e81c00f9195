//! The 3-Partition to spanning-tree-congestion reduction.
//!
//! For a normalized instance (values sorted, `a_1 >= 8m`) with target `B`,
//! the graph has vertex classes
//!
//! * `X = {x_1..x_3m}`, one vertex per value,
//! * `Y = {y_1..y_{a_3m}}`,
//! * `Z = {z_1..z_{k - a_3m + 1}}` where `k = 3B`,
//!
//! each a clique, with `x_i ~ y_j` iff `j <= a_i`, `y_i ~ z_j` iff
//! `j <= |Z| - B - 12m + 15` for `i <= m` and iff `j <= |Z| - gamma_i` for
//! `i > m`. Here `gamma_i` counts the values that are at least `i`.
//! The instance is a yes-instance iff the graph has a spanning tree of
//! congestion at most `k`.
//!
//! Role indices are 1-based, matching the usual presentation of the
//! construction; vertex ids are 0-based.

mod audit;
mod witness;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};
use crate::threepart::{Instance, InstanceError, NormalizedInstance, PartitionDefect, RawInstance};
use crate::tree::TreeError;

pub use audit::{AuditItem, AuditReport};
pub use witness::{ExtractError, StarAssignment, StarFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Part {
    X,
    Y,
    Z,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Part::X => "X",
            Part::Y => "Y",
            Part::Z => "Z",
        })
    }
}

/// Which class a vertex belongs to and its 1-based index within the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Role {
    pub part: Part,
    pub index: usize,
}

impl Role {
    pub fn x(index: usize) -> Self {
        Role { part: Part::X, index }
    }

    pub fn y(index: usize) -> Self {
        Role { part: Part::Y, index }
    }

    pub fn z(index: usize) -> Self {
        Role { part: Part::Z, index }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.part.to_string().to_lowercase(), self.index)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("instance is not normalized (values must be sorted ascending with a_1 >= 8m)")]
    NotNormalized,
    #[error("construction is degenerate: {0}")]
    Degenerate(String),
    #[error("construction invariant failed: {0}")]
    Invariant(String),
    #[error("labels: {0}")]
    Labels(String),
    #[error("vertex {0} has no role")]
    UnknownVertex(Vertex),
    #[error("partition group {group} has {size} members, expected 3")]
    GroupSize { group: usize, size: usize },
    #[error("x{x} is not adjacent to y{y}")]
    NotAdjacent { x: usize, y: usize },
    #[error("no vertex x{0}")]
    NoSuchX(usize),
    #[error(transparent)]
    Partition(#[from] PartitionDefect),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// `gamma_i = |{j : a_j >= i}|` for `i = 1..=a_3m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaProfile {
    gamma: Vec<u64>,
}

impl GammaProfile {
    /// `gamma_i` for 1-based `i`.
    pub fn get(&self, i: usize) -> u64 {
        self.gamma[i - 1]
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.gamma
    }
}

pub fn gamma_profile(instance: &NormalizedInstance) -> GammaProfile {
    let a = instance.base.values();
    let top = a.iter().copied().max().unwrap_or(0);
    // values are sorted, so count from the first index reaching the threshold
    let gamma = (1..=top).map(|i| (a.len() - a.partition_point(|&v| v < i)) as u64).collect();
    GammaProfile { gamma }
}

/// The generated graph with its vertex roles and the data it was built from.
#[derive(Debug, Clone)]
pub struct ReductionArtifact {
    graph: Graph,
    k: u64,
    instance: NormalizedInstance,
    gamma: GammaProfile,
    x: Vec<Vertex>,
    y: Vec<Vertex>,
    z: Vec<Vertex>,
    roles: Vec<Role>,
}

/// Builds the reduction graph and verifies every construction invariant
/// before returning it.
pub fn build_reduction(instance: &NormalizedInstance) -> Result<ReductionArtifact, ReductionError> {
    let a = instance.base.values();
    if NormalizedInstance::from_normalized(instance.base.clone()).is_none() {
        return Err(ReductionError::NotNormalized);
    }
    let m = instance.base.m() as usize;
    let b = instance.base.b();
    let k = 3 * b;
    let top = a[a.len() - 1] as usize;
    let x_len = 3 * m;
    let z_len = (k as usize + 1)
        .checked_sub(top)
        .ok_or_else(|| ReductionError::Degenerate(format!("a_3m = {top} exceeds k + 1 = {}", k + 1)))?;
    let gamma = gamma_profile(instance);

    let x: Vec<Vertex> = (0..x_len).collect();
    let y: Vec<Vertex> = (x_len..x_len + top).collect();
    let z: Vec<Vertex> = (x_len + top..x_len + top + z_len).collect();
    let n = x_len + top + z_len;

    let mut artifact = ReductionArtifact {
        graph: Graph::new(0, []).expect("empty graph"),
        k,
        instance: instance.clone(),
        gamma,
        roles: Vec::new(),
        x,
        y,
        z,
    };
    artifact.roles = artifact.role_table(n);

    let mut pairs = Vec::new();
    for class in [&artifact.x, &artifact.y, &artifact.z] {
        for (i, &u) in class.iter().enumerate() {
            pairs.extend(class[i + 1..].iter().map(|&v| (u, v)));
        }
    }
    for i in 1..=x_len {
        pairs.extend((1..=a[i - 1] as usize).map(|j| (artifact.x(i), artifact.y(j))));
    }
    for i in 1..=top {
        let reach = artifact.y_reach(i)?;
        pairs.extend((1..=reach).map(|j| (artifact.y(i), artifact.z(j))));
    }
    artifact.graph = Graph::new(n, pairs)?;

    let report = artifact.audit();
    if !report.passed() {
        return Err(ReductionError::Invariant(report.failures().join("; ")));
    }
    Ok(artifact)
}

impl ReductionArtifact {
    fn role_table(&self, n: usize) -> Vec<Role> {
        let mut roles = vec![Role::x(0); n];
        for (part, class) in [(Part::X, &self.x), (Part::Y, &self.y), (Part::Z, &self.z)] {
            for (i, &v) in class.iter().enumerate() {
                roles[v] = Role { part, index: i + 1 };
            }
        }
        roles
    }

    /// Rebuilds an artifact around a labelled graph, typically read back from
    /// disk. Without `instance`, the values are recovered as `a_i = |N(x_i) ∩ Y|`
    /// and must already be normalized. The graph itself is not checked
    /// against the construction; run [`ReductionArtifact::audit`] for that.
    pub fn from_labeled_graph(
        graph: Graph,
        labels: &[(Vertex, Role)],
        k: u64,
        instance: Option<NormalizedInstance>,
    ) -> Result<Self, ReductionError> {
        let n = graph.vertex_count();
        let mut slots: [Vec<Option<Vertex>>; 3] = Default::default();
        let mut labelled = vec![false; n];
        for &(v, role) in labels {
            if v >= n {
                return Err(ReductionError::Labels(format!("vertex {} outside the graph", v + 1)));
            }
            if std::mem::replace(&mut labelled[v], true) {
                return Err(ReductionError::Labels(format!("vertex {} labelled twice", v + 1)));
            }
            if role.index == 0 {
                return Err(ReductionError::Labels(format!("vertex {} has index 0", v + 1)));
            }
            let class = &mut slots[role.part as usize];
            if class.len() < role.index {
                class.resize(role.index, None);
            }
            if class[role.index - 1].replace(v).is_some() {
                return Err(ReductionError::Labels(format!("role {role} assigned twice")));
            }
        }
        if let Some(v) = labelled.iter().position(|&l| !l) {
            return Err(ReductionError::Labels(format!("vertex {} has no label", v + 1)));
        }
        let [x, y, z] = slots.map(|class| class.into_iter().collect::<Option<Vec<_>>>());
        let (Some(x), Some(y), Some(z)) = (x, y, z) else {
            return Err(ReductionError::Labels("role indices are not contiguous".into()));
        };

        let instance = match instance {
            Some(instance) => instance,
            None => {
                if x.is_empty() || x.len() % 3 != 0 {
                    return Err(ReductionError::Labels(format!("|X| = {} is not a positive multiple of 3", x.len())));
                }
                let y_set: BTreeSet<Vertex> = y.iter().copied().collect();
                let a: Vec<i64> =
                    x.iter().map(|&v| graph.neighbors(v).iter().filter(|w| y_set.contains(w)).count() as i64).collect();
                let m = (x.len() / 3) as i64;
                let sum: i64 = a.iter().sum();
                let base = crate::threepart::validate_instance(&RawInstance { m, b: sum / m, a })?;
                NormalizedInstance::from_normalized(base).ok_or(ReductionError::NotNormalized)?
            }
        };
        let m = instance.base.m() as usize;
        let top = instance.base.values().last().copied().unwrap_or(0) as usize;
        if k != 3 * instance.base.b() {
            return Err(ReductionError::Labels(format!("k = {k} but 3B = {}", 3 * instance.base.b())));
        }
        let z_len = (k as usize + 1).saturating_sub(top);
        if x.len() != 3 * m || y.len() != top || z.len() != z_len {
            return Err(ReductionError::Labels(format!(
                "class sizes |X|={}, |Y|={}, |Z|={} do not match the instance (expected {}, {}, {})",
                x.len(),
                y.len(),
                z.len(),
                3 * m,
                top,
                z_len
            )));
        }
        let gamma = gamma_profile(&instance);
        let mut artifact = ReductionArtifact { graph, k, instance, gamma, x, y, z, roles: Vec::new() };
        artifact.roles = artifact.role_table(n);
        Ok(artifact)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Target congestion `k = 3B`.
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn instance(&self) -> &NormalizedInstance {
        &self.instance
    }

    pub fn base(&self) -> &Instance {
        &self.instance.base
    }

    pub fn gamma(&self) -> &GammaProfile {
        &self.gamma
    }

    pub fn m(&self) -> usize {
        self.instance.base.m() as usize
    }

    pub fn b(&self) -> u64 {
        self.instance.base.b()
    }

    /// `a_i` for 1-based `i`.
    pub fn a(&self, i: usize) -> u64 {
        self.instance.base.values()[i - 1]
    }

    pub fn x(&self, i: usize) -> Vertex {
        self.x[i - 1]
    }

    pub fn y(&self, i: usize) -> Vertex {
        self.y[i - 1]
    }

    pub fn z(&self, i: usize) -> Vertex {
        self.z[i - 1]
    }

    pub fn x_vertices(&self) -> &[Vertex] {
        &self.x
    }

    pub fn y_vertices(&self) -> &[Vertex] {
        &self.y
    }

    pub fn z_vertices(&self) -> &[Vertex] {
        &self.z
    }

    pub fn role(&self, v: Vertex) -> Option<Role> {
        self.roles.get(v).copied()
    }

    /// `(vertex, role)` for every vertex, by vertex id.
    pub fn labels(&self) -> Vec<(Vertex, Role)> {
        self.roles.iter().copied().enumerate().collect()
    }

    /// `x_1..x_3m, y_1..y_{a_3m}, z_1..z_|Z|`.
    pub fn canonical_order(&self) -> Vec<Vertex> {
        self.x.iter().chain(&self.y).chain(&self.z).copied().collect()
    }

    /// `|Z| - B - 12m + 15`, the number of `Z` neighbours of `y_1..y_m`.
    fn low_y_reach(&self) -> i64 {
        self.z.len() as i64 - self.b() as i64 - 12 * self.m() as i64 + 15
    }

    /// Number of `Z` neighbours `y_i` has by construction.
    fn y_reach(&self, i: usize) -> Result<usize, ReductionError> {
        let reach = if i <= self.m() { self.low_y_reach() } else { self.z.len() as i64 - self.gamma.get(i) as i64 };
        if reach < 0 || reach as usize > self.z.len() {
            return Err(ReductionError::Degenerate(format!("y{i} would have {reach} neighbours in Z")));
        }
        Ok(reach as usize)
    }

    /// Number of `y_i` adjacent to `z_j` by construction.
    fn y_count_at(&self, j: usize) -> usize {
        (1..=self.y.len()).filter(|&i| self.y_reach(i).is_ok_and(|r| r >= j)).count()
    }

    /// Degree of `v` predicted by the construction.
    pub fn expected_degree(&self, v: Vertex) -> Result<u64, ReductionError> {
        let role = self.role(v).ok_or(ReductionError::UnknownVertex(v))?;
        let m = self.m() as u64;
        let k = self.k;
        Ok(match role.part {
            Part::X => self.a(role.index) + 3 * m - 1,
            Part::Y if role.index <= self.m() => (k + 15) - (self.b() + 9 * m),
            Part::Y => k,
            Part::Z => (self.z.len() - 1 + self.y_count_at(role.index)) as u64,
        })
    }

    /// Closed-form edge count of the construction.
    pub fn expected_edge_count(&self) -> u64 {
        let pairs = |s: usize| (s * s.saturating_sub(1) / 2) as u64;
        let xy: u64 = self.instance.base.values().iter().sum();
        let yz: u64 = (1..=self.y.len()).map(|i| self.y_reach(i).unwrap_or(0) as u64).sum();
        pairs(self.x.len()) + pairs(self.y.len()) + pairs(self.z.len()) + xy + yz
    }

    /// A copy with one edge deleted, bypassing the construction checks.
    pub fn with_edge_removed(&self, u: Vertex, v: Vertex) -> Result<Self, ReductionError> {
        Ok(ReductionArtifact { graph: self.graph.without_edge(u, v)?, ..self.clone() })
    }

    /// A copy with one edge added, bypassing the construction checks.
    pub fn with_edge_added(&self, u: Vertex, v: Vertex) -> Result<Self, ReductionError> {
        Ok(ReductionArtifact { graph: self.graph.with_edge(u, v)?, ..self.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::threepart::normalize_instance;

    fn d1() -> ReductionArtifact {
        let inst = Instance::new(1, 30, vec![9, 10, 11]).unwrap();
        build_reduction(&normalize_instance(&inst)).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let n = normalize_instance(&Instance::new(1, 30, vec![9, 10, 11]).unwrap());
        assert_eq!(gamma_profile(&n).as_slice(), &[3, 3, 3, 3, 3, 3, 3, 3, 3, 2, 1]);
        let n = normalize_instance(&Instance::new(1, 24, vec![8, 8, 8]).unwrap());
        assert_eq!(gamma_profile(&n).as_slice(), &[3; 8]);
    }

    #[test]
    fn d1_sizes() {
        let r = d1();
        assert_eq!(r.k(), 90);
        assert_eq!(r.graph().vertex_count(), 94);
        assert_eq!(r.graph().edge_count(), 4074);
        assert_eq!(r.expected_edge_count(), 4074);
        assert_eq!((r.x_vertices().len(), r.y_vertices().len(), r.z_vertices().len()), (3, 11, 80));
    }

    #[test]
    fn d1_low_y_reach() {
        let r = d1();
        let y1 = r.y(1);
        for j in 1..=80 {
            assert_eq!(r.graph().has_edge(y1, r.z(j)), j <= 53, "z{j}");
        }
    }

    #[test]
    fn d1_degrees() {
        let r = d1();
        for (v, want) in [(r.x(1), 11), (r.y(1), 66), (r.y(5), 90), (r.z(80), 79), (r.z(1), 90)] {
            assert_eq!(r.expected_degree(v), Ok(want));
            assert_eq!(r.graph().degree(v) as u64, want);
        }
        assert_eq!(r.expected_degree(94), Err(ReductionError::UnknownVertex(94)));
    }

    #[test]
    fn rejects_unnormalized() {
        let inst = Instance::new(1, 9, vec![3, 3, 3]).unwrap();
        let raw = NormalizedInstance { base: inst, scale: 1, perm: vec![0, 1, 2] };
        assert_eq!(build_reduction(&raw).unwrap_err(), ReductionError::NotNormalized);
    }

    #[test]
    fn labels_round_trip() {
        let r = d1();
        let back = ReductionArtifact::from_labeled_graph(r.graph().clone(), &r.labels(), r.k(), None).unwrap();
        assert_eq!(back.base(), r.base());
        assert_eq!(back.canonical_order(), r.canonical_order());
        assert!(back.audit().passed());
    }

    #[test]
    fn labels_must_cover() {
        let r = d1();
        let mut labels = r.labels();
        labels.pop();
        assert!(matches!(
            ReductionArtifact::from_labeled_graph(r.graph().clone(), &labels, r.k(), None),
            Err(ReductionError::Labels(_))
        ));
    }
}
