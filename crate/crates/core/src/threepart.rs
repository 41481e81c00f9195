//! 3-Partition instances: validation, normalization, brute-force solving and
//! solution checking.
//!
//! Indices are 0-based throughout this module.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest number of values the brute-force solver accepts.
pub const BRUTE_FORCE_LIMIT: usize = 15;

/// An instance as read from disk, before any checking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawInstance {
    pub m: i64,
    #[serde(rename = "B")]
    pub b: i64,
    pub a: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoGroups(i64),
    WrongLength {
        expected: i64,
        actual: usize,
    },
    NonPositive {
        index: usize,
        value: i64,
    },
    SumMismatch {
        sum: i128,
        expected: i128,
    },
    /// `4 a_i > B` fails.
    AtMostQuarter {
        index: usize,
        value: i64,
    },
    /// `2 a_i < B` fails.
    AtLeastHalf {
        index: usize,
        value: i64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoGroups(m) => write!(f, "m must be positive, got {m}"),
            Violation::WrongLength { expected, actual } => {
                write!(f, "expected 3m = {expected} values, got {actual}")
            }
            Violation::NonPositive { index, value } => write!(f, "a[{index}] = {value} is not positive"),
            Violation::SumMismatch { sum, expected } => write!(f, "sum of a is {sum}, expected mB = {expected}"),
            Violation::AtMostQuarter { index, value } => write!(f, "a[{index}] = {value} violates a > B/4"),
            Violation::AtLeastHalf { index, value } => write!(f, "a[{index}] = {value} violates a < B/2"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("invalid instance: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("brute force handles at most {BRUTE_FORCE_LIMIT} values, instance has {0}")]
    TooLarge(usize),
}

/// A validated instance: `3m` values summing to `mB`, each strictly
/// between `B/4` and `B/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Instance {
    m: u64,
    #[serde(rename = "B")]
    b: u64,
    a: Vec<u64>,
}

impl Instance {
    pub fn new(m: i64, b: i64, a: Vec<i64>) -> Result<Self, InstanceError> {
        validate_instance(&RawInstance { m, b, a })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn values(&self) -> &[u64] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn to_raw(&self) -> RawInstance {
        RawInstance { m: self.m as i64, b: self.b as i64, a: self.a.iter().map(|&x| x as i64).collect() }
    }
}

/// Checks every constraint and reports all violations at once.
pub fn validate_instance(raw: &RawInstance) -> Result<Instance, InstanceError> {
    let mut violations = Vec::new();
    if raw.m <= 0 {
        violations.push(Violation::NoGroups(raw.m));
    } else if raw.a.len() as i64 != raw.m.saturating_mul(3) {
        violations.push(Violation::WrongLength { expected: raw.m.saturating_mul(3), actual: raw.a.len() });
    }
    for (index, &value) in raw.a.iter().enumerate() {
        if value <= 0 {
            violations.push(Violation::NonPositive { index, value });
        }
    }
    let sum: i128 = raw.a.iter().map(|&x| x as i128).sum();
    let expected = raw.m as i128 * raw.b as i128;
    if sum != expected {
        violations.push(Violation::SumMismatch { sum, expected });
    }
    let b = raw.b as i128;
    for (index, &value) in raw.a.iter().enumerate() {
        if 4 * value as i128 <= b {
            violations.push(Violation::AtMostQuarter { index, value });
        }
        if 2 * value as i128 >= b {
            violations.push(Violation::AtLeastHalf { index, value });
        }
    }
    if !violations.is_empty() {
        return Err(InstanceError::Invalid(violations));
    }
    Ok(Instance { m: raw.m as u64, b: raw.b as u64, a: raw.a.iter().map(|&x| x as u64).collect() })
}

/// An instance sorted ascending and scaled so that every value is at least
/// `8m` (hence `B >= 24m`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedInstance {
    pub base: Instance,
    pub scale: u64,
    /// `perm[p]` is the original index of sorted position `p`.
    pub perm: Vec<usize>,
}

impl NormalizedInstance {
    /// Accepts an instance that already satisfies the normalization
    /// conditions, with identity permutation and unit scale.
    pub fn from_normalized(base: Instance) -> Option<Self> {
        let sorted = base.a.windows(2).all(|w| w[0] <= w[1]);
        let large = base.a.first().is_some_and(|&a1| a1 >= 8 * base.m);
        if !(sorted && large) {
            return None;
        }
        let perm = (0..base.len()).collect();
        Some(NormalizedInstance { base, scale: 1, perm })
    }

    /// Recovers the instance this one was normalized from.
    pub fn original(&self) -> Instance {
        let mut a = vec![0; self.base.len()];
        for (p, &orig) in self.perm.iter().enumerate() {
            a[orig] = self.base.a[p] / self.scale;
        }
        Instance { m: self.base.m, b: self.base.b / self.scale, a }
    }

    /// Maps a partition of sorted positions to original indices.
    pub fn partition_to_original(&self, partition: &Partition) -> Partition {
        Partition::new(partition.groups.iter().map(|g| g.iter().map(|&p| self.perm[p]).collect()).collect())
    }

    /// Maps a partition of original indices to sorted positions.
    pub fn partition_from_original(&self, partition: &Partition) -> Partition {
        let mut position = vec![0; self.perm.len()];
        for (p, &orig) in self.perm.iter().enumerate() {
            position[orig] = p;
        }
        Partition::new(
            partition
                .groups
                .iter()
                .map(|g| g.iter().map(|&i| position.get(i).copied().unwrap_or(i)).collect())
                .collect(),
        )
    }
}

/// Sorts ascending and scales by the smallest integer `c` with
/// `c * min(a) >= 8m`. Scaling multiplies every value and `B` alike, so the
/// sum, both strict bounds and the answer are preserved.
pub fn normalize_instance(instance: &Instance) -> NormalizedInstance {
    let mut perm: Vec<usize> = (0..instance.len()).collect();
    perm.sort_by_key(|&i| (instance.a[i], i));
    let smallest = instance.a[perm[0]];
    let target = 8 * instance.m;
    let scale = if smallest >= target { 1 } else { target.div_ceil(smallest) };
    let base =
        Instance { m: instance.m, b: instance.b * scale, a: perm.iter().map(|&i| instance.a[i] * scale).collect() };
    NormalizedInstance { base, scale, perm }
}

/// `m` disjoint groups of indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub groups: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(groups: Vec<Vec<usize>>) -> Self {
        Partition { groups }
    }

    /// Groups sorted internally and among themselves, for comparison up to
    /// reordering.
    pub fn canonical(&self) -> Partition {
        let mut groups: Vec<Vec<usize>> = self
            .groups
            .iter()
            .map(|g| {
                let mut g = g.clone();
                g.sort_unstable();
                g
            })
            .collect();
        groups.sort();
        Partition { groups }
    }

    /// Equality up to the order of groups and of indices within a group.
    pub fn same_as(&self, other: &Partition) -> bool {
        self.canonical() == other.canonical()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionDefect {
    #[error("expected {expected} groups, got {actual}")]
    GroupCount { expected: u64, actual: usize },
    #[error("index {0} is out of range")]
    OutOfRange(usize),
    #[error("index {0} appears more than once")]
    Repeated(usize),
    #[error("index {0} is not covered")]
    Uncovered(usize),
    #[error("group {group} sums to {sum}, expected {target}")]
    WrongSum { group: usize, sum: u64, target: u64 },
}

/// Checks that `partition` splits all indices into `m` groups summing to `B`.
pub fn verify_partition(instance: &Instance, partition: &Partition) -> Result<(), PartitionDefect> {
    if partition.groups.len() as u64 != instance.m {
        return Err(PartitionDefect::GroupCount { expected: instance.m, actual: partition.groups.len() });
    }
    let mut seen = vec![false; instance.len()];
    for &i in partition.groups.iter().flatten() {
        match seen.get_mut(i) {
            None => return Err(PartitionDefect::OutOfRange(i)),
            Some(true) => return Err(PartitionDefect::Repeated(i)),
            Some(slot) => *slot = true,
        }
    }
    if let Some(i) = seen.iter().position(|&s| !s) {
        return Err(PartitionDefect::Uncovered(i));
    }
    for (group, members) in partition.groups.iter().enumerate() {
        let sum: u64 = members.iter().map(|&i| instance.a[i]).sum();
        if sum != instance.b {
            return Err(PartitionDefect::WrongSum { group, sum, target: instance.b });
        }
    }
    Ok(())
}

/// Backtracking over triples. Any group summing to `B` has exactly three
/// members because every value lies strictly between `B/4` and `B/2`.
pub fn solve_bruteforce(instance: &Instance) -> Result<Option<Partition>, InstanceError> {
    if instance.len() > BRUTE_FORCE_LIMIT {
        return Err(InstanceError::TooLarge(instance.len()));
    }
    let mut used = vec![false; instance.len()];
    let mut groups = Vec::new();
    Ok(search_triples(instance, &mut used, &mut groups).then(|| Partition::new(groups)))
}

fn search_triples(instance: &Instance, used: &mut [bool], groups: &mut Vec<Vec<usize>>) -> bool {
    let Some(first) = used.iter().position(|&u| !u) else {
        return true;
    };
    let n = used.len();
    used[first] = true;
    for j in first + 1..n {
        if used[j] {
            continue;
        }
        for k in j + 1..n {
            if used[k] || instance.a[first] + instance.a[j] + instance.a[k] != instance.b {
                continue;
            }
            used[j] = true;
            used[k] = true;
            groups.push(vec![first, j, k]);
            if search_triples(instance, used, groups) {
                return true;
            }
            groups.pop();
            used[j] = false;
            used[k] = false;
        }
    }
    used[first] = false;
    false
}

/// Every way to split `0..3m` into `m` unordered triples, each listed with
/// ascending members and groups ordered by their smallest member.
pub fn triple_partitions(m: usize) -> Vec<Partition> {
    fn go(used: &mut [bool], groups: &mut Vec<Vec<usize>>, out: &mut Vec<Partition>) {
        let Some(first) = used.iter().position(|&u| !u) else {
            out.push(Partition::new(groups.clone()));
            return;
        };
        used[first] = true;
        for j in first + 1..used.len() {
            if used[j] {
                continue;
            }
            used[j] = true;
            for k in j + 1..used.len() {
                if used[k] {
                    continue;
                }
                used[k] = true;
                groups.push(vec![first, j, k]);
                go(used, groups, out);
                groups.pop();
                used[k] = false;
            }
            used[j] = false;
        }
        used[first] = false;
    }
    let mut out = Vec::new();
    go(&mut vec![false; 3 * m], &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(m: i64, b: i64, a: &[i64]) -> Instance {
        Instance::new(m, b, a.to_vec()).unwrap()
    }

    #[test]
    fn valid_instances() {
        assert!(Instance::new(1, 30, vec![9, 10, 11]).is_ok());
        assert!(Instance::new(2, 60, vec![17, 17, 17, 23, 23, 23]).is_ok());
    }

    #[test]
    fn quarter_bound_violation() {
        let err = Instance::new(1, 30, vec![7, 11, 12]).unwrap_err();
        assert_eq!(err, InstanceError::Invalid(vec![Violation::AtMostQuarter { index: 0, value: 7 }]));
    }

    #[test]
    fn itemized_violations() {
        let InstanceError::Invalid(v) = Instance::new(2, 60, vec![15, 30, 20]).unwrap_err() else {
            panic!("expected violations");
        };
        assert!(v.contains(&Violation::WrongLength { expected: 6, actual: 3 }));
        assert!(v.contains(&Violation::SumMismatch { sum: 65, expected: 120 }));
        assert!(v.contains(&Violation::AtMostQuarter { index: 0, value: 15 }));
        assert!(v.contains(&Violation::AtLeastHalf { index: 1, value: 30 }));
        assert!(Instance::new(0, 30, vec![]).is_err());
        assert!(matches!(
            Instance::new(1, 0, vec![0, 0, 0]).unwrap_err(),
            InstanceError::Invalid(v) if v.contains(&Violation::NonPositive { index: 0, value: 0 })
        ));
    }

    #[test]
    fn normalization_scales_minimally() {
        let n = normalize_instance(&inst(1, 9, &[3, 3, 3]));
        assert_eq!(n.scale, 3);
        assert_eq!(n.base.values(), &[9, 9, 9]);
        assert_eq!(n.base.b(), 27);
        assert!(validate_instance(&n.base.to_raw()).is_ok());
        assert_eq!(n.original(), inst(1, 9, &[3, 3, 3]));
    }

    #[test]
    fn normalization_identity_and_sorting() {
        let n = normalize_instance(&inst(1, 30, &[9, 10, 11]));
        assert_eq!(n.scale, 1);
        assert_eq!(n.perm, vec![0, 1, 2]);

        let original = inst(1, 30, &[11, 9, 10]);
        let n = normalize_instance(&original);
        assert_eq!(n.base.values(), &[9, 10, 11]);
        assert_eq!(n.perm, vec![1, 2, 0]);
        assert_eq!(n.original(), original);
    }

    #[test]
    fn brute_force_examples() {
        let p = solve_bruteforce(&inst(1, 30, &[9, 10, 11])).unwrap().unwrap();
        assert_eq!(p.groups, vec![vec![0, 1, 2]]);
        let p = solve_bruteforce(&inst(2, 60, &[16, 19, 25, 17, 20, 23])).unwrap().unwrap();
        assert_eq!(p.groups, vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(solve_bruteforce(&inst(2, 60, &[17, 17, 17, 23, 23, 23])).unwrap(), None);
    }

    #[test]
    fn brute_force_size_guard() {
        let big = inst(6, 30, &[10; 18]);
        assert_eq!(solve_bruteforce(&big), Err(InstanceError::TooLarge(18)));
    }

    #[test]
    fn verification() {
        let d1 = inst(1, 30, &[9, 10, 11]);
        assert_eq!(verify_partition(&d1, &Partition::new(vec![vec![0, 1, 2]])), Ok(()));
        let i2 = inst(2, 60, &[16, 19, 25, 17, 20, 23]);
        assert_eq!(
            verify_partition(&i2, &Partition::new(vec![vec![0, 1, 3], vec![2, 4, 5]])),
            Err(PartitionDefect::WrongSum { group: 0, sum: 52, target: 60 })
        );
        assert_eq!(
            verify_partition(&i2, &Partition::new(vec![vec![0, 1, 2], vec![2, 4, 5]])),
            Err(PartitionDefect::Repeated(2))
        );
    }

    #[test]
    fn triple_partition_count() {
        assert_eq!(triple_partitions(1).len(), 1);
        assert_eq!(triple_partitions(2).len(), 10);
        assert_eq!(triple_partitions(3).len(), 280);
    }
}
