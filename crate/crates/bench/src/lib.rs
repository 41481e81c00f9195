//! Fixtures shared by the benchmarks.

use stc_core::{build_reduction, normalize_instance, Instance, Partition, ReductionArtifact};

pub fn d1() -> ReductionArtifact {
    reduction(1, 30, vec![9, 10, 11])
}

pub fn m2_yes() -> ReductionArtifact {
    reduction(2, 60, vec![16, 17, 19, 20, 23, 25])
}

pub fn m2_yes_instance() -> Instance {
    Instance::new(2, 60, vec![16, 17, 19, 20, 23, 25]).expect("valid instance")
}

pub fn reduction(m: i64, b: i64, a: Vec<i64>) -> ReductionArtifact {
    let instance = Instance::new(m, b, a).expect("valid instance");
    build_reduction(&normalize_instance(&instance)).expect("construction succeeds")
}

/// The solution of the m = 2 yes-instance over sorted positions.
pub fn m2_partition() -> Partition {
    Partition::new(vec![vec![0, 2, 5], vec![1, 3, 4]])
}
