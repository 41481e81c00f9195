mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stc_core::classify::{clique_cover_3, find_claw, is_proper_interval_ordering};
use stc_core::reduction::{ExtractError, StarAssignment};
use stc_core::threepart::{triple_partitions, NormalizedInstance};
use stc_core::{build_reduction, normalize_instance, solve_bruteforce, verify_partition, Graph, Instance, Partition};

use common::{naive_max_congestion, random_instance, random_yes_instance, solvable_by_labelling};

/// The construction written out directly from its adjacency rules, with
/// `x`, `y`, `z` laid out consecutively.
fn oracle_graph(a: &[u64], m: usize, b: u64) -> Graph {
    let k = 3 * b as usize;
    let ny = *a.iter().max().unwrap() as usize;
    let nz = k + 1 - ny;
    let nx = 3 * m;
    let x = |i: usize| i - 1;
    let y = |i: usize| nx + i - 1;
    let z = |i: usize| nx + ny + i - 1;
    let mut pairs = Vec::new();
    for (len, at) in [(nx, 0), (ny, nx), (nz, nx + ny)] {
        for i in 0..len {
            for j in i + 1..len {
                pairs.push((at + i, at + j));
            }
        }
    }
    for i in 1..=nx {
        for j in 1..=ny {
            if j as u64 <= a[i - 1] {
                pairs.push((x(i), y(j)));
            }
        }
    }
    for i in 1..=ny {
        let gamma = a.iter().filter(|&&v| v >= i as u64).count();
        let reach = if i <= m { nz + 15 - b as usize - 12 * m } else { nz - gamma };
        for j in 1..=reach {
            pairs.push((y(i), z(j)));
        }
    }
    Graph::new(nx + ny + nz, pairs).unwrap()
}

fn instance_strategy() -> impl Strategy<Value = (Instance, bool)> {
    (1usize..=2, 20i64..=70, any::<u64>(), any::<bool>()).prop_map(|(m, b, seed, yes)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = if yes { random_yes_instance(&mut rng, m, b) } else { random_instance(&mut rng, m, b) };
        (inst, yes)
    })
}

#[test]
fn d1_numbers() {
    let inst = Instance::new(1, 30, vec![9, 10, 11]).unwrap();
    let norm = normalize_instance(&inst);
    assert_eq!(norm.scale, 1);
    let r = build_reduction(&norm).unwrap();
    let g = r.graph();
    assert_eq!(r.k(), 90);
    assert_eq!(g.vertex_count(), 3 + 11 + 80);
    // C(3,2) + C(11,2) + C(80,2) + (9 + 10 + 11) + 53 + sum over y_2..y_11 of (80 - gamma_i)
    assert_eq!(g.edge_count(), 3 + 55 + 3160 + 30 + 53 + (8 * 77 + 78 + 79));
    assert_eq!(g.edge_count(), 4074);
    assert_eq!(g, &oracle_graph(&[9, 10, 11], 1, 30));
    assert_eq!(g.degree(r.x(1)), 9 + 2);
    assert_eq!(g.degree(r.y(1)), 3 + 10 + 53);
    for i in 2..=11 {
        assert_eq!(g.degree(r.y(i)), 90);
    }
    assert_eq!(g.degree(r.z(1)), 79 + 11);
    assert_eq!(g.degree(r.z(80)), 79);
    let yz: BTreeSet<usize> = r.y_vertices().iter().chain(r.z_vertices()).copied().collect();
    assert_eq!(g.induced_min_degree(&yz).unwrap(), 63);
}

#[test]
fn m2_witness_and_no_instance() {
    let yes = Instance::new(2, 60, vec![16, 17, 19, 20, 23, 25]).unwrap();
    let r = build_reduction(&normalize_instance(&yes)).unwrap();
    assert_eq!(r.k(), 180);
    assert_eq!(r.graph().vertex_count(), 6 + 25 + 156);
    let p = solve_bruteforce(r.base()).unwrap().unwrap();
    assert!(p.same_as(&Partition::new(vec![vec![0, 2, 5], vec![1, 3, 4]])));
    let t = r.build_witness_tree(&p).unwrap();
    assert_eq!(t.congestion().max, 180);
    assert_eq!(naive_max_congestion(r.graph(), t.edges()), 180);

    let no = Instance::new(2, 60, vec![17, 17, 17, 23, 23, 23]).unwrap();
    assert!(!solvable_by_labelling(&no));
    let r = build_reduction(&normalize_instance(&no)).unwrap();
    for partition in triple_partitions(2) {
        let family = r.star_family_congestion(&StarAssignment::from_partition(&partition)).unwrap();
        assert!(family.max() > r.k());
        assert_eq!(family.tree.as_ref().unwrap().congestion().max, family.max());
    }
}

#[test]
fn extraction_rejects_heavy_trees() {
    let r = build_reduction(&normalize_instance(&Instance::new(1, 30, vec![9, 10, 11]).unwrap())).unwrap();
    let mut assignment = StarAssignment::default();
    for j in 1..=3 {
        assignment.targets.insert(j, 2);
    }
    let family = r.star_family_congestion(&assignment).unwrap();
    let tree = family.tree.unwrap();
    assert!(matches!(r.extract_partition(&tree), Err(ExtractError::HypothesisViolated { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn construction_matches_rules_and_passes_audit((inst, _) in instance_strategy()) {
        let norm = normalize_instance(&inst);
        let r = build_reduction(&norm).unwrap();
        prop_assert!(r.audit().passed());
        let base = r.base();
        prop_assert_eq!(r.graph(), &oracle_graph(base.values(), base.m() as usize, base.b()));
        prop_assert_eq!(r.graph().edge_count() as u64, r.expected_edge_count());
        for v in r.graph().vertices() {
            prop_assert_eq!(r.graph().degree(v) as u64, r.expected_degree(v).unwrap());
        }

        let order = r.canonical_order();
        prop_assert!(is_proper_interval_ordering(r.graph(), &order).unwrap().valid);
        let reversed: Vec<usize> = order.iter().rev().copied().collect();
        prop_assert!(is_proper_interval_ordering(r.graph(), &reversed).unwrap().valid);
        prop_assert!(find_claw(r.graph()).is_none());
        prop_assert!(clique_cover_3(r.graph(), [r.x_vertices(), r.y_vertices(), r.z_vertices()]).unwrap());
    }

    #[test]
    fn normalization_preserves_the_answer((inst, made_yes) in instance_strategy()) {
        let norm = normalize_instance(&inst);
        prop_assert_eq!(&norm.original(), &inst);
        prop_assert!(NormalizedInstance::from_normalized(norm.base.clone()).is_some());
        let answer = solvable_by_labelling(&inst);
        if made_yes {
            prop_assert!(answer);
        }
        prop_assert_eq!(solvable_by_labelling(&norm.base), answer);
        let solved = solve_bruteforce(&norm.base).unwrap();
        prop_assert_eq!(solved.is_some(), answer);
        if let Some(p) = solved {
            prop_assert!(verify_partition(&norm.base, &p).is_ok());
            let back = norm.partition_to_original(&p);
            prop_assert!(verify_partition(&inst, &back).is_ok());
            prop_assert!(norm.partition_from_original(&back).same_as(&p));
        }
    }

    #[test]
    fn verification_is_permutation_invariant(m in 1usize..=3, b in 20i64..=60, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_yes_instance(&mut rng, m, b);
        let p = solve_bruteforce(&inst).unwrap().unwrap();
        let n = inst.len();
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rand::Rng::gen_range(&mut rng, 0..=i));
        }
        // new position of old index i is perm[i]
        let mut a = vec![0i64; n];
        for (i, &v) in inst.values().iter().enumerate() {
            a[perm[i]] = v as i64;
        }
        let shuffled = Instance::new(m as i64, b, a).unwrap();
        let moved = Partition::new(p.groups.iter().map(|g| g.iter().map(|&i| perm[i]).collect()).collect());
        prop_assert!(verify_partition(&shuffled, &moved).is_ok());
    }

    #[test]
    fn star_family_closed_form_is_exact((inst, _) in instance_strategy(), seed in any::<u64>()) {
        let r = build_reduction(&normalize_instance(&inst)).unwrap();
        let g = r.graph();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..4 {
            let assignment = r.random_star_assignment(&mut rng);
            let family = r.star_family_congestion(&assignment).unwrap();
            let tree = family.tree.as_ref().unwrap();
            let direct = tree.congestion();
            prop_assert_eq!(family.per_edge.as_ref().unwrap(), &direct.per_edge);
            prop_assert_eq!(family.max(), direct.max);

            // deg(y_i) + Σ deg(x_j) - 2 * C(|X_i| + 1, 2) for the clique {y_i} ∪ X_i
            for (i, members) in assignment.groups() {
                let s = members.len() as u64;
                let sum: u64 = members.iter().map(|&j| g.degree(r.x(j)) as u64).sum();
                let want = g.degree(r.y(i)) as u64 + sum - s * (s + 1);
                prop_assert_eq!(family.y_edges[&i], want);
            }

            // congestion <= k exactly when every x sits below y_1..y_m in
            // groups that solve the instance
            let low = assignment.targets.values().all(|&y| y <= r.m());
            let groups: Vec<Vec<usize>> = (1..=r.m())
                .map(|i| assignment.groups().get(&i).map(|g| g.iter().map(|j| j - 1).collect()).unwrap_or_default())
                .collect();
            let solves = low && verify_partition(r.base(), &Partition::new(groups)).is_ok();
            prop_assert_eq!(direct.max <= r.k(), solves);
        }
    }

    #[test]
    fn witness_round_trip(m in 1usize..=2, b in 20i64..=60, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_yes_instance(&mut rng, m, b);
        let norm = normalize_instance(&inst);
        let r = build_reduction(&norm).unwrap();
        let p = solve_bruteforce(r.base()).unwrap().unwrap();
        let tree = r.build_witness_tree(&p).unwrap();
        prop_assert_eq!(tree.congestion().max, r.k());
        let recovered = r.extract_partition(&tree).unwrap();
        prop_assert!(recovered.same_as(&p));
        prop_assert!(verify_partition(&inst, &norm.partition_to_original(&recovered)).is_ok());
    }
}

#[test]
fn fault_injection_is_caught() {
    let r = build_reduction(&normalize_instance(&Instance::new(1, 30, vec![9, 10, 11]).unwrap())).unwrap();
    let broken = r.with_edge_removed(r.y(1), r.z(1)).unwrap();
    assert!(!broken.audit().passed());
    let extra = r.with_edge_added(r.x(1), r.z(1)).unwrap();
    let failures: BTreeSet<String> = extra.audit().failures().into_iter().collect();
    assert!(!failures.is_empty());
    assert!(
        find_claw(extra.graph()).is_some()
            || !is_proper_interval_ordering(extra.graph(), &r.canonical_order()).unwrap().valid
    );
}
