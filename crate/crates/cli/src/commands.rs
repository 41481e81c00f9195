use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use stc_core::classify::{clique_cover_3, find_claw, is_proper_interval_ordering};
use stc_core::exact::DEFAULT_BUDGET;
use stc_core::io::{self, Labels};
use stc_core::reduction::{ExtractError, StarAssignment};
use stc_core::threepart::{triple_partitions, NormalizedInstance, RawInstance};
use stc_core::{
    build_reduction, normalize_instance, solve_bruteforce, stc_decide, stc_exact, validate_instance, verify_partition,
    CongestionReport, Edge, Graph, Instance, Partition, ReductionArtifact, ReductionError, SpanningTree, StcError,
};

use crate::report::{Inputs, Outcome};
use crate::{
    AuditArgs, CheckPioArgs, DecideArgs, EvalTreeArgs, ExtractArgs, GenArgs, RoundtripArgs, SolveArgs, ThreePartArgs,
    WitnessArgs,
};

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn load_instance(inputs: &mut Inputs, path: &Path) -> Result<Instance> {
    let text = inputs.read("instance", path)?;
    let raw: RawInstance =
        serde_json::from_str(&text).with_context(|| format!("{} is not instance JSON", path.display()))?;
    Ok(validate_instance(&raw)?)
}

fn load_graph(inputs: &mut Inputs, path: &Path) -> Result<Graph> {
    let text = inputs.read("graph", path)?;
    io::parse_graph(&text).with_context(|| format!("in {}", path.display()))
}

fn load_tree<'g>(inputs: &mut Inputs, path: &Path, graph: &'g Graph) -> Result<SpanningTree<'g>> {
    let text = inputs.read("tree", path)?;
    io::parse_tree(&text, graph).with_context(|| format!("in {}", path.display()))
}

fn load_partition(inputs: &mut Inputs, path: &Path) -> Result<Partition> {
    let text = inputs.read("partition", path)?;
    serde_json::from_str(&text).with_context(|| format!("{} is not partition JSON", path.display()))
}

fn load_artifact(
    inputs: &mut Inputs,
    graph: &Path,
    labels: &Path,
    instance: Option<&Path>,
) -> Result<ReductionArtifact> {
    let g = load_graph(inputs, graph)?;
    let text = inputs.read("labels", labels)?;
    let Labels { k, roles } = io::parse_labels(&text).with_context(|| format!("in {}", labels.display()))?;
    let normalized = match instance {
        Some(path) => Some(normalize_instance(&load_instance(inputs, path)?)),
        None => None,
    };
    Ok(ReductionArtifact::from_labeled_graph(g, &roles, k, normalized)?)
}

fn edge_json(e: Edge) -> Value {
    json!([e.0 + 1, e.1 + 1])
}

fn role_name(artifact: &ReductionArtifact, v: usize) -> String {
    artifact.role(v).map(|r| r.to_string()).unwrap_or_default()
}

fn congestion_json(report: &CongestionReport, artifact: Option<&ReductionArtifact>) -> Value {
    let describe = |e: Edge| match artifact {
        Some(r) => json!({ "edge": edge_json(e), "roles": [role_name(r, e.0), role_name(r, e.1)] }),
        None => json!({ "edge": edge_json(e) }),
    };
    let per_edge: Vec<Value> = report
        .per_edge
        .iter()
        .map(|(&e, &c)| {
            let mut item = describe(e);
            item["congestion"] = json!(c);
            item
        })
        .collect();
    json!({
        "max": report.max,
        "argmax_edge": report.argmax_edge.map(edge_json),
        "maximizers": report.maximizers().into_iter().map(describe).collect::<Vec<_>>(),
        "per_edge": per_edge,
    })
}

fn tree_edges_json(tree: &SpanningTree<'_>) -> Value {
    Value::Array(tree.edges().iter().map(|&e| edge_json(e)).collect())
}

fn normalized_json(norm: &NormalizedInstance) -> Value {
    json!({
        "m": norm.base.m(),
        "B": norm.base.b(),
        "a": norm.base.values(),
        "scale": norm.scale,
        "sorted_from": norm.perm,
    })
}

struct Classification {
    passed: bool,
    payload: Value,
}

fn classify(artifact: &ReductionArtifact) -> Result<Classification> {
    let g = artifact.graph();
    let ordering = is_proper_interval_ordering(g, &artifact.canonical_order())?;
    let claw = find_claw(g);
    let cover = clique_cover_3(g, [artifact.x_vertices(), artifact.y_vertices(), artifact.z_vertices()])?;
    Ok(Classification {
        passed: ordering.valid && claw.is_none() && cover,
        payload: json!({
            "proper_interval_ordering": ordering.valid,
            "ordering_violation": ordering.violation.map(|(u, v, w)| [u + 1, v + 1, w + 1]),
            "claw": claw.map(|c| json!({ "center": c.center + 1, "leaves": c.leaves.map(|l| l + 1) })),
            "clique_cover_xyz": cover,
        }),
    })
}

pub fn gen(args: &GenArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let instance = load_instance(inputs, &args.instance)?;
    let normalized = if args.no_normalize {
        NormalizedInstance::from_normalized(instance.clone())
            .ok_or_else(|| anyhow!("--no-normalize: values must be sorted ascending with a_1 >= 8m"))?
    } else {
        normalize_instance(&instance)
    };
    let artifact = match build_reduction(&normalized) {
        Ok(artifact) => artifact,
        Err(ReductionError::Invariant(detail)) => {
            return Ok(Outcome::check(false, json!({ "invariant_failures": detail })));
        }
        Err(e) => return Err(e.into()),
    };
    let g = artifact.graph();
    let comments = vec![
        format!("3-Partition reduction of {}", args.instance.display()),
        format!("m {} B {} k {} scale {}", artifact.m(), artifact.b(), artifact.k(), normalized.scale),
    ];
    write_file(&args.out, &io::write_graph(g, &comments))?;
    let labels = Labels { k: artifact.k(), roles: artifact.labels() };
    let instance_path = args.instance.display().to_string();
    write_file(&args.labels, &io::write_labels(&labels, Some(&instance_path)))?;
    Ok(Outcome::pass(json!({
        "k": artifact.k(),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "classes": {
            "X": artifact.x_vertices().len(),
            "Y": artifact.y_vertices().len(),
            "Z": artifact.z_vertices().len(),
        },
        "normalized": normalized_json(&normalized),
    })))
}

pub fn audit(args: &AuditArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let artifact = load_artifact(inputs, &args.graph, &args.labels, args.instance.as_deref())?;
    let report = artifact.audit();
    let classes = classify(&artifact)?;
    for failure in report.failures() {
        eprintln!("audit: {failure}");
    }
    Ok(Outcome::check(
        report.passed() && classes.passed,
        json!({
            "k": artifact.k(),
            "audit_passed": report.passed(),
            "items": report.items,
            "classify_passed": classes.passed,
            "classify": classes.payload,
        }),
    ))
}

pub fn witness(args: &WitnessArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let artifact = load_artifact(inputs, &args.graph, &args.labels, args.instance.as_deref())?;
    let partition = load_partition(inputs, &args.partition)?;
    let tree = match artifact.build_witness_tree(&partition) {
        Ok(tree) => tree,
        Err(e @ (ReductionError::Partition(_) | ReductionError::GroupSize { .. })) => {
            return Ok(Outcome::check(false, json!({ "partition_rejected": e.to_string() })));
        }
        Err(e) => return Err(e.into()),
    };
    write_file(&args.out, &io::write_tree(&tree))?;
    let report = tree.congestion();
    Ok(Outcome::check(
        report.max == artifact.k(),
        json!({
            "k": artifact.k(),
            "congestion_equals_k": report.max == artifact.k(),
            "congestion": congestion_json(&report, Some(&artifact)),
        }),
    ))
}

pub fn extract(args: &ExtractArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let artifact = load_artifact(inputs, &args.graph, &args.labels, args.instance.as_deref())?;
    let tree = load_tree(inputs, &args.tree, artifact.graph())?;
    match artifact.extract_partition(&tree) {
        Ok(partition) => {
            if let Some(out) = &args.out {
                write_file(out, &format!("{}\n", serde_json::to_string(&partition)?))?;
            }
            let original = artifact.instance().partition_to_original(&partition);
            Ok(Outcome::pass(json!({
                "k": artifact.k(),
                "partition": partition,
                "original_partition": original,
            })))
        }
        Err(e @ (ExtractError::HypothesisViolated { .. } | ExtractError::LemmaContradiction { .. })) => {
            Ok(Outcome::check(false, json!({ "k": artifact.k(), "extraction_failed": e.to_string() })))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn eval_tree(args: &EvalTreeArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let g = load_graph(inputs, &args.graph)?;
    let tree = load_tree(inputs, &args.tree, &g)?;
    Ok(Outcome::pass(congestion_json(&tree.congestion(), None)))
}

fn budget_failure(e: StcError) -> Result<Outcome> {
    match e {
        StcError::BudgetExceeded { count, budget } => Ok(Outcome::check(
            false,
            json!({ "budget_exceeded": { "spanning_trees": count.to_string(), "budget": budget } }),
        )),
        other => Err(other.into()),
    }
}

pub fn solve(args: &SolveArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let g = load_graph(inputs, &args.graph)?;
    let result = match stc_exact(&g, args.budget) {
        Ok(result) => result,
        Err(e) => return budget_failure(e),
    };
    if let Some(out) = &args.out {
        write_file(out, &io::write_tree(&result.witness))?;
    }
    Ok(Outcome::pass(json!({
        "stc": result.value,
        "witness": tree_edges_json(&result.witness),
        "trees_examined": result.trees_examined,
        "spanning_trees": result.tree_count.to_string(),
        "budget": args.budget.unwrap_or(DEFAULT_BUDGET),
    })))
}

pub fn decide(args: &DecideArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let g = load_graph(inputs, &args.graph)?;
    let decision = match stc_decide(&g, args.k, args.budget) {
        Ok(decision) => decision,
        Err(e) => return budget_failure(e),
    };
    if let (Some(out), Some(tree)) = (&args.out, &decision.witness) {
        write_file(out, &io::write_tree(tree))?;
    }
    Ok(Outcome::pass(json!({
        "k": args.k,
        "feasible": decision.feasible,
        "witness": decision.witness.as_ref().map(tree_edges_json),
        "trees_examined": decision.trees_examined,
        "spanning_trees": decision.tree_count.to_string(),
        "budget": args.budget.unwrap_or(DEFAULT_BUDGET),
    })))
}

pub fn check_pio(args: &CheckPioArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let g = load_graph(inputs, &args.graph)?;
    let text = inputs.read("order", &args.order)?;
    let order = io::parse_order(&text, g.vertex_count())?;
    let witness = is_proper_interval_ordering(&g, &order)?;
    Ok(Outcome::check(
        witness.valid,
        json!({
            "valid": witness.valid,
            "violation": witness.violation.map(|(u, v, w)| [u + 1, v + 1, w + 1]),
        }),
    ))
}

pub fn three_part(args: &ThreePartArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let instance = load_instance(inputs, &args.instance)?;
    let normalized = normalize_instance(&instance);
    let solution = solve_bruteforce(&instance)?;
    let sorted = solution.as_ref().map(|p| normalized.partition_from_original(p));
    let verified = solution.as_ref().map(|p| verify_partition(&instance, p).is_ok());
    if let (Some(out), Some(p)) = (&args.out, &sorted) {
        write_file(out, &format!("{}\n", serde_json::to_string(p)?))?;
    }
    Ok(Outcome::check(
        verified != Some(false),
        json!({
            "solvable": solution.is_some(),
            "partition": solution,
            "sorted_partition": sorted,
            "verified": verified,
        }),
    ))
}

struct Steps {
    items: Vec<Value>,
    passed: bool,
}

impl Steps {
    fn push(&mut self, step: &str, passed: bool, detail: Value) {
        if !passed {
            eprintln!("roundtrip: step {step} failed");
        }
        self.passed &= passed;
        self.items.push(json!({ "step": step, "passed": passed, "detail": detail }));
    }
}

pub fn roundtrip(args: &RoundtripArgs, inputs: &mut Inputs) -> Result<Outcome> {
    let instance = load_instance(inputs, &args.instance)?;
    let mut steps = Steps { items: Vec::new(), passed: true };
    let normalized = normalize_instance(&instance);
    steps.push("normalize", normalized.original() == instance, normalized_json(&normalized));

    let artifact = match build_reduction(&normalized) {
        Ok(artifact) => artifact,
        Err(ReductionError::Invariant(detail)) => {
            steps.push("gen", false, json!(detail));
            return Ok(Outcome::check(false, json!({ "steps": steps.items })));
        }
        Err(e) => return Err(e.into()),
    };
    let g = artifact.graph();
    steps.push("gen", true, json!({ "k": artifact.k(), "vertices": g.vertex_count(), "edges": g.edge_count() }));
    let audit = artifact.audit();
    steps.push("audit", audit.passed(), json!({ "checks": audit.items.len(), "failures": audit.failures() }));
    let classes = classify(&artifact)?;
    steps.push("classify", classes.passed, classes.payload);

    let solution = solve_bruteforce(artifact.base())?;
    let original_solution = solve_bruteforce(&instance)?;
    steps.push(
        "3part",
        solution.is_some() == original_solution.is_some(),
        json!({ "solvable": solution.is_some(), "partition": solution }),
    );

    let k = artifact.k();
    match &solution {
        Some(partition) => {
            let tree = artifact.build_witness_tree(partition)?;
            let report = tree.congestion();
            // every maximizer is an inner {z_1, y_i} edge or a leaf edge of degree k
            let z1 = artifact.z(1);
            let explained = report.maximizers().iter().all(|&(u, v)| {
                let inner =
                    (u == z1 && artifact.y_vertices().contains(&v)) || (v == z1 && artifact.y_vertices().contains(&u));
                let leaf = [u, v].iter().any(|&w| tree.degree(w) == 1 && g.degree(w) as u64 == k);
                inner || leaf
            });
            steps.push(
                "witness",
                report.max == k && explained,
                json!({
                    "max": report.max,
                    "maximizers": report.maximizers().into_iter().map(|e| {
                        json!({ "edge": edge_json(e), "roles": [role_name(&artifact, e.0), role_name(&artifact, e.1)] })
                    }).collect::<Vec<_>>(),
                }),
            );
            steps.push("eval-tree", report == tree.congestion_by_cuts(), json!({ "max": report.max }));
            match artifact.extract_partition(&tree) {
                Ok(extracted) => {
                    let back = normalized.partition_to_original(&extracted);
                    let valid = verify_partition(artifact.base(), &extracted).is_ok()
                        && verify_partition(&instance, &back).is_ok();
                    steps.push("extract", extracted.same_as(partition), json!({ "partition": extracted }));
                    steps.push("verify", valid, json!({ "original_partition": back }));
                }
                Err(e) => steps.push("extract", false, json!(e.to_string())),
            }
        }
        None => {
            let m = artifact.m();
            if m <= 4 {
                let mut worst_margin = i64::MAX;
                let mut agree = true;
                let mut all_heavy = true;
                let triples = triple_partitions(m);
                for p in &triples {
                    let (same, max) = check_family(&artifact, &StarAssignment::from_partition(p))?;
                    agree &= same;
                    all_heavy &= max > k;
                    worst_margin = worst_margin.min(max as i64 - k as i64);
                }
                steps.push(
                    "triple-assignments",
                    agree && all_heavy,
                    json!({
                        "assignments": triples.len(),
                        "closed_form_matches_direct": agree,
                        "all_exceed_k": all_heavy,
                        "smallest_excess": worst_margin,
                    }),
                );
            } else {
                eprintln!("roundtrip: skipping exhaustive triple assignments for m = {m}");
            }
        }
    }

    // random star families: closed form agrees with direct evaluation, and
    // congestion stays within k exactly when the assignment solves the instance
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut agree = true;
    let mut consistent = true;
    let mut within_k = 0usize;
    for _ in 0..args.samples {
        let assignment = artifact.random_star_assignment(&mut rng);
        let (same, max) = check_family(&artifact, &assignment)?;
        agree &= same;
        let solves = assignment_solves(&artifact, &assignment);
        consistent &= (max <= k) == solves;
        within_k += usize::from(max <= k);
    }
    steps.push(
        "star-families",
        agree && consistent,
        json!({
            "samples": args.samples,
            "seed": args.seed,
            "closed_form_matches_direct": agree,
            "within_k_iff_solution": consistent,
            "within_k": within_k,
        }),
    );

    Ok(Outcome::check(steps.passed, json!({ "steps": steps.items })))
}

/// Closed form against direct evaluation edge by edge; returns agreement and
/// the directly computed maximum.
fn check_family(artifact: &ReductionArtifact, assignment: &StarAssignment) -> Result<(bool, u64)> {
    let family = artifact.star_family_congestion(assignment)?;
    let (Some(tree), Some(closed)) = (&family.tree, &family.per_edge) else {
        bail!("star assignment does not place every x");
    };
    let direct = tree.congestion();
    Ok((&direct.per_edge == closed, direct.max))
}

fn assignment_solves(artifact: &ReductionArtifact, assignment: &StarAssignment) -> bool {
    let m = artifact.m();
    if assignment.targets.values().any(|&y| y > m) {
        return false;
    }
    let groups = assignment.groups();
    let partition = Partition::new(
        (1..=m).map(|i| groups.get(&i).map(|g| g.iter().map(|j| j - 1).collect()).unwrap_or_default()).collect(),
    );
    verify_partition(artifact.base(), &partition).is_ok()
}
