use std::collections::BTreeSet;

use serde::Serialize;

use super::{Part, ReductionArtifact};
use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditItem {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub items: Vec<AuditItem>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|item| item.passed)
    }

    pub fn item(&self, check: &str) -> Option<&AuditItem> {
        self.items.iter().find(|item| item.check == check)
    }

    pub fn failures(&self) -> Vec<String> {
        self.items.iter().filter(|item| !item.passed).map(|item| format!("{}: {}", item.check, item.detail)).collect()
    }

    fn push(&mut self, check: &str, passed: bool, detail: String) {
        self.items.push(AuditItem { check: check.to_string(), passed, detail });
    }
}

impl ReductionArtifact {
    /// Checks the graph against every closed form of the construction.
    pub fn audit(&self) -> AuditReport {
        let g = &self.graph;
        let m = self.m() as i64;
        let b = self.b() as i64;
        let k = self.k as i64;
        let top = self.a(self.x.len()) as usize;
        let mut report = AuditReport { items: Vec::new() };

        let sizes_ok = self.x.len() == 3 * self.m() && self.y.len() == top && self.z.len() as i64 == k - top as i64 + 1;
        report.push(
            "class_sizes",
            sizes_ok,
            format!("|X|={}, |Y|={}, |Z|={}", self.x.len(), self.y.len(), self.z.len()),
        );
        let yz = self.y.len() + self.z.len();
        report.push("y_union_z_size", yz as i64 == k + 1, format!("|Y ∪ Z| = {yz}, k + 1 = {}", k + 1));

        let mut mismatches = Vec::new();
        for v in g.vertices() {
            match self.expected_degree(v) {
                Ok(want) if want == g.degree(v) as u64 => {}
                Ok(want) => mismatches.push(format!("{} has degree {} (expected {want})", self.roles[v], g.degree(v))),
                Err(e) => mismatches.push(e.to_string()),
            }
        }
        report.push("degrees", mismatches.is_empty(), summarize(&mismatches, g.vertex_count()));

        let low = k - top as i64;
        let z_out: Vec<String> = self
            .z
            .iter()
            .filter(|&&v| !(low..=k).contains(&(g.degree(v) as i64)))
            .map(|&v| format!("{} has degree {}", self.roles[v], g.degree(v)))
            .collect();
        report.push("z_degree_range", z_out.is_empty(), summarize(&z_out, self.z.len()));

        let yz_set: BTreeSet<Vertex> = self.y.iter().chain(&self.z).copied().collect();
        let delta = g.induced_min_degree(&yz_set).expect("roles index the graph") as i64;
        let formula = k - b - 12 * m + 15;
        report.push(
            "min_degree_y_union_z",
            delta == formula,
            format!("δ(G[Y ∪ Z]) = {delta}, k - B - 12m + 15 = {formula}"),
        );
        report.push(
            "min_degree_bound",
            2 * delta >= k + 3,
            format!("2·{delta} = {} vs (k + 1) + 2 = {}", 2 * delta, k + 3),
        );
        let max_degree = g.max_degree() as i64;
        report.push("max_degree", max_degree == k, format!("Δ(G) = {max_degree}, k = {k}"));

        let nesting_break = (1..self.y.len()).find(|&i| {
            let next = self.y(i + 1);
            g.neighbors(self.y(i)).iter().filter(|&&w| self.roles[w].part == Part::Z).any(|&w| !g.has_edge(next, w))
        });
        report.push(
            "neighborhood_nesting",
            nesting_break.is_none(),
            match nesting_break {
                Some(i) => format!("N(y{i}) ∩ Z is not contained in N(y{}) ∩ Z", i + 1),
                None => "N(y_i) ∩ Z grows with i".into(),
            },
        );

        for (check, class) in [("x_clique", &self.x), ("y_clique", &self.y), ("z_clique", &self.z)] {
            report.push(check, g.is_clique(class), format!("{} vertices", class.len()));
        }

        let xz: Vec<String> = self
            .x
            .iter()
            .flat_map(|&u| g.neighbors(u).iter().map(move |&w| (u, w)))
            .filter(|&(_, w)| self.roles[w].part == Part::Z)
            .map(|(u, w)| format!("{}–{}", self.roles[u], self.roles[w]))
            .collect();
        report.push("no_x_z_edges", xz.is_empty(), summarize(&xz, 0));

        let mut pattern = Vec::new();
        for i in 1..=self.x.len() {
            let reach = self.a(i) as usize;
            for j in 1..=self.y.len() {
                if g.has_edge(self.x(i), self.y(j)) != (j <= reach) {
                    pattern.push(format!("x{i}–y{j}"));
                }
            }
        }
        for i in 1..=self.y.len() {
            let reach = self.y_reach(i).unwrap_or(0);
            for j in 1..=self.z.len() {
                if g.has_edge(self.y(i), self.z(j)) != (j <= reach) {
                    pattern.push(format!("y{i}–z{j}"));
                }
            }
        }
        report.push("adjacency_pattern", pattern.is_empty(), summarize(&pattern, 0));

        let expected_edges = self.expected_edge_count();
        report.push(
            "edge_count",
            g.edge_count() as u64 == expected_edges,
            format!("|E| = {}, expected {expected_edges}", g.edge_count()),
        );
        report
    }
}

fn summarize(problems: &[String], checked: usize) -> String {
    if problems.is_empty() {
        if checked > 0 {
            format!("all {checked} ok")
        } else {
            "ok".into()
        }
    } else {
        let shown: Vec<&str> = problems.iter().take(5).map(String::as_str).collect();
        let more = problems.len().saturating_sub(shown.len());
        if more > 0 {
            format!("{} (+{more} more)", shown.join(", "))
        } else {
            shown.join(", ")
        }
    }
}
