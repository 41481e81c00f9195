//! Text formats for graphs, trees, orders and reduction labels.
//!
//! Vertex ids are 1-based on disk and 0-based in memory.
//!
//! ```text
//! c comment
//! p edge <n> <m>
//! e <u> <v>          (m lines)
//!
//! p tree <n>
//! t <u> <v>          (n - 1 lines)
//!
//! c instance <path>
//! k <value>
//! v <vertex> <X|Y|Z> <index>
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Vertex};
use crate::reduction::{Part, Role};
use crate::tree::{SpanningTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header line")]
    MissingHeader,
    #[error("header announces {expected} entries, found {actual}")]
    CountMismatch { expected: usize, actual: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, fields)| !fields.is_empty() && fields[0] != "c")
}

fn number<T: std::str::FromStr>(line: usize, field: &str) -> Result<T, FormatError> {
    field.parse().map_err(|_| syntax(line, format!("'{field}' is not a valid number")))
}

fn vertex(line: usize, field: &str, n: usize) -> Result<Vertex, FormatError> {
    let id: usize = number(line, field)?;
    if id == 0 || id > n {
        return Err(syntax(line, format!("vertex {id} outside 1..={n}")));
    }
    Ok(id - 1)
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut header = None;
    let mut pairs = Vec::new();
    for (line, fields) in records(text) {
        match (fields[0], header) {
            ("p", None) => {
                if fields.len() != 4 || fields[1] != "edge" {
                    return Err(syntax(line, "expected 'p edge <n> <m>'"));
                }
                header = Some((number::<usize>(line, fields[2])?, number::<usize>(line, fields[3])?));
            }
            ("p", Some(_)) => return Err(syntax(line, "second header")),
            ("e", Some((n, _))) => {
                if fields.len() != 3 {
                    return Err(syntax(line, "expected 'e <u> <v>'"));
                }
                let (u, v) = (vertex(line, fields[1], n)?, vertex(line, fields[2], n)?);
                if u == v {
                    return Err(syntax(line, format!("self-loop at vertex {}", u + 1)));
                }
                pairs.push((u, v));
            }
            ("e", None) => return Err(FormatError::MissingHeader),
            (other, _) => return Err(syntax(line, format!("unknown record '{other}'"))),
        }
    }
    let (n, m) = header.ok_or(FormatError::MissingHeader)?;
    if pairs.len() != m {
        return Err(FormatError::CountMismatch { expected: m, actual: pairs.len() });
    }
    Ok(Graph::new(n, pairs)?)
}

pub fn write_graph(graph: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let _ = writeln!(out, "p edge {} {}", graph.vertex_count(), graph.edge_count());
    for &(u, v) in graph.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// Parses a tree file; every tree edge must be an edge of `host`.
pub fn parse_tree<'g>(text: &str, host: &'g Graph) -> Result<SpanningTree<'g>, FormatError> {
    let mut n = None;
    let mut pairs = Vec::new();
    for (line, fields) in records(text) {
        match (fields[0], n) {
            ("p", None) => {
                if fields.len() != 3 || fields[1] != "tree" {
                    return Err(syntax(line, "expected 'p tree <n>'"));
                }
                let count: usize = number(line, fields[2])?;
                if count != host.vertex_count() {
                    return Err(syntax(line, format!("tree has {count} vertices, graph has {}", host.vertex_count())));
                }
                n = Some(count);
            }
            ("p", Some(_)) => return Err(syntax(line, "second header")),
            ("t", Some(n)) => {
                if fields.len() != 3 {
                    return Err(syntax(line, "expected 't <u> <v>'"));
                }
                pairs.push((vertex(line, fields[1], n)?, vertex(line, fields[2], n)?));
            }
            ("t", None) => return Err(FormatError::MissingHeader),
            (other, _) => return Err(syntax(line, format!("unknown record '{other}'"))),
        }
    }
    let n = n.ok_or(FormatError::MissingHeader)?;
    if pairs.len() + 1 != n {
        return Err(FormatError::CountMismatch { expected: n.saturating_sub(1), actual: pairs.len() });
    }
    Ok(SpanningTree::new(host, pairs)?)
}

pub fn write_tree(tree: &SpanningTree<'_>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p tree {}", tree.host().vertex_count());
    for &(u, v) in tree.edges() {
        let _ = writeln!(out, "t {} {}", u + 1, v + 1);
    }
    out
}

/// One line of whitespace-separated 1-based vertex ids.
pub fn parse_order(text: &str, n: usize) -> Result<Vec<Vertex>, FormatError> {
    let mut order = Vec::new();
    for (line, fields) in records(text) {
        for field in fields {
            order.push(vertex(line, field, n)?);
        }
    }
    Ok(order)
}

pub fn write_order(order: &[Vertex]) -> String {
    let ids: Vec<String> = order.iter().map(|v| (v + 1).to_string()).collect();
    format!("{}\n", ids.join(" "))
}

/// Labels for a generated graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labels {
    pub k: u64,
    pub roles: Vec<(Vertex, Role)>,
}

pub fn parse_labels(text: &str) -> Result<Labels, FormatError> {
    let mut k = None;
    let mut roles = Vec::new();
    for (line, fields) in records(text) {
        match fields[0] {
            "k" if fields.len() == 2 => {
                if k.replace(number::<u64>(line, fields[1])?).is_some() {
                    return Err(syntax(line, "second 'k' line"));
                }
            }
            "v" if fields.len() == 4 => {
                let id: usize = number(line, fields[1])?;
                if id == 0 {
                    return Err(syntax(line, "vertex ids start at 1"));
                }
                let part = match fields[2] {
                    "X" => Part::X,
                    "Y" => Part::Y,
                    "Z" => Part::Z,
                    other => return Err(syntax(line, format!("unknown class '{other}'"))),
                };
                roles.push((id - 1, Role { part, index: number(line, fields[3])? }));
            }
            _ => return Err(syntax(line, "expected 'k <value>' or 'v <vertex> <X|Y|Z> <index>'")),
        }
    }
    Ok(Labels { k: k.ok_or(FormatError::MissingHeader)?, roles })
}

pub fn write_labels(labels: &Labels, instance_path: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(path) = instance_path {
        let _ = writeln!(out, "c instance {path}");
    }
    let _ = writeln!(out, "k {}", labels.k);
    for &(v, role) in &labels.roles {
        let _ = writeln!(out, "v {} {} {}", v + 1, role.part, role.index);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = Graph::cycle(5);
        let text = write_graph(&g, &["five-cycle".into()]);
        assert!(text.starts_with("c five-cycle\np edge 5 5\ne 1 2\n"));
        assert_eq!(parse_graph(&text), Ok(g));
    }

    #[test]
    fn graph_errors() {
        assert_eq!(parse_graph("e 1 2\n"), Err(FormatError::MissingHeader));
        assert_eq!(parse_graph("p edge 3 2\ne 1 2\n"), Err(FormatError::CountMismatch { expected: 2, actual: 1 }));
        assert!(matches!(parse_graph("p edge 3 1\ne 1 4\n"), Err(FormatError::Syntax { line: 2, .. })));
        assert!(matches!(parse_graph("p edge 3 1\ne 2 2\n"), Err(FormatError::Syntax { line: 2, .. })));
    }

    #[test]
    fn tree_must_live_in_graph() {
        let g = Graph::path(3);
        let t = parse_tree("p tree 3\nt 1 2\nt 2 3\n", &g).unwrap();
        assert_eq!(write_tree(&t), "p tree 3\nt 1 2\nt 2 3\n");
        assert_eq!(parse_tree("p tree 3\nt 1 2\nt 1 3\n", &g), Err(FormatError::Tree(TreeError::NotHostEdge(0, 2))));
    }

    #[test]
    fn orders_and_labels() {
        assert_eq!(parse_order("3 1 2\n", 3), Ok(vec![2, 0, 1]));
        assert_eq!(write_order(&[2, 0, 1]), "3 1 2\n");
        let labels = Labels { k: 90, roles: vec![(0, Role::x(1)), (1, Role::y(1)), (2, Role::z(1))] };
        let text = write_labels(&labels, Some("d1.json"));
        assert_eq!(text, "c instance d1.json\nk 90\nv 1 X 1\nv 2 Y 1\nv 3 Z 1\n");
        assert_eq!(parse_labels(&text), Ok(labels));
    }
}
