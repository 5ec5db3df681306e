//! Plain-text graph files.
//!
//! ```text
//! # comment
//! p <n> <m>
//! e <u> <v> <cost>      (m lines, 1-based vertex indices)
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::{WeightedMultigraph, MAX_TOTAL_COST};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("missing header line `p <n> <m>`")]
    MissingHeader,
    #[error("line {line}: malformed edge line: {reason}")]
    MalformedEdge { line: usize, reason: String },
    #[error("line {line}: vertex index out of range ({index} not in 1..={n})")]
    VertexOutOfRange { line: usize, index: i64, n: usize },
    #[error("line {line}: negative cost {cost}")]
    NegativeCost { line: usize, cost: String },
    #[error("line {line}: cost {cost} has more than {decimals} fractional digits")]
    CostPrecision { line: usize, cost: String, decimals: u32 },
    #[error("line {line}: total edge cost reaches 2^62")]
    CostOverflow { line: usize },
    #[error("line {line}: unexpected content after the declared {expected} edges")]
    TooManyEdges { line: usize, expected: usize },
    #[error("header declares {expected} edges but only {found} were given")]
    TooFewEdges { expected: usize, found: usize },
    #[error("graph is disconnected")]
    Disconnected,
}

/// Parses a graph file with integer costs.
pub fn load_graph(text: &str) -> Result<WeightedMultigraph, GraphError> {
    load_graph_scaled(text, 0)
}

/// Parses a graph file whose costs may carry up to `decimals` fractional
/// digits; every cost is multiplied by `10^decimals`.
pub fn load_graph_scaled(text: &str, decimals: u32) -> Result<WeightedMultigraph, GraphError> {
    let mut graph: Option<WeightedMultigraph> = None;
    let mut declared_edges = 0;
    let mut total: u64 = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let Some(g) = graph.as_mut() else {
            let (n, m) = parse_header(&fields).map_err(|reason| GraphError::MalformedHeader { line, reason })?;
            graph = Some(WeightedMultigraph::with_vertices(n));
            declared_edges = m;
            continue;
        };
        if fields[0] != "e" || fields.len() != 4 {
            return Err(GraphError::MalformedEdge { line, reason: "expected `e <u> <v> <cost>`".into() });
        }
        if g.edge_count() == declared_edges {
            return Err(GraphError::TooManyEdges { line, expected: declared_edges });
        }
        let n = g.vertex_count();
        let endpoint = |s: &str| -> Result<usize, GraphError> {
            let index: i64 = s
                .parse()
                .map_err(|_| GraphError::MalformedEdge { line, reason: format!("bad vertex index `{s}`") })?;
            if index < 1 || index as u64 > n as u64 {
                return Err(GraphError::VertexOutOfRange { line, index, n });
            }
            Ok(index as usize - 1)
        };
        let u = endpoint(fields[1])?;
        let v = endpoint(fields[2])?;
        let cost = parse_cost(fields[3], decimals, line)?;
        total = total.checked_add(cost).filter(|&t| t < MAX_TOTAL_COST).ok_or(GraphError::CostOverflow { line })?;
        g.add_edge(u, v, cost);
    }
    let g = graph.ok_or(GraphError::MissingHeader)?;
    if g.edge_count() != declared_edges {
        return Err(GraphError::TooFewEdges { expected: declared_edges, found: g.edge_count() });
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    Ok(g)
}

fn parse_header(fields: &[&str]) -> Result<(usize, usize), String> {
    match fields {
        ["p", n, m] => {
            let n = n.parse().map_err(|_| format!("bad vertex count `{n}`"))?;
            let m = m.parse().map_err(|_| format!("bad edge count `{m}`"))?;
            Ok((n, m))
        }
        _ => Err("expected `p <n> <m>`".into()),
    }
}

fn parse_cost(s: &str, decimals: u32, line: usize) -> Result<u64, GraphError> {
    let malformed = || GraphError::MalformedEdge { line, reason: format!("bad cost `{s}`") };
    if let Some(rest) = s.strip_prefix('-') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit() || b == b'.') {
            return Err(GraphError::NegativeCost { line, cost: s.to_string() });
        }
        return Err(malformed());
    }
    let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
    let digits_ok = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
    if int_part.is_empty() || !digits_ok(int_part) || !digits_ok(frac_part) || (s.contains('.') && frac_part.is_empty()) {
        return Err(malformed());
    }
    if frac_part.len() > decimals as usize {
        return Err(GraphError::CostPrecision { line, cost: s.to_string(), decimals });
    }
    let overflow = || GraphError::CostOverflow { line };
    let scale = 10u64.checked_pow(decimals).ok_or_else(overflow)?;
    let whole: u64 = int_part.parse().map_err(|_| overflow())?;
    let mut frac: u64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| overflow())? };
    for _ in frac_part.len()..decimals as usize {
        frac = frac.checked_mul(10).ok_or_else(overflow)?;
    }
    whole.checked_mul(scale).and_then(|w| w.checked_add(frac)).ok_or_else(overflow)
}

/// Serialises the live part of `g`, renumbering vertices `1..=n` in id order.
pub fn to_graph_file(g: &WeightedMultigraph) -> String {
    let mut index = vec![0; g.vertex_slots()];
    for (i, v) in g.vertices().enumerate() {
        index[v] = i + 1;
    }
    let mut out = String::new();
    writeln!(out, "p {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for e in g.edges() {
        writeln!(out, "e {} {} {}", index[e.u], index[e.v], e.cost).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::girth;

    const K4: &str = "# K4\np 4 6\ne 1 2 1\ne 1 3 1\ne 1 4 1\ne 2 3 1\ne 2 4 1\ne 3 4 1\n";

    #[test]
    fn loads_k4() {
        let g = load_graph(K4).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
        assert!(g.vertices().all(|v| g.degree(v) == 3));
        assert_eq!(g.forced_count(), 0);
    }

    #[test]
    fn loads_petersen() {
        let text = "p 10 15\n\
            e 1 2 1\ne 2 3 1\ne 3 4 1\ne 4 5 1\ne 5 1 1\n\
            e 1 6 1\ne 2 7 1\ne 3 8 1\ne 4 9 1\ne 5 10 1\n\
            e 6 8 1\ne 8 10 1\ne 10 7 1\ne 7 9 1\ne 9 6 1\n";
        let g = load_graph(text).unwrap();
        assert_eq!(g.edge_count(), 15);
        assert_eq!(girth(&g), Some(5));
    }

    #[test]
    fn rejects_out_of_range_vertex() {
        let text = "p 4 6\ne 1 5 1\n";
        let err = load_graph(text).unwrap_err();
        assert_eq!(err, GraphError::VertexOutOfRange { line: 2, index: 5, n: 4 });
        assert!(err.to_string().contains("vertex index out of range"));
    }

    #[test]
    fn reports_line_numbers() {
        assert!(matches!(load_graph("# c\n\np 2 x\n"), Err(GraphError::MalformedHeader { line: 3, .. })));
        assert!(matches!(load_graph("p 2 1\ne 1 2 -4\n"), Err(GraphError::NegativeCost { line: 2, .. })));
        assert!(matches!(load_graph("p 2 1\ne 1 2\n"), Err(GraphError::MalformedEdge { line: 2, .. })));
        assert!(matches!(load_graph("p 2 1\ne 1 2 1\ne 1 2 1\n"), Err(GraphError::TooManyEdges { line: 3, .. })));
        assert_eq!(load_graph("p 2 2\ne 1 2 1\n").unwrap_err(), GraphError::TooFewEdges { expected: 2, found: 1 });
        assert_eq!(load_graph("# nothing\n").unwrap_err(), GraphError::MissingHeader);
    }

    #[test]
    fn rejects_disconnected_input() {
        assert_eq!(load_graph("p 4 2\ne 1 2 1\ne 3 4 1\n").unwrap_err(), GraphError::Disconnected);
    }

    #[test]
    fn rejects_costs_reaching_two_to_the_62() {
        let half = 1u64 << 61;
        let text = format!("p 2 2\ne 1 2 {half}\ne 1 2 {half}\n");
        assert!(matches!(load_graph(&text), Err(GraphError::CostOverflow { line: 3 })));
    }

    #[test]
    fn scaled_costs() {
        let g = load_graph_scaled("p 2 2\ne 1 2 1.5\ne 1 2 2\n", 2).unwrap();
        assert_eq!(g.edges().map(|e| e.cost).collect::<Vec<_>>(), vec![150, 200]);
        assert!(matches!(
            load_graph_scaled("p 2 1\ne 1 2 1.255\n", 2),
            Err(GraphError::CostPrecision { line: 2, .. })
        ));
        assert!(matches!(load_graph("p 2 1\ne 1 2 1.5\n"), Err(GraphError::CostPrecision { .. })));
    }

    #[test]
    fn write_then_load_is_identity_on_structure() {
        let g = load_graph(K4).unwrap();
        let back = load_graph(&to_graph_file(&g)).unwrap();
        let pairs = |g: &WeightedMultigraph| g.edges().map(|e| (e.u, e.v, e.cost)).collect::<Vec<_>>();
        assert_eq!(pairs(&g), pairs(&back));
    }
}
