//! Exhaustive reference solvers for small graphs.

use thiserror::Error;

use crate::graph::{EdgeId, VertexId, WeightedMultigraph};

pub const HELD_KARP_LIMIT: usize = 20;
pub const COUNT_LIMIT: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{n} vertices exceed the oracle limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Minimum tour cost by dynamic programming over vertex subsets, or `None`
/// if the graph has no Hamiltonian cycle.
///
/// Parallel edges collapse to the cheapest one and self-loops are ignored,
/// except on one or two vertices where they form the only possible tours.
pub fn held_karp(g: &WeightedMultigraph) -> Result<Option<u64>, OracleError> {
    let verts: Vec<VertexId> = g.vertices().collect();
    let n = verts.len();
    if n > HELD_KARP_LIMIT {
        return Err(OracleError::TooLarge { n, limit: HELD_KARP_LIMIT });
    }
    match n {
        0 => return Ok(None),
        1 => return Ok(g.edges().filter(|e| e.is_loop()).map(|e| e.cost).min()),
        2 => {
            let mut costs: Vec<u64> = g.edges().filter(|e| !e.is_loop()).map(|e| e.cost).collect();
            costs.sort_unstable();
            return Ok((costs.len() >= 2).then(|| costs[0] + costs[1]));
        }
        _ => {}
    }
    let mut index = vec![usize::MAX; g.vertex_slots()];
    for (i, &v) in verts.iter().enumerate() {
        index[v] = i;
    }
    const INF: u64 = u64::MAX;
    let mut w = vec![INF; n * n];
    for e in g.edges().filter(|e| !e.is_loop()) {
        let (i, j) = (index[e.u], index[e.v]);
        w[i * n + j] = w[i * n + j].min(e.cost);
        w[j * n + i] = w[i * n + j];
    }
    // dp[mask][j]: cheapest path from vertex 0 through `mask` (over vertices
    // 1..n, bit j-1 for vertex j) ending at j.
    let m = n - 1;
    let full = (1usize << m) - 1;
    let mut dp = vec![INF; (1 << m) * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = w[j + 1];
    }
    for mask in 1..=full {
        for j in 0..m {
            let cur = dp[mask * m + j];
            if cur == INF || mask & (1 << j) == 0 {
                continue;
            }
            for k in 0..m {
                if mask & (1 << k) != 0 {
                    continue;
                }
                let step = w[(j + 1) * n + k + 1];
                if step == INF {
                    continue;
                }
                let slot = &mut dp[(mask | 1 << k) * m + k];
                *slot = (*slot).min(cur + step);
            }
        }
    }
    let best = (0..m)
        .filter(|&j| dp[full * m + j] != INF && w[(j + 1) * n] != INF)
        .map(|j| dp[full * m + j] + w[(j + 1) * n])
        .min();
    Ok(best)
}

/// Visits every Hamiltonian cycle once per traversal direction, as the list
/// of edge ids in walking order from the smallest vertex.
fn for_each_directed_cycle(g: &WeightedMultigraph, mut visit: impl FnMut(&[EdgeId])) {
    let verts: Vec<VertexId> = g.vertices().collect();
    let n = verts.len();
    let Some(&start) = verts.first() else { return };
    if n == 1 {
        for e in g.edges().filter(|e| e.is_loop()) {
            visit(&[e.id]);
        }
        return;
    }
    let mut seen = vec![false; g.vertex_slots()];
    seen[start] = true;
    let mut path = Vec::with_capacity(n);
    walk(g, start, start, n, &mut seen, &mut path, &mut visit);
}

fn walk(
    g: &WeightedMultigraph,
    start: VertexId,
    at: VertexId,
    n: usize,
    seen: &mut [bool],
    path: &mut Vec<EdgeId>,
    visit: &mut impl FnMut(&[EdgeId]),
) {
    for e in g.incident_edges(at) {
        if e.is_loop() || path.last() == Some(&e.id) {
            continue;
        }
        let next = e.other(at);
        if path.len() + 1 == n {
            if next == start {
                path.push(e.id);
                visit(path);
                path.pop();
            }
        } else if !seen[next] {
            seen[next] = true;
            path.push(e.id);
            walk(g, start, next, n, seen, path, visit);
            path.pop();
            seen[next] = false;
        }
    }
}

/// Number of Hamiltonian cycles, each counted once as an edge set.
pub fn count_hamiltonian_cycles(g: &WeightedMultigraph) -> Result<u64, OracleError> {
    let n = g.vertex_count();
    if n > COUNT_LIMIT {
        return Err(OracleError::TooLarge { n, limit: COUNT_LIMIT });
    }
    let mut directed = 0u64;
    for_each_directed_cycle(g, |_| directed += 1);
    Ok(if n == 1 { directed } else { directed / 2 })
}

/// Cheapest Hamiltonian cycle of `g` that contains every forced edge, with
/// its sorted edge ids.
pub fn optimal_completion(g: &WeightedMultigraph) -> Result<Option<(u64, Vec<EdgeId>)>, OracleError> {
    let n = g.vertex_count();
    if n > COUNT_LIMIT {
        return Err(OracleError::TooLarge { n, limit: COUNT_LIMIT });
    }
    let forced: Vec<EdgeId> = g.forced_edges().map(|e| e.id).collect();
    let mut best: Option<(u64, Vec<EdgeId>)> = None;
    for_each_directed_cycle(g, |cycle| {
        if !forced.iter().all(|f| cycle.contains(f)) {
            return;
        }
        let cost: u64 = cycle.iter().map(|&e| g.edge(e).unwrap().cost).sum();
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            let mut edges = cycle.to_vec();
            edges.sort_unstable();
            best = Some((cost, edges));
        }
    });
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::graph_from;

    fn k4() -> WeightedMultigraph {
        graph_from(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    fn c6() -> WeightedMultigraph {
        graph_from(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
    }

    fn petersen() -> WeightedMultigraph {
        let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend((0..5).map(|i| (i, i + 5)));
        edges.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
        graph_from(10, &edges)
    }

    #[test]
    fn small_graphs() {
        assert_eq!(held_karp(&k4()), Ok(Some(4)));
        assert_eq!(count_hamiltonian_cycles(&k4()), Ok(3));
        assert_eq!(held_karp(&c6()), Ok(Some(6)));
        assert_eq!(count_hamiltonian_cycles(&c6()), Ok(1));
        assert_eq!(held_karp(&petersen()), Ok(None));
        assert_eq!(count_hamiltonian_cycles(&petersen()), Ok(0));
    }

    #[test]
    fn parallel_edges() {
        let mut g = WeightedMultigraph::with_vertices(2);
        for c in [5, 1, 3] {
            g.add_edge(0, 1, c);
        }
        assert_eq!(held_karp(&g), Ok(Some(4)));
        assert_eq!(count_hamiltonian_cycles(&g), Ok(3));
        let mut tri = graph_from(3, &[(0, 1), (1, 2), (2, 0)]);
        tri.add_edge(0, 1, 0);
        assert_eq!(count_hamiltonian_cycles(&tri), Ok(2));
        assert_eq!(held_karp(&tri), Ok(Some(2)));
    }

    #[test]
    fn completion_respects_forced_edges() {
        // the tour 0-1-2-3 is cheap and avoids the diagonal 0-2
        let mut g = WeightedMultigraph::with_vertices(4);
        g.add_edge(0, 1, 1);
        let diag = g.add_edge(0, 2, 10);
        g.add_edge(0, 3, 1);
        g.add_edge(1, 2, 1);
        g.add_edge(1, 3, 10);
        g.add_edge(2, 3, 1);
        assert_eq!(optimal_completion(&g).unwrap().unwrap().0, 4);
        g.set_forced(diag);
        let (cost, edges) = optimal_completion(&g).unwrap().unwrap();
        assert_eq!(cost, 22);
        assert!(edges.contains(&diag));
    }

    #[test]
    fn limits() {
        let g = WeightedMultigraph::with_vertices(21);
        assert_eq!(held_karp(&g), Err(OracleError::TooLarge { n: 21, limit: 20 }));
        let g = WeightedMultigraph::with_vertices(25);
        assert_eq!(count_hamiltonian_cycles(&g), Err(OracleError::TooLarge { n: 25, limit: 24 }));
    }
}
