use smallvec::SmallVec;

use super::{EdgeId, VertexId, WeightedMultigraph};

/// A simple cycle given as parallel vertex and edge lists: `edges[i]` joins
/// `vertices[i]` and `vertices[(i + 1) % len]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDescriptor {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    /// Forced non-cycle edges at cycle vertices, counted once per cycle
    /// vertex they touch.
    pub attached_selected: usize,
}

impl CycleDescriptor {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Sorted edge ids; the enumeration order of [`find_unforced_cycles`].
    pub fn key(&self) -> Vec<EdgeId> {
        let mut key = self.edges.clone();
        key.sort_unstable();
        key
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    /// True if no cycle edge is forced in `g`.
    pub fn is_live(&self, g: &WeightedMultigraph) -> bool {
        self.edges.iter().all(|&e| !g.edge(e).unwrap().forced)
    }

    /// Non-cycle edges incident to `v`, in id order.
    pub fn attached_at<'g>(&self, g: &'g WeightedMultigraph, v: VertexId) -> impl Iterator<Item = EdgeId> + 'g {
        let cycle: SmallVec<[EdgeId; 6]> = self.edges.iter().copied().collect();
        g.incident(v).iter().copied().filter(move |e| !cycle.contains(e))
    }

    /// Whether `v` carries a forced non-cycle edge.
    pub fn has_forced_attachment(&self, g: &WeightedMultigraph, v: VertexId) -> bool {
        self.attached_at(g, v).any(|e| g.edge(e).unwrap().forced)
    }
}

/// All simple cycles with `length` edges, sorted by [`CycleDescriptor::key`].
///
/// With `live_only` set, cycles containing a forced edge are skipped. Each
/// cycle is reported once: it is grown from its smallest edge id, walked from
/// that edge's `u` end.
pub fn find_unforced_cycles(g: &WeightedMultigraph, length: usize, live_only: bool) -> Vec<CycleDescriptor> {
    if length == 0 {
        return Vec::new();
    }
    let mut found = Vec::new();
    let usable = |id: EdgeId| !live_only || !g.edge(id).unwrap().forced;
    for first in g.edges() {
        if !usable(first.id) {
            continue;
        }
        if length == 1 {
            if first.is_loop() {
                found.push(vec![(first.u, first.id)]);
            }
            continue;
        }
        if first.is_loop() {
            continue;
        }
        let mut path = vec![(first.u, first.id)];
        extend(g, &usable, first.id, first.u, first.v, length, &mut path, &mut found);
    }
    let mut cycles: Vec<CycleDescriptor> = found
        .into_iter()
        .map(|walk| {
            let (vertices, edges): (Vec<_>, Vec<_>) = walk.into_iter().unzip();
            let mut c = CycleDescriptor { vertices, edges, attached_selected: 0 };
            c.attached_selected = c.vertices.iter().filter(|&&v| c.has_forced_attachment(g, v)).count();
            c
        })
        .collect();
    cycles.sort_by_cached_key(CycleDescriptor::key);
    cycles
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &WeightedMultigraph,
    usable: &impl Fn(EdgeId) -> bool,
    min_edge: EdgeId,
    start: VertexId,
    at: VertexId,
    length: usize,
    path: &mut Vec<(VertexId, EdgeId)>,
    found: &mut Vec<Vec<(VertexId, EdgeId)>>,
) {
    for e in g.incident_edges(at) {
        if e.id <= min_edge || e.is_loop() || !usable(e.id) {
            continue;
        }
        let next = e.other(at);
        if path.len() + 1 == length {
            if next == start {
                path.push((at, e.id));
                found.push(path.clone());
                path.pop();
            }
        } else if next != start && next != at && path.iter().all(|&(v, _)| v != next) {
            path.push((at, e.id));
            extend(g, usable, min_edge, start, next, length, path, found);
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::graph_from;

    fn assert_well_formed(g: &WeightedMultigraph, c: &CycleDescriptor) {
        let k = c.len();
        for i in 0..k {
            let e = g.edge(c.edges[i]).unwrap();
            assert!(e.touches(c.vertices[i]) && e.touches(c.vertices[(i + 1) % k]));
        }
    }

    #[test]
    fn k4_has_three_four_cycles() {
        let g = graph_from(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let cycles = find_unforced_cycles(&g, 4, true);
        assert_eq!(cycles.len(), 3);
        for c in &cycles {
            assert_well_formed(&g, c);
            assert_eq!(c.attached_selected, 0);
        }
        assert_eq!(find_unforced_cycles(&g, 3, true).len(), 4);
    }

    #[test]
    fn c6_with_forced_pendants() {
        let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        edges.extend((0..6).map(|i| (i, i + 6)));
        let mut g = graph_from(12, &edges);
        for id in 6..12 {
            g.set_forced(id);
        }
        let cycles = find_unforced_cycles(&g, 6, true);
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].attached_selected, 6);
        assert_eq!(cycles[0].key(), vec![0, 1, 2, 3, 4, 5]);
        assert_well_formed(&g, &cycles[0]);
    }

    #[test]
    fn forced_edges_are_skipped_only_when_live_only() {
        let mut g = graph_from(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        g.set_forced(2);
        assert!(find_unforced_cycles(&g, 4, true).is_empty());
        assert_eq!(find_unforced_cycles(&g, 4, false).len(), 1);
    }

    #[test]
    fn short_cycles_in_multigraphs() {
        let g = graph_from(2, &[(0, 1), (0, 1), (0, 0), (1, 1)]);
        assert_eq!(find_unforced_cycles(&g, 1, true).len(), 2);
        assert_eq!(find_unforced_cycles(&g, 2, true).len(), 1);
    }
}
