//! Weighted multigraphs with a per-edge forced flag.
//!
//! Vertex and edge ids are stable slot indices: removing an edge or a vertex
//! leaves a hole, and new edges always take the next unused id. Incidence
//! lists therefore stay sorted by edge id without any extra work, which keeps
//! every scan over the graph deterministic.

mod cycles;
mod io;

use std::collections::VecDeque;

use petgraph::unionfind::UnionFind;
use smallvec::SmallVec;

pub use cycles::{find_unforced_cycles, CycleDescriptor};
pub use io::{load_graph, load_graph_scaled, to_graph_file, GraphError};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Upper bound (exclusive) on the sum of all edge costs of a loaded graph.
pub const MAX_TOTAL_COST: u64 = 1 << 62;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub cost: u64,
    pub forced: bool,
}

impl Edge {
    /// The endpoint opposite to `x`. For a self-loop this is `x` itself.
    pub fn other(&self, x: VertexId) -> VertexId {
        debug_assert!(self.touches(x));
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }

    /// Endpoints as an ordered pair, smaller id first.
    pub fn key(&self) -> (VertexId, VertexId) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

type Incidence = SmallVec<[EdgeId; 4]>;

/// Mutable multigraph holding the current graph `G` together with the forced
/// set `F` (the edges whose `forced` flag is set).
#[derive(Clone, Debug, Default)]
pub struct WeightedMultigraph {
    edges: Vec<Option<Edge>>,
    incidence: Vec<Option<Incidence>>,
    live_vertices: usize,
    live_edges: usize,
    forced: usize,
}

impl WeightedMultigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// A graph with vertices `0..n` and no edges.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex();
        }
        g
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.incidence.push(Some(Incidence::new()));
        self.live_vertices += 1;
        self.incidence.len() - 1
    }

    /// Adds an unforced edge and returns its (fresh) id.
    ///
    /// Panics if either endpoint is not a live vertex.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId, cost: u64) -> EdgeId {
        assert!(self.contains_vertex(u) && self.contains_vertex(v), "edge endpoint {u}-{v} is not a vertex");
        let id = self.edges.len();
        self.edges.push(Some(Edge { id, u, v, cost, forced: false }));
        self.incidence[u].as_mut().unwrap().push(id);
        self.incidence[v].as_mut().unwrap().push(id);
        self.live_edges += 1;
        id
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Edge {
        let edge = self.edges[id].take().unwrap_or_else(|| panic!("edge {id} is not present"));
        for x in [edge.u, edge.v] {
            let list = self.incidence[x].as_mut().unwrap();
            let pos = list.iter().position(|&e| e == id).unwrap();
            list.remove(pos);
        }
        self.live_edges -= 1;
        if edge.forced {
            self.forced -= 1;
        }
        edge
    }

    /// Removes `v` together with every edge incident to it.
    pub fn remove_vertex(&mut self, v: VertexId) -> Vec<Edge> {
        let mut removed = Vec::new();
        while let Some(&e) = self.incident(v).first() {
            removed.push(self.remove_edge(e));
        }
        self.incidence[v] = None;
        self.live_vertices -= 1;
        removed
    }

    /// Marks `id` as forced. Returns `false` if it already was.
    pub fn set_forced(&mut self, id: EdgeId) -> bool {
        let edge = self.edges[id].as_mut().unwrap_or_else(|| panic!("edge {id} is not present"));
        if edge.forced {
            return false;
        }
        edge.forced = true;
        self.forced += 1;
        true
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(id).and_then(Option::as_ref)
    }

    pub fn contains_edge(&self, id: EdgeId) -> bool {
        self.edge(id).is_some()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        matches!(self.incidence.get(v), Some(Some(_)))
    }

    /// Live edges in id order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().flatten()
    }

    pub fn forced_edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges().filter(|e| e.forced)
    }

    /// Live vertices in id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.incidence.iter().enumerate().filter_map(|(v, inc)| inc.as_ref().map(|_| v))
    }

    /// Incident edge ids in increasing order; a self-loop is listed twice.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        self.incidence[v].as_deref().unwrap_or_else(|| panic!("vertex {v} is not present"))
    }

    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = &Edge> + '_ {
        self.incident(v).iter().map(move |&e| self.edges[e].as_ref().unwrap())
    }

    /// Degree with self-loops counted twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).len()
    }

    pub fn forced_degree(&self, v: VertexId) -> usize {
        self.incident_edges(v).filter(|e| e.forced).count()
    }

    pub fn vertex_count(&self) -> usize {
        self.live_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.live_edges
    }

    pub fn forced_count(&self) -> usize {
        self.forced
    }

    /// One past the largest vertex id ever allocated.
    pub fn vertex_slots(&self) -> usize {
        self.incidence.len()
    }

    /// The id the next added edge will receive.
    pub fn next_edge_id(&self) -> EdgeId {
        self.edges.len()
    }

    pub fn degree_sum(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).sum()
    }

    pub fn total_cost(&self) -> u64 {
        self.edges().map(|e| e.cost).sum()
    }

    pub fn forced_cost(&self) -> u64 {
        self.forced_edges().map(|e| e.cost).sum()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.vertices().all(|v| self.degree(v) == d)
    }

    pub fn is_cubic(&self) -> bool {
        self.is_regular(3)
    }

    /// No self-loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        self.vertices().all(|v| {
            let mut seen: SmallVec<[VertexId; 4]> = SmallVec::new();
            self.incident_edges(v).all(|e| {
                let w = e.other(v);
                if e.is_loop() || seen.contains(&w) {
                    return false;
                }
                seen.push(w);
                true
            })
        })
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices().next() else {
            return true;
        };
        let mut seen = vec![false; self.vertex_slots()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for e in self.incident_edges(u) {
                let w = e.other(u);
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == self.vertex_count()
    }

    /// First edge (lowest id) joining `u` and `v`, if any.
    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.incident_edges(u).find(|e| e.other(u) == v && (u != v || e.is_loop())).map(|e| e.id)
    }

    /// Union-find over vertex slots, joined along the edges accepted by `keep`.
    pub(crate) fn components_by(&self, keep: impl Fn(&Edge) -> bool) -> UnionFind<usize> {
        let mut uf = UnionFind::new(self.vertex_slots());
        for e in self.edges().filter(|e| keep(e)) {
            uf.union(e.u, e.v);
        }
        uf
    }
}

/// Length of a shortest cycle, or `None` for a forest.
///
/// A self-loop is a cycle of length 1 and a pair of parallel edges one of
/// length 2. Runs one breadth-first search per vertex.
pub fn girth(g: &WeightedMultigraph) -> Option<usize> {
    let slots = g.vertex_slots();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; slots];
    let mut parent_edge = vec![usize::MAX; slots];
    for root in g.vertices() {
        dist.fill(usize::MAX);
        parent_edge.fill(usize::MAX);
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                break;
            }
            for e in g.incident_edges(u) {
                if e.id == parent_edge[u] {
                    continue;
                }
                let w = e.other(u);
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent_edge[w] = e.id;
                    queue.push_back(w);
                } else {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}
