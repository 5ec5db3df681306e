//! The simplification rules 1(a)-(j), applied to `(G, F)` until a fixpoint.

use std::fmt;

use crate::graph::{find_unforced_cycles, CycleDescriptor, Edge, EdgeId, VertexId, WeightedMultigraph};

/// How a derived edge was built from earlier edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivation {
    /// Forced path `first`, `second` replaced by one edge.
    Merge { first: EdgeId, second: EdgeId },
    /// External triangle edge `base` re-attached to a supervertex, carrying
    /// the triangle edge `opposite` with it.
    Lift { base: EdgeId, opposite: EdgeId },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rewrite {
    EdgeRemoved(EdgeId),
    ForcedPathMerge { new_edge: EdgeId, replaced: (EdgeId, EdgeId), removed_vertex: VertexId, dropped: Option<EdgeId> },
    /// `lifted` holds `(old edge, new edge, cost delta)` per external edge.
    TriangleContraction { super_vertex: VertexId, triangle: [VertexId; 3], lifted: Vec<(EdgeId, EdgeId, u64)> },
    ForcedFlagSet(EdgeId),
}

/// Position in a [`RewriteLog`] to roll back to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LogMark {
    records: usize,
    derivations: usize,
}

/// Path-scoped history of rewrites. Edge ids below `input_edges` are edges of
/// the input graph; id `input_edges + i` is the `i`-th derived edge.
#[derive(Clone, Debug)]
pub struct RewriteLog {
    input_edges: usize,
    derivations: Vec<Derivation>,
    records: Vec<Rewrite>,
}

impl RewriteLog {
    pub fn new(input: &WeightedMultigraph) -> Self {
        RewriteLog { input_edges: input.next_edge_id(), derivations: Vec::new(), records: Vec::new() }
    }

    pub fn records(&self) -> &[Rewrite] {
        &self.records
    }

    pub fn input_edges(&self) -> usize {
        self.input_edges
    }

    pub fn checkpoint(&self) -> LogMark {
        LogMark { records: self.records.len(), derivations: self.derivations.len() }
    }

    pub fn rollback(&mut self, mark: LogMark) {
        self.records.truncate(mark.records);
        self.derivations.truncate(mark.derivations);
    }

    pub fn derivation(&self, edge: EdgeId) -> Option<Derivation> {
        edge.checked_sub(self.input_edges).map(|i| self.derivations[i])
    }

    /// Input-graph edges represented by `edge`, sorted.
    pub fn expand(&self, edge: EdgeId) -> Vec<EdgeId> {
        self.expand_all([edge])
    }

    pub fn expand_all(&self, edges: impl IntoIterator<Item = EdgeId>) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut stack: Vec<EdgeId> = edges.into_iter().collect();
        while let Some(e) = stack.pop() {
            match self.derivation(e) {
                None => out.push(e),
                Some(Derivation::Merge { first, second }) => stack.extend([first, second]),
                Some(Derivation::Lift { base, opposite }) => stack.extend([base, opposite]),
            }
        }
        out.sort_unstable();
        out
    }

    pub fn record_removal(&mut self, edge: EdgeId) {
        self.records.push(Rewrite::EdgeRemoved(edge));
    }

    pub fn record_forced(&mut self, edge: EdgeId) {
        self.records.push(Rewrite::ForcedFlagSet(edge));
    }

    fn derive(&mut self, g: &WeightedMultigraph, d: Derivation) {
        assert_eq!(
            g.next_edge_id(),
            self.input_edges + self.derivations.len(),
            "rewrite log is out of step with the graph"
        );
        self.derivations.push(d);
    }
}

/// One rule firing, with the ids it touched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AppliedRule {
    LowDegree { vertex: VertexId },
    HamiltonianCycle { cost: u64 },
    ForcedCycle,
    ForcedDegreeThree { vertex: VertexId },
    ParallelRemoved { removed: EdgeId, kept: EdgeId },
    LoopRemoved { edge: EdgeId },
    DegreeTwoForced { vertex: VertexId },
    ForcedPathMerged { vertex: VertexId, new_edge: EdgeId },
    /// `parallel` is set when two lifted edges end up parallel.
    TriangleContracted { triangle: [VertexId; 3], super_vertex: VertexId, parallel: bool },
    FourCycleForced { cycle: Vec<EdgeId> },
}

impl AppliedRule {
    pub fn code(&self) -> &'static str {
        match self {
            AppliedRule::LowDegree { .. } => "1a",
            AppliedRule::HamiltonianCycle { .. } => "1b",
            AppliedRule::ForcedCycle => "1c",
            AppliedRule::ForcedDegreeThree { .. } => "1d",
            AppliedRule::ParallelRemoved { .. } => "1e",
            AppliedRule::LoopRemoved { .. } => "1f",
            AppliedRule::DegreeTwoForced { .. } => "1g",
            AppliedRule::ForcedPathMerged { .. } => "1h",
            AppliedRule::TriangleContracted { .. } => "1i",
            AppliedRule::FourCycleForced { .. } => "1j",
        }
    }
}

impl fmt::Display for AppliedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let code = self.code();
        match self {
            AppliedRule::LowDegree { vertex } | AppliedRule::ForcedDegreeThree { vertex } => {
                write!(f, "{code}(v{vertex})")
            }
            AppliedRule::HamiltonianCycle { cost } => write!(f, "{code}(cost {cost})"),
            AppliedRule::ForcedCycle => write!(f, "{code}"),
            AppliedRule::ParallelRemoved { removed, kept } => write!(f, "{code}(-e{removed},e{kept})"),
            AppliedRule::LoopRemoved { edge } => write!(f, "{code}(-e{edge})"),
            AppliedRule::DegreeTwoForced { vertex } => write!(f, "{code}(v{vertex})"),
            AppliedRule::ForcedPathMerged { vertex, new_edge } => write!(f, "{code}(v{vertex},+e{new_edge})"),
            AppliedRule::TriangleContracted { triangle: [x, y, z], super_vertex, parallel } => {
                write!(f, "{code}(v{x},v{y},v{z}->v{super_vertex}")?;
                if *parallel {
                    write!(f, ",parallel")?;
                }
                write!(f, ")")
            }
            AppliedRule::FourCycleForced { cycle } => {
                let ids: Vec<String> = cycle.iter().map(|e| format!("e{e}")).collect();
                write!(f, "{code}({})", ids.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pruned,
    /// Cost and tour are in input-graph terms.
    Solved { cost: u64, tour: Vec<EdgeId> },
    InProgress,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplifyOutcome {
    pub status: Status,
    pub applied: Vec<AppliedRule>,
}

/// Result of a single rule application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Pruned(AppliedRule),
    Solved { rule: AppliedRule, cost: u64, tour: Vec<EdgeId> },
    Rewrote(AppliedRule),
    Fixpoint,
}

/// Applies rules until one returns or none applies.
pub fn simplify(g: &mut WeightedMultigraph, log: &mut RewriteLog) -> SimplifyOutcome {
    let mut applied = Vec::new();
    loop {
        match apply_next_rule(g, log) {
            Step::Rewrote(rule) => applied.push(rule),
            Step::Pruned(rule) => {
                applied.push(rule);
                return SimplifyOutcome { status: Status::Pruned, applied };
            }
            Step::Solved { rule, cost, tour } => {
                applied.push(rule);
                return SimplifyOutcome { status: Status::Solved { cost, tour }, applied };
            }
            Step::Fixpoint => {
                debug_assert!(is_reduced(g));
                return SimplifyOutcome { status: Status::InProgress, applied };
            }
        }
    }
}

/// Applies the first rule of 1(a)-(j) that fires.
pub fn apply_next_rule(g: &mut WeightedMultigraph, log: &mut RewriteLog) -> Step {
    if let Some(vertex) = g.vertices().find(|&v| g.degree(v) <= 1) {
        return Step::Pruned(AppliedRule::LowDegree { vertex });
    }
    if forced_is_hamiltonian(g) {
        let tour = log.expand_all(g.forced_edges().map(|e| e.id));
        let cost = g.forced_edges().try_fold(0u64, |acc, e| acc.checked_add(e.cost)).expect("cost overflow");
        return Step::Solved { rule: AppliedRule::HamiltonianCycle { cost }, cost, tour };
    }
    if forced_has_cycle(g) {
        return Step::Pruned(AppliedRule::ForcedCycle);
    }
    if let Some(vertex) = g.vertices().find(|&v| g.forced_degree(v) >= 3) {
        return Step::Pruned(AppliedRule::ForcedDegreeThree { vertex });
    }
    if let Some((removed, kept)) = removable_parallel(g) {
        g.remove_edge(removed);
        log.record_removal(removed);
        return Step::Rewrote(AppliedRule::ParallelRemoved { removed, kept });
    }
    if g.vertex_count() > 1 {
        let unforced_loop = g.edges().find(|e| e.is_loop() && !e.forced).map(|e| e.id);
        if let Some(edge) = unforced_loop {
            g.remove_edge(edge);
            log.record_removal(edge);
            return Step::Rewrote(AppliedRule::LoopRemoved { edge });
        }
    }
    let degree_two = g.vertices().find(|&v| g.degree(v) == 2 && g.forced_degree(v) < 2);
    if let Some(vertex) = degree_two {
        let ids: Vec<EdgeId> = g.incident(vertex).to_vec();
        for id in ids {
            if g.set_forced(id) {
                log.record_forced(id);
            }
        }
        return Step::Rewrote(AppliedRule::DegreeTwoForced { vertex });
    }
    let forced_two = g.vertices().find(|&v| g.forced_degree(v) == 2);
    if let Some(vertex) = forced_two {
        let new_edge = merge_forced_path(g, log, vertex);
        return Step::Rewrote(AppliedRule::ForcedPathMerged { vertex, new_edge });
    }
    if let Some(triangle) = first_triangle(g) {
        let (super_vertex, parallel) = contract_triangle(g, log, triangle);
        return Step::Rewrote(AppliedRule::TriangleContracted { triangle, super_vertex, parallel });
    }
    for cycle in find_unforced_cycles(g, 4, true) {
        if forcing_4cycle_applies(g, &cycle) && apply_4cycle_forcing(g, log, &cycle) {
            return Step::Rewrote(AppliedRule::FourCycleForced { cycle: cycle.edges });
        }
    }
    Step::Fixpoint
}

fn forced_is_hamiltonian(g: &WeightedMultigraph) -> bool {
    let n = g.vertex_count();
    if n == 0 || g.forced_count() != n || g.vertices().any(|v| g.forced_degree(v) != 2) {
        return false;
    }
    let uf = g.components_by(|e| e.forced);
    let mut roots = g.vertices().map(|v| uf.find(v));
    let first = roots.next().unwrap();
    roots.all(|r| r == first)
}

fn forced_has_cycle(g: &WeightedMultigraph) -> bool {
    let mut uf = petgraph::unionfind::UnionFind::new(g.vertex_slots());
    g.forced_edges().any(|e| !uf.union(e.u, e.v))
}

/// The edge rule 1(e) removes, with the parallel edge that stays.
fn removable_parallel(g: &WeightedMultigraph) -> Option<(EdgeId, EdgeId)> {
    let two_vertices = g.vertex_count() <= 2;
    for v in g.vertices() {
        let inc: Vec<&Edge> = g.incident_edges(v).filter(|e| !e.is_loop() && e.other(v) > v).collect();
        for (i, a) in inc.iter().enumerate() {
            for b in &inc[i + 1..] {
                if a.other(v) != b.other(v) || (a.forced && b.forced) {
                    continue;
                }
                // On two vertices a pair of parallel edges is itself a tour,
                // so only the dearest unforced edge of a larger bundle is surplus.
                if two_vertices {
                    let bundle: Vec<&&Edge> = inc.iter().filter(|e| e.other(v) == a.other(v)).collect();
                    if bundle.len() < 3 {
                        continue;
                    }
                    let drop = bundle.iter().filter(|e| !e.forced).max_by_key(|e| (e.cost, e.id))?;
                    let keep = bundle.iter().find(|e| e.id != drop.id)?;
                    return Some((drop.id, keep.id));
                }
                let (drop, keep) = match (a.forced, b.forced) {
                    (true, _) => (b, a),
                    (_, true) => (a, b),
                    _ if (a.cost, a.id) > (b.cost, b.id) => (a, b),
                    _ => (b, a),
                };
                return Some((drop.id, keep.id));
            }
        }
    }
    None
}

/// Rule 1(h): replaces the forced path `u - v - w` by a forced edge `uw`.
/// Returns the new edge id.
pub fn merge_forced_path(g: &mut WeightedMultigraph, log: &mut RewriteLog, v: VertexId) -> EdgeId {
    let forced: Vec<EdgeId> = g.incident_edges(v).filter(|e| e.forced).map(|e| e.id).collect();
    assert_eq!(forced.len(), 2, "vertex {v} does not have exactly two forced edges");
    let (first, second) = (forced[0], forced[1]);
    let u = g.edge(first).unwrap().other(v);
    let w = g.edge(second).unwrap().other(v);
    let cost = g.edge(first).unwrap().cost.checked_add(g.edge(second).unwrap().cost).expect("cost overflow");
    let removed = g.remove_vertex(v);
    let dropped = removed.iter().find(|e| !e.forced).map(|e| e.id);
    log.derive(g, Derivation::Merge { first, second });
    let new_edge = g.add_edge(u, w, cost);
    g.set_forced(new_edge);
    log.records.push(Rewrite::ForcedPathMerge { new_edge, replaced: (first, second), removed_vertex: v, dropped });
    new_edge
}

/// Lexicographically smallest triangle `x < y < z`.
fn first_triangle(g: &WeightedMultigraph) -> Option<[VertexId; 3]> {
    for x in g.vertices() {
        let mut nbrs: Vec<VertexId> = g.incident_edges(x).map(|e| e.other(x)).filter(|&y| y > x).collect();
        nbrs.sort_unstable();
        nbrs.dedup();
        for (i, &y) in nbrs.iter().enumerate() {
            for &z in &nbrs[i + 1..] {
                if g.edge_between(y, z).is_some() {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

/// Rule 1(i). Returns the supervertex and whether two of its new edges are
/// parallel.
pub fn contract_triangle(g: &mut WeightedMultigraph, log: &mut RewriteLog, triangle: [VertexId; 3]) -> (VertexId, bool) {
    let [x, y, z] = triangle;
    let side = |a, b| g.edge_between(a, b).unwrap_or_else(|| panic!("{a}-{b} is not a triangle edge"));
    let opposite = [side(y, z), side(z, x), side(x, y)];
    let triangle_edges = opposite;
    let mut external: Vec<(Edge, EdgeId)> = Vec::new();
    for (t, opp) in triangle.into_iter().zip(opposite) {
        for e in g.incident_edges(t) {
            if !triangle_edges.contains(&e.id) {
                external.push((e.clone(), opp));
            }
        }
    }
    let super_vertex = g.add_vertex();
    let mut lifted = Vec::new();
    let mut ends = Vec::new();
    for (e, opp) in external {
        let opp_edge = g.edge(opp).unwrap();
        let (delta, opp_forced) = (opp_edge.cost, opp_edge.forced);
        let t = if triangle.contains(&e.u) { e.u } else { e.v };
        let far = e.other(t);
        g.remove_edge(e.id);
        log.derive(g, Derivation::Lift { base: e.id, opposite: opp });
        let new_id = g.add_edge(super_vertex, far, e.cost.checked_add(delta).expect("cost overflow"));
        if e.forced || opp_forced {
            g.set_forced(new_id);
        }
        lifted.push((e.id, new_id, delta));
        ends.push(far);
    }
    for t in triangle {
        g.remove_vertex(t);
    }
    ends.sort_unstable();
    let parallel = ends.windows(2).any(|w| w[0] == w[1]);
    log.records.push(Rewrite::TriangleContraction { super_vertex, triangle, lifted });
    (super_vertex, parallel)
}

/// Whether two opposite vertices of `cycle` carry forced non-cycle edges.
pub fn forcing_4cycle_applies(g: &WeightedMultigraph, cycle: &CycleDescriptor) -> bool {
    let has = |i: usize| cycle.has_forced_attachment(g, cycle.vertices[i]);
    cycle.len() == 4 && cycle.is_live(g) && ((has(0) && has(2)) || (has(1) && has(3)))
}

/// Rule 1(j): forces every non-cycle edge at the cycle's vertices. Returns
/// whether anything changed.
pub fn apply_4cycle_forcing(g: &mut WeightedMultigraph, log: &mut RewriteLog, cycle: &CycleDescriptor) -> bool {
    let attached: Vec<EdgeId> = cycle.vertices.iter().flat_map(|&v| cycle.attached_at(g, v).collect::<Vec<_>>()).collect();
    let mut changed = false;
    for id in attached {
        if g.set_forced(id) {
            log.record_forced(id);
            changed = true;
        }
    }
    changed
}

/// The fixpoint shape: simple, cubic and triangle-free.
pub fn is_reduced(g: &WeightedMultigraph) -> bool {
    g.is_simple() && g.is_cubic() && first_triangle(g).is_none()
}

/// Progress measures of a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measure {
    /// `|V| - |F| - 2|C|`, `C` the 4-cycle components of `G \ F`.
    pub s: i64,
    /// Vertices with no forced edge.
    pub f: i64,
}

pub fn measure(g: &WeightedMultigraph) -> Measure {
    let cycles = unforced_4cycle_components(g);
    let s = g.vertex_count() as i64 - g.forced_count() as i64 - 2 * cycles as i64;
    let f = g.vertices().filter(|&v| g.forced_degree(v) == 0).count() as i64;
    Measure { s, f }
}

/// Number of connected components of `G \ F` that are 4-cycles.
pub fn unforced_4cycle_components(g: &WeightedMultigraph) -> usize {
    four_cycle_component_roots(g).len()
}

/// Marks, by vertex slot, the vertices lying in a 4-cycle component of `G \ F`.
pub fn in_unforced_4cycle_component(g: &WeightedMultigraph) -> Vec<bool> {
    let mut uf = g.components_by(|e| !e.forced);
    let roots = four_cycle_component_roots(g);
    let mut marked = vec![false; g.vertex_slots()];
    for v in g.vertices() {
        marked[v] = roots.contains(&uf.find_mut(v));
    }
    marked
}

fn four_cycle_component_roots(g: &WeightedMultigraph) -> Vec<VertexId> {
    let mut uf = g.components_by(|e| !e.forced);
    let slots = g.vertex_slots();
    let mut vertices = vec![0usize; slots];
    let mut edges = vec![0usize; slots];
    let mut regular = vec![true; slots];
    for v in g.vertices() {
        let r = uf.find_mut(v);
        vertices[r] += 1;
        let unforced = g.incident_edges(v).filter(|e| !e.forced && !e.is_loop()).count();
        if unforced != 2 || g.incident_edges(v).any(|e| !e.forced && e.is_loop()) {
            regular[r] = false;
        }
    }
    for e in g.edges().filter(|e| !e.forced) {
        edges[uf.find_mut(e.u)] += 1;
    }
    (0..slots).filter(|&r| vertices[r] == 4 && edges[r] == 4 && regular[r]).collect()
}
