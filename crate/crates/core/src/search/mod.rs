//! Branch-and-bound over `(G, F)` with instrumentation of the branch kinds.

mod select;
mod trace;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::closure::{is_disjoint_4cycle_cover, solve_4cycle_closure};
use crate::graph::{EdgeId, WeightedMultigraph};
use crate::outcome::Outcome;
use crate::reduction::{measure, simplify, AppliedRule, RewriteLog, Status};

pub use select::{choose_branch_edge, classify_branch, saturated_six_cycles, step_in_effect, BranchKind, Provenance};
pub use trace::{check_path_invariants, dominated_lines, leaf_ok, write_trace, ChildStatus, InvariantReport, TraceRow};

#[derive(Clone, Debug, Default)]
pub struct SearchConfig {
    pub seed: u64,
    /// Take the smallest edge id in case 3(c) instead of a seeded choice.
    pub deterministic: bool,
    /// Edge ids used, in order, for the first branches instead of the policy.
    pub script: Vec<EdgeId>,
    /// Keep one [`TraceRow`] per branch.
    pub trace: bool,
    /// Check the path bounds at every leaf and build an [`InvariantReport`].
    pub check_invariants: bool,
    /// Cut nodes whose forced cost already reaches the best tour found.
    pub prune: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub n: usize,
    pub nodes: u64,
    pub leaves: u64,
    pub branches: u64,
    pub a_total: u64,
    pub b_total: u64,
    pub d_total: u64,
    pub by_provenance: [u64; 4],
    pub max_depth: usize,
    pub solved_leaves: u64,
    pub closure_leaves: u64,
    pub closure_failures: u64,
    pub pruned_leaves: u64,
    pub bound_leaves: u64,
    pub max_3a7b: u64,
    pub max_a: u32,
    pub max_b: u32,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub stats: SearchStats,
    pub trace: Vec<TraceRow>,
    pub report: Option<InvariantReport>,
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("input must be a connected cubic graph: {0}")]
    InvalidInput(&'static str),
    #[error("script entry {index} names edge {edge}, which is not an unforced edge of the current graph")]
    BadScript { index: usize, edge: EdgeId },
    #[error("no edge to branch on in a reduced state at depth {depth}")]
    NoBranchEdge { depth: usize },
    #[error("path invariant violated at depth {depth}: a = {a}, b = {b}, n = {n}")]
    InvariantViolation { depth: usize, a: u32, b: u32, n: usize, trace: Vec<TraceRow> },
}

#[derive(Clone, Copy, Debug, Default)]
struct PathCounts {
    a: u32,
    b: u32,
    d: u32,
}

impl PathCounts {
    fn with(self, kind: BranchKind) -> PathCounts {
        let mut next = self;
        match kind {
            BranchKind::A => next.a += 1,
            BranchKind::B => next.b += 1,
            BranchKind::D => next.d += 1,
        }
        next
    }
}

#[derive(Clone, Copy)]
enum Action {
    Start,
    Force(EdgeId),
    Remove(EdgeId),
}

struct Task {
    graph: WeightedMultigraph,
    mark: crate::reduction::LogMark,
    action: Action,
    path: PathCounts,
    depth: usize,
    /// Branch record this node reports to, and which child it is.
    slot: Option<(u64, usize)>,
}

struct ChildInfo {
    status: ChildStatus,
    measure: Option<(i64, i64)>,
    rules: String,
}

struct OpenBranch {
    id: u64,
    depth: usize,
    provenance: Provenance,
    kind: BranchKind,
    edge: EdgeId,
    before: (i64, i64),
    path: PathCounts,
    first: Option<ChildInfo>,
}

fn rule_list(rules: &[AppliedRule]) -> String {
    rules.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Exact minimum-cost Hamiltonian cycle of a connected cubic graph.
pub fn solve(input: &WeightedMultigraph, config: &SearchConfig) -> Result<SearchResult, SearchError> {
    if !input.is_cubic() {
        return Err(SearchError::InvalidInput("not 3-regular"));
    }
    if !input.is_connected() {
        return Err(SearchError::InvalidInput("disconnected"));
    }
    let n = input.vertex_count();
    let keep_rows = config.trace || config.check_invariants;
    let mut rng = (!config.deterministic).then(|| ChaCha8Rng::seed_from_u64(config.seed));
    let mut stats = SearchStats { n, ..Default::default() };
    let mut rows = Vec::new();
    let mut log = RewriteLog::new(input);
    let mut best = Outcome::NoTour;
    let mut open: Vec<OpenBranch> = Vec::new();
    let mut next_id = 0u64;
    let mut script = config.script.iter().copied().enumerate();
    let mut stack = vec![Task {
        graph: input.clone(),
        mark: log.checkpoint(),
        action: Action::Start,
        path: PathCounts::default(),
        depth: 0,
        slot: None,
    }];

    while let Some(task) = stack.pop() {
        log.rollback(task.mark);
        let mut g = task.graph;
        match task.action {
            Action::Start => {}
            Action::Force(e) => {
                g.set_forced(e);
                log.record_forced(e);
            }
            Action::Remove(e) => {
                g.remove_edge(e);
                log.record_removal(e);
            }
        }
        stats.nodes += 1;
        stats.max_depth = stats.max_depth.max(task.depth);
        let simplified = simplify(&mut g, &mut log);
        let (status, state_measure) = match simplified.status {
            Status::Pruned => (ChildStatus::Pruned, None),
            Status::Solved { cost, tour } => {
                best = best.min(Outcome::Tour { cost, edges: tour });
                (ChildStatus::Solved, Some(measure(&g)))
            }
            Status::InProgress if config.prune && best.cost().is_some_and(|b| g.forced_cost() >= b) => {
                (ChildStatus::Bound, None)
            }
            Status::InProgress if is_disjoint_4cycle_cover(&g) => match solve_4cycle_closure(&g, &log) {
                Outcome::NoTour => (ChildStatus::ClosureNone, None),
                tour => {
                    best = best.min(tour);
                    (ChildStatus::Closure, Some(measure(&g)))
                }
            },
            Status::InProgress => (ChildStatus::Branched, Some(measure(&g))),
        };
        let state_measure = state_measure.map(|m| (m.s, m.f));

        if let Some((id, which)) = task.slot {
            let top = open.last_mut().expect("child without an open branch");
            assert_eq!(top.id, id, "branch records out of order");
            let info = ChildInfo {
                status,
                measure: state_measure,
                rules: if keep_rows { rule_list(&simplified.applied) } else { String::new() },
            };
            if which == 0 {
                top.first = Some(info);
            } else {
                let branch = open.pop().unwrap();
                if keep_rows {
                    let slot = branch.id as usize;
                    rows[slot] = finish_row(branch, info);
                }
            }
        }

        if status.is_leaf() {
            stats.leaves += 1;
            match status {
                ChildStatus::Solved => stats.solved_leaves += 1,
                ChildStatus::Closure => stats.closure_leaves += 1,
                ChildStatus::ClosureNone => stats.closure_failures += 1,
                ChildStatus::Pruned => stats.pruned_leaves += 1,
                ChildStatus::Bound => stats.bound_leaves += 1,
                ChildStatus::Branched => unreachable!(),
            }
            let PathCounts { a, b, .. } = task.path;
            stats.max_3a7b = stats.max_3a7b.max(3 * a as u64 + 7 * b as u64);
            stats.max_a = stats.max_a.max(a);
            stats.max_b = stats.max_b.max(b);
            if config.check_invariants && !leaf_ok(n, a, b) {
                let trace = open.iter().map(open_row).collect();
                return Err(SearchError::InvariantViolation { depth: task.depth, a, b, n, trace });
            }
            continue;
        }

        let (edge, provenance) = match script.next() {
            Some((index, edge)) => {
                if !g.edge(edge).is_some_and(|e| !e.forced) {
                    return Err(SearchError::BadScript { index, edge });
                }
                (edge, step_in_effect(&g))
            }
            None => choose_branch_edge(&g, rng.as_mut()).ok_or(SearchError::NoBranchEdge { depth: task.depth })?,
        };
        debug_assert!(g.edge(edge).is_some_and(|e| !e.forced));
        let kind = classify_branch(&g, edge, provenance);
        stats.branches += 1;
        stats.by_provenance[provenance.index()] += 1;
        match kind {
            BranchKind::A => stats.a_total += 1,
            BranchKind::B => stats.b_total += 1,
            BranchKind::D => stats.d_total += 1,
        }
        let id = next_id;
        next_id += 1;
        if keep_rows {
            rows.push(TraceRow::placeholder());
        }
        open.push(OpenBranch {
            id,
            depth: task.depth,
            provenance,
            kind,
            edge,
            before: state_measure.unwrap(),
            path: task.path,
            first: None,
        });
        let mark = log.checkpoint();
        let path = task.path.with(kind);
        let depth = task.depth + 1;
        stack.push(Task { graph: g.clone(), mark, action: Action::Remove(edge), path, depth, slot: Some((id, 1)) });
        stack.push(Task { graph: g, mark, action: Action::Force(edge), path, depth, slot: Some((id, 0)) });
    }
    debug_assert!(open.is_empty());

    let report = config.check_invariants.then(|| check_path_invariants(n, &rows));
    if !config.trace {
        rows = Vec::new();
    }
    Ok(SearchResult { outcome: best, stats, trace: rows, report })
}

/// Row for a branch whose children are not all finished.
fn open_row(branch: &OpenBranch) -> TraceRow {
    let first = branch.first.as_ref();
    TraceRow {
        depth: branch.depth,
        provenance: branch.provenance.label(),
        kind: branch.kind.label(),
        edge: branch.edge,
        s_before: branch.before.0,
        f_before: branch.before.1,
        s_child1: first.and_then(|c| c.measure.map(|m| m.0)),
        f_child1: first.and_then(|c| c.measure.map(|m| m.1)),
        a: branch.path.a,
        b: branch.path.b,
        d: branch.path.d,
        child1_status: first.map_or(ChildStatus::Branched, |c| c.status),
        child1_rules: first.map(|c| c.rules.clone()).unwrap_or_default(),
        ..TraceRow::placeholder()
    }
}

fn finish_row(branch: OpenBranch, second: ChildInfo) -> TraceRow {
    let first = branch.first.expect("second child finished before the first");
    TraceRow {
        depth: branch.depth,
        provenance: branch.provenance.label(),
        kind: branch.kind.label(),
        edge: branch.edge,
        s_before: branch.before.0,
        f_before: branch.before.1,
        s_child1: first.measure.map(|m| m.0),
        f_child1: first.measure.map(|m| m.1),
        s_child2: second.measure.map(|m| m.0),
        f_child2: second.measure.map(|m| m.1),
        a: branch.path.a,
        b: branch.path.b,
        d: branch.path.d,
        child1_status: first.status,
        child2_status: second.status,
        child1_rules: first.rules,
        child2_rules: second.rules,
    }
}
