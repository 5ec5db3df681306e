use std::fmt;
use std::io::Write;

use serde::Serialize;

use super::select::{BranchKind, Provenance};

/// How a child node ended up after simplification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChildStatus {
    Branched,
    Solved,
    Closure,
    /// The component graph of a 4-cycle cover was disconnected.
    ClosureNone,
    Pruned,
    /// Cut by the best-so-far bound.
    Bound,
}

impl ChildStatus {
    pub fn is_leaf(self) -> bool {
        self != ChildStatus::Branched
    }
}

/// One branch of a traced run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub depth: usize,
    pub provenance: &'static str,
    pub kind: &'static str,
    pub edge: usize,
    pub s_before: i64,
    pub f_before: i64,
    /// Empty for children that return no tour.
    pub s_child1: Option<i64>,
    pub f_child1: Option<i64>,
    pub s_child2: Option<i64>,
    pub f_child2: Option<i64>,
    /// Branch counts on the path down to this branch, excluding it.
    pub a: u32,
    pub b: u32,
    pub d: u32,
    pub child1_status: ChildStatus,
    pub child2_status: ChildStatus,
    pub child1_rules: String,
    pub child2_rules: String,
}

impl TraceRow {
    pub(super) fn placeholder() -> TraceRow {
        TraceRow {
            depth: 0,
            provenance: "",
            kind: "",
            edge: 0,
            s_before: 0,
            f_before: 0,
            s_child1: None,
            f_child1: None,
            s_child2: None,
            f_child2: None,
            a: 0,
            b: 0,
            d: 0,
            child1_status: ChildStatus::Branched,
            child2_status: ChildStatus::Branched,
            child1_rules: String::new(),
            child2_rules: String::new(),
        }
    }

    pub fn kind(&self) -> BranchKind {
        match self.kind {
            "A" => BranchKind::A,
            "B" => BranchKind::B,
            _ => BranchKind::D,
        }
    }

    pub fn children(&self) -> [Option<(i64, i64)>; 2] {
        [self.s_child1.zip(self.f_child1), self.s_child2.zip(self.f_child2)]
    }
}

pub fn write_trace<W: Write>(rows: &[TraceRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record([
            "depth", "provenance", "kind", "edge", "s_before", "f_before", "s_child1", "f_child1", "s_child2",
            "f_child2", "a", "b", "d", "child1_status", "child2_status", "child1_rules", "child2_rules",
        ])?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// The five branching lines of the run-time recurrence, numbered 1..=5.
/// A child given as `None` returned no tour and counts as an unbounded
/// decrease.
pub fn dominated_lines(kind: BranchKind, parent: (i64, i64), children: [Option<(i64, i64)>; 2]) -> Vec<u8> {
    let meets = |c: Option<(i64, i64)>, ds: i64, df: i64| {
        c.is_none_or(|(s, f)| parent.0 - s >= ds && parent.1 - f >= df)
    };
    let [c1, c2] = children;
    let both = |ds, df| meets(c1, ds, df) && meets(c2, ds, df);
    let pair = |x: (i64, i64), y: (i64, i64)| {
        (meets(c1, x.0, x.1) && meets(c2, y.0, y.1)) || (meets(c1, y.0, y.1) && meets(c2, x.0, x.1))
    };
    let mut lines = Vec::new();
    if kind == BranchKind::A && both(3, 4) {
        lines.push(1);
    }
    if kind == BranchKind::B && both(3, 0) {
        lines.push(2);
    }
    if pair((5, 2), (2, 2)) {
        lines.push(3);
    }
    if both(4, 0) {
        lines.push(4);
    }
    if pair((4, 2), (3, 2)) {
        lines.push(5);
    }
    lines
}

/// Path and branching invariants of one run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantReport {
    pub n: usize,
    pub leaves: u64,
    pub branches: u64,
    /// Branches on an empty forced set, which the recurrence does not model.
    pub exempt_branches: u64,
    pub max_3a7b: u64,
    pub max_a: u32,
    pub max_b: u32,
    /// Leaves breaking `3a + 7b <= n`, `a <= n/4` or `b <= n/7`.
    pub leaf_violations: u64,
    /// Trace rows whose children match none of the five lines.
    pub undominated: Vec<usize>,
    /// Non-exempt children with `Δs < 2`.
    pub short_children: u64,
    /// A-branches missing line 1, B-branches missing line 2.
    pub a_line_misses: u64,
    pub b_line_misses: u64,
    pub f_increases: u64,
}

impl InvariantReport {
    pub fn pass(&self) -> bool {
        self.leaf_violations == 0 && self.undominated.is_empty() && self.f_increases == 0
    }
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}  leaves {}  branches {} ({} exempt)", self.n, self.leaves, self.branches, self.exempt_branches)?;
        writeln!(f, "max 3a+7b {}  max a {}  max b {}", self.max_3a7b, self.max_a, self.max_b)?;
        writeln!(
            f,
            "leaf violations {}  undominated branches {}  short children {}  f increases {}",
            self.leaf_violations,
            self.undominated.len(),
            self.short_children,
            self.f_increases
        )?;
        writeln!(f, "A-branches off line 1 {}  B-branches off line 2 {}", self.a_line_misses, self.b_line_misses)?;
        write!(f, "{}", if self.pass() { "PASS" } else { "FAIL" })
    }
}

/// Whether a leaf with path counts `a`, `b` respects the path bounds.
pub fn leaf_ok(n: usize, a: u32, b: u32) -> bool {
    let (n, a, b) = (n as u64, a as u64, b as u64);
    3 * a + 7 * b <= n && a <= n / 4 && b <= n / 7
}

/// Recomputes the invariants from the trace rows of a run on `n` vertices.
pub fn check_path_invariants(n: usize, rows: &[TraceRow]) -> InvariantReport {
    let mut report = InvariantReport { n, ..Default::default() };
    if rows.is_empty() {
        report.leaves = 1;
        return report;
    }
    for (i, row) in rows.iter().enumerate() {
        report.branches += 1;
        let kind = row.kind();
        let (a, b) = (row.a + (kind == BranchKind::A) as u32, row.b + (kind == BranchKind::B) as u32);
        for status in [row.child1_status, row.child2_status] {
            if status.is_leaf() {
                report.leaves += 1;
                report.max_3a7b = report.max_3a7b.max(3 * a as u64 + 7 * b as u64);
                report.max_a = report.max_a.max(a);
                report.max_b = report.max_b.max(b);
                if !leaf_ok(n, a, b) {
                    report.leaf_violations += 1;
                }
            }
        }
        let parent = (row.s_before, row.f_before);
        let children = row.children();
        report.f_increases += children.iter().flatten().filter(|c| c.1 > parent.1).count() as u64;
        if row.provenance == Provenance::Any.label() {
            report.exempt_branches += 1;
            continue;
        }
        report.short_children += children.iter().flatten().filter(|c| parent.0 - c.0 < 2).count() as u64;
        let lines = dominated_lines(kind, parent, children);
        if lines.is_empty() {
            report.undominated.push(i);
        }
        match kind {
            BranchKind::A if !lines.contains(&1) => report.a_line_misses += 1,
            BranchKind::B if !lines.contains(&2) => report.b_line_misses += 1,
            _ => {}
        }
    }
    report
}
