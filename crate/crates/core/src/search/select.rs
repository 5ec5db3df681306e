use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{find_unforced_cycles, CycleDescriptor, EdgeId, WeightedMultigraph};
use crate::reduction::in_unforced_4cycle_component;

/// The edge-selection case that applies to a state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    /// 4-cycle of unforced edges with two F-adjacent vertices.
    FourCycle,
    /// Live 6-cycle with a vertex carrying a forced attached edge.
    LiveSixCycle,
    /// Unforced edge next to a forced one.
    NextToForced,
    /// No forced edges yet.
    Any,
}

impl Provenance {
    pub const ALL: [Provenance; 4] =
        [Provenance::FourCycle, Provenance::LiveSixCycle, Provenance::NextToForced, Provenance::Any];

    pub fn label(self) -> &'static str {
        match self {
            Provenance::FourCycle => "3a",
            Provenance::LiveSixCycle => "3a'",
            Provenance::NextToForced => "3b",
            Provenance::Any => "3c",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchKind {
    A,
    B,
    D,
}

impl BranchKind {
    pub fn label(self) -> &'static str {
        match self {
            BranchKind::A => "A",
            BranchKind::B => "B",
            BranchKind::D => "D",
        }
    }
}

impl fmt::Display for BranchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Edge choice for a reduced state that is not a 4-cycle cover.
/// `rng` drives case 3(c); `None` takes the smallest edge id instead.
pub fn choose_branch_edge(g: &WeightedMultigraph, rng: Option<&mut ChaCha8Rng>) -> Option<(EdgeId, Provenance)> {
    if let Some(e) = four_cycle_choice(g) {
        return Some((e, Provenance::FourCycle));
    }
    if let Some(e) = six_cycle_choice(g) {
        return Some((e, Provenance::LiveSixCycle));
    }
    if g.forced_count() > 0 {
        return next_to_forced(g).map(|e| (e, Provenance::NextToForced));
    }
    let unforced: Vec<EdgeId> = g.edges().map(|e| e.id).collect();
    if unforced.is_empty() {
        return None;
    }
    let pick = match rng {
        Some(rng) => unforced[rng.random_range(0..unforced.len())],
        None => unforced[0],
    };
    Some((pick, Provenance::Any))
}

/// The case [`choose_branch_edge`] would use for `g`.
pub fn step_in_effect(g: &WeightedMultigraph) -> Provenance {
    if four_cycle_choice(g).is_some() {
        Provenance::FourCycle
    } else if six_cycle_choice(g).is_some() {
        Provenance::LiveSixCycle
    } else if g.forced_count() > 0 {
        Provenance::NextToForced
    } else {
        Provenance::Any
    }
}

fn four_cycle_choice(g: &WeightedMultigraph) -> Option<EdgeId> {
    for c in find_unforced_cycles(g, 4, true) {
        if c.attached_selected != 2 {
            continue;
        }
        let pick = c
            .vertices
            .iter()
            .filter(|&&v| !c.has_forced_attachment(g, v))
            .flat_map(|&v| c.attached_at(g, v).collect::<Vec<_>>())
            .filter(|&e| !g.edge(e).unwrap().forced)
            .min();
        if pick.is_some() {
            return pick;
        }
    }
    None
}

fn six_cycle_choice(g: &WeightedMultigraph) -> Option<EdgeId> {
    let best = find_unforced_cycles(g, 6, true)
        .into_iter()
        .filter(|c| c.attached_selected > 0)
        .max_by(|x, y| x.attached_selected.cmp(&y.attached_selected).then_with(|| y.key().cmp(&x.key())))?;
    let has = |i: usize| best.has_forced_attachment(g, best.vertices[i % 6]);
    // (edge, z also carries a forced attached edge)
    let mut candidates: Vec<(bool, EdgeId)> = Vec::new();
    for i in 0..6 {
        let (a, b) = (has(i), has(i + 1));
        if a || b {
            candidates.push((a && b, best.edges[i]));
        }
    }
    candidates.into_iter().max_by(|x, y| x.0.cmp(&y.0).then_with(|| y.1.cmp(&x.1))).map(|(_, e)| e)
}

/// Skips 4-cycle components of `G \ F`: some other component always has an
/// edge next to `F` once the state is not a 4-cycle cover.
fn next_to_forced(g: &WeightedMultigraph) -> Option<EdgeId> {
    let isolated = in_unforced_4cycle_component(g);
    g.edges()
        .filter(|e| !e.forced && !isolated[e.u])
        .find(|e| g.forced_degree(e.u) > 0 || g.forced_degree(e.v) > 0)
        .map(|e| e.id)
}

/// Live 6-cycles through `edge` whose six vertices all carry forced edges.
pub fn saturated_six_cycles(g: &WeightedMultigraph, edge: EdgeId) -> Vec<CycleDescriptor> {
    find_unforced_cycles(g, 6, true).into_iter().filter(|c| c.attached_selected == 6 && c.contains_edge(edge)).collect()
}

/// A: `yz` taken next to a single forced edge `xy`, with `z` and the third
/// neighbour `w` of `y` free, in case 3(b) or 3(a'). B: `yz` on a live
/// 6-cycle whose vertices all carry forced edges. D: everything else,
/// including every 3(a) choice.
pub fn classify_branch(g: &WeightedMultigraph, edge: EdgeId, provenance: Provenance) -> BranchKind {
    let next_to_forced = matches!(provenance, Provenance::NextToForced | Provenance::LiveSixCycle);
    if next_to_forced && is_a_branch(g, edge) {
        return BranchKind::A;
    }
    if provenance != Provenance::FourCycle && !saturated_six_cycles(g, edge).is_empty() {
        return BranchKind::B;
    }
    BranchKind::D
}

fn is_a_branch(g: &WeightedMultigraph, edge: EdgeId) -> bool {
    let e = g.edge(edge).unwrap();
    let y = match (g.forced_degree(e.u), g.forced_degree(e.v)) {
        (1, 0) => e.u,
        (0, 1) => e.v,
        _ => return false,
    };
    let mut third = g.incident_edges(y).filter(|x| !x.forced && x.id != edge);
    match (third.next(), third.next()) {
        (Some(w), None) => g.forced_degree(w.other(y)) == 0,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::graph_from;
    use rand::SeedableRng;

    /// 6-cycle 0..6 with pendant `i -> 6 + i`, the pendants closed off by
    /// a second 6-cycle so every vertex has degree 3.
    fn prism6() -> WeightedMultigraph {
        let mut edges: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        edges.extend((0..6).map(|i| (i, i + 6)));
        edges.extend((0..6).map(|i| (6 + i, 6 + (i + 1) % 6)));
        graph_from(12, &edges)
    }

    #[test]
    fn empty_forced_set_means_any_edge() {
        let g = prism6();
        assert_eq!(choose_branch_edge(&g, None), Some((0, Provenance::Any)));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (e, p) = choose_branch_edge(&g, Some(&mut rng)).unwrap();
        assert_eq!(p, Provenance::Any);
        assert!(g.contains_edge(e));
    }

    #[test]
    fn four_cycle_case() {
        // cube: 4-cycle 0-1-2-3 with spokes 0-4 .. 3-7; force spokes at 0 and 1
        let mut g = graph_from(
            8,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)],
        );
        g.set_forced(8);
        g.set_forced(9);
        let (e, p) = choose_branch_edge(&g, None).unwrap();
        assert_eq!(p, Provenance::FourCycle);
        assert_eq!(e, 10);
        assert_eq!(classify_branch(&g, e, p), BranchKind::D);
    }

    #[test]
    fn live_six_cycle_case() {
        let mut g = prism6();
        // one forced attached edge at vertex 2
        g.set_forced(8);
        let (e, p) = choose_branch_edge(&g, None).unwrap();
        assert_eq!(p, Provenance::LiveSixCycle);
        let edge = g.edge(e).unwrap();
        assert!(!edge.forced && edge.touches(2));
    }

    #[test]
    fn saturated_six_cycle_is_b() {
        let mut g = prism6();
        for id in 6..12 {
            g.set_forced(id);
        }
        let (e, p) = choose_branch_edge(&g, None).unwrap();
        assert_eq!(p, Provenance::LiveSixCycle);
        assert_eq!(classify_branch(&g, e, p), BranchKind::B);
    }

    #[test]
    fn a_branch_shape() {
        // path x - y - z with y's third neighbour w free
        let mut g = WeightedMultigraph::with_vertices(8);
        let xy = g.add_edge(0, 1, 1);
        let yz = g.add_edge(1, 2, 1);
        g.add_edge(1, 3, 1);
        g.add_edge(2, 4, 1);
        g.add_edge(2, 5, 1);
        g.add_edge(3, 6, 1);
        g.add_edge(3, 7, 1);
        g.set_forced(xy);
        assert_eq!(classify_branch(&g, yz, Provenance::NextToForced), BranchKind::A);
        assert_eq!(classify_branch(&g, yz, Provenance::FourCycle), BranchKind::D);
        let w_forced = g.add_edge(3, 3, 0);
        g.set_forced(w_forced);
        assert_eq!(classify_branch(&g, yz, Provenance::NextToForced), BranchKind::D);
    }
}
