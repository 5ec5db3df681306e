//! Finishing a state whose unforced edges form disjoint 4-cycles.

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::graph::{find_unforced_cycles, CycleDescriptor, EdgeId, WeightedMultigraph};
use crate::outcome::Outcome;
use crate::reduction::{unforced_4cycle_components, RewriteLog};

/// Largest number of cycles [`brute_force_closure`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClosureError {
    #[error("{0} cycles exceed the brute-force limit of {BRUTE_FORCE_LIMIT}")]
    TooManyCycles(usize),
}

/// True iff every component of `G \ F` is a 4-cycle.
pub fn is_disjoint_4cycle_cover(g: &WeightedMultigraph) -> bool {
    g.vertex_count() > 0 && 4 * unforced_4cycle_components(g) == g.vertex_count()
}

#[derive(Clone, Debug)]
pub struct ClosureCycle {
    pub cycle: CycleDescriptor,
    /// The opposite pair `H_i` (the cheaper one) and its complement.
    pub chosen: [EdgeId; 2],
    pub other: [EdgeId; 2],
    pub chosen_cost: u64,
    pub other_cost: u64,
}

/// An edge of the component graph: exchanging `H_i` for its complement on
/// cycle `cycle` joins components `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Swap {
    pub cycle: usize,
    pub a: usize,
    pub b: usize,
    pub cost: u64,
}

#[derive(Clone, Debug)]
pub struct ClosureInstance {
    pub cycles: Vec<ClosureCycle>,
    /// Number of connected components of `F ∪ H`.
    pub components: usize,
    pub swaps: Vec<Swap>,
    /// `cost(F) + cost(H)`.
    pub base_cost: u64,
}

impl ClosureInstance {
    pub fn build(g: &WeightedMultigraph) -> ClosureInstance {
        assert!(is_disjoint_4cycle_cover(g), "unforced edges are not a disjoint union of 4-cycles");
        let cost = |e: EdgeId| g.edge(e).unwrap().cost;
        let cycles: Vec<ClosureCycle> = find_unforced_cycles(g, 4, true)
            .into_iter()
            .map(|cycle| {
                let p = [cycle.edges[0], cycle.edges[2]];
                let q = [cycle.edges[1], cycle.edges[3]];
                let (pc, qc) = (cost(p[0]) + cost(p[1]), cost(q[0]) + cost(q[1]));
                let p_first = pc < qc || (pc == qc && p.iter().min() < q.iter().min());
                let (chosen, other, chosen_cost, other_cost) =
                    if p_first { (p, q, pc, qc) } else { (q, p, qc, pc) };
                ClosureCycle { cycle, chosen, other, chosen_cost, other_cost }
            })
            .collect();
        let mut uf = UnionFind::new(g.vertex_slots());
        for e in g.forced_edges() {
            uf.union(e.u, e.v);
        }
        for c in &cycles {
            for e in c.chosen {
                let e = g.edge(e).unwrap();
                uf.union(e.u, e.v);
            }
        }
        let mut label = vec![usize::MAX; g.vertex_slots()];
        let mut components = 0;
        for v in g.vertices() {
            let r = uf.find(v);
            if label[r] == usize::MAX {
                label[r] = components;
                components += 1;
            }
        }
        let comp = |e: EdgeId| label[uf.find(g.edge(e).unwrap().u)];
        let swaps = cycles
            .iter()
            .enumerate()
            .filter_map(|(i, c)| {
                let (a, b) = (comp(c.chosen[0]), comp(c.chosen[1]));
                (a != b).then(|| Swap { cycle: i, a: a.min(b), b: a.max(b), cost: c.other_cost - c.chosen_cost })
            })
            .collect();
        let base_cost = g.forced_cost() + cycles.iter().map(|c| c.chosen_cost).sum::<u64>();
        ClosureInstance { cycles, components, swaps, base_cost }
    }

    /// Minimum spanning tree of the component graph by Kruskal's algorithm,
    /// ties broken by cycle index; `None` if the component graph is
    /// disconnected.
    pub fn spanning_tree(&self) -> Option<Vec<Swap>> {
        let mut order = self.swaps.clone();
        order.sort_by_key(|s| (s.cost, s.cycle));
        let mut uf = UnionFind::new(self.components);
        let tree: Vec<Swap> = order.into_iter().filter(|s| uf.union(s.a, s.b)).collect();
        (tree.len() + 1 == self.components).then_some(tree)
    }
}

/// Completes the tour by opposite-pair selection and a minimum spanning tree
/// over the components of `F ∪ H`.
pub fn solve_4cycle_closure(g: &WeightedMultigraph, log: &RewriteLog) -> Outcome {
    let inst = ClosureInstance::build(g);
    let Some(tree) = inst.spanning_tree() else {
        return Outcome::NoTour;
    };
    let mut swapped = vec![false; inst.cycles.len()];
    for s in &tree {
        swapped[s.cycle] = true;
    }
    let cost = inst.base_cost + tree.iter().map(|s| s.cost).sum::<u64>();
    let pairs = inst.cycles.iter().zip(&swapped).flat_map(|(c, &sw)| if sw { c.other } else { c.chosen });
    let edges = log.expand_all(g.forced_edges().map(|e| e.id).chain(pairs));
    Outcome::Tour { cost, edges }
}

/// Tries both opposite pairs on every cycle and keeps the cheapest choice
/// that closes into one Hamiltonian cycle.
pub fn brute_force_closure(g: &WeightedMultigraph, log: &RewriteLog) -> Result<Outcome, ClosureError> {
    assert!(is_disjoint_4cycle_cover(g), "unforced edges are not a disjoint union of 4-cycles");
    let cycles = find_unforced_cycles(g, 4, true);
    let k = cycles.len();
    if k > BRUTE_FORCE_LIMIT {
        return Err(ClosureError::TooManyCycles(k));
    }
    let forced: Vec<EdgeId> = g.forced_edges().map(|e| e.id).collect();
    let mut best: Option<(u64, Vec<EdgeId>)> = None;
    for mask in 0u32..(1 << k) {
        let mut chosen = forced.clone();
        for (i, c) in cycles.iter().enumerate() {
            let off = ((mask >> i) & 1) as usize;
            chosen.extend([c.edges[off], c.edges[off + 2]]);
        }
        let mut uf = UnionFind::new(g.vertex_slots());
        for &e in &chosen {
            let e = g.edge(e).unwrap();
            uf.union(e.u, e.v);
        }
        let mut roots = g.vertices().map(|v| uf.find(v));
        let first = roots.next().unwrap();
        if !roots.all(|r| r == first) {
            continue;
        }
        let cost: u64 = chosen.iter().map(|&e| g.edge(e).unwrap().cost).sum();
        if best.as_ref().is_none_or(|(b, _)| cost < *b) {
            best = Some((cost, chosen));
        }
    }
    Ok(match best {
        None => Outcome::NoTour,
        Some((cost, chosen)) => Outcome::Tour { cost, edges: log.expand_all(chosen) },
    })
}
