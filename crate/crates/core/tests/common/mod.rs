#![allow(dead_code)]

use std::collections::BTreeMap;

use cubic_tsp::closure::is_disjoint_4cycle_cover;
use cubic_tsp::generators::{apply_costs, generate, random_cubic_multigraph, CostPolicy, GeneratorKind, GeneratorSpec};
use cubic_tsp::graph::{EdgeId, WeightedMultigraph};
use cubic_tsp::oracle::optimal_completion;
use cubic_tsp::reduction::{apply_next_rule, RewriteLog, Step};
use cubic_tsp::search::choose_branch_edge;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Simple connected cubic graph with costs uniform in `1..=100`.
pub fn weighted_cubic(n: usize, seed: u64) -> WeightedMultigraph {
    let spec = GeneratorSpec {
        kind: GeneratorKind::RandomCubic { n, seed },
        costs: CostPolicy::Uniform { lo: 1, hi: 100, seed: seed ^ 0x5eed },
    };
    generate(&spec).unwrap()
}

/// Cubic multigraph (loops and parallel edges kept) with costs in `1..=100`.
pub fn weighted_multigraph(n: usize, seed: u64) -> WeightedMultigraph {
    let mut g = random_cubic_multigraph(n, seed).unwrap();
    apply_costs(&mut g, CostPolicy::Uniform { lo: 1, hi: 100, seed: seed ^ 0x5eed }).unwrap();
    g
}

/// Cost of `edges` if they form one Hamiltonian cycle of `g`.
pub fn tour_cost(g: &WeightedMultigraph, edges: &[EdgeId]) -> Option<u64> {
    let n = g.vertex_count();
    if edges.len() != n {
        return None;
    }
    let mut sorted = edges.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != n || sorted.iter().any(|&e| !g.contains_edge(e)) {
        return None;
    }
    let mut next: BTreeMap<usize, Vec<(usize, EdgeId)>> = BTreeMap::new();
    for &e in &sorted {
        let edge = g.edge(e).unwrap();
        next.entry(edge.u).or_default().push((edge.v, e));
        next.entry(edge.v).or_default().push((edge.u, e));
    }
    if next.len() != n || next.values().any(|adj| adj.len() != 2) {
        return None;
    }
    let start = *next.keys().next().unwrap();
    let (mut prev_edge, mut at, mut steps) = (usize::MAX, start, 0);
    loop {
        let &(to, e) = next[&at].iter().find(|&&(_, e)| e != prev_edge)?;
        prev_edge = e;
        at = to;
        steps += 1;
        if at == start {
            break;
        }
    }
    (steps == n).then(|| sorted.iter().map(|&e| g.edge(e).unwrap().cost).sum())
}

/// A state whose unforced edges are `k` disjoint 4-cycles and whose forced
/// edges are a perfect matching of their vertices (no matching edge joins
/// two neighbours on a cycle).
pub fn closure_state(k: usize, seed: u64) -> WeightedMultigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 4 * k;
    loop {
        let mut g = WeightedMultigraph::with_vertices(n);
        for c in 0..k {
            for i in 0..4 {
                g.add_edge(4 * c + i, 4 * c + (i + 1) % 4, rng.random_range(1..=100));
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let pairs: Vec<(usize, usize)> = order.chunks(2).map(|p| (p[0], p[1])).collect();
        let adjacent = |u: usize, v: usize| u / 4 == v / 4 && (u % 4 + 2) % 4 != v % 4;
        if pairs.iter().any(|&(u, v)| adjacent(u, v)) {
            continue;
        }
        for (u, v) in pairs {
            let e = g.add_edge(u, v, rng.random_range(1..=100));
            g.set_forced(e);
        }
        assert!(is_disjoint_4cycle_cover(&g));
        return g;
    }
}

/// One rewrite observed on a reachable state.
#[derive(Clone, Debug)]
pub struct RuleProbe {
    pub rule: &'static str,
    pub detail: String,
    /// Optimal completion cost before and after the rewrite.
    pub before: Option<u64>,
    pub after: Option<u64>,
    /// The optimal completion after the rewrite, expanded through the log,
    /// is a tour of the input with cost `after`.
    pub expansion_ok: bool,
}

impl RuleProbe {
    pub fn sound(&self) -> bool {
        self.before == self.after && self.expansion_ok
    }
}

/// Walks one random root-to-leaf path of the search on `input`, forcing or
/// removing each branch edge at random, and reports every rewrite.
pub fn probe_path(input: &WeightedMultigraph, seed: u64, mut report: impl FnMut(RuleProbe)) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = input.clone();
    let mut log = RewriteLog::new(input);
    loop {
        let before = optimal_completion(&g).unwrap();
        match apply_next_rule(&mut g, &mut log) {
            Step::Rewrote(rule) => {
                let after = optimal_completion(&g).unwrap();
                let expansion_ok = match &after {
                    Some((cost, edges)) => tour_cost(input, &log.expand_all(edges.iter().copied())) == Some(*cost),
                    None => true,
                };
                report(RuleProbe {
                    rule: rule.code(),
                    detail: rule.to_string(),
                    before: before.map(|b| b.0),
                    after: after.map(|a| a.0),
                    expansion_ok,
                });
            }
            Step::Fixpoint => {
                if is_disjoint_4cycle_cover(&g) {
                    return;
                }
                let Some((edge, _)) = choose_branch_edge(&g, Some(&mut rng)) else { return };
                if rng.random_bool(0.5) {
                    g.set_forced(edge);
                    log.record_forced(edge);
                } else {
                    g.remove_edge(edge);
                    log.record_removal(edge);
                }
            }
            Step::Pruned(_) | Step::Solved { .. } => return,
        }
    }
}

pub const PROBED_RULES: [&str; 6] = ["1e", "1f", "1g", "1h", "1i", "1j"];

/// Probes random paths on graphs of `n <= 14` vertices until every rule of
/// [`PROBED_RULES`] has `per_rule` observations or `max_paths` paths were
/// walked. Alternates simple graphs and multigraphs.
pub fn collect_probes(per_rule: usize, max_paths: u64, seed: u64) -> BTreeMap<&'static str, Vec<RuleProbe>> {
    let mut probes: BTreeMap<&'static str, Vec<RuleProbe>> = PROBED_RULES.iter().map(|&r| (r, Vec::new())).collect();
    for i in 0..max_paths {
        if probes.values().all(|v| v.len() >= per_rule) {
            break;
        }
        let n = 4 + 2 * (i as usize % 6);
        let path_seed = seed.wrapping_mul(1_000_003).wrapping_add(i);
        let g = if i % 2 == 0 { weighted_cubic(n.max(4), path_seed) } else { weighted_multigraph(n, path_seed) };
        probe_path(&g, path_seed, |p| {
            if let Some(list) = probes.get_mut(p.rule) {
                if list.len() < per_rule {
                    list.push(p);
                }
            }
        });
    }
    probes
}
