mod common;

use std::collections::BTreeSet;

use cubic_tsp::closure::{brute_force_closure, solve_4cycle_closure};
use cubic_tsp::generators::random_cubic;
use cubic_tsp::graph::{find_unforced_cycles, girth, load_graph, to_graph_file, EdgeId, WeightedMultigraph};
use cubic_tsp::oracle::held_karp;
use cubic_tsp::recurrence::eval_t;
use cubic_tsp::reduction::{simplify, RewriteLog};
use cubic_tsp::search::{solve, SearchConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{closure_state, probe_path, tour_cost, weighted_cubic, weighted_multigraph};

fn with_random_forced(mut g: WeightedMultigraph, seed: u64, p: f64) -> WeightedMultigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<EdgeId> = g.edges().map(|e| e.id).collect();
    for e in ids {
        if rng.random_bool(p) {
            g.set_forced(e);
        }
    }
    g
}

/// Edge sets of all `length`-cycles among `pool`, by subset enumeration.
fn brute_force_cycles(g: &WeightedMultigraph, pool: &[EdgeId], length: usize) -> BTreeSet<Vec<EdgeId>> {
    let mut found = BTreeSet::new();
    let mut pick = Vec::new();
    subsets(pool, length, 0, &mut pick, &mut |set| {
        if is_single_cycle(g, set) {
            found.insert(set.to_vec());
        }
    });
    found
}

fn subsets(pool: &[EdgeId], k: usize, from: usize, pick: &mut Vec<EdgeId>, visit: &mut impl FnMut(&[EdgeId])) {
    if pick.len() == k {
        visit(pick);
        return;
    }
    for i in from..pool.len() {
        pick.push(pool[i]);
        subsets(pool, k, i + 1, pick, visit);
        pick.pop();
    }
}

fn is_single_cycle(g: &WeightedMultigraph, set: &[EdgeId]) -> bool {
    let mut degree = std::collections::BTreeMap::new();
    for &e in set {
        let edge = g.edge(e).unwrap();
        if edge.is_loop() {
            return set.len() == 1;
        }
        *degree.entry(edge.u).or_insert(0) += 1;
        *degree.entry(edge.v).or_insert(0) += 1;
    }
    if degree.len() != set.len() || degree.values().any(|&d| d != 2) {
        return false;
    }
    // connected: walk from the first edge
    let mut seen = BTreeSet::from([set[0]]);
    let mut frontier = vec![set[0]];
    while let Some(e) = frontier.pop() {
        let a = g.edge(e).unwrap();
        for &f in set {
            let b = g.edge(f).unwrap();
            if !seen.contains(&f) && (b.touches(a.u) || b.touches(a.v)) {
                seen.insert(f);
                frontier.push(f);
            }
        }
    }
    seen.len() == set.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cycle_enumeration_matches_subsets(n in (2usize..=5).prop_map(|k| 2 * k), seed in any::<u64>(), length in 1usize..=6, multi in any::<bool>()) {
        let g = if multi { weighted_multigraph(n, seed) } else { weighted_cubic(n.max(4), seed) };
        let g = with_random_forced(g, seed, 0.2);
        let pool: Vec<EdgeId> = g.edges().filter(|e| !e.forced).map(|e| e.id).collect();
        let expected = brute_force_cycles(&g, &pool, length);
        let got: BTreeSet<Vec<EdgeId>> = find_unforced_cycles(&g, length, true).iter().map(|c| c.key()).collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn girth_matches_subsets(n in (2usize..=5).prop_map(|k| 2 * k), seed in any::<u64>()) {
        let g = weighted_cubic(n.max(4), seed);
        let pool: Vec<EdgeId> = g.edges().map(|e| e.id).collect();
        let expected = (3..=n).find(|&l| !brute_force_cycles(&g, &pool, l).is_empty());
        prop_assert_eq!(girth(&g), expected);
    }

    #[test]
    fn generated_graphs_are_cubic(n in (2usize..=20).prop_map(|k| 2 * k), seed in any::<u64>()) {
        let g = random_cubic(n, seed).unwrap();
        prop_assert_eq!(g.degree_sum(), 2 * g.edge_count());
        prop_assert_eq!(g.edge_count(), 3 * n / 2);
        prop_assert!(g.is_simple() && g.is_connected());
    }

    #[test]
    fn graph_file_round_trip(n in (2usize..=8).prop_map(|k| 2 * k), seed in any::<u64>()) {
        let g = weighted_cubic(n.max(4), seed);
        let back = load_graph(&to_graph_file(&g)).unwrap();
        let key = |g: &WeightedMultigraph| g.edges().map(|e| (e.key(), e.cost)).collect::<Vec<_>>();
        prop_assert_eq!(key(&back), key(&g));
    }

    #[test]
    fn closure_matches_brute_force(k in 1usize..=6, seed in any::<u64>()) {
        let g = closure_state(k, seed);
        let log = RewriteLog::new(&g);
        let fast = solve_4cycle_closure(&g, &log);
        let slow = brute_force_closure(&g, &log).unwrap();
        prop_assert_eq!(fast.cost(), slow.cost());
        if let cubic_tsp::Outcome::Tour { cost, edges } = &fast {
            prop_assert_eq!(tour_cost(&g, edges), Some(*cost));
        }
    }

    #[test]
    fn rewrites_keep_the_optimal_completion(n in (2usize..=7).prop_map(|k| 2 * k), seed in any::<u64>(), multi in any::<bool>()) {
        let g = if multi { weighted_multigraph(n, seed) } else { weighted_cubic(n.max(4), seed) };
        let mut bad = Vec::new();
        probe_path(&g, seed, |p| if !p.sound() { bad.push(p) });
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }

    #[test]
    fn rewrite_log_rolls_back(n in (2usize..=8).prop_map(|k| 2 * k), seed in any::<u64>()) {
        let g = with_random_forced(weighted_cubic(n.max(4), seed), seed, 0.25);
        let mut log = RewriteLog::new(&g);
        let mark = log.checkpoint();
        let mut h = g.clone();
        simplify(&mut h, &mut log);
        let input_edges = log.input_edges();
        for e in 0..input_edges {
            prop_assert_eq!(log.expand(e), vec![e]);
        }
        // expansions of the surviving edges never share an input edge
        let mut seen = BTreeSet::new();
        for e in h.edges() {
            for x in log.expand(e.id) {
                prop_assert!(x < input_edges);
                prop_assert!(seen.insert(x), "input edge {} expanded twice", x);
            }
        }
        log.rollback(mark);
        prop_assert!(log.records().is_empty());
        prop_assert_eq!(log.checkpoint(), mark);
    }

    #[test]
    fn solve_matches_held_karp(n in (4usize..=7).prop_map(|k| 2 * k), seed in any::<u64>()) {
        let g = weighted_cubic(n, seed);
        let r = solve(&g, &SearchConfig { seed, ..Default::default() }).unwrap();
        prop_assert_eq!(r.outcome.cost(), held_karp(&g).unwrap());
    }

    #[test]
    fn solve_is_deterministic(n in (4usize..=12).prop_map(|k| 2 * k), seed in any::<u64>()) {
        let g = weighted_cubic(n, seed);
        let config = SearchConfig { seed, trace: true, ..Default::default() };
        let x = solve(&g, &config).unwrap();
        let y = solve(&g, &config).unwrap();
        prop_assert_eq!(x.outcome, y.outcome);
        prop_assert_eq!(x.stats, y.stats);
        prop_assert_eq!(x.trace, y.trace);
    }
}

#[test]
fn eval_t_is_monotone() {
    let values: Vec<_> = (1..=120).map(|n| eval_t(n).unwrap().value).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
}
