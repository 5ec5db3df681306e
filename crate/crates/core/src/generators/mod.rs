//! Instance families: random cubic graphs, cages and graphs with `2^(n/3)`
//! Hamiltonian cycles.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{girth, load_graph, WeightedMultigraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("3-regular graphs need even order (got {0})")]
    OddOrder(usize),
    #[error("order {0} is too small (need at least {1})")]
    TooSmall(usize, usize),
    #[error("order {0} is not a multiple of 6")]
    NotMultipleOfSix(usize),
    #[error("no cage for girth {0} (catalog covers 3..=11)")]
    GirthOutOfRange(usize),
    #[error("cost range {0}..={1} is empty")]
    EmptyCostRange(u64, u64),
    #[error("cage catalog entry for girth {girth} is corrupt: {reason}")]
    CorruptCatalog { girth: usize, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CostPolicy {
    Unit,
    /// Independent uniform costs in `lo..=hi`, drawn in edge-id order.
    Uniform { lo: u64, hi: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    RandomCubic { n: usize, seed: u64 },
    Cage { girth: usize },
    HcRich { n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub costs: CostPolicy,
}

pub fn generate(spec: &GeneratorSpec) -> Result<WeightedMultigraph, GeneratorError> {
    let mut g = match spec.kind {
        GeneratorKind::RandomCubic { n, seed } => random_cubic(n, seed)?,
        GeneratorKind::Cage { girth } => cage(girth)?,
        GeneratorKind::HcRich { n } => hc_rich_family(n)?,
    };
    apply_costs(&mut g, spec.costs)?;
    Ok(g)
}

/// Rebuilds `g` with costs drawn from `policy`.
pub fn apply_costs(g: &mut WeightedMultigraph, policy: CostPolicy) -> Result<(), GeneratorError> {
    let mut draw: Box<dyn FnMut() -> u64> = match policy {
        CostPolicy::Unit => Box::new(|| 1),
        CostPolicy::Uniform { lo, hi, .. } if lo > hi => return Err(GeneratorError::EmptyCostRange(lo, hi)),
        CostPolicy::Uniform { lo, hi, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Box::new(move || rng.random_range(lo..=hi))
        }
    };
    let mut out = WeightedMultigraph::with_vertices(g.vertex_slots());
    for e in g.edges() {
        out.add_edge(e.u, e.v, draw());
    }
    *g = out;
    Ok(())
}

fn check_order(n: usize) -> Result<(), GeneratorError> {
    if n % 2 == 1 {
        return Err(GeneratorError::OddOrder(n));
    }
    if n < 4 {
        return Err(GeneratorError::TooSmall(n, 4));
    }
    Ok(())
}

/// Pairs the `3n` stubs uniformly at random.
fn pairing(n: usize, rng: &mut ChaCha8Rng) -> WeightedMultigraph {
    let mut stubs: Vec<usize> = (0..3 * n).map(|i| i / 3).collect();
    stubs.shuffle(rng);
    let mut g = WeightedMultigraph::with_vertices(n);
    for pair in stubs.chunks(2) {
        g.add_edge(pair[0].min(pair[1]), pair[0].max(pair[1]), 1);
    }
    g
}

/// Simple connected cubic graph on `n` vertices with unit costs, from the
/// pairing model with rejection.
pub fn random_cubic(n: usize, seed: u64) -> Result<WeightedMultigraph, GeneratorError> {
    check_order(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g = pairing(n, &mut rng);
        if g.is_simple() && g.is_connected() {
            return Ok(g);
        }
    }
}

/// Connected cubic multigraph on `n` vertices: the pairing model keeping
/// self-loops and parallel edges.
pub fn random_cubic_multigraph(n: usize, seed: u64) -> Result<WeightedMultigraph, GeneratorError> {
    check_order(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g = pairing(n, &mut rng);
        if g.is_connected() {
            return Ok(g);
        }
    }
}

const CAGES: [(usize, usize, &str); 9] = [
    (3, 4, include_str!("../../data/cages/girth-03.graph")),
    (4, 6, include_str!("../../data/cages/girth-04.graph")),
    (5, 10, include_str!("../../data/cages/girth-05.graph")),
    (6, 14, include_str!("../../data/cages/girth-06.graph")),
    (7, 24, include_str!("../../data/cages/girth-07.graph")),
    (8, 30, include_str!("../../data/cages/girth-08.graph")),
    (9, 58, include_str!("../../data/cages/girth-09.graph")),
    (10, 70, include_str!("../../data/cages/girth-10.graph")),
    (11, 112, include_str!("../../data/cages/girth-11.graph")),
];

/// Order of the `(3, girth)`-cage.
pub fn cage_order(girth: usize) -> Option<usize> {
    CAGES.iter().find(|c| c.0 == girth).map(|c| c.1)
}

/// The `(3, girth)`-cage with unit costs. Order, regularity and girth of the
/// catalog entry are checked on every call.
pub fn cage(want: usize) -> Result<WeightedMultigraph, GeneratorError> {
    let &(_, order, text) = CAGES.iter().find(|c| c.0 == want).ok_or(GeneratorError::GirthOutOfRange(want))?;
    let corrupt = |reason: String| GeneratorError::CorruptCatalog { girth: want, reason };
    let g = load_graph(text).map_err(|e| corrupt(e.to_string()))?;
    if g.vertex_count() != order || !g.is_cubic() || !g.is_simple() {
        return Err(corrupt(format!("expected a simple cubic graph on {order} vertices")));
    }
    if girth(&g) != Some(want) {
        return Err(corrupt(format!("girth is {:?}", girth(&g))));
    }
    Ok(g)
}

/// Cubic graph on `n` vertices (`n` a multiple of 6) with exactly `2^(n/3)`
/// Hamiltonian cycles, unit costs.
///
/// For `n >= 12` this is a ring of `n/6` copies of K3,3 minus an edge `st`,
/// `t` of each copy joined to `s` of the next. Each copy is crossed by
/// exactly four Hamiltonian `s`-`t` paths. For `n = 6` the ring would close
/// into K3,3 itself (six cycles), and no simple cubic graph on six vertices
/// has four, so the 2-rung ladder with doubled end rungs is returned.
pub fn hc_rich_family(n: usize) -> Result<WeightedMultigraph, GeneratorError> {
    if n % 6 != 0 {
        return Err(GeneratorError::NotMultipleOfSix(n));
    }
    if n < 6 {
        return Err(GeneratorError::TooSmall(n, 6));
    }
    if n == 6 {
        let mut g = WeightedMultigraph::with_vertices(6);
        for (u, v) in [(0, 1), (0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 5), (4, 5), (4, 5)] {
            g.add_edge(u, v, 1);
        }
        return Ok(g);
    }
    let k = n / 6;
    let mut g = WeightedMultigraph::with_vertices(n);
    // copy i uses s, a, b, c, d, t = 6i .. 6i+5
    for i in 0..k {
        let [s, a, b, c, d, t] = std::array::from_fn(|j| 6 * i + j);
        for (u, v) in [(s, a), (s, b), (a, c), (a, d), (b, c), (b, d), (c, t), (d, t)] {
            g.add_edge(u, v, 1);
        }
        g.add_edge(t, 6 * ((i + 1) % k), 1);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::to_graph_file;
    use crate::oracle::count_hamiltonian_cycles;

    #[test]
    fn random_cubic_contract() {
        let g = random_cubic(10, 1).unwrap();
        assert_eq!(g.edge_count(), 15);
        assert!(g.is_cubic() && g.is_simple() && g.is_connected());
        let k4 = random_cubic(4, 99).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert!(k4.is_simple());
        assert_eq!(random_cubic(7, 0).unwrap_err(), GeneratorError::OddOrder(7));
        assert_eq!(random_cubic(7, 0).unwrap_err().to_string(), "3-regular graphs need even order (got 7)");
    }

    #[test]
    fn reproducible() {
        let a = to_graph_file(&random_cubic(30, 5).unwrap());
        let b = to_graph_file(&random_cubic(30, 5).unwrap());
        assert_eq!(a, b);
        assert_ne!(a, to_graph_file(&random_cubic(30, 6).unwrap()));
    }

    #[test]
    fn multigraph_variant_is_cubic() {
        for seed in 0..20 {
            let g = random_cubic_multigraph(8, seed).unwrap();
            assert!(g.is_cubic() && g.is_connected());
        }
    }

    #[test]
    fn small_cages() {
        assert_eq!(cage(3).unwrap().vertex_count(), 4);
        let petersen = cage(5).unwrap();
        assert_eq!(petersen.vertex_count(), 10);
        assert_eq!(girth(&petersen), Some(5));
        assert_eq!(cage(12).unwrap_err(), GeneratorError::GirthOutOfRange(12));
        assert_eq!(cage_order(8), Some(30));
    }

    #[test]
    fn hc_family_small() {
        assert_eq!(count_hamiltonian_cycles(&hc_rich_family(6).unwrap()), Ok(4));
        let g = hc_rich_family(12).unwrap();
        assert!(g.is_cubic() && g.is_simple() && g.is_connected());
        assert_eq!(count_hamiltonian_cycles(&g), Ok(16));
        assert_eq!(hc_rich_family(9).unwrap_err(), GeneratorError::NotMultipleOfSix(9));
    }

    #[test]
    fn uniform_costs() {
        let spec = GeneratorSpec {
            kind: GeneratorKind::RandomCubic { n: 12, seed: 2 },
            costs: CostPolicy::Uniform { lo: 1, hi: 100, seed: 9 },
        };
        let g = generate(&spec).unwrap();
        assert!(g.edges().all(|e| (1..=100).contains(&e.cost)));
        assert_eq!(to_graph_file(&g), to_graph_file(&generate(&spec).unwrap()));
    }
}
