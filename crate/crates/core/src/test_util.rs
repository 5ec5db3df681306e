use crate::graph::WeightedMultigraph;

pub(crate) fn graph_from(n: usize, edges: &[(usize, usize)]) -> WeightedMultigraph {
    let mut g = WeightedMultigraph::with_vertices(n);
    for &(u, v) in edges {
        g.add_edge(u, v, 1);
    }
    g
}
