//! Random multipartite graphs for property suites.

use rand::Rng;

use crate::graph::{MultipartiteGraph, PartSizes};

/// `r` uniform in `parts`, each size uniform in `sizes`.
pub fn random_sizes<R: Rng + ?Sized>(
    rng: &mut R,
    parts: std::ops::RangeInclusive<usize>,
    sizes: std::ops::RangeInclusive<usize>,
) -> PartSizes {
    let r = rng.gen_range(parts);
    let v = (0..r).map(|_| rng.gen_range(sizes.clone())).collect();
    PartSizes::new(v).expect("ranges start at 1")
}

/// Keeps each cross-part pair independently with probability `p`.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, ns: &PartSizes, p: f64) -> MultipartiteGraph {
    let mut g = MultipartiteGraph::new(ns.clone());
    let n = g.vertex_count();
    for x in 0..n {
        for y in x + 1..n {
            if g.part_of(x) != g.part_of(y) && rng.gen_bool(p) {
                g.add_edge(x, y).expect("cross-part pair");
            }
        }
    }
    g
}

/// Rejection-samples a graph with minimum degree above `floor`, drawing the
/// edge density uniformly from `density` on each attempt.
pub fn random_graph_with_min_degree<R: Rng + ?Sized>(
    rng: &mut R,
    ns: &PartSizes,
    floor: usize,
    density: std::ops::Range<f64>,
    attempts: usize,
) -> Option<MultipartiteGraph> {
    if ns.total() - ns.sizes().iter().max().copied().unwrap_or(0) <= floor {
        return None;
    }
    (0..attempts).find_map(|_| {
        let p = rng.gen_range(density.clone());
        let g = random_graph(rng, ns, p);
        (g.min_degree() > floor).then_some(g)
    })
}
