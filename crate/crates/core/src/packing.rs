//! Vertex-disjoint clique packings, triangle enumeration, and the
//! rich-edge / full-empty structure used to study near-extremal graphs.

use serde::Serialize;

use crate::formulas::optimal_bipartition;
use crate::graph::{MultipartiteGraph, VertexSet};

// ============================================================================
// Cliques and triangles
// ============================================================================

/// Every triangle `x < y < z`, each exactly once, in lexicographic order.
pub fn triangles(g: &MultipartiteGraph) -> impl Iterator<Item = [usize; 3]> + '_ {
    (0..g.vertex_count()).flat_map(move |x| {
        g.neighbors(x).iter().filter(move |&y| y > x).flat_map(move |y| {
            let mut common = g.neighbors(x).intersection(g.neighbors(y));
            common.retain_above(y);
            common.to_vec().into_iter().map(move |z| [x, y, z])
        })
    })
}

pub fn enumerate_triangles(g: &MultipartiteGraph) -> Vec<[usize; 3]> {
    triangles(g).collect()
}

/// Calls `f` on every clique of `size` vertices inside `candidates`, in
/// lexicographic order. Stops early when `f` returns `true`; the return
/// value reports whether that happened.
pub fn for_each_clique(
    g: &MultipartiteGraph,
    candidates: &VertexSet,
    size: usize,
    f: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    fn go(
        g: &MultipartiteGraph,
        cand: &VertexSet,
        size: usize,
        current: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if size == 0 {
            return f(current);
        }
        if cand.len() < size {
            return false;
        }
        for u in cand.iter() {
            let mut next = cand.intersection(g.neighbors(u));
            next.retain_above(u);
            if next.len() + 1 < size {
                continue;
            }
            current.push(u);
            let stop = go(g, &next, size - 1, current, f);
            current.pop();
            if stop {
                return true;
            }
        }
        false
    }
    go(g, candidates, size, &mut Vec::with_capacity(size), f)
}

/// All `t`-cliques of `g` in lexicographic order.
pub fn cliques(g: &MultipartiteGraph, t: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_clique(g, &g.all_vertices(), t, &mut |c| {
        out.push(c.to_vec());
        false
    });
    out
}

// ============================================================================
// Packings
// ============================================================================

/// `k` pairwise vertex-disjoint `t`-cliques.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PackingWitness {
    pub cliques: Vec<Vec<usize>>,
}

impl PackingWitness {
    /// Re-checks the witness from scratch: sizes, adjacency, distinct parts and disjointness.
    pub fn verify(&self, g: &MultipartiteGraph, k: usize, t: usize) -> bool {
        if self.cliques.len() != k {
            return false;
        }
        let mut used = g.empty_set();
        for c in &self.cliques {
            if c.len() != t {
                return false;
            }
            for (i, &x) in c.iter().enumerate() {
                if x >= g.vertex_count() || !used.insert(x) {
                    return false;
                }
                for &y in &c[i + 1..] {
                    if !g.has_edge(x, y) || g.part_of(x) == g.part_of(y) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Packing search over the precomputed list of `t`-cliques.
struct Packer {
    t: usize,
    cliques: Vec<VertexSet>,
    members: Vec<Vec<usize>>,
}

impl Packer {
    fn new(g: &MultipartiteGraph, t: usize) -> Self {
        let members = cliques(g, t);
        let n = g.vertex_count();
        let cliques = members
            .iter()
            .map(|c| VertexSet::from_iter_in(n, c.iter().copied()))
            .collect();
        Packer { t, cliques, members }
    }

    fn live(&self, avail: &VertexSet, among: &[usize]) -> Vec<usize> {
        among
            .iter()
            .copied()
            .filter(|&c| self.cliques[c].is_subset(avail))
            .collect()
    }

    /// Disjoint cliques picked first-fit in list order.
    fn greedy(&self, live: &[usize], universe: usize) -> Vec<usize> {
        let mut used = VertexSet::new(universe);
        let mut out = Vec::new();
        for &c in live {
            if self.cliques[c].intersection_len(&used) == 0 {
                used = used.union(&self.cliques[c]);
                out.push(c);
            }
        }
        out
    }

    /// Size of a greedily built vertex set meeting every live clique; any
    /// packing has at most this many cliques.
    fn hitting_bound(&self, live: &[usize], universe: usize, cap: usize) -> usize {
        let mut remaining: Vec<usize> = live.to_vec();
        let mut hits = 0;
        let mut counts = vec![0usize; universe];
        while !remaining.is_empty() {
            if hits >= cap {
                return hits;
            }
            counts.iter_mut().for_each(|c| *c = 0);
            for &c in &remaining {
                for &v in &self.members[c] {
                    counts[v] += 1;
                }
            }
            let (best, _) = counts
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                .expect("nonempty universe");
            remaining.retain(|&c| !self.cliques[c].contains(best));
            hits += 1;
        }
        hits
    }

    fn search(&self, avail: &VertexSet, among: &[usize], need: usize, chosen: &mut Vec<usize>) -> bool {
        if need == 0 {
            return true;
        }
        if avail.len() < self.t * need {
            return false;
        }
        let live = self.live(avail, among);
        if live.len() < need {
            return false;
        }
        let universe = avail.universe();
        let greedy = self.greedy(&live, universe);
        if greedy.len() >= need {
            chosen.extend_from_slice(&greedy[..need]);
            return true;
        }
        if self.hitting_bound(&live, universe, need) < need {
            return false;
        }
        let mut covered = VertexSet::new(universe);
        for &c in &live {
            covered = covered.union(&self.cliques[c]);
        }
        if covered.len() < self.t * need {
            return false;
        }
        let v = covered.first().expect("live cliques cover something");
        for &c in live.iter().filter(|&&c| self.cliques[c].contains(v)) {
            chosen.push(c);
            let rest = avail.difference(&self.cliques[c]);
            if self.search(&rest, &live, need - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        let mut rest = avail.clone();
        rest.remove(v);
        self.search(&rest, &live, need, chosen)
    }

    fn find(&self, g: &MultipartiteGraph, k: usize) -> Option<PackingWitness> {
        let all: Vec<usize> = (0..self.cliques.len()).collect();
        let mut chosen = Vec::new();
        if self.search(&g.all_vertices(), &all, k, &mut chosen) {
            let mut cliques: Vec<Vec<usize>> = chosen.iter().map(|&c| self.members[c].clone()).collect();
            cliques.sort();
            Some(PackingWitness { cliques })
        } else {
            None
        }
    }
}

/// Finds `k` vertex-disjoint `t`-cliques, or `None` if `g` is `kK_t`-free.
pub fn find_clique_packing(g: &MultipartiteGraph, k: usize, t: usize) -> Option<PackingWitness> {
    assert!(t >= 2, "clique order must be at least 2");
    if k == 0 {
        return Some(PackingWitness { cliques: Vec::new() });
    }
    if g.vertex_count() < k * t || g.r() < t {
        return None;
    }
    Packer::new(g, t).find(g, k)
}

pub fn is_kkt_free(g: &MultipartiteGraph, k: usize, t: usize) -> bool {
    find_clique_packing(g, k, t).is_none()
}

/// The largest number of pairwise disjoint `t`-cliques.
pub fn max_packing_size(g: &MultipartiteGraph, t: usize) -> usize {
    assert!(t >= 2, "clique order must be at least 2");
    if g.r() < t {
        return 0;
    }
    let packer = Packer::new(g, t);
    let all: Vec<usize> = (0..packer.cliques.len()).collect();
    let mut best = packer.greedy(&all, g.vertex_count()).len();
    loop {
        let mut chosen = Vec::new();
        if packer.search(&g.all_vertices(), &all, best + 1, &mut chosen) {
            best += 1;
        } else {
            return best;
        }
    }
}

// ============================================================================
// Rich edges and pair structure
// ============================================================================

/// Rich edges: edges whose ends share at least `k` neighbors inside one part.
#[derive(Clone, Debug, Serialize)]
pub struct RichEdgeReport {
    pub k: usize,
    pub rich_edges: Vec<(usize, usize)>,
    /// Endpoints of rich edges.
    pub z_set: VertexSet,
    /// For each rich edge, common-neighbor counts per part.
    pub per_edge_counts: Vec<Vec<usize>>,
    /// Largest number of rich edges from one vertex into one class.
    pub max_same_class_rich_degree: usize,
    pub max_rich_degree: usize,
    /// Size of a greedy maximal matching of the rich graph.
    pub matching_size: usize,
    /// Vertex cover built from the matching endpoints (an upper bound on the minimum).
    pub cover_size: usize,
    /// Triangles with no rich edge.
    pub triangles_without_rich_edge: usize,
    /// Reference values from the structural argument, reported but never enforced.
    pub reference_max_degree: usize,
    pub reference_edge_bound: usize,
    pub reference_z_bound: usize,
}

pub fn per_part_common(g: &MultipartiteGraph, x: usize, y: usize) -> Vec<usize> {
    let common = g.neighbors(x).intersection(g.neighbors(y));
    (0..g.r()).map(|p| common.intersection_len(g.part_vertices(p))).collect()
}

pub fn is_rich(g: &MultipartiteGraph, x: usize, y: usize, k: usize) -> bool {
    g.has_edge(x, y) && per_part_common(g, x, y).iter().any(|&c| c >= k)
}

pub fn rich_edges(g: &MultipartiteGraph, k: usize) -> RichEdgeReport {
    let n = g.vertex_count();
    let mut rich = Vec::new();
    let mut counts = Vec::new();
    let mut z = VertexSet::new(n);
    let mut rich_adj = vec![VertexSet::new(n); n];
    for (x, y) in g.edges() {
        let c = per_part_common(g, x, y);
        if c.iter().any(|&v| v >= k) {
            rich.push((x, y));
            counts.push(c);
            z.insert(x);
            z.insert(y);
            rich_adj[x].insert(y);
            rich_adj[y].insert(x);
        }
    }
    let max_same_class_rich_degree = (0..n)
        .flat_map(|v| (0..g.r()).map(move |p| (v, p)))
        .map(|(v, p)| rich_adj[v].intersection_len(g.part_vertices(p)))
        .max()
        .unwrap_or(0);
    let max_rich_degree = rich_adj.iter().map(VertexSet::len).max().unwrap_or(0);

    let mut matched = VertexSet::new(n);
    let mut matching_size = 0;
    for &(x, y) in &rich {
        if !matched.contains(x) && !matched.contains(y) {
            matched.insert(x);
            matched.insert(y);
            matching_size += 1;
        }
    }
    let triangles_without_rich_edge = triangles(g)
        .filter(|&[a, b, c]| !(rich_adj[a].contains(b) || rich_adj[a].contains(c) || rich_adj[b].contains(c)))
        .count();
    let km1 = k.saturating_sub(1);
    RichEdgeReport {
        k,
        rich_edges: rich,
        z_set: z,
        per_edge_counts: counts,
        max_same_class_rich_degree,
        max_rich_degree,
        matching_size,
        cover_size: 2 * matching_size,
        triangles_without_rich_edge,
        reference_max_degree: 3 * km1,
        reference_edge_bound: 6 * km1 * km1,
        reference_z_bound: 6 * k * k,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    Full,
    Empty,
    Mixed,
}

/// Classifies the class pair `(V_i, V_j)` relative to `z`.
///
/// Full: every pair with at least one end outside `z` is an edge (vacuously
/// true when both classes lie inside `z`). Empty: no edge has an end
/// outside `z`. Full is tested first.
pub fn classify_pair(g: &MultipartiteGraph, z: &VertexSet, i: usize, j: usize) -> PairClass {
    assert_ne!(i, j, "pair classification needs two distinct classes");
    let vi = g.part_vertices(i);
    let vj = g.part_vertices(j);
    let vi_out = vi.difference(z);
    let vj_out = vj.difference(z);
    let full = vi_out.iter().all(|x| g.degree_into(x, vj) == vj.len())
        && vj_out.iter().all(|y| g.degree_into(y, vi) == vi.len());
    if full {
        return PairClass::Full;
    }
    if g.edges_between(&vi_out, vj) == 0 && g.edges_between(&vj_out, vi) == 0 {
        PairClass::Empty
    } else {
        PairClass::Mixed
    }
}

// ============================================================================
// Minimum degree and forced triangles
// ============================================================================

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MindegTriangle {
    pub min_degree: u64,
    pub threshold: u64,
    /// `δ(G)` exceeds the optimal-bipartition threshold.
    pub hypothesis_holds: bool,
    pub triangle: Option<[usize; 3]>,
}

impl MindegTriangle {
    /// The degree hypothesis holds yet no triangle exists.
    pub fn is_counterexample(&self) -> bool {
        self.hypothesis_holds && self.triangle.is_none()
    }
}

/// Searches for a triangle and reports whether the min-degree hypothesis forces one.
pub fn triangle_exists_under_mindeg(g: &MultipartiteGraph) -> MindegTriangle {
    let threshold = optimal_bipartition(g.parts()).map_or(0, |b| b.mindeg_threshold);
    let min_degree = g.min_degree() as u64;
    MindegTriangle {
        min_degree,
        threshold,
        hypothesis_holds: g.r() >= 2 && min_degree > threshold,
        triangle: triangles(g).next(),
    }
}
