//! Generators for the extremal and near-extremal graphs.
//!
//! Every generator accepts sizes in any order. Roles such as "`V_1` = the
//! largest class" are assigned through the stable non-ascending sort
//! permutation, and the output graph keeps the caller's part order. The
//! special set `Z` is always the lowest-indexed `k-1` vertices of its class.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::{conj_value, g_terms};
use crate::graph::{MultipartiteGraph, PartSizes, VertexSet};
use crate::partition::BlockPartition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionKind {
    G1,
    G2,
    ConjecturedExtremal,
    CompleteMultipartite,
    BipartiteAlongPartition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionSpec {
    pub kind: ConstructionKind,
    pub ns: PartSizes,
    pub t: Option<usize>,
    pub k: usize,
    pub partition: Option<BlockPartition>,
}

/// A generated graph together with the data needed to re-derive it.
#[derive(Clone, Debug)]
pub struct Construction {
    pub spec: ConstructionSpec,
    pub graph: MultipartiteGraph,
    /// Edge count predicted by the closed form.
    pub expected_edges: u64,
    /// The special vertices joined beyond the complete multipartite skeleton.
    pub z: Vec<usize>,
    /// Original part indices in non-ascending size order (`role_order[0]` plays `V_1`).
    pub role_order: Vec<usize>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    kind: ConstructionKind,
    ns: &'a [usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<usize>,
    k: usize,
    expected_edges: u64,
    partition: Option<Vec<Vec<usize>>>,
    z: &'a [usize],
}

impl Construction {
    /// JSON sidecar describing the construction.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::to_value(Sidecar {
            kind: self.spec.kind,
            ns: self.spec.ns.sizes(),
            t: self.spec.t,
            k: self.spec.k,
            expected_edges: self.expected_edges,
            partition: self.spec.partition.as_ref().map(|p| p.one_based()),
            z: &self.z,
        })
        .expect("sidecar is plain data")
    }
}

fn four_roles(ns: &PartSizes, k: usize) -> Result<([usize; 4], [u64; 4])> {
    if ns.r() != 4 {
        return Err(Error::InvalidParameter(format!("expected 4 parts, got {}", ns.r())));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let perm = ns.sort_permutation();
    let roles = [perm[0], perm[1], perm[2], perm[3]];
    let sizes = roles.map(|p| ns.size(p) as u64);
    if sizes[3] < (k - 1) as u64 {
        return Err(Error::InfeasibleConstruction(format!(
            "smallest part has {} vertices but Z needs k-1 = {}",
            sizes[3],
            k - 1
        )));
    }
    Ok((roles, sizes))
}

fn first_vertices(ns: &PartSizes, part: usize, count: usize) -> Vec<usize> {
    ns.vertex_range(part).take(count).collect()
}

/// `G1 = K_{V1∪V4, V2∪V3} ∪ K_{Z, V1}` with `Z ⊆ V4`, `|Z| = k-1`.
pub fn build_g1(ns: &PartSizes, k: usize) -> Result<Construction> {
    let (roles, sizes) = four_roles(ns, k)?;
    let mut g = MultipartiteGraph::new(ns.clone());
    let left = g.vertices_of(&[roles[0], roles[3]]);
    let right = g.vertices_of(&[roles[1], roles[2]]);
    g.join(&left, &right);
    let z = first_vertices(ns, roles[3], k - 1);
    let zs = VertexSet::from_iter_in(g.vertex_count(), z.iter().copied());
    let v1 = g.vertices_of(&[roles[0]]);
    g.join(&zs, &v1);
    Ok(Construction {
        spec: ConstructionSpec {
            kind: ConstructionKind::G1,
            ns: ns.clone(),
            t: Some(3),
            k,
            partition: None,
        },
        graph: g,
        expected_edges: g_terms(sizes, k as u64).0,
        z,
        role_order: roles.to_vec(),
    })
}

/// `G2 = K_{V1, V2∪V3∪V4} ∪ K_{Z, V2∪V3}` with `Z ⊆ V4`, `|Z| = k-1`.
pub fn build_g2(ns: &PartSizes, k: usize) -> Result<Construction> {
    let (roles, sizes) = four_roles(ns, k)?;
    let mut g = MultipartiteGraph::new(ns.clone());
    let v1 = g.vertices_of(&[roles[0]]);
    let rest = g.vertices_of(&[roles[1], roles[2], roles[3]]);
    g.join(&v1, &rest);
    let z = first_vertices(ns, roles[3], k - 1);
    let zs = VertexSet::from_iter_in(g.vertex_count(), z.iter().copied());
    let middle = g.vertices_of(&[roles[1], roles[2]]);
    g.join(&zs, &middle);
    Ok(Construction {
        spec: ConstructionSpec {
            kind: ConstructionKind::G2,
            ns: ns.clone(),
            t: Some(3),
            k,
            partition: None,
        },
        graph: g,
        expected_edges: g_terms(sizes, k as u64).1,
        z,
        role_order: roles.to_vec(),
    })
}

/// The graph realizing the conjectured value: complete between the blocks
/// of `partition`, plus `Z ⊆ V_{i0}` joined to `V_{I0} \ V_{i0}`, where `I0`
/// is the block of largest surplus and `V_{i0}` its smallest class.
///
/// With `partition = None` the lexicographically least maximizer is used.
pub fn build_conjectured(
    ns: &PartSizes,
    t: usize,
    k: usize,
    partition: Option<BlockPartition>,
) -> Result<Construction> {
    if t < 2 || k < 1 {
        return Err(Error::InvalidParameter(format!("need t >= 2 and k >= 1, got t={t}, k={k}")));
    }
    if ns.r() < t - 1 {
        return Err(Error::InvalidParameter(format!(
            "need at least t-1 = {} parts, got {}",
            t - 1,
            ns.r()
        )));
    }
    let partition = match partition {
        Some(p) => {
            if p.len() != t - 1 {
                return Err(Error::InvalidParameter(format!(
                    "partition has {} blocks, expected t-1 = {}",
                    p.len(),
                    t - 1
                )));
            }
            if p.blocks().iter().flatten().any(|&i| i >= ns.r()) || p.blocks().iter().map(Vec::len).sum::<usize>() != ns.r() {
                return Err(Error::InvalidParameter("partition does not match the part sizes".into()));
            }
            // recompute the cached sums against these sizes
            BlockPartition::new(p.blocks().to_vec(), ns)?
        }
        None => conj_value(ns, t, k)?
            .argmax_partition
            .expect("conj_value always returns a partition"),
    };

    let mut g = MultipartiteGraph::new(ns.clone());
    let block_sets: Vec<VertexSet> = partition.blocks().iter().map(|b| g.vertices_of(b)).collect();
    for i in 0..block_sets.len() {
        for j in i + 1..block_sets.len() {
            g.join(&block_sets[i], &block_sets[j]);
        }
    }

    let i0_block = &partition.blocks()[partition.surplus_block()];
    let i0 = *i0_block
        .iter()
        .min_by_key(|&&p| (ns.size(p), p))
        .expect("blocks are nonempty");
    let z = if k > 1 && i0_block.len() > 1 {
        if ns.size(i0) < k - 1 {
            return Err(Error::InfeasibleConstruction(format!(
                "part {} has {} vertices but Z needs k-1 = {}",
                i0 + 1,
                ns.size(i0),
                k - 1
            )));
        }
        let z = first_vertices(ns, i0, k - 1);
        let zs = VertexSet::from_iter_in(g.vertex_count(), z.iter().copied());
        let others: Vec<usize> = i0_block.iter().copied().filter(|&p| p != i0).collect();
        let target = g.vertices_of(&others);
        g.join(&zs, &target);
        z
    } else {
        Vec::new()
    };

    let expected_edges = crate::formulas::conj_objective(&partition, k);
    Ok(Construction {
        spec: ConstructionSpec {
            kind: ConstructionKind::ConjecturedExtremal,
            ns: ns.clone(),
            t: Some(t),
            k,
            partition: Some(partition),
        },
        graph: g,
        expected_edges,
        z,
        role_order: ns.sort_permutation(),
    })
}

/// Complete bipartite graph between the two super-classes of a bipartition.
pub fn build_bipartite_along(ns: &PartSizes, partition: &BlockPartition) -> Result<Construction> {
    if partition.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "expected a bipartition, got {} blocks",
            partition.len()
        )));
    }
    let partition = BlockPartition::new(partition.blocks().to_vec(), ns)?;
    let mut g = MultipartiteGraph::new(ns.clone());
    let a = g.vertices_of(&partition.blocks()[0]);
    let b = g.vertices_of(&partition.blocks()[1]);
    g.join(&a, &b);
    let expected_edges = partition.block_sums()[0] * partition.block_sums()[1];
    Ok(Construction {
        spec: ConstructionSpec {
            kind: ConstructionKind::BipartiteAlongPartition,
            ns: ns.clone(),
            t: Some(3),
            k: 1,
            partition: Some(partition),
        },
        graph: g,
        expected_edges,
        z: Vec::new(),
        role_order: ns.sort_permutation(),
    })
}

/// The host `K_{n_1,...,n_r}`.
pub fn build_complete(ns: &PartSizes) -> Construction {
    let mut g = MultipartiteGraph::new(ns.clone());
    let all = g.all_vertices();
    g.join(&all, &all);
    let n = ns.total() as u64;
    let squares: u64 = ns.sizes().iter().map(|&s| (s * s) as u64).sum();
    Construction {
        spec: ConstructionSpec {
            kind: ConstructionKind::CompleteMultipartite,
            ns: ns.clone(),
            t: None,
            k: 1,
            partition: None,
        },
        graph: g,
        expected_edges: (n * n - squares) / 2,
        z: Vec::new(),
        role_order: ns.sort_permutation(),
    }
}
