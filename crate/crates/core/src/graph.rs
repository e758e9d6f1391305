//! Multipartite host graphs and the counting primitives everything else builds on.
//!
//! Vertices are numbered `0..N` contiguously per part: part 0 owns
//! `0..n_0`, part 1 owns `n_0..n_0+n_1`, and so on. Neighborhoods are word
//! bitsets so that intersections and degree-to-part queries cost `O(N / 64)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// ============================================================================
// VertexSet
// ============================================================================

const WORD: usize = 64;

/// A set of vertex ids drawn from `0..universe`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
    universe: usize,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        VertexSet {
            words: vec![0; universe.div_ceil(WORD)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::new(universe);
        for v in 0..universe {
            s.insert(v);
        }
        s
    }

    pub fn from_iter_in(universe: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(universe);
        for v in items {
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Inserts `v`; returns whether it was newly added.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let (w, b) = (v / WORD, v % WORD);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let (w, b) = (v / WORD, v % WORD);
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        present
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / WORD] & (1 << (v % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.universe, other.universe);
        VertexSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            universe: self.universe,
        }
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.universe, other.universe);
        VertexSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
            universe: self.universe,
        }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.universe, other.universe);
        VertexSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
            universe: self.universe,
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Removes every member `<= v`.
    pub fn retain_above(&mut self, v: usize) {
        let w = v / WORD;
        for word in self.words.iter_mut().take(w) {
            *word = 0;
        }
        if w < self.words.len() {
            let b = v % WORD;
            let keep = if b == WORD - 1 { 0 } else { !0u64 << (b + 1) };
            self.words[w] &= keep;
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(i * WORD + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

// ============================================================================
// PartSizes
// ============================================================================

/// Class sizes `(n_1, ..., n_r)` in their original order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PartSizes(Vec<usize>);

impl PartSizes {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidSizes("at least one part is required".into()));
        }
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidSizes(format!("part {} has size 0", i + 1)));
        }
        Ok(PartSizes(sizes))
    }

    /// Parses signed input so that negative sizes surface as `InvalidSizes`.
    pub fn from_signed(sizes: &[i64]) -> Result<Self> {
        let mut out = Vec::with_capacity(sizes.len());
        for (i, &s) in sizes.iter().enumerate() {
            if s <= 0 {
                return Err(Error::InvalidSizes(format!("part {} has size {s}", i + 1)));
            }
            out.push(s as usize);
        }
        Self::new(out)
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self, part: usize) -> usize {
        self.0[part]
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Sum of the sizes of the listed parts (`n_I`).
    pub fn sum_of(&self, parts: &[usize]) -> usize {
        parts.iter().map(|&i| self.0[i]).sum()
    }

    /// The sizes in non-ascending order.
    pub fn sorted_view(&self) -> Vec<usize> {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    /// Original part indices listed in non-ascending size order; ties keep
    /// the lower index first.
    pub fn sort_permutation(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.r()).collect();
        idx.sort_by(|&a, &b| self.0[b].cmp(&self.0[a]).then(a.cmp(&b)));
        idx
    }

    pub fn sorted(&self) -> PartSizes {
        PartSizes(self.sorted_view())
    }

    /// First vertex id of `part`.
    pub fn offset(&self, part: usize) -> usize {
        self.0[..part].iter().sum()
    }

    pub fn vertex_range(&self, part: usize) -> std::ops::Range<usize> {
        let start = self.offset(part);
        start..start + self.0[part]
    }

    /// Dash-joined sorted sizes, e.g. `5-4-3-2`.
    pub fn key(&self) -> String {
        self.sorted_view()
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

impl TryFrom<Vec<usize>> for PartSizes {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        PartSizes::new(v)
    }
}

impl From<PartSizes> for Vec<usize> {
    fn from(p: PartSizes) -> Self {
        p.0
    }
}

impl fmt::Display for PartSizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

// ============================================================================
// MultipartiteGraph
// ============================================================================

/// A simple graph on `Σ n_i` vertices with a fixed part assignment and no
/// intra-part edges.
#[derive(Clone, PartialEq, Eq)]
pub struct MultipartiteGraph {
    parts: PartSizes,
    part_of: Vec<usize>,
    part_sets: Vec<VertexSet>,
    adj: Vec<VertexSet>,
    edges: u64,
}

impl MultipartiteGraph {
    /// The edgeless graph with the given part structure.
    pub fn new(parts: PartSizes) -> Self {
        let n = parts.total();
        let mut part_of = Vec::with_capacity(n);
        let mut part_sets = Vec::with_capacity(parts.r());
        for (i, &s) in parts.sizes().iter().enumerate() {
            let start = part_of.len();
            part_of.extend(std::iter::repeat_n(i, s));
            part_sets.push(VertexSet::from_iter_in(n, start..start + s));
        }
        MultipartiteGraph {
            parts,
            part_of,
            part_sets,
            adj: vec![VertexSet::new(n); n],
            edges: 0,
        }
    }

    pub fn parts(&self) -> &PartSizes {
        &self.parts
    }

    pub fn r(&self) -> usize {
        self.parts.r()
    }

    pub fn vertex_count(&self) -> usize {
        self.part_of.len()
    }

    pub fn edge_count(&self) -> u64 {
        self.edges
    }

    pub fn part_of(&self, v: usize) -> usize {
        self.part_of[v]
    }

    /// `V_i` as a vertex set.
    pub fn part_vertices(&self, part: usize) -> &VertexSet {
        &self.part_sets[part]
    }

    /// `V_I` for a set of part indices.
    pub fn vertices_of(&self, parts: &[usize]) -> VertexSet {
        let mut s = VertexSet::new(self.vertex_count());
        for &p in parts {
            for v in self.parts.vertex_range(p) {
                s.insert(v);
            }
        }
        s
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count())
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.vertex_count())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.vertex_count(),
            });
        }
        Ok(())
    }

    fn check_cross(&self, x: usize, y: usize) -> Result<()> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if self.part_of[x] == self.part_of[y] {
            return Err(Error::PartViolation {
                x,
                y,
                part: self.part_of[x],
            });
        }
        Ok(())
    }

    /// Adds the edge `xy`. Returns `true` if it was not already present.
    pub fn add_edge(&mut self, x: usize, y: usize) -> Result<bool> {
        self.check_cross(x, y)?;
        let fresh = self.adj[x].insert(y);
        self.adj[y].insert(x);
        if fresh {
            self.edges += 1;
        }
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, x: usize, y: usize) -> bool {
        if x >= self.vertex_count() || y >= self.vertex_count() {
            return false;
        }
        let present = self.adj[x].remove(y);
        self.adj[y].remove(x);
        if present {
            self.edges -= 1;
        }
        present
    }

    /// Adds every edge between the two vertex sets; pairs inside one part are skipped.
    pub fn join(&mut self, a: &VertexSet, b: &VertexSet) {
        for x in a.iter() {
            for y in b.iter() {
                if x != y && self.part_of[x] != self.part_of[y] {
                    if self.adj[x].insert(y) {
                        self.edges += 1;
                    }
                    self.adj[y].insert(x);
                }
            }
        }
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        x < self.vertex_count() && self.adj[x].contains(y)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// `d(v, V_I)`: neighbors of `v` inside the listed parts.
    pub fn degree_to(&self, v: usize, parts: &[usize]) -> usize {
        parts
            .iter()
            .map(|&p| self.adj[v].intersection_len(&self.part_sets[p]))
            .sum()
    }

    pub fn degree_into(&self, v: usize, set: &VertexSet) -> usize {
        self.adj[v].intersection_len(set)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// `e(T; G) = e(G) - e(G \ T)`: edges with at least one end in `T`.
    pub fn edges_incident(&self, t: &VertexSet) -> u64 {
        let mut inside = 0u64;
        let mut touching = 0u64;
        for v in t.iter() {
            touching += self.degree(v) as u64;
            inside += self.adj[v].intersection_len(t) as u64;
        }
        // edges inside T were counted twice in `touching`
        touching - inside / 2
    }

    /// Number of edges with both ends in `a` (if `a == b`) or between disjoint `a` and `b`.
    pub fn edges_between(&self, a: &VertexSet, b: &VertexSet) -> u64 {
        let raw: u64 = a.iter().map(|v| self.adj[v].intersection_len(b) as u64).sum();
        if a == b {
            raw / 2
        } else {
            raw
        }
    }

    /// `N(x) ∩ N(y)` for a cross pair.
    pub fn common_neighbors(&self, x: usize, y: usize) -> Result<VertexSet> {
        self.check_cross(x, y)?;
        Ok(self.adj[x].intersection(&self.adj[y]))
    }

    /// Induced subgraph on `V \ T`, renumbered contiguously per part.
    pub fn remove_vertices(&self, t: &VertexSet) -> Result<MultipartiteGraph> {
        let n = self.vertex_count();
        let mut new_sizes = Vec::with_capacity(self.r());
        for p in 0..self.r() {
            let left = self.part_sets[p].len() - self.part_sets[p].intersection_len(t);
            if left == 0 {
                return Err(Error::DegenerateParts(p));
            }
            new_sizes.push(left);
        }
        let mut relabel = vec![usize::MAX; n];
        let mut next = 0;
        for (v, slot) in relabel.iter_mut().enumerate() {
            if !t.contains(v) {
                *slot = next;
                next += 1;
            }
        }
        let mut out = MultipartiteGraph::new(PartSizes::new(new_sizes)?);
        for (x, y) in self.edges() {
            if !t.contains(x) && !t.contains(y) {
                out.add_edge(relabel[x], relabel[y])?;
            }
        }
        Ok(out)
    }

    /// Edges `(x, y)` with `x < y`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count()).flat_map(move |x| {
            self.adj[x].iter().filter(move |&y| y > x).map(move |y| (x, y))
        })
    }

    /// Checks symmetry and part discipline of the adjacency structure.
    pub fn check_invariants(&self) -> bool {
        let mut count = 0u64;
        for x in 0..self.vertex_count() {
            for y in self.adj[x].iter() {
                if y == x || self.part_of[x] == self.part_of[y] || !self.adj[y].contains(x) {
                    return false;
                }
                count += 1;
            }
        }
        count == 2 * self.edges
    }

    // ------------------------------------------------------------------------
    // Text format
    // ------------------------------------------------------------------------

    /// Parses the `parts ...` / `edge u v` text format.
    pub fn parse_text(text: &str) -> Result<MultipartiteGraph> {
        let mut graph: Option<MultipartiteGraph> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let mut tokens = line.split_whitespace();
            let keyword = tokens.next().unwrap_or_default();
            match (keyword, graph.as_mut()) {
                ("parts", None) => {
                    let sizes = tokens
                        .map(|t| t.parse::<i64>().map_err(|e| perr(format!("bad size {t:?}: {e}"))))
                        .collect::<Result<Vec<_>>>()?;
                    let parts = PartSizes::from_signed(&sizes).map_err(|e| perr(e.to_string()))?;
                    graph = Some(MultipartiteGraph::new(parts));
                }
                ("parts", Some(_)) => return Err(perr("duplicate parts header".into())),
                ("edge", None) => return Err(perr("edge before parts header".into())),
                ("edge", Some(g)) => {
                    let ids = tokens
                        .map(|t| t.parse::<usize>().map_err(|e| perr(format!("bad vertex id {t:?}: {e}"))))
                        .collect::<Result<Vec<_>>>()?;
                    if ids.len() != 2 {
                        return Err(perr(format!("expected 2 vertex ids, found {}", ids.len())));
                    }
                    g.add_edge(ids[0], ids[1]).map_err(|e| perr(e.to_string()))?;
                }
                (other, _) => return Err(perr(format!("unknown directive {other:?}"))),
            }
        }
        graph.ok_or(Error::Parse {
            line: text.lines().count().max(1),
            message: "missing parts header".into(),
        })
    }

    /// Serializes in canonical form: header, then edges sorted by `(min, max)`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("parts");
        for s in self.parts.sizes() {
            out.push(' ');
            out.push_str(&s.to_string());
        }
        out.push('\n');
        for (x, y) in self.edges() {
            out.push_str(&format!("edge {x} {y}\n"));
        }
        out
    }
}

impl fmt::Debug for MultipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultipartiteGraph")
            .field("parts", &self.parts)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl fmt::Display for MultipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    parts: PartSizes,
    edges: Vec<(usize, usize)>,
}

impl Serialize for MultipartiteGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            parts: self.parts.clone(),
            edges: self.edges().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultipartiteGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(d)?;
        let mut g = MultipartiteGraph::new(repr.parts);
        for (x, y) in repr.edges {
            g.add_edge(x, y).map_err(serde::de::Error::custom)?;
        }
        Ok(g)
    }
}
