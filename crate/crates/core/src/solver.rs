//! Exact `ex(K_{n_1,...,n_r}, kK_t)` by branch and bound over edge subsets.
//!
//! The host's cross-part pairs ("slots") are decided in row-major order,
//! include before exclude. Three things keep the tree small:
//!
//! * an upper bound `edges + undecided - lb`, where `lb` counts conflicts
//!   (copies of `kK_t` in the included-plus-undecided graph) that are
//!   pairwise disjoint on undecided slots; each one forces an exclusion;
//! * an incumbent seeded from the known constructions, so only strictly
//!   better graphs are searched for;
//! * within-part symmetry breaking: for consecutive vertices `u < v` of one
//!   part, the adjacency row of `u` must be lexicographically `>=` that of
//!   `v` (vertex 0 most significant). The lexicographically largest
//!   relabelling of any graph satisfies this, so no optimum is lost.
//!
//! Adjacency is held in `u64` masks, so hosts are limited to 64 vertices;
//! the default cap is far lower.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::constructions::{build_complete, build_conjectured, build_g1, build_g2};
use crate::error::{Error, Result};
use crate::formulas::{bet_value, conj_value, g_of, matching_extremal_value};
use crate::graph::{MultipartiteGraph, PartSizes};
use crate::packing::is_kkt_free;

pub const DEFAULT_VERTEX_CAP: usize = 14;
const MASK_BITS: usize = 64;
/// Node allowance for each packing search made while computing a bound.
const BOUND_SEARCH_NODES: u64 = 4_000;

type Mask = u64;

#[inline]
fn bit(v: usize) -> Mask {
    1 << v
}

// ============================================================================
// Public types
// ============================================================================

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_seconds: Option<f64>,
    /// A known achievable edge count; the search only looks for larger values.
    pub initial_incumbent: Option<u64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 200_000_000,
            max_seconds: None,
            initial_incumbent: None,
        }
    }
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub vertex_cap: usize,
    /// Start from the best construction that is verified `kK_t`-free.
    pub seed_with_constructions: bool,
    pub symmetry_breaking: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            vertex_cap: DEFAULT_VERTEX_CAP,
            seed_with_constructions: true,
            symmetry_breaking: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaName {
    G,
    Bet,
    Conj,
    Matching,
}

impl FormulaName {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaName::G => "g",
            FormulaName::Bet => "bet",
            FormulaName::Conj => "conj",
            FormulaName::Matching => "matching",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    MatchesFormula { formula: FormulaName },
    ExceedsFormula { formula: FormulaName, gap: u64 },
    BelowFormula { formula: FormulaName, gap: u64 },
    NoApplicableFormula,
    BudgetExceeded,
}

impl Status {
    /// Compact label used in CSV output.
    pub fn label(&self) -> String {
        match self {
            Status::MatchesFormula { formula } => format!("matches({})", formula.as_str()),
            Status::ExceedsFormula { formula, gap } => format!("exceeds({},+{gap})", formula.as_str()),
            Status::BelowFormula { formula, gap } => format!("below({},-{gap})", formula.as_str()),
            Status::NoApplicableFormula => "no_formula".into(),
            Status::BudgetExceeded => "budget_exceeded".into(),
        }
    }
}

/// One solved grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub ns: PartSizes,
    pub t: usize,
    pub k: usize,
    /// Proven optimum; `None` when the budget ran out first.
    pub exact_value: Option<u64>,
    /// Edge count of `witness` (equals `exact_value` when that is known).
    pub best_value: u64,
    pub witness: MultipartiteGraph,
    pub formula_g: Option<u64>,
    pub formula_bet: Option<u64>,
    pub formula_conj: Option<u64>,
    pub formula_matching: Option<u64>,
    pub status: Status,
    pub nodes_explored: u64,
    pub elapsed_ms: u64,
}

impl ExtremalRecord {
    /// A disagreement with `g` on a small host: worth reporting, never an error.
    pub fn is_finding(&self) -> bool {
        self.ns.r() == 4
            && self.t == 3
            && self.k >= 2
            && matches!(
                self.status,
                Status::ExceedsFormula { .. } | Status::BelowFormula { .. }
            )
    }
}

// ============================================================================
// Entry points
// ============================================================================

/// Solves one point with the default configuration.
pub fn exact_extremal(ns: &PartSizes, t: usize, k: usize, budget: &SearchBudget) -> Result<ExtremalRecord> {
    Solver::default().exact_extremal(ns, t, k, budget)
}

/// Solves one point and classifies it against every applicable formula.
pub fn verify_point(ns: &PartSizes, t: usize, k: usize, budget: &SearchBudget) -> Result<ExtremalRecord> {
    Solver::default().verify_point(ns, t, k, budget)
}

#[derive(Clone, Debug, Default)]
pub struct Solver {
    pub config: SolverConfig,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Solver { config }
    }

    pub fn exact_extremal(
        &self,
        ns: &PartSizes,
        t: usize,
        k: usize,
        budget: &SearchBudget,
    ) -> Result<ExtremalRecord> {
        if t < 2 || k < 1 {
            return Err(Error::InvalidParameter(format!("need t >= 2 and k >= 1, got t={t}, k={k}")));
        }
        let n = ns.total();
        let cap = self.config.vertex_cap.min(MASK_BITS);
        if n > cap {
            return Err(Error::CapExceeded { vertices: n, cap });
        }
        if budget.max_nodes == 0 {
            return Err(Error::InvalidParameter("max_nodes must be positive".into()));
        }
        let started = Instant::now();
        let host = Host::new(ns);

        let seed = if self.config.seed_with_constructions {
            best_construction(ns, t, k)
        } else {
            None
        };
        let mut seed_value = seed.as_ref().map_or(0, |g| g.edge_count());
        let mut seed_adj = seed.as_ref().map(|g| host.masks_of(g));
        // A bare count without a graph: look for graphs of at least that size.
        let mut threshold_only = false;
        if let Some(c) = budget.initial_incumbent {
            if c > 0 && c - 1 > seed_value {
                seed_value = c - 1;
                seed_adj = None;
                threshold_only = true;
            }
        }

        let deadline = budget
            .max_seconds
            .map(|s| started + Duration::from_secs_f64(s.max(0.0)));
        let mut search = Search::new(&host, t, k, seed_value, seed_adj, budget.max_nodes, deadline, self.config.symmetry_breaking);
        search.dfs(0);

        if threshold_only && search.best_adj.is_none() && !search.aborted {
            // the count was not achievable; fall back to the unseeded search
            let nodes = search.nodes;
            let seed_value = seed.as_ref().map_or(0, |g| g.edge_count());
            let seed_adj = seed.as_ref().map(|g| host.masks_of(g));
            search = Search::new(
                &host,
                t,
                k,
                seed_value,
                seed_adj,
                budget.max_nodes.saturating_sub(nodes).max(1),
                deadline,
                self.config.symmetry_breaking,
            );
            search.dfs(0);
            search.nodes += nodes;
        }

        let witness = match &search.best_adj {
            Some(adj) => host.graph_of(ns, adj),
            None => seed.unwrap_or_else(|| MultipartiteGraph::new(ns.clone())),
        };
        let best_value = witness.edge_count();
        assert!(
            is_kkt_free(&witness, k, t),
            "solver produced a witness containing {k}K_{t}"
        );
        let exact_value = (!search.aborted).then_some(best_value);
        Ok(ExtremalRecord {
            ns: ns.clone(),
            t,
            k,
            exact_value,
            best_value,
            witness,
            formula_g: None,
            formula_bet: None,
            formula_conj: None,
            formula_matching: None,
            status: if search.aborted {
                Status::BudgetExceeded
            } else {
                Status::NoApplicableFormula
            },
            nodes_explored: search.nodes,
            elapsed_ms: started.elapsed().as_millis() as u64,
        })
    }

    pub fn verify_point(
        &self,
        ns: &PartSizes,
        t: usize,
        k: usize,
        budget: &SearchBudget,
    ) -> Result<ExtremalRecord> {
        let mut record = self.exact_extremal(ns, t, k, budget)?;
        attach_formulas(&mut record);
        Ok(record)
    }
}

/// Fills the formula columns and the status of a solved record.
pub fn attach_formulas(record: &mut ExtremalRecord) {
    let (ns, t, k) = (&record.ns, record.t, record.k);
    let r = ns.r();
    record.formula_g = (r == 4 && t == 3).then(|| g_of(ns, k).map(|f| f.value).ok()).flatten();
    record.formula_bet = (k == 1).then(|| bet_value(ns, t).map(|f| f.value).ok()).flatten();
    record.formula_conj = (r >= t - 1).then(|| conj_value(ns, t, k).map(|f| f.value).ok()).flatten();
    record.formula_matching = (t == 2).then(|| matching_extremal_value(ns, k));

    let primary = if t == 2 {
        record.formula_matching.map(|v| (FormulaName::Matching, v))
    } else if k == 1 {
        record.formula_bet.map(|v| (FormulaName::Bet, v))
    } else if r == 4 && t == 3 {
        record.formula_g.map(|v| (FormulaName::G, v))
    } else if r > t {
        record.formula_conj.map(|v| (FormulaName::Conj, v))
    } else {
        None
    };
    record.status = match (record.exact_value, primary) {
        (None, _) => Status::BudgetExceeded,
        (Some(_), None) => Status::NoApplicableFormula,
        (Some(exact), Some((formula, value))) => match exact.cmp(&value) {
            std::cmp::Ordering::Equal => Status::MatchesFormula { formula },
            std::cmp::Ordering::Greater => Status::ExceedsFormula {
                formula,
                gap: exact - value,
            },
            std::cmp::Ordering::Less => Status::BelowFormula {
                formula,
                gap: value - exact,
            },
        },
    };
}

/// The largest verified `kK_t`-free graph among the known constructions.
pub fn best_construction(ns: &PartSizes, t: usize, k: usize) -> Option<MultipartiteGraph> {
    let mut candidates = Vec::new();
    if ns.r() >= t.saturating_sub(1) {
        if let Ok(c) = build_conjectured(ns, t, k, None) {
            candidates.push(c.graph);
        }
    }
    if ns.r() == 4 && t == 3 {
        candidates.extend(build_g1(ns, k).ok().map(|c| c.graph));
        candidates.extend(build_g2(ns, k).ok().map(|c| c.graph));
    }
    candidates.push(build_complete(ns).graph);
    candidates.sort_by_key(|g| std::cmp::Reverse(g.edge_count()));
    candidates.into_iter().find(|g| is_kkt_free(g, k, t))
}

// ============================================================================
// Host layout
// ============================================================================

struct Host {
    n: usize,
    same_part: Vec<Mask>,
    slots: Vec<(usize, usize)>,
    /// Position of slot `{u, v}` in `slots`; `usize::MAX` for same-part pairs.
    slot_index: Vec<Vec<usize>>,
}

impl Host {
    fn new(ns: &PartSizes) -> Self {
        let n = ns.total();
        let mut part_of = Vec::with_capacity(n);
        for (p, &s) in ns.sizes().iter().enumerate() {
            part_of.extend(std::iter::repeat_n(p, s));
        }
        let same_part = (0..n)
            .map(|v| (0..n).filter(|&u| part_of[u] == part_of[v]).fold(0, |m, u| m | bit(u)))
            .collect();
        let mut slots = Vec::new();
        let mut slot_index = vec![vec![usize::MAX; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                if part_of[a] != part_of[b] {
                    slot_index[a][b] = slots.len();
                    slot_index[b][a] = slots.len();
                    slots.push((a, b));
                }
            }
        }
        Host {
            n,
            same_part,
            slots,
            slot_index,
        }
    }

    fn masks_of(&self, g: &MultipartiteGraph) -> Vec<Mask> {
        (0..self.n)
            .map(|v| g.neighbors(v).iter().fold(0, |m, u| m | bit(u)))
            .collect()
    }

    fn graph_of(&self, ns: &PartSizes, adj: &[Mask]) -> MultipartiteGraph {
        let mut g = MultipartiteGraph::new(ns.clone());
        for &(a, b) in &self.slots {
            if adj[a] & bit(b) != 0 {
                g.add_edge(a, b).expect("slots are cross-part pairs");
            }
        }
        g
    }
}

// ============================================================================
// Mask-level clique and packing routines
// ============================================================================

/// Calls `f` on each `size`-clique (as a mask) inside `cand`; stops when `f` returns true.
fn cliques_in(adj: &[Mask], cand: Mask, size: usize, acc: Mask, f: &mut dyn FnMut(Mask) -> bool) -> bool {
    if size == 0 {
        return f(acc);
    }
    let mut rest = cand;
    while rest.count_ones() as usize >= size {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if cliques_in(adj, rest & adj[u], size - 1, acc | bit(u), f) {
            return true;
        }
    }
    false
}

fn first_clique(adj: &[Mask], cand: Mask, size: usize) -> Option<Mask> {
    let mut found = None;
    cliques_in(adj, cand, size, 0, &mut |c| {
        found = Some(c);
        true
    });
    found
}

/// Exact search for `need` disjoint `t`-cliques inside `avail`, pushing them
/// onto `out`. Gives up (returns `None`) after `*budget` calls.
fn packing_in(adj: &[Mask], avail: Mask, need: usize, t: usize, budget: &mut u64, out: &mut Vec<Mask>) -> Option<bool> {
    if need == 0 {
        return Some(true);
    }
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    // peel vertices that cannot lie in a t-clique by degree
    let mut avail = avail;
    loop {
        let mut changed = false;
        let mut rest = avail;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if ((adj[v] & avail).count_ones() as usize) < t - 1 {
                avail &= !bit(v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if (avail.count_ones() as usize) < need * t {
        return Some(false);
    }
    let v = avail.trailing_zeros() as usize;
    let rest = avail & !bit(v);
    let mut outcome = Some(false);
    cliques_in(adj, adj[v] & rest, t - 1, bit(v), &mut |c| {
        match packing_in(adj, rest & !c, need - 1, t, budget, out) {
            Some(true) => {
                out.push(c);
                outcome = Some(true);
                true
            }
            Some(false) => false,
            None => {
                outcome = None;
                true
            }
        }
    });
    match outcome {
        Some(false) => packing_in(adj, rest, need, t, budget, out),
        other => other,
    }
}

// ============================================================================
// Search
// ============================================================================

struct Search<'h> {
    host: &'h Host,
    t: usize,
    k: usize,
    /// Included edges.
    inc: Vec<Mask>,
    /// Included plus undecided edges.
    avail: Vec<Mask>,
    edges: u64,
    best: u64,
    best_adj: Option<Vec<Mask>>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    aborted: bool,
    symmetry: bool,
}

impl<'h> Search<'h> {
    #[allow(clippy::too_many_arguments)]
    fn new(
        host: &'h Host,
        t: usize,
        k: usize,
        best: u64,
        best_adj: Option<Vec<Mask>>,
        max_nodes: u64,
        deadline: Option<Instant>,
        symmetry: bool,
    ) -> Self {
        let n = host.n;
        let avail = (0..n).map(|v| !host.same_part[v] & ((bit(n - 1) << 1).wrapping_sub(1))).collect();
        Search {
            host,
            t,
            k,
            inc: vec![0; n],
            avail,
            edges: 0,
            best,
            best_adj,
            nodes: 0,
            max_nodes,
            deadline,
            aborted: false,
            symmetry,
        }
    }

    fn dfs(&mut self, depth: usize) {
        if self.aborted {
            return;
        }
        if self.nodes >= self.max_nodes {
            self.aborted = true;
            return;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.aborted = true;
                    return;
                }
            }
        }
        if self.edges > self.best {
            self.best = self.edges;
            self.best_adj = Some(self.inc.clone());
        }
        let total = self.host.slots.len();
        if depth == total {
            return;
        }
        let remaining = (total - depth) as u64;
        if self.edges + remaining <= self.best {
            return;
        }
        let margin = self.edges + remaining - self.best;
        if self.exclusion_lower_bound(depth, margin) >= margin {
            return;
        }

        let (a, b) = self.host.slots[depth];
        if !self.creates_packing(a, b) {
            self.inc[a] |= bit(b);
            self.inc[b] |= bit(a);
            self.edges += 1;
            if self.symmetric_ok(a, b, depth + 1) {
                self.dfs(depth + 1);
            }
            self.inc[a] &= !bit(b);
            self.inc[b] &= !bit(a);
            self.edges -= 1;
        }
        self.avail[a] &= !bit(b);
        self.avail[b] &= !bit(a);
        if self.symmetric_ok(a, b, depth + 1) {
            self.dfs(depth + 1);
        }
        self.avail[a] |= bit(b);
        self.avail[b] |= bit(a);
    }

    /// Whether adding `ab` to the included graph completes a `kK_t`.
    fn creates_packing(&self, a: usize, b: usize) -> bool {
        let t = self.t;
        let common = self.inc[a] & self.inc[b];
        if self.k == 1 {
            return first_clique(&self.inc, common, t - 2).is_some();
        }
        let all = (bit(self.host.n - 1) << 1).wrapping_sub(1);
        let mut found = false;
        cliques_in(&self.inc, common, t - 2, bit(a) | bit(b), &mut |c| {
            let mut budget = u64::MAX;
            let mut sink = Vec::new();
            found = packing_in(&self.inc, all & !c, self.k - 1, t, &mut budget, &mut sink) == Some(true);
            found
        });
        found
    }

    /// Counts conflicts that are pairwise disjoint on undecided slots, up to `limit`.
    fn exclusion_lower_bound(&self, depth: usize, limit: u64) -> u64 {
        let slot_index = &self.host.slot_index;
        let mut av = self.avail.clone();
        let mut count = 0;
        let drop_undecided = |av: &mut Vec<Mask>, clique: Mask| {
            let mut xs = clique;
            while xs != 0 {
                let x = xs.trailing_zeros() as usize;
                xs &= xs - 1;
                let mut ys = xs;
                while ys != 0 {
                    let y = ys.trailing_zeros() as usize;
                    ys &= ys - 1;
                    if slot_index[x][y] >= depth {
                        av[x] &= !bit(y);
                        av[y] &= !bit(x);
                    }
                }
            }
        };
        if self.k == 1 {
            for s in depth..self.host.slots.len() {
                let (a, b) = self.host.slots[s];
                if av[a] & bit(b) == 0 {
                    continue;
                }
                if let Some(q) = first_clique(&av, av[a] & av[b], self.t - 2) {
                    drop_undecided(&mut av, q | bit(a) | bit(b));
                    count += 1;
                    if count >= limit {
                        break;
                    }
                }
            }
            return count;
        }
        let all = (bit(self.host.n - 1) << 1).wrapping_sub(1);
        while count < limit {
            let mut budget = BOUND_SEARCH_NODES;
            let mut found = Vec::new();
            if packing_in(&av, all, self.k, self.t, &mut budget, &mut found) != Some(true) {
                break;
            }
            for c in found {
                drop_undecided(&mut av, c);
            }
            count += 1;
        }
        count
    }

    fn symmetric_ok(&self, a: usize, b: usize, decided: usize) -> bool {
        if !self.symmetry {
            return true;
        }
        let n = self.host.n;
        for v in [a, b] {
            if v > 0 && self.host.same_part[v] & bit(v - 1) != 0 && !self.row_ge(v - 1, v, decided) {
                return false;
            }
            if v + 1 < n && self.host.same_part[v] & bit(v + 1) != 0 && !self.row_ge(v, v + 1, decided) {
                return false;
            }
        }
        true
    }

    /// `row(u) >= row(v)` on the longest prefix decided in both rows.
    fn row_ge(&self, u: usize, v: usize, decided: usize) -> bool {
        let host = self.host;
        for p in 0..host.n {
            let du = host.same_part[u] & bit(p) != 0 || host.slot_index[u][p] < decided;
            let dv = host.same_part[v] & bit(p) != 0 || host.slot_index[v][p] < decided;
            if !(du && dv) {
                return true;
            }
            let bu = self.inc[u] & bit(p) != 0;
            let bv = self.inc[v] & bit(p) != 0;
            if bu != bv {
                return bu;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ns(v: &[usize]) -> PartSizes {
        PartSizes::new(v.to_vec()).unwrap()
    }

    fn unseeded() -> Solver {
        Solver::new(SolverConfig {
            seed_with_constructions: false,
            ..Default::default()
        })
    }

    fn budget() -> SearchBudget {
        SearchBudget::nodes(5_000_000)
    }

    #[test]
    fn examples() {
        let r = exact_extremal(&ns(&[1, 1, 1, 1]), 3, 1, &budget()).unwrap();
        assert_eq!(r.exact_value, Some(4));
        let r = exact_extremal(&ns(&[2, 2, 2]), 2, 2, &budget()).unwrap();
        assert_eq!(r.exact_value, Some(4));
        let r = exact_extremal(&ns(&[1, 1, 1]), 3, 1, &budget()).unwrap();
        assert_eq!(r.exact_value, Some(2));
    }

    #[test]
    fn verify_point_examples() {
        let r = verify_point(&ns(&[2, 2, 2, 1]), 3, 1, &budget()).unwrap();
        assert_eq!(r.exact_value, Some(12));
        assert_eq!(r.status, Status::MatchesFormula { formula: FormulaName::Bet });
        let r = verify_point(&ns(&[2, 2, 2]), 2, 3, &budget()).unwrap();
        assert_eq!(r.formula_matching, Some(8));
        assert_eq!(r.exact_value, Some(8));
        assert_eq!(r.status, Status::MatchesFormula { formula: FormulaName::Matching });
    }

    #[test]
    fn witness_is_free_with_exact_edges() {
        for (sizes, t, k) in [(vec![2, 2, 1, 1], 3, 2), (vec![2, 2, 2], 3, 1), (vec![3, 2, 1], 2, 3)] {
            let r = exact_extremal(&ns(&sizes), t, k, &budget()).unwrap();
            assert!(is_kkt_free(&r.witness, k, t));
            assert_eq!(Some(r.witness.edge_count()), r.exact_value);
        }
    }

    #[test]
    fn cap_and_parameter_errors() {
        assert!(matches!(
            exact_extremal(&ns(&[5, 5, 5]), 3, 1, &budget()),
            Err(Error::CapExceeded { vertices: 15, cap: 14 })
        ));
        assert!(exact_extremal(&ns(&[1, 1]), 1, 1, &budget()).is_err());
        assert!(exact_extremal(&ns(&[1, 1]), 2, 0, &budget()).is_err());
        let big = Solver::new(SolverConfig {
            vertex_cap: 16,
            ..Default::default()
        });
        assert!(big.exact_extremal(&ns(&[5, 5, 5]), 2, 1, &budget()).is_ok());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let r = unseeded().verify_point(&ns(&[3, 3, 3]), 3, 1, &SearchBudget::nodes(5)).unwrap();
        assert_eq!(r.exact_value, None);
        assert_eq!(r.status, Status::BudgetExceeded);
        assert!(is_kkt_free(&r.witness, 1, 3));
        assert_eq!(r.best_value, r.witness.edge_count());
    }

    #[test]
    fn seeding_and_symmetry_do_not_change_values() {
        let plain = Solver::new(SolverConfig {
            seed_with_constructions: false,
            symmetry_breaking: false,
            ..Default::default()
        });
        for (sizes, t, k) in [
            (vec![2, 2, 2], 3, 1),
            (vec![2, 1, 1, 1], 3, 2),
            (vec![2, 2, 1], 2, 2),
            (vec![2, 2, 2], 3, 2),
            (vec![2, 2, 1, 1], 4, 1),
        ] {
            let p = ns(&sizes);
            let a = plain.exact_extremal(&p, t, k, &budget()).unwrap();
            let b = Solver::default().exact_extremal(&p, t, k, &budget()).unwrap();
            let c = unseeded().exact_extremal(&p, t, k, &budget()).unwrap();
            assert_eq!(a.exact_value, b.exact_value, "{sizes:?} t={t} k={k}");
            assert_eq!(a.exact_value, c.exact_value, "{sizes:?} t={t} k={k}");
        }
    }

    #[test]
    fn count_only_incumbent() {
        let p = ns(&[2, 2, 2]);
        let exact = exact_extremal(&p, 3, 1, &budget()).unwrap().exact_value.unwrap();
        for seed in [exact, exact + 3, 1] {
            let b = SearchBudget {
                initial_incumbent: Some(seed),
                ..budget()
            };
            let r = unseeded().exact_extremal(&p, 3, 1, &b).unwrap();
            assert_eq!(r.exact_value, Some(exact), "seed {seed}");
        }
    }

    #[test]
    fn mask_packing_matches_small_cases() {
        // K_{2,2,2}: two disjoint triangles exist, three do not
        let g = build_complete(&ns(&[2, 2, 2])).graph;
        let host = Host::new(g.parts());
        let adj = host.masks_of(&g);
        let mut budget = u64::MAX;
        let mut out = Vec::new();
        assert_eq!(packing_in(&adj, 0b111111, 2, 3, &mut budget, &mut out), Some(true));
        assert_eq!(out.len(), 2);
        assert_eq!(out[0] & out[1], 0);
        assert_eq!(packing_in(&adj, 0b111111, 3, 3, &mut budget, &mut Vec::new()), Some(false));
        assert_eq!(packing_in(&adj, 0b111111, 3, 2, &mut budget, &mut Vec::new()), Some(true));
    }

    #[test]
    fn status_labels() {
        assert_eq!(Status::MatchesFormula { formula: FormulaName::G }.label(), "matches(g)");
        assert_eq!(
            Status::ExceedsFormula { formula: FormulaName::Conj, gap: 2 }.label(),
            "exceeds(conj,+2)"
        );
    }
}
