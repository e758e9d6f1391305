//! Grid sweeps over the solver, their on-disk results, the argmax-shape
//! survey, and the per-vertex induction audit.

use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{conj_value, delta_excess, g_terms};
use crate::graph::{MultipartiteGraph, PartSizes, VertexSet};
use crate::solver::{ExtremalRecord, SearchBudget, Solver, SolverConfig, Status};

// ============================================================================
// Sweeps
// ============================================================================

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub r_values: Vec<usize>,
    pub t_values: Vec<usize>,
    pub k_values: Vec<usize>,
    pub min_part: usize,
    pub max_part: usize,
    pub max_total: usize,
    pub budget: SearchBudget,
    pub solver: SolverConfig,
    /// CSV destination; witnesses go to the same path with a `.jsonl` extension.
    pub output: Option<PathBuf>,
    pub resume: bool,
    /// `None` uses rayon's default pool size.
    pub workers: Option<usize>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            r_values: vec![4],
            t_values: vec![3],
            k_values: vec![1],
            min_part: 1,
            max_part: usize::MAX,
            max_total: 10,
            budget: SearchBudget::default(),
            solver: SolverConfig::default(),
            output: None,
            resume: false,
            workers: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridPoint {
    pub ns: PartSizes,
    pub t: usize,
    pub k: usize,
}

impl GridPoint {
    fn of(record: &ExtremalRecord) -> Self {
        GridPoint {
            ns: record.ns.sorted(),
            t: record.t,
            k: record.k,
        }
    }
}

impl std::fmt::Display for GridPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ns={} t={} k={}", self.ns, self.t, self.k)
    }
}

impl SweepSpec {
    fn validate(&self) -> Result<()> {
        if self.r_values.is_empty() || self.t_values.is_empty() || self.k_values.is_empty() {
            return Err(Error::InvalidParameter("r, t and k ranges must be nonempty".into()));
        }
        if self.min_part == 0 || self.min_part > self.max_part {
            return Err(Error::InvalidParameter(format!(
                "invalid part size range {}..={}",
                self.min_part, self.max_part
            )));
        }
        if let Some(&t) = self.t_values.iter().find(|&&t| t < 2) {
            return Err(Error::InvalidParameter(format!("t must be at least 2, got {t}")));
        }
        if self.k_values.contains(&0) {
            return Err(Error::InvalidParameter("k must be at least 1".into()));
        }
        if self.budget.max_nodes == 0 {
            return Err(Error::InvalidParameter("max_nodes must be positive".into()));
        }
        Ok(())
    }

    /// Grid points in sweep order: `r`, then sorted size vectors, then `t`, then `k`.
    pub fn grid(&self) -> Result<Vec<GridPoint>> {
        self.validate()?;
        let mut points = Vec::new();
        for &r in &self.r_values {
            for sizes in sorted_size_vectors(r, self.min_part..=self.max_part, self.max_total) {
                let ns = PartSizes::new(sizes)?;
                if ns.total() > self.solver.vertex_cap {
                    return Err(Error::CapExceeded {
                        vertices: ns.total(),
                        cap: self.solver.vertex_cap,
                    });
                }
                for &t in &self.t_values {
                    for &k in &self.k_values {
                        points.push(GridPoint { ns: ns.clone(), t, k });
                    }
                }
            }
        }
        Ok(points)
    }
}

/// Non-ascending vectors of length `r` with entries in `range` and sum at most `max_total`.
pub fn sorted_size_vectors(r: usize, range: RangeInclusive<usize>, max_total: usize) -> Vec<Vec<usize>> {
    fn extend(
        r: usize,
        lo: usize,
        hi: usize,
        budget: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        let left = r - cur.len() - 1;
        for v in lo..=hi {
            if v + left * lo > budget {
                break;
            }
            cur.push(v);
            extend(r, lo, v, budget - v, cur, out);
            cur.pop();
        }
    }
    let (lo, hi) = (*range.start(), *range.end());
    let mut out = Vec::new();
    if r == 0 || lo == 0 || lo > hi {
        return out;
    }
    let hi = hi.min(max_total);
    extend(r, lo, hi, max_total, &mut Vec::with_capacity(r), &mut out);
    out
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepReport {
    pub records: Vec<ExtremalRecord>,
    /// Indices into `records` whose status is not a formula match.
    pub deviations: Vec<usize>,
    /// Shape of the argmax block holding the largest part, mapped to size vectors realizing it.
    pub shape_census: BTreeMap<String, Vec<String>>,
}

impl SweepReport {
    fn from_records(records: Vec<ExtremalRecord>) -> Self {
        let deviations = records
            .iter()
            .enumerate()
            .filter(|(_, r)| !matches!(r.status, Status::MatchesFormula { .. }))
            .map(|(i, _)| i)
            .collect();
        let mut shape_census: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for rec in &records {
            if rec.ns.r() < rec.t {
                continue;
            }
            if let Some(shape) = argmax_shape(&rec.ns.sorted(), rec.t, rec.k) {
                let list = shape_census.entry(format_shape(&shape)).or_default();
                let key = rec.ns.key();
                if !list.contains(&key) {
                    list.push(key);
                }
            }
        }
        SweepReport {
            records,
            deviations,
            shape_census,
        }
    }

    pub fn budget_exhausted(&self) -> bool {
        self.records.iter().any(|r| r.exact_value.is_none())
    }

    pub fn findings(&self) -> impl Iterator<Item = &ExtremalRecord> {
        self.records.iter().filter(|r| r.is_finding())
    }
}

/// One CSV row. The last two columns are diagnostics and vary between runs.
#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    ns: String,
    t: usize,
    k: usize,
    exact: Option<u64>,
    best: u64,
    g: Option<u64>,
    bet: Option<u64>,
    conj: Option<u64>,
    matching: Option<u64>,
    status: String,
    finding: bool,
    nodes: u64,
    elapsed_ms: u64,
}

impl From<&ExtremalRecord> for CsvRow {
    fn from(r: &ExtremalRecord) -> Self {
        CsvRow {
            ns: r.ns.key(),
            t: r.t,
            k: r.k,
            exact: r.exact_value,
            best: r.best_value,
            g: r.formula_g,
            bet: r.formula_bet,
            conj: r.formula_conj,
            matching: r.formula_matching,
            status: r.status.label(),
            finding: r.is_finding(),
            nodes: r.nodes_explored,
            elapsed_ms: r.elapsed_ms,
        }
    }
}

pub const DIAGNOSTIC_COLUMNS: [&str; 2] = ["nodes", "elapsed_ms"];

pub fn witness_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("jsonl")
}

pub fn write_csv(path: &Path, records: &[ExtremalRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_to<W: Write>(out: W, records: &[ExtremalRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(CsvRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads witness records written by a previous run.
pub fn load_records(path: &Path) -> Result<Vec<ExtremalRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ExtremalRecord = serde_json::from_str(&line).map_err(|e| Error::CorruptResume {
            line: i + 1,
            message: format!("{e}; content starts {:?}", line.chars().take(60).collect::<String>()),
        })?;
        out.push(rec);
    }
    Ok(out)
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    let grid = spec.grid()?;
    let witness_file = spec.output.as_deref().map(witness_path);

    let mut done: HashMap<GridPoint, ExtremalRecord> = HashMap::new();
    if spec.resume {
        if let Some(path) = witness_file.as_deref().filter(|p| p.exists()) {
            for rec in load_records(path)? {
                done.insert(GridPoint::of(&rec), rec);
            }
        }
    }

    let sink = match &witness_file {
        Some(path) => {
            let file = if spec.resume {
                OpenOptions::new().create(true).append(true).open(path)?
            } else {
                File::create(path)?
            };
            Some(Mutex::new(BufWriter::new(file)))
        }
        None => None,
    };

    let todo: Vec<(usize, &GridPoint)> = grid
        .iter()
        .enumerate()
        .filter(|(_, p)| !done.contains_key(p))
        .collect();

    let solver = Solver::new(spec.solver.clone());
    let solve = || -> Result<Vec<(usize, ExtremalRecord)>> {
        todo.par_iter()
            .map(|&(i, p)| {
                let rec = solver.verify_point(&p.ns, p.t, p.k, &spec.budget)?;
                if let Some(sink) = &sink {
                    let line = serde_json::to_string(&rec)?;
                    let mut w = sink.lock().expect("witness writer poisoned");
                    writeln!(w, "{line}")?;
                    w.flush()?;
                }
                Ok((i, rec))
            })
            .collect()
    };
    let fresh = match spec.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?
            .install(solve)?,
        None => solve()?,
    };

    let mut slots: Vec<Option<ExtremalRecord>> = grid.iter().map(|p| done.remove(p)).collect();
    for (i, rec) in fresh {
        slots[i] = Some(rec);
    }
    let records: Vec<ExtremalRecord> = slots.into_iter().map(|r| r.expect("every grid point solved")).collect();

    if let Some(path) = &spec.output {
        write_csv(path, &records)?;
    }
    Ok(SweepReport::from_records(records))
}

// ============================================================================
// Shape survey
// ============================================================================

/// The block containing part index 0 of `ns` in the argmax partition, 1-based.
pub fn argmax_shape(ns: &PartSizes, t: usize, k: usize) -> Option<Vec<usize>> {
    let res = conj_value(ns, t, k).ok()?;
    let p = res.argmax_partition?;
    p.one_based().into_iter().find(|b| b.contains(&1))
}

pub fn format_shape(shape: &[usize]) -> String {
    let ids: Vec<String> = shape.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", ids.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeBucket {
    pub shape: Vec<usize>,
    /// First size vector (in scan order) realizing the shape, and the `k` used.
    pub witness: PartSizes,
    pub k: usize,
    pub count: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ShapeCensus {
    pub buckets: BTreeMap<String, ShapeBucket>,
}

impl ShapeCensus {
    pub fn len(&self) -> usize {
        self.buckets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    pub fn contains(&self, shape: &[usize]) -> bool {
        self.buckets.contains_key(&format_shape(shape))
    }

    fn record(&mut self, shape: Vec<usize>, ns: &PartSizes, k: usize) {
        self.buckets
            .entry(format_shape(&shape))
            .and_modify(|b| b.count += 1)
            .or_insert_with(|| ShapeBucket {
                shape,
                witness: ns.clone(),
                k,
                count: 1,
            });
    }

    /// Adds buckets from `other` that are missing here; counts are summed.
    pub fn merge(&mut self, other: ShapeCensus) {
        for (key, bucket) in other.buckets {
            self.buckets
                .entry(key)
                .and_modify(|b| b.count += bucket.count)
                .or_insert(bucket);
        }
    }
}

/// Buckets every non-ascending `r`-vector with entries in `range` by the
/// argmax block containing the largest part.
pub fn shape_survey(r: usize, t: usize, k: usize, range: RangeInclusive<usize>) -> Result<ShapeCensus> {
    if r < t - 1 || t < 2 {
        return Err(Error::InvalidParameter(format!("need t >= 2 and r >= t-1, got r={r}, t={t}")));
    }
    let max_total = range.end().saturating_mul(r);
    let mut census = ShapeCensus::default();
    for sizes in sorted_size_vectors(r, range, max_total) {
        let ns = PartSizes::new(sizes)?;
        if let Some(shape) = argmax_shape(&ns, t, k) {
            census.record(shape, &ns, k);
        }
    }
    Ok(census)
}

/// Census of a single size vector.
pub fn shape_of(ns: &PartSizes, t: usize, k: usize) -> ShapeCensus {
    let mut census = ShapeCensus::default();
    let sorted = ns.sorted();
    if let Some(shape) = argmax_shape(&sorted, t, k) {
        census.record(shape, &sorted, k);
    }
    census
}

// ============================================================================
// Induction audit
// ============================================================================

/// `g` on raw sizes; zero entries are allowed.
fn g_raw(mut sizes: [usize; 4], k: usize) -> u64 {
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let (a, b) = g_terms(sizes.map(|s| s as u64), k as u64);
    a.max(b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RemovalCheck {
    pub removed: Vec<usize>,
    /// Edges touching the removed set.
    pub incident_edges: u64,
    pub gap: i64,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DegreeRule {
    A1,
    A2,
    B1,
    B2,
    C,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub vertex: usize,
    pub rule: DegreeRule,
    pub degree: usize,
    pub threshold: usize,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InductionAudit {
    pub k: usize,
    pub edges: u64,
    pub g: u64,
    pub delta: u64,
    pub checks: Vec<RemovalCheck>,
    /// The degree rules assume the largest part is at most the sum of the middle two.
    pub degree_rules_applicable: bool,
    pub degree_checks: Vec<DegreeCheck>,
}

impl InductionAudit {
    pub fn failed_checks(&self) -> impl Iterator<Item = &RemovalCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn degree_violations(&self) -> impl Iterator<Item = &DegreeCheck> {
        self.degree_checks.iter().filter(|c| !c.satisfied)
    }
}

pub fn audit_induction(g: &MultipartiteGraph, k: usize) -> Result<InductionAudit> {
    if g.r() != 4 {
        return Err(Error::InvalidParameter(format!("audit needs 4 parts, got {}", g.r())));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let ns = g.parts();
    let sizes: [usize; 4] = ns.sizes().try_into().expect("four parts");
    let g_full = g_raw(sizes, k);
    let delta = delta_excess(g.edge_count(), ns, k)?;

    let mut checks = Vec::new();
    let mut check = |removed: Vec<usize>| {
        let mut reduced = sizes;
        for &v in &removed {
            reduced[g.part_of(v)] -= 1;
        }
        let set = VertexSet::from_iter_in(g.vertex_count(), removed.iter().copied());
        let incident = g.edges_incident(&set);
        let gap = g_full as i64 - g_raw(reduced, k) as i64;
        checks.push(RemovalCheck {
            removed,
            incident_edges: incident,
            gap,
            holds: incident as i64 >= gap,
        });
    };
    for v in 0..g.vertex_count() {
        check(vec![v]);
    }
    for (x, y) in g.edges() {
        check(vec![x, y]);
    }

    // roles follow the non-ascending order of part sizes
    let perm = ns.sort_permutation();
    let n: Vec<usize> = perm.iter().map(|&p| ns.size(p)).collect();
    let mut role = [0; 4];
    for (rank, &p) in perm.iter().enumerate() {
        role[p] = rank;
    }
    let mut degree_checks = Vec::new();
    for v in 0..g.vertex_count() {
        let rank = role[g.part_of(v)];
        let (rule, threshold) = match rank {
            0 if n[0] > n[1] => (DegreeRule::A1, n[1] + n[2] + k - 1),
            0 => (DegreeRule::A2, n[0] + n[3]),
            1 | 2 if n[rank] > n[3] && n[0] < n[1] + n[2] => (DegreeRule::B1, n[0] + n[3]),
            1 | 2 => (DegreeRule::B2, n[1] + n[2]),
            _ => (DegreeRule::C, n[1] + n[2]),
        };
        let degree = g.degree(v);
        degree_checks.push(DegreeCheck {
            vertex: v,
            rule,
            degree,
            threshold,
            satisfied: degree >= threshold,
        });
    }

    Ok(InductionAudit {
        k,
        edges: g.edge_count(),
        g: g_full,
        delta,
        checks,
        degree_rules_applicable: n[0] <= n[1] + n[2],
        degree_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_complete, build_g1};

    fn ns(v: &[usize]) -> PartSizes {
        PartSizes::new(v.to_vec()).unwrap()
    }

    #[test]
    fn size_vectors_are_sorted_and_bounded() {
        let all = sorted_size_vectors(3, 1..=4, 7);
        assert!(all.iter().all(|v| v.windows(2).all(|w| w[0] >= w[1])));
        assert!(all.iter().all(|v| v.iter().sum::<usize>() <= 7));
        // brute force over the cube
        let mut expected = 0;
        for a in 1..=4 {
            for b in 1..=a {
                for c in 1..=b {
                    if a + b + c <= 7 {
                        expected += 1;
                    }
                }
            }
        }
        assert_eq!(all.len(), expected);
        assert!(sorted_size_vectors(4, 3..=5, 11).is_empty());
    }

    #[test]
    fn empty_grid_gives_empty_report() {
        let spec = SweepSpec {
            r_values: vec![4],
            max_total: 3,
            ..Default::default()
        };
        let report = run_sweep(&spec).unwrap();
        assert!(report.records.is_empty());
        assert!(report.deviations.is_empty());
        assert!(!report.budget_exhausted());
    }

    #[test]
    fn sweep_rejects_bad_specs() {
        let mut spec = SweepSpec {
            t_values: vec![],
            ..Default::default()
        };
        assert!(run_sweep(&spec).is_err());
        spec.t_values = vec![1];
        assert!(run_sweep(&spec).is_err());
        spec.t_values = vec![3];
        spec.max_total = 20;
        spec.max_part = 5;
        assert!(matches!(run_sweep(&spec), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn small_sweep_matches_bet() {
        let spec = SweepSpec {
            r_values: vec![3, 4],
            max_total: 7,
            ..Default::default()
        };
        let report = run_sweep(&spec).unwrap();
        assert_eq!(report.records.len(), spec.grid().unwrap().len());
        assert!(report.deviations.is_empty());
    }

    #[test]
    fn balanced_vectors_put_two_or_three_parts_with_the_largest() {
        for n in 1..=6 {
            let census = shape_of(&ns(&[n; 5]), 3, 2);
            assert_eq!(census.len(), 1);
            let bucket = census.buckets.values().next().unwrap();
            assert!(matches!(bucket.shape.len(), 2 | 3), "{:?}", bucket.shape);
        }
    }

    #[test]
    fn single_vector_census() {
        let census = shape_of(&ns(&[9, 2, 2, 2, 1]), 3, 2);
        assert_eq!(census.len(), 1);
        assert_eq!(census.buckets.values().next().unwrap().count, 1);
    }

    #[test]
    fn audit_g1() {
        let c = build_g1(&ns(&[5, 4, 3, 2]), 2).unwrap();
        let audit = audit_induction(&c.graph, 2).unwrap();
        assert_eq!(audit.delta, 0);
        assert!(audit.degree_rules_applicable);
        for v in c.graph.part_vertices(0).iter() {
            let d = &audit.degree_checks[v];
            assert_eq!(d.rule, DegreeRule::A1);
            assert_eq!(d.degree, 4 + 3 + 1);
            assert!(d.satisfied);
        }
        assert_eq!(audit.checks.len() as u64, 14 + c.graph.edge_count());
    }

    #[test]
    fn audit_edgeless_and_complete() {
        let empty = MultipartiteGraph::new(ns(&[3, 2, 2, 1]));
        let audit = audit_induction(&empty, 2).unwrap();
        assert_eq!(audit.delta, 0);
        assert_eq!(audit.checks.len(), 8);
        for c in &audit.checks {
            assert_eq!(c.incident_edges, 0);
            let mut reduced = [3, 2, 2, 1];
            reduced[empty.part_of(c.removed[0])] -= 1;
            assert_eq!(c.gap, (g_raw([3, 2, 2, 1], 2) - g_raw(reduced, 2)) as i64);
        }

        let k4 = build_complete(&ns(&[2, 2, 2, 2])).graph;
        assert_eq!(audit_induction(&k4, 1).unwrap().delta, 8);
        assert!(audit_induction(&MultipartiteGraph::new(ns(&[2, 2, 2])), 1).is_err());
    }
}
