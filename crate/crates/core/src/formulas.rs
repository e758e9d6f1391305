//! Closed-form extremal values and the partition optimizations behind them.
//!
//! All arithmetic is done in `u64`; with part sizes up to `10^6` the largest
//! intermediate, `(n_1 + n_4)(n_2 + n_3)`, stays around `10^12`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::PartSizes;
use crate::partition::{BlockPartition, SetPartitions};

/// Which branch or object attained a formula's maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessTerm {
    /// `(n1+n4)(n2+n3) + (k-1)n1`, realized by G1.
    G1,
    /// `n1(n2+n3+n4) + (k-1)(n2+n3)`, realized by G2.
    G2,
    /// Both branches of `g` agree.
    Both,
    /// The maximizing block partition.
    Partition,
    /// A formula without a maximization.
    Closed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaResult {
    pub value: u64,
    pub argmax_partition: Option<BlockPartition>,
    pub witness_term: WitnessTerm,
    /// Original part indices in non-ascending size order, when the formula sorted its input.
    pub sort_permutation: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct FormulaJson {
    value: u64,
    partition: Option<Vec<Vec<usize>>>,
    surplus: Option<u64>,
    witness_term: WitnessTerm,
    #[serde(skip_serializing_if = "Option::is_none")]
    sort_permutation: Option<Vec<usize>>,
}

impl Serialize for FormulaResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormulaJson {
            value: self.value,
            partition: self.argmax_partition.as_ref().map(|p| p.one_based()),
            surplus: self.argmax_partition.as_ref().map(|p| p.surplus()),
            witness_term: self.witness_term,
            sort_permutation: self
                .sort_permutation
                .as_ref()
                .map(|p| p.iter().map(|i| i + 1).collect()),
        }
        .serialize(s)
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::InvalidParameter(format!("k must be at least 1, got {k}")));
    }
    Ok(())
}

/// The two branches of `g` on sorted sizes.
pub fn g_terms(sorted: [u64; 4], k: u64) -> (u64, u64) {
    let [n1, n2, n3, n4] = sorted;
    let first = (n1 + n4) * (n2 + n3) + (k - 1) * n1;
    let second = n1 * (n2 + n3 + n4) + (k - 1) * (n2 + n3);
    (first, second)
}

/// The 4-partite extremal function `g`, evaluated on the non-ascending
/// rearrangement of `sizes`.
pub fn g_value(sizes: [usize; 4], k: usize) -> Result<FormulaResult> {
    check_k(k)?;
    let parts = PartSizes::new(sizes.to_vec())?;
    let perm = parts.sort_permutation();
    let sorted: Vec<u64> = perm.iter().map(|&i| sizes[i] as u64).collect();
    let (first, second) = g_terms([sorted[0], sorted[1], sorted[2], sorted[3]], k as u64);
    let witness_term = match first.cmp(&second) {
        std::cmp::Ordering::Greater => WitnessTerm::G1,
        std::cmp::Ordering::Less => WitnessTerm::G2,
        std::cmp::Ordering::Equal => WitnessTerm::Both,
    };
    Ok(FormulaResult {
        value: first.max(second),
        argmax_partition: None,
        witness_term,
        sort_permutation: Some(perm),
    })
}

/// `g` for a `PartSizes` with exactly four parts.
pub fn g_of(ns: &PartSizes, k: usize) -> Result<FormulaResult> {
    let s = four(ns)?;
    g_value(s, k)
}

fn four(ns: &PartSizes) -> Result<[usize; 4]> {
    ns.sizes()
        .try_into()
        .map_err(|_| Error::InvalidParameter(format!("expected 4 parts, got {}", ns.r())))
}

/// Keeps the best `(value, partition)`; ties go to the lexicographically least block list.
fn better(candidate: (u64, &BlockPartition), incumbent: Option<&(u64, BlockPartition)>) -> bool {
    match incumbent {
        None => true,
        Some((v, p)) => candidate.0 > *v || (candidate.0 == *v && candidate.1.blocks() < p.blocks()),
    }
}

/// `max_P Σ_{I≠I'} n_I n_I'` over partitions of `[r]` into at most `t-1` blocks.
pub fn bet_value(ns: &PartSizes, t: usize) -> Result<FormulaResult> {
    if t < 2 {
        return Err(Error::InvalidParameter(format!("t must be at least 2, got {t}")));
    }
    let mut best: Option<(u64, BlockPartition)> = None;
    for labels in SetPartitions::new(ns.r(), t - 1) {
        let p = BlockPartition::from_labels(&labels, ns);
        let v = p.cross_product_sum();
        if better((v, &p), best.as_ref()) {
            best = Some((v, p));
        }
    }
    let (value, p) = best.expect("at least one partition exists");
    Ok(FormulaResult {
        value,
        argmax_partition: Some(p),
        witness_term: WitnessTerm::Partition,
        sort_permutation: None,
    })
}

/// Value of the conjectured formula on one partition.
pub fn conj_objective(p: &BlockPartition, k: usize) -> u64 {
    (k as u64 - 1) * p.surplus() + p.cross_product_sum()
}

/// `max_P { (k-1) n_P + Σ_{I≠I'} n_I n_I' }` over partitions into exactly `t-1` blocks.
pub fn conj_value(ns: &PartSizes, t: usize, k: usize) -> Result<FormulaResult> {
    check_k(k)?;
    if t < 2 {
        return Err(Error::InvalidParameter(format!("t must be at least 2, got {t}")));
    }
    if ns.r() < t - 1 {
        return Err(Error::InvalidParameter(format!(
            "need at least t-1 = {} parts, got {}",
            t - 1,
            ns.r()
        )));
    }
    let mut best: Option<(u64, BlockPartition)> = None;
    for labels in SetPartitions::new(ns.r(), t - 1) {
        if labels.iter().max().map_or(0, |m| m + 1) != t - 1 {
            continue;
        }
        let p = BlockPartition::from_labels(&labels, ns);
        let v = conj_objective(&p, k);
        if better((v, &p), best.as_ref()) {
            best = Some((v, p));
        }
    }
    let (value, p) = best.expect("r >= t-1 admits a partition");
    Ok(FormulaResult {
        value,
        argmax_partition: Some(p),
        witness_term: WitnessTerm::Partition,
        sort_permutation: None,
    })
}

/// `(k-1)(Σ n_i - min n_i)`, the disjoint-edge extremal value.
pub fn matching_extremal_value(ns: &PartSizes, k: usize) -> u64 {
    let min = *ns.sizes().iter().min().expect("nonempty") as u64;
    (k.saturating_sub(1) as u64) * (ns.total() as u64 - min)
}

/// A bipartition maximizing `min(n_I, n_I')`, with that minimum as the
/// min-degree threshold for forced triangles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimalBipartition {
    pub partition: BlockPartition,
    pub mindeg_threshold: u64,
}

pub fn optimal_bipartition(ns: &PartSizes) -> Result<OptimalBipartition> {
    if ns.r() < 2 {
        return Err(Error::InvalidParameter("a bipartition needs at least 2 parts".into()));
    }
    let mut best: Option<(u64, BlockPartition)> = None;
    for labels in SetPartitions::new(ns.r(), 2) {
        if !labels.contains(&1) {
            continue;
        }
        let p = BlockPartition::from_labels(&labels, ns);
        let v = p.block_sums()[0].min(p.block_sums()[1]);
        // the first block always holds part 1, so list order is the tie-break
        if better((v, &p), best.as_ref()) {
            best = Some((v, p));
        }
    }
    let (mindeg_threshold, partition) = best.expect("r >= 2");
    Ok(OptimalBipartition {
        partition,
        mindeg_threshold,
    })
}

/// `Δ = max(0, e - g(ns))` for four parts.
pub fn delta_excess(e_count: u64, ns: &PartSizes, k: usize) -> Result<u64> {
    let g = g_of(ns, k)?;
    Ok(e_count.saturating_sub(g.value))
}

/// `g(ns) - g(ns')` where `ns'` shrinks `ns` coordinate-wise.
pub fn induction_gap(ns: &PartSizes, reduced: &PartSizes, k: usize) -> Result<i64> {
    let a = four(ns)?;
    let b = four(reduced)?;
    if let Some(i) = (0..4).find(|&i| b[i] > a[i]) {
        return Err(Error::InvalidParameter(format!(
            "reduced size {} exceeds original {} in part {}",
            b[i],
            a[i],
            i + 1
        )));
    }
    let ga = g_value(a, k)?.value as i64;
    let gb = g_value(b, k)?.value as i64;
    Ok(ga - gb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ns(v: &[usize]) -> PartSizes {
        PartSizes::new(v.to_vec()).unwrap()
    }

    /// Maximizes over every labelling `[r] -> [blocks]` (each partition many
    /// times over), independent of the restricted-growth enumerator.
    fn brute_labelled(sizes: &[usize], blocks: usize, exact: bool, k: u64) -> u64 {
        let r = sizes.len();
        let mut best = 0u64;
        let total = blocks.pow(r as u32);
        for code in 0..total {
            let mut c = code;
            let mut sums = vec![0u64; blocks];
            let mut mins = vec![u64::MAX; blocks];
            for &s in sizes {
                let b = c % blocks;
                c /= blocks;
                sums[b] += s as u64;
                mins[b] = mins[b].min(s as u64);
            }
            let used = sums.iter().filter(|&&s| s > 0).count();
            if exact && used != blocks {
                continue;
            }
            let mut cross = 0;
            for i in 0..blocks {
                for j in i + 1..blocks {
                    cross += sums[i] * sums[j];
                }
            }
            let surplus = (0..blocks)
                .filter(|&b| sums[b] > 0)
                .map(|b| sums[b] - mins[b])
                .max()
                .unwrap_or(0);
            best = best.max(cross + (k - 1) * surplus);
        }
        best
    }

    #[test]
    fn g_value_examples() {
        let r = g_value([7, 4, 3, 2], 2).unwrap();
        assert_eq!((r.value, r.witness_term), (70, WitnessTerm::Both));
        let r = g_value([5, 4, 3, 2], 2).unwrap();
        assert_eq!((r.value, r.witness_term), (54, WitnessTerm::G1));
        assert_eq!(g_terms([5, 4, 3, 2], 2), (54, 52));
        let r = g_value([2, 5, 3, 4], 2).unwrap();
        assert_eq!(r.value, 54);
        assert_eq!(r.sort_permutation, Some(vec![1, 3, 2, 0]));
    }

    #[test]
    fn g_value_rejects_bad_input() {
        assert!(g_value([0, 1, 1, 1], 1).is_err());
        assert!(g_value([1, 1, 1, 1], 0).is_err());
        assert!(g_of(&ns(&[1, 1, 1]), 1).is_err());
    }

    #[test]
    fn bet_value_examples() {
        let r = bet_value(&ns(&[1, 1, 1, 1, 1]), 3).unwrap();
        assert_eq!(r.value, 6);
        let p = r.argmax_partition.unwrap();
        let mut sizes: Vec<usize> = p.blocks().iter().map(|b| b.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 3]);

        let r = bet_value(&ns(&[5, 4, 3, 2]), 3).unwrap();
        assert_eq!(r.value, 49);
        assert_eq!(r.argmax_partition.unwrap().to_string(), "{1,4},{2,3}");

        let r = bet_value(&ns(&[2, 2]), 3).unwrap();
        assert_eq!(r.value, 4);
        assert_eq!(r.argmax_partition.unwrap().len(), 2);
    }

    #[test]
    fn conj_value_examples() {
        let r = conj_value(&ns(&[5, 4, 3, 2]), 3, 2).unwrap();
        assert_eq!(r.value, 54);
        let p = r.argmax_partition.unwrap();
        assert_eq!(p.to_string(), "{1,4},{2,3}");
        assert_eq!(p.surplus(), 5);

        let r = conj_value(&ns(&[3, 2, 2, 2, 2]), 3, 2).unwrap();
        assert_eq!(r.value, 34);
        let p = r.argmax_partition.unwrap();
        let mut sums = p.block_sums().to_vec();
        sums.sort();
        assert_eq!(sums, vec![5, 6]);
        assert_eq!(p.surplus(), 4);
        assert_eq!(brute_labelled(&[3, 2, 2, 2, 2], 2, true, 2), 34);

        assert!(conj_value(&ns(&[1]), 4, 2).is_err());
    }

    #[test]
    fn conj_reduces_to_bet_at_k1() {
        for sizes in [vec![1, 1, 1, 1, 1], vec![5, 4, 3, 2], vec![7, 1, 1], vec![3, 3, 2, 2, 1, 1]] {
            for t in 3..=sizes.len() + 1 {
                let p = ns(&sizes);
                assert_eq!(conj_value(&p, t, 1).unwrap().value, bet_value(&p, t).unwrap().value);
            }
        }
    }

    #[test]
    fn matching_examples() {
        assert_eq!(matching_extremal_value(&ns(&[2, 2, 2]), 2), 4);
        assert_eq!(matching_extremal_value(&ns(&[9, 4, 1]), 1), 0);
        assert_eq!(matching_extremal_value(&ns(&[5, 4, 3, 2]), 3), 24);
    }

    #[test]
    fn optimal_bipartition_examples() {
        let b = optimal_bipartition(&ns(&[3, 2, 2])).unwrap();
        assert_eq!(b.mindeg_threshold, 3);
        assert_eq!(b.partition.to_string(), "{1},{2,3}");
        assert_eq!(optimal_bipartition(&ns(&[1, 1])).unwrap().mindeg_threshold, 1);
        let b = optimal_bipartition(&ns(&[5, 4, 3, 2, 1])).unwrap();
        assert_eq!(b.mindeg_threshold, 7);
        assert_eq!(b.partition.to_string(), "{1,3},{2,4,5}");
        assert!(optimal_bipartition(&ns(&[4])).is_err());
    }

    #[test]
    fn delta_and_gap_examples() {
        let p = ns(&[5, 4, 3, 2]);
        assert_eq!(delta_excess(54, &p, 2).unwrap(), 0);
        assert_eq!(delta_excess(0, &p, 2).unwrap(), 0);
        assert_eq!(delta_excess(24, &ns(&[2, 2, 2, 2]), 1).unwrap(), 8);
        assert!(delta_excess(3, &ns(&[1, 1, 1]), 1).is_err());

        assert_eq!(induction_gap(&ns(&[8, 3, 2, 2]), &ns(&[7, 3, 2, 2]), 2).unwrap(), 7);
        assert_eq!(induction_gap(&p, &p, 2).unwrap(), 0);
        assert_eq!(induction_gap(&p, &ns(&[5, 4, 3, 1]), 1).unwrap(), 7);
        assert!(induction_gap(&ns(&[5, 4, 3, 1]), &p, 1).is_err());
    }

    #[test]
    fn g_equals_bet_at_k1_exhaustive() {
        for a in 1..=12 {
            for b in 1..=a {
                for c in 1..=b {
                    for d in 1..=c {
                        let g = g_value([a, b, c, d], 1).unwrap().value;
                        let bet = bet_value(&ns(&[a, b, c, d]), 3).unwrap().value;
                        assert_eq!(g, bet, "{a},{b},{c},{d}");
                    }
                }
            }
        }
    }

    #[test]
    fn argmax_matches_brute_force_labelling() {
        for sizes in [vec![1, 2, 3, 4, 5], vec![6, 1, 1, 1], vec![3, 3, 3, 2, 2, 1], vec![4, 4, 1]] {
            let p = ns(&sizes);
            for t in 2..=4 {
                let bet = bet_value(&p, t).unwrap();
                assert_eq!(bet.value, brute_labelled(&sizes, t - 1, false, 1));
                assert_eq!(bet.argmax_partition.unwrap().cross_product_sum(), bet.value);
                for k in 1..=4 {
                    if sizes.len() < t - 1 {
                        continue;
                    }
                    let c = conj_value(&p, t, k).unwrap();
                    assert_eq!(c.value, brute_labelled(&sizes, t - 1, true, k as u64));
                    assert_eq!(conj_objective(c.argmax_partition.as_ref().unwrap(), k), c.value);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn permutation_invariance(mut v in prop::collection::vec(1usize..30, 4), k in 1usize..6, seed in 0usize..24) {
            let g0 = g_value([v[0], v[1], v[2], v[3]], k).unwrap().value;
            let b0 = bet_value(&ns(&v), 3).unwrap().value;
            let c0 = conj_value(&ns(&v), 3, k).unwrap().value;
            let m0 = matching_extremal_value(&ns(&v), k);
            // apply the seed-th permutation via successive rotations/swaps
            v.rotate_left(seed % 4);
            v.swap(0, (seed / 4) % 4);
            prop_assert_eq!(g_value([v[0], v[1], v[2], v[3]], k).unwrap().value, g0);
            prop_assert_eq!(bet_value(&ns(&v), 3).unwrap().value, b0);
            prop_assert_eq!(conj_value(&ns(&v), 3, k).unwrap().value, c0);
            prop_assert_eq!(matching_extremal_value(&ns(&v), k), m0);
        }

        #[test]
        fn monotone_in_sizes_and_k(v in prop::collection::vec(1usize..30, 4), i in 0usize..4, k in 1usize..6) {
            let mut w = v.clone();
            w[i] += 1;
            let a = [v[0], v[1], v[2], v[3]];
            let b = [w[0], w[1], w[2], w[3]];
            prop_assert!(g_value(b, k).unwrap().value >= g_value(a, k).unwrap().value);
            prop_assert!(g_value(a, k + 1).unwrap().value >= g_value(a, k).unwrap().value);
            prop_assert!(bet_value(&ns(&w), 3).unwrap().value >= bet_value(&ns(&v), 3).unwrap().value);
            prop_assert!(conj_value(&ns(&w), 3, k).unwrap().value >= conj_value(&ns(&v), 3, k).unwrap().value);
            prop_assert!(conj_value(&ns(&v), 3, k + 1).unwrap().value >= conj_value(&ns(&v), 3, k).unwrap().value);
            prop_assert!(matching_extremal_value(&ns(&w), k) >= matching_extremal_value(&ns(&v), k));
        }

        #[test]
        fn conj_agrees_with_g_when_n4_large(k in 1usize..=5, extra in prop::collection::vec(0usize..40, 4)) {
            let v: Vec<usize> = extra.iter().map(|e| 4 * k + e).collect();
            let g = g_value([v[0], v[1], v[2], v[3]], k).unwrap().value;
            prop_assert_eq!(conj_value(&ns(&v), 3, k).unwrap().value, g);
        }
    }
}
