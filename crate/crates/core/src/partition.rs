//! Partitions of the part-index set `[r]` into blocks.
//!
//! Enumeration walks restricted growth strings: `a[0] = 0` and
//! `a[i] <= 1 + max(a[..i])`, capped at `max_blocks - 1`. Each string is
//! visited once, and blocks come out already ordered by least element.

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::PartSizes;

/// Iterator over all partitions of `0..n` into at most `max_blocks` nonempty
/// blocks, yielded as restricted growth strings.
pub struct SetPartitions {
    labels: Vec<usize>,
    prefix_max: Vec<usize>,
    max_blocks: usize,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize, max_blocks: usize) -> Self {
        SetPartitions {
            labels: vec![0; n],
            prefix_max: vec![0; n],
            max_blocks,
            done: n == 0 || max_blocks == 0,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.labels.len();
        for i in (1..n).rev() {
            let cap = (self.prefix_max[i - 1] + 1).min(self.max_blocks - 1);
            if self.labels[i] < cap {
                self.labels[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.labels[i]);
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.labels.clone();
        self.done = !self.advance();
        Some(out)
    }
}

/// Converts a restricted growth string into blocks ordered by least element.
pub fn labels_to_blocks(labels: &[usize]) -> Vec<Vec<usize>> {
    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); count];
    for (i, &b) in labels.iter().enumerate() {
        blocks[b].push(i);
    }
    blocks
}

/// A partition `P` of the part indices, with `n_I`, `m_I` and `n_P` cached.
///
/// Part indices are 0-based internally; `Display` and JSON show them 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    blocks: Vec<Vec<usize>>,
    block_sums: Vec<u64>,
    block_mins: Vec<u64>,
    surplus: u64,
    surplus_block: usize,
}

impl BlockPartition {
    /// Validates that `blocks` partitions `0..ns.r()` and canonicalizes the order.
    pub fn new(mut blocks: Vec<Vec<usize>>, ns: &PartSizes) -> Result<Self> {
        let r = ns.r();
        let mut seen = vec![false; r];
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidParameter("empty block in partition".into()));
            }
            b.sort_unstable();
            for &p in b.iter() {
                if p >= r {
                    return Err(Error::InvalidParameter(format!(
                        "part {} out of range 1..={r}",
                        p + 1
                    )));
                }
                if std::mem::replace(&mut seen[p], true) {
                    return Err(Error::InvalidParameter(format!(
                        "part {} appears in two blocks",
                        p + 1
                    )));
                }
            }
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidParameter(format!("part {} not covered", p + 1)));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self::from_canonical(blocks, ns))
    }

    pub(crate) fn from_labels(labels: &[usize], ns: &PartSizes) -> Self {
        Self::from_canonical(labels_to_blocks(labels), ns)
    }

    fn from_canonical(blocks: Vec<Vec<usize>>, ns: &PartSizes) -> Self {
        let block_sums: Vec<u64> = blocks.iter().map(|b| ns.sum_of(b) as u64).collect();
        let block_mins: Vec<u64> = blocks
            .iter()
            .map(|b| b.iter().map(|&i| ns.size(i) as u64).min().unwrap_or(0))
            .collect();
        let (surplus_block, surplus) = block_sums
            .iter()
            .zip(&block_mins)
            .map(|(s, m)| s - m)
            .enumerate()
            .fold((0, 0), |best, (i, v)| if v > best.1 { (i, v) } else { best });
        BlockPartition {
            blocks,
            block_sums,
            block_mins,
            surplus,
            surplus_block,
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `n_I` per block.
    pub fn block_sums(&self) -> &[u64] {
        &self.block_sums
    }

    /// `m_I` per block.
    pub fn block_mins(&self) -> &[u64] {
        &self.block_mins
    }

    /// `n_P = max_I (n_I - m_I)`.
    pub fn surplus(&self) -> u64 {
        self.surplus
    }

    /// Index of the first block attaining the surplus (`I_0`).
    pub fn surplus_block(&self) -> usize {
        self.surplus_block
    }

    /// `Σ_{I≠I'} n_I · n_I'` over unordered block pairs.
    pub fn cross_product_sum(&self) -> u64 {
        let total: u64 = self.block_sums.iter().sum();
        let squares: u64 = self.block_sums.iter().map(|s| s * s).sum();
        (total * total - squares) / 2
    }

    /// Blocks as 1-based part ids.
    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|p| p + 1).collect())
            .collect()
    }
}

impl fmt::Display for BlockPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .one_based()
            .iter()
            .map(|b| {
                let ids: Vec<String> = b.iter().map(|p| p.to_string()).collect();
                format!("{{{}}}", ids.join(","))
            })
            .collect();
        f.write_str(&blocks.join(","))
    }
}

impl Serialize for BlockPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BlockPartition", 4)?;
        st.serialize_field("blocks", &self.one_based())?;
        st.serialize_field("block_sums", &self.block_sums)?;
        st.serialize_field("block_mins", &self.block_mins)?;
        st.serialize_field("surplus", &self.surplus)?;
        st.end()
    }
}
