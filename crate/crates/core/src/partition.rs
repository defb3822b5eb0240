use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coalition::{Coalition, MAX_AGENTS};
use crate::error::{Error, Result};

/// A partition of `{0, .., n-1}` into disjoint non-empty blocks.
///
/// Blocks are kept sorted by their lowest member, so two partitions with the
/// same blocks compare equal regardless of construction order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<Coalition>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn new(n: usize, blocks: impl IntoIterator<Item = Coalition>) -> Result<Self> {
        if n == 0 || n > MAX_AGENTS {
            return Err(Error::InvalidPartition(format!("agent count {n} out of range")));
        }
        let mut blocks: Vec<Coalition> = blocks.into_iter().collect();
        let mut seen = Coalition::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if b.intersects(seen) {
                return Err(Error::InvalidPartition(format!("block {b} overlaps another block")));
            }
            seen = seen.union(*b);
        }
        if seen != Coalition::grand(n) {
            return Err(Error::InvalidPartition(format!(
                "blocks cover {seen}, expected every agent in 0..{n}"
            )));
        }
        blocks.sort_by_key(|b| b.first());
        let mut block_of = vec![0; n];
        for (k, b) in blocks.iter().enumerate() {
            for agent in b.members() {
                block_of[agent] = k;
            }
        }
        Ok(Partition { n, blocks, block_of })
    }

    /// Builds a partition from a restricted growth string: `labels[i]` is the
    /// block index of agent `i`, and every label is at most one more than the
    /// largest label before it.
    pub fn from_rgs(labels: &[usize]) -> Result<Self> {
        let count = labels.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Coalition::EMPTY; count];
        for (agent, &label) in labels.iter().enumerate() {
            blocks[label].insert(agent);
        }
        Partition::new(labels.len(), blocks)
    }

    pub fn singletons(n: usize) -> Self {
        Partition::new(n, (0..n).map(Coalition::singleton)).expect("singletons cover N")
    }

    pub fn grand(n: usize) -> Self {
        Partition::new(n, [Coalition::grand(n)]).expect("grand coalition covers N")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    /// The block containing `agent`, written `π(i)`.
    pub fn block_of(&self, agent: usize) -> Coalition {
        self.blocks[self.block_of[agent]]
    }

    pub fn block_index(&self, agent: usize) -> usize {
        self.block_of[agent]
    }

    /// Restricted growth string encoding; lexicographic order on these is the
    /// enumeration order used by the exact core solver.
    pub fn rgs(&self) -> Vec<usize> {
        self.block_of.clone()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    blocks: Vec<Coalition>,
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PartitionJson {
            blocks: self.blocks.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = PartitionJson::deserialize(deserializer)?;
        let union = raw.blocks.iter().fold(Coalition::EMPTY, |acc, b| acc.union(*b));
        let n = 32 - union.bits().leading_zeros() as usize;
        Partition::new(n, raw.blocks).map_err(serde::de::Error::custom)
    }
}

/// Iterates every partition of `n` agents in lexicographic order of their
/// restricted growth strings (the grand coalition first, singletons last).
pub fn partitions(n: usize) -> impl Iterator<Item = Partition> {
    RgsIter::new(n).map(|labels| Partition::from_rgs(&labels).expect("valid growth string"))
}

struct RgsIter {
    labels: Vec<usize>,
    // running maxima: maxima[i] = max(labels[..=i])
    maxima: Vec<usize>,
    started: bool,
    done: bool,
}

impl RgsIter {
    fn new(n: usize) -> Self {
        RgsIter {
            labels: vec![0; n],
            maxima: vec![0; n],
            started: false,
            done: n == 0,
        }
    }
}

impl Iterator for RgsIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.labels.clone());
        }
        let n = self.labels.len();
        // find the rightmost position that can be incremented
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.labels[i] <= self.maxima[i - 1] {
                self.labels[i] += 1;
                self.maxima[i] = self.maxima[i - 1].max(self.labels[i]);
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.maxima[j] = self.maxima[i];
                }
                return Some(self.labels.clone());
            }
        }
        self.done = true;
        None
    }
}
