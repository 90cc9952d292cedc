//! Partitions of the party index set.
//!
//! Internally parties are 0-based; the text form (`1,2|3,4`) is 1-based.

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Disjoint, nonempty, sorted blocks covering `0..n`, at least two of them.
///
/// Blocks are ordered by their smallest element, so the derived ordering is
/// the canonical ordering used for witness lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.len() < 2 {
            return Err(Error::InvalidPartition("a partition needs at least two blocks".into()));
        }
        let mut seen = vec![false; n];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &i in b {
                if i >= n {
                    return Err(Error::InvalidPartition(format!(
                        "party {} out of range for {n} parties",
                        i + 1
                    )));
                }
                if seen[i] {
                    return Err(Error::InvalidPartition(format!("party {} appears twice", i + 1)));
                }
                seen[i] = true;
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidPartition(format!("party {} is not covered", missing + 1)));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { blocks })
    }

    /// Two-block partition `{A, complement of A}`.
    pub fn bipartition(n: usize, side: &[usize]) -> Result<Self> {
        let rest: Vec<usize> = (0..n).filter(|i| !side.contains(i)).collect();
        Self::new(n, vec![side.to_vec(), rest])
    }

    pub fn from_masks(n: usize, masks: &[u64]) -> Result<Self> {
        Self::new(n, masks.iter().map(|&m| mask_to_sites(m)).collect())
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

    pub fn n_parties(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn block_of(&self, party: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&party))
    }

    /// `i` and `j` lie in different blocks.
    pub fn separates(&self, i: usize, j: usize) -> bool {
        self.block_of(i) != self.block_of(j)
    }

    pub fn masks(&self) -> Vec<u64> {
        self.blocks.iter().map(|b| sites_to_mask(b)).collect()
    }

    /// Merges blocks `a` and `b`; `None` if fewer than two blocks would remain.
    pub fn merged(&self, a: usize, b: usize) -> Option<Partition> {
        if a == b || self.blocks.len() < 3 || a >= self.blocks.len() || b >= self.blocks.len() {
            return None;
        }
        let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(self.blocks.len() - 1);
        let mut joined = self.blocks[a].clone();
        joined.extend_from_slice(&self.blocks[b]);
        blocks.push(joined);
        for (k, blk) in self.blocks.iter().enumerate() {
            if k != a && k != b {
                blocks.push(blk.clone());
            }
        }
        Partition::new(self.n_parties(), blocks).ok()
    }

    /// Applies a relabeling: party `i` of `self` becomes party `new_of_old[i]`.
    pub fn relabeled(&self, new_of_old: &[usize]) -> Result<Partition> {
        Partition::new(
            self.n_parties(),
            self.blocks
                .iter()
                .map(|b| b.iter().map(|&i| new_of_old[i]).collect())
                .collect(),
        )
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let blocks = text
            .trim()
            .split('|')
            .map(|blk| {
                blk.split(',')
                    .map(|tok| {
                        let tok = tok.trim();
                        match tok.parse::<usize>() {
                            Ok(v) if v >= 1 => Ok(v - 1),
                            _ => Err(Error::InvalidPartition(format!("bad party index '{tok}' in '{text}'"))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, blocks)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `1,2|3,4`; the party count is taken from the largest index.
    fn from_str(s: &str) -> Result<Self> {
        let n = s
            .split(['|', ','])
            .filter_map(|t| t.trim().parse::<usize>().ok())
            .max()
            .unwrap_or(0);
        Partition::parse(n, s)
    }
}

pub fn sites_to_mask(sites: &[usize]) -> u64 {
    sites.iter().fold(0u64, |m, &s| m | (1u64 << s))
}

pub fn mask_to_sites(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let s = mask.trailing_zeros() as usize;
        out.push(s);
        mask &= mask - 1;
    }
    out
}

/// Sides `A` (containing the smallest element of `set`) of every bipartition
/// `{A, set \ A}` of the site mask `set`, as masks.
pub fn bipartition_sides(set: u64) -> Vec<u64> {
    if set.count_ones() < 2 {
        return Vec::new();
    }
    let low = set & set.wrapping_neg();
    let rest = set & !low;
    let others = mask_to_sites(rest);
    let count = 1u64 << others.len();
    (0..count - 1)
        .map(|bits| {
            mask_to_sites(bits)
                .into_iter()
                .fold(low, |m, i| m | (1u64 << others[i]))
        })
        .collect()
}

/// All set partitions of `0..n` with at least two blocks, via restricted
/// growth strings, in canonical order.
pub fn set_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut rgs = vec![0usize; n];
    let mut maxes = vec![0usize; n];
    loop {
        let blocks = rgs.iter().max().unwrap() + 1;
        if blocks >= 2 {
            let mut grouped = vec![Vec::new(); blocks];
            for (i, &b) in rgs.iter().enumerate() {
                grouped[b].push(i);
            }
            out.push(Partition { blocks: grouped });
        }
        // next restricted growth string: rightmost position that can grow
        let mut i = n - 1;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            if rgs[i] <= maxes[i - 1] {
                rgs[i] += 1;
                let m = maxes[i - 1].max(rgs[i]);
                maxes[i] = m;
                for j in i + 1..n {
                    rgs[j] = 0;
                    maxes[j] = m;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Number of partitions of an `n`-set (Bell number), saturating.
pub fn bell_number(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &v in &row {
            let last = *next.last().unwrap();
            next.push(last.saturating_add(v));
        }
        row = next;
    }
    row[0]
}
