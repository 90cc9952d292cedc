//! Local commutation, stabilizer separability and the two certification
//! conditions for unlockable bound entanglement.
//!
//! General partitions are reduced to bipartitions: per-block commutator
//! exponents add, so merging blocks of a separable partition keeps it
//! separable. A pair of parties is split by some separable partition iff it
//! is split by a separable bipartition, and a block is inseparable iff no
//! bipartition of it is separable.

use crate::error::{Error, Result};
use crate::group::{close_with_cap, GeneratorSet, DEFAULT_CLOSURE_CAP};
use crate::partition::{bell_number, bipartition_sides, mask_to_sites, set_partitions, Partition};
use crate::pauli::PauliWord;
use rayon::prelude::*;
use std::collections::HashMap;

/// Search limits for certification.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Largest party count for exhaustive bipartition search.
    pub bipartition_cap: usize,
    /// Largest party count for exhaustive set-partition search (condition 2).
    pub full_enumeration_cap: usize,
    /// Candidate partitions for condition 2; required above `full_enumeration_cap`.
    pub candidates: Option<Vec<Partition>>,
    /// Cap on closure tuples when checking completeness of restricted groups.
    pub closure_cap: u128,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            bipartition_cap: 16,
            full_enumeration_cap: 9,
            candidates: None,
            closure_cap: DEFAULT_CLOSURE_CAP,
        }
    }
}

/// Per-site commutator contributions for every generator pair.
struct CommutationTable {
    modulus: u64,
    pairs: Vec<Vec<u64>>,
}

impl CommutationTable {
    fn new(gens: &GeneratorSet) -> Self {
        let n = gens.n_sites();
        let g = gens.gens();
        let mut pairs = Vec::new();
        for i in 0..g.len() {
            for j in i + 1..g.len() {
                let per_site: Vec<u64> = (0..n).map(|k| g[i].site_commutator(&g[j], k)).collect();
                if per_site.iter().any(|&c| c != 0) {
                    pairs.push(per_site);
                }
            }
        }
        CommutationTable {
            modulus: gens.dims().phase_modulus(),
            pairs,
        }
    }

    /// Every generator pair commutes when restricted to `mask`.
    fn block_commutes(&self, mask: u64) -> bool {
        self.pairs.iter().all(|c| {
            let mut acc = 0u64;
            let mut m = mask;
            while m != 0 {
                let k = m.trailing_zeros() as usize;
                acc = (acc + c[k]) % self.modulus;
                m &= m - 1;
            }
            acc == 0
        })
    }

    fn separable(&self, masks: &[u64]) -> bool {
        masks.iter().all(|&m| self.block_commutes(m))
    }

    fn inseparable_block(&self, mask: u64) -> bool {
        bipartition_sides(mask)
            .into_iter()
            .all(|a| !(self.block_commutes(a) && self.block_commutes(mask & !a)))
    }
}

fn check_party_count(gens: &GeneratorSet, p: &Partition) -> Result<()> {
    if p.n_parties() != gens.n_sites() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} parties, system has {}",
            p.n_parties(),
            gens.n_sites()
        )));
    }
    if gens.n_sites() > 64 {
        return Err(Error::CapExceeded {
            what: "party count",
            size: gens.n_sites() as u128,
            cap: 64,
        });
    }
    Ok(())
}

/// The restrictions of `a` and `b` commute on every block of `p`.
pub fn locally_commute(a: &PauliWord, b: &PauliWord, p: &Partition) -> Result<bool> {
    if p.n_parties() != a.len() {
        return Err(Error::InvalidPartition("partition does not match word length".into()));
    }
    for block in p.blocks() {
        if a.commutator_exponent(b, block)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The stabilizer is separable with respect to `p`.
pub fn is_separable(gens: &GeneratorSet, p: &Partition) -> Result<bool> {
    check_party_count(gens, p)?;
    let g = gens.gens();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if !locally_commute(&g[i], &g[j], p)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn bipartition_cap_check(n: usize, cap: usize) -> Result<()> {
    if n > cap || n > 63 {
        return Err(Error::CapExceeded {
            what: "party count for bipartition search",
            size: n as u128,
            cap: cap.min(63) as u128,
        });
    }
    Ok(())
}

/// Every separable bipartition, in canonical order.
pub fn separable_bipartitions(gens: &GeneratorSet, cap: usize) -> Result<Vec<Partition>> {
    let n = gens.n_sites();
    bipartition_cap_check(n, cap)?;
    let table = CommutationTable::new(gens);
    let full = (1u64 << n) - 1;
    let mut out: Vec<Partition> = bipartition_sides(full)
        .into_par_iter()
        .filter(|&a| table.separable(&[a, full & !a]))
        .map(|a| Partition::from_masks(n, &[a, full & !a]).expect("valid bipartition"))
        .collect();
    out.sort();
    Ok(out)
}

/// Witness for one unordered pair under condition (1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairWitness {
    /// 0-based parties, `i < j`.
    pub pair: (usize, usize),
    pub witness: Option<Partition>,
}

/// Finds, for every pair of parties, the first separable bipartition that
/// splits them.
pub fn check_condition1(gens: &GeneratorSet, cap: usize) -> Result<Vec<PairWitness>> {
    let bips = separable_bipartitions(gens, cap)?;
    let n = gens.n_sites();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(PairWitness {
                pair: (i, j),
                witness: bips.iter().find(|p| p.separates(i, j)).cloned(),
            });
        }
    }
    Ok(out)
}

/// No bipartition of `sites` makes the restricted generators commute locally.
pub fn is_inseparable_on(gens: &GeneratorSet, sites: &[usize]) -> Result<bool> {
    if sites.len() < 2 {
        return Err(Error::InvalidSites("inseparability needs at least two sites".into()));
    }
    crate::pauli::check_sites(gens.n_sites(), sites)?;
    bipartition_cap_check(gens.n_sites(), 63)?;
    let table = CommutationTable::new(gens);
    Ok(table.inseparable_block(crate::partition::sites_to_mask(sites)))
}

/// A partition satisfying condition (2) together with its unlock block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Condition2Witness {
    pub partition: Partition,
    /// Index into `partition.blocks()`.
    pub block: usize,
}

impl Condition2Witness {
    pub fn unlock_sites(&self) -> &[usize] {
        &self.partition.blocks()[self.block]
    }
}

/// Caches whether the restriction to a block is complete and inseparable.
struct BlockOracle<'a> {
    gens: &'a GeneratorSet,
    table: CommutationTable,
    closure_cap: u128,
}

impl<'a> BlockOracle<'a> {
    fn new(gens: &'a GeneratorSet, closure_cap: u128) -> Self {
        BlockOracle {
            gens,
            table: CommutationTable::new(gens),
            closure_cap,
        }
    }

    fn unlockable(&self, mask: u64) -> Result<bool> {
        if mask.count_ones() < 2 || !self.table.block_commutes(mask) {
            return Ok(false);
        }
        if !self.table.inseparable_block(mask) {
            return Ok(false);
        }
        let restricted = self.gens.restrict(&mask_to_sites(mask))?;
        Ok(close_with_cap(&restricted, self.closure_cap)?.is_complete())
    }

    fn witnesses(&self, partitions: &[Partition]) -> Result<Vec<Condition2Witness>> {
        let mut masks: Vec<u64> = partitions.iter().flat_map(|p| p.masks()).collect();
        masks.sort_unstable();
        masks.dedup();
        let verdicts: HashMap<u64, bool> = masks
            .par_iter()
            .map(|&m| self.unlockable(m).map(|v| (m, v)))
            .collect::<Result<_>>()?;
        let mut out: Vec<Condition2Witness> = partitions
            .par_iter()
            .filter(|p| self.table.separable(&p.masks()))
            .flat_map_iter(|p| {
                p.masks()
                    .into_iter()
                    .enumerate()
                    .filter(|(_, m)| verdicts[m])
                    .map(|(block, _)| Condition2Witness {
                        partition: p.clone(),
                        block,
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        out.sort();
        Ok(out)
    }
}

/// Partitions (with unlock block) satisfying condition (2).
pub fn check_condition2(gens: &GeneratorSet, opts: &SearchOptions) -> Result<Vec<Condition2Witness>> {
    let n = gens.n_sites();
    bipartition_cap_check(n, 63)?;
    let candidates = match &opts.candidates {
        Some(c) => {
            for p in c {
                check_party_count(gens, p)?;
            }
            c.clone()
        }
        None => {
            if n > opts.full_enumeration_cap {
                return Err(Error::CapExceeded {
                    what: "set-partition enumeration (supply candidates)",
                    size: bell_number(n),
                    cap: bell_number(opts.full_enumeration_cap),
                });
            }
            set_partitions(n)
        }
    };
    BlockOracle::new(gens, opts.closure_cap).witnesses(&candidates)
}

/// Checks one (partition, block) pair against condition (2).
pub fn satisfies_condition2(
    gens: &GeneratorSet,
    partition: &Partition,
    block: usize,
    closure_cap: u128,
) -> Result<bool> {
    check_party_count(gens, partition)?;
    let masks = partition.masks();
    let Some(&mask) = masks.get(block) else {
        return Err(Error::InvalidPartition(format!("no block {}", block + 1)));
    };
    let oracle = BlockOracle::new(gens, closure_cap);
    Ok(oracle.table.separable(&masks) && oracle.unlockable(mask)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailedCondition {
    Condition1,
    Condition2,
    EmptySubspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    CertifiedUbe,
    NotCertified(Vec<FailedCondition>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub condition1: Vec<PairWitness>,
    pub condition2: Vec<Condition2Witness>,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedUbe
    }

    pub fn uncovered_pairs(&self) -> Vec<(usize, usize)> {
        self.condition1
            .iter()
            .filter(|w| w.witness.is_none())
            .map(|w| w.pair)
            .collect()
    }

    /// Re-checks every stored witness from scratch.
    pub fn revalidate(&self, gens: &GeneratorSet, closure_cap: u128) -> Result<bool> {
        for w in &self.condition1 {
            if let Some(p) = &w.witness {
                if !p.separates(w.pair.0, w.pair.1) || !is_separable(gens, p)? {
                    return Ok(false);
                }
            }
        }
        for w in &self.condition2 {
            if w.unlock_sites().len() < 2
                || !is_separable(gens, &w.partition)?
                || !is_inseparable_on(gens, w.unlock_sites())?
            {
                return Ok(false);
            }
            let restricted = gens.restrict(w.unlock_sites())?;
            if !close_with_cap(&restricted, closure_cap)?.is_complete() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Combines both conditions into a verdict.
pub fn certify_ube(gens: &GeneratorSet, opts: &SearchOptions) -> Result<Certificate> {
    gens.check_commuting()?;
    let group = close_with_cap(gens, opts.closure_cap)?;
    let condition1 = check_condition1(gens, opts.bipartition_cap)?;
    let condition2 = check_condition2(gens, opts)?;
    let mut failed = Vec::new();
    if group.phase_collision() {
        failed.push(FailedCondition::EmptySubspace);
    }
    if condition1.iter().any(|w| w.witness.is_none()) {
        failed.push(FailedCondition::Condition1);
    }
    if condition2.is_empty() {
        failed.push(FailedCondition::Condition2);
    }
    let verdict = if failed.is_empty() {
        Verdict::CertifiedUbe
    } else {
        Verdict::NotCertified(failed)
    };
    Ok(Certificate {
        condition1,
        condition2,
        verdict,
    })
}
