//! Abelian groups generated by commuting `G'` words.

use crate::error::{Error, Result};
use crate::pauli::{PauliWord, RootOfUnity, SystemDims};
use std::collections::HashMap;

/// Default cap on the number of exponent tuples enumerated by [`close`].
pub const DEFAULT_CLOSURE_CAP: u128 = 1 << 20;

/// Ordered list of `G'` generators on a common system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    dims: SystemDims,
    gens: Vec<PauliWord>,
}

impl GeneratorSet {
    /// Validates shared dimensions and `G'` membership. Commutation is
    /// checked separately by [`GeneratorSet::check_commuting`].
    pub fn new(dims: SystemDims, gens: Vec<PauliWord>) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.dims() != &dims {
                return Err(Error::DimensionMismatch(format!(
                    "generator {} lives on [{}], expected [{}]",
                    i + 1,
                    g.dims(),
                    dims
                )));
            }
            if !g.is_gprime() {
                return Err(Error::NotGPrime { index: i + 1 });
            }
        }
        Ok(GeneratorSet { dims, gens })
    }

    /// Like [`GeneratorSet::new`] but also requires pairwise commutation.
    pub fn commuting(dims: SystemDims, gens: Vec<PauliWord>) -> Result<Self> {
        let set = Self::new(dims, gens)?;
        set.check_commuting()?;
        Ok(set)
    }

    pub fn trivial(dims: SystemDims) -> Self {
        GeneratorSet { dims, gens: Vec::new() }
    }

    pub fn dims(&self) -> &SystemDims {
        &self.dims
    }

    pub fn gens(&self) -> &[PauliWord] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn n_sites(&self) -> usize {
        self.dims.len()
    }

    /// First globally non-commuting pair, reported 1-based.
    pub fn check_commuting(&self) -> Result<()> {
        for i in 0..self.gens.len() {
            for j in i + 1..self.gens.len() {
                if self.gens[i].commutator_exponent_full(&self.gens[j])? != 0 {
                    return Err(Error::NonCommuting { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(())
    }

    /// Restrictions of every generator to `sites` (sorted).
    pub fn restrict(&self, sites: &[usize]) -> Result<GeneratorSet> {
        let mut sorted = sites.to_vec();
        sorted.sort_unstable();
        let dims = self.dims.subsystem(&sorted)?;
        let gens = self
            .gens
            .iter()
            .map(|g| g.restrict(&sorted))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorSet { dims, gens })
    }

    /// Relabels parties: site `k` of the result is site `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<GeneratorSet> {
        crate::pauli::check_sites(self.n_sites(), perm)?;
        if perm.len() != self.n_sites() {
            return Err(Error::InvalidSites("permutation length".into()));
        }
        let dims = SystemDims::new(perm.iter().map(|&p| self.dims.dim(p)).collect())?;
        let gens = self
            .gens
            .iter()
            .map(|g| PauliWord::new(&dims, 0, perm.iter().map(|&p| g.sites()[p]).collect()))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorSet { dims, gens })
    }

    pub fn orders(&self) -> Vec<u64> {
        self.gens.iter().map(PauliWord::order).collect()
    }
}

/// Per-generator eigenvalue exponents: `lambda_i = e^{2 pi i l_i / r_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SectorLabel(pub Vec<u64>);

impl SectorLabel {
    /// The all-ones label, i.e. the stabilized subspace itself.
    pub fn trivial(k: usize) -> Self {
        SectorLabel(vec![0; k])
    }

    pub fn roots(&self, orders: &[u64]) -> Vec<RootOfUnity> {
        self.0
            .iter()
            .zip(orders)
            .map(|(&l, &r)| RootOfUnity::new(l, r))
            .collect()
    }
}

/// The closure `<g_1, ..., g_k>` indexed by exponent tuples.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    source: GeneratorSet,
    orders: Vec<u64>,
    /// `elements[t]` is `prod g_i^{e_i}` for the mixed-radix index `t` of `(e_1, ..., e_k)`.
    elements: Vec<PauliWord>,
    /// Tuples whose product is a scalar multiple of the identity.
    kernel: Vec<usize>,
    size: usize,
    phase_collision: bool,
}

/// Builds the group generated by a commuting `G'` generator set.
pub fn close(gens: &GeneratorSet) -> Result<StabilizerGroup> {
    close_with_cap(gens, DEFAULT_CLOSURE_CAP)
}

pub fn close_with_cap(gens: &GeneratorSet, cap: u128) -> Result<StabilizerGroup> {
    gens.check_commuting()?;
    let orders = gens.orders();
    let tuples: u128 = orders.iter().map(|&r| r as u128).product();
    if tuples > cap {
        return Err(Error::CapExceeded {
            what: "closure tuple count",
            size: tuples,
            cap,
        });
    }
    let dims = gens.dims().clone();
    // powers[i][e] = g_i^e
    let powers: Vec<Vec<PauliWord>> = gens
        .gens()
        .iter()
        .zip(&orders)
        .map(|(g, &r)| (0..r).map(|e| g.power(e)).collect())
        .collect();

    let mut elements = Vec::with_capacity(tuples as usize);
    let mut seen: HashMap<Vec<(usize, usize)>, u64> = HashMap::new();
    let mut kernel = Vec::new();
    let mut phase_collision = false;
    let mut exps = vec![0u64; orders.len()];
    for t in 0..tuples as usize {
        let mut word = PauliWord::identity(&dims);
        for (i, &e) in exps.iter().enumerate() {
            word = word.multiply(&powers[i][e as usize])?;
        }
        if word.is_scalar() {
            kernel.push(t);
        }
        match seen.get(word.sites()) {
            Some(&p) if p != word.phase() => phase_collision = true,
            Some(_) => {}
            None => {
                seen.insert(word.sites().to_vec(), word.phase());
            }
        }
        elements.push(word);
        // mixed-radix increment, last generator fastest
        for i in (0..exps.len()).rev() {
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
        }
    }
    Ok(StabilizerGroup {
        source: gens.clone(),
        orders,
        elements,
        kernel,
        size: seen.len(),
        phase_collision,
    })
}

impl StabilizerGroup {
    pub fn generators(&self) -> &GeneratorSet {
        &self.source
    }

    pub fn dims(&self) -> &SystemDims {
        self.source.dims()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of distinct operator words, ignoring phase.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn phase_collision(&self) -> bool {
        self.phase_collision
    }

    /// Number of exponent tuples, `prod order(g_i)`.
    pub fn tuple_count(&self) -> usize {
        self.elements.len()
    }

    /// Exponent tuple of a mixed-radix index.
    pub fn tuple(&self, mut index: usize) -> Vec<u64> {
        let mut exps = vec![0; self.orders.len()];
        for i in (0..self.orders.len()).rev() {
            exps[i] = index as u64 % self.orders[i];
            index /= self.orders[i] as usize;
        }
        exps
    }

    pub fn tuple_index(&self, exps: &[u64]) -> usize {
        exps.iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&e, &r)| acc * r as usize + (e % r) as usize)
    }

    pub fn element(&self, exps: &[u64]) -> &PauliWord {
        &self.elements[self.tuple_index(exps)]
    }

    /// `(exponent tuple index, word)` for every tuple.
    pub fn elements(&self) -> impl Iterator<Item = (usize, &PauliWord)> {
        self.elements.iter().enumerate()
    }

    /// Distinct operator words, one per group element (phase of first occurrence).
    pub fn distinct_words(&self) -> Vec<PauliWord> {
        let mut seen = std::collections::HashSet::new();
        self.elements
            .iter()
            .filter(|w| seen.insert(w.sites().to_vec()))
            .cloned()
            .collect()
    }

    /// Phase of the label-twisted group average at tuple `t`, in `zeta` units.
    pub(crate) fn twisted_phase(&self, t: usize, label: &SectorLabel) -> u64 {
        let m = self.dims().phase_modulus();
        let exps = self.tuple(t);
        let twist = exps
            .iter()
            .zip(&label.0)
            .zip(&self.orders)
            .fold(0u64, |acc, ((&e, &l), &r)| {
                let units = m / r;
                (acc + (e * l % r) * units) % m
            });
        (self.elements[t].phase() + m - twist) % m
    }

    pub fn validate_label(&self, label: &SectorLabel) -> Result<()> {
        if label.0.len() != self.orders.len() {
            return Err(Error::InvalidSector(format!(
                "{} exponents for {} generators",
                label.0.len(),
                self.orders.len()
            )));
        }
        for (i, (&l, &r)) in label.0.iter().zip(&self.orders).enumerate() {
            if l >= r {
                return Err(Error::InvalidSector(format!(
                    "exponent {l} for generator {} of order {r}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Exact dimension of a joint eigenspace.
    ///
    /// The trace of the twisted group average only receives contributions
    /// from scalar elements; on that subgroup the twisted phase is a
    /// character, so the sum is either `|kernel|` or zero.
    pub fn sector_dimension(&self, label: &SectorLabel) -> Result<u64> {
        self.validate_label(label)?;
        let consistent = self.kernel.iter().all(|&t| self.twisted_phase(t, label) == 0);
        Ok(if consistent {
            self.dims().total() / self.size as u64
        } else {
            0
        })
    }

    /// `tr(P_S)`: zero on a phase collision, `N / |S|` otherwise.
    pub fn subspace_dimension(&self) -> u64 {
        if self.phase_collision {
            return 0;
        }
        self.sector_dimension(&SectorLabel::trivial(self.orders.len()))
            .expect("trivial label is valid")
    }

    pub fn is_complete(&self) -> bool {
        self.subspace_dimension() == 1
    }

    /// Number of equal-dimension sectors tiling the space.
    pub fn sector_count(&self) -> Result<u64> {
        if self.phase_collision {
            return Err(Error::EmptySubspace);
        }
        Ok(self.dims().total() / self.subspace_dimension())
    }

    /// All labels in lexicographic order.
    pub fn all_labels(&self) -> Vec<SectorLabel> {
        (0..self.elements.len()).map(|t| SectorLabel(self.tuple(t))).collect()
    }

    /// Labels whose sector is nonempty, in lexicographic order.
    pub fn consistent_labels(&self) -> Vec<SectorLabel> {
        self.all_labels()
            .into_iter()
            .filter(|l| self.sector_dimension(l).unwrap() > 0)
            .collect()
    }
}
