//! The unlocking protocol: measuring blocks project onto simultaneous
//! eigenbases of the restricted generators, and the unlock block is left in
//! a pure entangled state fixed by the outcome labels.

use crate::cert::satisfies_condition2;
use crate::dense::{
    inner, is_genuinely_entangled_pure, norm, rho_s, simultaneous_eigenbasis, DenseState, LabeledBasis, MonomialOp,
};
use crate::error::{Error, Result};
use crate::group::{close_with_cap, GeneratorSet, DEFAULT_CLOSURE_CAP};
use crate::partition::Partition;
use crate::pauli::RootOfUnity;
use crate::scalar::{root_table, Complex, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Largest product of measuring-block dimensions for exhaustive enumeration.
pub const DEFAULT_OUTCOME_CAP: u128 = 1 << 14;

#[derive(Clone, Debug)]
pub struct Protocol {
    pub gens: GeneratorSet,
    pub partition: Partition,
    /// Index into `partition.blocks()` of the block left unmeasured.
    pub unlock_block: usize,
    pub seed: u64,
    pub shots: usize,
    pub closure_cap: u128,
}

impl Protocol {
    /// Validates that the partition passes condition (2) with this block.
    pub fn new(gens: GeneratorSet, partition: Partition, unlock_block: usize, seed: u64, shots: usize) -> Result<Self> {
        let pr = Protocol {
            gens,
            partition,
            unlock_block,
            seed,
            shots,
            closure_cap: DEFAULT_CLOSURE_CAP,
        };
        pr.validate()?;
        Ok(pr)
    }

    /// Uses the first block of `partition` that passes condition (2).
    pub fn with_first_unlock_block(gens: GeneratorSet, partition: Partition, seed: u64, shots: usize) -> Result<Self> {
        for b in 0..partition.len() {
            if partition.blocks()[b].len() > 1 && satisfies_condition2(&gens, &partition, b, DEFAULT_CLOSURE_CAP)? {
                return Protocol::new(gens, partition, b, seed, shots);
            }
        }
        Err(Error::InvalidProtocol(format!(
            "no block of {partition} satisfies condition (2)"
        )))
    }

    pub fn validate(&self) -> Result<()> {
        let Some(block) = self.partition.blocks().get(self.unlock_block) else {
            return Err(Error::InvalidProtocol(format!(
                "partition has no block {}",
                self.unlock_block + 1
            )));
        };
        if block.len() < 2 {
            return Err(Error::InvalidProtocol("unlock block needs at least two parties".into()));
        }
        if !satisfies_condition2(&self.gens, &self.partition, self.unlock_block, self.closure_cap)? {
            return Err(Error::InvalidProtocol(format!(
                "{} with unlock block {} does not satisfy condition (2)",
                self.partition,
                self.unlock_block + 1
            )));
        }
        Ok(())
    }

    pub fn unlock_sites(&self) -> &[usize] {
        &self.partition.blocks()[self.unlock_block]
    }

    /// Measuring blocks in ascending block order.
    pub fn measuring_blocks(&self) -> Vec<usize> {
        (0..self.partition.len()).filter(|&b| b != self.unlock_block).collect()
    }
}

/// Outcome of one measuring block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockOutcome {
    /// Index into the partition's blocks.
    pub block: usize,
    /// Basis vector index in the block's labeled basis.
    pub index: usize,
    /// Eigenvalue labels, one per generator restricted to the block.
    pub labels: Vec<RootOfUnity>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShotRecord<T> {
    /// Shot index for sampled records, `None` for enumerated ones.
    pub shot: Option<usize>,
    pub outcomes: Vec<BlockOutcome>,
    /// Joint probability of the outcome tuple.
    pub probability: T,
    /// Residual state vector on the unlock block (ascending sites).
    pub residual: Vec<Complex<T>>,
    pub purity: T,
    pub genuine: bool,
    /// Eigenvalues of the restricted generators on the residual vector.
    pub residual_labels: Vec<RootOfUnity>,
}

impl<T: Real> ShotRecord<T> {
    /// `lambda_1 * prod_a lambda_a = 1` for every generator.
    pub fn label_law_holds(&self) -> bool {
        (0..self.residual_labels.len()).all(|j| {
            self.outcomes
                .iter()
                .fold(self.residual_labels[j], |acc, o| acc * o.labels[j])
                .is_one()
        })
    }
}

struct Level<T> {
    sites: Vec<usize>,
    basis: LabeledBasis<T>,
}

/// Chained-measurement simulator with conditional states memoized by
/// outcome prefix.
pub struct Simulator<T> {
    protocol: Protocol,
    tol: T,
    dims: Vec<usize>,
    levels: Vec<Level<T>>,
    unlock_ops: Vec<(MonomialOp, u64)>,
    unlock_roots: Vec<Complex<T>>,
    /// Unnormalized conditional state after each outcome prefix.
    states: HashMap<Vec<usize>, DenseState<T>>,
    /// Absolute probabilities of each child of a prefix.
    children: HashMap<Vec<usize>, Vec<T>>,
}

impl<T: Real> Simulator<T> {
    pub fn new(protocol: Protocol) -> Result<Self> {
        Self::with_tol(protocol, T::default_tol())
    }

    pub fn with_tol(protocol: Protocol, tol: T) -> Result<Self> {
        protocol.validate()?;
        let group = close_with_cap(&protocol.gens, protocol.closure_cap)?;
        let rho = rho_s::<T>(&group)?;
        let levels = protocol
            .measuring_blocks()
            .into_iter()
            .map(|b| {
                let sites = protocol.partition.blocks()[b].clone();
                let restricted = protocol.gens.restrict(&sites)?;
                let basis = simultaneous_eigenbasis(restricted.gens(), &sites, tol)?;
                Ok(Level { sites, basis })
            })
            .collect::<Result<Vec<_>>>()?;
        let restricted = protocol.gens.restrict(protocol.unlock_sites())?;
        let unlock_ops = restricted
            .gens()
            .iter()
            .map(|w| (MonomialOp::from_word(w), w.order()))
            .collect();
        let unlock_roots = root_table::<T>(restricted.dims().lcm());
        let mut states = HashMap::new();
        let dims = protocol.gens.dims().dims().to_vec();
        states.insert(Vec::new(), rho);
        Ok(Simulator {
            protocol,
            tol,
            dims,
            levels,
            unlock_ops,
            unlock_roots,
            states,
            children: HashMap::new(),
        })
    }

    pub fn protocol(&self) -> &Protocol {
        &self.protocol
    }

    /// Sites still unmeasured after `depth` measuring blocks.
    fn remaining_sites(&self, depth: usize) -> Vec<usize> {
        let measured: Vec<usize> = self.levels[..depth].iter().flat_map(|l| l.sites.clone()).collect();
        (0..self.dims.len()).filter(|s| !measured.contains(s)).collect()
    }

    fn child_probabilities(&mut self, prefix: &[usize]) -> Result<Vec<T>> {
        if let Some(p) = self.children.get(prefix) {
            return Ok(p.clone());
        }
        let depth = prefix.len();
        let remaining = self.remaining_sites(depth);
        let level = &self.levels[depth];
        let local: Vec<usize> = level
            .sites
            .iter()
            .map(|s| remaining.iter().position(|r| r == s).expect("block site is unmeasured"))
            .collect();
        let parent = &self.states[prefix];
        let mut probs = Vec::with_capacity(level.basis.len());
        let mut fresh = Vec::new();
        for (i, v) in level.basis.vectors().iter().enumerate() {
            let child = parent.project_block(&local, v)?;
            let p = child.trace().re;
            probs.push(p);
            if p > self.tol {
                let mut key = prefix.to_vec();
                key.push(i);
                fresh.push((key, child));
            }
        }
        self.states.extend(fresh);
        self.children.insert(prefix.to_vec(), probs.clone());
        Ok(probs)
    }

    fn record(&mut self, indices: &[usize], shot: Option<usize>) -> Result<ShotRecord<T>> {
        let state = self
            .states
            .get(indices)
            .ok_or_else(|| Error::Precondition(format!("outcome {indices:?} has zero probability")))?;
        let probability = state.trace().re;
        if probability <= self.tol {
            return Err(Error::Precondition(format!("outcome {indices:?} has zero probability")));
        }
        let rho = state.matrix().scale_real(T::one() / probability);
        let n = rho.rows();
        let mut purity = T::zero();
        for r in 0..n {
            for c in 0..n {
                purity += (rho[(r, c)] * rho[(c, r)]).re;
            }
        }
        let pivot = (0..n)
            .max_by(|&a, &b| rho[(a, a)].re.partial_cmp(&rho[(b, b)].re).unwrap())
            .expect("nonempty residual");
        let mut v = rho.column(pivot);
        let nv = norm(&v);
        v.iter_mut().for_each(|x| *x = x.scale(T::one() / nv));
        let unlock_dims: Vec<usize> = state.dims().to_vec();
        let genuine = is_genuinely_entangled_pure(&unlock_dims, &v, self.tol)?;
        let residual_labels = self
            .unlock_ops
            .iter()
            .map(|(op, order)| {
                let ev = inner(&v, &op.apply(&v, &self.unlock_roots));
                RootOfUnity::nearest(ev.re.to_f64().unwrap(), ev.im.to_f64().unwrap(), *order)
            })
            .collect();
        let outcomes = indices
            .iter()
            .zip(&self.levels)
            .map(|(&index, level)| BlockOutcome {
                block: self.protocol.partition.block_of(level.sites[0]).expect("block exists"),
                index,
                labels: level.basis.labels(index),
            })
            .collect();
        Ok(ShotRecord {
            shot,
            outcomes,
            probability,
            residual: v,
            purity,
            genuine,
            residual_labels,
        })
    }

    /// Record for an explicitly chosen outcome tuple; zero-probability
    /// branches are an error.
    pub fn conditional(&mut self, indices: &[usize]) -> Result<ShotRecord<T>> {
        if indices.len() != self.levels.len() {
            return Err(Error::InvalidProtocol(format!(
                "{} outcomes for {} measuring blocks",
                indices.len(),
                self.levels.len()
            )));
        }
        for d in 0..indices.len() {
            let probs = self.child_probabilities(&indices[..d])?;
            match probs.get(indices[d]) {
                Some(&p) if p > self.tol => {}
                Some(_) => {
                    return Err(Error::Precondition(format!(
                        "outcome {:?} has zero probability",
                        &indices[..=d]
                    )))
                }
                None => {
                    return Err(Error::InvalidProtocol(format!(
                        "outcome index {} out of range",
                        indices[d]
                    )))
                }
            }
        }
        self.record(indices, None)
    }

    /// One sampled shot with its own RNG stream.
    pub fn shot(&mut self, shot: usize) -> Result<ShotRecord<T>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.protocol.seed);
        rng.set_stream(shot as u64);
        let mut prefix = Vec::with_capacity(self.levels.len());
        for _ in 0..self.levels.len() {
            let probs = self.child_probabilities(&prefix)?;
            let total: f64 = probs.iter().map(|p| p.to_f64().unwrap()).sum();
            let mut u = rng.gen::<f64>() * total;
            let mut pick = None;
            for (i, p) in probs.iter().enumerate() {
                if *p <= self.tol {
                    continue;
                }
                pick = Some(i);
                u -= p.to_f64().unwrap();
                if u < 0.0 {
                    break;
                }
            }
            prefix.push(pick.ok_or_else(|| Error::Precondition("no outcome has nonzero probability".into()))?);
        }
        self.record(&prefix, Some(shot))
    }

    pub fn simulate(&mut self) -> Result<Vec<ShotRecord<T>>> {
        (0..self.protocol.shots).map(|s| self.shot(s)).collect()
    }

    /// Every nonzero-probability outcome tuple, in lexicographic order.
    pub fn enumerate(&mut self, cap: u128) -> Result<Vec<ShotRecord<T>>> {
        let combos: u128 = self.levels.iter().map(|l| l.basis.len() as u128).product();
        if combos > cap {
            return Err(Error::CapExceeded {
                what: "measurement outcome combinations",
                size: combos,
                cap,
            });
        }
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == self.levels.len() {
                out.push(self.record(&prefix, None)?);
                continue;
            }
            let probs = self.child_probabilities(&prefix)?;
            for i in (0..probs.len()).rev() {
                if probs[i] > self.tol {
                    let mut next = prefix.clone();
                    next.push(i);
                    stack.push(next);
                }
            }
        }
        Ok(out)
    }
}

/// Runs `pr.shots` sampled shots.
pub fn simulate<T: Real>(pr: &Protocol) -> Result<Vec<ShotRecord<T>>> {
    Simulator::<T>::new(pr.clone())?.simulate()
}

/// Exhaustive outcome enumeration with the default cap.
pub fn enumerate_outcomes<T: Real>(pr: &Protocol) -> Result<Vec<ShotRecord<T>>> {
    Simulator::<T>::new(pr.clone())?.enumerate(DEFAULT_OUTCOME_CAP)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrelationRule {
    /// Residual labels equal every measuring block's labels.
    Equality,
    /// Qubit labels: residual sign bits are the XOR of the measured ones.
    Xor,
    /// Residual label times the product of measured labels is one.
    Product,
}

impl std::str::FromStr for CorrelationRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equality" => Ok(CorrelationRule::Equality),
            "xor" => Ok(CorrelationRule::Xor),
            "product" => Ok(CorrelationRule::Product),
            other => Err(Error::RuleMismatch(format!("unknown rule '{other}'"))),
        }
    }
}

fn sign_bit(r: &RootOfUnity) -> Result<bool> {
    match r.den() {
        1 => Ok(false),
        2 => Ok(true),
        _ => Err(Error::RuleMismatch(format!("label {r} is not a sign"))),
    }
}

/// Whether every record satisfies `rule`.
pub fn outcome_correlation_check<T: Real>(records: &[ShotRecord<T>], rule: CorrelationRule) -> Result<bool> {
    for rec in records {
        let k = rec.residual_labels.len();
        if rec.outcomes.iter().any(|o| o.labels.len() != k) {
            return Err(Error::RuleMismatch("label tuples differ in length".into()));
        }
        let ok = match rule {
            CorrelationRule::Equality => rec.outcomes.iter().all(|o| o.labels == rec.residual_labels),
            CorrelationRule::Xor => {
                let mut ok = true;
                for j in 0..k {
                    let mut bit = sign_bit(&rec.residual_labels[j])?;
                    for o in &rec.outcomes {
                        bit ^= sign_bit(&o.labels[j])?;
                    }
                    ok &= !bit;
                }
                ok
            }
            CorrelationRule::Product => rec.label_law_holds(),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
