use super::basis::{has_common_eigenvector, simultaneous_eigenbasis, LabeledBasis};
use super::blocks::{BlockDiag, OrbitPartition};
use super::matrix::CMatrix;
use super::monomial::MonomialOp;
use super::state::DenseState;
use crate::cert::is_separable;
use crate::error::{Error, Result};
use crate::group::{SectorLabel, StabilizerGroup};
use crate::partition::{bipartition_sides, mask_to_sites, Partition};
use crate::pauli::RootOfUnity;
use crate::scalar::{root_table, Complex, Real, Tolerances};
use rayon::prelude::*;
use std::collections::HashMap;

/// A sector projector together with its exact rank.
#[derive(Clone, Debug)]
pub struct SectorProjector<T> {
    pub label: SectorLabel,
    /// Symbolic dimension of the sector.
    pub rank: u64,
    pub matrix: CMatrix<T>,
    /// Set when the group contains a nontrivial scalar; the matrix is zero.
    pub phase_collision: bool,
}

/// Phase-free monomial operator of every exponent tuple.
fn tuple_monomials(s: &StabilizerGroup) -> Vec<MonomialOp> {
    s.elements()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|(_, w)| MonomialOp::from_word(&w.without_phase()))
        .collect()
}

/// Orbits of the basis under the group; every sector projector is block
/// diagonal over them.
pub fn group_orbits(s: &StabilizerGroup) -> OrbitPartition {
    let ops: Vec<MonomialOp> = s.generators().gens().iter().map(MonomialOp::from_word).collect();
    OrbitPartition::from_ops(s.dims().total() as usize, &ops)
}

/// Twisted group average `prod_i (1/r_i) sum_e (lambda_i^{-1} g_i)^e`.
pub fn projector<T: Real>(s: &StabilizerGroup, label: &SectorLabel) -> Result<SectorProjector<T>> {
    s.validate_label(label)?;
    let n = s.dims().total() as usize;
    let rank = s.sector_dimension(label)?;
    if s.phase_collision() {
        return Ok(SectorProjector {
            label: label.clone(),
            rank: 0,
            matrix: CMatrix::zeros(n, n),
            phase_collision: true,
        });
    }
    let m = s.dims().phase_modulus();
    let roots = root_table::<T>(s.dims().lcm());
    let weight = T::one() / T::from_usize(s.tuple_count()).unwrap();
    let mut out = CMatrix::zeros(n, n);
    for (t, op) in tuple_monomials(s).iter().enumerate() {
        let extra = s.twisted_phase(t, label);
        for (c, (&r, &ph)) in op.target().iter().zip(op.phases()).enumerate() {
            out[(r, c)] += roots[((ph + extra) % m) as usize].scale(weight);
        }
    }
    Ok(SectorProjector {
        label: label.clone(),
        rank,
        matrix: out,
        phase_collision: false,
    })
}

/// Block-diagonal form of a sector projector over `part`.
pub fn projector_blocks<'p, T: Real>(
    s: &StabilizerGroup,
    label: &SectorLabel,
    part: &'p OrbitPartition,
) -> Result<BlockDiag<'p, T>> {
    s.validate_label(label)?;
    if s.phase_collision() {
        return Err(Error::EmptySubspace);
    }
    let roots = root_table::<T>(s.dims().lcm());
    let weight = T::one() / T::from_usize(s.tuple_count()).unwrap();
    let mut out = BlockDiag::zeros(part);
    for (t, op) in tuple_monomials(s).iter().enumerate() {
        out.add_monomial(op, s.twisted_phase(t, label), weight, &roots);
    }
    Ok(out)
}

/// Normalized projector of a sector: the maximally mixed state on it.
pub fn rho_of<T: Real>(s: &StabilizerGroup, label: &SectorLabel) -> Result<DenseState<T>> {
    let p = projector::<T>(s, label)?;
    if p.phase_collision || p.rank == 0 {
        return Err(Error::EmptySubspace);
    }
    let tr = p.matrix.trace().re;
    DenseState::new(s.dims().dims().to_vec(), p.matrix.scale_real(T::one() / tr))
}

/// `rho_S`: the state of the all-ones sector.
pub fn rho_s<T: Real>(s: &StabilizerGroup) -> Result<DenseState<T>> {
    rho_of(s, &SectorLabel::trivial(s.orders().len()))
}

/// Outcome of the sector tiling check.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorCheck<T> {
    /// Labels with a nonempty sector.
    pub sectors: usize,
    pub sector_dimension: u64,
    /// Largest `|tr P - symbolic rank|` over all labels, empty ones included.
    pub trace_error: T,
    pub orthogonality_defect: T,
    pub completeness_defect: T,
    pub idempotence_defect: T,
    pub hermiticity_defect: T,
    pub verified: bool,
}

/// Checks that the sector projectors are orthogonal idempotents of the
/// symbolic rank that sum to the identity.
pub fn verify_sector_decomposition<T: Real>(s: &StabilizerGroup, tol: &Tolerances<T>) -> Result<SectorCheck<T>> {
    if s.phase_collision() {
        return Err(Error::EmptySubspace);
    }
    let part = group_orbits(s);
    let roots = root_table::<T>(s.dims().lcm());
    let monos = tuple_monomials(s);
    let weight = T::one() / T::from_usize(s.tuple_count()).unwrap();
    let labels = s.all_labels();
    let built: Vec<(u64, BlockDiag<'_, T>)> = labels
        .par_iter()
        .map(|label| {
            let mut p = BlockDiag::zeros(&part);
            for (t, op) in monos.iter().enumerate() {
                p.add_monomial(op, s.twisted_phase(t, label), weight, &roots);
            }
            (s.sector_dimension(label).expect("label from the group"), p)
        })
        .collect();

    let mut trace_error = T::zero();
    let mut idempotence = T::zero();
    let mut hermiticity = T::zero();
    let mut sum = BlockDiag::zeros(&part);
    for (rank, p) in &built {
        let tr = p.trace();
        trace_error = trace_error.max((tr - Complex::new(T::from_u64(*rank).unwrap(), T::zero())).norm());
        idempotence = idempotence.max(p.idempotence_defect());
        hermiticity = hermiticity.max(p.hermiticity_defect());
        sum.add_assign(p);
    }
    let completeness = sum.max_abs_diff(&BlockDiag::identity(&part));
    let nonempty: Vec<&BlockDiag<'_, T>> = built.iter().filter(|(r, _)| *r > 0).map(|(_, p)| p).collect();
    let zero = tol.algebra;
    let orthogonality = (0..nonempty.len())
        .into_par_iter()
        .map(|a| {
            (a + 1..nonempty.len()).fold(T::zero(), |acc, b| {
                acc.max(nonempty[a].product_magnitude(nonempty[b], zero))
            })
        })
        .reduce(T::zero, |x, y| x.max(y));
    let verified = trace_error <= tol.entry
        && orthogonality <= tol.entry
        && completeness <= tol.entry
        && idempotence <= tol.algebra
        && hermiticity <= tol.algebra
        && nonempty.len() as u64 == s.sector_count()?;
    Ok(SectorCheck {
        sectors: nonempty.len(),
        sector_dimension: s.subspace_dimension(),
        trace_error,
        orthogonality_defect: orthogonality,
        completeness_defect: completeness,
        idempotence_defect: idempotence,
        hermiticity_defect: hermiticity,
        verified,
    })
}

/// Accumulates `a (x) b` into `out`, skipping zero entries.
fn kron_accumulate<T: Real>(out: &mut CMatrix<T>, a: &CMatrix<T>, b: &CMatrix<T>) {
    let nb = b.rows();
    let n = out.cols();
    let bnz: Vec<(usize, usize, Complex<T>)> = (0..nb)
        .flat_map(|r| (0..nb).map(move |c| (r, c)))
        .map(|(r, c)| (r, c, b[(r, c)]))
        .filter(|(_, _, v)| v.norm_sqr() > T::zero())
        .collect();
    let data = out.data_mut();
    for ra in 0..a.rows() {
        for ca in 0..a.cols() {
            let x = a[(ra, ca)];
            if x.norm_sqr() == T::zero() {
                continue;
            }
            for &(rb, cb, y) in &bnz {
                data[(ra * nb + rb) * n + ca * nb + cb] += x * y;
            }
        }
    }
}

fn label_product(a: &[RootOfUnity], b: &[RootOfUnity]) -> Vec<RootOfUnity> {
    a.iter().zip(b).map(|(x, y)| *x * *y).collect()
}

/// Labeled basis of the generators restricted to `block`.
pub fn block_basis<T: Real>(s: &StabilizerGroup, block: &[usize], tol: T) -> Result<LabeledBasis<T>> {
    let restricted = s.generators().restrict(block)?;
    simultaneous_eigenbasis(restricted.gens(), block, tol)
}

/// Product-basis form of `rho_S` for a partition on which the generators
/// commute locally, in the site order of the returned list.
///
/// Blocks are folded in ascending dimension order; the result is the
/// normalized sum of `(x)_a Q_a` over label choices whose per-generator
/// product is one.
fn separable_form_permuted<T: Real>(s: &StabilizerGroup, p: &Partition, tol: T) -> Result<(Vec<usize>, CMatrix<T>)> {
    if !is_separable(s.generators(), p)? {
        return Err(Error::Precondition(format!("generators do not commute locally on {p}")));
    }
    if s.phase_collision() {
        return Err(Error::EmptySubspace);
    }
    let dims = s.dims();
    let mut blocks: Vec<Vec<usize>> = p.blocks().to_vec();
    blocks.sort_by_key(|b| (dims.sub_total(b), b[0]));
    let grouped: Vec<Vec<(Vec<RootOfUnity>, CMatrix<T>)>> = blocks
        .par_iter()
        .map(|b| block_basis::<T>(s, b, tol).map(|basis| basis.grouped_projectors()))
        .collect::<Result<_>>()?;
    let k = s.orders().len();
    let target = vec![RootOfUnity::ONE; k];

    let mut acc: Vec<(Vec<RootOfUnity>, CMatrix<T>)> = grouped[0].clone();
    for (step, groups) in grouped.iter().enumerate().skip(1) {
        let last = step + 1 == grouped.len();
        let da = acc[0].1.rows();
        let db = groups[0].1.rows();
        let mut next: HashMap<Vec<RootOfUnity>, CMatrix<T>> = HashMap::new();
        let mut order: Vec<Vec<RootOfUnity>> = Vec::new();
        for (ka, a) in &acc {
            for (kb, b) in groups {
                let key = label_product(ka, kb);
                if last && key != target {
                    continue;
                }
                let slot = next.entry(key.clone()).or_insert_with(|| {
                    order.push(key);
                    CMatrix::zeros(da * db, da * db)
                });
                kron_accumulate(slot, a, b);
            }
        }
        acc = order
            .into_iter()
            .map(|key| {
                let m = next.remove(&key).unwrap();
                (key, m)
            })
            .collect();
    }
    let site_order: Vec<usize> = blocks.concat();
    let mut sum = match acc.into_iter().find(|(key, _)| *key == target) {
        Some((_, m)) => m,
        None => return Err(Error::EmptySubspace),
    };
    let tr = sum.trace().re;
    if tr <= tol {
        return Err(Error::EmptySubspace);
    }
    sum = sum.scale_real(T::one() / tr);
    Ok((site_order, sum))
}

/// Product-basis mixture equal to `rho_S`, in natural site order.
pub fn separable_form<T: Real>(s: &StabilizerGroup, p: &Partition, tol: T) -> Result<DenseState<T>> {
    let (order, m) = separable_form_permuted::<T>(s, p, tol)?;
    let permuted_dims: Vec<usize> = order.iter().map(|&i| s.dims().dim(i)).collect();
    let mut back = vec![0; order.len()];
    for (pos, &site) in order.iter().enumerate() {
        back[site] = pos;
    }
    DenseState::new(permuted_dims, m)?.permute_sites(&back)
}

/// Largest entrywise deviation between `rho_S` and its product-basis form.
pub fn separable_form_deviation<T: Real>(s: &StabilizerGroup, p: &Partition, tol: T) -> Result<T> {
    let (order, m) = separable_form_permuted::<T>(s, p, tol)?;
    let rho = rho_s::<T>(s)?.permute_sites(&order)?;
    Ok(rho.matrix().max_abs_diff(&m))
}

/// Builds the explicit separable decomposition and compares it with `rho_S`.
pub fn verify_separable_form<T: Real>(s: &StabilizerGroup, p: &Partition, tol: &Tolerances<T>) -> Result<bool> {
    Ok(separable_form_deviation(s, p, tol.rank)? <= tol.entry)
}

/// For a partition on which the generators fail to commute locally, checks
/// that some block carries two restricted generators without a common
/// eigenvector, which rules out product states in the stabilized subspace.
pub fn product_state_excluded<T: Real>(s: &StabilizerGroup, p: &Partition, tol: T) -> Result<bool> {
    let gens = s.generators();
    for block in p.blocks() {
        let restricted = gens.restrict(block)?;
        let words = restricted.gens();
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                if words[i].commutator_exponent_full(&words[j])? != 0
                    && !has_common_eigenvector::<T>(&[words[i].clone(), words[j].clone()], tol)?
                {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// Every bipartition of the state's sites has a mixed reduced state.
pub fn is_genuinely_entangled_pure<T: Real>(dims: &[usize], v: &[Complex<T>], tol: T) -> Result<bool> {
    let nv = super::matrix::norm(v);
    if (nv - T::one()).abs() > tol {
        return Err(Error::Precondition(format!("state norm {nv} is not 1")));
    }
    if dims.len() < 2 {
        return Ok(false);
    }
    let rho = DenseState::pure(dims.to_vec(), v)?;
    for side in bipartition_sides((1u64 << dims.len()) - 1) {
        let red = rho.reduced_state(&mask_to_sites(side))?;
        let eig = red.matrix().hermitian_eigenvalues();
        if eig.len() < 2 || eig[eig.len() - 2] <= tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(|0,a> + (-1)^b |1,1-a>) / sqrt 2`.
pub fn bell_state<T: Real>(alpha: u8, beta: u8) -> Vec<Complex<T>> {
    let h = T::one() / T::lit(2.0).sqrt();
    let sign = if beta & 1 == 0 { h } else { -h };
    let mut v = vec![Complex::new(T::zero(), T::zero()); 4];
    let a = (alpha & 1) as usize;
    v[a] = Complex::new(h, T::zero());
    v[2 + (1 - a)] = Complex::new(sign, T::zero());
    v
}
