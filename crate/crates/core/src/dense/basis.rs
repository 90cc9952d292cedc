use super::blocks::OrbitPartition;
use super::matrix::{inner, norm, CMatrix};
use super::monomial::MonomialOp;
use crate::error::{Error, Result};
use crate::pauli::{PauliWord, RootOfUnity, SystemDims};
use crate::scalar::{root_table, Complex, Real};

/// Orthonormal simultaneous eigenbasis of commuting operators on a subsystem.
#[derive(Clone, Debug)]
pub struct LabeledBasis<T> {
    sites: Vec<usize>,
    dims: SystemDims,
    vectors: Vec<Vec<Complex<T>>>,
    /// Eigenvalue exponent `k` per operator: the label is `e^{2 pi i k / r}`.
    exponents: Vec<Vec<u64>>,
    orders: Vec<u64>,
}

impl<T: Real> LabeledBasis<T> {
    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn dims(&self) -> &SystemDims {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, i: usize) -> &[Complex<T>] {
        &self.vectors[i]
    }

    pub fn vectors(&self) -> &[Vec<Complex<T>>] {
        &self.vectors
    }

    /// Operator orders `r_j`.
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn exponents(&self, i: usize) -> &[u64] {
        &self.exponents[i]
    }

    pub fn labels(&self, i: usize) -> Vec<RootOfUnity> {
        self.exponents[i]
            .iter()
            .zip(&self.orders)
            .map(|(&k, &r)| RootOfUnity::new(k, r))
            .collect()
    }

    /// Index of the first vector carrying the given exponent tuple.
    pub fn position(&self, exps: &[u64]) -> Option<usize> {
        self.exponents.iter().position(|e| e == exps)
    }

    /// Orthonormality and the eigen relation `op v = label v`, within `tol`.
    pub fn check(&self, ops: &[PauliWord], tol: T) -> bool {
        let n = self.vectors.len();
        if n != self.dims.total() as usize {
            return false;
        }
        for i in 0..n {
            for j in i..n {
                let ip = inner(&self.vectors[i], &self.vectors[j]);
                let want = if i == j { T::one() } else { T::zero() };
                if (ip - Complex::new(want, T::zero())).norm() > tol {
                    return false;
                }
            }
        }
        let roots = root_table::<T>(self.dims.lcm());
        for (j, w) in ops.iter().enumerate() {
            let op = MonomialOp::from_word(w);
            for (v, exps) in self.vectors.iter().zip(&self.exponents) {
                let lambda = cis::<T>(exps[j], self.orders[j]);
                let gv = op.apply(v, &roots);
                if gv.iter().zip(v).any(|(a, b)| (*a - lambda * b).norm() > tol) {
                    return false;
                }
            }
        }
        true
    }

    /// Projectors onto the joint eigenspaces, one per distinct label tuple,
    /// in label order.
    pub fn grouped_projectors(&self) -> Vec<(Vec<RootOfUnity>, CMatrix<T>)> {
        let n = self.dims.total() as usize;
        let mut out: Vec<(Vec<RootOfUnity>, CMatrix<T>)> = Vec::new();
        let mut last: Option<&[u64]> = None;
        for (i, v) in self.vectors.iter().enumerate() {
            if last != Some(self.exponents[i].as_slice()) {
                out.push((self.labels(i), CMatrix::zeros(n, n)));
                last = Some(&self.exponents[i]);
            }
            let m = &mut out.last_mut().unwrap().1;
            let support: Vec<usize> = (0..n).filter(|&k| v[k].norm_sqr() > T::zero()).collect();
            for &r in &support {
                for &c in &support {
                    m[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        out
    }
}

fn cis<T: Real>(k: u64, r: u64) -> Complex<T> {
    let angle = T::lit(2.0) * T::PI() * T::from_u64(k % r).unwrap() / T::from_u64(r).unwrap();
    Complex::new(angle.cos(), angle.sin())
}

/// Per-operator data restricted to one orbit.
struct LocalOp<T> {
    /// `local target` and coefficient per local column.
    map: Vec<(usize, Complex<T>)>,
    order: u64,
}

impl<T: Real> LocalOp<T> {
    fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); v.len()];
        for (c, &(r, coef)) in self.map.iter().enumerate() {
            out[r] = coef * v[c];
        }
        out
    }

    /// `(1/r) sum_e (mu^{-1} g)^e v` with `mu = e^{2 pi i k / r}`.
    fn eigen_project(&self, k: u64, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut acc = v.to_vec();
        let mut w = v.to_vec();
        for e in 1..self.order {
            w = self.apply(&w);
            let c = cis::<T>((self.order - (k * e) % self.order) % self.order, self.order);
            for (a, x) in acc.iter_mut().zip(&w) {
                *a += c * x;
            }
        }
        let inv = T::one() / T::from_u64(self.order).unwrap();
        acc.iter_mut().for_each(|a| *a = a.scale(inv));
        acc
    }
}

/// Exponent prefix with the vectors spanning its joint eigenspace.
type Group<T> = (Vec<u64>, Vec<Vec<Complex<T>>>);

fn local_ops<T: Real>(
    ops: &[MonomialOp],
    orders: &[u64],
    orbit: &[usize],
    part: &OrbitPartition,
    roots: &[Complex<T>],
) -> Vec<LocalOp<T>> {
    ops.iter()
        .zip(orders)
        .map(|(op, &order)| LocalOp {
            map: orbit
                .iter()
                .map(|&c| {
                    let r = op.target()[c];
                    (part.locate(r).1, roots[op.phases()[c] as usize])
                })
                .collect(),
            order,
        })
        .collect()
}

/// Modified Gram-Schmidt step, applied twice. Returns the normalized
/// residual if it is above `tol`.
fn orthonormalize<T: Real>(accepted: &[Vec<Complex<T>>], v: Vec<Complex<T>>, tol: T) -> Option<Vec<Complex<T>>> {
    let mut v = v;
    for _ in 0..2 {
        for a in accepted {
            let ip = inner(a, &v);
            for (x, y) in v.iter_mut().zip(a) {
                *x -= ip * y;
            }
        }
    }
    let nv = norm(&v);
    if nv <= tol {
        return None;
    }
    let inv = T::one() / nv;
    Some(v.into_iter().map(|x| x.scale(inv)).collect())
}

fn check_pairwise_commuting(ops: &[PauliWord]) -> Result<()> {
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if ops[i].commutator_exponent_full(&ops[j])? != 0 {
                return Err(Error::NonCommuting { i: i + 1, j: j + 1 });
            }
        }
    }
    Ok(())
}

/// Simultaneous eigenbasis of commuting words, all defined on the subsystem
/// `dims`; `sites` records which parties of the full system these are.
///
/// Works orbit by orbit: each operator's eigenspace projector splits the
/// current subspaces, and Gram-Schmidt decides ranks at `tol`.
pub fn simultaneous_eigenbasis<T: Real>(ops: &[PauliWord], sites: &[usize], tol: T) -> Result<LabeledBasis<T>> {
    let dims = match ops.first() {
        Some(w) => w.dims().clone(),
        None => return Err(Error::Precondition("eigenbasis needs at least one operator".into())),
    };
    if ops.iter().any(|w| w.dims() != &dims) {
        return Err(Error::DimensionMismatch("operators act on different systems".into()));
    }
    if sites.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} sites for a {}-site operator",
            sites.len(),
            dims.len()
        )));
    }
    check_pairwise_commuting(ops)?;
    let n = dims.total() as usize;
    let monos: Vec<MonomialOp> = ops.iter().map(MonomialOp::from_word).collect();
    let orders: Vec<u64> = ops.iter().map(PauliWord::order).collect();
    let part = OrbitPartition::from_ops(n, &monos);
    let roots = root_table::<T>(dims.lcm());
    let zero = Complex::new(T::zero(), T::zero());

    let mut found: Vec<(Vec<u64>, Vec<Complex<T>>)> = Vec::with_capacity(n);
    for orbit in part.orbits() {
        let s = orbit.len();
        let local = local_ops::<T>(&monos, &orders, orbit, &part, &roots);
        let mut groups: Vec<Group<T>> = vec![(
            Vec::new(),
            (0..s)
                .map(|i| {
                    let mut e = vec![zero; s];
                    e[i] = Complex::new(T::one(), T::zero());
                    e
                })
                .collect(),
        )];
        for op in &local {
            let mut next = Vec::new();
            for (labels, space) in &groups {
                let mut kept = 0;
                for k in 0..op.order {
                    let mut accepted: Vec<Vec<Complex<T>>> = Vec::new();
                    for v in space {
                        let pv = op.eigen_project(k, v);
                        if let Some(u) = orthonormalize(&accepted, pv, tol) {
                            accepted.push(u);
                        }
                    }
                    if !accepted.is_empty() {
                        kept += accepted.len();
                        let mut l = labels.clone();
                        l.push(k);
                        next.push((l, accepted));
                    }
                }
                if kept != space.len() {
                    return Err(Error::Precondition(format!(
                        "eigenspace refinement kept {kept} of {} directions",
                        space.len()
                    )));
                }
            }
            groups = next;
        }
        for (labels, space) in groups {
            for v in space {
                let mut full = vec![zero; n];
                for (i, &g) in orbit.iter().enumerate() {
                    full[g] = v[i];
                }
                found.push((labels.clone(), full));
            }
        }
    }
    // stable: orbit order and refinement order break ties
    found.sort_by(|a, b| a.0.cmp(&b.0));
    let (exponents, vectors) = found.into_iter().unzip();
    Ok(LabeledBasis {
        sites: sites.to_vec(),
        dims,
        vectors,
        exponents,
        orders,
    })
}

/// Whether commuting-or-not words share an eigenvector: some product of
/// eigenspace projectors has spectral norm 1 within `tol`.
pub fn has_common_eigenvector<T: Real>(ops: &[PauliWord], tol: T) -> Result<bool> {
    let Some(first) = ops.first() else {
        return Ok(true);
    };
    let dims = first.dims().clone();
    if ops.iter().any(|w| w.dims() != &dims) {
        return Err(Error::DimensionMismatch("operators act on different systems".into()));
    }
    let n = dims.total() as usize;
    let monos: Vec<MonomialOp> = ops.iter().map(MonomialOp::from_word).collect();
    let orders: Vec<u64> = ops.iter().map(PauliWord::order).collect();
    let part = OrbitPartition::from_ops(n, &monos);
    let roots = root_table::<T>(dims.lcm());
    for orbit in part.orbits() {
        let s = orbit.len();
        let local = local_ops::<T>(&monos, &orders, orbit, &part, &roots);
        // eigenspace projectors per operator, as dense s x s blocks
        let projs: Vec<Vec<CMatrix<T>>> = local
            .iter()
            .map(|op| {
                (0..op.order)
                    .map(|k| {
                        let mut m = CMatrix::zeros(s, s);
                        for c in 0..s {
                            let mut e = vec![Complex::new(T::zero(), T::zero()); s];
                            e[c] = Complex::new(T::one(), T::zero());
                            for (r, x) in op.eigen_project(k, &e).into_iter().enumerate() {
                                m[(r, c)] = x;
                            }
                        }
                        m
                    })
                    .filter(|m| m.max_abs() > tol)
                    .collect()
            })
            .collect();
        let mut choice = vec![0usize; projs.len()];
        'combos: loop {
            let mut q = projs[0][choice[0]].clone();
            for (j, &c) in choice.iter().enumerate().skip(1) {
                q = projs[j][c].matmul(&q);
            }
            let gram = q.adjoint().matmul(&q);
            if *gram.hermitian_eigenvalues().last().unwrap() >= T::one() - tol {
                return Ok(true);
            }
            for j in (0..choice.len()).rev() {
                choice[j] += 1;
                if choice[j] < projs[j].len() {
                    continue 'combos;
                }
                choice[j] = 0;
            }
            break;
        }
    }
    Ok(false)
}
