use super::matrix::CMatrix;
use super::monomial::MonomialOp;
use crate::scalar::{Complex, Real};

/// Orbits of basis indices under a set of monomial operators.
///
/// Every operator in the group they generate is block diagonal with respect
/// to these orbits, and so is every group average.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    orbits: Vec<Vec<usize>>,
    /// `(orbit, position inside orbit)` per basis index.
    locate: Vec<(usize, usize)>,
}

impl OrbitPartition {
    pub fn from_ops(n: usize, ops: &[MonomialOp]) -> Self {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for op in ops {
            debug_assert_eq!(op.dim(), n);
            for (c, &r) in op.target().iter().enumerate() {
                let (a, b) = (find(&mut parent, c), find(&mut parent, r));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut orbit_of_root = vec![usize::MAX; n];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut locate = vec![(0, 0); n];
        for (i, slot) in locate.iter_mut().enumerate() {
            let root = find(&mut parent, i);
            if orbit_of_root[root] == usize::MAX {
                orbit_of_root[root] = orbits.len();
                orbits.push(Vec::new());
            }
            let o = orbit_of_root[root];
            *slot = (o, orbits[o].len());
            orbits[o].push(i);
        }
        OrbitPartition { orbits, locate }
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.locate.len()
    }

    pub fn locate(&self, index: usize) -> (usize, usize) {
        self.locate[index]
    }

    pub fn largest(&self) -> usize {
        self.orbits.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// A block-diagonal matrix over an [`OrbitPartition`].
#[derive(Clone, Debug)]
pub struct BlockDiag<'p, T> {
    part: &'p OrbitPartition,
    blocks: Vec<CMatrix<T>>,
}

impl<'p, T: Real> BlockDiag<'p, T> {
    pub fn zeros(part: &'p OrbitPartition) -> Self {
        let blocks = part.orbits.iter().map(|o| CMatrix::zeros(o.len(), o.len())).collect();
        BlockDiag { part, blocks }
    }

    pub fn identity(part: &'p OrbitPartition) -> Self {
        let blocks = part.orbits.iter().map(|o| CMatrix::identity(o.len())).collect();
        BlockDiag { part, blocks }
    }

    pub fn partition(&self) -> &OrbitPartition {
        self.part
    }

    pub fn blocks(&self) -> &[CMatrix<T>] {
        &self.blocks
    }

    pub fn block(&self, orbit: usize) -> &CMatrix<T> {
        &self.blocks[orbit]
    }

    /// Adds `weight * zeta^extra * op`; `op` must respect the orbits.
    pub fn add_monomial(&mut self, op: &MonomialOp, extra: u64, weight: T, roots: &[Complex<T>]) {
        let m = op.modulus();
        for (c, (&r, &ph)) in op.target().iter().zip(op.phases()).enumerate() {
            let (o, col) = self.part.locate[c];
            let (o2, row) = self.part.locate[r];
            debug_assert_eq!(o, o2, "operator does not respect the orbits");
            self.blocks[o2][(row, col)] += roots[((ph + extra) % m) as usize].scale(weight);
        }
    }

    pub fn add_assign(&mut self, other: &BlockDiag<'_, T>) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            a.add_assign_scaled(b, Complex::new(T::one(), T::zero()));
        }
    }

    pub fn trace(&self) -> Complex<T> {
        self.blocks
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, b| acc + b.trace())
    }

    pub fn max_abs_diff(&self, other: &BlockDiag<'_, T>) -> T {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .fold(T::zero(), |acc, (a, b)| acc.max(a.max_abs_diff(b)))
    }

    /// `max |P^2 - P|`.
    pub fn idempotence_defect(&self) -> T {
        self.blocks
            .iter()
            .fold(T::zero(), |acc, b| acc.max(b.matmul(b).max_abs_diff(b)))
    }

    pub fn hermiticity_defect(&self) -> T {
        self.blocks
            .iter()
            .fold(T::zero(), |acc, b| acc.max(b.hermiticity_defect()))
    }

    /// `max |A B|`, skipping orbits where either factor vanishes.
    pub fn product_magnitude(&self, other: &BlockDiag<'_, T>, zero: T) -> T {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .filter(|(a, b)| a.max_abs() > zero && b.max_abs() > zero)
            .fold(T::zero(), |acc, (a, b)| acc.max(a.matmul(b).max_abs()))
    }

    pub fn to_dense(&self) -> CMatrix<T> {
        let n = self.part.dim();
        let mut out = CMatrix::zeros(n, n);
        for (orbit, b) in self.part.orbits.iter().zip(&self.blocks) {
            for (r, &gr) in orbit.iter().enumerate() {
                for (c, &gc) in orbit.iter().enumerate() {
                    out[(gr, gc)] = b[(r, c)];
                }
            }
        }
        out
    }
}
