use super::matrix::CMatrix;
use crate::pauli::{PauliWord, SystemDims};
use crate::scalar::{root_table, Complex, Real};

/// Full-space offsets of every multi-index over `sites` (first site most
/// significant), in the row-major layout of `dims`.
pub fn subsystem_offsets(dims: &[usize], sites: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let mut out = vec![0usize];
    for &s in sites {
        let mut next = Vec::with_capacity(out.len() * dims[s]);
        for &base in &out {
            for j in 0..dims[s] {
                next.push(base + j * strides[s]);
            }
        }
        out = next;
    }
    out
}

/// A Pauli word as a permutation with exact phases: column `c` maps to
/// row `target[c]` with coefficient `zeta^phase[c]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOp {
    target: Vec<usize>,
    phase: Vec<u64>,
    modulus: u64,
}

impl MonomialOp {
    pub fn from_word(w: &PauliWord) -> Self {
        let dims = w.dims();
        let n = dims.total() as usize;
        let m = dims.phase_modulus();
        let mut target = Vec::with_capacity(n);
        let mut phase = Vec::with_capacity(n);
        let mut digits = vec![0usize; dims.len()];
        let strides = strides(dims);
        for _ in 0..n {
            // X^x Z^z |j> = omega^{z j} |j + x>
            let mut row = 0;
            let mut ph = w.phase();
            for (k, &j) in digits.iter().enumerate() {
                let (x, z) = w.sites()[k];
                let d = dims.dim(k);
                row += ((j + x) % d) * strides[k];
                ph = (ph + ((z * j) % d) as u64 * dims.site_unit(k)) % m;
            }
            target.push(row);
            phase.push(ph);
            for k in (0..digits.len()).rev() {
                digits[k] += 1;
                if digits[k] < dims.dim(k) {
                    break;
                }
                digits[k] = 0;
            }
        }
        MonomialOp {
            target,
            phase,
            modulus: m,
        }
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn phases(&self) -> &[u64] {
        &self.phase
    }

    pub fn apply<T: Real>(&self, v: &[Complex<T>], roots: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); v.len()];
        for (c, &x) in v.iter().enumerate() {
            out[self.target[c]] = roots[self.phase[c] as usize] * x;
        }
        out
    }

    pub fn to_dense<T: Real>(&self) -> CMatrix<T> {
        let roots = root_table::<T>(self.modulus / 2);
        let mut m = CMatrix::zeros(self.dim(), self.dim());
        for c in 0..self.dim() {
            m[(self.target[c], c)] = roots[self.phase[c] as usize];
        }
        m
    }

    /// `A * M` for dense `A`.
    pub fn right_mul<T: Real>(&self, a: &CMatrix<T>, roots: &[Complex<T>]) -> CMatrix<T> {
        // (A M)[r, c] = A[r, target[c]] zeta^phase[c]
        let n = self.dim();
        let mut out = CMatrix::zeros(a.rows(), n);
        for r in 0..a.rows() {
            for c in 0..n {
                out[(r, c)] = a[(r, self.target[c])] * roots[self.phase[c] as usize];
            }
        }
        out
    }
}

fn strides(dims: &SystemDims) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims.dim(k + 1);
    }
    s
}

/// Dense matrix of a Pauli word: `zeta^phase` times the Kronecker product of
/// the per-site `X^x Z^z`.
pub fn matrix_of<T: Real>(w: &PauliWord) -> CMatrix<T> {
    MonomialOp::from_word(w).to_dense()
}
