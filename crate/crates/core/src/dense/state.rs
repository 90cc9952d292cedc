use super::matrix::CMatrix;
use super::monomial::subsystem_offsets;
use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};
use std::fmt::Write as _;

/// A dense operator on a multipartite system, usually a density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState<T> {
    dims: Vec<usize>,
    matrix: CMatrix<T>,
    tol: T,
}

impl<T: Real> DenseState<T> {
    pub fn new(dims: Vec<usize>, matrix: CMatrix<T>) -> Result<Self> {
        let n: usize = dims.iter().product();
        if !matrix.is_square() || matrix.rows() != n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for total dimension {n}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(DenseState {
            dims,
            matrix,
            tol: T::default_tol(),
        })
    }

    /// Pure state `|v><v|`.
    pub fn pure(dims: Vec<usize>, v: &[Complex<T>]) -> Result<Self> {
        Self::new(dims, CMatrix::outer(v))
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.matrix
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    pub fn trace(&self) -> Complex<T> {
        self.matrix.trace()
    }

    /// `tr(rho^2)` without forming the product.
    pub fn purity(&self) -> T {
        let n = self.dim();
        let mut acc = T::zero();
        for r in 0..n {
            for c in 0..n {
                acc += (self.matrix[(r, c)] * self.matrix[(c, r)]).re;
            }
        }
        acc
    }

    pub fn min_eigenvalue(&self) -> T {
        self.matrix.hermitian_eigenvalues()[0]
    }

    /// Hermitian, unit trace and positive semidefinite within `tol`.
    pub fn is_density_matrix(&self) -> bool {
        let tr = self.trace();
        self.matrix.is_hermitian(self.tol)
            && (tr.re - T::one()).abs() <= self.tol
            && tr.im.abs() <= self.tol
            && self.min_eigenvalue() >= -self.tol
    }

    /// Partial trace over every site not in `keep`; kept sites stay in
    /// ascending order.
    pub fn reduced_state(&self, keep: &[usize]) -> Result<DenseState<T>> {
        crate::pauli::check_sites(self.dims.len(), keep)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        let traced: Vec<usize> = (0..self.dims.len()).filter(|s| !keep.contains(s)).collect();
        let keep_off = subsystem_offsets(&self.dims, &keep);
        let trace_off = subsystem_offsets(&self.dims, &traced);
        let k = keep_off.len();
        let mut out = CMatrix::zeros(k, k);
        for (r, &ro) in keep_off.iter().enumerate() {
            for (c, &co) in keep_off.iter().enumerate() {
                let mut acc = Complex::new(T::zero(), T::zero());
                for &t in &trace_off {
                    acc += self.matrix[(ro + t, co + t)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(DenseState {
            dims: keep.iter().map(|&s| self.dims[s]).collect(),
            matrix: out,
            tol: self.tol,
        })
    }

    /// Relabels parties: site `k` of the result is site `order[k]` of `self`.
    pub fn permute_sites(&self, order: &[usize]) -> Result<DenseState<T>> {
        crate::pauli::check_sites(self.dims.len(), order)?;
        if order.len() != self.dims.len() {
            return Err(Error::InvalidSites("permutation must list every site".into()));
        }
        let off = subsystem_offsets(&self.dims, order);
        let n = self.dim();
        let mut out = CMatrix::zeros(n, n);
        for (r, &ro) in off.iter().enumerate() {
            for (c, &co) in off.iter().enumerate() {
                out[(r, c)] = self.matrix[(ro, co)];
            }
        }
        Ok(DenseState {
            dims: order.iter().map(|&s| self.dims[s]).collect(),
            matrix: out,
            tol: self.tol,
        })
    }

    /// `<psi|_B rho |psi>_B` on the remaining sites (ascending), unnormalized.
    /// Its trace is the probability of projecting block `B` onto `psi`.
    pub fn project_block(&self, block: &[usize], psi: &[Complex<T>]) -> Result<DenseState<T>> {
        crate::pauli::check_sites(self.dims.len(), block)?;
        let rest: Vec<usize> = (0..self.dims.len()).filter(|s| !block.contains(s)).collect();
        let blk_off = subsystem_offsets(&self.dims, block);
        if psi.len() != blk_off.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for block dimension {}",
                psi.len(),
                blk_off.len()
            )));
        }
        let rest_off = subsystem_offsets(&self.dims, &rest);
        let r_dim = rest_off.len();
        let zero = Complex::new(T::zero(), T::zero());
        // half[(row, c)] = sum_t' rho[row, (c, t')] psi[t']
        let n = self.dim();
        let mut half = vec![zero; n * r_dim];
        for row in 0..n {
            let src = self.matrix.row(row);
            for (c, &co) in rest_off.iter().enumerate() {
                let mut acc = zero;
                for (t, &to) in blk_off.iter().enumerate() {
                    acc += src[co + to] * psi[t];
                }
                half[row * r_dim + c] = acc;
            }
        }
        let mut out = CMatrix::zeros(r_dim, r_dim);
        for (r, &ro) in rest_off.iter().enumerate() {
            for (t, &to) in blk_off.iter().enumerate() {
                let w = psi[t].conj();
                let base = (ro + to) * r_dim;
                for c in 0..r_dim {
                    out[(r, c)] += w * half[base + c];
                }
            }
        }
        Ok(DenseState {
            dims: rest.iter().map(|&s| self.dims[s]).collect(),
            matrix: out,
            tol: self.tol,
        })
    }

    /// Plain-text dump: `dim N`, then one row per line of `re,im` pairs.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let n = self.dim();
        writeln!(s, "dim {n}").unwrap();
        for r in 0..n {
            let row: Vec<String> = self
                .matrix
                .row(r)
                .iter()
                .map(|z| format!("{:e},{:e}", z.re, z.im))
                .collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
        s
    }
}

/// Parses the output of [`DenseState::dump`] into a matrix.
pub fn parse_dump<T: Real>(text: &str) -> Result<CMatrix<T>> {
    let mut lines = text.lines().enumerate();
    let bad = |line: usize, message: String| Error::Parse {
        line: line + 1,
        column: 1,
        message,
    };
    let (_, header) = lines.next().ok_or_else(|| bad(0, "empty dump".into()))?;
    let n: usize = header
        .strip_prefix("dim ")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| bad(0, "expected header 'dim N'".into()))?;
    let mut data = Vec::with_capacity(n * n);
    for (i, line) in lines.take(n) {
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != n {
            return Err(bad(i, format!("expected {n} entries")));
        }
        for e in entries {
            let (re, im) = e.split_once(',').ok_or_else(|| bad(i, format!("bad entry '{e}'")))?;
            let parse = |v: &str| -> Result<T> {
                v.parse::<f64>()
                    .map(T::lit)
                    .map_err(|_| bad(i, format!("bad number '{v}'")))
            };
            data.push(Complex::new(parse(re)?, parse(im)?));
        }
    }
    if data.len() != n * n {
        return Err(bad(n, "dump is truncated".into()));
    }
    Ok(CMatrix::from_vec(n, n, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = CMatrix::outer(&[c(1.0), c(0.0)]);
        let b = CMatrix::outer(&[c(0.6), c(0.8)]);
        let rho = DenseState::new(vec![2, 2], a.kron(&b)).unwrap();
        let red = rho.reduced_state(&[1]).unwrap();
        assert!(red.matrix().approx_eq(&b, 1e-15));
        let red = rho.reduced_state(&[0]).unwrap();
        assert!(red.matrix().approx_eq(&a, 1e-15));
        assert!(rho.reduced_state(&[]).is_err());
    }

    #[test]
    fn permutation_swaps_factors() {
        let a = CMatrix::outer(&[c(1.0), c(0.0)]);
        let b = CMatrix::outer(&[c(0.0), c(0.0), c(1.0)]);
        let rho = DenseState::new(vec![2, 3], a.kron(&b)).unwrap();
        let swapped = rho.permute_sites(&[1, 0]).unwrap();
        assert_eq!(swapped.dims(), &[3, 2]);
        assert!(swapped.matrix().approx_eq(&b.kron(&a), 0.0));
    }

    #[test]
    fn block_projection_gives_conditional_state() {
        let s = 0.5f64.sqrt();
        // (|00> + |11>)/sqrt2
        let bell = [c(s), c(0.0), c(0.0), c(s)];
        let rho = DenseState::pure(vec![2, 2], &bell).unwrap();
        let cond = rho.project_block(&[1], &[c(0.0), c(1.0)]).unwrap();
        assert!((cond.trace().re - 0.5).abs() < 1e-15);
        let expected = CMatrix::from_vec(2, 2, vec![c(0.0), c(0.0), c(0.0), c(0.5)]);
        assert!(cond.matrix().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn dump_round_trip() {
        let m = CMatrix::from_fn(3, 3, |r, cc| Complex::new(r as f64 * 0.25, -(cc as f64) / 3.0));
        let st = DenseState::new(vec![3], m.clone()).unwrap();
        let text = st.dump();
        assert!(text.starts_with("dim 3\n"));
        let back: CMatrix<f64> = parse_dump(&text).unwrap();
        assert!(back.approx_eq(&m, 1e-15));
        assert!(parse_dump::<f64>("dim 2\n1,0 0,0\n").is_err());
    }

    #[test]
    fn density_checks() {
        let rho = DenseState::new(vec![2], CMatrix::<f64>::identity(2).scale_real(0.5)).unwrap();
        assert!(rho.is_density_matrix());
        assert!((rho.purity() - 0.5).abs() < 1e-15);
        let bad = DenseState::new(vec![2], CMatrix::<f64>::identity(2)).unwrap();
        assert!(!bad.is_density_matrix());
    }
}
