#![allow(dead_code)]

use boundstab::{GeneratorSet, PauliWord, SystemDims};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

pub type M = DMatrix<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Qubit Pauli matrices written out by hand.
pub fn pauli(name: char) -> M {
    let z = c(0.0);
    let o = c(1.0);
    let i = Complex64::new(0.0, 1.0);
    match name {
        'I' => M::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => M::from_row_slice(2, 2, &[z, o, o, z]),
        'Z' => M::from_row_slice(2, 2, &[o, z, z, -o]),
        'Y' => M::from_row_slice(2, 2, &[z, -i, i, z]),
        _ => unreachable!(),
    }
}

pub fn kron_all(ms: &[M]) -> M {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.kronecker(m))
}

/// `(|0,a> + (-1)^b |1,1-a>) / sqrt 2`, as a column.
pub fn bell(a: usize, b: usize) -> M {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = M::zeros(4, 1);
    v[(a, 0)] = c(h);
    v[(2 + (1 - a), 0)] = c(if b == 0 { h } else { -h });
    v
}

pub fn proj(v: &M) -> M {
    v * v.adjoint()
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn to_na(m: &boundstab::CMatrix64) -> M {
    M::from_fn(m.rows(), m.cols(), |r, cc| m[(r, cc)])
}

/// Random `G'` word: every site is a random power of X or of Z.
pub fn random_word<R: Rng>(rng: &mut R, dims: &SystemDims) -> PauliWord {
    let sites = dims
        .dims()
        .iter()
        .map(|&d| {
            let e = rng.gen_range(0..d);
            if rng.gen_bool(0.5) {
                (e, 0)
            } else {
                (0, e)
            }
        })
        .collect();
    PauliWord::new(dims, 0, sites).unwrap()
}

/// Random dimensions with total at most `max_total`.
pub fn random_dims<R: Rng>(rng: &mut R, max_sites: usize, max_total: u64) -> SystemDims {
    loop {
        let n = rng.gen_range(1..=max_sites);
        let dims: Vec<usize> = (0..n).map(|_| [2, 2, 3, 4, 6][rng.gen_range(0..5)]).collect();
        if dims.iter().map(|&d| d as u64).product::<u64>() <= max_total {
            return SystemDims::new(dims).unwrap();
        }
    }
}

/// Random commuting `G'` set, built greedily from random candidates.
pub fn random_commuting_set<R: Rng>(rng: &mut R, dims: SystemDims, max_gens: usize) -> GeneratorSet {
    let want = rng.gen_range(0..=max_gens);
    let mut gens: Vec<PauliWord> = Vec::new();
    for _ in 0..40 {
        if gens.len() == want {
            break;
        }
        let w = random_word(rng, &dims);
        if gens.iter().all(|g| g.commutator_exponent_full(&w).unwrap() == 0) {
            gens.push(w);
        }
    }
    GeneratorSet::commuting(dims, gens).unwrap()
}
