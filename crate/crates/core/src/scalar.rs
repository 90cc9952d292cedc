use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use std::fmt::{Debug, Display, LowerExp};

pub use num_complex::Complex;

/// Real scalar used by the dense oracle and the measurement simulator.
///
/// Everything numeric in this crate is written against this trait so the
/// same code runs in `f64` (the default) or `f32`.
pub trait Real:
    'static + Float + FloatConst + FromPrimitive + NumAssign + Default + Debug + Display + LowerExp + Send + Sync
{
    /// Entrywise comparison and rank-decision threshold.
    fn default_tol() -> Self;
    /// Threshold for algebraic identities such as `P^2 = P`.
    fn strict_tol() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap()
    }
}

impl Real for f64 {
    fn default_tol() -> Self {
        1e-9
    }
    fn strict_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn default_tol() -> Self {
        1e-4
    }
    fn strict_tol() -> Self {
        1e-5
    }
}

/// Tolerances shared by every numerical comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Entrywise matrix comparison.
    pub entry: T,
    /// Idempotence and Hermiticity.
    pub algebra: T,
    /// Rank decisions during orthonormalization and eigenvalue cut-offs.
    pub rank: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Tolerances {
            entry: T::default_tol(),
            algebra: T::strict_tol(),
            rank: T::default_tol(),
        }
    }
}

impl<T: Real> Tolerances<T> {
    /// Same tolerance for entry and rank decisions, default algebra tolerance.
    pub fn with_entry(tol: T) -> Self {
        Tolerances {
            entry: tol,
            rank: tol,
            ..Self::default()
        }
    }
}

/// `e^{i pi k / half}` for `k in 0..2*half`.
pub fn root_table<T: Real>(half: u64) -> Vec<Complex<T>> {
    let modulus = 2 * half;
    (0..modulus)
        .map(|k| {
            // exact values at the quarter turns keep identities clean
            match (4 * k) % modulus {
                0 => match (4 * k) / modulus {
                    0 => Complex::new(T::one(), T::zero()),
                    1 => Complex::new(T::zero(), T::one()),
                    2 => Complex::new(-T::one(), T::zero()),
                    _ => Complex::new(T::zero(), -T::one()),
                },
                _ => {
                    let angle = T::PI() * T::from_u64(k).unwrap() / T::from_u64(half).unwrap();
                    Complex::new(angle.cos(), angle.sin())
                }
            }
        })
        .collect()
}
