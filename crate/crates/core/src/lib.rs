//! Stabilizer-based construction, certification and simulation of
//! unlockable bound entangled states on mixed-dimensional qudit systems.
//!
//! The symbolic layer ([`pauli`], [`group`], [`partition`], [`cert`]) is
//! exact integer arithmetic. The numeric layer ([`dense`], [`unlock`]) is
//! generic over the scalar type; the `*64` aliases are the defaults.

pub mod catalog;
pub mod cert;
pub mod dense;
pub mod error;
pub mod group;
pub mod partition;
pub mod pauli;
pub mod scalar;
pub mod specfile;
pub mod unlock;

pub use cert::{certify_ube, Certificate, SearchOptions, Verdict};
pub use error::{Error, Result};
pub use group::{close, GeneratorSet, SectorLabel, StabilizerGroup};
pub use partition::Partition;
pub use pauli::{PauliWord, RootOfUnity, SystemDims};
pub use scalar::{Complex, Real, Tolerances};
pub use specfile::GeneratorSpec;
pub use unlock::{CorrelationRule, Protocol, ShotRecord};

pub type CMatrix64 = dense::CMatrix<f64>;
pub type CMatrix32 = dense::CMatrix<f32>;
pub type DenseState64 = dense::DenseState<f64>;
pub type DenseState32 = dense::DenseState<f32>;
pub type LabeledBasis64 = dense::LabeledBasis<f64>;
pub type ShotRecord64 = unlock::ShotRecord<f64>;
