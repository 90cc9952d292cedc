//! Dense complex-matrix ground truth for the symbolic layer.

mod basis;
mod blocks;
mod matrix;
mod monomial;
mod oracle;
mod state;

pub use basis::{has_common_eigenvector, simultaneous_eigenbasis, LabeledBasis};
pub use blocks::{BlockDiag, OrbitPartition};
pub use matrix::{inner, norm, CMatrix};
pub use monomial::{matrix_of, subsystem_offsets, MonomialOp};
pub use oracle::{
    bell_state, block_basis, group_orbits, is_genuinely_entangled_pure, product_state_excluded, projector,
    projector_blocks, rho_of, rho_s, separable_form, separable_form_deviation, verify_sector_decomposition,
    verify_separable_form, SectorCheck, SectorProjector,
};
pub use state::{parse_dump, DenseState};
