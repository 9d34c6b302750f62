//! q-Witt vectors: a presentation engine over finite rings and the Λ-ring model
//! over `Z` and `Z[T_1, .., T_n]`.

mod checks;
mod group;
mod koszul;
mod lambda;
mod presented;
mod witt_lattice;
mod zp;

use thiserror::Error;

use crate::ringkit::RingError;
use crate::wittcore::WittError;

pub use checks::{
    check_fv_relations, check_ghost_compatibility, check_ghost_isomorphism, check_ghost_kills_verschiebung,
    check_torsion_bound, check_verschiebung_injective, check_witt_injective,
};
pub use group::{image_order, is_well_defined, kernel_order, FinGroup, LinearMap, EXHAUSTIVE_LIMIT};
pub use koszul::{check_koszul_exact, KoszulComplex, KoszulSpot};
pub use lambda::{c_map_surjective_on_constants, check_lambda_iso, check_lambda_laws, LambdaModel, LambdaStructure};
pub use presented::{presented_ring, qw_ghost, PresentedRing, CLOSURE_CAP, MAX_PRESENTED_LEVEL};
pub use witt_lattice::{witt_lattice, FiniteBase, WittLattice};
pub use zp::{check_zp_decomposition, zp_decomposition, ZpComparison};

#[derive(Debug, Error)]
pub enum QWittError {
    #[error("not a finite ring: {0}")]
    NotFinite(String),
    #[error("ideal closure for level {m} did not stabilise after {iterations} rounds (current index {order})")]
    FixpointCap { m: u64, iterations: usize, order: String },
    #[error("{d} does not divide {m}")]
    NotDivisor { d: u64, m: u64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Witt(#[from] WittError),
    #[error(transparent)]
    Ring(#[from] RingError),
}
