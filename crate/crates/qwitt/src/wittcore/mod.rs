//! Big Witt vectors over the rings of [`crate::ringkit`].

mod checks;
mod table;
mod vector;

use thiserror::Error;

use crate::ringkit::RingError;

pub use checks::check_ghost_homomorphism;
pub use table::{
    clear_table_memo, frobenius_table, witt_table, witt_table_with_cap, FrobeniusTable, WittTable, CACHE_ENV,
    DEFAULT_TABLE_CAP,
};
pub use vector::{
    frobenius, ghost, ghost_vector, restriction, teichmuller, verschiebung, witt_add, witt_decompose, witt_mul,
    witt_neg, witt_recompose, witt_scale, witt_sub, TruncationSet, WittVector,
};

#[derive(Debug, Error)]
pub enum WittError {
    #[error("truncation level {m} exceeds table cap {cap}")]
    CapExceeded { m: u64, cap: u64 },
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("{d} does not divide {m}")]
    NotDivisor { d: u64, m: u64 },
    #[error("table cache: {0}")]
    Cache(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}
