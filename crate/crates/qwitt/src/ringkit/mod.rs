//! Exact base arithmetic: sparse polynomials, coefficient rings, cyclotomic
//! quotients, integer matrices and finitely generated abelian groups.

mod cyclo;
mod fgab;
mod intmat;
mod modlattice;
mod poly;
mod ring;

pub use cyclo::{
    check_phi_witness, cyclo_joint_quotient, cyclotomic, cyclotomic_coeffs, phi_ideal_check, q_analogue,
    q_analogue_coeffs, q_pow_minus_one, upoly_add, upoly_from_i64, upoly_mul, upoly_rem, upoly_sub, upoly_trim,
    CycQuot, JointQuotient, PhiIdealCertificate, UPoly,
};
pub use fgab::FGAbGroup;
pub use intmat::{hnf_basis, kernel_basis, snf, solve_integral, solve_with_snf, verify_snf, IntMatrix, Lattice, Snf};
pub use modlattice::{invariant_factors_mod, normalize_chain, xgcd, ModLattice, MAX_MODULUS};
pub use poly::{div_rem_monic, Mono, QPoly};
pub use ring::{
    divisors, euler_phi, factorize, gcd_u64, monomials_up_to, prime_factors, prime_power, valuation, Base, CoeffRing,
};

/// Errors raised by the base arithmetic layer.
#[derive(Debug, thiserror::Error)]
pub enum RingError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("{d} does not divide {m}")]
    NotDivisor { d: u64, m: u64 },
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("ring {0} is not finite")]
    NotFinite(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
