//! q-de Rham and q-Hodge complexes of `Z[T_1..T_n]` modulo `q^m - 1`.

mod calculus;
mod checks;
mod cohomology;
mod form;
mod ke;
mod koszul;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::ringkit::RingError;

pub use calculus::{gammai, q_leibniz_sides, qpartial};
pub use checks::{check_d_squared, check_jackson_powers, check_ke_level, check_q_leibniz, random_form};
pub use cohomology::{
    charpoly, check_p_torsion_free, cohomology, local_factors, order_mod, FGModulePresentation, PTorsionVerdict,
};
pub use form::{FormKey, QForm};
pub use ke::{build_k, ke_cohomology, ke_tensor_iso, KeCohomology, KeTensorIso};
pub use koszul::{koszul_basis, multidegree_complex, KoszulScalarComplex};

/// Default bound on each exponent of a multidegree.
pub const DEFAULT_MAXDEG: u32 = 12;

#[derive(Debug, thiserror::Error)]
pub enum QComplexError {
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("{d} does not divide {m}")]
    NotDivisor { d: u64, m: u64 },
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// All multidegrees in `{0..=maxdeg}^n`, lexicographic.
pub fn multidegrees(n: usize, maxdeg: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (0..=maxdeg).map(move |e| {
                    let mut w = v.clone();
                    w.push(e);
                    w
                })
            })
            .collect();
    }
    out
}

/// One line of a cohomology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyRow {
    pub multidegree: Vec<u32>,
    pub degree: usize,
    pub invariant_factors: Vec<String>,
    pub q_action_charpoly: Vec<String>,
}

/// `H^*(qHodge / (q^m - 1))` of `Z[T_1..T_n]`, one row per multidegree and degree. With a
/// prime `p` the invariant factors are those of `H^* ⊗ Z/p^prec`.
pub fn hodge_cohomology(
    n: usize,
    m: u64,
    maxdeg: u32,
    local: Option<(u64, u32)>,
) -> Result<Vec<CohomologyRow>, QComplexError> {
    let cells = multidegrees(n, maxdeg);
    let rows: Result<Vec<Vec<CohomologyRow>>, QComplexError> = cells
        .par_iter()
        .map(|v| {
            let c = multidegree_complex(m, v)?;
            Ok((0..=c.length())
                .map(|deg| {
                    let h = cohomology(&c, deg);
                    let factors: Vec<BigInt> = match local {
                        Some((p, prec)) => local_factors(&c, deg, p, prec),
                        None => h.invariant_factors(),
                    };
                    CohomologyRow {
                        multidegree: v.clone(),
                        degree: deg,
                        invariant_factors: factors.iter().map(ToString::to_string).collect(),
                        q_action_charpoly: h.q_charpoly().iter().map(ToString::to_string).collect(),
                    }
                })
                .collect())
        })
        .collect();
    Ok(rows?.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multidegree_enumeration() {
        assert_eq!(multidegrees(2, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(multidegrees(0, 5), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn table_rows() {
        let rows = hodge_cohomology(1, 4, 2, None).unwrap();
        assert_eq!(rows.len(), 1 + 2 + 2);
        let v2: Vec<_> = rows.iter().filter(|r| r.multidegree == [2]).collect();
        assert_eq!(v2[0].invariant_factors, ["0", "0"]);
        assert_eq!(v2[1].q_action_charpoly, ["-1", "0", "1"]);
        let local = hodge_cohomology(1, 4, 2, Some((2, 8))).unwrap();
        assert_eq!(local[0].invariant_factors, ["256"; 4]);
    }
}
