use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::report::CheckRecord;
use crate::ringkit::{
    cyclotomic_coeffs, divisors, prime_factors, upoly_mul, upoly_rem, CoeffRing, IntMatrix, ModLattice,
};

use super::group::{image_order, is_well_defined, reduce_big_rows, FinGroup, LinearMap};
use super::presented::{place, presented_ring};
use super::witt_lattice::witt_lattice;
use super::QWittError;

/// `qW_{p^α}(R) ⊗_{Z[q], q ↦ q^d} Z[q]/(Φ_d Φ_{pd} ⋯ Φ_{p^α d})` as a group.
/// Coordinate `i * deg + k` is `e_i ⊗ q^k`.
struct TensorFactor {
    d: u64,
    deg: usize,
    /// The monic modulus `Φ_d Φ_{pd} ⋯ Φ_{p^α d}`.
    modulus_poly: Vec<BigInt>,
    group: FinGroup,
}

fn q_power_mod(j: usize, f: &[BigInt]) -> Vec<BigInt> {
    let mut qj = vec![BigInt::zero(); j + 1];
    qj[j] = BigInt::one();
    let mut r = upoly_rem(&qj, f);
    r.resize(f.len() - 1, BigInt::zero());
    r
}

fn tensor_factor(ring: &CoeffRing, pa: u64, d: u64) -> Result<TensorFactor, QWittError> {
    let q = presented_ring(ring, pa)?;
    let mut f = vec![BigInt::one()];
    for k in divisors(pa) {
        f = upoly_mul(&f, &cyclotomic_coeffs(k * d));
    }
    let deg = f.len() - 1;
    let gdim = q.dim();
    let dim = gdim * deg;
    let modulus = q.modulus();
    let mut rel = ModLattice::new(dim, modulus)?;
    let tensor = |v: &[i128], s: &[BigInt]| -> Vec<i128> {
        let mut out = vec![0i128; dim];
        for (i, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (k, c) in s.iter().enumerate() {
                let c = c.mod_floor(&BigInt::from(modulus));
                let c: i128 = c.try_into().expect("reduced");
                out[i * deg + k] = (out[i * deg + k] + x * c).rem_euclid(modulus);
            }
        }
        out
    };
    let basis: Vec<Vec<BigInt>> = (0..deg).map(|k| q_power_mod(k, &f)).collect();
    for r in q.group().relation_generators() {
        for s in &basis {
            rel.insert(&tensor(&r, s));
        }
    }
    for i in 0..gdim {
        let e = super::presented::unit(i, gdim);
        let qe = q.shift(&e, 1);
        for k in 0..deg {
            let lhs = tensor(&qe, &basis[k]);
            let rhs = tensor(&e, &q_power_mod(k + d as usize, &f));
            let diff: Vec<i128> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
            rel.insert(&diff);
        }
    }
    Ok(TensorFactor { d, deg, modulus_poly: f, group: FinGroup::new(rel) })
}

/// Outcome of comparing `qW_m(R)` with the product decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZpComparison {
    pub left_order: BigInt,
    pub right_order: BigInt,
    pub left_factors: Vec<BigInt>,
    pub right_factors: Vec<BigInt>,
    pub well_defined: bool,
    pub bijective: bool,
}

/// Builds `qW_m(R)` and `∏_{d|n} qW_{p^α}(R) ⊗_{q ↦ q^d} Z[q]/(Φ_d ⋯ Φ_{p^α d})` for
/// `m = p^α n`, and the comparison map `w q^j ↦ (Res F_{n/d}(w) ⊗ q^j)_d`.
pub fn zp_decomposition(ring: &CoeffRing, m: u64) -> Result<ZpComparison, QWittError> {
    let n_mod = ring.modulus_u64().ok_or_else(|| QWittError::NotFinite(ring.to_string()))?;
    let ps = prime_factors(n_mod);
    if ps.len() != 1 {
        return Err(QWittError::Precondition(format!("{ring} is not p-local")));
    }
    let p = ps[0];
    let mut pa = 1;
    while m.is_multiple_of(pa * p) {
        pa *= p;
    }
    let n = m / pa;
    let left = presented_ring(ring, m)?;
    let base = left.witt_lattice().base();
    let lat_m = witt_lattice(m, base)?;
    let lat_pa = witt_lattice(pa, base)?;
    let factors = divisors(n).into_iter().map(|d| tensor_factor(ring, pa, d)).collect::<Result<Vec<_>, _>>()?;
    let l = left.slot_rank();
    let mut blocks: Vec<LinearMap> = Vec::new();
    for tf in &factors {
        let mid = witt_lattice(pa * tf.d, base)?;
        let f = IntMatrix::from_rows(&lat_m.frobenius_matrix(n / tf.d, &mid)?, mid.rank());
        let res = IntMatrix::from_rows(&mid.restriction_matrix(&lat_pa)?, lat_pa.rank());
        let comp = f.mul(&res);
        let rows: Vec<Vec<BigInt>> = (0..comp.rows()).map(|i| comp.row(i)).collect();
        let qpa = presented_ring(ring, pa)?;
        let witt_part = reduce_big_rows(&rows, qpa.modulus());
        let images = (0..left.dim())
            .map(|idx| {
                let (j, i) = (idx / l, idx % l);
                let v = place(&witt_part[i], 0, qpa.slot_rank(), qpa.dim());
                let s = q_power_mod(j, &tf.modulus_poly);
                let mut out = vec![0i128; tf.group.dim()];
                let md = BigInt::from(tf.group.modulus());
                for (a, &x) in v.iter().enumerate() {
                    for (k, c) in s.iter().enumerate() {
                        let c: i128 = c.mod_floor(&md).try_into().expect("reduced");
                        out[a * tf.deg + k] = (out[a * tf.deg + k] + x * c).rem_euclid(tf.group.modulus());
                    }
                }
                out
            })
            .collect();
        blocks.push(LinearMap::new(images, tf.group.dim()));
    }
    let refs: Vec<&FinGroup> = factors.iter().map(|t| &t.group).collect();
    let right = FinGroup::direct_sum(&refs)?;
    let dims: Vec<usize> = factors.iter().map(|t| t.group.dim()).collect();
    let brefs: Vec<(usize, usize, &LinearMap)> = blocks.iter().enumerate().map(|(i, b)| (0, i, b)).collect();
    let map = LinearMap::block(&[left.dim()], &dims, &brefs);
    let well_defined = is_well_defined(&map, left.group(), &right);
    let bijective = well_defined && image_order(&map, &right) == right.order() && left.order() == right.order();
    Ok(ZpComparison {
        left_order: left.order(),
        right_order: right.order(),
        left_factors: left.invariant_factors(),
        right_factors: right.invariant_factors(),
        well_defined,
        bijective,
    })
}

pub fn check_zp_decomposition(ring: &CoeffRing, m: u64) -> Result<CheckRecord, QWittError> {
    let c = zp_decomposition(ring, m)?;
    let ok = c.left_order == c.right_order && c.left_factors == c.right_factors && c.well_defined && c.bijective;
    Ok(CheckRecord::new("zp-decomposition")
        .param("ring", ring)
        .param("m", m)
        .param("order", &c.left_order)
        .verdict(ok, || format!("{c:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_factor_is_tautological() {
        let r: CoeffRing = "zmod:4".parse().unwrap();
        let c = zp_decomposition(&r, 2).unwrap();
        assert!(c.bijective);
        assert_eq!(c.left_order, c.right_order);
    }

    #[test]
    fn level_six() {
        for spec in ["zmod:4", "f3"] {
            let r: CoeffRing = spec.parse().unwrap();
            let c = zp_decomposition(&r, 6).unwrap();
            assert!(c.well_defined && c.bijective, "{spec}: {c:?}");
            assert_eq!(c.left_factors, c.right_factors);
        }
    }

    #[test]
    fn rejects_non_local_rings() {
        let r: CoeffRing = "zmod:6".parse().unwrap();
        assert!(zp_decomposition(&r, 6).is_err());
    }
}
