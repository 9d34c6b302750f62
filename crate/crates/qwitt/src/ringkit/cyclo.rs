use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::fgab::FGAbGroup;
use super::intmat::{solve_integral, IntMatrix};
use super::poly::{div_rem_monic, QPoly};
use super::ring::{divisors, euler_phi, prime_factors, prime_power};
use super::RingError;

/// Univariate integer polynomial, ascending coefficients, no trailing zeros.
pub type UPoly = Vec<BigInt>;

pub fn upoly_trim(mut a: UPoly) -> UPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

pub fn upoly_from_i64(xs: &[i64]) -> UPoly {
    upoly_trim(xs.iter().map(|&x| BigInt::from(x)).collect())
}

pub fn upoly_mul(a: &[BigInt], b: &[BigInt]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    upoly_trim(out)
}

pub fn upoly_add(a: &[BigInt], b: &[BigInt]) -> UPoly {
    let n = a.len().max(b.len());
    let out = (0..n).map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default()).collect();
    upoly_trim(out)
}

pub fn upoly_sub(a: &[BigInt], b: &[BigInt]) -> UPoly {
    let n = a.len().max(b.len());
    let out = (0..n).map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default()).collect();
    upoly_trim(out)
}

/// Remainder modulo a monic polynomial, padded to `deg(divisor)` entries.
pub fn upoly_rem(a: &[BigInt], divisor: &[BigInt]) -> UPoly {
    let (_, mut r) = div_rem_monic(a, divisor);
    r.resize(divisor.len() - 1, BigInt::zero());
    r
}

/// `q^k - 1`.
pub fn q_pow_minus_one(k: usize) -> UPoly {
    let mut v = vec![BigInt::zero(); k + 1];
    v[0] = BigInt::from(-1);
    v[k] += BigInt::one();
    upoly_trim(v)
}

fn cyclo_cache() -> &'static Mutex<HashMap<u64, UPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, UPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of the `m`-th cyclotomic polynomial.
pub fn cyclotomic_coeffs(m: u64) -> UPoly {
    assert!(m >= 1, "cyclotomic index must be positive");
    if let Some(c) = cyclo_cache().lock().expect("cyclotomic cache poisoned").get(&m) {
        return c.clone();
    }
    let mut num = q_pow_minus_one(m as usize);
    for d in divisors(m) {
        if d < m {
            let phi_d = cyclotomic_coeffs(d);
            let (q, r) = div_rem_monic(&num, &phi_d);
            debug_assert!(r.iter().all(Zero::is_zero));
            num = upoly_trim(q);
        }
    }
    cyclo_cache().lock().expect("cyclotomic cache poisoned").insert(m, num.clone());
    num
}

/// `Φ_m(q)` as a polynomial in `q`.
pub fn cyclotomic(m: u64) -> QPoly {
    QPoly::from_q_coeffs(&cyclotomic_coeffs(m), 0)
}

/// Coefficients of `[m/d]_{q^d} = 1 + q^d + ... + q^{d(m/d - 1)}`.
pub fn q_analogue_coeffs(m: u64, d: u64) -> Result<UPoly, RingError> {
    if d == 0 || !m.is_multiple_of(d) {
        return Err(RingError::NotDivisor { d, m });
    }
    let mut v = vec![BigInt::zero(); (m - d + 1) as usize];
    for k in 0..m / d {
        v[(k * d) as usize] = BigInt::one();
    }
    Ok(v)
}

pub fn q_analogue(m: u64, d: u64) -> Result<QPoly, RingError> {
    Ok(QPoly::from_q_coeffs(&q_analogue_coeffs(m, d)?, 0))
}

/// Element of `Z[q]/(q^m - 1)`, optionally with coefficients reduced modulo `modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycQuot {
    coeffs: Vec<BigInt>,
}

impl CycQuot {
    pub fn zero(m: usize) -> Self {
        CycQuot { coeffs: vec![BigInt::zero(); m] }
    }

    pub fn one(m: usize) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = BigInt::one();
        z
    }

    pub fn q_pow(m: usize, k: usize) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[k % m] = BigInt::one();
        z
    }

    /// Reduces an arbitrary ascending coefficient list modulo `q^m - 1`.
    pub fn from_coeffs(m: usize, cs: &[BigInt]) -> Self {
        let mut z = Self::zero(m);
        for (j, c) in cs.iter().enumerate() {
            z.coeffs[j % m] += c;
        }
        z
    }

    pub fn from_i64(m: usize, cs: &[i64]) -> Self {
        let big: Vec<BigInt> = cs.iter().map(|&x| BigInt::from(x)).collect();
        Self::from_coeffs(m, &big)
    }

    pub fn modulus(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &CycQuot) -> CycQuot {
        CycQuot { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &CycQuot) -> CycQuot {
        CycQuot { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> CycQuot {
        CycQuot { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &CycQuot) -> CycQuot {
        let m = self.modulus();
        assert_eq!(m, other.modulus(), "modulus mismatch");
        let mut out = Self::zero(m);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[(i + j) % m] += a * b;
                }
            }
        }
        out
    }

    /// Coefficients reduced into `[0, n)`.
    pub fn reduce_mod(&self, n: &BigInt) -> CycQuot {
        CycQuot { coeffs: self.coeffs.iter().map(|c| c.mod_floor(n)).collect() }
    }

    /// Projection `Z[q]/(q^m - 1) -> Z[q]/(q^d - 1)` for `d | m`.
    pub fn project(&self, d: usize) -> CycQuot {
        Self::from_coeffs(d, &self.coeffs)
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::from_q_coeffs(&self.coeffs, 0)
    }

    pub fn to_text(&self) -> String {
        self.to_qpoly().to_text(&[])
    }
}

/// `Z[q]/(Φ_m, Φ_n)` as an abelian group on the basis `1, q, .., q^{φ(m)-1}`.
#[derive(Clone, Debug)]
pub struct JointQuotient {
    pub m: u64,
    pub n: u64,
    pub group: FGAbGroup,
    /// Matrix of multiplication by `q` on the basis (columns are images).
    pub q_action: IntMatrix,
    /// `(p, rank)` when `m/n` or `n/m` is `p^α` with `α >= 1`: the ring is `F_p[q]/Φ_min`.
    pub identification: Option<(u64, u64)>,
}

impl JointQuotient {
    pub fn is_zero(&self) -> bool {
        self.group.is_trivial()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.group.order()
    }
}

pub fn cyclo_joint_quotient(m: u64, n: u64) -> JointQuotient {
    let phi_m = cyclotomic_coeffs(m);
    let phi_n = cyclotomic_coeffs(n);
    let deg = phi_m.len() - 1;
    let mut rels = Vec::with_capacity(deg);
    let mut shifted = phi_n.clone();
    for _ in 0..deg {
        rels.push(upoly_rem(&shifted, &phi_m));
        shifted.insert(0, BigInt::zero());
    }
    let group = FGAbGroup::new(deg, rels).expect("relations have basis length");
    let mut q_action = IntMatrix::zeros(deg, deg);
    for j in 0..deg {
        let mut e = vec![BigInt::zero(); j + 2];
        e[j + 1] = BigInt::one();
        for (i, c) in upoly_rem(&e, &phi_m).into_iter().enumerate() {
            q_action.set(i, j, c);
        }
    }
    let (big, small) = if m >= n { (m, n) } else { (n, m) };
    let identification =
        if big % small == 0 { prime_power(big / small).map(|(p, _)| (p, euler_phi(small))) } else { None };
    JointQuotient { m, n, group, q_action, identification }
}

/// Outcome of the bounded search for `Φ_m ∈ ([p]_{q^{m/p}} : p | m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiIdealCertificate {
    /// Cofactors `c_p` with `Σ c_p [p]_{q^{m/p}} = Φ_m`, one per prime factor (ascending).
    Witness(Vec<(u64, UPoly)>),
    Inconclusive {
        bound: usize,
    },
}

/// Checks `[p]_{q^{m/p}} ∈ (Φ_m)` for every prime `p | m`, then searches for cofactors of
/// degree `<= bound` expressing `Φ_m` in the ideal they generate.
pub fn phi_ideal_check(m: u64, bound: usize) -> Result<PhiIdealCertificate, RingError> {
    if m < 2 {
        return Err(RingError::Precondition("phiIdealCheck needs m >= 2".into()));
    }
    let phi = cyclotomic_coeffs(m);
    if bound + 1 < phi.len() {
        return Err(RingError::Precondition("degree bound below deg Φ_m".into()));
    }
    let primes = prime_factors(m);
    let gens: Vec<UPoly> = primes.iter().map(|&p| q_analogue_coeffs(m, m / p).expect("p | m")).collect();
    for (p, g) in primes.iter().zip(&gens) {
        let (_, r) = div_rem_monic(g, &phi);
        if r.iter().any(|c| !c.is_zero()) {
            return Err(RingError::Internal(format!("[{p}]_(q^{}) not divisible by Φ_{m}", m / p)));
        }
    }
    let rows = bound + 1 + gens.iter().map(|g| g.len() - 1).max().unwrap_or(0);
    let unknowns = (bound + 1) * gens.len();
    let mut a = IntMatrix::zeros(rows, unknowns);
    for (k, g) in gens.iter().enumerate() {
        for s in 0..=bound {
            for (j, c) in g.iter().enumerate() {
                a.set(s + j, k * (bound + 1) + s, c.clone());
            }
        }
    }
    let mut rhs = phi.clone();
    rhs.resize(rows, BigInt::zero());
    match solve_integral(&a, &rhs) {
        Some(x) => {
            let witness = primes
                .iter()
                .enumerate()
                .map(|(k, &p)| (p, upoly_trim(x[k * (bound + 1)..(k + 1) * (bound + 1)].to_vec())))
                .collect();
            Ok(PhiIdealCertificate::Witness(witness))
        }
        None => Ok(PhiIdealCertificate::Inconclusive { bound }),
    }
}

/// Verifies a witness: `Σ c_p [p]_{q^{m/p}} = Φ_m`.
pub fn check_phi_witness(m: u64, witness: &[(u64, UPoly)]) -> bool {
    let mut acc: UPoly = vec![];
    for (p, c) in witness {
        let g = match q_analogue_coeffs(m, m / p) {
            Ok(g) => g,
            Err(_) => return false,
        };
        acc = upoly_add(&acc, &upoly_mul(c, &g));
    }
    acc == cyclotomic_coeffs(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic_coeffs(1), upoly_from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_coeffs(2), upoly_from_i64(&[1, 1]));
        assert_eq!(cyclotomic_coeffs(6), upoly_from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic_coeffs(12), upoly_from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn q_analogue_examples() {
        assert_eq!(q_analogue_coeffs(6, 2).unwrap(), upoly_from_i64(&[1, 0, 1, 0, 1]));
        assert_eq!(q_analogue_coeffs(5, 5).unwrap(), upoly_from_i64(&[1]));
        assert_eq!(q_analogue_coeffs(4, 1).unwrap(), upoly_from_i64(&[1, 1, 1, 1]));
        assert!(q_analogue_coeffs(6, 4).is_err());
    }

    #[test]
    fn joint_quotient_examples() {
        assert!(cyclo_joint_quotient(2, 3).is_zero());
        let a = cyclo_joint_quotient(1, 2);
        assert_eq!(a.order(), Some(BigInt::from(2)));
        assert_eq!(a.identification, Some((2, 1)));
        let b = cyclo_joint_quotient(2, 4);
        assert_eq!(b.order(), Some(BigInt::from(2)));
    }

    #[test]
    fn phi_ideal_examples() {
        match phi_ideal_check(4, 2).unwrap() {
            PhiIdealCertificate::Witness(w) => {
                assert_eq!(w, vec![(2, upoly_from_i64(&[1]))]);
            }
            other => panic!("{other:?}"),
        }
        for (m, b) in [(6, 6), (12, 12)] {
            match phi_ideal_check(m, b).unwrap() {
                PhiIdealCertificate::Witness(w) => assert!(check_phi_witness(m, &w)),
                other => panic!("m={m}: {other:?}"),
            }
        }
    }

    #[test]
    fn cyc_quot_arithmetic() {
        let a = CycQuot::from_i64(3, &[1, 1]);
        let b = CycQuot::from_i64(3, &[0, 0, 1, 1]);
        assert_eq!(b, CycQuot::from_i64(3, &[1, 0, 1]));
        assert_eq!(a.mul(&b), CycQuot::from_i64(3, &[2, 1, 1]));
        assert_eq!(CycQuot::from_i64(4, &[1, 2, 3, 4]).project(2), CycQuot::from_i64(2, &[4, 6]));
    }
}
