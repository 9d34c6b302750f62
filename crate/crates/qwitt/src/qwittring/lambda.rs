use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::CheckRecord;
use crate::ringkit::{cyclotomic_coeffs, divisors, q_analogue, CoeffRing, Lattice, Mono, QPoly};
use crate::wittcore::{frobenius, teichmuller, verschiebung, witt_add, witt_mul, witt_sub, WittVector};

use super::QWittError;

/// `Z` or `Z[T_1, .., T_n]` with Adams operations `ψ^k(T_i) = T_i^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaStructure {
    ring: CoeffRing,
}

impl LambdaStructure {
    pub fn integers() -> Self {
        LambdaStructure { ring: CoeffRing::integers() }
    }

    /// `Z[T_1, .., T_n]`.
    pub fn polynomial(n: usize) -> Self {
        if n == 0 {
            return Self::integers();
        }
        let vars = (1..=n).map(|i| format!("T{i}")).collect();
        LambdaStructure { ring: CoeffRing::polynomial(crate::ringkit::Base::Integers, vars).expect("valid names") }
    }

    /// Accepts `z` or `poly:z:...` rings.
    pub fn for_ring(ring: &CoeffRing) -> Result<Self, QWittError> {
        if !ring.is_torsion_free() || ring.nil_degree().is_some() || ring.modulus().is_some() {
            return Err(QWittError::Precondition(format!("{ring} is not Z or a polynomial ring over Z")));
        }
        Ok(LambdaStructure { ring: ring.clone() })
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// `ψ^k`, applied coefficientwise in `q`.
    pub fn adams(&self, x: &QPoly, k: u64) -> QPoly {
        let k = k as u32;
        x.map_monos(x.nvars(), |mo| Mono { q: mo.q, t: mo.t.iter().map(|e| e * k).collect() })
    }

    /// Inverse of `ψ^k` on its image; errors if `x` is not in `ψ^k(A)[q]`.
    pub fn adams_inverse(&self, x: &QPoly, k: u64) -> Result<QPoly, QWittError> {
        let k32 = k as u32;
        if x.terms().any(|(mo, _)| mo.t.iter().any(|e| e % k32 != 0)) {
            return Err(QWittError::InexactDivision(format!("not in the image of the Adams operation {k}")));
        }
        Ok(x.map_monos(x.nvars(), |mo| Mono { q: mo.q, t: mo.t.iter().map(|e| e / k32).collect() }))
    }

    /// The section `s_m : A -> W_m(A)` with `gh_n(s_m(x)) = ψ^n(x)` for `n | m`.
    pub fn section(&self, x: &QPoly, m: u64) -> Result<WittVector, QWittError> {
        let divs = divisors(m);
        let mut coords: Vec<QPoly> = Vec::with_capacity(divs.len());
        for (k, &n) in divs.iter().enumerate() {
            let mut rest = self.adams(x, n);
            for (i, &e) in divs[..k].iter().enumerate() {
                if n % e == 0 {
                    let term = self.ring.scale(&self.ring.pow(&coords[i], (n / e) as u32), &BigInt::from(e));
                    rest = self.ring.sub(&rest, &term);
                }
            }
            let c = rest.div_exact_int(&BigInt::from(n)).map_err(|_| {
                QWittError::InexactDivision(format!("section coordinate {n} of {}", self.ring.format_elem(x)))
            })?;
            coords.push(c);
        }
        Ok(WittVector::new(m, coords)?)
    }

    /// The unique `x_k` (`k | m`) with `w = Σ_{d|m} V_d(s_{m/d}(x_{m/d}))`, found by peeling
    /// off one Verschiebung layer at a time. Keys are the indices `k` of `x_k`.
    pub fn epsilon(&self, w: &WittVector) -> Result<BTreeMap<u64, QPoly>, QWittError> {
        let m = w.m();
        let mut rest = w.clone();
        let mut out = BTreeMap::new();
        for d in divisors(m) {
            let a = rest.coord(d).cloned().expect("d divides m");
            if !a.is_zero() {
                let piece = verschiebung(&self.ring, &self.section(&a, m / d)?, d)?;
                rest = witt_sub(&self.ring, &rest, &piece)?;
            }
            out.insert(m / d, a);
        }
        if rest.coords().iter().any(|c| !c.is_zero()) {
            return Err(QWittError::Internal("epsilon peeling left a remainder".into()));
        }
        Ok(out)
    }

    /// Rebuilds `Σ_{d|m} V_d(s_{m/d}(x_{m/d}))` from [`epsilon`](Self::epsilon) output.
    pub fn from_epsilon(&self, m: u64, parts: &BTreeMap<u64, QPoly>) -> Result<WittVector, QWittError> {
        let mut acc = WittVector::zero(&self.ring, m);
        for d in divisors(m) {
            if let Some(a) = parts.get(&(m / d)) {
                if !a.is_zero() {
                    acc = witt_add(&self.ring, &acc, &verschiebung(&self.ring, &self.section(a, m / d)?, d)?)?;
                }
            }
        }
        Ok(acc)
    }

    /// `c_m(w) = Σ_{d|m} [d]_{q^{m/d}} ψ^{m/d}(x_{m/d})` in `A[q]/(q^m - 1)`.
    pub fn c_map(&self, w: &WittVector) -> Result<QPoly, QWittError> {
        let m = w.m();
        let eps = self.epsilon(w)?;
        let mut acc = QPoly::zero(self.nvars());
        for d in divisors(m) {
            let x = &eps[&(m / d)];
            let qa = lift(&q_analogue(m, m / d)?, self.nvars());
            acc = &acc + &(&qa * &self.adams(x, m / d));
        }
        Ok(acc.reduce_q(m as u32))
    }

    /// Teichmüller representative in the model: `c_m(τ_m(r))`.
    pub fn teichmuller(&self, r: &QPoly, m: u64) -> Result<QPoly, QWittError> {
        self.c_map(&teichmuller(&self.ring, r, m))
    }

    /// Generators (as `q`-coefficient vectors of length `m`) of the degree-`v` part of
    /// `B_m = Σ_{d|m} [d]_{q^{m/d}} ψ^{m/d}(A)[q]/(q^m - 1)`.
    pub fn b_generators(&self, m: u64, v: &[u32]) -> Vec<Vec<BigInt>> {
        let mut gens = Vec::new();
        for d in divisors(m) {
            let k = (m / d) as u32;
            if v.iter().any(|e| e % k != 0) {
                continue;
            }
            let qa = q_analogue(m, m / d).expect("m/d divides m");
            for j in 0..m {
                let mut row = vec![BigInt::zero(); m as usize];
                for (mo, c) in qa.terms() {
                    row[((mo.q as u64 + j) % m) as usize] += c;
                }
                gens.push(row);
            }
        }
        gens
    }

    pub fn b_lattice(&self, m: u64, v: &[u32]) -> Lattice {
        Lattice::span(&self.b_generators(m, v), m as usize)
    }

    /// Membership in `B_m`, decided one T-multidegree at a time.
    pub fn in_b(&self, x: &QPoly, m: u64) -> bool {
        x.reduce_q(m as u32).q_slices().into_iter().all(|(t, mut cs)| {
            cs.resize(m as usize, BigInt::zero());
            self.b_lattice(m, &t).contains(&cs)
        })
    }

    /// Random element of `B_m`: a combination of `c_m(V_d(s_{m/d}(a))) q^j`.
    pub fn random_b<G: Rng + ?Sized>(&self, m: u64, rng: &mut G, bound: i64, max_deg: u32) -> QPoly {
        let mut acc = QPoly::zero(self.nvars());
        for d in divisors(m) {
            let a = self.ring.random_elem(rng, bound, max_deg);
            let j = rng.gen_range(0..m) as u32;
            let qa = lift(&q_analogue(m, m / d).expect("divisor"), self.nvars());
            let term = &(&qa * &self.adams(&a, m / d)) * &QPoly::q_pow(j, self.nvars());
            acc = &acc + &term;
        }
        acc.reduce_q(m as u32)
    }
}

/// Elements of `qW_m(A) ≅ B_m ⊆ A[q]/(q^m - 1)` and their structure maps.
#[derive(Clone, Debug)]
pub struct LambdaModel {
    lambda: LambdaStructure,
    m: u64,
}

impl LambdaModel {
    pub fn new(lambda: LambdaStructure, m: u64) -> Result<Self, QWittError> {
        if m == 0 {
            return Err(QWittError::Precondition("level must be positive".into()));
        }
        Ok(LambdaModel { lambda, m })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn lambda(&self) -> &LambdaStructure {
        &self.lambda
    }

    pub fn reduce(&self, x: &QPoly) -> QPoly {
        x.reduce_q(self.m as u32)
    }

    pub fn mul(&self, x: &QPoly, y: &QPoly) -> QPoly {
        self.reduce(&(x * y))
    }

    /// `F_{m/d}`: reduction modulo `q^d - 1`.
    pub fn frobenius(&self, x: &QPoly, d: u64) -> Result<QPoly, QWittError> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return Err(QWittError::NotDivisor { d, m: self.m });
        }
        Ok(x.reduce_q(d as u32))
    }

    /// `V_{m/d}` from level `d`: multiplication by `[m/d]_{q^d}`.
    pub fn verschiebung(&self, x: &QPoly, d: u64) -> Result<QPoly, QWittError> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return Err(QWittError::NotDivisor { d, m: self.m });
        }
        let qa = lift(&q_analogue(self.m, d)?, x.nvars());
        Ok(self.reduce(&(&qa * x)))
    }

    /// `gh_{m/d}(x) ∈ A[q]/Φ_d(q)`, recovered from `c_m ≡ ψ^d ∘ gh_{m/d} mod Φ_d`.
    pub fn ghost(&self, x: &QPoly, d: u64) -> Result<QPoly, QWittError> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return Err(QWittError::NotDivisor { d, m: self.m });
        }
        let r = x.div_rem_q(&cyclotomic_coeffs(d)).1;
        self.lambda.adams_inverse(&r, d)
    }
}

fn lift(p: &QPoly, nvars: usize) -> QPoly {
    p.map_monos(nvars, |mo| Mono { q: mo.q, t: vec![0; nvars] })
}

/// `ψ^p` is a ring map lifting Frobenius, and the `ψ` commute, on sampled elements.
pub fn check_lambda_laws<G: Rng + ?Sized>(
    lambda: &LambdaStructure,
    primes: &[u64],
    samples: usize,
    rng: &mut G,
) -> Result<(), String> {
    let r = lambda.ring();
    for _ in 0..samples {
        let x = r.random_elem(rng, 5, 3);
        let y = r.random_elem(rng, 5, 3);
        for &p in primes {
            let psi = |z: &QPoly| lambda.adams(z, p);
            if psi(&r.add(&x, &y)) != r.add(&psi(&x), &psi(&y)) || psi(&r.mul(&x, &y)) != r.mul(&psi(&x), &psi(&y)) {
                return Err(format!("psi^{p} is not a ring map at {}", r.format_elem(&x)));
            }
            if psi(&r.one()) != r.one() {
                return Err(format!("psi^{p}(1) != 1"));
            }
            let diff = r.sub(&psi(&x), &r.pow(&x, p as u32));
            if diff.div_exact_int(&BigInt::from(p)).is_err() {
                return Err(format!("psi^{p} does not lift Frobenius at {}", r.format_elem(&x)));
            }
            for &l in primes {
                if lambda.adams(&psi(&x), l) != psi(&lambda.adams(&x, l)) {
                    return Err(format!("psi^{p} and psi^{l} do not commute"));
                }
            }
        }
    }
    Ok(())
}

/// Whether `c_m(W_m(A))` spans all of `A[q]/(q^m - 1)` in multidegree 0 together with `q`.
pub fn c_map_surjective_on_constants(m: u64) -> Result<bool, QWittError> {
    let lam = LambdaStructure::integers();
    let mut gens = Vec::new();
    for d in divisors(m) {
        let w = verschiebung(lam.ring(), &lam.section(&QPoly::one(0), m / d)?, d)?;
        let c = lam.c_map(&w)?;
        for j in 0..m {
            let shifted = (&c * &QPoly::q_pow(j as u32, 0)).reduce_q(m as u32);
            let mut row = vec![BigInt::zero(); m as usize];
            for (mo, x) in shifted.terms() {
                row[mo.q as usize] += x;
            }
            gens.push(row);
        }
    }
    Ok(Lattice::span(&gens, m as usize).index() == Some(BigInt::one()))
}

/// `c_m` identifies `qW_m(Z)` with `Z[q]/(q^m - 1)`: it inverts the `q`-linear section,
/// respects sums and products, kills the ideal `V∘F - [m/d]_{q^d}` and is onto.
pub fn check_lambda_iso(m: u64, trials: usize, seed: u64) -> Result<Vec<CheckRecord>, QWittError> {
    let lam = LambdaStructure::integers();
    let r = lam.ring().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ m.rotate_left(17));
    let rec = |name: &str| CheckRecord::new(name).param("m", m).param("trials", trials);
    let reduce = |x: &QPoly| x.reduce_q(m as u32);
    let mut section_bad = None;
    let mut add_bad = None;
    let mut mul_bad = None;
    let mut ideal_bad = None;
    for _ in 0..trials {
        let coeffs: Vec<i64> = (0..m).map(|_| rng.gen_range(-50..=50)).collect();
        let f = QPoly::from_q_coeffs(&coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(), 0);
        let mut back = QPoly::zero(0);
        for (j, &a) in coeffs.iter().enumerate() {
            let c = lam.c_map(&lam.section(&QPoly::from_i64(a, 0), m)?)?;
            back = &back + &(&c * &QPoly::q_pow(j as u32, 0));
        }
        if reduce(&back) != f && section_bad.is_none() {
            section_bad = Some(format!("{coeffs:?}"));
        }
        let x = WittVector::random(&r, m, &mut rng, 6, 0);
        let y = WittVector::random(&r, m, &mut rng, 6, 0);
        let (cx, cy) = (lam.c_map(&x)?, lam.c_map(&y)?);
        if lam.c_map(&witt_add(&r, &x, &y)?)? != reduce(&(&cx + &cy)) && add_bad.is_none() {
            add_bad = Some(format!("{} and {}", x.to_text(&r), y.to_text(&r)));
        }
        if lam.c_map(&witt_mul(&r, &x, &y)?)? != reduce(&(&cx * &cy)) && mul_bad.is_none() {
            mul_bad = Some(format!("{} and {}", x.to_text(&r), y.to_text(&r)));
        }
        for d in divisors(m) {
            let k = m / d;
            let vf = verschiebung(&r, &frobenius(&r, &x, k)?, k)?;
            let want = reduce(&(&q_analogue(m, d)? * &cx));
            if lam.c_map(&vf)? != want && ideal_bad.is_none() {
                ideal_bad = Some(format!("d = {d}, w = {}", x.to_text(&r)));
            }
        }
    }
    let verdict = |name: &str, bad: Option<String>| match bad {
        None => rec(name).pass(),
        Some(w) => rec(name).fail(w),
    };
    let onto = c_map_surjective_on_constants(m)?;
    Ok(vec![
        verdict("c-section-identity", section_bad),
        verdict("c-additive", add_bad),
        verdict("c-multiplicative", mul_bad),
        verdict("c-kills-ideal", ideal_bad),
        CheckRecord::new("c-surjective").param("m", m).verdict(onto, || "index of the image is not 1".into()),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wittcore::ghost;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn zi(c: i64) -> QPoly {
        QPoly::from_i64(c, 0)
    }

    #[test]
    fn lambda_iso_checks() {
        for m in [1, 4, 6] {
            let recs = check_lambda_iso(m, 5, 1).unwrap();
            assert!(recs.iter().all(CheckRecord::passed), "{recs:?}");
        }
    }

    #[test]
    fn section_examples() {
        let z = LambdaStructure::integers();
        assert_eq!(z.section(&zi(1), 6).unwrap(), teichmuller(z.ring(), &zi(1), 6));
        let s = z.section(&zi(2), 2).unwrap();
        assert_eq!(s.coords(), &[zi(2), zi(-1)]);
        let zt = LambdaStructure::polynomial(1);
        let t = zt.ring().var(0);
        assert_eq!(zt.section(&t, 2).unwrap().coords(), &[t.clone(), QPoly::zero(1)]);
    }

    #[test]
    fn section_has_adams_ghosts() {
        // Independent oracle: the ghost map of the section, from the wittcore side.
        let zt = LambdaStructure::polynomial(2);
        let r = zt.ring().clone();
        let x = r.parse_elem("3*T1^2*T2 + -1*T2 + 2").unwrap();
        let s = zt.section(&x, 12).unwrap();
        for n in divisors(12) {
            assert_eq!(ghost(&r, &s, n).unwrap(), zt.adams(&x, n));
        }
    }

    #[test]
    fn epsilon_examples() {
        let z = LambdaStructure::integers();
        let eps = z.epsilon(&teichmuller(z.ring(), &zi(2), 2)).unwrap();
        assert_eq!(eps[&2], zi(2));
        assert_eq!(eps[&1], zi(1));
        let v = verschiebung(z.ring(), &WittVector::new(1, vec![zi(5)]).unwrap(), 6).unwrap();
        let eps = z.epsilon(&v).unwrap();
        assert_eq!(eps[&1], zi(5));
        assert!(eps.iter().filter(|(k, _)| **k != 1).all(|(_, a)| a.is_zero()));
        assert!(z.epsilon(&WittVector::zero(z.ring(), 4)).unwrap().values().all(QPoly::is_zero));
    }

    #[test]
    fn epsilon_matches_ghost_solution() {
        // Oracle: solve gh_n(w) = Σ_{d|n} d ψ^{n/d}(x_{m/d}) for the x_k directly.
        let zt = LambdaStructure::polynomial(1);
        let r = zt.ring().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [2u64, 4, 6] {
            let w = WittVector::random(&r, m, &mut rng, 3, 2);
            let eps = zt.epsilon(&w).unwrap();
            let mut solved: BTreeMap<u64, QPoly> = BTreeMap::new();
            for n in divisors(m) {
                let mut rest = ghost(&r, &w, n).unwrap();
                for d in divisors(n).into_iter().filter(|&d| d < n) {
                    let term = zt.adams(&solved[&(m / d)], n / d).scale(&BigInt::from(d));
                    rest = &rest - &term;
                }
                solved.insert(m / n, rest.div_exact_int(&BigInt::from(n)).unwrap());
            }
            assert_eq!(eps, solved);
            assert_eq!(zt.from_epsilon(m, &eps).unwrap(), w);
        }
    }

    #[test]
    fn c_map_examples() {
        let z = LambdaStructure::integers();
        let one = WittVector::new(1, vec![zi(1)]).unwrap();
        let v = verschiebung(z.ring(), &one, 2).unwrap();
        assert_eq!(z.c_map(&v).unwrap(), QPoly::parse("1 + q", &[]).unwrap());
        let c = z.c_map(&teichmuller(z.ring(), &zi(2), 2)).unwrap();
        assert_eq!(c, QPoly::parse("3 + q", &[]).unwrap());
        let model = LambdaModel::new(z.clone(), 2).unwrap();
        assert_eq!(model.ghost(&c, 1).unwrap(), zi(4));
        assert_eq!(model.ghost(&c, 2).unwrap(), zi(2));
    }

    #[test]
    fn b_lattice_examples() {
        let zt = LambdaStructure::polynomial(1);
        let l1 = zt.b_lattice(2, &[1]);
        assert_eq!(l1.rank(), 1);
        assert!(l1.contains(&[BigInt::from(1), BigInt::from(1)]));
        assert!(!l1.contains(&[BigInt::from(1), BigInt::from(0)]));
        assert_eq!(zt.b_lattice(2, &[2]).index(), Some(BigInt::one()));
        let z = LambdaStructure::integers();
        assert_eq!(z.b_lattice(6, &[]).index(), Some(BigInt::one()));
        assert!(c_map_surjective_on_constants(12).unwrap());
    }

    #[test]
    fn lambda_laws_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        check_lambda_laws(&LambdaStructure::polynomial(2), &[2, 3, 5], 10, &mut rng).unwrap();
    }
}
