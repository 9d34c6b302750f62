use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use super::poly::{Mono, QPoly};
use super::RingError;

/// Base of a coefficient ring: the integers or `Z/N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    Integers,
    ZMod(BigInt),
}

/// A commutative unital coefficient ring `B[T_1..T_n]`, optionally truncated by
/// `x^K = 0` in the single-variable case.
///
/// Elements are [`QPoly`] values without `q`; every operation returns a reduced element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoeffRing {
    base: Base,
    vars: Vec<String>,
    nil_degree: Option<u32>,
}

impl CoeffRing {
    pub fn integers() -> Self {
        CoeffRing { base: Base::Integers, vars: vec![], nil_degree: None }
    }

    pub fn zmod(n: u64) -> Self {
        assert!(n >= 2, "zmod needs N >= 2");
        CoeffRing { base: Base::ZMod(BigInt::from(n)), vars: vec![], nil_degree: None }
    }

    pub fn polynomial(base: Base, vars: Vec<String>) -> Result<Self, RingError> {
        check_vars(&vars)?;
        Ok(CoeffRing { base, vars, nil_degree: None })
    }

    /// `(Z/N)[x]/(x^k)`.
    pub fn truncated(n: u64, var: &str, k: u32) -> Result<Self, RingError> {
        if n < 2 || k == 0 {
            return Err(RingError::Parse("truncated ring needs N >= 2 and K >= 1".into()));
        }
        check_vars(&[var.to_string()])?;
        Ok(CoeffRing { base: Base::ZMod(BigInt::from(n)), vars: vec![var.to_string()], nil_degree: Some(k) })
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn nil_degree(&self) -> Option<u32> {
        self.nil_degree
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        match &self.base {
            Base::Integers => None,
            Base::ZMod(n) => Some(n),
        }
    }

    /// `N` as a machine integer for finite rings.
    pub fn modulus_u64(&self) -> Option<u64> {
        self.modulus().and_then(|n| n.to_u64())
    }

    pub fn is_finite(&self) -> bool {
        self.modulus().is_some() && (self.vars.is_empty() || self.nil_degree.is_some())
    }

    /// True when no nonzero integer is a zero divisor on the ring.
    pub fn is_torsion_free(&self) -> bool {
        matches!(self.base, Base::Integers)
    }

    /// Number of elements of a finite ring.
    pub fn cardinality(&self) -> Option<BigInt> {
        if !self.is_finite() {
            return None;
        }
        let n = self.modulus()?.clone();
        Some(num_traits::pow(n, self.additive_rank()))
    }

    /// Rank of the additive basis `1, x, .., x^{K-1}` of a finite ring.
    pub fn additive_rank(&self) -> usize {
        match self.nil_degree {
            Some(k) => k as usize,
            None => 1,
        }
    }

    pub fn zero(&self) -> QPoly {
        QPoly::zero(self.nvars())
    }

    pub fn one(&self) -> QPoly {
        self.reduce(&QPoly::one(self.nvars()))
    }

    pub fn from_int(&self, c: i64) -> QPoly {
        self.reduce(&QPoly::from_i64(c, self.nvars()))
    }

    pub fn from_big(&self, c: BigInt) -> QPoly {
        self.reduce(&QPoly::constant(c, self.nvars()))
    }

    pub fn var(&self, i: usize) -> QPoly {
        self.reduce(&QPoly::var(i, self.nvars()))
    }

    /// Canonical form: coefficients in `[0, N)`, truncated monomials dropped.
    pub fn reduce(&self, p: &QPoly) -> QPoly {
        let truncated = match self.nil_degree {
            Some(k) => p.filter_terms(|m| m.t_degree() < k),
            None => p.clone(),
        };
        match &self.base {
            Base::Integers => truncated,
            Base::ZMod(n) => truncated.map_coeffs(|c| c.mod_floor(n)),
        }
    }

    pub fn reduce_int(&self, c: &BigInt) -> BigInt {
        match &self.base {
            Base::Integers => c.clone(),
            Base::ZMod(n) => c.mod_floor(n),
        }
    }

    pub fn add(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.reduce(&(a + b))
    }

    pub fn sub(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.reduce(&(a - b))
    }

    pub fn neg(&self, a: &QPoly) -> QPoly {
        self.reduce(&(-a))
    }

    pub fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        match self.nil_degree {
            Some(k) => {
                let mut out = QPoly::zero(self.nvars());
                for (ma, ca) in a.terms() {
                    for (mb, cb) in b.terms() {
                        if ma.t_degree() + mb.t_degree() < k {
                            let t: Vec<u32> = ma.t.iter().zip(&mb.t).map(|(x, y)| x + y).collect();
                            out.add_term(Mono { q: ma.q + mb.q, t }, ca * cb);
                        }
                    }
                }
                self.reduce(&out)
            }
            None => self.reduce(&(a * b)),
        }
    }

    pub fn scale(&self, a: &QPoly, c: &BigInt) -> QPoly {
        self.reduce(&a.scale(c))
    }

    pub fn pow(&self, a: &QPoly, e: u32) -> QPoly {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn is_element(&self, a: &QPoly) -> bool {
        a.nvars() == self.nvars() && !a.has_q() && self.reduce(a) == *a
    }

    pub fn parse_elem(&self, s: &str) -> Result<QPoly, RingError> {
        let p = QPoly::parse(s, &self.vars)?;
        if p.has_q() {
            return Err(RingError::Parse(format!("coefficient {s:?} may not involve q")));
        }
        Ok(self.reduce(&p))
    }

    pub fn format_elem(&self, a: &QPoly) -> String {
        a.to_text(&self.vars)
    }

    /// Random element with coefficients in `[-bound, bound]` (or uniform mod N) and
    /// T-degree at most `max_deg`.
    pub fn random_elem<G: Rng + ?Sized>(&self, rng: &mut G, bound: i64, max_deg: u32) -> QPoly {
        let mut p = QPoly::zero(self.nvars());
        let max_deg = match self.nil_degree {
            Some(k) => max_deg.min(k - 1),
            None => max_deg,
        };
        let monos = monomials_up_to(self.nvars(), max_deg);
        for t in monos {
            let c = match self.modulus_u64() {
                Some(n) => BigInt::from(rng.gen_range(0..n)),
                None => BigInt::from(rng.gen_range(-bound..=bound)),
            };
            p.add_term(Mono { q: 0, t }, c);
        }
        self.reduce(&p)
    }

    /// All elements of a finite ring in a fixed order.
    pub fn elements(&self) -> Result<Vec<QPoly>, RingError> {
        let n = self.modulus_u64().filter(|_| self.is_finite()).ok_or(RingError::NotFinite(self.to_string()))?;
        let rank = self.additive_rank();
        let total = (n as usize).pow(rank as u32);
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut p = QPoly::zero(self.nvars());
            let mut r = idx;
            for k in 0..rank {
                let c = (r % n as usize) as i64;
                r /= n as usize;
                let t = if self.nvars() == 0 { vec![] } else { vec![k as u32] };
                p.add_term(Mono { q: 0, t }, BigInt::from(c));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Coefficient vector `(a_0, .., a_{K-1})` of an element of a finite truncated ring,
    /// or `(a_0)` for `Z/N` and `Z`.
    pub fn additive_coords(&self, a: &QPoly) -> Vec<BigInt> {
        let rank = self.additive_rank();
        let mut out = vec![BigInt::zero(); rank];
        for (m, c) in a.terms() {
            let k = m.t.first().copied().unwrap_or(0) as usize;
            if k < rank {
                out[k] = c.clone();
            }
        }
        out
    }

    pub fn from_additive_coords(&self, cs: &[BigInt]) -> QPoly {
        let mut p = QPoly::zero(self.nvars());
        for (k, c) in cs.iter().enumerate() {
            let t = if self.nvars() == 0 { vec![] } else { vec![k as u32] };
            p.add_term(Mono { q: 0, t }, c.clone());
        }
        self.reduce(&p)
    }
}

fn check_vars(vars: &[String]) -> Result<(), RingError> {
    for (i, v) in vars.iter().enumerate() {
        let ok =
            v.chars().next().is_some_and(|c| c.is_alphabetic()) && v.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !ok || v == "q" {
            return Err(RingError::Parse(format!("invalid variable name {v:?}")));
        }
        if vars[..i].contains(v) {
            return Err(RingError::Parse(format!("duplicate variable name {v:?}")));
        }
    }
    Ok(())
}

/// All exponent tuples in `n` variables of total degree `<= d`, in canonical order.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for deg in 0..=d {
        let mut cur = vec![0u32; n];
        fill_degree(&mut cur, 0, deg, &mut out);
    }
    if n == 0 {
        out.truncate(1);
    }
    out
}

fn fill_degree(cur: &mut Vec<u32>, i: usize, rest: u32, out: &mut Vec<Vec<u32>>) {
    if i + 1 >= cur.len() {
        if let Some(last) = cur.last_mut() {
            *last = rest;
            out.push(cur.clone());
        } else if rest == 0 {
            out.push(vec![]);
        }
        return;
    }
    for a in 0..=rest {
        cur[i] = a;
        fill_degree(cur, i + 1, rest - a, out);
    }
    cur[i] = 0;
}

impl FromStr for CoeffRing {
    type Err = RingError;

    /// Grammar: `z`, `zmod:N`, `fP`, `poly:z:T1[,T2..]`, `poly:zmod:N:T1[,..]`,
    /// and `poly:zmod:N:x/x^K` for a truncated single-variable ring.
    fn from_str(s: &str) -> Result<Self, RingError> {
        let bad = || RingError::Parse(format!("unrecognised ring spec {s:?}"));
        let parse_n = |t: &str| -> Result<u64, RingError> {
            let n: u64 = t.parse().map_err(|_| bad())?;
            if n < 2 {
                return Err(RingError::Parse(format!("zmod modulus must be >= 2 in {s:?}")));
            }
            Ok(n)
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["z"] => Ok(CoeffRing::integers()),
            ["zmod", n] => Ok(CoeffRing::zmod(parse_n(n)?)),
            [f] if f.starts_with('f') && f.len() > 1 => Ok(CoeffRing::zmod(parse_n(&f[1..])?)),
            ["poly", "z", vars] => CoeffRing::polynomial(Base::Integers, split_vars(vars)),
            ["poly", "zmod", n, vars] => {
                let n = parse_n(n)?;
                if let Some((v, pow)) = vars.split_once('/') {
                    let (pv, k) = pow.split_once('^').ok_or_else(bad)?;
                    if pv != v {
                        return Err(bad());
                    }
                    let k: u32 = k.parse().map_err(|_| bad())?;
                    CoeffRing::truncated(n, v, k)
                } else {
                    CoeffRing::polynomial(Base::ZMod(BigInt::from(n)), split_vars(vars))
                }
            }
            _ => Err(bad()),
        }
    }
}

fn split_vars(s: &str) -> Vec<String> {
    s.split(',').map(|v| v.trim().to_string()).collect()
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.base, self.vars.is_empty(), self.nil_degree) {
            (Base::Integers, true, _) => write!(f, "z"),
            (Base::ZMod(n), true, _) => write!(f, "zmod:{n}"),
            (Base::Integers, false, _) => write!(f, "poly:z:{}", self.vars.join(",")),
            (Base::ZMod(n), false, None) => write!(f, "poly:zmod:{n}:{}", self.vars.join(",")),
            (Base::ZMod(n), false, Some(k)) => write!(f, "poly:zmod:{n}:{0}/{0}^{k}", self.vars[0]),
        }
    }
}

/// Largest `e` with `p^e | n`, for `n != 0`.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut e = 0;
    if n.is_zero() {
        return u32::MAX;
    }
    while (&n % &p).is_zero() {
        n /= &p;
        e += 1;
    }
    e
}

/// `true` iff `n` is `p^k` for a prime `p` and `k >= 1`; returns `(p, k)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let f = factorize(n);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

/// Prime factorisation by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(m: u64) -> Vec<u64> {
    (1..=m).filter(|d| m.is_multiple_of(*d)).collect()
}

pub fn prime_factors(m: u64) -> Vec<u64> {
    factorize(m).into_iter().map(|(p, _)| p).collect()
}

pub fn euler_phi(m: u64) -> u64 {
    factorize(m).into_iter().fold(m, |acc, (p, _)| acc / p * (p - 1))
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_every_grammar_form() {
        for s in ["z", "zmod:4", "poly:z:T1,T2", "poly:zmod:3:T", "poly:zmod:2:x/x^2"] {
            let r: CoeffRing = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("f3".parse::<CoeffRing>().unwrap(), CoeffRing::zmod(3));
        for s in ["zmod:1", "poly:z:T,T", "poly:z:q", "poly:zmod:2:x/y^2", "ring", "zmod:x"] {
            assert!(s.parse::<CoeffRing>().is_err(), "{s}");
        }
    }

    #[test]
    fn truncated_ring_arithmetic() {
        let r: CoeffRing = "poly:zmod:2:x/x^2".parse().unwrap();
        let x = r.var(0);
        assert!(r.mul(&x, &x).is_zero());
        let one_plus_x = r.add(&r.one(), &x);
        assert_eq!(r.mul(&one_plus_x, &one_plus_x), r.one());
        assert_eq!(r.elements().unwrap().len(), 4);
        assert_eq!(r.cardinality(), Some(BigInt::from(4)));
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rings: Vec<CoeffRing> = ["z", "zmod:4", "zmod:3", "poly:z:T", "poly:zmod:5:T1,T2", "poly:zmod:2:x/x^2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        for r in &rings {
            for _ in 0..100 {
                let a = r.random_elem(&mut rng, 9, 2);
                let b = r.random_elem(&mut rng, 9, 2);
                let c = r.random_elem(&mut rng, 9, 2);
                assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)), "{r}");
                assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)), "{r}");
                assert_eq!(r.mul(&a, &b), r.mul(&b, &a), "{r}");
                assert_eq!(r.add(&a, &b), r.add(&b, &a), "{r}");
            }
        }
    }

    #[test]
    fn number_theory_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(6), None);
        assert_eq!(valuation(&BigInt::from(24), 2), 3);
        assert_eq!(monomials_up_to(2, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    }
}
