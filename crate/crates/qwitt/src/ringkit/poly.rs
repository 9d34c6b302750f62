use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::RingError;

/// Exponent key of a term: a power of `q` and a tuple of `T`-exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub q: u32,
    pub t: Vec<u32>,
}

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono { q: 0, t: vec![0; nvars] }
    }

    pub fn t_degree(&self) -> u32 {
        self.t.iter().sum()
    }

    fn times(&self, other: &Mono) -> Mono {
        Mono { q: self.q + other.q, t: self.t.iter().zip(&other.t).map(|(a, b)| a + b).collect() }
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.t_degree().cmp(&other.t_degree()).then_with(|| self.t.cmp(&other.t)).then_with(|| self.q.cmp(&other.q))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `q` and `T_1..T_n` with integer coefficients.
///
/// Coefficient reduction (mod N, truncation) is the job of [`super::CoeffRing`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly {
    nvars: usize,
    terms: BTreeMap<Mono, BigInt>,
}

impl QPoly {
    pub fn zero(nvars: usize) -> Self {
        QPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(BigInt::one(), nvars)
    }

    pub fn constant(c: BigInt, nvars: usize) -> Self {
        Self::monomial(c, 0, &vec![0; nvars])
    }

    pub fn from_i64(c: i64, nvars: usize) -> Self {
        Self::constant(BigInt::from(c), nvars)
    }

    pub fn monomial(c: BigInt, q: u32, t: &[u32]) -> Self {
        let mut p = QPoly::zero(t.len());
        p.add_term(Mono { q, t: t.to_vec() }, c);
        p
    }

    /// `q^k` in a ring with `nvars` T-variables.
    pub fn q_pow(k: u32, nvars: usize) -> Self {
        Self::monomial(BigInt::one(), k, &vec![0; nvars])
    }

    /// The variable `T_{i+1}` (zero-based index `i`).
    pub fn var(i: usize, nvars: usize) -> Self {
        let mut t = vec![0; nvars];
        t[i] = 1;
        Self::monomial(BigInt::one(), 0, &t)
    }

    /// Univariate polynomial in `q` from ascending coefficients.
    pub fn from_q_coeffs(coeffs: &[BigInt], nvars: usize) -> Self {
        let mut p = QPoly::zero(nvars);
        for (j, c) in coeffs.iter().enumerate() {
            p.add_term(Mono { q: j as u32, t: vec![0; nvars] }, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Constant term (the coefficient of `q^0 T^0`).
    pub fn constant_term(&self) -> BigInt {
        self.coeff(&Mono::one(self.nvars))
    }

    pub fn add_term(&mut self, m: Mono, c: BigInt) {
        debug_assert_eq!(m.t.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> QPoly {
        if c.is_zero() {
            return QPoly::zero(self.nvars);
        }
        QPoly { nvars: self.nvars, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> QPoly {
        let mut acc = QPoly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coeffs(&self, f: impl Fn(&BigInt) -> BigInt) -> QPoly {
        let mut out = QPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Mono) -> bool) -> QPoly {
        QPoly {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Rewrites exponents with `f`, collecting coincident terms.
    pub fn map_monos(&self, nvars: usize, f: impl Fn(&Mono) -> Mono) -> QPoly {
        let mut out = QPoly::zero(nvars);
        for (m, c) in &self.terms {
            out.add_term(f(m), c.clone());
        }
        out
    }

    /// Reduces `q`-exponents modulo `m`, i.e. passes to `[q]/(q^m - 1)`.
    pub fn reduce_q(&self, m: u32) -> QPoly {
        self.map_monos(self.nvars, |mo| Mono { q: mo.q % m, t: mo.t.clone() })
    }

    pub fn max_q_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.q).max().unwrap_or(0)
    }

    pub fn has_q(&self) -> bool {
        self.terms.keys().any(|m| m.q > 0)
    }

    /// Largest total T-degree of a term (0 for the zero polynomial).
    pub fn t_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.t_degree()).max().unwrap_or(0)
    }

    /// Substitutes `T_i -> q T_i`.
    pub fn gamma(&self, i: usize) -> Result<QPoly, RingError> {
        if i >= self.nvars {
            return Err(RingError::IndexOutOfRange { index: i + 1, len: self.nvars });
        }
        Ok(self.map_monos(self.nvars, |mo| Mono { q: mo.q + mo.t[i], t: mo.t.clone() }))
    }

    /// Exact division by `T_i`.
    pub fn div_var(&self, i: usize) -> Result<QPoly, RingError> {
        let mut out = QPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.t[i] == 0 {
                return Err(RingError::InexactDivision(format!("term not divisible by T{}", i + 1)));
            }
            let mut t = m.t.clone();
            t[i] -= 1;
            out.add_term(Mono { q: m.q, t }, c.clone());
        }
        Ok(out)
    }

    /// Splits into univariate `q`-polynomials indexed by T-exponent.
    pub fn q_slices(&self) -> BTreeMap<Vec<u32>, Vec<BigInt>> {
        let mut out: BTreeMap<Vec<u32>, Vec<BigInt>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = out.entry(m.t.clone()).or_default();
            let q = m.q as usize;
            if v.len() <= q {
                v.resize(q + 1, BigInt::zero());
            }
            v[q] = c.clone();
        }
        out
    }

    fn from_q_slices(slices: &BTreeMap<Vec<u32>, Vec<BigInt>>, nvars: usize) -> QPoly {
        let mut out = QPoly::zero(nvars);
        for (t, cs) in slices {
            for (j, c) in cs.iter().enumerate() {
                out.add_term(Mono { q: j as u32, t: t.clone() }, c.clone());
            }
        }
        out
    }

    /// Division with remainder by a monic polynomial in `q` (ascending coefficients),
    /// carried out separately for every T-monomial.
    pub fn div_rem_q(&self, divisor: &[BigInt]) -> (QPoly, QPoly) {
        let mut quo = BTreeMap::new();
        let mut rem = BTreeMap::new();
        for (t, cs) in self.q_slices() {
            let (qq, rr) = div_rem_monic(&cs, divisor);
            quo.insert(t.clone(), qq);
            rem.insert(t, rr);
        }
        (QPoly::from_q_slices(&quo, self.nvars), QPoly::from_q_slices(&rem, self.nvars))
    }

    /// Exact division by a monic `q`-polynomial; errors on a nonzero remainder.
    pub fn div_exact_q(&self, divisor: &[BigInt]) -> Result<QPoly, RingError> {
        let (q, r) = self.div_rem_q(divisor);
        if !r.is_zero() {
            return Err(RingError::InexactDivision("nonzero remainder in q-division".into()));
        }
        Ok(q)
    }

    /// Exact division of every coefficient by an integer.
    pub fn div_exact_int(&self, d: &BigInt) -> Result<QPoly, RingError> {
        let mut out = QPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let (qq, r) = c.div_rem(d);
            if !r.is_zero() {
                return Err(RingError::InexactDivision(format!("coefficient {c} not divisible by {d}")));
            }
            out.add_term(m.clone(), qq);
        }
        Ok(out)
    }

    /// Evaluates at `q = 1`.
    pub fn at_q_one(&self) -> QPoly {
        self.map_monos(self.nvars, |mo| Mono { q: 0, t: mo.t.clone() })
    }

    /// Renders in the text format `c*q^a*T1^b*...` joined by ` + `.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            let _ = write!(out, "{c}");
            if m.q > 0 {
                out.push_str("*q");
                if m.q > 1 {
                    let _ = write!(out, "^{}", m.q);
                }
            }
            for (i, e) in m.t.iter().enumerate() {
                if *e > 0 {
                    let _ = write!(out, "*{}", names.get(i).map(String::as_str).unwrap_or("?"));
                    if *e > 1 {
                        let _ = write!(out, "^{e}");
                    }
                }
            }
        }
        out
    }

    /// Parses a sum of products of integers, `q`, and the named variables.
    /// Accepts `+`/`-` between terms and `*`/`^` inside them.
    pub fn parse(s: &str, names: &[String]) -> Result<QPoly, RingError> {
        let nvars = names.len();
        let err = |msg: &str| RingError::Parse(format!("{msg} in {s:?}"));
        let src: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(err("empty polynomial"));
        }
        let mut out = QPoly::zero(nvars);
        let mut pos = 0;
        while pos < src.len() {
            let mut sign = BigInt::one();
            while pos < src.len() && (src[pos] == '+' || src[pos] == '-') {
                if src[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
            }
            let mut coeff = sign;
            let mut mono = Mono::one(nvars);
            let mut first = true;
            loop {
                if !first {
                    if pos < src.len() && src[pos] == '*' {
                        pos += 1;
                    } else {
                        break;
                    }
                }
                first = false;
                if pos >= src.len() {
                    return Err(err("dangling operator"));
                }
                if src[pos].is_ascii_digit() {
                    let start = pos;
                    while pos < src.len() && src[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let lit: String = src[start..pos].iter().collect();
                    let v: BigInt = lit.parse().map_err(|_| err("bad integer"))?;
                    let e = parse_exponent(&src, &mut pos).map_err(&err)?;
                    coeff *= num_traits::pow(v, e as usize);
                } else if src[pos].is_alphabetic() {
                    let start = pos;
                    while pos < src.len() && (src[pos].is_alphanumeric() || src[pos] == '_') {
                        pos += 1;
                    }
                    let ident: String = src[start..pos].iter().collect();
                    let e = parse_exponent(&src, &mut pos).map_err(&err)?;
                    if ident == "q" {
                        mono.q += e;
                    } else if let Some(i) = names.iter().position(|n| *n == ident) {
                        mono.t[i] += e;
                    } else {
                        return Err(err(&format!("unknown variable {ident}")));
                    }
                } else {
                    return Err(err(&format!("unexpected character {:?}", src[pos])));
                }
            }
            out.add_term(mono, coeff);
            if pos < src.len() && src[pos] != '+' && src[pos] != '-' {
                return Err(err(&format!("unexpected character {:?}", src[pos])));
            }
        }
        Ok(out)
    }
}

fn parse_exponent(src: &[char], pos: &mut usize) -> Result<u32, &'static str> {
    if *pos < src.len() && src[*pos] == '^' {
        *pos += 1;
        let start = *pos;
        while *pos < src.len() && src[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Err("missing exponent");
        }
        let lit: String = src[start..*pos].iter().collect();
        lit.parse().map_err(|_| "exponent too large")
    } else {
        Ok(1)
    }
}

/// Long division of ascending coefficient vectors by a monic divisor.
pub fn div_rem_monic(a: &[BigInt], divisor: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = divisor.len() - 1;
    debug_assert!(divisor[db].is_one());
    let mut rem: Vec<BigInt> = a.to_vec();
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quo = vec![BigInt::zero(); rem.len() - db];
    for k in (db..rem.len()).rev() {
        let c = std::mem::take(&mut rem[k]);
        if c.is_zero() {
            continue;
        }
        for (j, dj) in divisor.iter().enumerate().take(db) {
            rem[k - db + j] -= &c * dj;
        }
        quo[k - db] = c;
    }
    rem.truncate(db);
    (quo, rem)
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        self.map_coeffs(|c| -c)
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        let mut out = QPoly::zero(self.nvars.max(rhs.nvars));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.times(mb), ca * cb);
            }
        }
        out
    }
}

impl std::fmt::Display for QPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("T{i}")).collect();
        f.write_str(&self.to_text(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("T{i}")).collect()
    }

    #[test]
    fn text_round_trip() {
        let nm = names(2);
        let p = QPoly::parse("3*q^2*T1^2 - T2 + 5 - q", &nm).unwrap();
        let s = p.to_text(&nm);
        assert_eq!(s, "5 + -1*q + -1*T2 + 3*q^2*T1^2");
        assert_eq!(QPoly::parse(&s, &nm).unwrap(), p);
    }

    #[test]
    fn canonical_order_is_degree_then_lex_then_q() {
        let nm = names(2);
        let p = QPoly::parse("T1 + T2 + q*T2 + 1", &nm).unwrap();
        assert_eq!(p.to_text(&nm), "1 + 1*T2 + 1*q*T2 + 1*T1");
    }

    #[test]
    fn gamma_substitutes() {
        let nm = names(2);
        let p = QPoly::parse("T1^3", &nm).unwrap();
        assert_eq!(p.gamma(0).unwrap(), QPoly::parse("q^3*T1^3", &nm).unwrap());
        let t2 = QPoly::var(1, 2);
        assert_eq!(t2.gamma(0).unwrap(), t2);
        assert!(p.gamma(2).is_err());
    }

    #[test]
    fn monic_division() {
        // (q^3 - 1) / (q - 1) = 1 + q + q^2
        let a: Vec<BigInt> = [-1, 0, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
        let d: Vec<BigInt> = [-1, 1].iter().map(|&x| BigInt::from(x)).collect();
        let (q, r) = div_rem_monic(&a, &d);
        assert_eq!(q, vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]);
        assert!(r.iter().all(Zero::is_zero));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(QPoly::parse("2*", &names(1)).is_err());
        assert!(QPoly::parse("X", &names(1)).is_err());
        assert!(QPoly::parse("", &names(1)).is_err());
    }
}
