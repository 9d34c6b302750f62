use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::ringkit::{divisors, CoeffRing, QPoly};

use super::table::{eval_at, eval_split, frobenius_table, witt_table, MonomialCache};
use super::WittError;

/// The divisors of `m`, a truncation set closed under divisors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncationSet {
    m: u64,
    divisors: Vec<u64>,
}

impl TruncationSet {
    pub fn new(m: u64) -> Result<Self, WittError> {
        if m == 0 {
            return Err(WittError::Precondition("truncation level must be positive".into()));
        }
        Ok(TruncationSet { m, divisors: divisors(m) })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn index_of(&self, d: u64) -> Option<usize> {
        self.divisors.binary_search(&d).ok()
    }
}

/// Element of `W_m(R)`: one coordinate per divisor of `m`, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittVector {
    m: u64,
    coords: Vec<QPoly>,
}

impl WittVector {
    pub fn new(m: u64, coords: Vec<QPoly>) -> Result<Self, WittError> {
        let n = divisors(m).len();
        if coords.len() != n {
            return Err(WittError::Mismatch(format!("W_{m} needs {n} coordinates, got {}", coords.len())));
        }
        Ok(WittVector { m, coords })
    }

    pub fn zero(ring: &CoeffRing, m: u64) -> Self {
        WittVector { m, coords: vec![ring.zero(); divisors(m).len()] }
    }

    pub fn one(ring: &CoeffRing, m: u64) -> Self {
        teichmuller(ring, &ring.one(), m)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn coords(&self) -> &[QPoly] {
        &self.coords
    }

    /// Coordinate at divisor `d`.
    pub fn coord(&self, d: u64) -> Option<&QPoly> {
        divisors(self.m).binary_search(&d).ok().map(|k| &self.coords[k])
    }

    pub fn is_element_of(&self, ring: &CoeffRing) -> bool {
        self.coords.iter().all(|c| ring.is_element(c))
    }

    /// `(c_1, c_2, ..)` in ascending divisor order.
    pub fn to_text(&self, ring: &CoeffRing) -> String {
        let parts: Vec<String> = self.coords.iter().map(|c| ring.format_elem(c)).collect();
        format!("({})", parts.join(", "))
    }

    pub fn parse(s: &str, ring: &CoeffRing, m: u64) -> Result<Self, WittError> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| WittError::Parse(format!("Witt vector must be parenthesised: {s:?}")))?;
        let coords =
            inner.split(',').map(|c| ring.parse_elem(c).map_err(WittError::from)).collect::<Result<Vec<_>, _>>()?;
        WittVector::new(m, coords)
    }

    /// Uniformly random coordinates (bounded for infinite rings).
    pub fn random<G: rand::Rng + ?Sized>(ring: &CoeffRing, m: u64, rng: &mut G, bound: i64, max_deg: u32) -> Self {
        let coords = divisors(m).iter().map(|_| ring.random_elem(rng, bound, max_deg)).collect();
        WittVector { m, coords }
    }

    /// All elements of `W_m(R)` for a finite ring, in a fixed order.
    pub fn enumerate(ring: &CoeffRing, m: u64) -> Result<Vec<WittVector>, WittError> {
        let elems = ring.elements()?;
        let r = divisors(m).len();
        let total = elems.len().pow(r as u32);
        let mut out = Vec::with_capacity(total);
        for mut idx in 0..total {
            let mut coords = Vec::with_capacity(r);
            for _ in 0..r {
                coords.push(elems[idx % elems.len()].clone());
                idx /= elems.len();
            }
            out.push(WittVector { m, coords });
        }
        Ok(out)
    }
}

fn same_level(x: &WittVector, y: &WittVector) -> Result<(), WittError> {
    if x.m != y.m {
        return Err(WittError::Mismatch(format!("truncation levels {} and {}", x.m, y.m)));
    }
    Ok(())
}

fn check_ring(ring: &CoeffRing, xs: &[&WittVector]) -> Result<(), WittError> {
    for x in xs {
        if !x.is_element_of(ring) {
            return Err(WittError::Mismatch(format!("coordinates are not reduced elements of {ring}")));
        }
    }
    Ok(())
}

fn binary_op(
    ring: &CoeffRing,
    x: &WittVector,
    y: &WittVector,
    pick: impl Fn(&super::WittTable, usize) -> QPoly,
) -> Result<WittVector, WittError> {
    same_level(x, y)?;
    check_ring(ring, &[x, y])?;
    let table = witt_table(x.m)?;
    let split = x.coords.len();
    let mut xs = MonomialCache::new(ring, &x.coords);
    let mut ys = MonomialCache::new(ring, &y.coords);
    let coords = (0..split)
        .map(|k| {
            let p = pick(&table, k);
            eval_split(ring, &p, split, &mut xs, &mut ys)
        })
        .collect();
    Ok(WittVector { m: x.m, coords })
}

pub fn witt_add(ring: &CoeffRing, x: &WittVector, y: &WittVector) -> Result<WittVector, WittError> {
    binary_op(ring, x, y, |t, k| t.add_poly(k).clone())
}

pub fn witt_mul(ring: &CoeffRing, x: &WittVector, y: &WittVector) -> Result<WittVector, WittError> {
    binary_op(ring, x, y, |t, k| t.mul_poly(k).clone())
}

pub fn witt_neg(ring: &CoeffRing, x: &WittVector) -> Result<WittVector, WittError> {
    check_ring(ring, &[x])?;
    let table = witt_table(x.m)?;
    let r = x.coords.len();
    // The negation polynomials only involve the X-variables.
    let mut padded = x.coords.clone();
    padded.extend(std::iter::repeat_n(ring.zero(), r));
    let mut cache = MonomialCache::new(ring, &padded);
    let coords = (0..r).map(|k| eval_at(ring, table.neg_poly(k), &mut cache)).collect();
    Ok(WittVector { m: x.m, coords })
}

pub fn witt_sub(ring: &CoeffRing, x: &WittVector, y: &WittVector) -> Result<WittVector, WittError> {
    witt_add(ring, x, &witt_neg(ring, y)?)
}

/// `n * x` by double-and-add.
pub fn witt_scale(ring: &CoeffRing, x: &WittVector, n: u64) -> Result<WittVector, WittError> {
    let mut acc = WittVector::zero(ring, x.m);
    let mut base = x.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc = witt_add(ring, &acc, &base)?;
        }
        n >>= 1;
        if n > 0 {
            base = witt_add(ring, &base, &base)?;
        }
    }
    Ok(acc)
}

/// `gh_n(x) = Σ_{d|n} d x_d^{n/d}`.
pub fn ghost(ring: &CoeffRing, x: &WittVector, n: u64) -> Result<QPoly, WittError> {
    if n == 0 || !x.m.is_multiple_of(n) {
        return Err(WittError::NotDivisor { d: n, m: x.m });
    }
    let divs = divisors(x.m);
    let mut acc = ring.zero();
    for (k, &d) in divs.iter().enumerate() {
        if n.is_multiple_of(d) {
            let term = ring.scale(&ring.pow(&x.coords[k], (n / d) as u32), &BigInt::from(d));
            acc = ring.add(&acc, &term);
        }
    }
    Ok(acc)
}

/// All ghost components `(gh_n(x))_{n | m}`.
pub fn ghost_vector(ring: &CoeffRing, x: &WittVector) -> Vec<QPoly> {
    divisors(x.m).into_iter().map(|n| ghost(ring, x, n).expect("n divides m")).collect()
}

/// `F_k : W_m(R) -> W_{m/k}(R)` via universal Frobenius polynomials.
pub fn frobenius(ring: &CoeffRing, x: &WittVector, k: u64) -> Result<WittVector, WittError> {
    if k == 0 || !x.m.is_multiple_of(k) {
        return Err(WittError::NotDivisor { d: k, m: x.m });
    }
    check_ring(ring, &[x])?;
    let table = frobenius_table(x.m, k)?;
    let mut cache = MonomialCache::new(ring, &x.coords);
    let coords = table.polys().iter().map(|p| eval_at(ring, p, &mut cache)).collect();
    Ok(WittVector { m: x.m / k, coords })
}

/// `V_k : W_{m/k}(R) -> W_m(R)`, `(V_k x)_e = x_{e/k}` if `k | e`, else 0.
pub fn verschiebung(ring: &CoeffRing, x: &WittVector, k: u64) -> Result<WittVector, WittError> {
    if k == 0 {
        return Err(WittError::Precondition("Verschiebung index must be positive".into()));
    }
    let m = x.m * k;
    let coords = divisors(m)
        .into_iter()
        .map(|e| if e % k == 0 { x.coord(e / k).cloned().expect("e/k divides m/k") } else { ring.zero() })
        .collect();
    Ok(WittVector { m, coords })
}

/// `τ_m(r) = (r, 0, .., 0)`.
pub fn teichmuller(ring: &CoeffRing, r: &QPoly, m: u64) -> WittVector {
    let mut coords = vec![ring.zero(); divisors(m).len()];
    coords[0] = ring.reduce(r);
    WittVector { m, coords }
}

/// Restriction to the divisors of `d`.
pub fn restriction(x: &WittVector, d: u64) -> Result<WittVector, WittError> {
    if d == 0 || !x.m.is_multiple_of(d) {
        return Err(WittError::NotDivisor { d, m: x.m });
    }
    let coords = divisors(d).into_iter().map(|e| x.coord(e).cloned().expect("e divides m")).collect();
    Ok(WittVector { m: d, coords })
}

/// The coefficients `c_d` with `x = Σ_{d|m} V_{m/d}(τ_d(c_d))`, i.e. `c_d = x_{m/d}`.
pub fn witt_decompose(x: &WittVector) -> BTreeMap<u64, QPoly> {
    divisors(x.m).into_iter().map(|d| (d, x.coord(x.m / d).cloned().expect("m/d divides m"))).collect()
}

/// Rebuilds `Σ_{d|m} V_{m/d}(τ_d(c_d))` with Witt addition.
pub fn witt_recompose(ring: &CoeffRing, m: u64, parts: &BTreeMap<u64, QPoly>) -> Result<WittVector, WittError> {
    let mut acc = WittVector::zero(ring, m);
    for (&d, c) in parts {
        let piece = verschiebung(ring, &teichmuller(ring, c, d), m / d)?;
        acc = witt_add(ring, &acc, &piece)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> CoeffRing {
        CoeffRing::integers()
    }

    fn wv(ring: &CoeffRing, m: u64, xs: &[i64]) -> WittVector {
        WittVector::new(m, xs.iter().map(|&c| ring.from_int(c)).collect()).unwrap()
    }

    #[test]
    fn ghost_examples() {
        let r = z();
        let x = wv(&r, 2, &[3, 5]);
        assert_eq!(ghost(&r, &x, 1).unwrap(), r.from_int(3));
        assert_eq!(ghost(&r, &x, 2).unwrap(), r.from_int(19));
        assert_eq!(ghost(&r, &teichmuller(&r, &r.from_int(2), 6), 6).unwrap(), r.from_int(64));
        assert!(ghost(&r, &x, 3).is_err());
    }

    #[test]
    fn addition_examples() {
        let r = z();
        let one = wv(&r, 2, &[1, 0]);
        assert_eq!(witt_add(&r, &one, &one).unwrap(), wv(&r, 2, &[2, -1]));
        let x = wv(&r, 6, &[3, -1, 4, 2]);
        assert_eq!(witt_add(&r, &x, &WittVector::zero(&r, 6)).unwrap(), x);
        let t2 = teichmuller(&r, &r.from_int(2), 6);
        let t3 = teichmuller(&r, &r.from_int(3), 6);
        assert_eq!(witt_mul(&r, &t2, &t3).unwrap(), teichmuller(&r, &r.from_int(6), 6));
    }

    #[test]
    fn frobenius_and_verschiebung_examples() {
        let r = z();
        let a = wv(&r, 1, &[7]);
        assert_eq!(verschiebung(&r, &a, 2).unwrap(), wv(&r, 2, &[0, 7]));
        let t = teichmuller(&r, &r.from_int(3), 2);
        assert_eq!(frobenius(&r, &t, 2).unwrap(), wv(&r, 1, &[9]));
        let five = wv(&r, 1, &[5]);
        assert_eq!(frobenius(&r, &verschiebung(&r, &five, 2).unwrap(), 2).unwrap(), wv(&r, 1, &[10]));
        assert!(frobenius(&r, &t, 3).is_err());
    }

    #[test]
    fn restriction_and_decomposition() {
        let r = z();
        let x = wv(&r, 6, &[1, 2, 3, 4]);
        assert_eq!(restriction(&x, 2).unwrap(), wv(&r, 2, &[1, 2]));
        let t = teichmuller(&r, &r.from_int(7), 12);
        assert_eq!(ghost(&r, &restriction(&t, 1).unwrap(), 1).unwrap(), r.from_int(7));
        assert_eq!(teichmuller(&r, &r.zero(), 2), WittVector::zero(&r, 2));
        let y = wv(&r, 2, &[5, 8]);
        let parts = witt_decompose(&y);
        assert_eq!(parts[&2], r.from_int(5));
        assert_eq!(parts[&1], r.from_int(8));
        assert_eq!(witt_recompose(&r, 2, &parts).unwrap(), y);
        assert!(witt_decompose(&WittVector::zero(&r, 6)).values().all(QPoly::is_zero));
    }

    #[test]
    fn text_round_trip() {
        let r: CoeffRing = "poly:z:T".parse().unwrap();
        let x = WittVector::parse("(T + 1, -T^2, 3, 0)", &r, 6).unwrap();
        assert_eq!(WittVector::parse(&x.to_text(&r), &r, 6).unwrap(), x);
        assert!(WittVector::parse("(1, 2)", &r, 6).is_err());
    }
}
