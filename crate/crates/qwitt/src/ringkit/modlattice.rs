use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::RingError;

/// Largest modulus accepted; keeps every product inside `i128`.
pub const MAX_MODULUS: i128 = 1 << 62;

/// A lattice `L` with `D * Z^n ⊆ L ⊆ Z^n`, stored as an upper-triangular Hermite basis
/// whose pivots divide `D`. All arithmetic is done modulo `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModLattice {
    modulus: i128,
    /// `rows[i]` has pivot at column `i`, entries left of it zero, pivot dividing `D`.
    rows: Vec<Vec<i128>>,
}

impl ModLattice {
    /// The lattice `D * Z^n`.
    pub fn new(dim: usize, modulus: i128) -> Result<Self, RingError> {
        if !(1..=MAX_MODULUS).contains(&modulus) {
            return Err(RingError::Internal(format!("modulus {modulus} out of range")));
        }
        let rows = (0..dim)
            .map(|i| {
                let mut r = vec![0; dim];
                r[i] = modulus;
                r
            })
            .collect();
        Ok(ModLattice { modulus, rows })
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn modulus(&self) -> i128 {
        self.modulus
    }

    pub fn pivots(&self) -> Vec<i128> {
        (0..self.dim()).map(|i| self.rows[i][i]).collect()
    }

    /// Adds `v` to the lattice. Returns `true` if the lattice grew.
    pub fn insert(&mut self, v: &[i128]) -> bool {
        let d = self.modulus;
        let n = self.dim();
        let mut work: Vec<Vec<i128>> = vec![v.iter().map(|x| x.rem_euclid(d)).collect()];
        let mut grew = false;
        while let Some(mut w) = work.pop() {
            for i in 0..n {
                if w[i] == 0 {
                    continue;
                }
                let p = self.rows[i][i];
                if w[i] % p == 0 {
                    let c = w[i] / p;
                    sub_scaled(&mut w, &self.rows[i], c, d, i);
                    continue;
                }
                // New pivot g = gcd(p, w_i) = s p + t w_i.
                let (g, s, t) = xgcd(p, w[i]);
                let old = self.rows[i].clone();
                let mut new_row = vec![0; n];
                for j in i..n {
                    new_row[j] = (s * old[j] + t * w[j]).rem_euclid(d);
                }
                new_row[i] = g;
                // Both old row and w are now multiples of the new row in column i.
                let cw = w[i] / g;
                let co = p / g;
                let mut w2 = w.clone();
                sub_scaled(&mut w2, &new_row, cw, d, i);
                let mut o2 = old;
                sub_scaled(&mut o2, &new_row, co, d, i);
                self.rows[i] = new_row;
                grew = true;
                // (D/g) * new_row has zero pivot entry but a possibly nonzero tail.
                let mut tail: Vec<i128> = self.rows[i].iter().map(|x| (x * (d / g)).rem_euclid(d)).collect();
                tail[i] = 0;
                work.push(tail);
                work.push(o2);
                w = w2;
            }
        }
        grew
    }

    /// Canonical representative of `v + L`: entry `i` lies in `[0, pivot_i)`.
    pub fn reduce(&self, v: &[i128]) -> Vec<i128> {
        let d = self.modulus;
        let mut w: Vec<i128> = v.iter().map(|x| x.rem_euclid(d)).collect();
        for i in 0..self.dim() {
            let p = self.rows[i][i];
            let c = w[i].div_euclid(p);
            if c != 0 {
                sub_scaled(&mut w, &self.rows[i], c, d, i);
            }
        }
        w
    }

    pub fn contains(&self, v: &[i128]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Order of `Z^n / L`.
    pub fn index(&self) -> BigInt {
        self.rows.iter().enumerate().map(|(i, r)| BigInt::from(r[i])).product()
    }

    /// Hermite rows that are not the trivial `D e_i` (these generate `L` together with `D Z^n`).
    pub fn generators(&self) -> Vec<Vec<i128>> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(i, r)| !(r[*i] == self.modulus && r.iter().filter(|&&x| x != 0).count() == 1))
            .map(|(_, r)| r.clone())
            .collect()
    }

    /// Invariant factors of `Z^n / L` (nontrivial ones, ascending divisibility chain).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        invariant_factors_mod(&self.rows, self.modulus)
    }

    /// Exponent of `Z^n / L` (largest invariant factor, 1 for the trivial group).
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors().last().cloned().unwrap_or_else(BigInt::one)
    }

    /// Enumerates the canonical representatives of all cosets.
    pub fn coset_representatives(&self) -> impl Iterator<Item = Vec<i128>> + '_ {
        let piv = self.pivots();
        let total: u128 = piv.iter().map(|&p| p as u128).product();
        (0..total).map(move |mut k| {
            piv.iter()
                .map(|&p| {
                    let x = (k % p as u128) as i128;
                    k /= p as u128;
                    x
                })
                .collect()
        })
    }

    /// Re-expresses the same lattice modulo a multiple `new_modulus` of the current exponent.
    pub fn with_modulus(&self, new_modulus: i128) -> Result<ModLattice, RingError> {
        let e = self.exponent().to_i128().unwrap_or(i128::MAX);
        if new_modulus % e != 0 {
            return Err(RingError::Internal("new modulus must be a multiple of the exponent".into()));
        }
        let mut out = ModLattice::new(self.dim(), new_modulus)?;
        for r in &self.rows {
            out.insert(r);
        }
        Ok(out)
    }
}

fn sub_scaled(w: &mut [i128], row: &[i128], c: i128, d: i128, from: usize) {
    let c = c.rem_euclid(d);
    if c == 0 {
        return;
    }
    for j in from..w.len() {
        if row[j] != 0 {
            w[j] = (w[j] - c * row[j]).rem_euclid(d);
        }
    }
}

/// `(g, s, t)` with `g = gcd(a, b) = s a + t b`, `g > 0`.
pub fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Invariant factors of `Z^n / (span(rows) + D Z^n)` by elimination modulo `D`.
pub fn invariant_factors_mod(rows: &[Vec<i128>], d: i128) -> Vec<BigInt> {
    let n = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(d)).collect()).collect();
    let mut diag: Vec<i128> = Vec::new();
    let mut t = 0;
    let nrows = a.len();
    let gd = |x: i128| if x == 0 { d } else { x.gcd(&d) };
    while t < n && t < nrows {
        // Pivot: entry whose gcd with D is smallest.
        let mut best: Option<(i128, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let g = gd(x);
                    if best.is_none_or(|(b, _, _)| g < b) {
                        best = Some((g, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        // Clear column t below and row t right. Each xgcd step strictly lowers the pivot.
        loop {
            let mut changed = false;
            for i in t + 1..nrows {
                if a[i][t] == 0 {
                    continue;
                }
                if a[i][t] % a[t][t] == 0 {
                    let c = a[i][t] / a[t][t];
                    for j in t..n {
                        a[i][j] = (a[i][j] - c * a[t][j]).rem_euclid(d);
                    }
                    continue;
                }
                let (g, s, u) = xgcd(a[t][t], a[i][t]);
                let (x, y) = (a[t][t] / g, a[i][t] / g);
                for j in t..n {
                    let (p, q) = (a[t][j], a[i][j]);
                    a[t][j] = (s * p + u * q).rem_euclid(d);
                    a[i][j] = (x * q - y * p).rem_euclid(d);
                }
                changed = true;
            }
            for j in t + 1..n {
                if a[t][j] == 0 {
                    continue;
                }
                if a[t][j] % a[t][t] == 0 {
                    let c = a[t][j] / a[t][t];
                    for row in a.iter_mut() {
                        row[j] = (row[j] - c * row[t]).rem_euclid(d);
                    }
                    continue;
                }
                let (g, s, u) = xgcd(a[t][t], a[t][j]);
                let (x, y) = (a[t][t] / g, a[t][j] / g);
                for row in a.iter_mut() {
                    let (p, q) = (row[t], row[j]);
                    row[t] = (s * p + u * q).rem_euclid(d);
                    row[j] = (x * q - y * p).rem_euclid(d);
                }
                changed = true;
            }
            if !changed {
                break;
            }
        }
        diag.push(gd(a[t][t]));
        t += 1;
    }
    while diag.len() < n {
        diag.push(d);
    }
    normalize_chain(diag.into_iter().map(BigInt::from).collect())
}

/// Turns a list of cyclic orders into the invariant-factor chain, dropping ones.
pub fn normalize_chain(mut xs: Vec<BigInt>) -> Vec<BigInt> {
    // Repeated (gcd, lcm) swaps until the list is a divisibility chain.
    let n = xs.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = xs[i].gcd(&xs[j]);
            let l = if g.is_zero() { BigInt::zero() } else { &xs[i] / &g * &xs[j] };
            xs[i] = g;
            xs[j] = l;
        }
    }
    xs.retain(|x| !x.is_one());
    xs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_and_reduce() {
        let mut l = ModLattice::new(2, 12).unwrap();
        assert!(l.insert(&[2, 4]));
        assert!(l.insert(&[0, 6]));
        // Z^2 / <(2,4),(0,6),12 e_i>: index 2 * 6 = 12
        assert_eq!(l.index(), BigInt::from(12));
        assert!(l.contains(&[4, 2]));
        assert!(!l.contains(&[1, 0]));
        assert_eq!(l.reduce(&[3, 5]), l.reduce(&[1, 1]));
        assert_eq!(l.invariant_factors(), vec![BigInt::from(2), BigInt::from(6)]);
    }

    #[test]
    fn tail_reinsertion() {
        // <(2,1)> mod 4: contains 2*(2,1) = (0,2) as well.
        let mut l = ModLattice::new(2, 4).unwrap();
        l.insert(&[2, 1]);
        assert!(l.contains(&[0, 2]));
        assert_eq!(l.index(), BigInt::from(4));
        assert_eq!(l.invariant_factors(), vec![BigInt::from(4)]);
        assert_eq!(l.coset_representatives().count(), 4);
    }

    #[test]
    fn xgcd_identity() {
        for (a, b) in [(12, 18), (-7, 3), (0, 5), (5, 0)] {
            let (g, s, t) = xgcd(a, b);
            assert_eq!(g, (a as i64).gcd(&(b as i64)) as i128);
            assert_eq!(s * a + t * b, g);
        }
    }
}
