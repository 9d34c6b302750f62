use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ringkit::{div_rem_monic, upoly_add, upoly_mul, CycQuot, QPoly};

use super::QComplexError;

/// Basis element `T^{v - 1_J} dT_{j_1} ∧ .. ∧ dT_{j_k}` for `J = {j_1 < .. < j_k}` (0-based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormKey {
    pub multidegree: Vec<u32>,
    pub dirs: Vec<usize>,
}

impl FormKey {
    pub fn degree(&self) -> usize {
        self.dirs.len()
    }

    /// The exponent of `T` in front of the `dT`s.
    pub fn t_exponent(&self) -> Vec<u32> {
        let mut e = self.multidegree.clone();
        for &j in &self.dirs {
            e[j] -= 1;
        }
        e
    }
}

/// `(-1)^{#{i ∈ dirs : i < j}}`.
pub(crate) fn insertion_sign(dirs: &[usize], j: usize) -> i64 {
    if dirs.iter().filter(|&&i| i < j).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `q^k - 1` as an ascending coefficient list.
pub(crate) fn q_pow_minus_one(k: u32) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); k as usize + 1];
    v[0] = BigInt::from(-1);
    v[k as usize] += BigInt::one();
    v
}

/// A differential form on `Z[T_1..T_n]` with coefficients in `Z[q]/(q^m - 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QForm {
    nvars: usize,
    m: u64,
    terms: BTreeMap<FormKey, CycQuot>,
}

impl QForm {
    pub fn zero(nvars: usize, m: u64) -> Self {
        assert!(m >= 1, "level must be positive");
        QForm { nvars, m, terms: BTreeMap::new() }
    }

    /// A 0-form from a polynomial in `q` and the `T_i`.
    pub fn from_poly(f: &QPoly, m: u64) -> Self {
        let mut out = Self::zero(f.nvars(), m);
        for (mo, c) in f.terms() {
            let key = FormKey { multidegree: mo.t.clone(), dirs: vec![] };
            out.add_term(key, CycQuot::q_pow(m as usize, mo.q as usize).scale(c));
        }
        out
    }

    /// `dT_j` for 0-based `j`.
    pub fn dt(j: usize, nvars: usize, m: u64) -> Self {
        let mut v = vec![0; nvars];
        v[j] = 1;
        Self::basis(FormKey { multidegree: v, dirs: vec![j] }, nvars, m)
    }

    pub fn basis(key: FormKey, nvars: usize, m: u64) -> Self {
        let mut out = Self::zero(nvars, m);
        out.add_term(key, CycQuot::one(m as usize));
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormKey, &CycQuot)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &FormKey) -> CycQuot {
        self.terms.get(key).cloned().unwrap_or_else(|| CycQuot::zero(self.m as usize))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of all terms; `None` for zero or inhomogeneous forms.
    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(FormKey::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn multidegrees(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = self.terms.keys().map(|k| k.multidegree.clone()).collect();
        out.dedup();
        out
    }

    pub fn add_term(&mut self, key: FormKey, c: CycQuot) {
        debug_assert_eq!(key.multidegree.len(), self.nvars);
        debug_assert!(key.dirs.iter().all(|&j| key.multidegree[j] >= 1));
        let entry = self.terms.entry(key).or_insert_with(|| CycQuot::zero(self.m as usize));
        *entry = entry.add(&c);
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn add(&self, other: &QForm) -> QForm {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QForm) -> QForm {
        self.add(&other.scale_int(&BigInt::from(-1)))
    }

    pub fn scale_int(&self, c: &BigInt) -> QForm {
        self.scale(&CycQuot::one(self.m as usize).scale(c))
    }

    pub fn scale(&self, c: &CycQuot) -> QForm {
        let mut out = Self::zero(self.nvars, self.m);
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x.mul(c));
        }
        out
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> QForm {
        self.scale(&CycQuot::q_pow(self.m as usize, k))
    }

    /// The part of multidegree `v`.
    pub fn component(&self, v: &[u32]) -> QForm {
        let mut out = Self::zero(self.nvars, self.m);
        for (k, c) in self.terms.iter().filter(|(k, _)| k.multidegree == v) {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    /// Image in `Z[q]/(q^d - 1)` coefficients.
    pub fn project(&self, d: u64) -> Result<QForm, QComplexError> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return Err(QComplexError::NotDivisor { d, m: self.m });
        }
        let mut out = Self::zero(self.nvars, d);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.project(d as usize));
        }
        Ok(out)
    }

    /// Reinterprets coefficients at level `m`, lifting each to its representative of
    /// degree below the current level and multiplying by `factor` (ascending coefficients).
    pub fn lift_times(&self, m: u64, factor: &[BigInt]) -> QForm {
        let mut out = Self::zero(self.nvars, m);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), CycQuot::from_coeffs(m as usize, &upoly_mul(c.coeffs(), factor)));
        }
        out
    }

    /// The q-Hodge differential `(q-1) q∇`, with `dT_j` inserted by the Koszul sign rule.
    pub fn hodge_differential(&self) -> QForm {
        let m = self.m as usize;
        let mut out = Self::zero(self.nvars, self.m);
        for (key, c) in &self.terms {
            for j in 0..self.nvars {
                if key.multidegree[j] == 0 || key.dirs.contains(&j) {
                    continue;
                }
                let scalar = CycQuot::from_coeffs(m, &q_pow_minus_one(key.multidegree[j]));
                let mut dirs = key.dirs.clone();
                let pos = dirs.partition_point(|&i| i < j);
                dirs.insert(pos, j);
                let coeff = c.mul(&scalar).scale(&BigInt::from(insertion_sign(&key.dirs, j)));
                out.add_term(FormKey { multidegree: key.multidegree.clone(), dirs }, coeff);
            }
        }
        debug_assert!(out.terms.keys().all(|k| self.terms.keys().any(|s| s.multidegree == k.multidegree)));
        out
    }

    /// The Bockstein for `q^m - 1`: lift, differentiate over `Z[q]`, divide by `q^m - 1`.
    pub fn bockstein(&self) -> Result<QForm, QComplexError> {
        let m = self.m as u32;
        let mut acc: BTreeMap<FormKey, Vec<BigInt>> = BTreeMap::new();
        for (key, c) in &self.terms {
            for j in 0..self.nvars {
                if key.multidegree[j] == 0 || key.dirs.contains(&j) {
                    continue;
                }
                let mut dirs = key.dirs.clone();
                let pos = dirs.partition_point(|&i| i < j);
                dirs.insert(pos, j);
                let mut term = upoly_mul(c.coeffs(), &q_pow_minus_one(key.multidegree[j]));
                if insertion_sign(&key.dirs, j) < 0 {
                    term.iter_mut().for_each(|x| *x = -&*x);
                }
                let slot = acc.entry(FormKey { multidegree: key.multidegree.clone(), dirs }).or_default();
                *slot = upoly_add(slot, &term);
            }
        }
        let mut out = Self::zero(self.nvars, self.m);
        let modulus = q_pow_minus_one(m);
        for (key, poly) in acc {
            let (quo, rem) = div_rem_monic(&poly, &modulus);
            if rem.iter().any(|x| !x.is_zero()) {
                return Err(QComplexError::NotCocycle(self.to_text()));
            }
            out.add_term(key, CycQuot::from_coeffs(self.m as usize, &quo));
        }
        Ok(out)
    }

    /// The product with `dT_i ∧ f = γ_i(f) ∧ dT_i`.
    pub fn wedge(&self, other: &QForm) -> QForm {
        assert_eq!(self.m, other.m, "level mismatch");
        let nvars = self.nvars.max(other.nvars);
        let mut out = Self::zero(nvars, self.m);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.dirs.iter().any(|j| b.dirs.contains(j)) {
                    continue;
                }
                let shift: u64 = a.dirs.iter().map(|&i| b.multidegree[i] as u64).sum();
                let mut inversions = 0;
                for &j in &a.dirs {
                    inversions += b.dirs.iter().filter(|&&k| k < j).count();
                }
                let mut dirs: Vec<usize> = a.dirs.iter().chain(&b.dirs).copied().collect();
                dirs.sort_unstable();
                let v: Vec<u32> = a.multidegree.iter().zip(&b.multidegree).map(|(p, q)| p + q).collect();
                let sign = if inversions % 2 == 0 { 1 } else { -1 };
                let c = x.mul(y).mul(&CycQuot::q_pow(self.m as usize, shift as usize)).scale(&BigInt::from(sign));
                out.add_term(FormKey { multidegree: v, dirs }, c);
            }
        }
        out
    }

    /// Coordinates in the block `(J, q^k)` order of [`koszul_basis`](super::koszul_basis) at multidegree `v`.
    pub fn to_vector(&self, v: &[u32], degree: usize) -> Vec<BigInt> {
        let dirs = super::koszul_basis(v, degree);
        let m = self.m as usize;
        let mut out = vec![BigInt::zero(); dirs.len() * m];
        for (b, js) in dirs.iter().enumerate() {
            let c = self.coeff(&FormKey { multidegree: v.to_vec(), dirs: js.clone() });
            out[b * m..(b + 1) * m].clone_from_slice(c.coeffs());
        }
        out
    }

    pub fn from_vector(nvars: usize, m: u64, v: &[u32], degree: usize, x: &[BigInt]) -> QForm {
        let dirs = super::koszul_basis(v, degree);
        let mu = m as usize;
        let mut out = Self::zero(nvars, m);
        for (b, js) in dirs.into_iter().enumerate() {
            out.add_term(
                FormKey { multidegree: v.to_vec(), dirs: js },
                CycQuot::from_coeffs(mu, &x[b * mu..(b + 1) * mu]),
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut s = format!("({})", c.to_text());
                for (i, e) in k.t_exponent().iter().enumerate() {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*T{}", i + 1)),
                        _ => s.push_str(&format!("*T{}^{e}", i + 1)),
                    }
                }
                for j in &k.dirs {
                    s.push_str(&format!("*dT{}", j + 1));
                }
                s
            })
            .collect();
        parts.join(" + ")
    }
}

impl std::fmt::Display for QForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(v: &[u32], dirs: &[usize]) -> FormKey {
        FormKey { multidegree: v.to_vec(), dirs: dirs.to_vec() }
    }

    fn cq(m: usize, cs: &[i64]) -> CycQuot {
        CycQuot::from_i64(m, cs)
    }

    #[test]
    fn differential_examples() {
        let t2 = QForm::basis(key(&[2], &[]), 1, 4);
        let d = t2.hodge_differential();
        assert_eq!(d.coeff(&key(&[2], &[0])), cq(4, &[-1, 0, 1]));
        assert!(QForm::basis(key(&[0], &[]), 1, 4).hodge_differential().is_zero());
        let t12 = QForm::basis(key(&[1, 1], &[]), 2, 6);
        let d = t12.hodge_differential();
        assert_eq!(d.coeff(&key(&[1, 1], &[0])), cq(6, &[-1, 1]));
        assert_eq!(d.coeff(&key(&[1, 1], &[1])), cq(6, &[-1, 1]));
        assert!(d.hodge_differential().is_zero());
    }

    #[test]
    fn wedge_examples() {
        let dt = QForm::dt(0, 1, 5);
        let t = QForm::basis(key(&[1], &[]), 1, 5);
        assert_eq!(dt.wedge(&t), QForm::basis(key(&[2], &[0]), 1, 5).shift(1));
        assert_eq!(t.wedge(&dt), QForm::basis(key(&[2], &[0]), 1, 5));
        assert!(dt.wedge(&dt).is_zero());
        let one = QForm::basis(key(&[0], &[]), 1, 5);
        assert_eq!(one.wedge(&dt), dt);
        let dt2 = QForm::dt(1, 2, 3);
        let dt1 = QForm::dt(0, 2, 3);
        assert_eq!(dt2.wedge(&dt1), dt1.wedge(&dt2).scale_int(&BigInt::from(-1)));
    }

    #[test]
    fn bockstein_examples() {
        let x = QForm::basis(key(&[1], &[]), 1, 2).scale(&cq(2, &[1, 1]));
        assert_eq!(x.bockstein().unwrap(), QForm::dt(0, 1, 2));
        let t2 = QForm::basis(key(&[2], &[]), 1, 1);
        assert_eq!(t2.bockstein().unwrap(), QForm::basis(key(&[2], &[0]), 1, 1).scale_int(&BigInt::from(2)));
        assert!(QForm::basis(key(&[1], &[]), 1, 2).bockstein().is_err());
    }

    #[test]
    fn vector_round_trip() {
        let f = QForm::basis(key(&[1, 2], &[1]), 2, 3).shift(2).add(&QForm::basis(key(&[1, 2], &[0]), 2, 3));
        let v = f.to_vector(&[1, 2], 1);
        assert_eq!(QForm::from_vector(2, 3, &[1, 2], 1, &v), f);
    }
}
