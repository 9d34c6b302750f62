//! The cohomology of `qHodge / (q^m - 1)` for `Z[T_1..T_n]` as a model of q-de Rham-Witt
//! complexes, with its Frobenius, Verschiebung, Bockstein and Teichmüller structure.

mod suites;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use crate::qcomplex::{cohomology, koszul_basis, multidegree_complex, FGModulePresentation, QComplexError, QForm};
use crate::qwittring::{LambdaStructure, QWittError};
use crate::ringkit::{cyclotomic_coeffs, q_analogue_coeffs, CycQuot, QPoly, RingError};
use crate::wittcore::{WittError, WittVector};

pub use suites::{run_suite, SuiteParams, SUITES};

#[derive(Debug, thiserror::Error)]
pub enum QdrwError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Complex(#[from] QComplexError),
    #[error(transparent)]
    QWitt(#[from] QWittError),
    #[error(transparent)]
    Witt(#[from] WittError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

type CellKey = (u64, Vec<u32>, usize);

/// `H^*(qHodge / (q^m - 1))` for all levels `m` at once, with cached per-multidegree groups.
pub struct CohomModel {
    nvars: usize,
    lambda: LambdaStructure,
    cache: Mutex<HashMap<CellKey, Arc<FGModulePresentation>>>,
}

impl CohomModel {
    pub fn new(nvars: usize) -> Self {
        CohomModel { nvars, lambda: LambdaStructure::polynomial(nvars), cache: Mutex::new(HashMap::new()) }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// `H^i` at level `m` and multidegree `v`.
    pub fn group(&self, m: u64, v: &[u32], degree: usize) -> Result<Arc<FGModulePresentation>, QdrwError> {
        let key = (m, v.to_vec(), degree);
        if let Some(h) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(h.clone());
        }
        let h = Arc::new(cohomology(&multidegree_complex(m, v)?, degree));
        self.cache.lock().expect("cache lock").insert(key, h.clone());
        Ok(h)
    }

    pub fn is_cocycle(&self, w: &QForm) -> bool {
        w.hodge_differential().is_zero()
    }

    /// Whether a form is a coboundary (false for non-cocycles), decided one multidegree and degree at a time.
    pub fn is_coboundary(&self, w: &QForm) -> Result<bool, QdrwError> {
        for v in w.multidegrees() {
            let part = w.component(&v);
            for deg in 0..=self.nvars {
                let vec = part.to_vector(&v, deg);
                if vec.iter().all(Zero::is_zero) {
                    continue;
                }
                let h = self.group(w.m(), &v, deg)?;
                let Some(coords) = h.class_coords(&vec) else { return Ok(false) };
                if !h.group().is_zero_elem(&coords)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn same_class(&self, a: &QForm, b: &QForm) -> Result<bool, QdrwError> {
        self.is_coboundary(&a.sub(b))
    }

    /// `F_k : H(m) -> H(m/k)`, the projection.
    pub fn frobenius(&self, w: &QForm, k: u64) -> Result<QForm, QdrwError> {
        if k == 0 || !w.m().is_multiple_of(k) {
            return Err(QComplexError::NotDivisor { d: k, m: w.m() }.into());
        }
        Ok(w.project(w.m() / k)?)
    }

    /// `V_k : H(d) -> H(kd)`, multiplication by `[k]_{q^d}`.
    pub fn verschiebung(&self, w: &QForm, k: u64) -> Result<QForm, QdrwError> {
        let d = w.m();
        Ok(w.lift_times(k * d, &q_analogue_coeffs(k * d, d)?))
    }

    pub fn bockstein(&self, w: &QForm) -> Result<QForm, QdrwError> {
        Ok(w.bockstein()?)
    }

    /// The image of a Witt vector over `Z[T_1..T_n]` under the degree-0 structure map.
    pub fn structure_map(&self, w: &WittVector) -> Result<QForm, QdrwError> {
        Ok(QForm::from_poly(&self.lambda.c_map(w)?, w.m()))
    }

    /// `τ_m(r)` in the model: the structure map applied to the Teichmüller vector.
    pub fn teichmuller(&self, r: &QPoly, m: u64) -> Result<QForm, QdrwError> {
        Ok(QForm::from_poly(&self.lambda.teichmuller(r, m)?, m))
    }

    /// `T_1`.
    pub fn first_variable(&self) -> QPoly {
        QPoly::var(0, self.nvars)
    }

    pub fn lambda(&self) -> &LambdaStructure {
        &self.lambda
    }

    /// `gh_1` on representatives: coefficients reduced modulo `Φ_m(q)`.
    pub fn ghost_one(&self, w: &QForm) -> Vec<(crate::qcomplex::FormKey, Vec<BigInt>)> {
        let phi = cyclotomic_coeffs(w.m());
        w.terms()
            .filter_map(|(k, c)| {
                let (_, r) = crate::ringkit::div_rem_monic(c.coeffs(), &phi);
                (!r.iter().all(Zero::is_zero)).then(|| (k.clone(), r))
            })
            .collect()
    }

    /// A random class of the given degree at level `m`, as a combination of cocycle basis
    /// elements in a few random multidegrees bounded by `maxdeg`.
    pub fn sample_class<G: Rng + ?Sized>(
        &self,
        m: u64,
        degree: usize,
        maxdeg: u32,
        rng: &mut G,
    ) -> Result<QForm, QdrwError> {
        let mut out = QForm::zero(self.nvars, m);
        if degree > self.nvars {
            return Ok(out);
        }
        for _ in 0..2 {
            let v: Vec<u32> = loop {
                let v: Vec<u32> = (0..self.nvars).map(|_| rng.gen_range(0..=maxdeg)).collect();
                if v.iter().filter(|&&e| e > 0).count() >= degree {
                    break v;
                }
            };
            let h = self.group(m, &v, degree)?;
            let mut chain = vec![BigInt::zero(); koszul_basis(&v, degree).len() * m as usize];
            for b in h.cocycle_basis() {
                let c = BigInt::from(rng.gen_range(-2i64..=2));
                for (x, y) in chain.iter_mut().zip(b) {
                    *x += &c * y;
                }
            }
            out = out.add(&QForm::from_vector(self.nvars, m, &v, degree, &chain));
        }
        Ok(out)
    }
}

/// `x^k` under the wedge product.
pub fn power(x: &QForm, k: u64) -> QForm {
    let mut acc = QForm::from_poly(&QPoly::one(x.nvars()), x.m());
    for _ in 0..k {
        acc = acc.wedge(x);
    }
    acc
}

/// The constant `c` at level `m`.
pub fn constant(nvars: usize, m: u64, c: CycQuot) -> QForm {
    QForm::from_poly(&QPoly::one(nvars), m).scale(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcomplex::FormKey;

    fn t_pow(e: u32, m: u64) -> QForm {
        QForm::basis(FormKey { multidegree: vec![e], dirs: vec![] }, 1, m)
    }

    #[test]
    fn frobenius_and_verschiebung_examples() {
        let model = CohomModel::new(1);
        let x = t_pow(2, 2);
        assert_eq!(model.frobenius(&x, 1).unwrap(), x);
        assert_eq!(model.frobenius(&x, 2).unwrap(), t_pow(2, 1));
        let one = constant(1, 1, CycQuot::one(1));
        let v = model.verschiebung(&one, 2).unwrap();
        assert_eq!(v, constant(1, 2, CycQuot::from_i64(2, &[1, 1])));
    }

    #[test]
    fn structure_map_examples() {
        let model = CohomModel::new(1);
        let t = model.first_variable();
        assert_eq!(model.teichmuller(&t, 2).unwrap(), t_pow(2, 2));
        assert!(model.is_cocycle(&model.teichmuller(&t, 6).unwrap()));
        let one = WittVector::one(model.lambda().ring(), 3);
        assert_eq!(model.structure_map(&one).unwrap(), constant(1, 3, CycQuot::one(3)));
    }

    #[test]
    fn class_tests() {
        let model = CohomModel::new(1);
        // (q - 1) dT = d(T) at level 2, hence zero in cohomology.
        let dt = QForm::dt(0, 1, 2).scale(&CycQuot::from_i64(2, &[-1, 1]));
        assert!(model.is_coboundary(&dt).unwrap());
        assert!(!model.is_coboundary(&QForm::dt(0, 1, 2)).unwrap());
    }
}
