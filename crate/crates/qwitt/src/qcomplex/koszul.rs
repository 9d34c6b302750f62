use num_bigint::BigInt;
use num_traits::Zero;

use crate::ringkit::{div_rem_monic, upoly_add, upoly_mul, CycQuot, IntMatrix, UPoly};

use super::form::{insertion_sign, q_pow_minus_one};
use super::QComplexError;

/// Size-`k` subsets of `0..s`, lexicographic.
pub(crate) fn subsets(s: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, s: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..s {
            cur.push(i);
            go(i + 1, s, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, s, k, &mut Vec::new(), &mut out);
    out
}

/// Degree-`i` basis directions at multidegree `v`: size-`i` subsets of the support.
pub fn koszul_basis(v: &[u32], degree: usize) -> Vec<Vec<usize>> {
    let support: Vec<usize> = (0..v.len()).filter(|&j| v[j] > 0).collect();
    subsets(support.len(), degree).into_iter().map(|s| s.into_iter().map(|i| support[i]).collect()).collect()
}

/// `⊗_j (Z[q]/(q^m-1) --s_j--> Z[q]/(q^m-1))`. Scalars are kept unreduced so that the
/// Bockstein can be taken over `Z[q]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulScalarComplex {
    m: u64,
    scalars: Vec<UPoly>,
}

impl KoszulScalarComplex {
    pub fn new(m: u64, scalars: Vec<UPoly>) -> Result<Self, QComplexError> {
        if m == 0 {
            return Err(QComplexError::Precondition("level must be positive".into()));
        }
        Ok(KoszulScalarComplex { m, scalars })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn scalars(&self) -> &[UPoly] {
        &self.scalars
    }

    /// Highest nonzero degree.
    pub fn length(&self) -> usize {
        self.scalars.len()
    }

    pub fn basis(&self, degree: usize) -> Vec<Vec<usize>> {
        subsets(self.scalars.len(), degree)
    }

    /// Rank over `Z[q]/(q^m - 1)`.
    pub fn ring_rank(&self, degree: usize) -> usize {
        self.basis(degree).len()
    }

    /// Rank over `Z`.
    pub fn rank(&self, degree: usize) -> usize {
        self.ring_rank(degree) * self.m as usize
    }

    /// The differential as a map of ring-vectors over `Z[q]`, without reducing mod `q^m - 1`.
    pub fn apply_unreduced(&self, degree: usize, x: &[UPoly]) -> Vec<UPoly> {
        let src = self.basis(degree);
        let tgt = self.basis(degree + 1);
        let mut out = vec![UPoly::new(); tgt.len()];
        for (a, js) in src.iter().enumerate() {
            if x[a].iter().all(Zero::is_zero) {
                continue;
            }
            for j in 0..self.scalars.len() {
                if js.contains(&j) {
                    continue;
                }
                let mut big = js.clone();
                big.insert(big.partition_point(|&i| i < j), j);
                let b = tgt.binary_search(&big).expect("subset present");
                let mut term = upoly_mul(&x[a], &self.scalars[j]);
                if insertion_sign(js, j) < 0 {
                    term.iter_mut().for_each(|c| *c = -&*c);
                }
                out[b] = upoly_add(&out[b], &term);
            }
        }
        out
    }

    /// Integer matrix of `d^i`, columns indexed by `(J, q^k)` blocks.
    pub fn differential(&self, degree: usize) -> IntMatrix {
        let m = self.m as usize;
        let (rows, cols) = (self.rank(degree + 1), self.rank(degree));
        let mut mat = IntMatrix::zeros(rows, cols);
        let nsrc = self.ring_rank(degree);
        for a in 0..nsrc {
            for k in 0..m {
                let mut x = vec![UPoly::new(); nsrc];
                let mut e = vec![BigInt::zero(); k + 1];
                e[k] = BigInt::from(1);
                x[a] = e;
                let y = self.apply_unreduced(degree, &x);
                for (b, poly) in y.iter().enumerate() {
                    let red = CycQuot::from_coeffs(m, poly);
                    for (t, c) in red.coeffs().iter().enumerate() {
                        if !c.is_zero() {
                            mat.set(b * m + t, a * m + k, c.clone());
                        }
                    }
                }
            }
        }
        mat
    }

    /// The action of `q` on degree `i` chains.
    pub fn q_action(&self, degree: usize) -> IntMatrix {
        let m = self.m as usize;
        let n = self.rank(degree);
        let mut mat = IntMatrix::zeros(n, n);
        for b in 0..self.ring_rank(degree) {
            for k in 0..m {
                mat.set(b * m + (k + 1) % m, b * m + k, BigInt::from(1));
            }
        }
        mat
    }

    /// Bockstein of a degree-`i` cocycle, given in block coordinates.
    pub fn bockstein(&self, degree: usize, x: &[BigInt]) -> Result<Vec<BigInt>, QComplexError> {
        let m = self.m as usize;
        let lifted: Vec<UPoly> = x.chunks(m).map(|c| c.to_vec()).collect();
        let y = self.apply_unreduced(degree, &lifted);
        let modulus = q_pow_minus_one(self.m as u32);
        let mut out = Vec::with_capacity(y.len() * m);
        for poly in y {
            let (quo, rem) = div_rem_monic(&poly, &modulus);
            if rem.iter().any(|c| !c.is_zero()) {
                return Err(QComplexError::NotCocycle(format!("degree {degree} chain {x:?}")));
            }
            out.extend_from_slice(CycQuot::from_coeffs(m, &quo).coeffs());
        }
        Ok(out)
    }
}

/// The summand of the q-Hodge complex of `Z[T_1..T_n]` at multidegree `v`: scalars
/// `q^{v_j} - 1` for `j` in the support of `v`.
pub fn multidegree_complex(m: u64, v: &[u32]) -> Result<KoszulScalarComplex, QComplexError> {
    let scalars = v.iter().filter(|&&e| e > 0).map(|&e| q_pow_minus_one(e)).collect();
    KoszulScalarComplex::new(m, scalars)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcomplex::form::{FormKey, QForm};

    #[test]
    fn shapes() {
        let c = multidegree_complex(4, &[0]).unwrap();
        assert_eq!(c.length(), 0);
        assert_eq!(c.rank(0), 4);
        let c = multidegree_complex(2, &[1, 2]).unwrap();
        assert_eq!(c.scalars(), &[q_pow_minus_one(1), q_pow_minus_one(2)]);
        assert_eq!((c.ring_rank(0), c.ring_rank(1), c.ring_rank(2)), (1, 2, 1));
        assert_eq!(koszul_basis(&[3, 0, 1], 1), vec![vec![0], vec![2]]);
    }

    #[test]
    fn squares_to_zero() {
        let c = multidegree_complex(6, &[2, 3, 5]).unwrap();
        for i in 0..2 {
            assert!(c.differential(i + 1).mul(&c.differential(i)).is_zero());
        }
    }

    #[test]
    fn agrees_with_form_differential() {
        // The form-level differential and the block matrix are built independently.
        for m in 1..=6u64 {
            for a in 0..=6u32 {
                for b in 0..=6u32 {
                    let v = [a, b];
                    let c = multidegree_complex(m, &v).unwrap();
                    for deg in 0..c.length() {
                        let mat = c.differential(deg);
                        for (i, js) in koszul_basis(&v, deg).into_iter().enumerate() {
                            let f = QForm::basis(FormKey { multidegree: v.to_vec(), dirs: js }, 2, m);
                            let want = f.hodge_differential().to_vector(&v, deg + 1);
                            assert_eq!(mat.col(i * m as usize), want, "m={m} v={v:?}");
                        }
                    }
                }
            }
        }
    }
}
