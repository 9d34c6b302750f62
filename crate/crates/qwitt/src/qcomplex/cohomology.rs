use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::ringkit::{kernel_basis, FGAbGroup, IntMatrix, Lattice, ModLattice};

use super::koszul::KoszulScalarComplex;
use super::QComplexError;

/// `H^i` of a complex of free `Z[q]/(q^m-1)`-modules as a `Z`-module with `q`-action.
///
/// Generators are a basis of the cocycle lattice; relations are coboundaries in those
/// coordinates.
#[derive(Clone, Debug)]
pub struct FGModulePresentation {
    cocycles: Lattice,
    relations: Vec<Vec<BigInt>>,
    q_action: IntMatrix,
    group: FGAbGroup,
}

impl FGModulePresentation {
    pub fn generators(&self) -> usize {
        self.cocycles.rank()
    }

    /// Cocycle basis in chain coordinates.
    pub fn cocycle_basis(&self) -> &[Vec<BigInt>] {
        self.cocycles.basis()
    }

    pub fn relations(&self) -> &[Vec<BigInt>] {
        &self.relations
    }

    /// Column `j` holds the coordinates of `q * g_j`.
    pub fn q_action(&self) -> &IntMatrix {
        &self.q_action
    }

    pub fn group(&self) -> &FGAbGroup {
        &self.group
    }

    /// Nontrivial torsion factors followed by `0` per free summand.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.group.invariant_factors()
    }

    pub fn free_rank(&self) -> usize {
        self.group.free_rank()
    }

    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.invariant_factors().into_iter().filter(|d| !d.is_zero()).collect()
    }

    /// Coordinates of a chain in the cocycle basis, `None` if it is not a cocycle.
    pub fn class_coords(&self, chain: &[BigInt]) -> Option<Vec<BigInt>> {
        self.cocycles.coords(chain)
    }

    /// Whether a cocycle is a coboundary.
    pub fn is_zero_class(&self, chain: &[BigInt]) -> Result<bool, QComplexError> {
        let c = self.class_coords(chain).ok_or_else(|| QComplexError::NotCocycle(format!("{chain:?}")))?;
        Ok(self.group.is_zero_elem(&c)?)
    }

    /// Whether multiplication by `p` is injective.
    pub fn p_torsion_free(&self, p: u64) -> bool {
        self.torsion_factors().iter().all(|d| !d.is_multiple_of(&BigInt::from(p)))
    }

    /// Characteristic polynomial of `q` on `H ⊗ Q`, ascending, monic.
    pub fn q_charpoly(&self) -> Vec<BigInt> {
        let n = self.generators();
        let full = charpoly(&self.q_action);
        let image = Lattice::span(&self.relations, n);
        let r = image.rank();
        let mut sub = IntMatrix::zeros(r, r);
        for (j, b) in image.basis().iter().enumerate() {
            let qb = self.q_action.mul_vec(b);
            let c = image.coords(&qb).expect("coboundaries are q-stable");
            for (i, x) in c.into_iter().enumerate() {
                sub.set(i, j, x);
            }
        }
        poly_div_exact(&full, &charpoly(&sub))
    }
}

/// Characteristic polynomial `det(x - A)` by Faddeev-LeVerrier, ascending coefficients.
pub fn charpoly(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.rows();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = IntMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&mk);
        for i in 0..n {
            let v = next.get(i, i) + &c[n - k + 1];
            next.set(i, i, v);
        }
        mk = next;
        let am = a.mul(&mk);
        let tr: BigInt = (0..n).map(|i| am.get(i, i).clone()).sum();
        let (qt, r) = (-tr).div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        c[n - k] = qt;
    }
    c
}

fn poly_div_exact(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let (quo, rem) = crate::ringkit::div_rem_monic(f, g);
    debug_assert!(rem.iter().all(Zero::is_zero));
    quo
}

/// `H^i` of a scalar Koszul complex.
pub fn cohomology(c: &KoszulScalarComplex, degree: usize) -> FGModulePresentation {
    let n = c.rank(degree);
    let kernel =
        if degree < c.length() { kernel_basis(&c.differential(degree)) } else { (0..n).map(|i| unit(i, n)).collect() };
    let cocycles = Lattice::span(&kernel, n);
    let relations: Vec<Vec<BigInt>> = if degree == 0 {
        vec![]
    } else {
        let d = c.differential(degree - 1);
        (0..d.cols()).map(|j| cocycles.coords(&d.col(j)).expect("d^2 = 0")).collect()
    };
    let qa = c.q_action(degree);
    let g = cocycles.rank();
    let mut q_action = IntMatrix::zeros(g, g);
    for (j, b) in cocycles.basis().iter().enumerate() {
        let coords = cocycles.coords(&qa.mul_vec(b)).expect("cocycles are q-stable");
        for (i, x) in coords.into_iter().enumerate() {
            q_action.set(i, j, x);
        }
    }
    let group = FGAbGroup::new(g, relations.clone()).expect("dimensions agree");
    FGModulePresentation { cocycles, relations, q_action, group }
}

fn unit(i: usize, n: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

/// Invariant factors of `H^i(C ⊗ Z/p^M)` derived from the integral groups by the universal
/// coefficient sequence: `H^i ⊗ Z/p^M` plus `Tor(H^{i+1}, Z/p^M)`. Trivial factors dropped.
pub fn local_factors(c: &KoszulScalarComplex, degree: usize, p: u64, prec: u32) -> Vec<BigInt> {
    let pm = BigInt::from(p).pow(prec);
    let mut out: Vec<BigInt> = cohomology(c, degree)
        .invariant_factors()
        .iter()
        .map(|d| if d.is_zero() { pm.clone() } else { d.gcd(&pm) })
        .collect();
    if degree < c.length() {
        out.extend(cohomology(c, degree + 1).torsion_factors().iter().map(|d| d.gcd(&pm)));
    }
    out.retain(|d| !d.is_one());
    out.sort();
    out
}

/// `|H^i(C ⊗ Z/N)|` counted directly from image sizes modulo `N`.
pub fn order_mod(c: &KoszulScalarComplex, degree: usize, n: u64) -> Result<BigInt, QComplexError> {
    let image_order = |deg: usize| -> Result<BigInt, QComplexError> {
        let d = c.differential(deg);
        let mut lat = ModLattice::new(d.rows(), n as i128)?;
        for j in 0..d.cols() {
            let col: Vec<i128> =
                d.col(j).iter().map(|x| x.mod_floor(&BigInt::from(n)).to_i128().expect("reduced")).collect();
            lat.insert(&col);
        }
        Ok(BigInt::from(n).pow(d.rows() as u32) / lat.index())
    };
    let total = BigInt::from(n).pow(c.rank(degree) as u32);
    let out_img = if degree < c.length() { image_order(degree)? } else { BigInt::one() };
    let in_img = if degree > 0 { image_order(degree - 1)? } else { BigInt::one() };
    Ok(total / (out_img * in_img))
}

/// Multiplication by `p` is injective on every `H^i`, checked twice: through the integral
/// invariant factors, and by counting `|H^i(C ⊗ Z/p^M)| = p^{M rank}` at `M` and `M + 2`.
pub fn check_p_torsion_free(c: &KoszulScalarComplex, p: u64, prec: u32) -> Result<PTorsionVerdict, QComplexError> {
    let mut integral = true;
    let mut counted = [true, true];
    for deg in 0..=c.length() {
        let h = cohomology(c, deg);
        integral &= h.p_torsion_free(p);
        for (slot, m) in [prec, prec + 2].into_iter().enumerate() {
            let want = BigInt::from(p).pow(m * h.free_rank() as u32);
            counted[slot] &= order_mod(c, deg, p.pow(m))? == want;
        }
    }
    Ok(PTorsionVerdict { integral, counted: counted[0], stable: counted[0] == counted[1] })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PTorsionVerdict {
    pub integral: bool,
    pub counted: bool,
    pub stable: bool,
}

impl PTorsionVerdict {
    pub fn passed(&self) -> bool {
        self.integral && self.counted && self.stable
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcomplex::koszul::multidegree_complex;

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn two_term_examples() {
        let c = multidegree_complex(4, &[2]).unwrap();
        let h0 = cohomology(&c, 0);
        assert_eq!(h0.invariant_factors(), big(&[0, 0]));
        // H^0 = ann(q^2 - 1) = ([2]_{q^2}) as a lattice.
        let ann = Lattice::span(&[big(&[1, 0, 1, 0]), big(&[0, 1, 0, 1])], 4);
        assert_eq!(ann.basis(), h0.cocycle_basis());
        assert_eq!(h0.q_charpoly(), big(&[-1, 0, 1]));
        let h1 = cohomology(&c, 1);
        assert_eq!(h1.invariant_factors(), big(&[0, 0]));
        assert_eq!(h1.q_charpoly(), big(&[-1, 0, 1]));
        let c0 = multidegree_complex(5, &[0]).unwrap();
        assert_eq!(cohomology(&c0, 0).free_rank(), 5);
        assert_eq!(cohomology(&c0, 0).q_charpoly(), big(&[-1, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn charpoly_matches_determinant_oracle() {
        let a = IntMatrix::from_i64(&[&[2, 1, 0], &[0, -1, 3], &[4, 0, 1]]);
        let cp = charpoly(&a);
        for x in -3i64..=3 {
            let mut m = a.clone();
            for i in 0..3 {
                for j in 0..3 {
                    let v = if i == j { BigInt::from(x) } else { BigInt::zero() } - a.get(i, j);
                    m.set(i, j, v);
                }
            }
            let val: BigInt = cp.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
            assert_eq!(m.determinant(), val);
        }
    }

    #[test]
    fn counting_agrees_with_universal_coefficients() {
        for v in [[1u32, 2], [2, 2], [3, 6], [4, 0]] {
            let c = multidegree_complex(6, &v).unwrap();
            for deg in 0..=c.length() {
                for (p, m) in [(2u64, 3u32), (3, 2)] {
                    let prod: BigInt = local_factors(&c, deg, p, m).iter().product();
                    assert_eq!(order_mod(&c, deg, p.pow(m)).unwrap(), prod, "v={v:?} deg={deg}");
                }
            }
        }
    }

    #[test]
    fn prime_power_levels_are_torsion_free() {
        for (p, a) in [(2u64, 1u32), (2, 2), (3, 1)] {
            let m = p.pow(a);
            for v in [[1u32, 0], [2, 2], [3, 4], [4, 8]] {
                let c = multidegree_complex(m, &v).unwrap();
                assert!(check_p_torsion_free(&c, p, 4).unwrap().passed(), "p={p} v={v:?}");
            }
        }
    }
}
