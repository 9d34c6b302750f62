use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::ringkit::{divisors, snf, CoeffRing, IntMatrix, Lattice, ModLattice, QPoly, MAX_MODULUS};
use crate::wittcore::WittVector;

use super::QWittError;

/// The finite rings handled by the presentation engine: `R = A / N A` with
/// `A = Z[x]/(x^K)` (`K = 1` meaning `A = Z`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FiniteBase {
    pub modulus: u64,
    pub rank: usize,
}

impl FiniteBase {
    pub fn of(ring: &CoeffRing) -> Result<Self, QWittError> {
        let modulus =
            ring.modulus_u64().ok_or_else(|| QWittError::NotFinite(format!("{ring} has no finite characteristic")))?;
        let rank = match (ring.nvars(), ring.nil_degree()) {
            (0, _) => 1,
            (1, Some(k)) => k as usize,
            _ => return Err(QWittError::NotFinite(format!("{ring} is not a finite ring"))),
        };
        if rank > 3 {
            return Err(QWittError::Precondition(format!("truncation degree {rank} is above the supported bound 3")));
        }
        Ok(FiniteBase { modulus, rank })
    }
}

fn a_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let k = a.len();
    let mut out = vec![BigInt::zero(); k];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(k - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn a_pow(a: &[BigInt], e: u64) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len()];
    out[0] = BigInt::one();
    for _ in 0..e {
        out = a_mul(&out, a);
    }
    out
}

/// All points of the box `{0..=b}^k`.
fn box_points(k: usize, b: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b).map(move |c| {
                    let mut p = p.clone();
                    p.push(c);
                    p
                })
            })
            .collect();
    }
    out
}

/// `W_d(R)` realised as `L / L_N`, where `L ⊆ A^{divisors(d)}` is the ghost image of
/// `W_d(A)` and `L_N` that of `W_d(N A)`. Elements are coordinate vectors in a Hermite
/// basis of `L`, taken modulo `D`, the exponent of `L / L_N`.
#[derive(Debug)]
pub struct WittLattice {
    level: u64,
    base: FiniteBase,
    divisors: Vec<u64>,
    lattice: Lattice,
    modulus: i128,
    relations: ModLattice,
    mul: Vec<Vec<Vec<i128>>>,
    one: Vec<i128>,
}

impl WittLattice {
    fn build(level: u64, base: FiniteBase) -> Result<Self, QWittError> {
        let divs = divisors(level);
        let k = base.rank;
        let dim = divs.len() * k;
        let ghost_gens = |scale: u64| -> Vec<Vec<BigInt>> {
            let mut gens = Vec::new();
            for &e in &divs {
                for c in box_points(k, level / e) {
                    let a: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x * scale)).collect();
                    let mut v = vec![BigInt::zero(); dim];
                    for (slot, &n) in divs.iter().enumerate() {
                        if n % e == 0 {
                            for (t, x) in a_pow(&a, n / e).into_iter().enumerate() {
                                v[slot * k + t] = x * e;
                            }
                        }
                    }
                    gens.push(v);
                }
            }
            gens
        };
        let lattice = Lattice::span(&ghost_gens(1), dim);
        if lattice.rank() != dim {
            return Err(QWittError::Internal("ghost lattice is not of full rank".into()));
        }
        let rel_coords: Vec<Vec<BigInt>> = ghost_gens(base.modulus)
            .iter()
            .map(|g| lattice.coords(g).ok_or_else(|| QWittError::Internal("W(NA) not inside W(A)".into())))
            .collect::<Result<_, _>>()?;
        let snf_rel = snf(&IntMatrix::from_cols(&rel_coords, dim));
        let exponent = snf_rel.invariant_factors().iter().cloned().fold(BigInt::one(), |a, b| a.lcm(&b));
        let modulus = exponent
            .to_i128()
            .filter(|&d| d <= MAX_MODULUS)
            .ok_or_else(|| QWittError::Precondition(format!("W_{level}(R) has exponent {exponent}, too large")))?;
        let mut relations = ModLattice::new(dim, modulus)?;
        for r in &rel_coords {
            relations.insert(&reduce_vec(r, modulus));
        }
        let basis = lattice.basis().to_vec();
        let mut mul = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in i..dim {
                let prod = ghost_product(&basis[i], &basis[j], k);
                let c = lattice
                    .coords(&prod)
                    .ok_or_else(|| QWittError::Internal("ghost lattice not closed under products".into()))?;
                let c = reduce_vec(&c, modulus);
                mul[i][j] = c.clone();
                mul[j][i] = c;
            }
        }
        let mut unit = vec![BigInt::zero(); dim];
        for slot in 0..divs.len() {
            unit[slot * k] = BigInt::one();
        }
        let one = reduce_vec(&lattice.coords(&unit).expect("unit lies in the ghost lattice"), modulus);
        Ok(WittLattice { level, base, divisors: divs, lattice, modulus, relations, mul, one })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn base(&self) -> FiniteBase {
        self.base
    }

    /// Rank of `L` over `Z`.
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn modulus(&self) -> i128 {
        self.modulus
    }

    /// Relations cutting `W_d(R)` out of `Z^rank`.
    pub fn relations(&self) -> &ModLattice {
        &self.relations
    }

    pub fn one(&self) -> &[i128] {
        &self.one
    }

    /// Product of basis elements `i` and `j` in lattice coordinates.
    pub fn basis_product(&self, i: usize, j: usize) -> &[i128] {
        &self.mul[i][j]
    }

    pub fn mul(&self, x: &[i128], y: &[i128]) -> Vec<i128> {
        let d = self.modulus;
        let mut out = vec![0i128; self.rank()];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = (a * b).rem_euclid(d);
                for (o, &t) in out.iter_mut().zip(&self.mul[i][j]) {
                    if t != 0 {
                        *o = (*o + ab * t).rem_euclid(d);
                    }
                }
            }
        }
        out
    }

    fn ghost_of_coords(&self, c: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.lattice.dim()];
        for (x, row) in c.iter().zip(self.lattice.basis()) {
            if x.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(row) {
                *o += x * y;
            }
        }
        out
    }

    fn coords_of_ghost(&self, g: &[BigInt]) -> Result<Vec<BigInt>, QWittError> {
        self.lattice
            .coords(g)
            .ok_or_else(|| QWittError::Internal(format!("vector outside the ghost lattice of W_{}", self.level)))
    }

    /// Ghost component `gh_n` (as `K` coefficients in `A`) of a lattice vector.
    pub fn ghost_component(&self, c: &[i128], n: u64) -> Vec<BigInt> {
        let slot = self.divisors.binary_search(&n).expect("n divides the level");
        let big: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        let g = self.ghost_of_coords(&big);
        let k = self.base.rank;
        g[slot * k..(slot + 1) * k].to_vec()
    }

    /// Images of the basis under `F_k : W_d -> W_{d/k}`, in `target` coordinates.
    pub fn frobenius_matrix(&self, k: u64, target: &WittLattice) -> Result<Vec<Vec<BigInt>>, QWittError> {
        if !self.level.is_multiple_of(k) || target.level != self.level / k {
            return Err(QWittError::NotDivisor { d: k, m: self.level });
        }
        let kk = self.base.rank;
        self.lattice
            .basis()
            .iter()
            .map(|g| {
                let mut out = vec![BigInt::zero(); target.lattice.dim()];
                for (slot, &n) in target.divisors.iter().enumerate() {
                    let src = self.divisors.binary_search(&(n * k)).expect("nk divides d");
                    out[slot * kk..(slot + 1) * kk].clone_from_slice(&g[src * kk..(src + 1) * kk]);
                }
                target.coords_of_ghost(&out)
            })
            .collect()
    }

    /// Images of the basis under `V_k : W_d -> W_{dk}`, in `target` coordinates.
    pub fn verschiebung_matrix(&self, k: u64, target: &WittLattice) -> Result<Vec<Vec<BigInt>>, QWittError> {
        if target.level != self.level * k {
            return Err(QWittError::NotDivisor { d: k, m: target.level });
        }
        let kk = self.base.rank;
        self.lattice
            .basis()
            .iter()
            .map(|g| {
                let mut out = vec![BigInt::zero(); target.lattice.dim()];
                for (slot, &n) in target.divisors.iter().enumerate() {
                    if n % k == 0 {
                        let src = self.divisors.binary_search(&(n / k)).expect("n/k divides d");
                        for t in 0..kk {
                            out[slot * kk + t] = &g[src * kk + t] * k;
                        }
                    }
                }
                target.coords_of_ghost(&out)
            })
            .collect()
    }

    /// Images of the basis under restriction `W_d -> W_e` for `e | d`.
    pub fn restriction_matrix(&self, target: &WittLattice) -> Result<Vec<Vec<BigInt>>, QWittError> {
        if !self.level.is_multiple_of(target.level) {
            return Err(QWittError::NotDivisor { d: target.level, m: self.level });
        }
        let kk = self.base.rank;
        self.lattice
            .basis()
            .iter()
            .map(|g| {
                let mut out = vec![BigInt::zero(); target.lattice.dim()];
                for (slot, &n) in target.divisors.iter().enumerate() {
                    let src = self.divisors.binary_search(&n).expect("n divides d");
                    out[slot * kk..(slot + 1) * kk].clone_from_slice(&g[src * kk..(src + 1) * kk]);
                }
                target.coords_of_ghost(&out)
            })
            .collect()
    }

    /// Lattice coordinates of a Witt vector over `R` (coordinates lifted to `A`).
    pub fn from_witt(&self, ring: &CoeffRing, w: &WittVector) -> Result<Vec<i128>, QWittError> {
        if w.m() != self.level {
            return Err(QWittError::Precondition(format!("expected W_{} element, got W_{}", self.level, w.m())));
        }
        let k = self.base.rank;
        let lifts: Vec<Vec<BigInt>> = w.coords().iter().map(|c| pad(ring.additive_coords(c), k)).collect();
        let mut g = vec![BigInt::zero(); self.lattice.dim()];
        for (slot, &n) in self.divisors.iter().enumerate() {
            for (idx, &e) in self.divisors.iter().enumerate() {
                if n % e == 0 {
                    for (t, x) in a_pow(&lifts[idx], n / e).into_iter().enumerate() {
                        g[slot * k + t] += x * e;
                    }
                }
            }
        }
        Ok(reduce_vec(&self.coords_of_ghost(&g)?, self.modulus))
    }

    /// Witt coordinates over `R` of a lattice vector.
    pub fn to_witt(&self, ring: &CoeffRing, c: &[i128]) -> Result<WittVector, QWittError> {
        let k = self.base.rank;
        let big: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        let g = self.ghost_of_coords(&big);
        let mut xs: Vec<Vec<BigInt>> = Vec::with_capacity(self.divisors.len());
        for (slot, &n) in self.divisors.iter().enumerate() {
            let mut rest = g[slot * k..(slot + 1) * k].to_vec();
            for (idx, &e) in self.divisors[..slot].iter().enumerate() {
                if n % e == 0 {
                    for (r, x) in rest.iter_mut().zip(a_pow(&xs[idx], n / e)) {
                        *r -= x * e;
                    }
                }
            }
            let mut x = Vec::with_capacity(k);
            for r in rest {
                let (qt, rem) = r.div_rem(&BigInt::from(n));
                if !rem.is_zero() {
                    return Err(QWittError::InexactDivision(format!("Witt coordinate {n} of a ghost lattice vector")));
                }
                x.push(qt);
            }
            xs.push(x);
        }
        let coords: Vec<QPoly> = xs.iter().map(|x| ring.from_additive_coords(x)).collect();
        Ok(WittVector::new(self.level, coords)?)
    }
}

fn pad(mut v: Vec<BigInt>, k: usize) -> Vec<BigInt> {
    v.resize(k, BigInt::zero());
    v
}

fn ghost_product(a: &[BigInt], b: &[BigInt], k: usize) -> Vec<BigInt> {
    a.chunks(k).zip(b.chunks(k)).flat_map(|(x, y)| a_mul(x, y)).collect()
}

pub(crate) fn reduce_vec(v: &[BigInt], d: i128) -> Vec<i128> {
    let dd = BigInt::from(d);
    v.iter().map(|x| x.mod_floor(&dd).to_i128().expect("reduced below the modulus")).collect()
}

type LatticeKey = (u64, FiniteBase);

/// Memoised `W_d(R)` lattices.
pub fn witt_lattice(level: u64, base: FiniteBase) -> Result<Arc<WittLattice>, QWittError> {
    static MEMO: OnceLock<Mutex<HashMap<LatticeKey, Arc<WittLattice>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(Default::default);
    if let Some(l) = memo.lock().expect("lattice memo poisoned").get(&(level, base)) {
        return Ok(l.clone());
    }
    let built = Arc::new(WittLattice::build(level, base)?);
    let mut guard = memo.lock().expect("lattice memo poisoned");
    Ok(guard.entry((level, base)).or_insert(built).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wittcore::{ghost, witt_add, witt_mul};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orders_of_small_witt_rings() {
        let f2 = FiniteBase { modulus: 2, rank: 1 };
        assert_eq!(witt_lattice(1, f2).unwrap().relations().index(), BigInt::from(2));
        // W_2(F_2) = Z/4.
        let w2 = witt_lattice(2, f2).unwrap();
        assert_eq!(w2.relations().invariant_factors(), vec![BigInt::from(4)]);
        // W_6(F_3) = W_2(F_3) x W_3-typical = (Z/3)^2 x Z/9.
        let w6 = witt_lattice(6, FiniteBase { modulus: 3, rank: 1 }).unwrap();
        assert_eq!(w6.relations().index(), BigInt::from(81));
        let dual = witt_lattice(2, FiniteBase { modulus: 2, rank: 2 }).unwrap();
        assert_eq!(dual.relations().index(), BigInt::from(16));
    }

    #[test]
    fn lattice_arithmetic_matches_witt_polynomials() {
        let ring = CoeffRing::truncated(2, "x", 2).unwrap();
        let lat = witt_lattice(6, FiniteBase::of(&ring).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x = WittVector::random(&ring, 6, &mut rng, 2, 1);
            let y = WittVector::random(&ring, 6, &mut rng, 2, 1);
            let (cx, cy) = (lat.from_witt(&ring, &x).unwrap(), lat.from_witt(&ring, &y).unwrap());
            let sum: Vec<i128> = cx.iter().zip(&cy).map(|(a, b)| a + b).collect();
            let s = lat.relations().reduce(&sum);
            assert_eq!(s, lat.relations().reduce(&lat.from_witt(&ring, &witt_add(&ring, &x, &y).unwrap()).unwrap()));
            let p = lat.relations().reduce(&lat.mul(&cx, &cy));
            assert_eq!(p, lat.relations().reduce(&lat.from_witt(&ring, &witt_mul(&ring, &x, &y).unwrap()).unwrap()));
            assert_eq!(lat.to_witt(&ring, &lat.relations().reduce(&cx)).unwrap(), x);
            let g = lat.ghost_component(&cx, 3);
            assert_eq!(ring.from_additive_coords(&g), ghost(&ring, &x, 3).unwrap());
        }
    }
}
