use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::ringkit::{cyclotomic_coeffs, divisors, euler_phi, upoly_rem, CoeffRing, ModLattice, Mono, QPoly};
use crate::wittcore::WittVector;

use super::group::{reduce_big_rows, FinGroup, LinearMap};
use super::witt_lattice::{witt_lattice, FiniteBase, WittLattice};
use super::QWittError;

/// Largest level accepted by the presentation engine.
pub const MAX_PRESENTED_LEVEL: u64 = 12;
/// Iteration cap for the ideal closure.
pub const CLOSURE_CAP: usize = 64;

/// `qW_m(R)` for a finite ring `R`, as the quotient of `W_m(R)[q]/(q^m - 1)` by the ideal
/// forcing `V∘F = [m/d]_{q^d}`.
///
/// The ambient group is `Z^{m * rank}`: coordinate `j * rank + i` is the Witt basis
/// element `i` times `q^j`.
#[derive(Debug)]
pub struct PresentedRing {
    ring: CoeffRing,
    m: u64,
    lattice: Arc<WittLattice>,
    group: FinGroup,
    iterations: usize,
}

impl PresentedRing {
    fn build(ring: &CoeffRing, m: u64) -> Result<Self, QWittError> {
        if m == 0 || m > MAX_PRESENTED_LEVEL {
            return Err(QWittError::Precondition(format!(
                "presented level must lie in 1..={MAX_PRESENTED_LEVEL}, got {m}"
            )));
        }
        let base = FiniteBase::of(ring)?;
        let lat = witt_lattice(m, base)?;
        let l = lat.rank();
        let slots = m as usize;
        let dim = slots * l;
        let modulus = lat.modulus();
        let mut rel = ModLattice::new(dim, modulus)?;
        for r in lat.relations().generators() {
            for j in 0..slots {
                rel.insert(&place(&r, j, l, dim));
            }
        }
        for d in divisors(m) {
            let ld = witt_lattice(d, base)?;
            let v_md = reduce_big_rows(&ld.verschiebung_matrix(m / d, &lat)?, modulus);
            for (y, vy) in v_md.iter().enumerate() {
                // (q^d - 1) V_{m/d}(y)
                if d != m {
                    let mut g = place(vy, d as usize, l, dim);
                    sub_assign(&mut g, &place(vy, 0, l, dim));
                    rel.insert(&g);
                }
                // [d/e]_{q^e} V_{m/d}(y) - V_{m/e} F_{d/e}(y)
                for e in divisors(d) {
                    if e == d {
                        continue;
                    }
                    let le = witt_lattice(e, base)?;
                    let f = ld.frobenius_matrix(d / e, &le)?;
                    let v_me = reduce_big_rows(&le.verschiebung_matrix(m / e, &lat)?, modulus);
                    let fy = reduce_big_rows(&f[y..y + 1], modulus).remove(0);
                    let vfy = LinearMap::new(v_me, l).apply(&fy, modulus);
                    let mut g = vec![0i128; dim];
                    for t in 0..(d / e) as usize {
                        add_assign(&mut g, &place(vy, t * e as usize, l, dim));
                    }
                    sub_assign(&mut g, &place(&vfy, 0, l, dim));
                    rel.insert(&g);
                }
            }
        }
        let mut iterations = 0;
        loop {
            if iterations == CLOSURE_CAP {
                return Err(QWittError::FixpointCap { m, iterations, order: rel.index().to_string() });
            }
            iterations += 1;
            let before = rel.index();
            for g in rel.generators() {
                rel.insert(&shift_q(&g, l, slots));
                for b in 0..l {
                    rel.insert(&mul_by_basis(&lat, &g, b, slots));
                }
            }
            if rel.index() == before {
                break;
            }
        }
        Ok(PresentedRing { ring: ring.clone(), m, lattice: lat, group: FinGroup::new(rel), iterations })
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Rank of the Witt lattice, i.e. coordinates per power of `q`.
    pub fn slot_rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    pub fn modulus(&self) -> i128 {
        self.group.modulus()
    }

    pub fn group(&self) -> &FinGroup {
        &self.group
    }

    pub fn witt_lattice(&self) -> &WittLattice {
        &self.lattice
    }

    /// Rounds of the ideal closure until it stabilised.
    pub fn closure_iterations(&self) -> usize {
        self.iterations
    }

    pub fn order(&self) -> BigInt {
        self.group.order()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.group.invariant_factors()
    }

    pub fn reduce(&self, x: &[i128]) -> Vec<i128> {
        self.group.reduce(x)
    }

    pub fn zero(&self) -> Vec<i128> {
        vec![0; self.dim()]
    }

    pub fn one(&self) -> Vec<i128> {
        self.reduce(&place(self.lattice.one(), 0, self.slot_rank(), self.dim()))
    }

    pub fn q_pow(&self, j: u64) -> Vec<i128> {
        let slot = (j % self.m) as usize;
        self.reduce(&place(self.lattice.one(), slot, self.slot_rank(), self.dim()))
    }

    /// Image of `w q^j` for a Witt vector `w` in `W_m(R)`.
    pub fn from_witt(&self, w: &WittVector, j: u64) -> Result<Vec<i128>, QWittError> {
        let c = self.lattice.from_witt(&self.ring, w)?;
        Ok(self.reduce(&place(&c, (j % self.m) as usize, self.slot_rank(), self.dim())))
    }

    /// Writes `x` as `Σ_j w_j q^j` with `w_j` in `W_m(R)` (not unique).
    pub fn to_witt_terms(&self, x: &[i128]) -> Result<Vec<WittVector>, QWittError> {
        let l = self.slot_rank();
        x.chunks(l).map(|c| self.lattice.to_witt(&self.ring, &self.lattice.relations().reduce(c))).collect()
    }

    /// Printable form `[w_0] + [w_1] q + ...` of the canonical representative.
    pub fn format(&self, x: &[i128]) -> String {
        let terms = match self.to_witt_terms(&self.reduce(x)) {
            Ok(t) => t,
            Err(_) => return format!("{x:?}"),
        };
        let parts: Vec<String> = terms
            .iter()
            .enumerate()
            .filter(|(_, w)| w.coords().iter().any(|c| !c.is_zero()))
            .map(|(j, w)| match j {
                0 => w.to_text(&self.ring),
                1 => format!("{}*q", w.to_text(&self.ring)),
                _ => format!("{}*q^{j}", w.to_text(&self.ring)),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn add(&self, x: &[i128], y: &[i128]) -> Vec<i128> {
        let s: Vec<i128> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    pub fn sub(&self, x: &[i128], y: &[i128]) -> Vec<i128> {
        let s: Vec<i128> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, x: &[i128]) -> Vec<i128> {
        let s: Vec<i128> = x.iter().map(|a| -a).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, x: &[i128], c: i128) -> Vec<i128> {
        let d = self.modulus();
        let s: Vec<i128> = x.iter().map(|a| (a * c.rem_euclid(d)).rem_euclid(d)).collect();
        self.reduce(&s)
    }

    pub fn mul(&self, x: &[i128], y: &[i128]) -> Vec<i128> {
        let l = self.slot_rank();
        let slots = self.m as usize;
        let d = self.modulus();
        let mut out = vec![0i128; self.dim()];
        for j1 in 0..slots {
            let xs = &x[j1 * l..(j1 + 1) * l];
            if xs.iter().all(|&a| a == 0) {
                continue;
            }
            for j2 in 0..slots {
                let ys = &y[j2 * l..(j2 + 1) * l];
                if ys.iter().all(|&a| a == 0) {
                    continue;
                }
                let p = self.lattice.mul(xs, ys);
                let j = (j1 + j2) % slots;
                for (o, v) in out[j * l..(j + 1) * l].iter_mut().zip(p) {
                    *o = (*o + v).rem_euclid(d);
                }
            }
        }
        self.reduce(&out)
    }

    /// Multiplication by `[k]_{q^d} = 1 + q^d + ... + q^{d(k-1)}`.
    pub fn mul_q_analogue(&self, x: &[i128], k: u64, d: u64) -> Vec<i128> {
        let mut acc = self.zero();
        for t in 0..k {
            acc = self.add(&acc, &self.shift(x, d * t));
        }
        acc
    }

    /// Multiplication by `q^j`.
    pub fn shift(&self, x: &[i128], j: u64) -> Vec<i128> {
        let mut y = x.to_vec();
        for _ in 0..(j % self.m) {
            y = shift_q(&y, self.slot_rank(), self.m as usize);
        }
        y
    }

    /// The ring map `W_m(R) -> qW_m(R)`, as a map on lattice coordinates.
    pub fn witt_inclusion(&self) -> LinearMap {
        let l = self.slot_rank();
        LinearMap::new((0..l).map(|i| place(&unit(i, l), 0, l, self.dim())).collect(), self.dim())
    }

    /// `F_{m/d} : qW_m(R) -> qW_d(R)`, `F(w q^j) = F(w) q^{j mod d}`.
    pub fn frobenius_map(&self, target: &PresentedRing) -> Result<LinearMap, QWittError> {
        self.same_ring(target)?;
        let d = target.m;
        if !self.m.is_multiple_of(d) {
            return Err(QWittError::NotDivisor { d, m: self.m });
        }
        let f = reduce_big_rows(&self.lattice.frobenius_matrix(self.m / d, &target.lattice)?, target.modulus());
        let (l, lt) = (self.slot_rank(), target.slot_rank());
        let images = (0..self.dim()).map(|idx| place(&f[idx % l], (idx / l) % d as usize, lt, target.dim())).collect();
        Ok(LinearMap::new(images, target.dim()))
    }

    /// `V_{m/d} : qW_d(R) -> qW_m(R)`, `V(w q^j) = V(w) q^j`; here `self` is level `d`.
    pub fn verschiebung_map(&self, target: &PresentedRing) -> Result<LinearMap, QWittError> {
        self.same_ring(target)?;
        let m = target.m;
        if !m.is_multiple_of(self.m) {
            return Err(QWittError::NotDivisor { d: self.m, m });
        }
        let v = reduce_big_rows(&self.lattice.verschiebung_matrix(m / self.m, &target.lattice)?, target.modulus());
        let (l, lt) = (self.slot_rank(), target.slot_rank());
        let images = (0..self.dim()).map(|idx| place(&v[idx % l], idx / l, lt, target.dim())).collect();
        Ok(LinearMap::new(images, target.dim()))
    }

    /// `R[q]/Φ_m(q)` as a group: coordinate `c * K + t` is `q^c x^t`.
    pub fn cyclotomic_group(&self) -> Result<FinGroup, QWittError> {
        let base = self.lattice.base();
        FinGroup::uniform(euler_phi(self.m) as usize * base.rank, base.modulus as i128)
    }

    /// The first ghost map `qW_m(R) -> R[q]/Φ_m(q)`.
    pub fn ghost_one_map(&self) -> LinearMap {
        let base = self.lattice.base();
        let k = base.rank;
        let phi = cyclotomic_coeffs(self.m);
        let deg = euler_phi(self.m) as usize;
        let n = BigInt::from(base.modulus);
        let l = self.slot_rank();
        let q_red: Vec<Vec<BigInt>> = (0..self.m as usize)
            .map(|j| {
                let mut qj = vec![BigInt::from(0); j + 1];
                qj[j] = BigInt::one();
                let mut r = upoly_rem(&qj, &phi);
                r.resize(deg, BigInt::from(0));
                r
            })
            .collect();
        let images = (0..self.dim())
            .map(|idx| {
                let (j, i) = (idx / l, idx % l);
                let g = self.lattice.ghost_component(&unit(i, l), 1);
                let mut out = vec![0i128; deg * k];
                for (c, qc) in q_red[j].iter().enumerate() {
                    for (t, gt) in g.iter().enumerate() {
                        let v: BigInt = (qc * gt) % &n;
                        out[c * k + t] = v.to_i128().expect("reduced").rem_euclid(base.modulus as i128);
                    }
                }
                out
            })
            .collect();
        LinearMap::new(images, deg * k)
    }

    /// Converts a coordinate vector of `R[q]/Φ_d(q)` to a polynomial in `q` over `R`.
    pub fn cyclotomic_to_poly(&self, v: &[i128]) -> QPoly {
        let k = self.lattice.base().rank;
        let mut p = QPoly::zero(self.ring.nvars());
        for (idx, &c) in v.iter().enumerate() {
            if c != 0 {
                let t = if self.ring.nvars() == 0 { vec![] } else { vec![(idx % k) as u32] };
                p.add_term(Mono { q: (idx / k) as u32, t }, BigInt::from(c));
            }
        }
        self.ring.reduce(&p)
    }

    fn same_ring(&self, other: &PresentedRing) -> Result<(), QWittError> {
        if self.lattice.base() != other.lattice.base() {
            return Err(QWittError::Precondition("presented rings over different bases".into()));
        }
        Ok(())
    }
}

/// Memoised presentations keyed by ring text and level.
pub fn presented_ring(ring: &CoeffRing, m: u64) -> Result<Arc<PresentedRing>, QWittError> {
    type Memo = Mutex<HashMap<(String, u64), Arc<PresentedRing>>>;
    static MEMO: OnceLock<Memo> = OnceLock::new();
    let key = (ring.to_string(), m);
    let memo = MEMO.get_or_init(Default::default);
    if let Some(p) = memo.lock().expect("presentation memo poisoned").get(&key) {
        return Ok(p.clone());
    }
    let built = Arc::new(PresentedRing::build(ring, m)?);
    let mut guard = memo.lock().expect("presentation memo poisoned");
    Ok(guard.entry(key).or_insert(built).clone())
}

/// `gh_{m/d} = gh_1 ∘ F_{m/d}`, landing in `R[q]/Φ_d(q)`.
pub fn qw_ghost(p: &PresentedRing, x: &[i128], d: u64) -> Result<QPoly, QWittError> {
    if d == 0 || !p.m.is_multiple_of(d) {
        return Err(QWittError::NotDivisor { d, m: p.m });
    }
    let pd = presented_ring(&p.ring, d)?;
    let fx = p.frobenius_map(&pd)?.apply(x, pd.modulus());
    let g = pd.ghost_one_map().apply(&fx, pd.cyclotomic_group()?.modulus());
    Ok(pd.cyclotomic_to_poly(&g))
}

pub(crate) fn unit(i: usize, l: usize) -> Vec<i128> {
    let mut v = vec![0; l];
    v[i] = 1;
    v
}

pub(crate) fn place(v: &[i128], slot: usize, l: usize, dim: usize) -> Vec<i128> {
    let mut out = vec![0; dim];
    out[slot * l..slot * l + v.len()].copy_from_slice(v);
    out
}

fn add_assign(a: &mut [i128], b: &[i128]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn sub_assign(a: &mut [i128], b: &[i128]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x -= y;
    }
}

fn shift_q(x: &[i128], l: usize, slots: usize) -> Vec<i128> {
    let mut out = vec![0; x.len()];
    for j in 0..slots {
        let t = (j + 1) % slots;
        out[t * l..(t + 1) * l].copy_from_slice(&x[j * l..(j + 1) * l]);
    }
    out
}

fn mul_by_basis(lat: &WittLattice, x: &[i128], b: usize, slots: usize) -> Vec<i128> {
    let l = lat.rank();
    let d = lat.modulus();
    let mut out = vec![0i128; x.len()];
    for j in 0..slots {
        for (i, &c) in x[j * l..(j + 1) * l].iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &t) in out[j * l..(j + 1) * l].iter_mut().zip(lat.basis_product(i, b)) {
                *o = (*o + c * t).rem_euclid(d);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wittcore::teichmuller;

    #[test]
    fn level_one_is_the_ring() {
        let f2: CoeffRing = "f2".parse().unwrap();
        let p = presented_ring(&f2, 1).unwrap();
        assert_eq!(p.order(), BigInt::from(2));
        let x = p.one();
        assert_eq!(qw_ghost(&p, &x, 1).unwrap(), f2.one());
    }

    #[test]
    fn ring_axioms_on_small_presentations() {
        for spec in ["f2", "zmod:4", "f3"] {
            let r: CoeffRing = spec.parse().unwrap();
            for m in [2, 3, 4, 6] {
                let p = presented_ring(&r, m).unwrap();
                let one = p.one();
                let q = p.q_pow(1);
                assert_eq!(p.shift(&one, m), one);
                let mut qm = one.clone();
                for _ in 0..m {
                    qm = p.mul(&qm, &q);
                }
                assert_eq!(qm, one, "q^m = 1 in qW_{m}({spec})");
                let g: Vec<Vec<i128>> = (0..p.dim()).map(|i| p.reduce(&unit(i, p.dim()))).collect();
                for a in &g {
                    assert_eq!(p.mul(a, &one), p.reduce(a));
                    for b in &g {
                        assert_eq!(p.mul(a, b), p.mul(b, a));
                    }
                }
                // Products respect the relations.
                for r in p.group().relations().generators().iter().take(8) {
                    for b in &g {
                        assert!(p.group().is_zero(&p.mul(r, b)));
                    }
                }
            }
        }
    }

    #[test]
    fn teichmuller_images_and_ghosts() {
        let f3: CoeffRing = "f3".parse().unwrap();
        let p = presented_ring(&f3, 6).unwrap();
        let t = p.from_witt(&teichmuller(&f3, &f3.from_int(2), 6), 0).unwrap();
        // gh_{6/d}([2]) = 2^{6/d}.
        assert_eq!(qw_ghost(&p, &t, 6).unwrap(), f3.from_int(2));
        assert_eq!(qw_ghost(&p, &t, 3).unwrap(), f3.from_int(1));
        assert_eq!(qw_ghost(&p, &t, 1).unwrap(), f3.from_int(1));
    }
}
