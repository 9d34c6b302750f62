use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::ringkit::ModLattice;

use super::QWittError;

/// Orders up to this bound are enumerated element by element in the checks.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 12;

/// A finite abelian group `Z^dim / L` with `D Z^dim ⊆ L`.
#[derive(Clone, Debug)]
pub struct FinGroup {
    relations: ModLattice,
}

impl FinGroup {
    pub fn new(relations: ModLattice) -> Self {
        FinGroup { relations }
    }

    /// `(Z/n)^dim`.
    pub fn uniform(dim: usize, n: i128) -> Result<Self, QWittError> {
        Ok(FinGroup { relations: ModLattice::new(dim, n)? })
    }

    pub fn dim(&self) -> usize {
        self.relations.dim()
    }

    pub fn modulus(&self) -> i128 {
        self.relations.modulus()
    }

    pub fn relations(&self) -> &ModLattice {
        &self.relations
    }

    pub fn order(&self) -> BigInt {
        self.relations.index()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.relations.invariant_factors()
    }

    pub fn exponent(&self) -> BigInt {
        self.relations.exponent()
    }

    pub fn reduce(&self, v: &[i128]) -> Vec<i128> {
        self.relations.reduce(v)
    }

    pub fn is_zero(&self, v: &[i128]) -> bool {
        self.relations.contains(v)
    }

    pub fn unit(&self, i: usize) -> Vec<i128> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    /// Generators of the relation lattice, including the `D e_i`.
    pub fn relation_generators(&self) -> Vec<Vec<i128>> {
        let mut out = self.relations.generators();
        for i in 0..self.dim() {
            let mut v = vec![0; self.dim()];
            v[i] = self.modulus();
            out.push(v);
        }
        out
    }

    /// Every element when the order is at most [`EXHAUSTIVE_LIMIT`], otherwise the
    /// standard generators. The flag says which one was returned.
    pub fn check_elements(&self) -> (Vec<Vec<i128>>, bool) {
        self.check_elements_up_to(EXHAUSTIVE_LIMIT)
    }

    pub fn check_elements_up_to(&self, limit: u64) -> (Vec<Vec<i128>>, bool) {
        if self.order() <= BigInt::from(limit) {
            (self.relations.coset_representatives().collect(), true)
        } else {
            ((0..self.dim()).map(|i| self.unit(i)).collect(), false)
        }
    }

    /// Direct sum; coordinates are concatenated.
    pub fn direct_sum(parts: &[&FinGroup]) -> Result<FinGroup, QWittError> {
        let modulus = parts.iter().fold(1i128, |a, g| a.lcm(&g.modulus()));
        let dim: usize = parts.iter().map(|g| g.dim()).sum();
        let mut rel = ModLattice::new(dim, modulus)?;
        let mut offset = 0;
        for g in parts {
            for r in g.relation_generators() {
                let mut v = vec![0; dim];
                v[offset..offset + g.dim()].copy_from_slice(&r);
                rel.insert(&v);
            }
            offset += g.dim();
        }
        Ok(FinGroup { relations: rel })
    }
}

/// A homomorphism `Z^a -> Z^b` given by the images of the unit vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub(crate) images: Vec<Vec<i128>>,
    pub(crate) target_dim: usize,
}

impl LinearMap {
    pub fn new(images: Vec<Vec<i128>>, target_dim: usize) -> Self {
        LinearMap { images, target_dim }
    }

    pub fn zero(source_dim: usize, target_dim: usize) -> Self {
        LinearMap { images: vec![vec![0; target_dim]; source_dim], target_dim }
    }

    /// Images of the unit vectors.
    pub fn images(&self) -> &[Vec<i128>] {
        &self.images
    }

    pub fn source_dim(&self) -> usize {
        self.images.len()
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// Applies the map with arithmetic modulo `modulus`.
    pub fn apply(&self, x: &[i128], modulus: i128) -> Vec<i128> {
        let mut out = vec![0i128; self.target_dim];
        for (&c, img) in x.iter().zip(&self.images) {
            let c = c.rem_euclid(modulus);
            if c == 0 {
                continue;
            }
            for (o, &t) in out.iter_mut().zip(img) {
                if t != 0 {
                    *o = (*o + c * t.rem_euclid(modulus)).rem_euclid(modulus);
                }
            }
        }
        out
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &LinearMap, modulus: i128) -> LinearMap {
        LinearMap { images: self.images.iter().map(|v| next.apply(v, modulus)).collect(), target_dim: next.target_dim }
    }

    pub fn scaled(&self, c: i128, modulus: i128) -> LinearMap {
        LinearMap {
            images: self.images.iter().map(|v| v.iter().map(|x| (x * c).rem_euclid(modulus)).collect()).collect(),
            target_dim: self.target_dim,
        }
    }

    /// Block matrix from blocks `(row, col, map)`; block sizes given by the dims.
    pub fn block(source_dims: &[usize], target_dims: &[usize], blocks: &[(usize, usize, &LinearMap)]) -> LinearMap {
        let src_off: Vec<usize> = offsets(source_dims);
        let tgt_off: Vec<usize> = offsets(target_dims);
        let sdim: usize = source_dims.iter().sum();
        let tdim: usize = target_dims.iter().sum();
        let mut images = vec![vec![0i128; tdim]; sdim];
        for &(s, t, map) in blocks {
            for (i, img) in map.images.iter().enumerate() {
                for (j, &x) in img.iter().enumerate() {
                    images[src_off[s] + i][tgt_off[t] + j] += x;
                }
            }
        }
        LinearMap { images, target_dim: tdim }
    }
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    dims.iter()
        .map(|d| {
            let o = acc;
            acc += d;
            o
        })
        .collect()
}

/// Order of the image of `map : source -> target`.
pub fn image_order(map: &LinearMap, target: &FinGroup) -> BigInt {
    let mut lat = target.relations.clone();
    for img in &map.images {
        lat.insert(img);
    }
    target.order() / lat.index()
}

/// Order of the kernel of `map : source -> target`.
pub fn kernel_order(map: &LinearMap, source: &FinGroup, target: &FinGroup) -> BigInt {
    source.order() / image_order(map, target)
}

/// Whether `map` sends every relation of `source` to a relation of `target`.
pub fn is_well_defined(map: &LinearMap, source: &FinGroup, target: &FinGroup) -> bool {
    source.relation_generators().iter().all(|r| target.is_zero(&map.apply(r, target.modulus())))
}

pub(crate) fn to_i128(x: &BigInt) -> i128 {
    x.to_i128().expect("value fits in i128")
}

pub(crate) fn reduce_big_rows(rows: &[Vec<BigInt>], modulus: i128) -> Vec<Vec<i128>> {
    let d = BigInt::from(modulus);
    rows.iter().map(|r| r.iter().map(|x| to_i128(&x.mod_floor(&d))).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn image_and_kernel_orders() {
        // Z/4 --(x2)--> Z/4: image {0, 2}, kernel {0, 2}.
        let g = FinGroup::uniform(1, 4).unwrap();
        let m = LinearMap::new(vec![vec![2]], 1);
        assert!(is_well_defined(&m, &g, &g));
        assert_eq!(image_order(&m, &g), BigInt::from(2));
        assert_eq!(kernel_order(&m, &g, &g), BigInt::from(2));
        // Z/2 --(x1)--> Z/4 is not well defined.
        let h = FinGroup::uniform(1, 2).unwrap();
        assert!(!is_well_defined(&LinearMap::new(vec![vec![1]], 1), &h, &g));
    }

    #[test]
    fn direct_sums() {
        let s = FinGroup::direct_sum(&[&FinGroup::uniform(1, 4).unwrap(), &FinGroup::uniform(2, 6).unwrap()]).unwrap();
        assert_eq!(s.order(), BigInt::from(144));
        let expected: Vec<BigInt> = [2, 6, 12].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(s.invariant_factors(), expected);
        assert_eq!(s.exponent(), BigInt::from(12));
        let (elems, exhaustive) = s.check_elements();
        assert!(exhaustive);
        assert_eq!(elems.len(), 144);
    }
}
