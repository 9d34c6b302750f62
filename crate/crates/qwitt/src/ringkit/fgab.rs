use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::intmat::{snf, solve_with_snf, IntMatrix, Snf};
use super::RingError;

/// Finitely generated abelian group `Z^g / (row span of relations)`.
#[derive(Clone, Debug)]
pub struct FGAbGroup {
    generators: usize,
    relations: Vec<Vec<BigInt>>,
    snf: Snf,
}

impl FGAbGroup {
    pub fn new(generators: usize, relations: Vec<Vec<BigInt>>) -> Result<Self, RingError> {
        if let Some(r) = relations.iter().find(|r| r.len() != generators) {
            return Err(RingError::Dimension { expected: generators, got: r.len() });
        }
        let m = IntMatrix::from_cols(&relations, generators);
        let snf = snf(&m);
        Ok(FGAbGroup { generators, relations, snf })
    }

    pub fn free(generators: usize) -> Self {
        Self::new(generators, vec![]).expect("no relations")
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &[Vec<BigInt>] {
        &self.relations
    }

    /// Nontrivial invariant factors, torsion first, then `0` for each free summand.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = self.snf.diag.iter().filter(|d| !d.is_one() && !d.is_zero()).cloned().collect();
        out.extend(std::iter::repeat_n(BigInt::zero(), self.free_rank()));
        out
    }

    pub fn free_rank(&self) -> usize {
        self.generators - self.snf.rank
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank() > 0 {
            return None;
        }
        Some(self.snf.diag.iter().take(self.snf.rank).product())
    }

    pub fn is_trivial(&self) -> bool {
        self.order().is_some_and(|o| o.is_one())
    }

    /// Whether `v` lies in `span(gens) + relations`.
    pub fn in_subgroup(&self, gens: &[Vec<BigInt>], v: &[BigInt]) -> Result<bool, RingError> {
        let mut cols = gens.to_vec();
        cols.extend(self.relations.iter().cloned());
        for c in &cols {
            if c.len() != self.generators {
                return Err(RingError::Dimension { expected: self.generators, got: c.len() });
            }
        }
        if v.len() != self.generators {
            return Err(RingError::Dimension { expected: self.generators, got: v.len() });
        }
        let m = IntMatrix::from_cols(&cols, self.generators);
        let s = snf(&m);
        Ok(solve_with_snf(&s, cols.len(), v).is_some())
    }

    /// Whether `v` is zero in the group.
    pub fn is_zero_elem(&self, v: &[BigInt]) -> Result<bool, RingError> {
        if v.len() != self.generators {
            return Err(RingError::Dimension { expected: self.generators, got: v.len() });
        }
        Ok(solve_with_snf(&self.snf, self.relations.len(), v).is_some())
    }

    /// Whether `gens_a` and `gens_b` generate the same subgroup.
    pub fn subgroup_equal(&self, gens_a: &[Vec<BigInt>], gens_b: &[Vec<BigInt>]) -> Result<bool, RingError> {
        let cols_b = self.with_relations(gens_b)?;
        let cols_a = self.with_relations(gens_a)?;
        let sb = snf(&IntMatrix::from_cols(&cols_b, self.generators));
        let sa = snf(&IntMatrix::from_cols(&cols_a, self.generators));
        for a in gens_a {
            if solve_with_snf(&sb, cols_b.len(), a).is_none() {
                return Ok(false);
            }
        }
        for b in gens_b {
            if solve_with_snf(&sa, cols_a.len(), b).is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn with_relations(&self, gens: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>, RingError> {
        for g in gens {
            if g.len() != self.generators {
                return Err(RingError::Dimension { expected: self.generators, got: g.len() });
            }
        }
        let mut cols = gens.to_vec();
        cols.extend(self.relations.iter().cloned());
        Ok(cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn subgroup_examples() {
        let z2 = FGAbGroup::free(2);
        assert!(z2.subgroup_equal(&[v(&[1, 0]), v(&[0, 1])], &[v(&[1, 1]), v(&[0, 1])]).unwrap());
        let z = FGAbGroup::free(1);
        assert!(!z.subgroup_equal(&[v(&[2])], &[v(&[4])]).unwrap());
        let z6 = FGAbGroup::new(1, vec![v(&[6])]).unwrap();
        assert!(z6.subgroup_equal(&[v(&[2])], &[v(&[4])]).unwrap());
        assert!(z6.subgroup_equal(&[v(&[1, 0])], &[v(&[1])]).is_err());
    }

    #[test]
    fn orders_and_factors() {
        let g = FGAbGroup::new(3, vec![v(&[2, 0, 0]), v(&[0, 4, 0])]).unwrap();
        assert_eq!(g.order(), None);
        assert_eq!(g.invariant_factors(), v(&[2, 4, 0]));
        let h = FGAbGroup::new(2, vec![v(&[2, 4]), v(&[6, 8])]).unwrap();
        assert_eq!(h.order(), Some(BigInt::from(8)));
        assert!(h.is_zero_elem(&v(&[2, 4])).unwrap());
        assert!(!h.is_zero_elem(&v(&[1, 0])).unwrap());
    }
}
