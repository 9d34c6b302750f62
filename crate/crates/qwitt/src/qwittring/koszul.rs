use num_bigint::BigInt;

use crate::report::CheckRecord;
use crate::ringkit::{prime_factors, CoeffRing};

use super::group::{image_order, FinGroup, LinearMap};
use super::presented::presented_ring;
use super::QWittError;

/// Subsets of `0..s` of size `k`, lexicographic.
fn subsets(s: usize, k: usize) -> Vec<Vec<usize>> {
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

/// Orders and map data of one spot of the augmented complex, for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulSpot {
    /// Homological position: `k` for `⊕_{|S|=k} qW_{m/p_S}`, `-1` for `R[q]/Φ_m`.
    pub position: i64,
    pub order: BigInt,
    pub incoming_image: BigInt,
    pub outgoing_kernel: BigInt,
}

/// The augmented complex
/// `0 -> qW_{m/p_1..p_s} -> .. -> ⊕_i qW_{m/p_i} -> qW_m -> R[q]/Φ_m(q) -> 0`
/// with differential `±V_{p_j}` from `S ∪ {j}` to `S`, sign `(-1)^{#{i ∈ S : i < j}}`.
pub struct KoszulComplex {
    groups: Vec<FinGroup>,
    /// `maps[k] : groups[k + 1] -> groups[k]`, where `groups[0]` is `R[q]/Φ_m`.
    maps: Vec<LinearMap>,
}

impl KoszulComplex {
    pub fn build(ring: &CoeffRing, m: u64) -> Result<Self, QWittError> {
        Self::build_with_signs(ring, m, true)
    }

    fn build_with_signs(ring: &CoeffRing, m: u64, signed: bool) -> Result<Self, QWittError> {
        let primes = prime_factors(m);
        let s = primes.len();
        let level = |set: &[usize]| m / set.iter().map(|&i| primes[i]).product::<u64>();
        let top = presented_ring(ring, m)?;
        let mut groups = vec![top.cyclotomic_group()?];
        let mut maps = vec![top.ghost_one_map()];
        let mut layers: Vec<Vec<Vec<usize>>> = Vec::new();
        for k in 0..=s {
            let sets = subsets(s, k);
            let rings = sets.iter().map(|t| presented_ring(ring, level(t))).collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&FinGroup> = rings.iter().map(|r| r.group()).collect();
            groups.push(FinGroup::direct_sum(&refs)?);
            layers.push(sets);
        }
        for k in 0..s {
            let (src, tgt) = (&layers[k + 1], &layers[k]);
            let src_rings = src.iter().map(|t| presented_ring(ring, level(t))).collect::<Result<Vec<_>, _>>()?;
            let tgt_rings = tgt.iter().map(|t| presented_ring(ring, level(t))).collect::<Result<Vec<_>, _>>()?;
            let mut blocks = Vec::new();
            for (a, big) in src.iter().enumerate() {
                for (b, small) in tgt.iter().enumerate() {
                    let Some(&j) = big.iter().find(|x| !small.contains(x)) else { continue };
                    if !small.iter().all(|x| big.contains(x)) {
                        continue;
                    }
                    let sign = if !signed || small.iter().filter(|&&i| i < j).count() % 2 == 0 { 1 } else { -1 };
                    let v = src_rings[a].verschiebung_map(&tgt_rings[b])?.scaled(sign, tgt_rings[b].modulus());
                    blocks.push((a, b, v));
                }
            }
            let sdims: Vec<usize> = src_rings.iter().map(|r| r.dim()).collect();
            let tdims: Vec<usize> = tgt_rings.iter().map(|r| r.dim()).collect();
            let refs: Vec<(usize, usize, &LinearMap)> = blocks.iter().map(|(a, b, v)| (*a, *b, v)).collect();
            maps.push(LinearMap::block(&sdims, &tdims, &refs));
        }
        Ok(KoszulComplex { groups, maps })
    }

    /// Whether consecutive maps compose to zero.
    pub fn is_complex(&self) -> bool {
        (1..self.maps.len()).all(|k| {
            let comp = self.maps[k].then(&self.maps[k - 1], self.groups[k - 1].modulus());
            comp.images.iter().all(|v| self.groups[k - 1].is_zero(v))
        })
    }

    /// Image and kernel orders at every spot, from `R[q]/Φ_m` upwards.
    pub fn spots(&self) -> Vec<KoszulSpot> {
        let n = self.groups.len();
        (0..n)
            .map(|k| {
                let incoming_image =
                    if k + 1 < n { image_order(&self.maps[k], &self.groups[k]) } else { BigInt::from(1) };
                let outgoing_kernel = if k == 0 {
                    self.groups[0].order()
                } else {
                    self.groups[k].order() / image_order(&self.maps[k - 1], &self.groups[k - 1])
                };
                KoszulSpot { position: k as i64 - 1, order: self.groups[k].order(), incoming_image, outgoing_kernel }
            })
            .collect()
    }
}

/// Exactness of the augmented Koszul complex at every spot.
pub fn check_koszul_exact(ring: &CoeffRing, m: u64) -> Result<CheckRecord, QWittError> {
    let cx = KoszulComplex::build(ring, m)?;
    let rec = CheckRecord::new("koszul-exact").param("ring", ring).param("m", m);
    if !cx.is_complex() {
        return Ok(rec.fail("differentials do not compose to zero"));
    }
    let spots = cx.spots();
    let bad = spots.iter().find(|s| s.incoming_image != s.outgoing_kernel);
    let orders: Vec<String> = spots.iter().map(|s| s.order.to_string()).collect();
    Ok(rec.param("orders", orders.join("/")).verdict(bad.is_none(), || {
        let s = bad.expect("a failing spot");
        format!("position {}: image {} vs kernel {}", s.position, s.incoming_image, s.outgoing_kernel)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn exact_for_small_levels() {
        for spec in ["f2", "zmod:4", "f3"] {
            let r: CoeffRing = spec.parse().unwrap();
            for m in [2, 4, 6] {
                let c = check_koszul_exact(&r, m).unwrap();
                assert!(c.passed(), "{c:?}");
            }
        }
    }

    #[test]
    fn dropping_signs_breaks_the_complex() {
        // With both V-components positive the composite qW_1 -> qW_6 is 2 V_6, nonzero over F_3.
        let r: CoeffRing = "f3".parse().unwrap();
        assert!(KoszulComplex::build(&r, 6).unwrap().is_complex());
        assert!(!KoszulComplex::build_with_signs(&r, 6, false).unwrap().is_complex());
    }
}
