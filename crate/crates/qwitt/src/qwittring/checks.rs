use num_bigint::BigInt;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::CheckRecord;
use crate::ringkit::{cyclotomic_coeffs, divisors, prime_factors, CoeffRing};
use crate::wittcore::{ghost, WittVector};

use super::group::{image_order, is_well_defined, FinGroup, LinearMap};
use super::presented::{presented_ring, qw_ghost, PresentedRing};
use super::QWittError;

fn record(name: &str, ring: &CoeffRing, m: u64) -> CheckRecord {
    CheckRecord::new(name).param("ring", ring).param("m", m)
}

/// Compares two maps `source -> target` on every element (small groups) or on generators.
fn maps_agree(a: &LinearMap, b: &LinearMap, source: &FinGroup, target: &FinGroup) -> (bool, bool, Option<Vec<i128>>) {
    let (elems, exhaustive) = source.check_elements();
    for x in elems {
        let ya = a.apply(&x, target.modulus());
        let yb = b.apply(&x, target.modulus());
        let diff: Vec<i128> = ya.iter().zip(&yb).map(|(u, v)| u - v).collect();
        if !target.is_zero(&diff) {
            return (false, exhaustive, Some(x));
        }
    }
    (true, exhaustive, None)
}

fn identity_map(dim: usize) -> LinearMap {
    LinearMap::new((0..dim).map(|i| super::presented::unit(i, dim)).collect(), dim)
}

fn q_analogue_map(p: &PresentedRing, k: u64, d: u64) -> LinearMap {
    LinearMap::new((0..p.dim()).map(|i| p.mul_q_analogue(&super::presented::unit(i, p.dim()), k, d)).collect(), p.dim())
}

/// `F∘V = m/d` on `qW_d` and `V∘F = [m/d]_{q^d}` on `qW_m`, plus descent of `F` and `V`.
pub fn check_fv_relations(ring: &CoeffRing, m: u64) -> Result<Vec<CheckRecord>, QWittError> {
    let pm = presented_ring(ring, m)?;
    let mut out = Vec::new();
    for d in divisors(m) {
        let pd = presented_ring(ring, d)?;
        let f = pm.frobenius_map(&pd)?;
        let v = pd.verschiebung_map(&pm)?;
        let k = m / d;
        out.push(
            record("frobenius-descends", ring, m)
                .param("d", d)
                .verdict(is_well_defined(&f, pm.group(), pd.group()), || {
                    "a relation of qW_m maps outside the relations".into()
                }),
        );
        out.push(
            record("verschiebung-descends", ring, m)
                .param("d", d)
                .verdict(is_well_defined(&v, pd.group(), pm.group()), || {
                    "a relation of qW_d maps outside the relations".into()
                }),
        );
        let fv = v.then(&f, pd.modulus());
        let scaled = identity_map(pd.dim()).scaled(k as i128, pd.modulus());
        let (ok, exhaustive, bad) = maps_agree(&fv, &scaled, pd.group(), pd.group());
        out.push(
            record("f-after-v", ring, m)
                .param("d", d)
                .param("exhaustive", exhaustive)
                .verdict(ok, || format!("x = {}", pd.format(&bad.unwrap_or_default()))),
        );
        let vf = f.then(&v, pm.modulus());
        let qa = q_analogue_map(&pm, k, d);
        let (ok, exhaustive, bad) = maps_agree(&vf, &qa, pm.group(), pm.group());
        out.push(
            record("v-after-f", ring, m)
                .param("d", d)
                .param("exhaustive", exhaustive)
                .verdict(ok, || format!("x = {}", pm.format(&bad.unwrap_or_default()))),
        );
    }
    Ok(out)
}

/// Trivial kernel of `W_m(R) -> qW_m(R)`.
pub fn check_witt_injective(ring: &CoeffRing, m: u64) -> Result<CheckRecord, QWittError> {
    let p = presented_ring(ring, m)?;
    let w = FinGroup::new(p.witt_lattice().relations().clone());
    let img = image_order(&p.witt_inclusion(), p.group());
    Ok(record("witt-injective", ring, m)
        .param("witt_order", w.order())
        .verdict(img == w.order(), || format!("image has order {img}, W_m(R) has order {}", w.order())))
}

/// Trivial kernel of every `V_{m/d} : qW_d(R) -> qW_m(R)`.
pub fn check_verschiebung_injective(ring: &CoeffRing, m: u64) -> Result<Vec<CheckRecord>, QWittError> {
    let pm = presented_ring(ring, m)?;
    divisors(m)
        .into_iter()
        .map(|d| {
            let pd = presented_ring(ring, d)?;
            let img = image_order(&pd.verschiebung_map(&pm)?, pm.group());
            Ok(record("verschiebung-injective", ring, m)
                .param("d", d)
                .verdict(img == pd.order(), || format!("kernel of order {}", pd.order() / &img)))
        })
        .collect()
}

/// `gh_1 ∘ V_p = 0` for every prime `p | m`.
pub fn check_ghost_kills_verschiebung(ring: &CoeffRing, m: u64) -> Result<Vec<CheckRecord>, QWittError> {
    let pm = presented_ring(ring, m)?;
    let target = pm.cyclotomic_group()?;
    let gh = pm.ghost_one_map();
    prime_factors(m)
        .into_iter()
        .map(|p| {
            let pd = presented_ring(ring, m / p)?;
            let comp = pd.verschiebung_map(&pm)?.then(&gh, target.modulus());
            let bad = (0..pd.dim()).find(|&i| !target.is_zero(&comp.images[i]));
            Ok(record("ghost-kills-verschiebung", ring, m)
                .param("p", p)
                .verdict(bad.is_none(), || format!("generator {}", bad.unwrap_or(0))))
        })
        .collect()
}

/// `gh_{m/d}` of the image of a random `w ∈ W_m(R)` equals the classical `gh_{m/d}(w)`.
pub fn check_ghost_compatibility(
    ring: &CoeffRing,
    m: u64,
    trials: usize,
    seed: u64,
) -> Result<CheckRecord, QWittError> {
    let p = presented_ring(ring, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let w = WittVector::random(ring, m, &mut rng, 0, 0);
        let x = p.from_witt(&w, 0)?;
        for d in divisors(m) {
            let lhs = qw_ghost(&p, &x, d)?;
            let rhs = ghost(ring, &w, m / d)?;
            if lhs != rhs {
                return Ok(record("ghost-compatibility", ring, m).param("trials", trials).fail(format!(
                    "w = {}, d = {d}: {} vs {}",
                    w.to_text(ring),
                    ring.format_elem(&lhs),
                    ring.format_elem(&rhs)
                )));
            }
        }
    }
    Ok(record("ghost-compatibility", ring, m).param("trials", trials).pass())
}

/// Bijectivity of the ghost tuple is checked element by element up to this order.
pub const GHOST_ISO_LIMIT: u64 = 1 << 16;

/// For `m` invertible in `R`, the ghost maps give `qW_m(R) ≅ ∏_{d|m} R[q]/Φ_d(q)`:
/// bijective (checked element by element when small) and multiplicative on generators.
pub fn check_ghost_isomorphism(ring: &CoeffRing, m: u64) -> Result<CheckRecord, QWittError> {
    let pm = presented_ring(ring, m)?;
    let mut maps = Vec::new();
    let mut targets = Vec::new();
    for d in divisors(m) {
        let pd = presented_ring(ring, d)?;
        let t = pd.cyclotomic_group()?;
        maps.push(pm.frobenius_map(&pd)?.then(&pd.ghost_one_map(), t.modulus()));
        targets.push(t);
    }
    let refs: Vec<&FinGroup> = targets.iter().collect();
    let prod = FinGroup::direct_sum(&refs)?;
    let dims: Vec<usize> = targets.iter().map(FinGroup::dim).collect();
    let blocks: Vec<(usize, usize, &LinearMap)> = maps.iter().enumerate().map(|(i, mp)| (0, i, mp)).collect();
    let joint = LinearMap::block(&[pm.dim()], &dims, &blocks);
    let rec = record("ghost-isomorphism", ring, m);
    if prod.order() != pm.order() {
        return Ok(rec.fail(format!("orders {} and {}", pm.order(), prod.order())));
    }
    let (elems, exhaustive) = pm.group().check_elements_up_to(GHOST_ISO_LIMIT);
    let rec = rec.param("exhaustive", exhaustive);
    if exhaustive {
        let mut seen = std::collections::HashSet::new();
        for x in &elems {
            if !seen.insert(prod.reduce(&joint.apply(x, prod.modulus()))) {
                return Ok(rec.fail(format!("two elements share ghost image, one is {}", pm.format(x))));
            }
        }
    } else if image_order(&joint, &prod) != prod.order() {
        return Ok(rec.fail("ghost tuple is not surjective".to_string()));
    }
    // Products of generators, component by component in R[q]/Φ_d.
    for i in 0..pm.dim() {
        for j in i..pm.dim() {
            let (a, b) =
                (pm.reduce(&super::presented::unit(i, pm.dim())), pm.reduce(&super::presented::unit(j, pm.dim())));
            let ab = pm.mul(&a, &b);
            for d in divisors(m) {
                let lhs = qw_ghost(&pm, &ab, d)?;
                let prod_poly = ring.mul(&qw_ghost(&pm, &a, d)?, &qw_ghost(&pm, &b, d)?);
                let rhs = ring.reduce(&prod_poly.div_rem_q(&cyclotomic_coeffs(d)).1);
                if lhs != rhs {
                    return Ok(rec.fail(format!("ghost {d} not multiplicative on generators {i}, {j}")));
                }
            }
        }
    }
    Ok(rec.pass())
}

/// Exponent of `qW_m(R)` is at most twice the largest exponent among `R[q]/Φ_m(q)`
/// and the `qW_{m/ℓ}(R)` for primes `ℓ | m`.
pub fn check_torsion_bound(ring: &CoeffRing, m: u64) -> Result<CheckRecord, QWittError> {
    let pm = presented_ring(ring, m)?;
    let mut bound = if m == 1 { BigInt::one() } else { pm.cyclotomic_group()?.exponent() };
    for l in prime_factors(m) {
        bound = bound.max(presented_ring(ring, m / l)?.group().exponent());
    }
    let limit: BigInt = if m == 1 { pm.group().exponent() } else { bound * 2 };
    let e = pm.group().exponent();
    Ok(record("torsion-bound", ring, m)
        .param("exponent", &e)
        .param("bound", &limit)
        .verdict(e <= limit, || format!("exponent {e} exceeds {limit}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_pass(rs: &[CheckRecord]) -> bool {
        rs.iter().all(CheckRecord::passed)
    }

    #[test]
    fn fv_relations_small() {
        for spec in ["f2", "zmod:4"] {
            let r: CoeffRing = spec.parse().unwrap();
            for m in [2, 4, 6] {
                let rs = check_fv_relations(&r, m).unwrap();
                assert!(all_pass(&rs), "{rs:?}");
            }
        }
        let z4: CoeffRing = "zmod:4".parse().unwrap();
        let rs = check_fv_relations(&z4, 2).unwrap();
        assert!(rs.iter().any(|r| r.name == "v-after-f" && r.params["exhaustive"] == "true"));
    }

    #[test]
    fn injectivity_and_ghosts() {
        let f3: CoeffRing = "f3".parse().unwrap();
        assert!(check_witt_injective(&f3, 6).unwrap().passed());
        assert!(all_pass(&check_verschiebung_injective(&f3, 6).unwrap()));
        assert!(all_pass(&check_ghost_kills_verschiebung(&f3, 6).unwrap()));
        assert!(check_ghost_compatibility(&f3, 6, 20, 3).unwrap().passed());
        let z5: CoeffRing = "zmod:5".parse().unwrap();
        assert!(check_ghost_isomorphism(&z5, 2).unwrap().passed());
        // qW_2(F_2) = Z/4 is not a product of fields.
        let f2: CoeffRing = "f2".parse().unwrap();
        assert!(!check_ghost_isomorphism(&f2, 2).unwrap().passed());
    }

    #[test]
    fn torsion_bound_dual_numbers() {
        let r: CoeffRing = "poly:zmod:2:x/x^2".parse().unwrap();
        for m in [2, 4, 6] {
            assert!(check_torsion_bound(&r, m).unwrap().passed());
        }
    }
}
