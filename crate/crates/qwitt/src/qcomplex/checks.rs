use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::CheckRecord;
use crate::ringkit::{prime_power, CycQuot, Mono, QPoly};

use super::calculus::{q_leibniz_sides, qpartial};
use super::form::{FormKey, QForm};
use super::ke::{ke_cohomology, ke_tensor_iso};
use super::QComplexError;

/// `q∂(T^v) = [v]_q T^{v-1}` for `v ≤ max_exp`, with `[v]_q` summed term by term.
pub fn check_jackson_powers(max_exp: u32) -> Result<CheckRecord, QComplexError> {
    let rec = CheckRecord::new("jackson-powers").param("max_exp", max_exp);
    for v in 0..=max_exp {
        let lhs = qpartial(&QPoly::monomial(BigInt::from(1), 0, &[v]), 1)?;
        let mut rhs = QPoly::zero(1);
        for j in 0..v {
            rhs.add_term(Mono { q: j, t: vec![v - 1] }, BigInt::from(1));
        }
        if lhs != rhs {
            return Ok(rec.fail(format!("v = {v}: {lhs} vs {rhs}")));
        }
    }
    Ok(rec.pass())
}

fn random_poly<G: Rng + ?Sized>(rng: &mut G, nvars: usize) -> QPoly {
    let mut f = QPoly::zero(nvars);
    for _ in 0..rng.gen_range(1..=4) {
        let t: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=3)).collect();
        f.add_term(Mono { q: rng.gen_range(0..=2), t }, BigInt::from(rng.gen_range(-3i64..=3)));
    }
    f
}

/// The q-Leibniz rule on random pairs of polynomials in up to three variables.
pub fn check_q_leibniz(trials: usize, seed: u64) -> Result<CheckRecord, QComplexError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rec = CheckRecord::new("q-leibniz").param("trials", trials);
    for _ in 0..trials {
        let n = rng.gen_range(1..=3);
        let (f, g) = (random_poly(&mut rng, n), random_poly(&mut rng, n));
        let i = rng.gen_range(1..=n);
        let (lhs, rhs) = q_leibniz_sides(&f, &g, i)?;
        if lhs != rhs {
            return Ok(rec.fail(format!("f = {f}, g = {g}, i = {i}")));
        }
    }
    Ok(rec.pass())
}

/// A random form in up to three variables at a random level `m ≤ 6`.
pub fn random_form<G: Rng + ?Sized>(rng: &mut G, nvars: usize, m: u64) -> QForm {
    let mut w = QForm::zero(nvars, m);
    for _ in 0..rng.gen_range(1..=4) {
        let v: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=4)).collect();
        let dirs: Vec<usize> = (0..nvars).filter(|&j| v[j] > 0 && rng.gen_bool(0.5)).collect();
        let c: Vec<i64> = (0..m).map(|_| rng.gen_range(-3..=3)).collect();
        w.add_term(FormKey { multidegree: v, dirs }, CycQuot::from_i64(m as usize, &c));
    }
    w
}

/// `d ∘ d = 0` for the q-Hodge differential on random forms.
pub fn check_d_squared(trials: usize, seed: u64) -> CheckRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rec = CheckRecord::new("d-squared").param("trials", trials);
    for _ in 0..trials {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=6);
        let w = random_form(&mut rng, n, m);
        let dd = w.hodge_differential().hodge_differential();
        if !dd.is_zero() {
            return rec.fail(format!("d(d({w})) = {dd}"));
        }
    }
    rec.pass()
}

/// The two-term model complexes at level `m = p^α`: their cohomology, and the tensor
/// decomposition for every `e1 ≥ e2`.
pub fn check_ke_level(m: u64, prec: u32) -> Result<Vec<CheckRecord>, QComplexError> {
    let (p, alpha) = prime_power(m).ok_or_else(|| QComplexError::Precondition(format!("{m} is not a prime power")))?;
    let mut out = Vec::new();
    for e1 in 0..=alpha {
        let c = ke_cohomology(p, alpha, e1, prec)?;
        let rec = CheckRecord::new("ke-cohomology").param("p", p).param("alpha", alpha).param("e", e1);
        out.push(rec.verdict(c.matches_prediction(p, e1, prec), || format!("{:?} / {:?}", c.h0_local, c.h1_local)));
        for e2 in 0..=e1 {
            let iso = ke_tensor_iso(p, alpha, e1, e2)?;
            let rec =
                CheckRecord::new("ke-tensor-iso").param("p", p).param("alpha", alpha).param("e1", e1).param("e2", e2);
            out.push(rec.verdict(iso.verified(), || format!("{iso:?}")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calculus_checks_pass() {
        assert!(check_jackson_powers(20).unwrap().passed());
        assert!(check_q_leibniz(30, 1).unwrap().passed());
        assert!(check_d_squared(30, 1).passed());
    }

    #[test]
    fn ke_levels() {
        for m in [2, 4, 9] {
            assert!(check_ke_level(m, 6).unwrap().iter().all(CheckRecord::passed));
        }
        assert!(check_ke_level(6, 6).is_err());
    }
}
