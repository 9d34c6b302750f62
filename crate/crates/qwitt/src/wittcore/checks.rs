use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::report::CheckRecord;
use crate::ringkit::{divisors, CoeffRing};

use super::vector::{ghost, witt_add, witt_mul, witt_sub, WittVector};
use super::WittError;

/// Every `gh_n` (`n | m`) respects sums, differences and products of random pairs.
pub fn check_ghost_homomorphism(ring: &CoeffRing, m: u64, trials: usize, seed: u64) -> Result<CheckRecord, WittError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ m.rotate_left(32));
    let rec = CheckRecord::new("ghost-homomorphism").param("ring", ring).param("m", m).param("trials", trials);
    for _ in 0..trials {
        let x = WittVector::random(ring, m, &mut rng, 4, 1);
        let y = WittVector::random(ring, m, &mut rng, 4, 1);
        let (sum, diff, prod) = (witt_add(ring, &x, &y)?, witt_sub(ring, &x, &y)?, witt_mul(ring, &x, &y)?);
        for n in divisors(m) {
            let (gx, gy) = (ghost(ring, &x, n)?, ghost(ring, &y, n)?);
            let bad = if ghost(ring, &sum, n)? != ring.add(&gx, &gy) {
                Some("sum")
            } else if ghost(ring, &diff, n)? != ring.sub(&gx, &gy) {
                Some("difference")
            } else if ghost(ring, &prod, n)? != ring.mul(&gx, &gy) {
                Some("product")
            } else {
                None
            };
            if let Some(op) = bad {
                return Ok(rec.fail(format!("gh_{n} of the {op} of {} and {}", x.to_text(ring), y.to_text(ring))));
            }
        }
    }
    Ok(rec.pass())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rings() {
        for spec in ["z", "zmod:4", "f3", "poly:z:T"] {
            let r: CoeffRing = spec.parse().unwrap();
            for m in [2, 6] {
                assert!(check_ghost_homomorphism(&r, m, 10, 1).unwrap().passed(), "{spec} {m}");
            }
        }
    }
}
