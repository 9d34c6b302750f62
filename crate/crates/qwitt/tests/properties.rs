//! Randomised invariants across the workspace.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qwitt::qcomplex::{q_leibniz_sides, random_form};
use qwitt::qdrwmodel::CohomModel;
use qwitt::qwittring::LambdaStructure;
use qwitt::ringkit::{
    cyclo_joint_quotient, cyclotomic_coeffs, divisors, euler_phi, prime_power, q_analogue_coeffs, q_pow_minus_one, snf,
    upoly_mul, upoly_trim, verify_snf, CoeffRing, IntMatrix, Mono, QPoly,
};
use qwitt::wittcore::{
    frobenius, ghost, verschiebung, witt_add, witt_decompose, witt_mul, witt_recompose, witt_scale, WittVector,
};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 32, ..ProptestConfig::default() }
}

fn rings() -> impl Strategy<Value = CoeffRing> {
    prop_oneof![
        Just(CoeffRing::integers()),
        Just(CoeffRing::zmod(4)),
        Just(CoeffRing::zmod(3)),
        Just(CoeffRing::truncated(2, "x", 2).unwrap()),
    ]
}

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-9i64..=9, c), r).prop_map(move |rows| {
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            IntMatrix::from_i64(&refs)
        })
    })
}

/// Polynomials in `q, T_1, T_2` with small coefficients.
fn qpoly() -> impl Strategy<Value = QPoly> {
    proptest::collection::vec((0u32..=2, 0u32..=3, 0u32..=3, -3i64..=3), 1..=4).prop_map(|terms| {
        let mut f = QPoly::zero(2);
        for (q, a, b, c) in terms {
            f.add_term(Mono { q, t: vec![a, b] }, BigInt::from(c));
        }
        f
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn snf_certificate_holds(a in matrix()) {
        let s = snf(&a);
        prop_assert!(verify_snf(&a, &s).is_ok());
        for w in s.diag[..s.rank].windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn cyclotomic_factorisation(m in 1u64..=30) {
        let mut prod = vec![BigInt::one()];
        for d in divisors(m) {
            prod = upoly_mul(&prod, &cyclotomic_coeffs(d));
        }
        prop_assert_eq!(upoly_trim(prod), q_pow_minus_one(m as usize));
        prop_assert_eq!(cyclotomic_coeffs(m).len() as u64 - 1, euler_phi(m));
    }

    #[test]
    fn q_analogue_times_q_power(d in 1u64..=6, k in 1u64..=6) {
        let m = d * k;
        let lhs = upoly_mul(&q_analogue_coeffs(m, d).unwrap(), &q_pow_minus_one(d as usize));
        prop_assert_eq!(upoly_trim(lhs), q_pow_minus_one(m as usize));
    }

    #[test]
    fn joint_cyclotomic_quotients(m in 1u64..=16, n in 1u64..=16) {
        prop_assume!(m != n);
        let j = cyclo_joint_quotient(m, n);
        let (big, small) = (m.max(n), m.min(n));
        let expected = if big % small == 0 {
            prime_power(big / small).map(|(p, _)| BigInt::from(p).pow(euler_phi(small) as u32))
        } else {
            None
        };
        match expected {
            Some(order) => prop_assert_eq!(j.order(), Some(order)),
            None => prop_assert!(j.is_zero(), "({m}, {n}) gave {:?}", j.order()),
        }
    }

    #[test]
    fn hodge_differential_squares_to_zero(seed in any::<u64>(), nvars in 1usize..=3, m in 1u64..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_form(&mut rng, nvars, m);
        prop_assert!(w.hodge_differential().hodge_differential().is_zero());
    }

    #[test]
    fn q_leibniz_rule(f in qpoly(), g in qpoly(), i in 1usize..=2) {
        let (lhs, rhs) = q_leibniz_sides(&f, &g, i).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ghost_maps_are_additive_and_multiplicative(ring in rings(), m in 1u64..=8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = WittVector::random(&ring, m, &mut rng, 4, 1);
        let y = WittVector::random(&ring, m, &mut rng, 4, 1);
        let sum = witt_add(&ring, &x, &y).unwrap();
        let prod = witt_mul(&ring, &x, &y).unwrap();
        for n in divisors(m) {
            let (gx, gy) = (ghost(&ring, &x, n).unwrap(), ghost(&ring, &y, n).unwrap());
            prop_assert_eq!(ghost(&ring, &sum, n).unwrap(), ring.add(&gx, &gy));
            prop_assert_eq!(ghost(&ring, &prod, n).unwrap(), ring.mul(&gx, &gy));
        }
    }

    #[test]
    fn frobenius_after_verschiebung(ring in rings(), d in 1u64..=4, k in 1u64..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = WittVector::random(&ring, d, &mut rng, 4, 1);
        let fv = frobenius(&ring, &verschiebung(&ring, &x, k).unwrap(), k).unwrap();
        prop_assert_eq!(fv, witt_scale(&ring, &x, k).unwrap());
    }

    #[test]
    fn decomposition_round_trip(ring in rings(), m in 1u64..=12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = WittVector::random(&ring, m, &mut rng, 4, 1);
        let parts: BTreeMap<u64, QPoly> = witt_decompose(&x);
        prop_assert_eq!(witt_recompose(&ring, m, &parts).unwrap(), x);
    }

    #[test]
    fn epsilon_round_trip(m in 1u64..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda = LambdaStructure::integers();
        let w = WittVector::random(lambda.ring(), m, &mut rng, 3, 0);
        let parts = lambda.epsilon(&w).unwrap();
        prop_assert_eq!(lambda.from_epsilon(m, &parts).unwrap(), w);
    }

    #[test]
    fn bockstein_preserves_cocycles(m in 1u64..=4, degree in 0usize..=1, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let model = CohomModel::new(2);
        let w = model.sample_class(m, degree, 3, &mut rng).unwrap();
        prop_assert!(model.is_cocycle(&w));
        let b = model.bockstein(&w).unwrap();
        prop_assert!(model.is_cocycle(&b));
        prop_assert!(model.is_coboundary(&model.bockstein(&b).unwrap()).unwrap());
    }
}
