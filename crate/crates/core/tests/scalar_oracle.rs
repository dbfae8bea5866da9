mod common;

use common::*;
use ed25519_dpk::scalar::{ScalarError, GROUP_ORDER_BYTES};
use ed25519_dpk::{EdwardsPoint, Scalar};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{RngCore, SeedableRng};

#[test]
fn order_constant_is_anchored_to_the_curve() {
    assert_eq!(BigUint::from_bytes_le(&GROUP_ORDER_BYTES), ell());
    assert!(EdwardsPoint::basepoint().mul_le_bytes(&GROUP_ORDER_BYTES).is_identity());
}

#[test]
fn reduce_wide_matches_bigint() {
    let mut rng = StdRng::seed_from_u64(10);
    let l = ell();
    for _ in 0..10_000 {
        let mut wide = [0u8; 64];
        rng.fill_bytes(&mut wide);
        assert_eq!(sc_big(&Scalar::reduce_wide(&wide)), BigUint::from_bytes_le(&wide) % &l);
    }
}

#[test]
fn ring_ops_match_bigint() {
    let mut rng = StdRng::seed_from_u64(11);
    let l = ell();
    for _ in 0..10_000 {
        let a = random_below(&mut rng, &l);
        let b = random_below(&mut rng, &l);
        let (sa, sb) = (big_sc(&a), big_sc(&b));
        assert_eq!(sc_big(&(&sa + &sb)), (&a + &b) % &l);
        assert_eq!(sc_big(&(&sa - &sb)), (&a + &l - &b) % &l);
        assert_eq!(sc_big(&(&sa * &sb)), (&a * &b) % &l);
    }
}

#[test]
fn invert_matches_bigint() {
    let mut rng = StdRng::seed_from_u64(12);
    let l = ell();
    for _ in 0..200 {
        let a = random_below(&mut rng, &l);
        if is_zero(&a) {
            continue;
        }
        let inv = big_sc(&a).invert().unwrap();
        assert_eq!(sc_big(&inv), inv_mod(&a, &l));
        assert_eq!(&big_sc(&a) * &inv, Scalar::ONE);
    }
    assert_eq!(Scalar::ZERO.invert(), Err(ScalarError::ZeroInverse));
}

#[test]
fn strict_decode_boundary() {
    let l = ell();
    assert_eq!(Scalar::decode(&to_bytes32(&l), true), Err(ScalarError::NonCanonicalEncoding));
    assert_eq!(Scalar::decode(&to_bytes32(&(&l + 1u32)), true), Err(ScalarError::NonCanonicalEncoding));
    assert_eq!(Scalar::decode(&[0xff; 32], true), Err(ScalarError::NonCanonicalEncoding));
    let top = Scalar::decode(&to_bytes32(&(&l - 1u32)), true).unwrap();
    assert_eq!(&top + &Scalar::ONE, Scalar::ZERO);
    assert_eq!(sc_big(&Scalar::decode(&[0xff; 32], false).unwrap()), BigUint::from_bytes_le(&[0xff; 32]) % &l);
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    any::<[u8; 32]>().prop_map(|b| Scalar::reduce(&b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn encode_decode_round_trip(a in arb_scalar()) {
        prop_assert_eq!(Scalar::decode(&a.encode(), true).unwrap(), a);
        let mut wide = [0u8; 64];
        wide[..32].copy_from_slice(&a.encode());
        prop_assert_eq!(Scalar::reduce_wide(&wide), a);
    }

    #[test]
    fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Scalar::ZERO);
    }
}
