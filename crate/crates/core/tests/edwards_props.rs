mod common;

use common::*;
use ed25519_dpk::edwards::{small_order_points, PointError, BASEPOINT, SMALL_ORDER_ENCODINGS};
use ed25519_dpk::{CompressedPoint, EdwardsPoint, FieldElement, OrderClass, Scalar};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, RngCore, SeedableRng};

fn random_point<R: RngCore>(rng: &mut R) -> EdwardsPoint {
    let mut k = [0u8; 32];
    rng.fill_bytes(&mut k);
    BASEPOINT.mul_le_bytes(&k)
}

/// Any curve point, torsion component included.
fn random_full_point<R: RngCore>(rng: &mut R) -> EdwardsPoint {
    loop {
        let mut enc = [0u8; 32];
        rng.fill_bytes(&mut enc);
        enc[31] &= 0x7f | (rng.random::<u8>() & 0x80);
        if let Ok(pt) = CompressedPoint(enc).decompress(true) {
            return pt;
        }
    }
}

#[test]
fn extended_addition_matches_affine_formula() {
    let mut rng = StdRng::seed_from_u64(20);
    for i in 0..1000 {
        let (a, b) = if i % 2 == 0 {
            (random_point(&mut rng), random_point(&mut rng))
        } else {
            (random_full_point(&mut rng), random_full_point(&mut rng))
        };
        let (ax, ay) = point_big(&a);
        let (bx, by) = point_big(&b);
        let expected = affine_add((&ax, &ay), (&bx, &by));
        assert_eq!(point_big(&(&a + &b)), expected);
        let (dx, dy) = affine_add((&ax, &ay), (&ax, &ay));
        assert_eq!(point_big(&a.double()), (dx, dy));
    }
}

#[test]
fn scalar_mul_matches_iterated_addition() {
    let mut rng = StdRng::seed_from_u64(21);
    for base in [BASEPOINT, random_point(&mut rng), random_full_point(&mut rng)] {
        let mut acc = EdwardsPoint::identity();
        for k in 0u64..=64 {
            assert_eq!(base.mul_u64(k), acc, "k = {k}");
            assert_eq!(&base * &Scalar::from_u64(k), acc);
            acc = &acc + &base;
        }
    }
}

#[test]
fn basepoint_matches_published_coordinates() {
    let (x, y) = point_big(&BASEPOINT);
    let px: BigUint = "15112221349535400772501151409588531511454012693041857206046113283949847762202".parse().unwrap();
    let four_fifths = BigUint::from(4u32) * inv_mod(&BigUint::from(5u32), &p()) % p();
    assert_eq!(x, px);
    assert_eq!(y, four_fifths);
    assert!(on_curve_affine(&x, &y));
    assert_eq!(BASEPOINT.classify_order(), OrderClass::PrimeOrder);
}

/// Rebuilds the torsion table from scratch: project random points onto the
/// 8-torsion with multiplication by ℓ, keep one of exact order 8, and list
/// its multiples.
#[test]
fn small_order_table_matches_enumeration() {
    let mut rng = StdRng::seed_from_u64(22);
    let generator = loop {
        let t = random_full_point(&mut rng).mul_by_group_order();
        if !t.double().double().is_identity() {
            break t;
        }
    };
    let mut multiples: Vec<[u8; 32]> = (0..8).map(|k| generator.mul_u64(k).compress().0).collect();
    multiples.sort();
    multiples.dedup();
    assert_eq!(multiples.len(), 8);
    assert_eq!(multiples, SMALL_ORDER_ENCODINGS.to_vec());

    // Independent check of each entry with the big-integer affine law.
    for enc in SMALL_ORDER_ENCODINGS {
        let pt = CompressedPoint(enc).decompress(true).unwrap();
        let (x, y) = point_big(&pt);
        assert!(on_curve_affine(&x, &y));
        let mut acc = (x.clone(), y.clone());
        for _ in 0..7 {
            acc = affine_add((&acc.0, &acc.1), (&x, &y));
        }
        assert_eq!(acc, (BigUint::from(0u32), BigUint::from(1u32)));
    }
}

#[test]
fn small_order_set_is_a_group() {
    let pts = small_order_points();
    for a in &pts {
        assert!(a.is_small_order());
        assert!((-a).is_small_order());
        for b in &pts {
            assert!((a + b).is_small_order());
        }
    }
    let classes: Vec<_> = pts.iter().map(|p| p.classify_order()).collect();
    assert_eq!(classes.iter().filter(|c| **c == OrderClass::Identity).count(), 1);
    assert_eq!(classes.iter().filter(|c| **c == OrderClass::SmallOrder).count(), 7);
}

#[test]
fn mixed_order_points_are_classified() {
    let mut rng = StdRng::seed_from_u64(23);
    let t = small_order_points()[3];
    for _ in 0..20 {
        let p = random_point(&mut rng);
        let q = &p + &t;
        assert_eq!(q.classify_order(), OrderClass::MixedOrder);
        assert!(!q.is_small_order());
    }
}

#[test]
fn compression_round_trips_for_1000_points() {
    let mut rng = StdRng::seed_from_u64(24);
    for i in 0..1000 {
        let p = if i % 4 == 0 { random_full_point(&mut rng) } else { random_point(&mut rng) };
        let enc = p.compress();
        assert_eq!(enc.decompress(true).unwrap(), p);
        assert_eq!(enc.decompress(true).unwrap().compress(), enc);
        let (x, y) = point_big(&p);
        assert!(on_curve_affine(&x, &y));
        assert_eq!(BigUint::from_bytes_le(&enc.0) & ((BigUint::from(1u32) << 255u32) - 1u32), y);
    }
}

#[test]
fn strict_decompression_rejects_non_canonical_y() {
    // y = p + k for the small y values that still fit in 255 bits.
    for k in 0u32..19 {
        let enc = to_bytes32(&(p() + k));
        assert_eq!(CompressedPoint(enc).decompress(true), Err(PointError::NonCanonicalEncoding));
        if let Ok(pt) = CompressedPoint(enc).decompress(false) {
            assert_eq!(fe_big(&pt.to_affine().1), BigUint::from(k));
        }
    }
    // x = 0 with the sign bit set.
    let mut neg_zero = [0u8; 32];
    neg_zero[0] = 1;
    neg_zero[31] = 0x80;
    assert_eq!(CompressedPoint(neg_zero).decompress(true), Err(PointError::NonCanonicalEncoding));
}

#[test]
fn decompression_agrees_with_curve_equation() {
    let mut rng = StdRng::seed_from_u64(25);
    let p = p();
    for _ in 0..500 {
        let y = random_below(&mut rng, &p);
        let enc = to_bytes32(&y);
        let yy = &y * &y % &p;
        let u = (&yy + &p - 1u32) % &p;
        let v = (edwards_d() * &yy + 1u32) % &p;
        let x2 = &u * inv_mod(&v, &p) % &p;
        let has_root = is_zero(&x2) || x2.modpow(&((&p - 1u32) >> 1), &p) == BigUint::from(1u32);
        match CompressedPoint(enc).decompress(true) {
            Ok(pt) => {
                assert!(has_root);
                let (x, y2) = point_big(&pt);
                assert_eq!(y2, y);
                assert!(on_curve_affine(&x, &y));
                assert!(!x.bit(0));
            }
            Err(e) => {
                assert!(!has_root);
                assert_eq!(e, PointError::NotOnCurve);
            }
        }
    }
}

#[test]
fn from_affine_rejects_off_curve() {
    assert_eq!(EdwardsPoint::from_affine(FieldElement::ONE, FieldElement::ONE), Err(PointError::NotOnCurve));
}

fn arb_point() -> impl Strategy<Value = EdwardsPoint> {
    any::<[u8; 32]>().prop_map(|k| BASEPOINT.mul_le_bytes(&k))
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    any::<[u8; 32]>().prop_map(|b| Scalar::reduce(&b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_laws(a in arb_point(), b in arb_point(), c in arb_point()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a + &EdwardsPoint::identity(), a);
        prop_assert!((&a + &(-&a)).is_identity());
        prop_assert_eq!(a.double(), &a + &a);
        prop_assert!(a.is_on_curve());
    }

    #[test]
    fn scalar_mul_is_a_homomorphism(p in arb_point(), x in arb_scalar(), y in arb_scalar()) {
        prop_assert_eq!(&p * &(&x + &y), &(&p * &x) + &(&p * &y));
        prop_assert_eq!(&(&p * &x) * &y, &p * &(&x * &y));
        prop_assert!(p.mul_by_group_order().is_identity());
    }
}
