//! Reference arithmetic on arbitrary-precision integers, independent of the
//! crate's limb code, plus fixture loading shared by the integration tests.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;

use ed25519_dpk::{EdwardsPoint, FieldElement, Scalar};

pub fn p() -> BigUint {
    (BigUint::one() << 255u32) - 19u32
}

pub fn ell() -> BigUint {
    (BigUint::one() << 252u32) + "27742317777372353535851937790883648493".parse::<BigUint>().unwrap()
}

pub fn to_bytes32(n: &BigUint) -> [u8; 32] {
    let v = n.to_bytes_le();
    assert!(v.len() <= 32);
    let mut out = [0u8; 32];
    out[..v.len()].copy_from_slice(&v);
    out
}

pub fn fe_big(x: &FieldElement) -> BigUint {
    BigUint::from_bytes_le(&x.encode())
}

pub fn big_fe(n: &BigUint) -> FieldElement {
    FieldElement::decode(&to_bytes32(&(n % p())), true).unwrap()
}

pub fn sc_big(x: &Scalar) -> BigUint {
    BigUint::from_bytes_le(&x.encode())
}

pub fn big_sc(n: &BigUint) -> Scalar {
    Scalar::decode(&to_bytes32(&(n % ell())), true).unwrap()
}

pub fn random_below<R: RngCore>(rng: &mut R, bound: &BigUint) -> BigUint {
    let mut wide = [0u8; 64];
    rng.fill_bytes(&mut wide);
    BigUint::from_bytes_le(&wide) % bound
}

/// Biased toward edge values so carries and wraparound get exercised.
pub fn random_field_big<R: RngCore>(rng: &mut R) -> BigUint {
    let p = p();
    match rng.next_u32() % 8 {
        0 => BigUint::from(rng.next_u32() % 4),
        1 => &p - 1u32 - BigUint::from(rng.next_u32() % 4),
        _ => random_below(rng, &p),
    }
}

pub fn inv_mod(a: &BigUint, m: &BigUint) -> BigUint {
    a.modpow(&(m - 2u32), m)
}

/// The textbook affine addition law with a = -1:
/// x3 = (x1 y2 + y1 x2) / (1 + d x1 x2 y1 y2),
/// y3 = (y1 y2 - a x1 x2) / (1 - d x1 x2 y1 y2).
pub fn affine_add(p1: (&BigUint, &BigUint), p2: (&BigUint, &BigUint)) -> (BigUint, BigUint) {
    let p = p();
    let d = edwards_d();
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    let t = (&d * x1 * x2 * y1 * y2) % &p;
    let x_num = (x1 * y2 + y1 * x2) % &p;
    let x_den = (BigUint::one() + &t) % &p;
    // y1 y2 - a x1 x2 with a = -1 is y1 y2 + x1 x2.
    let y_num = (y1 * y2 + x1 * x2) % &p;
    let y_den = (BigUint::one() + &p - &t) % &p;
    ((x_num * inv_mod(&x_den, &p)) % &p, (y_num * inv_mod(&y_den, &p)) % &p)
}

pub fn edwards_d() -> BigUint {
    let p = p();
    ((&p - 121665u32) * inv_mod(&BigUint::from(121666u32), &p)) % &p
}

pub fn on_curve_affine(x: &BigUint, y: &BigUint) -> bool {
    let p = p();
    let xx = x * x % &p;
    let yy = y * y % &p;
    let lhs = (&yy + &p - &xx) % &p;
    let rhs = (BigUint::one() + edwards_d() * &xx % &p * &yy) % &p;
    lhs == rhs
}

pub fn point_big(pt: &EdwardsPoint) -> (BigUint, BigUint) {
    let (x, y) = pt.to_affine();
    (fe_big(&x), fe_big(&y))
}

pub fn is_zero(n: &BigUint) -> bool {
    n.is_zero()
}

pub struct RfcVector {
    pub name: String,
    pub sk: [u8; 32],
    pub pk: [u8; 32],
    pub msg: Vec<u8>,
    pub sig: [u8; 64],
}

pub fn rfc8032_vectors() -> Vec<RfcVector> {
    let text = include_str!("../fixtures/rfc8032_ed25519.txt");
    let mut out = Vec::new();
    let mut name = String::new();
    let mut fields: std::collections::HashMap<String, String> = Default::default();
    let flush = |name: &str, fields: &mut std::collections::HashMap<String, String>, out: &mut Vec<RfcVector>| {
        if fields.is_empty() {
            return;
        }
        let get = |k: &str| hex::decode(fields.get(k).map(String::as_str).unwrap_or("")).unwrap();
        out.push(RfcVector {
            name: name.to_string(),
            sk: get("sk").try_into().unwrap(),
            pk: get("pk").try_into().unwrap(),
            msg: get("msg"),
            sig: get("sig").try_into().unwrap(),
        });
        fields.clear();
    };
    for line in text.lines().map(str::trim) {
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        if let Some(n) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            flush(&name, &mut fields, &mut out);
            name = n.to_string();
        } else if let Some((k, v)) = line.split_once('=') {
            fields.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    flush(&name, &mut fields, &mut out);
    out
}
