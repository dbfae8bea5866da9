//! The Ed25519 twisted Edwards curve `-x^2 + y^2 = 1 + d x^2 y^2` over
//! GF(2^255 - 19).
//!
//! Points are kept in extended coordinates (X : Y : Z : T) with
//! x = X/Z, y = Y/Z and T = XY/Z. The addition law is the unified
//! a = -1 formula, which is complete on this curve and therefore also
//! valid for doubling. Scalar multiplication is plain double-and-add and
//! is variable time.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::field::FieldElement;
use crate::scalar::{Scalar, GROUP_ORDER_BYTES};

/// Curve coefficient d = -121665/121666.
pub const EDWARDS_D: FieldElement = FieldElement::from_canonical_bytes_const(&[
    0xa3, 0x78, 0x59, 0x13, 0xca, 0x4d, 0xeb, 0x75, 0xab, 0xd8, 0x41, 0x41, 0x4d, 0x0a, 0x70, 0x00, 0x98, 0xe8, 0x79,
    0x77, 0x79, 0x40, 0xc7, 0x8c, 0x73, 0xfe, 0x6f, 0x2b, 0xee, 0x6c, 0x03, 0x52,
]);

/// 2d, used by the extended-coordinate addition formula.
const EDWARDS_D2: FieldElement = FieldElement::from_canonical_bytes_const(&[
    0x59, 0xf1, 0xb2, 0x26, 0x94, 0x9b, 0xd6, 0xeb, 0x56, 0xb1, 0x83, 0x82, 0x9a, 0x14, 0xe0, 0x00, 0x30, 0xd1, 0xf3,
    0xee, 0xf2, 0x80, 0x8e, 0x19, 0xe7, 0xfc, 0xdf, 0x56, 0xdc, 0xd9, 0x06, 0x24,
]);

const BASEPOINT_X: FieldElement = FieldElement::from_canonical_bytes_const(&[
    0x1a, 0xd5, 0x25, 0x8f, 0x60, 0x2d, 0x56, 0xc9, 0xb2, 0xa7, 0x25, 0x95, 0x60, 0xc7, 0x2c, 0x69, 0x5c, 0xdc, 0xd6,
    0xfd, 0x31, 0xe2, 0xa4, 0xc0, 0xfe, 0x53, 0x6e, 0xcd, 0xd3, 0x36, 0x69, 0x21,
]);

/// y = 4/5.
const BASEPOINT_Y: FieldElement = FieldElement::from_canonical_bytes_const(&[
    0x58, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66,
    0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66, 0x66,
]);

const BASEPOINT_T: FieldElement = FieldElement::from_canonical_bytes_const(&[
    0xa3, 0xdd, 0xb7, 0xa5, 0xb3, 0x8a, 0xde, 0x6d, 0xf5, 0x52, 0x51, 0x77, 0x80, 0x9f, 0xf0, 0x20, 0x7d, 0xe3, 0xab,
    0x64, 0x8e, 0x4e, 0xea, 0x66, 0x65, 0x76, 0x8b, 0xd7, 0x0f, 0x5f, 0x87, 0x67,
]);

/// The standard Ed25519 base point.
pub const BASEPOINT: EdwardsPoint =
    EdwardsPoint { x: BASEPOINT_X, y: BASEPOINT_Y, z: FieldElement::ONE, t: BASEPOINT_T };

pub const COFACTOR: u8 = 8;

/// Key length in bits, `b` in the usual EdDSA notation.
pub const KEY_BITS: usize = 256;

const fn hex_nibble(c: u8) -> u8 {
    match c {
        b'0'..=b'9' => c - b'0',
        b'a'..=b'f' => c - b'a' + 10,
        _ => panic!("bad hex digit"),
    }
}

const fn hex32(s: &str) -> [u8; 32] {
    let s = s.as_bytes();
    assert!(s.len() == 64);
    let mut out = [0u8; 32];
    let mut i = 0;
    while i < 32 {
        out[i] = (hex_nibble(s[2 * i]) << 4) | hex_nibble(s[2 * i + 1]);
        i += 1;
    }
    out
}

/// Canonical encodings of the eight points P with 8·P = 0, sorted
/// lexicographically by byte string. The table is re-derived by enumeration
/// in the test suite.
pub const SMALL_ORDER_ENCODINGS: [[u8; 32]; 8] = [
    // order 4
    hex32("0000000000000000000000000000000000000000000000000000000000000000"),
    // order 4
    hex32("0000000000000000000000000000000000000000000000000000000000000080"),
    // identity
    hex32("0100000000000000000000000000000000000000000000000000000000000000"),
    // order 8
    hex32("26e8958fc2b227b045c3f489f2ef98f0d5dfac05d3c63339b13802886d53fc05"),
    // order 8
    hex32("26e8958fc2b227b045c3f489f2ef98f0d5dfac05d3c63339b13802886d53fc85"),
    // order 8
    hex32("c7176a703d4dd84fba3c0b760d10670f2a2053fa2c39ccc64ec7fd7792ac037a"),
    // order 8
    hex32("c7176a703d4dd84fba3c0b760d10670f2a2053fa2c39ccc64ec7fd7792ac03fa"),
    // order 2
    hex32("ecffffffffffffffffffffffffffffffffffffffffffffffffffffffffffff7f"),
];

/// The Ed25519 curve parameters gathered in one place.
#[derive(Debug, Clone, Copy)]
pub struct CurveParams {
    pub a: FieldElement,
    pub d: FieldElement,
    pub cofactor: u8,
    /// ℓ, little-endian.
    pub order: [u8; 32],
    pub basepoint: EdwardsPoint,
    pub key_bits: usize,
}

impl CurveParams {
    pub fn ed25519() -> Self {
        Self {
            a: -FieldElement::ONE,
            d: EDWARDS_D,
            cofactor: COFACTOR,
            order: GROUP_ORDER_BYTES,
            basepoint: BASEPOINT,
            key_bits: KEY_BITS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PointError {
    #[error("encoding does not correspond to a curve point")]
    NotOnCurve,
    #[error("non-canonical point encoding")]
    NonCanonicalEncoding,
}

/// Position of a point in E ≅ Z_ℓ × Z_8, writing P = g·G + t·T.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderClass {
    /// The neutral element (g = 0, t = 0).
    Identity,
    /// g = 0, t ≠ 0.
    SmallOrder,
    /// g ≠ 0, t ≠ 0.
    MixedOrder,
    /// g ≠ 0, t = 0.
    PrimeOrder,
}

#[derive(Clone, Copy)]
pub struct EdwardsPoint {
    x: FieldElement,
    y: FieldElement,
    z: FieldElement,
    t: FieldElement,
}

/// 32-byte point encoding: y little-endian in the low 255 bits, the low bit
/// of x in bit 255.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompressedPoint(pub [u8; 32]);

impl fmt::Debug for CompressedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CompressedPoint({})", hex::encode(self.0))
    }
}

impl fmt::Debug for EdwardsPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EdwardsPoint({})", hex::encode(self.compress().0))
    }
}

impl PartialEq for EdwardsPoint {
    fn eq(&self, other: &Self) -> bool {
        &self.x * &other.z == &other.x * &self.z && &self.y * &other.z == &other.y * &self.z
    }
}

impl Eq for EdwardsPoint {}

impl Default for EdwardsPoint {
    fn default() -> Self {
        Self::identity()
    }
}

impl EdwardsPoint {
    pub const fn identity() -> Self {
        Self { x: FieldElement::ZERO, y: FieldElement::ONE, z: FieldElement::ONE, t: FieldElement::ZERO }
    }

    pub fn basepoint() -> Self {
        BASEPOINT
    }

    /// Builds a point from affine coordinates, checking the curve equation.
    pub fn from_affine(x: FieldElement, y: FieldElement) -> Result<Self, PointError> {
        let p = Self { x, y, z: FieldElement::ONE, t: &x * &y };
        if p.is_on_curve() {
            Ok(p)
        } else {
            Err(PointError::NotOnCurve)
        }
    }

    pub fn to_affine(&self) -> (FieldElement, FieldElement) {
        let zinv = self.z.invert().expect("Z is never zero for points built by this module");
        (&self.x * &zinv, &self.y * &zinv)
    }

    /// Checks `-X^2 Z^2 + Y^2 Z^2 = Z^4 + d X^2 Y^2` and `XY = ZT`.
    pub fn is_on_curve(&self) -> bool {
        if self.z.is_zero() {
            return false;
        }
        let xx = self.x.square();
        let yy = self.y.square();
        let zz = self.z.square();
        let lhs = &(&yy - &xx) * &zz;
        let rhs = &zz.square() + &(&EDWARDS_D * &(&xx * &yy));
        lhs == rhs && &self.x * &self.y == &self.z * &self.t
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn double(&self) -> Self {
        let a = self.x.square();
        let b = self.y.square();
        let c = {
            let zz = self.z.square();
            &zz + &zz
        };
        let h = &a + &b;
        let e = &h - &(&self.x + &self.y).square();
        let g = &a - &b;
        let f = &c + &g;
        Self { x: &e * &f, y: &g * &h, z: &f * &g, t: &e * &h }
    }

    /// Multiplies by a non-negative integer given as little-endian bytes of
    /// any length. Left-to-right double-and-add.
    pub fn mul_le_bytes(&self, n: &[u8]) -> Self {
        let mut acc = Self::identity();
        for byte in n.iter().rev() {
            for bit in (0..8).rev() {
                acc = acc.double();
                if (byte >> bit) & 1 == 1 {
                    acc = &acc + self;
                }
            }
        }
        acc
    }

    pub fn mul_u64(&self, n: u64) -> Self {
        self.mul_le_bytes(&n.to_le_bytes())
    }

    /// 8·P as three doublings, a separate point operation.
    pub fn mul_by_cofactor(&self) -> Self {
        self.double().double().double()
    }

    /// ℓ·P, with ℓ taken as an integer (it cannot be represented as a
    /// reduced [`Scalar`]).
    pub fn mul_by_group_order(&self) -> Self {
        self.mul_le_bytes(&GROUP_ORDER_BYTES)
    }

    pub fn compress(&self) -> CompressedPoint {
        let (x, y) = self.to_affine();
        let mut bytes = y.encode();
        bytes[31] |= (x.is_odd() as u8) << 7;
        CompressedPoint(bytes)
    }

    /// Decomposition class, using gcd(8, ℓ) = 1: 8·P = 0 iff g = 0 and
    /// ℓ·P = 0 iff t = 0.
    pub fn classify_order(&self) -> OrderClass {
        if self.is_identity() {
            OrderClass::Identity
        } else if self.mul_by_cofactor().is_identity() {
            OrderClass::SmallOrder
        } else if self.mul_by_group_order().is_identity() {
            OrderClass::PrimeOrder
        } else {
            OrderClass::MixedOrder
        }
    }

    /// Membership in the precomputed 8-torsion table, identity included.
    pub fn is_small_order(&self) -> bool {
        SMALL_ORDER_ENCODINGS.contains(&self.compress().0)
    }
}

/// The eight points of order dividing 8, in the order of
/// [`SMALL_ORDER_ENCODINGS`].
pub fn small_order_points() -> [EdwardsPoint; 8] {
    SMALL_ORDER_ENCODINGS
        .map(|b| CompressedPoint(b).decompress(true).expect("small-order table entries are canonical curve points"))
}

impl CompressedPoint {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn to_bytes(self) -> [u8; 32] {
        self.0
    }

    /// Recovers x from y via x^2 = (y^2 - 1) / (d y^2 + 1), choosing the
    /// root whose low bit matches the sign bit.
    ///
    /// Strict mode rejects y >= p and the (x = 0, sign = 1) encodings.
    pub fn decompress(&self, strict: bool) -> Result<EdwardsPoint, PointError> {
        let sign = self.0[31] >> 7;
        let mut y_bytes = self.0;
        y_bytes[31] &= 0x7f;
        let y = FieldElement::decode(&y_bytes, strict).map_err(|_| PointError::NonCanonicalEncoding)?;

        let yy = y.square();
        let u = &yy - &FieldElement::ONE;
        let v = &(&EDWARDS_D * &yy) + &FieldElement::ONE;
        let (was_square, mut x) = FieldElement::sqrt_ratio(&u, &v).map_err(|_| PointError::NotOnCurve)?;
        if !was_square {
            return Err(PointError::NotOnCurve);
        }
        if x.is_zero() && sign == 1 && strict {
            return Err(PointError::NonCanonicalEncoding);
        }
        if x.is_odd() != (sign == 1) {
            x = -x;
        }
        Ok(EdwardsPoint { x, y, z: FieldElement::ONE, t: &x * &y })
    }
}

impl Serialize for CompressedPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&hex::encode(self.0))
    }
}

impl<'de> Deserialize<'de> for CompressedPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let mut bytes = [0u8; 32];
        hex::decode_to_slice(&s, &mut bytes).map_err(de::Error::custom)?;
        Ok(CompressedPoint(bytes))
    }
}

impl<'a> Add<&'a EdwardsPoint> for &EdwardsPoint {
    type Output = EdwardsPoint;
    fn add(self, rhs: &'a EdwardsPoint) -> EdwardsPoint {
        let a = &(&self.y - &self.x) * &(&rhs.y - &rhs.x);
        let b = &(&self.y + &self.x) * &(&rhs.y + &rhs.x);
        let c = &(&self.t * &EDWARDS_D2) * &rhs.t;
        let d = {
            let zz = &self.z * &rhs.z;
            &zz + &zz
        };
        let e = &b - &a;
        let f = &d - &c;
        let g = &d + &c;
        let h = &b + &a;
        EdwardsPoint { x: &e * &f, y: &g * &h, z: &f * &g, t: &e * &h }
    }
}

impl Add<EdwardsPoint> for EdwardsPoint {
    type Output = EdwardsPoint;
    fn add(self, rhs: EdwardsPoint) -> EdwardsPoint {
        &self + &rhs
    }
}

impl Neg for &EdwardsPoint {
    type Output = EdwardsPoint;
    fn neg(self) -> EdwardsPoint {
        EdwardsPoint { x: -&self.x, y: self.y, z: self.z, t: -&self.t }
    }
}

impl Neg for EdwardsPoint {
    type Output = EdwardsPoint;
    fn neg(self) -> EdwardsPoint {
        -&self
    }
}

impl<'a> Sub<&'a EdwardsPoint> for &EdwardsPoint {
    type Output = EdwardsPoint;
    fn sub(self, rhs: &'a EdwardsPoint) -> EdwardsPoint {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &EdwardsPoint {
    type Output = EdwardsPoint;
    fn mul(self, rhs: &'a Scalar) -> EdwardsPoint {
        self.mul_le_bytes(&rhs.encode())
    }
}

impl<'a> Mul<&'a EdwardsPoint> for &Scalar {
    type Output = EdwardsPoint;
    fn mul(self, rhs: &'a EdwardsPoint) -> EdwardsPoint {
        rhs * self
    }
}
