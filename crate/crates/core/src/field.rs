//! Arithmetic in the prime field of order p = 2^255 - 19.
//!
//! Elements are stored as five 51-bit limbs and are kept fully reduced after
//! every operation, so two elements are equal exactly when their limbs are.
//! Nothing here runs in constant time.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

const LOW_51_BITS: u64 = (1 << 51) - 1;

/// p - 2, little-endian. Exponent for inversion.
const P_MINUS_TWO: [u8; 32] = [
    0xeb, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff,
    0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0x7f,
];

/// (p - 5) / 8, little-endian.
const P_MINUS_FIVE_OVER_EIGHT: [u8; 32] = [
    0xfd, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff,
    0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0x0f,
];

/// The field modulus p = 2^255 - 19, little-endian.
pub const MODULUS_BYTES: [u8; 32] = [
    0xed, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff,
    0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0xff, 0x7f,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("attempted to invert zero")]
    ZeroInverse,
    #[error("square root ratio with zero denominator")]
    ZeroDenominator,
    #[error("field element encoding is not reduced mod p")]
    NonCanonicalEncoding,
}

/// An element of GF(2^255 - 19), always held in canonical form `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement([u64; 5]);

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({})", hex::encode(self.encode()))
    }
}

impl Default for FieldElement {
    fn default() -> Self {
        Self::ZERO
    }
}

const fn load8(bytes: &[u8; 32], at: usize) -> u64 {
    let mut out = 0u64;
    let mut i = 0;
    while i < 8 {
        out |= (bytes[at + i] as u64) << (8 * i);
        i += 1;
    }
    out
}

/// Splits the low 255 bits of `bytes` into 51-bit limbs. Bit 255 is dropped.
const fn split_limbs(bytes: &[u8; 32]) -> [u64; 5] {
    [
        load8(bytes, 0) & LOW_51_BITS,
        (load8(bytes, 6) >> 3) & LOW_51_BITS,
        (load8(bytes, 12) >> 6) & LOW_51_BITS,
        (load8(bytes, 19) >> 1) & LOW_51_BITS,
        (load8(bytes, 24) >> 12) & LOW_51_BITS,
    ]
}

impl FieldElement {
    pub const ZERO: Self = Self([0, 0, 0, 0, 0]);
    pub const ONE: Self = Self([1, 0, 0, 0, 0]);

    /// Builds a constant from a little-endian encoding already known to be
    /// below p. Only used for compile-time curve constants.
    pub(crate) const fn from_canonical_bytes_const(bytes: &[u8; 32]) -> Self {
        Self(split_limbs(bytes))
    }

    pub fn from_u64(v: u64) -> Self {
        Self::reduce([v & LOW_51_BITS, v >> 51, 0, 0, 0])
    }

    /// Carries the limbs down to 51 bits each and subtracts p if needed.
    /// Accepts limbs of up to 63 bits.
    fn reduce(mut l: [u64; 5]) -> Self {
        for _ in 0..2 {
            let c0 = l[0] >> 51;
            l[0] &= LOW_51_BITS;
            l[1] += c0;
            let c1 = l[1] >> 51;
            l[1] &= LOW_51_BITS;
            l[2] += c1;
            let c2 = l[2] >> 51;
            l[2] &= LOW_51_BITS;
            l[3] += c2;
            let c3 = l[3] >> 51;
            l[3] &= LOW_51_BITS;
            l[4] += c3;
            let c4 = l[4] >> 51;
            l[4] &= LOW_51_BITS;
            l[0] += c4 * 19;
        }

        // Value is now below 2p. q = 1 exactly when value >= p.
        let mut q = (l[0] + 19) >> 51;
        q = (l[1] + q) >> 51;
        q = (l[2] + q) >> 51;
        q = (l[3] + q) >> 51;
        q = (l[4] + q) >> 51;

        l[0] += 19 * q;
        l[1] += l[0] >> 51;
        l[0] &= LOW_51_BITS;
        l[2] += l[1] >> 51;
        l[1] &= LOW_51_BITS;
        l[3] += l[2] >> 51;
        l[2] &= LOW_51_BITS;
        l[4] += l[3] >> 51;
        l[3] &= LOW_51_BITS;
        // Drops the 2^255 term, completing the subtraction of q * p.
        l[4] &= LOW_51_BITS;

        Self(l)
    }

    /// Little-endian encoding of the canonical representative.
    pub fn encode(&self) -> [u8; 32] {
        let l = &self.0;
        let mut out = [0u8; 32];
        let words = [
            l[0] | (l[1] << 51),
            (l[1] >> 13) | (l[2] << 38),
            (l[2] >> 26) | (l[3] << 25),
            (l[3] >> 39) | (l[4] << 12),
        ];
        for (chunk, w) in out.chunks_exact_mut(8).zip(words) {
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        out
    }

    /// Decodes a 256-bit little-endian integer. In strict mode any value
    /// `>= p` is rejected; otherwise the value is reduced mod p.
    pub fn decode(bytes: &[u8; 32], strict: bool) -> Result<Self, FieldError> {
        let top_bit = bytes[31] >> 7;
        if strict && top_bit == 1 {
            return Err(FieldError::NonCanonicalEncoding);
        }
        let mut limbs = split_limbs(bytes);
        // 2^255 = 19 (mod p)
        limbs[0] += 19 * top_bit as u64;
        let fe = Self::reduce(limbs);
        if strict && fe.encode() != *bytes {
            return Err(FieldError::NonCanonicalEncoding);
        }
        Ok(fe)
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    /// Low bit of the canonical representative.
    pub fn is_odd(&self) -> bool {
        self.0[0] & 1 == 1
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// `self^exp` for a 256-bit little-endian exponent.
    pub fn pow(&self, exp: &[u8; 32]) -> Self {
        let mut acc = Self::ONE;
        for byte in exp.iter().rev() {
            for bit in (0..8).rev() {
                acc = acc.square();
                if (byte >> bit) & 1 == 1 {
                    acc = &acc * self;
                }
            }
        }
        acc
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn invert(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(&P_MINUS_TWO))
    }

    /// Square root of `u / v`.
    ///
    /// Returns `(true, r)` with `r^2 * v = u` when `u / v` is a square, where
    /// `r` is the root with an even canonical representative. Returns
    /// `(false, _)` otherwise; the second value is then meaningless.
    ///
    /// Uses p = 5 (mod 8): the candidate `(u/v)^((p+3)/8)`, computed as
    /// `u v^3 (u v^7)^((p-5)/8)`, is either a root or a root times sqrt(-1).
    pub fn sqrt_ratio(u: &Self, v: &Self) -> Result<(bool, Self), FieldError> {
        if v.is_zero() {
            return Err(FieldError::ZeroDenominator);
        }
        let v3 = &v.square() * v;
        let v7 = &v3.square() * v;
        let mut r = &(u * &v3) * &(u * &v7).pow(&P_MINUS_FIVE_OVER_EIGHT);
        let check = v * &r.square();

        let was_square = if check == *u {
            true
        } else if check == -u {
            r = &r * &SQRT_M1;
            true
        } else {
            false
        };

        if r.is_odd() {
            r = -&r;
        }
        Ok((was_square, r))
    }
}

/// A square root of -1 mod p.
pub const SQRT_M1: FieldElement = FieldElement::from_canonical_bytes_const(&[
    0xb0, 0xa0, 0x0e, 0x4a, 0x27, 0x1b, 0xee, 0xc4, 0x78, 0xe4, 0x2f, 0xad, 0x06, 0x18, 0x43, 0x2f, 0xa7, 0xd7, 0xfb,
    0x3d, 0x99, 0x00, 0x4d, 0x2b, 0x0b, 0xdf, 0xc1, 0x4f, 0x80, 0x24, 0x83, 0x2b,
]);

impl<'a> Add<&'a FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        let mut l = self.0;
        for (a, b) in l.iter_mut().zip(rhs.0) {
            *a += b;
        }
        FieldElement::reduce(l)
    }
}

impl<'a> Sub<&'a FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        // Add 2p first so no limb underflows.
        const TWO_P: [u64; 5] = [
            0x000f_ffff_ffff_ffda,
            0x000f_ffff_ffff_fffe,
            0x000f_ffff_ffff_fffe,
            0x000f_ffff_ffff_fffe,
            0x000f_ffff_ffff_fffe,
        ];
        let mut l = [0u64; 5];
        for i in 0..5 {
            l[i] = self.0[i] + TWO_P[i] - rhs.0[i];
        }
        FieldElement::reduce(l)
    }
}

impl<'a> Mul<&'a FieldElement> for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        #[inline(always)]
        fn m(x: u64, y: u64) -> u128 {
            (x as u128) * (y as u128)
        }
        let a = &self.0;
        let b = &rhs.0;
        let b1_19 = b[1] * 19;
        let b2_19 = b[2] * 19;
        let b3_19 = b[3] * 19;
        let b4_19 = b[4] * 19;

        let c0 = m(a[0], b[0]) + m(a[4], b1_19) + m(a[3], b2_19) + m(a[2], b3_19) + m(a[1], b4_19);
        let mut c1 = m(a[1], b[0]) + m(a[0], b[1]) + m(a[4], b2_19) + m(a[3], b3_19) + m(a[2], b4_19);
        let mut c2 = m(a[2], b[0]) + m(a[1], b[1]) + m(a[0], b[2]) + m(a[4], b3_19) + m(a[3], b4_19);
        let mut c3 = m(a[3], b[0]) + m(a[2], b[1]) + m(a[1], b[2]) + m(a[0], b[3]) + m(a[4], b4_19);
        let mut c4 = m(a[4], b[0]) + m(a[3], b[1]) + m(a[2], b[2]) + m(a[1], b[3]) + m(a[0], b[4]);

        let mask = LOW_51_BITS as u128;
        c1 += c0 >> 51;
        let l0 = (c0 & mask) as u64;
        c2 += c1 >> 51;
        let l1 = (c1 & mask) as u64;
        c3 += c2 >> 51;
        let l2 = (c2 & mask) as u64;
        c4 += c3 >> 51;
        let l3 = (c3 & mask) as u64;
        let carry = (c4 >> 51) as u64;
        let l4 = (c4 & mask) as u64;

        FieldElement::reduce([l0 + carry * 19, l1, l2, l3, l4])
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        &FieldElement::ZERO - self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $f(self, rhs: FieldElement) -> FieldElement {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
