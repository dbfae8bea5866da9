//! Integers modulo the prime group order
//! ℓ = 2^252 + 27742317777372353535851937790883648493.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// ℓ as little-endian 64-bit words.
const ORDER_WORDS: [u64; 4] = [0x5812_631a_5cf5_d3ed, 0x14de_f9de_a2f7_9cd6, 0, 0x1000_0000_0000_0000];

/// ℓ, little-endian.
pub const GROUP_ORDER_BYTES: [u8; 32] = [
    0xed, 0xd3, 0xf5, 0x5c, 0x1a, 0x63, 0x12, 0x58, 0xd6, 0x9c, 0xf7, 0xa2, 0xde, 0xf9, 0xde, 0x14, 0x00, 0x00, 0x00,
    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x10,
];

/// ℓ - 2, little-endian. Exponent for inversion.
const ORDER_MINUS_TWO: [u8; 32] = [
    0xeb, 0xd3, 0xf5, 0x5c, 0x1a, 0x63, 0x12, 0x58, 0xd6, 0x9c, 0xf7, 0xa2, 0xde, 0xf9, 0xde, 0x14, 0x00, 0x00, 0x00,
    0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x10,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("attempted to invert the zero scalar")]
    ZeroInverse,
    #[error("scalar encoding is not reduced mod the group order")]
    NonCanonicalEncoding,
}

/// An integer mod ℓ, always held in `[0, ℓ)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Scalar([u64; 4]);

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", hex::encode(self.encode()))
    }
}

fn cmp_words(a: &[u64; 4], b: &[u64; 4]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// `a - b` with the final borrow.
fn sub_words(a: &[u64; 4], b: &[u64; 4]) -> ([u64; 4], bool) {
    let mut out = [0u64; 4];
    let mut borrow = false;
    for i in 0..4 {
        let (d, b1) = a[i].overflowing_sub(b[i]);
        let (d, b2) = d.overflowing_sub(borrow as u64);
        out[i] = d;
        borrow = b1 || b2;
    }
    (out, borrow)
}

/// `a + b mod 2^256`.
fn add_words(a: &[u64; 4], b: &[u64; 4]) -> [u64; 4] {
    let mut out = [0u64; 4];
    let mut carry = false;
    for i in 0..4 {
        let (s, c1) = a[i].overflowing_add(b[i]);
        let (s, c2) = s.overflowing_add(carry as u64);
        out[i] = s;
        carry = c1 || c2;
    }
    // Carry-out is dropped: sums of reduced scalars stay below 2^254, and
    // the borrow-correction in `sub` relies on wrapping mod 2^256.
    out
}

/// Reduces a little-endian multi-word integer mod ℓ by binary long division.
fn reduce_words(words: &[u64]) -> [u64; 4] {
    let mut r = [0u64; 4];
    for word in words.iter().rev() {
        for bit in (0..64).rev() {
            // r < ℓ < 2^253, so the shift cannot overflow.
            r[3] = (r[3] << 1) | (r[2] >> 63);
            r[2] = (r[2] << 1) | (r[1] >> 63);
            r[1] = (r[1] << 1) | (r[0] >> 63);
            r[0] = (r[0] << 1) | ((word >> bit) & 1);
            if cmp_words(&r, &ORDER_WORDS) != Ordering::Less {
                r = sub_words(&r, &ORDER_WORDS).0;
            }
        }
    }
    r
}

fn words_from_le(bytes: &[u8]) -> impl Iterator<Item = u64> + '_ {
    bytes.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap()))
}

impl Scalar {
    pub const ZERO: Self = Self([0; 4]);
    pub const ONE: Self = Self([1, 0, 0, 0]);

    pub fn from_u64(v: u64) -> Self {
        Self([v, 0, 0, 0])
    }

    /// Interprets 64 bytes as a little-endian integer and reduces it mod ℓ.
    pub fn reduce_wide(bytes: &[u8; 64]) -> Self {
        let words: Vec<u64> = words_from_le(bytes).collect();
        Self(reduce_words(&words))
    }

    /// Reduces any 256-bit little-endian integer mod ℓ.
    pub fn reduce(bytes: &[u8; 32]) -> Self {
        let words: Vec<u64> = words_from_le(bytes).collect();
        Self(reduce_words(&words))
    }

    /// Decodes a 256-bit little-endian integer. Strict mode rejects values
    /// `>= ℓ`; lenient mode reduces.
    pub fn decode(bytes: &[u8; 32], strict: bool) -> Result<Self, ScalarError> {
        if !strict {
            return Ok(Self::reduce(bytes));
        }
        let mut words = [0u64; 4];
        for (w, v) in words.iter_mut().zip(words_from_le(bytes)) {
            *w = v;
        }
        if cmp_words(&words, &ORDER_WORDS) == Ordering::Less {
            Ok(Self(words))
        } else {
            Err(ScalarError::NonCanonicalEncoding)
        }
    }

    pub fn encode(&self) -> [u8; 32] {
        let mut out = [0u8; 32];
        for (chunk, w) in out.chunks_exact_mut(8).zip(self.0) {
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    /// `self^exp` for a 256-bit little-endian exponent.
    fn pow(&self, exp: &[u8; 32]) -> Self {
        let mut acc = Self::ONE;
        for byte in exp.iter().rev() {
            for bit in (0..8).rev() {
                acc = &acc * &acc;
                if (byte >> bit) & 1 == 1 {
                    acc = &acc * self;
                }
            }
        }
        acc
    }

    /// Inverse via Fermat exponentiation, `a^(ℓ-2)`.
    pub fn invert(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::ZeroInverse);
        }
        Ok(self.pow(&ORDER_MINUS_TWO))
    }
}

impl<'a> Add<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        let sum = add_words(&self.0, &rhs.0);
        let (reduced, borrow) = sub_words(&sum, &ORDER_WORDS);
        Scalar(if borrow { sum } else { reduced })
    }
}

impl<'a> Sub<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        let (diff, borrow) = sub_words(&self.0, &rhs.0);
        Scalar(if borrow { add_words(&diff, &ORDER_WORDS) } else { diff })
    }
}

impl<'a> Mul<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        let mut wide = [0u64; 8];
        for i in 0..4 {
            let mut carry = 0u128;
            for j in 0..4 {
                let t = (self.0[i] as u128) * (rhs.0[j] as u128) + wide[i + j] as u128 + carry;
                wide[i + j] = t as u64;
                carry = t >> 64;
            }
            wide[i + 4] = carry as u64;
        }
        Scalar(reduce_words(&wide))
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        &Scalar::ZERO - self
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

/// Serialized as 64 lower-case hex characters of the canonical encoding.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&hex::encode(self.encode()))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let mut bytes = [0u8; 32];
        hex::decode_to_slice(&s, &mut bytes).map_err(de::Error::custom)?;
        Scalar::decode(&bytes, true).map_err(de::Error::custom)
    }
}
