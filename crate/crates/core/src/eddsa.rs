//! Ed25519 key handling, signing and verification.
//!
//! Three signing entry points are provided:
//!
//! * [`sign_vulnerable`] takes the seed and the public key as independent
//!   arguments, the shape of many C signing APIs. The public key is checked
//!   to be a well-formed point but is *not* checked against the seed, so a
//!   caller who can choose it turns the function into a key-recovery oracle
//!   (see [`crate::attack`]).
//! * [`sign_safe_stored`] takes a [`StoredKeypair`], the 64-byte
//!   `seed || public key` format whose halves are validated together on load.
//! * [`sign_safe_rederive`] takes only the seed and recomputes the public key
//!   on every call.
//!
//! [`verify`] supports cofactored and cofactorless equations and optional
//! rejection of small-order public keys.

use core::fmt;

use rand::{CryptoRng, RngCore};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha512};
use thiserror::Error;

use crate::edwards::{CompressedPoint, EdwardsPoint, PointError, BASEPOINT};
use crate::scalar::Scalar;

pub const SEED_LENGTH: usize = 32;
pub const PUBLIC_KEY_LENGTH: usize = 32;
pub const KEYPAIR_LENGTH: usize = 64;
pub const SIGNATURE_LENGTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SignError {
    #[error("malformed public key: {0}")]
    MalformedPublicKey(PointError),
    #[error("stored keypair: public key does not match the seed")]
    CorruptKeypair,
}

/// The 32-byte secret seed.
#[derive(Clone, PartialEq, Eq)]
pub struct SecretSeed([u8; SEED_LENGTH]);

impl fmt::Debug for SecretSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SecretSeed(..)")
    }
}

impl SecretSeed {
    pub fn from_bytes(bytes: [u8; SEED_LENGTH]) -> Self {
        Self(bytes)
    }

    pub fn generate<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        let mut bytes = [0u8; SEED_LENGTH];
        rng.fill_bytes(&mut bytes);
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8; SEED_LENGTH] {
        &self.0
    }
}

/// SHA-512 of the seed, split into the clamped secret scalar and the nonce
/// prefix.
#[derive(Clone)]
pub struct ExpandedSecret {
    clamped: [u8; 32],
    prefix: [u8; 32],
}

impl ExpandedSecret {
    /// The clamped integer before reduction: bits 0..3 and 255 cleared,
    /// bit 254 set.
    pub fn clamped_bytes(&self) -> &[u8; 32] {
        &self.clamped
    }

    /// The clamped integer reduced mod ℓ.
    pub fn scalar(&self) -> Scalar {
        Scalar::reduce(&self.clamped)
    }

    pub fn prefix(&self) -> &[u8; 32] {
        &self.prefix
    }
}

pub fn expand_secret(seed: &SecretSeed) -> ExpandedSecret {
    let h: [u8; 64] = Sha512::digest(seed.0).into();
    let mut clamped = [0u8; 32];
    let mut prefix = [0u8; 32];
    clamped.copy_from_slice(&h[..32]);
    prefix.copy_from_slice(&h[32..]);
    clamped[0] &= 0b1111_1000;
    clamped[31] &= 0b0111_1111;
    clamped[31] |= 0b0100_0000;
    ExpandedSecret { clamped, prefix }
}

fn public_from_expanded(expanded: &ExpandedSecret) -> CompressedPoint {
    BASEPOINT.mul_le_bytes(&expanded.clamped).compress()
}

pub fn derive_public(seed: &SecretSeed) -> CompressedPoint {
    public_from_expanded(&expand_secret(seed))
}

/// Seed and public key stored together, 64 bytes on disk.
#[derive(Clone, PartialEq, Eq)]
pub struct StoredKeypair {
    seed: SecretSeed,
    public: CompressedPoint,
}

impl fmt::Debug for StoredKeypair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StoredKeypair").field("public", &self.public).finish_non_exhaustive()
    }
}

impl StoredKeypair {
    pub fn from_seed(seed: SecretSeed) -> Self {
        let public = derive_public(&seed);
        Self { seed, public }
    }

    pub fn generate<R: RngCore + CryptoRng>(rng: &mut R) -> Self {
        Self::from_seed(SecretSeed::generate(rng))
    }

    /// Loads `seed || pk`, rejecting the pair unless pk is the key derived
    /// from seed.
    pub fn from_bytes(bytes: &[u8; KEYPAIR_LENGTH]) -> Result<Self, SignError> {
        let mut seed = [0u8; 32];
        let mut public = [0u8; 32];
        seed.copy_from_slice(&bytes[..32]);
        public.copy_from_slice(&bytes[32..]);
        let kp = Self::from_seed(SecretSeed(seed));
        if kp.public.0 != public {
            return Err(SignError::CorruptKeypair);
        }
        Ok(kp)
    }

    pub fn to_bytes(&self) -> [u8; KEYPAIR_LENGTH] {
        let mut out = [0u8; KEYPAIR_LENGTH];
        out[..32].copy_from_slice(&self.seed.0);
        out[32..].copy_from_slice(&self.public.0);
        out
    }

    pub fn seed(&self) -> &SecretSeed {
        &self.seed
    }

    pub fn public_key(&self) -> CompressedPoint {
        self.public
    }
}

/// An (R, S) pair. S is kept as raw bytes so that non-canonical values can
/// be represented and rejected by [`verify`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub r: CompressedPoint,
    pub s: [u8; 32],
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signature({})", hex::encode(self.to_bytes()))
    }
}

impl Signature {
    pub fn new(r: CompressedPoint, s: &Scalar) -> Self {
        Self { r, s: s.encode() }
    }

    pub fn from_bytes(bytes: &[u8; SIGNATURE_LENGTH]) -> Self {
        let mut r = [0u8; 32];
        let mut s = [0u8; 32];
        r.copy_from_slice(&bytes[..32]);
        s.copy_from_slice(&bytes[32..]);
        Self { r: CompressedPoint(r), s }
    }

    pub fn to_bytes(&self) -> [u8; SIGNATURE_LENGTH] {
        let mut out = [0u8; SIGNATURE_LENGTH];
        out[..32].copy_from_slice(&self.r.0);
        out[32..].copy_from_slice(&self.s);
        out
    }

    /// S as a scalar, rejecting encodings `>= ℓ`.
    pub fn s_scalar(&self) -> Result<Scalar, crate::scalar::ScalarError> {
        Scalar::decode(&self.s, true)
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&hex::encode(self.to_bytes()))
    }
}

impl<'de> Deserialize<'de> for Signature {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let mut bytes = [0u8; SIGNATURE_LENGTH];
        hex::decode_to_slice(&s, &mut bytes).map_err(de::Error::custom)?;
        Ok(Signature::from_bytes(&bytes))
    }
}

/// e = SHA-512(R || pk || m) mod ℓ.
pub fn challenge(r: &CompressedPoint, pk: &CompressedPoint, message: &[u8]) -> Scalar {
    let h: [u8; 64] = Sha512::new().chain_update(r.0).chain_update(pk.0).chain_update(message).finalize().into();
    Scalar::reduce_wide(&h)
}

fn sign_expanded(expanded: &ExpandedSecret, pk: &CompressedPoint, message: &[u8]) -> Signature {
    let nonce_hash: [u8; 64] = Sha512::new().chain_update(expanded.prefix).chain_update(message).finalize().into();
    let r = Scalar::reduce_wide(&nonce_hash);
    // R depends only on the prefix and the message, never on pk.
    let big_r = (&BASEPOINT * &r).compress();
    let e = challenge(&big_r, pk, message);
    let s = &r + &(&e * &expanded.scalar());
    Signature::new(big_r, &s)
}

/// Signs with a caller-supplied public key that is never compared against
/// the seed. Exposed to model the misuse-prone API; prefer
/// [`sign_safe_stored`] or [`sign_safe_rederive`].
pub fn sign_vulnerable(seed: &SecretSeed, pk_input: &CompressedPoint, message: &[u8]) -> Result<Signature, SignError> {
    pk_input.decompress(true).map_err(SignError::MalformedPublicKey)?;
    Ok(sign_expanded(&expand_secret(seed), pk_input, message))
}

pub fn sign_safe_stored(keypair: &StoredKeypair, message: &[u8]) -> Signature {
    sign_expanded(&expand_secret(&keypair.seed), &keypair.public, message)
}

pub fn sign_safe_rederive(seed: &SecretSeed, message: &[u8]) -> Signature {
    let expanded = expand_secret(seed);
    let pk = public_from_expanded(&expanded);
    sign_expanded(&expanded, &pk, message)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum VerifyMode {
    /// 8·S·G = 8·R + 8·(e·pk), each factor 8 applied to a point.
    #[default]
    Cofactored,
    /// S·G = R + e·pk.
    Cofactorless,
}

/// Why a signature was rejected. Exactly one per failed check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Error)]
pub enum Rejection {
    #[error("NonCanonicalR")]
    NonCanonicalR,
    #[error("NonCanonicalPk")]
    NonCanonicalPk,
    #[error("NonCanonicalS")]
    NonCanonicalS,
    #[error("NotOnCurve")]
    NotOnCurve,
    #[error("SmallOrderPk")]
    SmallOrderPk,
    #[error("EquationFailed")]
    EquationFailed,
}

impl Rejection {
    pub const ALL: [Rejection; 6] = [
        Rejection::NonCanonicalR,
        Rejection::NonCanonicalPk,
        Rejection::NonCanonicalS,
        Rejection::NotOnCurve,
        Rejection::SmallOrderPk,
        Rejection::EquationFailed,
    ];

    /// Stable machine-readable name.
    pub fn code(&self) -> &'static str {
        match self {
            Rejection::NonCanonicalR => "NonCanonicalR",
            Rejection::NonCanonicalPk => "NonCanonicalPk",
            Rejection::NonCanonicalS => "NonCanonicalS",
            Rejection::NotOnCurve => "NotOnCurve",
            Rejection::SmallOrderPk => "SmallOrderPk",
            Rejection::EquationFailed => "EquationFailed",
        }
    }
}

fn decode_point(p: &CompressedPoint, non_canonical: Rejection) -> Result<EdwardsPoint, Rejection> {
    p.decompress(true).map_err(|e| match e {
        PointError::NotOnCurve => Rejection::NotOnCurve,
        PointError::NonCanonicalEncoding => non_canonical,
    })
}

/// Verifies `sig` on `message` under `pk`.
///
/// Checks run in a fixed order and the first failure is reported:
/// pk and R must be canonical curve points, S must be below ℓ, pk must not
/// be of small order when `reject_small_order` is set, and finally the
/// group equation for `mode` must hold.
pub fn verify(
    message: &[u8],
    sig: &Signature,
    pk: &CompressedPoint,
    mode: VerifyMode,
    reject_small_order: bool,
) -> Result<(), Rejection> {
    let pk_point = decode_point(pk, Rejection::NonCanonicalPk)?;
    let r_point = decode_point(&sig.r, Rejection::NonCanonicalR)?;
    let s = sig.s_scalar().map_err(|_| Rejection::NonCanonicalS)?;

    if reject_small_order && pk_point.is_small_order() {
        return Err(Rejection::SmallOrderPk);
    }

    let e = challenge(&sig.r, pk, message);
    let sb = &BASEPOINT * &s;
    let epk = &pk_point * &e;
    let holds = match mode {
        VerifyMode::Cofactored => sb.mul_by_cofactor() == &r_point.mul_by_cofactor() + &epk.mul_by_cofactor(),
        VerifyMode::Cofactorless => sb == &r_point + &epk,
    };
    if holds {
        Ok(())
    } else {
        Err(Rejection::EquationFailed)
    }
}
