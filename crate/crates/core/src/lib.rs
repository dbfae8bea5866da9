//! Ed25519 from first principles, together with the double-public-key
//! signing oracle attack and the two API designs that prevent it.
//!
//! * [`field`]: arithmetic mod 2^255 - 19.
//! * [`scalar`]: arithmetic mod the group order ℓ.
//! * [`edwards`]: the curve group, point encoding and order classification.
//! * [`eddsa`]: keys, the three signing APIs and verification.
//! * [`attack`]: two-query key recovery, forgery and small-order forgery.
//!
//! None of this is constant time. It is meant for studying the attack, not
//! for protecting real keys.

pub mod attack;
pub mod eddsa;
pub mod edwards;
pub mod field;
pub mod scalar;

pub use eddsa::{
    derive_public, expand_secret, sign_safe_rederive, sign_safe_stored, sign_vulnerable, verify, ExpandedSecret,
    Rejection, SecretSeed, SignError, Signature, StoredKeypair, VerifyMode,
};
pub use edwards::{CompressedPoint, EdwardsPoint, OrderClass};
pub use field::FieldElement;
pub use scalar::Scalar;
