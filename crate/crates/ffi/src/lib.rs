//! C ABI over `ed25519_dpk`.
//!
//! Every function returns a [`DpkStatus`]. Keys and attack reports are
//! opaque heap handles released with their `_free` function. Byte arrays
//! have fixed lengths: seeds, public keys and scalars are 32 bytes,
//! signatures and stored keypairs are 64. The header is generated into
//! `include/ed25519_dpk.h` at build time.

use std::ffi::{c_char, c_int, c_void, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use ed25519_dpk::attack::{self, AttackError, ForgeError, NonceSource, OracleError, SigningOracle};
use ed25519_dpk::eddsa::{KEYPAIR_LENGTH, SIGNATURE_LENGTH};
use ed25519_dpk::{
    derive_public, sign_safe_rederive, sign_safe_stored, sign_vulnerable, verify, CompressedPoint, Rejection,
    SecretSeed, SignError, Signature, StoredKeypair, VerifyMode,
};
use rand::rngs::StdRng;
use rand::{RngCore, SeedableRng};

/// Result codes shared by every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpkStatus {
    Ok = 0,
    NullPointer = 1,
    MalformedPublicKey = 2,
    CorruptKeypair = 3,
    NonCanonicalR = 4,
    NonCanonicalPk = 5,
    NonCanonicalS = 6,
    NotOnCurve = 7,
    SmallOrderPk = 8,
    EquationFailed = 9,
    IdenticalKeys = 10,
    OracleNotDeterministic = 11,
    HashCollision = 12,
    AttackFailed = 13,
    OracleError = 14,
    ZeroScalar = 15,
    InvalidArgument = 16,
    Panic = 17,
}

impl From<Rejection> for DpkStatus {
    fn from(r: Rejection) -> Self {
        match r {
            Rejection::NonCanonicalR => DpkStatus::NonCanonicalR,
            Rejection::NonCanonicalPk => DpkStatus::NonCanonicalPk,
            Rejection::NonCanonicalS => DpkStatus::NonCanonicalS,
            Rejection::NotOnCurve => DpkStatus::NotOnCurve,
            Rejection::SmallOrderPk => DpkStatus::SmallOrderPk,
            Rejection::EquationFailed => DpkStatus::EquationFailed,
        }
    }
}

impl From<SignError> for DpkStatus {
    fn from(e: SignError) -> Self {
        match e {
            SignError::MalformedPublicKey(_) => DpkStatus::MalformedPublicKey,
            SignError::CorruptKeypair => DpkStatus::CorruptKeypair,
        }
    }
}

/// Verification equation selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpkVerifyMode {
    Cofactored = 0,
    Cofactorless = 1,
}

/// Opaque stored keypair: a seed together with its derived public key.
pub struct DpkKeypair(StoredKeypair);

/// Opaque result of an attack run.
pub struct DpkAttackReport(attack::AttackReport);

/// Signing oracle callback. Receives the 32-byte public key to sign under
/// and must write a 64-byte signature to `sig_out`. Returns 0 on success;
/// any other value aborts the attack with `DPK_STATUS_ORACLE_ERROR`.
pub type DpkOracleFn = Option<unsafe extern "C" fn(ctx: *mut c_void, pk: *const u8, sig_out: *mut u8) -> c_int>;

fn guard(f: impl FnOnce() -> Result<(), DpkStatus>) -> DpkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DpkStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => DpkStatus::Panic,
    }
}

unsafe fn array<'a, const N: usize>(p: *const u8) -> Result<&'a [u8; N], DpkStatus> {
    if p.is_null() {
        return Err(DpkStatus::NullPointer);
    }
    Ok(&*(p as *const [u8; N]))
}

unsafe fn out_array<'a, const N: usize>(p: *mut u8) -> Result<&'a mut [u8; N], DpkStatus> {
    if p.is_null() {
        return Err(DpkStatus::NullPointer);
    }
    Ok(&mut *(p as *mut [u8; N]))
}

unsafe fn message<'a>(p: *const u8, len: usize) -> Result<&'a [u8], DpkStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(DpkStatus::NullPointer);
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, DpkStatus> {
    p.as_ref().ok_or(DpkStatus::NullPointer)
}

unsafe fn rng_from(seed: *const u64) -> StdRng {
    match seed.as_ref() {
        Some(s) => StdRng::seed_from_u64(*s),
        None => StdRng::from_os_rng(),
    }
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), DpkStatus> {
    if out.is_null() {
        return Err(DpkStatus::NullPointer);
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Static description of a status code. Never free the result.
#[no_mangle]
pub extern "C" fn dpk_status_message(status: DpkStatus) -> *const c_char {
    let s: &'static CStr = match status {
        DpkStatus::Ok => c"ok",
        DpkStatus::NullPointer => c"null pointer argument",
        DpkStatus::MalformedPublicKey => c"public key is not a canonical curve point",
        DpkStatus::CorruptKeypair => c"stored public key does not match the seed",
        DpkStatus::NonCanonicalR => c"R is not canonically encoded",
        DpkStatus::NonCanonicalPk => c"public key is not canonically encoded",
        DpkStatus::NonCanonicalS => c"S is not below the group order",
        DpkStatus::NotOnCurve => c"point is not on the curve",
        DpkStatus::SmallOrderPk => c"public key has small order",
        DpkStatus::EquationFailed => c"verification equation does not hold",
        DpkStatus::IdenticalKeys => c"the two query keys are identical",
        DpkStatus::OracleNotDeterministic => c"oracle returned different R values",
        DpkStatus::HashCollision => c"challenges collided",
        DpkStatus::AttackFailed => c"signatures do not depend on the queried key",
        DpkStatus::OracleError => c"oracle callback failed",
        DpkStatus::ZeroScalar => c"cannot forge with a zero scalar",
        DpkStatus::InvalidArgument => c"invalid argument",
        DpkStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Creates a keypair from a fresh random seed.
///
/// # Safety
/// `out` must be valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn dpk_keypair_generate(out: *mut *mut DpkKeypair) -> DpkStatus {
    guard(|| store(out, DpkKeypair(StoredKeypair::generate(&mut StdRng::from_os_rng()))))
}

/// Creates a keypair from a 32-byte seed.
///
/// # Safety
/// `seed` must point to 32 readable bytes and `out` must be valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn dpk_keypair_from_seed(seed: *const u8, out: *mut *mut DpkKeypair) -> DpkStatus {
    guard(|| {
        let seed = SecretSeed::from_bytes(*array::<32>(seed)?);
        store(out, DpkKeypair(StoredKeypair::from_seed(seed)))
    })
}

/// Loads a 64-byte stored keypair (seed then public key). Fails with
/// `DPK_STATUS_CORRUPT_KEYPAIR` if the halves do not match.
///
/// # Safety
/// `bytes` must point to 64 readable bytes and `out` must be valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn dpk_keypair_from_bytes(bytes: *const u8, out: *mut *mut DpkKeypair) -> DpkStatus {
    guard(|| {
        let kp = StoredKeypair::from_bytes(array::<KEYPAIR_LENGTH>(bytes)?)?;
        store(out, DpkKeypair(kp))
    })
}

/// # Safety
/// `keypair` must come from this library; `pk_out` must hold 32 bytes.
#[no_mangle]
pub unsafe extern "C" fn dpk_keypair_public_key(keypair: *const DpkKeypair, pk_out: *mut u8) -> DpkStatus {
    guard(|| {
        *out_array::<32>(pk_out)? = handle(keypair)?.0.public_key().0;
        Ok(())
    })
}

/// # Safety
/// `keypair` must come from this library; `out` must hold 64 bytes.
#[no_mangle]
pub unsafe extern "C" fn dpk_keypair_to_bytes(keypair: *const DpkKeypair, out: *mut u8) -> DpkStatus {
    guard(|| {
        *out_array::<KEYPAIR_LENGTH>(out)? = handle(keypair)?.0.to_bytes();
        Ok(())
    })
}

/// Releases a keypair. Null is ignored.
///
/// # Safety
/// `keypair` must be null or a live handle from this library, not used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn dpk_keypair_free(keypair: *mut DpkKeypair) {
    if !keypair.is_null() {
        drop(Box::from_raw(keypair));
    }
}

/// # Safety
/// `seed` must point to 32 readable bytes, `pk_out` to 32 writable bytes.
#[no_mangle]
pub unsafe extern "C" fn dpk_derive_public(seed: *const u8, pk_out: *mut u8) -> DpkStatus {
    guard(|| {
        let seed = SecretSeed::from_bytes(*array::<32>(seed)?);
        *out_array::<32>(pk_out)? = derive_public(&seed).0;
        Ok(())
    })
}

/// Signs with a stored keypair. The public key used is always the one
/// bound to the seed.
///
/// # Safety
/// `keypair` must come from this library, `msg` must point to `msg_len`
/// readable bytes (or be null when `msg_len` is 0) and `sig_out` to 64
/// writable bytes.
#[no_mangle]
pub unsafe extern "C" fn dpk_sign(
    keypair: *const DpkKeypair,
    msg: *const u8,
    msg_len: usize,
    sig_out: *mut u8,
) -> DpkStatus {
    guard(|| {
        let sig = sign_safe_stored(&handle(keypair)?.0, message(msg, msg_len)?);
        *out_array::<SIGNATURE_LENGTH>(sig_out)? = sig.to_bytes();
        Ok(())
    })
}

/// Signs from a bare seed, deriving the public key internally.
///
/// # Safety
/// As [`dpk_sign`], with `seed` pointing to 32 readable bytes.
#[no_mangle]
pub unsafe extern "C" fn dpk_sign_rederive(
    seed: *const u8,
    msg: *const u8,
    msg_len: usize,
    sig_out: *mut u8,
) -> DpkStatus {
    guard(|| {
        let seed = SecretSeed::from_bytes(*array::<32>(seed)?);
        let sig = sign_safe_rederive(&seed, message(msg, msg_len)?);
        *out_array::<SIGNATURE_LENGTH>(sig_out)? = sig.to_bytes();
        Ok(())
    })
}

/// Signs under a caller-supplied public key that is never checked against
/// the seed. Two calls with different keys leak the secret scalar; exposed
/// only to reproduce the attack.
///
/// # Safety
/// As [`dpk_sign_rederive`], with `pk` pointing to 32 readable bytes.
#[no_mangle]
pub unsafe extern "C" fn dpk_sign_unsafe(
    seed: *const u8,
    pk: *const u8,
    msg: *const u8,
    msg_len: usize,
    sig_out: *mut u8,
) -> DpkStatus {
    guard(|| {
        let seed = SecretSeed::from_bytes(*array::<32>(seed)?);
        let pk = CompressedPoint(*array::<32>(pk)?);
        let sig = sign_vulnerable(&seed, &pk, message(msg, msg_len)?)?;
        *out_array::<SIGNATURE_LENGTH>(sig_out)? = sig.to_bytes();
        Ok(())
    })
}

/// Verifies a signature. Returns `DPK_STATUS_OK` on accept or the
/// rejection reason.
///
/// # Safety
/// `msg` as for [`dpk_sign`]; `sig` must point to 64 readable bytes and
/// `pk` to 32.
#[no_mangle]
pub unsafe extern "C" fn dpk_verify(
    msg: *const u8,
    msg_len: usize,
    sig: *const u8,
    pk: *const u8,
    mode: DpkVerifyMode,
    reject_small_order: bool,
) -> DpkStatus {
    guard(|| {
        let sig = Signature::from_bytes(array::<SIGNATURE_LENGTH>(sig)?);
        let pk = CompressedPoint(*array::<32>(pk)?);
        let mode = match mode {
            DpkVerifyMode::Cofactored => VerifyMode::Cofactored,
            DpkVerifyMode::Cofactorless => VerifyMode::Cofactorless,
        };
        verify(message(msg, msg_len)?, &sig, &pk, mode, reject_small_order).map_err(DpkStatus::from)
    })
}

struct CallbackOracle {
    f: unsafe extern "C" fn(*mut c_void, *const u8, *mut u8) -> c_int,
    ctx: *mut c_void,
    message: Vec<u8>,
}

impl SigningOracle for CallbackOracle {
    fn message(&self) -> &[u8] {
        &self.message
    }

    fn query(&mut self, pk: &CompressedPoint) -> Result<Signature, OracleError> {
        let mut sig = [0u8; SIGNATURE_LENGTH];
        let rc = unsafe { (self.f)(self.ctx, pk.0.as_ptr(), sig.as_mut_ptr()) };
        if rc != 0 {
            return Err(OracleError::Transport(format!("callback returned {rc}")));
        }
        Ok(Signature::from_bytes(&sig))
    }
}

/// Runs the two-query key recovery against a callback oracle that signs
/// `msg`. `rng_seed` fixes the attacker's key choice; pass null for fresh
/// randomness. On `DPK_STATUS_OK` and on `DPK_STATUS_ATTACK_FAILED` a report
/// is stored in `*out`; otherwise `*out` is set to null.
///
/// # Safety
/// `oracle` must be safe to call with `ctx`. `msg` as for [`dpk_sign`];
/// `rng_seed` null or readable; `out` valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn dpk_attack(
    oracle: DpkOracleFn,
    ctx: *mut c_void,
    msg: *const u8,
    msg_len: usize,
    rng_seed: *const u64,
    out: *mut *mut DpkAttackReport,
) -> DpkStatus {
    guard(|| {
        if out.is_null() {
            return Err(DpkStatus::NullPointer);
        }
        *out = ptr::null_mut();
        let f = oracle.ok_or(DpkStatus::NullPointer)?;
        let mut oracle = CallbackOracle { f, ctx, message: message(msg, msg_len)?.to_vec() };
        let mut rng = rng_from(rng_seed);
        match attack::run_attack(&mut oracle, &mut rng, 4) {
            Ok(report) => store(out, DpkAttackReport(report)),
            Err(AttackError::AttackFailed(report)) => {
                store(out, DpkAttackReport(*report))?;
                Err(DpkStatus::AttackFailed)
            }
            Err(AttackError::IdenticalKeys) => Err(DpkStatus::IdenticalKeys),
            Err(AttackError::MalformedPublicKey(_)) => Err(DpkStatus::MalformedPublicKey),
            Err(AttackError::OracleNotDeterministic) => Err(DpkStatus::OracleNotDeterministic),
            Err(AttackError::HashCollision) => Err(DpkStatus::HashCollision),
            Err(AttackError::Oracle(_)) => Err(DpkStatus::OracleError),
        }
    })
}

/// Writes the recovered secret scalar (zero after a failed attack).
///
/// # Safety
/// `report` must come from this library; `out` must hold 32 bytes.
#[no_mangle]
pub unsafe extern "C" fn dpk_report_recovered_scalar(report: *const DpkAttackReport, out: *mut u8) -> DpkStatus {
    guard(|| {
        *out_array::<32>(out)? = handle(report)?.0.recovered_s.encode();
        Ok(())
    })
}

/// Writes the public key matching the recovered scalar.
///
/// # Safety
/// `report` must come from this library; `out` must hold 32 bytes.
#[no_mangle]
pub unsafe extern "C" fn dpk_report_recovered_public_key(report: *const DpkAttackReport, out: *mut u8) -> DpkStatus {
    guard(|| {
        *out_array::<32>(out)? = handle(report)?.0.recovered_pk.0;
        Ok(())
    })
}

/// Number of oracle queries made, or 0 for a null handle.
///
/// # Safety
/// `report` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn dpk_report_query_count(report: *const DpkAttackReport) -> u32 {
    report.as_ref().map_or(0, |r| r.0.query_count)
}

/// Serializes the report as JSON. The string must be released with
/// [`dpk_string_free`].
///
/// # Safety
/// `report` must come from this library; `out` must be valid for writing
/// one pointer.
#[no_mangle]
pub unsafe extern "C" fn dpk_report_to_json(report: *const DpkAttackReport, out: *mut *mut c_char) -> DpkStatus {
    guard(|| {
        if out.is_null() {
            return Err(DpkStatus::NullPointer);
        }
        let json = CString::new(handle(report)?.0.to_json()).map_err(|_| DpkStatus::InvalidArgument)?;
        *out = json.into_raw();
        Ok(())
    })
}

/// Parses a JSON report.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writing
/// one pointer.
#[no_mangle]
pub unsafe extern "C" fn dpk_report_from_json(json: *const c_char, out: *mut *mut DpkAttackReport) -> DpkStatus {
    guard(|| {
        if json.is_null() {
            return Err(DpkStatus::NullPointer);
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| DpkStatus::InvalidArgument)?;
        let report = attack::AttackReport::from_json(text).map_err(|_| DpkStatus::InvalidArgument)?;
        store(out, DpkAttackReport(report))
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dpk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a report. Null is ignored.
///
/// # Safety
/// `report` must be null or a live handle from this library, not used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn dpk_report_free(report: *mut DpkAttackReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Signs `msg` with the scalar recovered in `report`. `nonce_seed` fixes
/// the nonce; pass null for a random one. Writes the 64-byte signature and
/// the 32-byte public key it verifies under.
///
/// # Safety
/// `report` must come from this library; `msg` as for [`dpk_sign`];
/// `nonce_seed` null or readable; `sig_out` must hold 64 bytes and
/// `pk_out` 32.
#[no_mangle]
pub unsafe extern "C" fn dpk_forge(
    report: *const DpkAttackReport,
    msg: *const u8,
    msg_len: usize,
    nonce_seed: *const u64,
    sig_out: *mut u8,
    pk_out: *mut u8,
) -> DpkStatus {
    guard(|| {
        let report = handle(report)?;
        let m = message(msg, msg_len)?;
        let sig_out = out_array::<SIGNATURE_LENGTH>(sig_out)?;
        let pk_out = out_array::<32>(pk_out)?;
        let mut rng = rng_from(nonce_seed);
        let (sig, pk) = attack::forge(&report.0.recovered_s, m, NonceSource::Rng(&mut rng as &mut dyn RngCore))
            .map_err(|e| match e {
                ForgeError::ZeroScalar => DpkStatus::ZeroScalar,
                ForgeError::NotSmallOrder => DpkStatus::InvalidArgument,
            })?;
        *sig_out = sig.to_bytes();
        *pk_out = pk.0;
        Ok(())
    })
}
