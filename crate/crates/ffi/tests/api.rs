use std::ffi::{c_int, c_void, CStr};
use std::ptr;

use ed25519_dpk::edwards::SMALL_ORDER_ENCODINGS;
use ed25519_dpk::{expand_secret, SecretSeed};
use ed25519_dpk_ffi::*;

const SEED: [u8; 32] = [42; 32];

fn keypair(seed: &[u8; 32]) -> *mut DpkKeypair {
    let mut kp = ptr::null_mut();
    assert_eq!(unsafe { dpk_keypair_from_seed(seed.as_ptr(), &mut kp) }, DpkStatus::Ok);
    kp
}

#[test]
fn keypair_round_trip_and_signing_agree() {
    let kp = keypair(&SEED);
    let mut bytes = [0u8; 64];
    let mut pk = [0u8; 32];
    let mut derived = [0u8; 32];
    unsafe {
        assert_eq!(dpk_keypair_to_bytes(kp, bytes.as_mut_ptr()), DpkStatus::Ok);
        assert_eq!(dpk_keypair_public_key(kp, pk.as_mut_ptr()), DpkStatus::Ok);
        assert_eq!(dpk_derive_public(SEED.as_ptr(), derived.as_mut_ptr()), DpkStatus::Ok);
    }
    assert_eq!(&bytes[..32], &SEED);
    assert_eq!(&bytes[32..], &pk);
    assert_eq!(pk, derived);

    let msg = b"ffi message";
    let (mut a, mut b, mut c) = ([0u8; 64], [0u8; 64], [0u8; 64]);
    unsafe {
        assert_eq!(dpk_sign(kp, msg.as_ptr(), msg.len(), a.as_mut_ptr()), DpkStatus::Ok);
        assert_eq!(dpk_sign_rederive(SEED.as_ptr(), msg.as_ptr(), msg.len(), b.as_mut_ptr()), DpkStatus::Ok);
        assert_eq!(dpk_sign_unsafe(SEED.as_ptr(), pk.as_ptr(), msg.as_ptr(), msg.len(), c.as_mut_ptr()), DpkStatus::Ok);
        for mode in [DpkVerifyMode::Cofactored, DpkVerifyMode::Cofactorless] {
            assert_eq!(dpk_verify(msg.as_ptr(), msg.len(), a.as_ptr(), pk.as_ptr(), mode, true), DpkStatus::Ok);
        }
        assert_eq!(
            dpk_verify(msg.as_ptr(), msg.len() - 1, a.as_ptr(), pk.as_ptr(), DpkVerifyMode::Cofactored, true),
            DpkStatus::EquationFailed
        );
        dpk_keypair_free(kp);
    }
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn corrupt_keypair_and_bad_inputs() {
    let kp = keypair(&SEED);
    let mut bytes = [0u8; 64];
    unsafe {
        dpk_keypair_to_bytes(kp, bytes.as_mut_ptr());
        dpk_keypair_free(kp);
    }
    bytes[40] ^= 1;
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { dpk_keypair_from_bytes(bytes.as_ptr(), &mut out) }, DpkStatus::CorruptKeypair);
    assert!(out.is_null());

    let mut sig = [0u8; 64];
    let not_point = {
        let mut p = [0u8; 32];
        p[0] = 2;
        p
    };
    unsafe {
        assert_eq!(
            dpk_sign_unsafe(SEED.as_ptr(), not_point.as_ptr(), ptr::null(), 0, sig.as_mut_ptr()),
            DpkStatus::MalformedPublicKey
        );
        assert_eq!(dpk_sign_rederive(ptr::null(), ptr::null(), 0, sig.as_mut_ptr()), DpkStatus::NullPointer);
        assert_eq!(dpk_sign(ptr::null(), ptr::null(), 0, sig.as_mut_ptr()), DpkStatus::NullPointer);
        dpk_keypair_free(ptr::null_mut());
        dpk_report_free(ptr::null_mut());
        dpk_string_free(ptr::null_mut());
    }
}

#[test]
fn small_order_key_rejected() {
    let mut sig = [0u8; 64];
    unsafe { dpk_sign_rederive(SEED.as_ptr(), ptr::null(), 0, sig.as_mut_ptr()) };
    for enc in SMALL_ORDER_ENCODINGS {
        let status = unsafe { dpk_verify(ptr::null(), 0, sig.as_ptr(), enc.as_ptr(), DpkVerifyMode::Cofactored, true) };
        assert_eq!(status, DpkStatus::SmallOrderPk);
    }
}

struct Victim {
    seed: [u8; 32],
    message: Vec<u8>,
    safe: bool,
    calls: u32,
}

unsafe extern "C" fn victim_oracle(ctx: *mut c_void, pk: *const u8, sig_out: *mut u8) -> c_int {
    let v = &mut *(ctx as *mut Victim);
    v.calls += 1;
    let status = if v.safe {
        dpk_sign_rederive(v.seed.as_ptr(), v.message.as_ptr(), v.message.len(), sig_out)
    } else {
        dpk_sign_unsafe(v.seed.as_ptr(), pk, v.message.as_ptr(), v.message.len(), sig_out)
    };
    status as c_int
}

unsafe extern "C" fn failing_oracle(_: *mut c_void, _: *const u8, _: *mut u8) -> c_int {
    -1
}

fn run_attack(victim: &mut Victim, seed: u64) -> (DpkStatus, *mut DpkAttackReport) {
    let mut report = ptr::null_mut();
    let status = unsafe {
        dpk_attack(
            Some(victim_oracle),
            victim as *mut Victim as *mut c_void,
            victim.message.as_ptr(),
            victim.message.len(),
            &seed,
            &mut report,
        )
    };
    (status, report)
}

#[test]
fn attack_through_callback_recovers_and_forges() {
    let mut victim = Victim { seed: SEED, message: b"oracle message".to_vec(), safe: false, calls: 0 };
    let (status, report) = run_attack(&mut victim, 1);
    assert_eq!(status, DpkStatus::Ok);
    assert_eq!(victim.calls, 2);
    let mut scalar = [0u8; 32];
    let mut pk = [0u8; 32];
    let mut expected_pk = [0u8; 32];
    unsafe {
        assert_eq!(dpk_report_query_count(report), 2);
        dpk_report_recovered_scalar(report, scalar.as_mut_ptr());
        dpk_report_recovered_public_key(report, pk.as_mut_ptr());
        dpk_derive_public(SEED.as_ptr(), expected_pk.as_mut_ptr());
    }
    assert_eq!(scalar, expand_secret(&SecretSeed::from_bytes(SEED)).scalar().encode());
    assert_eq!(pk, expected_pk);

    let fresh = b"never signed by the victim";
    let (mut sig, mut fpk) = ([0u8; 64], [0u8; 32]);
    unsafe {
        let seed = 9u64;
        assert_eq!(
            dpk_forge(report, fresh.as_ptr(), fresh.len(), &seed, sig.as_mut_ptr(), fpk.as_mut_ptr()),
            DpkStatus::Ok
        );
        assert_eq!(fpk, expected_pk);
        for mode in [DpkVerifyMode::Cofactored, DpkVerifyMode::Cofactorless] {
            assert_eq!(dpk_verify(fresh.as_ptr(), fresh.len(), sig.as_ptr(), fpk.as_ptr(), mode, true), DpkStatus::Ok);
        }

        let mut json = ptr::null_mut();
        assert_eq!(dpk_report_to_json(report, &mut json), DpkStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        assert!(text.contains("\"recovered_s\""));
        let mut parsed = ptr::null_mut();
        assert_eq!(dpk_report_from_json(json, &mut parsed), DpkStatus::Ok);
        let mut again = [0u8; 32];
        dpk_report_recovered_scalar(parsed, again.as_mut_ptr());
        assert_eq!(again, scalar);
        dpk_string_free(json);
        dpk_report_free(parsed);
        dpk_report_free(report);
    }
}

#[test]
fn attack_against_safe_callback_fails() {
    let mut victim = Victim { seed: SEED, message: b"m".to_vec(), safe: true, calls: 0 };
    let (status, report) = run_attack(&mut victim, 2);
    assert_eq!(status, DpkStatus::AttackFailed);
    assert!(!report.is_null());
    let (mut sig, mut pk) = ([0u8; 64], [0u8; 32]);
    unsafe {
        assert_eq!(
            dpk_forge(report, ptr::null(), 0, ptr::null(), sig.as_mut_ptr(), pk.as_mut_ptr()),
            DpkStatus::ZeroScalar
        );
        dpk_report_free(report);
    }
}

#[test]
fn oracle_failure_and_null_callback() {
    let mut report = ptr::null_mut();
    unsafe {
        assert_eq!(
            dpk_attack(Some(failing_oracle), ptr::null_mut(), ptr::null(), 0, ptr::null(), &mut report),
            DpkStatus::OracleError
        );
        assert!(report.is_null());
        assert_eq!(dpk_attack(None, ptr::null_mut(), ptr::null(), 0, ptr::null(), &mut report), DpkStatus::NullPointer);
    }
}

#[test]
fn every_status_has_a_message() {
    for code in 0i32..=17 {
        let status: DpkStatus = unsafe { std::mem::transmute::<i32, DpkStatus>(code) };
        let msg = unsafe { CStr::from_ptr(dpk_status_message(status)) };
        assert!(!msg.to_bytes().is_empty());
    }
}
