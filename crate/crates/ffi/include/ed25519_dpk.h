#ifndef ED25519_DPK_H
#define ED25519_DPK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every exported function.
typedef enum {
  DPK_STATUS_OK = 0,
  DPK_STATUS_NULL_POINTER = 1,
  DPK_STATUS_MALFORMED_PUBLIC_KEY = 2,
  DPK_STATUS_CORRUPT_KEYPAIR = 3,
  DPK_STATUS_NON_CANONICAL_R = 4,
  DPK_STATUS_NON_CANONICAL_PK = 5,
  DPK_STATUS_NON_CANONICAL_S = 6,
  DPK_STATUS_NOT_ON_CURVE = 7,
  DPK_STATUS_SMALL_ORDER_PK = 8,
  DPK_STATUS_EQUATION_FAILED = 9,
  DPK_STATUS_IDENTICAL_KEYS = 10,
  DPK_STATUS_ORACLE_NOT_DETERMINISTIC = 11,
  DPK_STATUS_HASH_COLLISION = 12,
  DPK_STATUS_ATTACK_FAILED = 13,
  DPK_STATUS_ORACLE_ERROR = 14,
  DPK_STATUS_ZERO_SCALAR = 15,
  DPK_STATUS_INVALID_ARGUMENT = 16,
  DPK_STATUS_PANIC = 17,
} DpkStatus;

// Verification equation selector.
typedef enum {
  DPK_VERIFY_MODE_COFACTORED = 0,
  DPK_VERIFY_MODE_COFACTORLESS = 1,
} DpkVerifyMode;

// Opaque result of an attack run.
typedef struct DpkAttackReport DpkAttackReport;

// Opaque stored keypair: a seed together with its derived public key.
typedef struct DpkKeypair DpkKeypair;

// Signing oracle callback. Receives the 32-byte public key to sign under
// and must write a 64-byte signature to `sig_out`. Returns 0 on success;
// any other value aborts the attack with `DPK_STATUS_ORACLE_ERROR`.
typedef int (*DpkOracleFn)(void *ctx, const uint8_t *pk, uint8_t *sig_out);

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code. Never free the result.
const char *dpk_status_message(DpkStatus status);

// Creates a keypair from a fresh random seed.
//
// # Safety
// `out` must be valid for writing one pointer.
DpkStatus dpk_keypair_generate(DpkKeypair **out);

// Creates a keypair from a 32-byte seed.
//
// # Safety
// `seed` must point to 32 readable bytes and `out` must be valid for
// writing one pointer.
DpkStatus dpk_keypair_from_seed(const uint8_t *seed, DpkKeypair **out);

// Loads a 64-byte stored keypair (seed then public key). Fails with
// `DPK_STATUS_CORRUPT_KEYPAIR` if the halves do not match.
//
// # Safety
// `bytes` must point to 64 readable bytes and `out` must be valid for
// writing one pointer.
DpkStatus dpk_keypair_from_bytes(const uint8_t *bytes, DpkKeypair **out);

// # Safety
// `keypair` must come from this library; `pk_out` must hold 32 bytes.
DpkStatus dpk_keypair_public_key(const DpkKeypair *keypair, uint8_t *pk_out);

// # Safety
// `keypair` must come from this library; `out` must hold 64 bytes.
DpkStatus dpk_keypair_to_bytes(const DpkKeypair *keypair, uint8_t *out);

// Releases a keypair. Null is ignored.
//
// # Safety
// `keypair` must be null or a live handle from this library, not used
// afterwards.
void dpk_keypair_free(DpkKeypair *keypair);

// # Safety
// `seed` must point to 32 readable bytes, `pk_out` to 32 writable bytes.
DpkStatus dpk_derive_public(const uint8_t *seed, uint8_t *pk_out);

// Signs with a stored keypair. The public key used is always the one
// bound to the seed.
//
// # Safety
// `keypair` must come from this library, `msg` must point to `msg_len`
// readable bytes (or be null when `msg_len` is 0) and `sig_out` to 64
// writable bytes.
DpkStatus dpk_sign(const DpkKeypair *keypair, const uint8_t *msg, size_t msg_len, uint8_t *sig_out);

// Signs from a bare seed, deriving the public key internally.
//
// # Safety
// As [`dpk_sign`], with `seed` pointing to 32 readable bytes.
DpkStatus dpk_sign_rederive(const uint8_t *seed,
                            const uint8_t *msg,
                            size_t msg_len,
                            uint8_t *sig_out);

// Signs under a caller-supplied public key that is never checked against
// the seed. Two calls with different keys leak the secret scalar; exposed
// only to reproduce the attack.
//
// # Safety
// As [`dpk_sign_rederive`], with `pk` pointing to 32 readable bytes.
DpkStatus dpk_sign_unsafe(const uint8_t *seed,
                          const uint8_t *pk,
                          const uint8_t *msg,
                          size_t msg_len,
                          uint8_t *sig_out);

// Verifies a signature. Returns `DPK_STATUS_OK` on accept or the
// rejection reason.
//
// # Safety
// `msg` as for [`dpk_sign`]; `sig` must point to 64 readable bytes and
// `pk` to 32.
DpkStatus dpk_verify(const uint8_t *msg,
                     size_t msg_len,
                     const uint8_t *sig,
                     const uint8_t *pk,
                     DpkVerifyMode mode,
                     bool reject_small_order);

// Runs the two-query key recovery against a callback oracle that signs
// `msg`. `rng_seed` fixes the attacker's key choice; pass null for fresh
// randomness. On `DPK_STATUS_OK` and on `DPK_STATUS_ATTACK_FAILED` a report
// is stored in `*out`; otherwise `*out` is set to null.
//
// # Safety
// `oracle` must be safe to call with `ctx`. `msg` as for [`dpk_sign`];
// `rng_seed` null or readable; `out` valid for writing one pointer.
DpkStatus dpk_attack(DpkOracleFn oracle,
                     void *ctx,
                     const uint8_t *msg,
                     size_t msg_len,
                     const uint64_t *rng_seed,
                     DpkAttackReport **out);

// Writes the recovered secret scalar (zero after a failed attack).
//
// # Safety
// `report` must come from this library; `out` must hold 32 bytes.
DpkStatus dpk_report_recovered_scalar(const DpkAttackReport *report, uint8_t *out);

// Writes the public key matching the recovered scalar.
//
// # Safety
// `report` must come from this library; `out` must hold 32 bytes.
DpkStatus dpk_report_recovered_public_key(const DpkAttackReport *report, uint8_t *out);

// Number of oracle queries made, or 0 for a null handle.
//
// # Safety
// `report` must be null or come from this library.
uint32_t dpk_report_query_count(const DpkAttackReport *report);

// Serializes the report as JSON. The string must be released with
// [`dpk_string_free`].
//
// # Safety
// `report` must come from this library; `out` must be valid for writing
// one pointer.
DpkStatus dpk_report_to_json(const DpkAttackReport *report, char **out);

// Parses a JSON report.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writing
// one pointer.
DpkStatus dpk_report_from_json(const char *json, DpkAttackReport **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library, not used afterwards.
void dpk_string_free(char *s);

// Releases a report. Null is ignored.
//
// # Safety
// `report` must be null or a live handle from this library, not used
// afterwards.
void dpk_report_free(DpkAttackReport *report);

// Signs `msg` with the scalar recovered in `report`. `nonce_seed` fixes
// the nonce; pass null for a random one. Writes the 64-byte signature and
// the 32-byte public key it verifies under.
//
// # Safety
// `report` must come from this library; `msg` as for [`dpk_sign`];
// `nonce_seed` null or readable; `sig_out` must hold 64 bytes and
// `pk_out` 32.
DpkStatus dpk_forge(const DpkAttackReport *report,
                    const uint8_t *msg,
                    size_t msg_len,
                    const uint64_t *nonce_seed,
                    uint8_t *sig_out,
                    uint8_t *pk_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ED25519_DPK_H */
