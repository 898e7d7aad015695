#ifndef DEALAB_H
#define DEALAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DealabCipher {
  DEALAB_CIPHER_PARVIN = 0,
  DEALAB_CIPHER_NOROUZI = 1,
  DEALAB_CIPHER_YANG = 2,
} DealabCipher;

typedef enum DealabModel {
  DEALAB_MODEL_KNOWN_PLAINTEXT = 0,
  DEALAB_MODEL_CHOSEN_PLAINTEXT = 1,
} DealabModel;

typedef enum DealabStatus {
  DEALAB_STATUS_OK = 0,
  DEALAB_STATUS_NULL_POINTER = 1,
  DEALAB_STATUS_INVALID_ARGUMENT = 2,
  DEALAB_STATUS_SIZE_MISMATCH = 3,
  DEALAB_STATUS_MODEL_VIOLATION = 4,
  DEALAB_STATUS_INCONSISTENT = 5,
  DEALAB_STATUS_INTERNAL = 6,
} DealabStatus;

/**
 * Opaque key material.
 */
typedef struct DealabKey DealabKey;

/**
 * Opaque encryption oracle holding a hidden key.
 */
typedef struct DealabOracle DealabOracle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *dealab_status_str(enum DealabStatus status);

uint8_t dealab_g_mul(uint64_t sum, uint8_t k);

/**
 * # Safety
 * `out` must be valid for one write.
 */
enum DealabStatus dealab_dea_eval(uint32_t alpha,
                                  uint32_t beta,
                                  uint32_t k,
                                  uint32_t bits,
                                  uint32_t *out);

/**
 * Bit-plane solve over `count` triples given as parallel arrays.
 *
 * # Safety
 * `alphas`, `betas`, `ys` must each hold `count` values; `value` and `mask` must be writable.
 */
enum DealabStatus dealab_bit_plane_solve(const uint32_t *alphas,
                                         const uint32_t *betas,
                                         const uint32_t *ys,
                                         uintptr_t count,
                                         uint32_t bits,
                                         uint32_t *value,
                                         uint32_t *mask);

/**
 * Derives key material from a seed. Free with [`dealab_key_free`].
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum DealabStatus dealab_key_new(enum DealabCipher cipher,
                                 uint64_t seed,
                                 uintptr_t height,
                                 uintptr_t width,
                                 struct DealabKey **out);

/**
 * # Safety
 * `key` must come from this library and not be used afterwards. Null is ignored.
 */
void dealab_key_free(struct DealabKey *key);

/**
 * Pixel count `H * W` of the key, or 0 for null.
 *
 * # Safety
 * `key` must be null or a live handle.
 */
uintptr_t dealab_key_pixels(const struct DealabKey *key);

/**
 * Copies the `L + 1` keystream bytes into `out`.
 *
 * # Safety
 * `key` must be a live handle and `out` must hold `len` bytes.
 */
enum DealabStatus dealab_key_keystream(const struct DealabKey *key, uint8_t *out, uintptr_t len);

/**
 * Encrypts `len = H * W` row-major pixels. `input` and `output` may alias.
 *
 * # Safety
 * `key` must be live; `input` and `output` must hold `len` bytes.
 */
enum DealabStatus dealab_encrypt(const struct DealabKey *key,
                                 const uint8_t *input,
                                 uint8_t *output,
                                 uintptr_t len);

/**
 * # Safety
 * Same contract as [`dealab_encrypt`].
 */
enum DealabStatus dealab_decrypt(const struct DealabKey *key,
                                 const uint8_t *input,
                                 uint8_t *output,
                                 uintptr_t len);

/**
 * Oracle over a hidden key derived from `seed`. Free with [`dealab_oracle_free`].
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum DealabStatus dealab_oracle_new(enum DealabCipher cipher,
                                    uint64_t seed,
                                    uintptr_t height,
                                    uintptr_t width,
                                    enum DealabModel model,
                                    struct DealabOracle **out);

/**
 * # Safety
 * `oracle` must come from this library and not be used afterwards. Null is ignored.
 */
void dealab_oracle_free(struct DealabOracle *oracle);

/**
 * # Safety
 * `oracle` must be null or a live handle.
 */
uint64_t dealab_oracle_queries(const struct DealabOracle *oracle);

/**
 * Runs the chosen-plaintext attack matching the oracle's cipher and returns
 * the recovered key as a new handle usable with [`dealab_decrypt`].
 *
 * # Safety
 * `oracle` must be live; `out` must be valid for one write.
 */
enum DealabStatus dealab_cp_attack(struct DealabOracle *oracle,
                                   uint64_t seed,
                                   struct DealabKey **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DEALAB_H */
