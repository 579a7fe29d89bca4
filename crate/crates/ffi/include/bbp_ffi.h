#ifndef BBP_FFI_H
#define BBP_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by fallible calls.
 */
typedef enum BbpStatus {
  BBP_STATUS_OK = 0,
  BBP_STATUS_INVALID_ARGUMENT = 1,
  BBP_STATUS_PARSE_ERROR = 2,
  BBP_STATUS_VERIFY_FAILED = 3,
  BBP_STATUS_NUMERIC_ERROR = 4,
  BBP_STATUS_NOT_FOUND = 5,
} BbpStatus;

/**
 * Opaque handle to a formula (a named identity or a zero relation).
 */
typedef struct BbpFormula BbpFormula;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *bbp_version(void);

/**
 * Number of catalog entries (identities first, then zero relations).
 */
uintptr_t bbp_catalog_count(void);

/**
 * Catalog entry by index; NULL when out of range. Free with
 * `bbp_formula_free`.
 */
struct BbpFormula *bbp_catalog_get(uintptr_t index);

/**
 * Catalog entry by name; NULL when unknown.
 *
 * # Safety
 * `name` must be a valid NUL-terminated string.
 */
struct BbpFormula *bbp_formula_by_name(const char *name);

/**
 * Generate a family instance. `degree` 1 and 2 use the closed-form
 * left-hand sides; any other degree keeps the polylog sum. `p` must be odd.
 *
 * # Safety
 * `family_slug` must be a valid NUL-terminated string; `out` must be a
 * valid pointer.
 */
enum BbpStatus bbp_generate(const char *family_slug,
                            uint32_t degree,
                            uint32_t p,
                            struct BbpFormula **out);

/**
 * Parse a formula document (the same JSON the CLI emits).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be valid.
 */
enum BbpStatus bbp_formula_parse(const char *text, struct BbpFormula **out);

/**
 * Canonical document text for a formula. Free with `bbp_string_free`.
 *
 * # Safety
 * `f` must be a live handle from this library.
 */
char *bbp_formula_serialize(const struct BbpFormula *f);

/**
 * Formula name. Free with `bbp_string_free`.
 *
 * # Safety
 * `f` must be a live handle from this library.
 */
char *bbp_formula_name(const struct BbpFormula *f);

/**
 * Decimal value of the formula's constant to `bits` precision. Free the
 * string with `bbp_string_free`.
 *
 * # Safety
 * `f` must be a live handle from this library.
 */
char *bbp_eval_decimal(const struct BbpFormula *f, uint32_t bits);

/**
 * Verify an identity: left-hand side against the P-series. On success
 * writes the achieved agreement (in bits) through `agreement_out`.
 *
 * # Safety
 * `f` must be a live handle; `agreement_out` may be NULL.
 */
enum BbpStatus bbp_verify(const struct BbpFormula *f, uint32_t bits, int64_t *agreement_out);

/**
 * Zero-relation check at the given precision. Writes the log2 bound of
 * |value| through `bound_out` when non-NULL (i64::MIN for exactly zero).
 *
 * # Safety
 * `f` must be a live handle; `bound_out` may be NULL.
 */
enum BbpStatus bbp_zero_check(const struct BbpFormula *f, uint32_t bits, int64_t *bound_out);

/**
 * Extract `n_hex` uppercase hex digits of the constant starting at bit
 * offset `t`. Free the string with `bbp_string_free`.
 *
 * # Safety
 * `f` must be a live handle from this library.
 */
char *bbp_extract_digits(const struct BbpFormula *f, uint64_t t, uint32_t n_hex);

/**
 * Free a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void bbp_string_free(char *s);

/**
 * Free a formula handle. NULL is a no-op.
 *
 * # Safety
 * `f` must come from this library and not have been freed already.
 */
void bbp_formula_free(struct BbpFormula *f);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BBP_FFI_H */
