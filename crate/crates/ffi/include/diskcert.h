#ifndef DISKCERT_H
#define DISKCERT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call across the C boundary.
 */
typedef enum DiskcertStatus {
  /**
   * The operation ran and the verified property holds.
   */
  DISKCERT_STATUS_OK = 0,
  /**
   * The operation ran and the verified property does not hold.
   */
  DISKCERT_STATUS_VERIFICATION_FAILED = 1,
  /**
   * The input could not be parsed or was structurally invalid.
   */
  DISKCERT_STATUS_MALFORMED = 2,
  /**
   * A required pointer argument was null.
   */
  DISKCERT_STATUS_NULL_POINTER = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  DISKCERT_STATUS_INVALID_UTF8 = 4,
  /**
   * An internal computation failed; see the last error message.
   */
  DISKCERT_STATUS_INTERNAL = 5,
} DiskcertStatus;

/**
 * Opaque handle to a parsed certificate.
 */
typedef struct DiskcertCertificate DiskcertCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or null
 * when the last call succeeded.
 *
 * The pointer stays valid until the next failing call on the same
 * thread; do not free it.
 */
const char *diskcert_last_error_message(void);

/**
 * Parses certificate JSON into a new handle.
 *
 * On success writes the handle through `out` and returns `OK`; the
 * caller owns it and must release it with
 * [`diskcert_certificate_free`]. On failure `out` is left untouched.
 *
 * # Safety
 * `json` must point to a NUL-terminated string and `out` to writable
 * memory for one pointer; both must stay valid for the duration of
 * the call.
 */
enum DiskcertStatus diskcert_certificate_parse_json(const char *json,
                                                    struct DiskcertCertificate **out);

/**
 * Releases a handle created by [`diskcert_certificate_parse_json`].
 * Passing null is a no-op.
 *
 * # Safety
 * `cert` must be null or a handle from
 * [`diskcert_certificate_parse_json`] that has not been freed yet.
 */
void diskcert_certificate_free(struct DiskcertCertificate *cert);

/**
 * Writes the number of certified intervals through `out`.
 *
 * # Safety
 * `cert` must be a live handle and `out` writable for one `usize`.
 */
enum DiskcertStatus diskcert_certificate_entry_count(const struct DiskcertCertificate *cert,
                                                     uintptr_t *out);

/**
 * Writes the angular mode and integer field endpoints of interval
 * `index` through the three output pointers.
 *
 * # Safety
 * `cert` must be a live handle; each output pointer must be writable
 * for one value of its type.
 */
enum DiskcertStatus diskcert_certificate_entry(const struct DiskcertCertificate *cert,
                                               uintptr_t index,
                                               uint32_t *out_m,
                                               int64_t *out_b_left,
                                               int64_t *out_b_right);

/**
 * Verifies the certificate with exact arithmetic.
 *
 * Returns `OK` when every interval and the coverage chain pass,
 * `VERIFICATION_FAILED` otherwise.
 *
 * # Safety
 * `cert` must be a live handle.
 */
enum DiskcertStatus diskcert_certificate_check(const struct DiskcertCertificate *cert);

/**
 * Writes the human-readable check report through `out` as a
 * NUL-terminated string owned by the caller; release it with
 * [`diskcert_string_free`]. The status reflects the verification
 * verdict, and the report is written for both outcomes.
 *
 * # Safety
 * `cert` must be a live handle and `out` writable for one pointer.
 */
enum DiskcertStatus diskcert_certificate_check_summary(const struct DiskcertCertificate *cert,
                                                       char **out);

/**
 * Releases a string produced by this library. Passing null is a
 * no-op.
 *
 * # Safety
 * `s` must be null or a string returned by this library that has not
 * been freed yet.
 */
void diskcert_string_free(char *s);

/**
 * Verifies the large-field crossover bound against `threshold` using
 * the built-in exact enclosures.
 */
enum DiskcertStatus diskcert_large_b_verify(int64_t threshold);

/**
 * Verifies the full statement for the certificate: the exact check,
 * the large-field bound at the certificate's threshold, and the
 * overlap of the two ranges.
 *
 * # Safety
 * `cert` must be a live handle.
 */
enum DiskcertStatus diskcert_theorem_verify(const struct DiskcertCertificate *cert);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DISKCERT_H */
