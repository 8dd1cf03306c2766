#ifndef MCKAY_H
#define MCKAY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MckayStatus {
  MckayStatus_Ok = 0,
  MckayStatus_NullPointer = 1,
  MckayStatus_InvalidArgument = 2,
  MckayStatus_Unsupported = 3,
  MckayStatus_BoundExceeded = 4,
  MckayStatus_Hypothesis = 5,
  MckayStatus_Internal = 6,
  MckayStatus_Panic = 7,
} MckayStatus;

/**
 * Root datum of a simply connected simple group.
 */
typedef struct MckayDatum MckayDatum;

/**
 * Result of a full comparison, with its JSON rendering.
 */
typedef struct MckayReport MckayReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the next
 * call into the library from the same thread.
 */
const char *mckay_last_error(void);

/**
 * Version string of the library, statically allocated.
 */
const char *mckay_version(void);

/**
 * Parses a type label such as `"C2"`.
 *
 * # Safety
 * `label` must be a NUL-terminated string; `out` must be writable.
 */
enum MckayStatus mckay_datum_new(const char *label, struct MckayDatum **out);

/**
 * # Safety
 * `d` must come from [`mckay_datum_new`] and not be used afterwards.
 */
void mckay_datum_free(struct MckayDatum *d);

/**
 * Rank of the datum, 0 for a null handle.
 *
 * # Safety
 * `d` must be null or a live handle.
 */
uint32_t mckay_datum_rank(const struct MckayDatum *d);

/**
 * Borel-side `p′`-character count at `q = p^n`.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum MckayStatus mckay_borel_total(const struct MckayDatum *d,
                                   uint64_t p,
                                   uint32_t n,
                                   uint64_t *out);

/**
 * Order of the fixed center `Z^F`.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum MckayStatus mckay_center_order(const struct MckayDatum *d,
                                    uint64_t p,
                                    uint32_t n,
                                    uint64_t *out);

/**
 * Borel-side count over the central character with index coordinates
 * `nu[0..len]` (empty for a trivial center).
 *
 * # Safety
 * `d` must be a live handle; `nu` must point to `len` readable values (or
 * be null with `len == 0`); `out` must be writable.
 */
enum MckayStatus mckay_borel_per_nu(const struct MckayDatum *d,
                                    uint64_t p,
                                    uint32_t n,
                                    const uint64_t *nu,
                                    uintptr_t len,
                                    uint64_t *out);

/**
 * Runs the full group-versus-Borel comparison. `max_order` bounds the
 * group enumeration; pass 0 for the library default.
 *
 * # Safety
 * `d` must be a live handle; `out` must be writable.
 */
enum MckayStatus mckay_check(const struct MckayDatum *d,
                             uint64_t p,
                             uint32_t n,
                             uint64_t max_order,
                             struct MckayReport **out);

/**
 * 1 if every comparison in the report passed, 0 otherwise or for null.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
int32_t mckay_report_passed(const struct MckayReport *r);

/**
 * JSON text of the report, owned by the handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
const char *mckay_report_json(const struct MckayReport *r);

/**
 * # Safety
 * `r` must come from [`mckay_check`] and not be used afterwards.
 */
void mckay_report_free(struct MckayReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MCKAY_H */
