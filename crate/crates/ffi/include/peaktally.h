#ifndef PEAKTALLY_H
#define PEAKTALLY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum PtStatus {
  PT_STATUS_OK = 0,
  PT_STATUS_NULL_POINTER = 1,
  PT_STATUS_INVALID_ARGUMENT = 2,
  PT_STATUS_INVALID_SET = 3,
  PT_STATUS_RESOURCE_LIMIT = 4,
  PT_STATUS_DISCREPANCY = 5,
  PT_STATUS_NO_CLOSED_FORM = 6,
  PT_STATUS_OVERFLOW = 7,
  PT_STATUS_IO = 8,
  PT_STATUS_VERIFICATION_FAILED = 9,
  PT_STATUS_PANIC = 10,
} PtStatus;

// Counting regime.
typedef enum PtVariant {
  PT_VARIANT_SYM = 0,
  PT_VARIANT_SYM_HAT = 1,
  PT_VARIANT_HYP = 2,
  PT_VARIANT_HYP_HAT = 3,
} PtVariant;

// Memoising counting engine. Safe to share between threads.
typedef struct PtEngine PtEngine;

// Exhaustive oracle tally for one variant and length.
typedef struct PtTally PtTally;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL. The pointer
// stays valid until the next call into this library on the same thread.
const char *pt_last_error(void);

// Releases a string returned by this library. NULL is ignored.
void pt_string_free(char *s);

struct PtEngine *pt_engine_new(void);

// Releases an engine. NULL is ignored.
void pt_engine_free(struct PtEngine *engine);

// Count of words of length `n` with peak set `set`, as a decimal string.
enum PtStatus pt_count(const struct PtEngine *engine,
                       uint32_t variant,
                       const char *set,
                       uint32_t n,
                       char **out);

// As `pt_count`, failing with `PT_STATUS_OVERFLOW` above `UINT64_MAX`.
enum PtStatus pt_count_u64(const struct PtEngine *engine,
                           uint32_t variant,
                           const char *set,
                           uint32_t n,
                           uint64_t *out);

// Closed-form value, with every registered route cross-checked.
enum PtStatus pt_closed_form(const struct PtEngine *engine,
                             uint32_t variant,
                             const char *set,
                             uint32_t n,
                             char **out);

// Binomial-basis polynomial of `set` as text, e.g. `"-2 + 1*C(n,1)"`.
enum PtStatus pt_poly(const struct PtEngine *engine, const char *set, char **out);

// Seeds the engine from a cache file. A missing file loads nothing.
enum PtStatus pt_engine_load_cache(const struct PtEngine *engine, const char *path);

enum PtStatus pt_engine_save_cache(const struct PtEngine *engine, const char *path);

// Enumerates every word of the group. `threads == 0` uses the available
// parallelism. Lengths above the default oracle caps fail with
// `PT_STATUS_RESOURCE_LIMIT`.
enum PtStatus pt_tally_new(uint32_t variant, uint32_t n, uint32_t threads, struct PtTally **out);

// Releases a tally. NULL is ignored.
void pt_tally_free(struct PtTally *tally);

// Number of words in the tally with peak set `set`.
enum PtStatus pt_tally_get(const struct PtTally *tally, const char *set, uint64_t *out);

// Number of peak sets with a nonzero count.
enum PtStatus pt_tally_support(const struct PtTally *tally, size_t *out);

// Runs the verification battery. Returns `PT_STATUS_VERIFICATION_FAILED`
// if any check fails; `report_json` (may be NULL) receives the full report.
enum PtStatus pt_verify(uint32_t n_max_sym, uint32_t n_max_hyp, char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PEAKTALLY_H */
