#ifndef PTLAB_H
#define PTLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum PtlabStatus {
  PTLAB_STATUS_OK = 0,
  PTLAB_STATUS_NULL_POINTER = 1,
  PTLAB_STATUS_INVALID_UTF8 = 2,
  PTLAB_STATUS_PARSE = 3,
  PTLAB_STATUS_INVALID_ARGUMENT = 4,
  PTLAB_STATUS_BUDGET_EXCEEDED = 5,
  PTLAB_STATUS_PANIC = 6,
} PtlabStatus;

/**
 * A linear code over GF(2).
 */
typedef struct PtlabCode PtlabCode;

/**
 * A randomized tester.
 */
typedef struct PtlabTester PtlabTester;

/**
 * A sorted set of distinct words of one length.
 */
typedef struct PtlabWordSet PtlabWordSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * Valid until the next call into this library on the same thread.
 */
const char *ptlab_last_error_message(void);

/**
 * Library version, a static string.
 */
const char *ptlab_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void ptlab_string_free(char *s);

/**
 * Parses a code file (`n k` then the generator rows).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PtlabStatus ptlab_code_parse(const char *text_, struct PtlabCode **out);

/**
 * Seeded random code of length `n` and dimension `k`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PtlabStatus ptlab_code_random(size_t n, size_t k, uint64_t seed, struct PtlabCode **out);

/**
 * # Safety
 * `code` must be null or a handle from this library, not yet freed.
 */
void ptlab_code_free(struct PtlabCode *code);

/**
 * Word length, or 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t ptlab_code_n(const struct PtlabCode *code);

/**
 * Dimension, or 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t ptlab_code_k(const struct PtlabCode *code);

/**
 * Minimum weight of a nonzero dual codeword; `n + 1` for the full space.
 *
 * # Safety
 * `code` must be a live handle; `out` must be writable.
 */
enum PtlabStatus ptlab_code_dual_distance(const struct PtlabCode *code, size_t *out);

/**
 * Whether the 0/1 string `word` is a codeword.
 *
 * # Safety
 * `code` must be a live handle; `word` a NUL-terminated string; `out` writable.
 */
enum PtlabStatus ptlab_code_contains(const struct PtlabCode *code, const char *word, bool *out);

/**
 * The code file text, canonical generator.
 *
 * # Safety
 * `code` must be a live handle; `out` writable. Free the result with
 * [`ptlab_string_free`].
 */
enum PtlabStatus ptlab_code_to_string(const struct PtlabCode *code, char **out);

/**
 * All codewords as a word set.
 *
 * # Safety
 * `code` must be a live handle; `out` writable.
 */
enum PtlabStatus ptlab_code_enumerate(const struct PtlabCode *code, struct PtlabWordSet **out);

/**
 * Parses a word-set file. `n` fixes the word length; 0 takes it from the
 * first line.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` writable.
 */
enum PtlabStatus ptlab_wordset_parse(const char *text_, size_t n, struct PtlabWordSet **out);

/**
 * Number of words, or 0 for a null handle.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t ptlab_wordset_len(const struct PtlabWordSet *set);

/**
 * # Safety
 * `set` must be null or a handle from this library, not yet freed.
 */
void ptlab_wordset_free(struct PtlabWordSet *set);

/**
 * Parses a tester file.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` writable.
 */
enum PtlabStatus ptlab_tester_parse(const char *text_, struct PtlabTester **out);

/**
 * # Safety
 * `tester` must be null or a handle from this library, not yet freed.
 */
void ptlab_tester_free(struct PtlabTester *tester);

/**
 * Acceptance probability of the 0/1 string `word`, exact value rounded to
 * a double.
 *
 * # Safety
 * `tester` must be a live handle; `word` a NUL-terminated string; `out`
 * writable.
 */
enum PtlabStatus ptlab_tester_accept(const struct PtlabTester *tester,
                                     const char *word,
                                     double *out);

/**
 * Builds the adaptive certificate for `subset` inside `code` against
 * `tester`, with discerning threshold `tau` (`"p/q"`). Writes the rendered
 * report and its verdict.
 *
 * # Safety
 * Handles must be live; `tau` a NUL-terminated string; outputs writable.
 * Free the report with [`ptlab_string_free`].
 */
enum PtlabStatus ptlab_certify_adaptive(const struct PtlabCode *code,
                                        const struct PtlabWordSet *subset,
                                        const struct PtlabTester *tester,
                                        const char *tau,
                                        char **out_report,
                                        bool *out_pass);

/**
 * Non-adaptive counterpart of [`ptlab_certify_adaptive`]; the tester must
 * be non-adaptive.
 *
 * # Safety
 * As for [`ptlab_certify_adaptive`].
 */
enum PtlabStatus ptlab_certify_nonadaptive(const struct PtlabCode *code,
                                           const struct PtlabWordSet *subset,
                                           const struct PtlabTester *tester,
                                           const char *tau,
                                           char **out_report,
                                           bool *out_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PTLAB_H */
