#ifndef CMAV_H
#define CMAV_H

/* Generated by cbindgen from cmav-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call in this ABI.
 */
typedef enum {
  CMAV_STATUS_OK = 0,
  CMAV_STATUS_NULL_POINTER = 1,
  CMAV_STATUS_EMPTY_INPUT = 2,
  CMAV_STATUS_INVALID_ARGUMENT = 3,
  CMAV_STATUS_LENGTH_MISMATCH = 4,
  CMAV_STATUS_SINGLE_CLASS = 5,
  CMAV_STATUS_PARSE_ERROR = 6,
  CMAV_STATUS_INTERNAL_ERROR = 7,
} CmavStatus;

/**
 * Compressor selector, matching the library's five algorithms.
 */
typedef enum {
  CMAV_COMPRESSOR_PPM = 0,
  CMAV_COMPRESSOR_DEFLATE = 1,
  CMAV_COMPRESSOR_BZIP2 = 2,
  CMAV_COMPRESSOR_ZIP = 3,
  CMAV_COMPRESSOR_LZW = 4,
} CmavCompressor;

/**
 * Dissimilarity measure selector.
 */
typedef enum {
  CMAV_MEASURE_NCD = 0,
  CMAV_MEASURE_CBC = 1,
  CMAV_MEASURE_CLM = 2,
  CMAV_MEASURE_CDM = 3,
} CmavMeasure;

/**
 * Opaque trained-model handle.
 */
typedef struct CmavModel CmavModel;

/**
 * A byte buffer passed across the ABI.
 */
typedef struct {
  const uint8_t *data;
  uintptr_t len;
} CmavBuffer;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string; never freed.
 */
const char *cmav_version(void);

/**
 * Compressed length of `data` under `compressor`.
 *
 * # Safety
 * `data` must point to `len` readable bytes and `out_length` to a
 * writable u64.
 */
CmavStatus cmav_compressed_length(CmavCompressor compressor,
                                  const uint8_t *data,
                                  uintptr_t len,
                                  uint64_t *out_length);

/**
 * The triple (C(x), C(y), C(xy)) for the raw concatenation x followed
 * by y.
 *
 * # Safety
 * `x`/`y` must point to `x_len`/`y_len` readable bytes; the three out
 * pointers must be writable.
 */
CmavStatus cmav_triple_lengths(CmavCompressor compressor,
                               const uint8_t *x,
                               uintptr_t x_len,
                               const uint8_t *y,
                               uintptr_t y_len,
                               uint64_t *out_cx,
                               uint64_t *out_cy,
                               uint64_t *out_cxy);

/**
 * Dissimilarity of a compressed-length triple under `measure`.
 *
 * # Safety
 * `out_value` must be writable.
 */
CmavStatus cmav_dissimilarity(CmavMeasure measure,
                              uint64_t cx,
                              uint64_t cy,
                              uint64_t cxy,
                              double *out_value);

/**
 * Equal-error-rate threshold over two equally long score lists.
 *
 * # Safety
 * `y_scores`/`n_scores` must point to `y_len`/`n_len` readable doubles
 * and `out_theta` must be writable.
 */
CmavStatus cmav_calibrate_eer(const double *y_scores,
                              uintptr_t y_len,
                              const double *n_scores,
                              uintptr_t n_len,
                              double *out_theta);

/**
 * Brute-force EER sweep; class counts may differ.
 *
 * # Safety
 * As for [`cmav_calibrate_eer`].
 */
CmavStatus cmav_eer_oracle(const double *y_scores,
                           uintptr_t y_len,
                           const double *n_scores,
                           uintptr_t n_len,
                           double *out_theta);

/**
 * ROC-AUC of dissimilarity scores grouped by ground truth; lower scores
 * rank as same-author.
 *
 * # Safety
 * As for [`cmav_calibrate_eer`], with `out_auc` writable.
 */
CmavStatus cmav_roc_auc(const double *y_scores,
                        uintptr_t y_len,
                        const double *n_scores,
                        uintptr_t n_len,
                        double *out_auc);

/**
 * Parse a model from its JSON form into a handle.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out_model` writable.
 * The handle must be released with [`cmav_model_free`].
 */
CmavStatus cmav_model_from_json(const char *json, CmavModel **out_model);

/**
 * Serialize a model handle back to JSON.
 *
 * # Safety
 * `model` must be a live handle from this library; `out_json` must be
 * writable. The string must be released with [`cmav_string_free`].
 */
CmavStatus cmav_model_to_json(const CmavModel *model, char **out_json);

/**
 * Threshold of a model handle.
 *
 * # Safety
 * `model` must be a live handle and `out_theta` writable.
 */
CmavStatus cmav_model_theta(const CmavModel *model, double *out_theta);

/**
 * Score and decide one problem with a model handle.
 *
 * `known` points to `known_count` buffers concatenated in the order
 * given. On success, `out_score` gets the dissimilarity, `out_answer`
 * 'Y' or 'N', and `out_out_of_range` whether the score left the
 * measure's nominal range.
 *
 * # Safety
 * All buffers must be readable for their stated lengths; out-pointers
 * must be writable; `model` must be a live handle.
 */
CmavStatus cmav_verify(const CmavModel *model,
                       const CmavBuffer *known,
                       uintptr_t known_count,
                       const uint8_t *unknown,
                       uintptr_t unknown_len,
                       double *out_score,
                       char *out_answer,
                       bool *out_out_of_range);

/**
 * Noise-removal pipeline over raw bytes; the result is a single-line
 * string.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out_text` must be
 * writable. The string must be released with [`cmav_string_free`].
 */
CmavStatus cmav_clean_text(const uint8_t *data, uintptr_t len, char **out_text);

/**
 * Release a model handle. Null is a no-op.
 *
 * # Safety
 * `model` must be null or a handle returned by this library, not yet
 * freed.
 */
void cmav_model_free(CmavModel *model);

/**
 * Release a string returned by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void cmav_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CMAV_H */
