#ifndef SYMLOGO_H
#define SYMLOGO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SymlogoStatus {
  SYMLOGO_STATUS_OK = 0,
  SYMLOGO_STATUS_NULL_POINTER = 1,
  SYMLOGO_STATUS_INVALID_ARGUMENT = 2,
  SYMLOGO_STATUS_IO = 3,
  SYMLOGO_STATUS_DATA_ERROR = 4,
  SYMLOGO_STATUS_BUFFER_TOO_SMALL = 5,
  SYMLOGO_STATUS_PANIC = 6,
} SymlogoStatus;

/**
 * Opaque trained model.
 */
typedef struct SymlogoModel SymlogoModel;

/**
 * Result of classifying one sample.
 */
typedef struct SymlogoOutcome {
  uint32_t predicted_class;
  uint32_t best_class;
  uint32_t best_cluster;
  uint32_t max_count;
  /**
   * Number of representatives scored, i.e. the length of the count array.
   */
  uint32_t num_counts;
  bool tie;
  bool out_of_coverage;
} SymlogoOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next `symlogo_*` call on the same thread.
 */
const char *symlogo_last_error(void);

/**
 * Number of features produced by the default extractor (60).
 */
size_t symlogo_feature_dim(void);

/**
 * Extract raw (un-normalized) features from an interleaved RGB image.
 *
 * # Safety
 * `pixels` must point to `width * height * 3` readable bytes and `out` to
 * `out_len` writable doubles.
 */
enum SymlogoStatus symlogo_extract_features_rgb(const uint8_t *pixels,
                                                size_t width,
                                                size_t height,
                                                double *out,
                                                size_t out_len);

/**
 * Load a model CSV and its `<stem>.normalizer.csv` sidecar.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum SymlogoStatus symlogo_model_load(const char *path, struct SymlogoModel **out);

/**
 * Release a model. NULL is ignored.
 *
 * # Safety
 * `model` must come from [`symlogo_model_load`] and not be freed twice.
 */
void symlogo_model_free(struct SymlogoModel *model);

/**
 * # Safety
 * `model` must be a live handle or NULL.
 */
size_t symlogo_model_num_classes(const struct SymlogoModel *model);

/**
 * Rows of the reference matrix (`k` times the number of classes).
 *
 * # Safety
 * `model` must be a live handle or NULL.
 */
size_t symlogo_model_num_representatives(const struct SymlogoModel *model);

/**
 * # Safety
 * `model` must be a live handle or NULL.
 */
size_t symlogo_model_feature_dim(const struct SymlogoModel *model);

/**
 * Class name owned by the model, or NULL when out of range.
 *
 * # Safety
 * `model` must be a live handle or NULL.
 */
const char *symlogo_model_class_name(const struct SymlogoModel *model, size_t class_);

/**
 * Classify a raw feature vector (normalized internally).
 *
 * `counts` may be NULL; otherwise it receives one acceptance count per
 * representative and must hold at least that many entries.
 *
 * # Safety
 * `features` must point to `len` doubles; `out` must be writable; `counts`
 * must be NULL or point to `counts_len` writable integers.
 */
enum SymlogoStatus symlogo_classify_features(const struct SymlogoModel *model,
                                             const double *features,
                                             size_t len,
                                             struct SymlogoOutcome *out,
                                             uint32_t *counts,
                                             size_t counts_len);

/**
 * Preprocess, extract and classify an interleaved RGB image.
 *
 * # Safety
 * As [`symlogo_classify_features`]; `pixels` must hold `width * height * 3` bytes.
 */
enum SymlogoStatus symlogo_classify_rgb(const struct SymlogoModel *model,
                                        const uint8_t *pixels,
                                        size_t width,
                                        size_t height,
                                        struct SymlogoOutcome *out,
                                        uint32_t *counts,
                                        size_t counts_len);

/**
 * Classify a PNG or JPEG file.
 *
 * # Safety
 * As [`symlogo_classify_features`]; `path` must be NUL-terminated.
 */
enum SymlogoStatus symlogo_classify_file(const struct SymlogoModel *model,
                                         const char *path,
                                         struct SymlogoOutcome *out,
                                         uint32_t *counts,
                                         size_t counts_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMLOGO_H */
