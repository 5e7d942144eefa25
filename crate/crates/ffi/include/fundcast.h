#ifndef FUNDCAST_H
#define FUNDCAST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FcStatus {
  FC_OK = 0,
  FC_ERR_NULL_ARGUMENT = 1,
  FC_ERR_INVALID_UTF8 = 2,
  FC_ERR_IO = 3,
  FC_ERR_PARSE = 4,
  FC_ERR_SCHEMA = 5,
  FC_ERR_INVALID_ARGUMENT = 6,
  FC_ERR_UNDEFINED = 7,
  FC_ERR_BUFFER_TOO_SMALL = 8,
  FC_ERR_PANIC = 9,
} FcStatus;

// Trained model loaded from a JSON file.
typedef struct FcModel FcModel;

// Confusion counts and derived scores at one cutoff.
typedef struct FcMetrics {
  size_t true_positives;
  size_t false_positives;
  size_t true_negatives;
  size_t false_negatives;
  double precision;
  double recall;
  double f1;
  double f_beta;
} FcMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL.
// The pointer stays valid until the next fundcast call on the same thread.
const char *fc_last_error(void);

// Library version as a static NUL-terminated string.
const char *fc_version(void);

// Loads a model file. On success `*out` owns a handle for `fc_model_free`.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum FcStatus fc_model_load(const char *path, struct FcModel **out);

// Releases a handle from `fc_model_load`. NULL is ignored.
//
// # Safety
// `model` must come from `fc_model_load` and not be freed twice.
void fc_model_free(struct FcModel *model);

// Number of feature columns the model expects.
//
// # Safety
// `model` must be a live handle or NULL.
size_t fc_model_feature_count(const struct FcModel *model);

// Scores every row of a feature CSV. Writes the row count to `*out_len`;
// probabilities go to `out` when `capacity` is large enough, otherwise
// FC_ERR_BUFFER_TOO_SMALL is returned and nothing is written to `out`.
// Pass `out = NULL` and `capacity = 0` to query the row count.
//
// # Safety
// `out` must have room for `capacity` doubles; `out_len` must be valid.
enum FcStatus fc_model_predict_csv(const struct FcModel *model,
                                   const char *features_path,
                                   double *out,
                                   size_t capacity,
                                   size_t *out_len);

// Confusion counts and precision, recall, F1 and F-beta with positives at `p >= cutoff`.
// Labels must be 0 or 1.
//
// # Safety
// `labels` and `probabilities` must each hold `n` elements; `out` must be valid.
enum FcStatus fc_compute_metrics(const uint8_t *labels,
                                 const double *probabilities,
                                 size_t n,
                                 double cutoff,
                                 double beta,
                                 struct FcMetrics *out);

// Flesch reading ease of `text`. FC_ERR_UNDEFINED when it has no words.
//
// # Safety
// `text` must be NUL-terminated; `out` must be valid.
enum FcStatus fc_flesch_reading_ease(const char *text, double *out);

// Lexicon sentiment compound score in [-1, 1].
//
// # Safety
// `text` must be NUL-terminated; `out` must be valid.
enum FcStatus fc_sentiment_compound(const char *text, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FUNDCAST_H */
