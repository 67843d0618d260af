#ifndef CATCLUST_H
#define CATCLUST_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CcAlgorithm {
  CC_ALGORITHM_KSCC = 0,
  CC_ALGORITHM_KSCC_PLUS = 1,
  CC_ALGORITHM_KMODES = 2,
} CcAlgorithm;

typedef enum CcMeasure {
  CC_MEASURE_LIN = 0,
  CC_MEASURE_HAMMING = 1,
} CcMeasure;

typedef enum CcSelection {
  CC_SELECTION_OBJECTIVE = 0,
  CC_SELECTION_SILHOUETTE = 1,
} CcSelection;

/**
 * Outcome of a call.
 */
typedef enum CcStatus {
  CC_STATUS_OK = 0,
  CC_STATUS_NULL_POINTER = 1,
  CC_STATUS_INVALID_ARGUMENT = 2,
  CC_STATUS_IO = 3,
  CC_STATUS_PARSE = 4,
  CC_STATUS_CONFIG = 5,
  CC_STATUS_INTERNAL = 6,
} CcStatus;

/**
 * Opaque clustering result.
 */
typedef struct CcClustering CcClustering;

/**
 * Opaque categorical dataset.
 */
typedef struct CcDataset CcDataset;

/**
 * Opaque pairwise dissimilarity matrix.
 */
typedef struct CcMatrix CcMatrix;

/**
 * Opaque sweep result.
 */
typedef struct CcSweep CcSweep;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into this library from the same thread.
 */
const char *cc_last_error_message(void);

/**
 * Loads a categorical CSV file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum CcStatus cc_dataset_from_csv_path(const char *path,
                                       bool has_header,
                                       bool id_column,
                                       struct CcDataset **out);

/**
 * Builds a dataset from an `n` x `m` row-major array of category codes.
 *
 * # Safety
 * `codes` must point to `n * m` readable values; `out` must be writable.
 */
enum CcStatus cc_dataset_from_codes(const uint32_t *codes,
                                    size_t n,
                                    size_t m,
                                    struct CcDataset **out);

/**
 * # Safety
 * `ds` must be NULL or a handle from this library not yet freed.
 */
void cc_dataset_free(struct CcDataset *ds);

/**
 * Number of objects, or 0 for NULL.
 *
 * # Safety
 * `ds` must be NULL or a live handle.
 */
size_t cc_dataset_n(const struct CcDataset *ds);

/**
 * Number of attributes, or 0 for NULL.
 *
 * # Safety
 * `ds` must be NULL or a live handle.
 */
size_t cc_dataset_m(const struct CcDataset *ds);

/**
 * Pairwise dissimilarities of all objects.
 *
 * # Safety
 * `ds` must be a live handle; `out` must be writable.
 */
enum CcStatus cc_matrix_compute(const struct CcDataset *ds,
                                enum CcMeasure measure,
                                struct CcMatrix **out);

/**
 * Matrix order, or 0 for NULL.
 *
 * # Safety
 * `mat` must be NULL or a live handle.
 */
size_t cc_matrix_order(const struct CcMatrix *mat);

/**
 * # Safety
 * `mat` must be a live handle; `out` must be writable.
 */
enum CcStatus cc_matrix_get(const struct CcMatrix *mat, size_t i, size_t j, double *out);

/**
 * Copies the row-major matrix into `buf`, which must hold `order^2` values.
 *
 * # Safety
 * `mat` must be a live handle; `buf` must point to `len` writable values.
 */
enum CcStatus cc_matrix_copy(const struct CcMatrix *mat, double *buf, size_t len);

/**
 * # Safety
 * `mat` must be NULL or a handle from this library not yet freed.
 */
void cc_matrix_free(struct CcMatrix *mat);

/**
 * Best of `restarts` seeded runs with `k` clusters.
 *
 * # Safety
 * `ds` must be a live handle; `out` must be writable.
 */
enum CcStatus cc_cluster(const struct CcDataset *ds,
                         enum CcAlgorithm algorithm,
                         size_t k,
                         size_t restarts,
                         size_t max_iters,
                         uint64_t seed,
                         struct CcClustering **out);

/**
 * Number of labelled objects, or 0 for NULL.
 *
 * # Safety
 * `res` must be NULL or a live handle.
 */
size_t cc_clustering_len(const struct CcClustering *res);

/**
 * Copies the cluster labels into `buf`.
 *
 * # Safety
 * `res` must be a live handle; `buf` must point to `len` writable values.
 */
enum CcStatus cc_clustering_labels(const struct CcClustering *res, size_t *buf, size_t len);

/**
 * # Safety
 * `res` must be a live handle; `out` must be writable.
 */
enum CcStatus cc_clustering_objective(const struct CcClustering *res, double *out);

/**
 * Assignment passes of the selected run, or 0 for NULL.
 *
 * # Safety
 * `res` must be NULL or a live handle.
 */
size_t cc_clustering_iterations(const struct CcClustering *res);

/**
 * # Safety
 * `res` must be NULL or a handle from this library not yet freed.
 */
void cc_clustering_free(struct CcClustering *res);

/**
 * Mean silhouette of `labels` (values below `k`) over `mat`.
 *
 * # Safety
 * `mat` must be a live handle; `labels` must point to `n` values;
 * `out` must be writable.
 */
enum CcStatus cc_average_silhouette(const struct CcMatrix *mat,
                                    const size_t *labels,
                                    size_t n,
                                    size_t k,
                                    double *out);

/**
 * Clusters for every `k` in `[k_min, k_max]` and picks the `k` with the
 * largest average silhouette.
 *
 * # Safety
 * `ds` must be a live handle; `out` must be writable.
 */
enum CcStatus cc_sweep(const struct CcDataset *ds,
                       enum CcAlgorithm algorithm,
                       size_t k_min,
                       size_t k_max,
                       size_t restarts,
                       size_t max_iters,
                       uint64_t seed,
                       enum CcSelection selection,
                       struct CcSweep **out);

/**
 * Selected number of clusters, or 0 for NULL.
 *
 * # Safety
 * `sw` must be NULL or a live handle.
 */
size_t cc_sweep_k_opt(const struct CcSweep *sw);

/**
 * Number of `k` values evaluated, or 0 for NULL.
 *
 * # Safety
 * `sw` must be NULL or a live handle.
 */
size_t cc_sweep_len(const struct CcSweep *sw);

/**
 * The `index`-th evaluated `k` (increasing) and its average silhouette.
 *
 * # Safety
 * `sw` must be a live handle; `k` and `avg_silhouette` must be writable.
 */
enum CcStatus cc_sweep_entry(const struct CcSweep *sw,
                             size_t index,
                             size_t *k,
                             double *avg_silhouette);

/**
 * # Safety
 * `sw` must be NULL or a handle from this library not yet freed.
 */
void cc_sweep_free(struct CcSweep *sw);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CATCLUST_H */
