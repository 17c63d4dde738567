#ifndef EUMIRROR_H
#define EUMIRROR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>

/**
 * Result codes. `EUM_STATUS_OK` is zero; every other value is an error.
 */
typedef enum EumStatus {
  EUM_STATUS_OK = 0,
  EUM_STATUS_NULL_POINTER = 1,
  EUM_STATUS_INVALID_ARGUMENT = 2,
  EUM_STATUS_IO = 3,
  EUM_STATUS_PARSE = 4,
  EUM_STATUS_INVALID_DATA = 5,
  EUM_STATUS_DIMENSION_MISMATCH = 6,
  EUM_STATUS_DEGENERATE = 7,
  EUM_STATUS_NUMERICAL = 8,
  EUM_STATUS_OUTSIDE_HULL = 9,
  EUM_STATUS_BUFFER_TOO_SMALL = 10,
  EUM_STATUS_PANIC = 11,
} EumStatus;

/**
 * Format selector for [`eum_dataset_load`].
 */
typedef enum EumFormat {
  /**
   * Pick from the file extension.
   */
  EUM_FORMAT_AUTO = 0,
  EUM_FORMAT_NDJSON = 1,
  EUM_FORMAT_CSV = 2,
} EumFormat;

/**
 * Labeled and unlabeled sample sets.
 */
typedef struct EumDataset EumDataset;

typedef struct EumDistanceMatrix EumDistanceMatrix;

typedef struct EumEmbedding EumEmbedding;

/**
 * Piecewise-linear mirror surface over a Delaunay triangulation.
 */
typedef struct EumSurface EumSurface;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next `eum_*` call on the same thread.
 */
const char *eum_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *eum_version(void);

/**
 * Empty dataset to be filled with [`eum_dataset_push`].
 */
enum EumStatus eum_dataset_new(struct EumDataset **out);

/**
 * Load an NDJSON or CSV dataset file.
 */
enum EumStatus eum_dataset_load(const char *path, enum EumFormat format, struct EumDataset **out);

/**
 * Append a sample set of `n` rows by `q` columns (row-major).
 * `params` may be null for an unlabeled set, in which case `d` is ignored.
 */
enum EumStatus eum_dataset_push(struct EumDataset *ds,
                                const char *id,
                                const double *params,
                                size_t d,
                                const double *samples,
                                size_t n,
                                size_t q);

/**
 * Number of sets, labeled and unlabeled.
 */
size_t eum_dataset_len(const struct EumDataset *ds);

void eum_dataset_free(struct EumDataset *ds);

/**
 * Exact Wasserstein-`p` distances between every pair of sets.
 */
enum EumStatus eum_distance_matrix(const struct EumDataset *ds,
                                   double p,
                                   struct EumDistanceMatrix **out);

/**
 * Wrap an externally computed `m x m` matrix (row-major). Set ids are
 * `"0"`, `"1"`, and so on.
 */
enum EumStatus eum_distance_matrix_from_values(const double *values,
                                               size_t m,
                                               struct EumDistanceMatrix **out);

size_t eum_distance_matrix_size(const struct EumDistanceMatrix *dm);

/**
 * Copy all `m * m` entries row-major into `buf` of length `len`.
 */
enum EumStatus eum_distance_matrix_values(const struct EumDistanceMatrix *dm,
                                          double *buf,
                                          size_t len);

void eum_distance_matrix_free(struct EumDistanceMatrix *dm);

/**
 * Number of eigenvalues of the doubly centered matrix below tolerance
 * and the dimension picked by the largest-gap rule.
 */
enum EumStatus eum_diagnose(const struct EumDistanceMatrix *dm,
                            size_t *count_negative,
                            size_t *selected_dim);

/**
 * Classical MDS into `c` dimensions; `c = 0` picks the dimension automatically.
 */
enum EumStatus eum_embed(const struct EumDistanceMatrix *dm, size_t c, struct EumEmbedding **out);

size_t eum_embedding_rows(const struct EumEmbedding *emb);

size_t eum_embedding_dim(const struct EumEmbedding *emb);

/**
 * Copy the `m x c` coordinates row-major.
 */
enum EumStatus eum_embedding_coords(const struct EumEmbedding *emb, double *buf, size_t len);

/**
 * Copy all `m` eigenvalues, descending.
 */
enum EumStatus eum_embedding_spectrum(const struct EumEmbedding *emb, double *buf, size_t len);

void eum_embedding_free(struct EumEmbedding *emb);

/**
 * Recover the parameter of the last embedding row from the first `m - 1`
 * rows, whose parameters are given row-major in `params` (`(m - 1) x d`).
 * `x_hat` receives `d` values.
 */
enum EumStatus eum_recover_last(const struct EumEmbedding *emb,
                                const double *params,
                                size_t d,
                                double *x_hat,
                                double *residual);

/**
 * Interpolating surface through `m` parameter points (`m x d`, d in {1, 2})
 * with mirror values (`m x c`).
 */
enum EumStatus eum_surface_new(const double *points,
                               size_t m,
                               size_t d,
                               const double *values,
                               size_t c,
                               struct EumSurface **out);

/**
 * Evaluate the surface at `x` (length `d`) into `y` (length `c`).
 * Returns `EUM_STATUS_OUTSIDE_HULL` outside the convex hull of the points.
 */
enum EumStatus eum_surface_eval(const struct EumSurface *s,
                                const double *x,
                                size_t d,
                                double *y,
                                size_t c);

/**
 * Parameter in the hull whose surface value is closest to `target`
 * (length `c`). `x_hat` receives `d` values.
 */
enum EumStatus eum_surface_recover(const struct EumSurface *s,
                                   const double *target,
                                   size_t c,
                                   double *x_hat,
                                   size_t d,
                                   double *residual);

/**
 * Largest Jacobian spectral norm over the simplices.
 */
enum EumStatus eum_surface_lipschitz(const struct EumSurface *s, double *out);

void eum_surface_free(struct EumSurface *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EUMIRROR_H */
