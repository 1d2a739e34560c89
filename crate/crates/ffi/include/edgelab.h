#ifndef EDGELAB_H
#define EDGELAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

enum EdgelabStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  EDGELAB_STATUS_OK = 0,
  EDGELAB_STATUS_IO = 1,
  EDGELAB_STATUS_CONFIG = 2,
  EDGELAB_STATUS_BUDGET = 3,
  EDGELAB_STATUS_NUMERIC = 4,
  EDGELAB_STATUS_NULL_POINTER = 5,
  EDGELAB_STATUS_PANIC = 6,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum EdgelabStatus EdgelabStatus;
#else
typedef int32_t EdgelabStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Counts of `e(S)` over sampled or enumerated k-subsets.
 */
typedef struct EdgelabDistribution EdgelabDistribution;

/**
 * A simple graph.
 */
typedef struct EdgelabGraph EdgelabGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call into the library on the same thread.
 */
const char *edgelab_last_error(void);

/**
 * Output format tag, a static string.
 */
const char *edgelab_format_version(void);

/**
 * Uniform graph on `n` vertices with exactly `m` edges.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
EdgelabStatus edgelab_graph_gnm(size_t n, uint64_t m, uint64_t seed, struct EdgelabGraph **out);

/**
 * Each pair joined independently with probability `p`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
EdgelabStatus edgelab_graph_gnp(size_t n, double p, uint64_t seed, struct EdgelabGraph **out);

/**
 * Graph from `edges` (`2·m` vertex indices).
 *
 * # Safety
 * `edges` must point to `2·m` readable values (may be NULL when `m` is 0);
 * `out` must be a valid pointer.
 */
EdgelabStatus edgelab_graph_from_edges(size_t n,
                                       const uint32_t *edges,
                                       size_t m,
                                       struct EdgelabGraph **out);

/**
 * Reads an edge-list file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` a valid pointer.
 */
EdgelabStatus edgelab_graph_read(const char *path, struct EdgelabGraph **out);

/**
 * Writes an edge-list file.
 *
 * # Safety
 * `g` must come from this library; `path` must be a NUL-terminated string.
 */
EdgelabStatus edgelab_graph_write(const struct EdgelabGraph *g, const char *path);

/**
 * Vertex count, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or come from this library.
 */
size_t edgelab_graph_n(const struct EdgelabGraph *g);

/**
 * Edge count, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or come from this library.
 */
uint64_t edgelab_graph_m(const struct EdgelabGraph *g);

/**
 * # Safety
 * `g` must come from this library; `out` must be a valid pointer.
 */
EdgelabStatus edgelab_graph_degree(const struct EdgelabGraph *g, size_t v, uint32_t *out);

/**
 * # Safety
 * `g` must be NULL or a handle not yet freed.
 */
void edgelab_graph_free(struct EdgelabGraph *g);

/**
 * Empirical distribution of `e(S)` over `samples` uniform k-subsets.
 *
 * # Safety
 * `g` must come from this library; `out` must be a valid pointer.
 */
EdgelabStatus edgelab_sample(const struct EdgelabGraph *g,
                             size_t k,
                             uint64_t samples,
                             uint64_t seed,
                             size_t workers,
                             struct EdgelabDistribution **out);

/**
 * Exact distribution of `e(S)`; refuses with `EDGELAB_STATUS_BUDGET` when
 * `C(n,k) > budget`.
 *
 * # Safety
 * `g` must come from this library; `out` must be a valid pointer.
 */
EdgelabStatus edgelab_exact(const struct EdgelabGraph *g,
                            size_t k,
                            uint64_t budget,
                            struct EdgelabDistribution **out);

/**
 * Number of subsets counted, or 0 for NULL.
 *
 * # Safety
 * `d` must be NULL or come from this library.
 */
uint64_t edgelab_dist_total(const struct EdgelabDistribution *d);

/**
 * Number of subsets with `e(S) = z`, or 0 for NULL.
 *
 * # Safety
 * `d` must be NULL or come from this library.
 */
uint64_t edgelab_dist_count(const struct EdgelabDistribution *d, uint64_t z);

/**
 * Smallest and largest observed `e(S)`.
 *
 * # Safety
 * `d` must come from this library; `lo` and `hi` must be valid pointers.
 */
EdgelabStatus edgelab_dist_support(const struct EdgelabDistribution *d, uint64_t *lo, uint64_t *hi);

/**
 * # Safety
 * `d` must be NULL or a handle not yet freed.
 */
void edgelab_dist_free(struct EdgelabDistribution *d);

/**
 * Kolmogorov distance to `N(K·M/N, λn²)`.
 *
 * # Safety
 * `d` must come from this library; `out` must be a valid pointer.
 */
EdgelabStatus edgelab_ks_distance(const struct EdgelabDistribution *d, double *out);

/**
 * `max n·|P(z) − φ(z)|` over `|z − μ| <= window·σ`.
 *
 * # Safety
 * `d` must come from this library; `out` must be a valid pointer.
 */
EdgelabStatus edgelab_llt_error(const struct EdgelabDistribution *d, double window, double *out);

/**
 * `λ = ((n²−k²)k²/(2n⁴))·M(N−M)/N²`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
EdgelabStatus edgelab_lambda(size_t n, size_t k, uint64_t m, double *out);

/**
 * Runs a command described by a JSON configuration (the `config` object of
 * a header record; omitted fields take their defaults) and returns its
 * records as newline-separated JSON. Free the result with
 * [`edgelab_string_free`].
 *
 * # Safety
 * `config_json` must be a NUL-terminated string; `out` a valid pointer.
 */
EdgelabStatus edgelab_run(const char *config_json, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void edgelab_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EDGELAB_H */
