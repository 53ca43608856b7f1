#ifndef TREETAU_H
#define TREETAU_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TreetauStatus {
  TREETAU_STATUS_OK = 0,
  TREETAU_STATUS_NULL_POINTER = 1,
  TREETAU_STATUS_INVALID_ARGUMENT = 2,
  TREETAU_STATUS_PRECONDITION = 3,
  TREETAU_STATUS_DOMAIN = 4,
  TREETAU_STATUS_CAP_EXCEEDED = 5,
  TREETAU_STATUS_RETRY_LIMIT = 6,
  TREETAU_STATUS_DISCONNECTED = 7,
  TREETAU_STATUS_BUFFER_TOO_SMALL = 8,
  TREETAU_STATUS_PANIC = 9,
} TreetauStatus;

/**
 * Degree sequence handle.
 */
typedef struct TreetauDegreeSequence TreetauDegreeSequence;

/**
 * Simple graph handle.
 */
typedef struct TreetauGraph TreetauGraph;

typedef struct TreetauEstimate {
  double log_value;
  double error_exponent;
  bool condition_ok;
} TreetauEstimate;

typedef struct TreetauMcEstimate {
  double mean_log;
  double std_error;
  double connected_fraction;
  uint64_t samples;
} TreetauMcEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *treetau_version(void);

/**
 * Message for the last failed call on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *treetau_last_error(void);

/**
 * # Safety
 * `degrees` must point to `len` readable values and `out` must be writable.
 */
enum TreetauStatus treetau_degseq_new(const uint32_t *degrees,
                                      size_t len,
                                      struct TreetauDegreeSequence **out);

/**
 * # Safety
 * `handle` must be null or come from `treetau_degseq_new`, and not be used afterwards.
 */
void treetau_degseq_free(struct TreetauDegreeSequence *handle);

/**
 * # Safety
 * `handle` must be a live degree-sequence handle and `out` writable.
 */
enum TreetauStatus treetau_degseq_is_graphical(const struct TreetauDegreeSequence *handle,
                                               bool *out);

/**
 * Asymptotic `ln E τ_d`. With `strict`, sequences outside the formula's
 * hypotheses fail with `TREETAU_STATUS_PRECONDITION`.
 *
 * # Safety
 * `handle` must be a live degree-sequence handle and `out` writable.
 */
enum TreetauStatus treetau_estimate(const struct TreetauDegreeSequence *handle,
                                    bool strict,
                                    struct TreetauEstimate *out);

/**
 * Monte Carlo `ln E τ_d`; deterministic for fixed `(seed, workers)`.
 *
 * # Safety
 * `handle` must be a live degree-sequence handle and `out` writable.
 */
enum TreetauStatus treetau_mc_expected_tau(const struct TreetauDegreeSequence *handle,
                                           uint64_t samples,
                                           uint64_t seed,
                                           size_t workers,
                                           struct TreetauMcEstimate *out);

/**
 * Number of labelled trees with degrees `x`, as a decimal string.
 *
 * # Safety
 * `x` must point to `len` readable values; `buf` must have `cap` writable bytes
 * (or be null to query the size through `needed`).
 */
enum TreetauStatus treetau_count_trees(const uint32_t *x,
                                       size_t len,
                                       char *buf,
                                       size_t cap,
                                       size_t *needed);

/**
 * Graph on `0..n` from `m` zero-based edges stored as `edges[2i], edges[2i+1]`.
 *
 * # Safety
 * `edges` must point to `2m` readable values and `out` must be writable.
 */
enum TreetauStatus treetau_graph_new(size_t n,
                                     const uint32_t *edges,
                                     size_t m,
                                     struct TreetauGraph **out);

/**
 * Uniform random graph with degrees `d`.
 *
 * # Safety
 * `degseq` must be a live handle and `out` writable.
 */
enum TreetauStatus treetau_graph_sample(const struct TreetauDegreeSequence *degseq,
                                        uint64_t seed,
                                        struct TreetauGraph **out);

/**
 * # Safety
 * `handle` must be null or come from this library, and not be used afterwards.
 */
void treetau_graph_free(struct TreetauGraph *handle);

/**
 * # Safety
 * `handle` must be a live graph handle and `out_n`, `out_m` writable.
 */
enum TreetauStatus treetau_graph_size(const struct TreetauGraph *handle,
                                      size_t *out_n,
                                      size_t *out_m);

/**
 * Copies the zero-based edges, `u < v`, sorted, into `edges[0..2m]`.
 *
 * # Safety
 * `edges` must have room for `cap` values.
 */
enum TreetauStatus treetau_graph_edges(const struct TreetauGraph *handle,
                                       uint32_t *edges,
                                       size_t cap);

/**
 * Exact `τ(G)` as a decimal string.
 *
 * # Safety
 * `handle` must be a live graph handle; `buf` must have `cap` writable bytes
 * (or be null to query the size through `needed`).
 */
enum TreetauStatus treetau_graph_spanning_tree_count(const struct TreetauGraph *handle,
                                                     char *buf,
                                                     size_t cap,
                                                     size_t *needed);

/**
 * `ln τ(G)` computed exactly then rounded; `-inf` for a disconnected graph.
 *
 * # Safety
 * `handle` must be a live graph handle and `out` writable.
 */
enum TreetauStatus treetau_graph_ln_spanning_tree_count(const struct TreetauGraph *handle,
                                                        double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TREETAU_H */
