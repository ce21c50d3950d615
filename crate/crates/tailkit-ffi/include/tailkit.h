#ifndef TAILKIT_H
#define TAILKIT_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every FFI call.
 */
typedef enum TailkitStatus {
  TailkitOk = 0,
  TailkitErrArgument = 1,
  TailkitErrCapacity = 2,
  TailkitErrInfeasible = 3,
  TailkitErrCertificate = 4,
  TailkitErrValidation = 5,
  TailkitErrInconsistency = 6,
  TailkitErrUnsupported = 7,
  TailkitErrParse = 8,
  TailkitErrIo = 9,
  TailkitErrNullPointer = 10,
  TailkitErrUtf8 = 11,
} TailkitStatus;

/**
 * Opaque k-uniform hypergraph handle.
 */
typedef struct TailkitHypergraph TailkitHypergraph;

/**
 * Opaque rooted-graph handle.
 */
typedef struct TailkitRootedGraph TailkitRootedGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent error on this thread; valid until the next
 * failing call. Never null.
 */
const char *tailkit_last_error_message(void);

/**
 * Parse a hypergraph from the text file format (header "N k", one edge per
 * line) and return a new handle through `out`.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum TailkitStatus tailkit_hypergraph_parse(const char *text, struct TailkitHypergraph **out);

/**
 * Release a hypergraph handle. Null is a no-op.
 *
 * # Safety
 * `handle` must come from `tailkit_hypergraph_parse` and not be freed twice.
 */
void tailkit_hypergraph_free(struct TailkitHypergraph *handle);

/**
 * Number of edges.
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum TailkitStatus tailkit_hypergraph_edge_count(const struct TailkitHypergraph *handle,
                                                 uint64_t *out);

/**
 * Expected edge count mu = |H| p^k.
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum TailkitStatus tailkit_hypergraph_mu(const struct TailkitHypergraph *handle,
                                         double p,
                                         double *out);

/**
 * Degree bound Delta_j: most edges containing a common j-set.
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum TailkitStatus tailkit_hypergraph_degree_bound(const struct TailkitHypergraph *handle,
                                                   uintptr_t j,
                                                   uint64_t *out);

/**
 * Exact tail P(X >= threshold) by full enumeration (guarded by ground size).
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum TailkitStatus tailkit_hypergraph_exact_tail(const struct TailkitHypergraph *handle,
                                                 double p,
                                                 double threshold,
                                                 double *out);

/**
 * Optimized Markov bound on P(X >= t mu) over moment orders 1..=m_max.
 * Writes the bound and the minimizing order.
 *
 * # Safety
 * `handle`, `out_bound`, and `out_m` must be valid pointers.
 */
enum TailkitStatus tailkit_hypergraph_markov_upper(const struct TailkitHypergraph *handle,
                                                   double p,
                                                   double t,
                                                   uint64_t m_max,
                                                   double *out_bound,
                                                   uint64_t *out_m);

/**
 * Parse a rooted graph: graph text (first line "n", then "u v" edges,
 * 1-indexed) plus an array of 1-indexed root vertices.
 *
 * # Safety
 * `text` must be NUL-terminated, `roots` must point to `root_count` entries,
 * and `out` must be a valid pointer.
 */
enum TailkitStatus tailkit_rooted_parse(const char *text,
                                        const uint32_t *roots,
                                        uintptr_t root_count,
                                        struct TailkitRootedGraph **out);

/**
 * Release a rooted-graph handle. Null is a no-op.
 *
 * # Safety
 * `handle` must come from `tailkit_rooted_parse` and not be freed twice.
 */
void tailkit_rooted_free(struct TailkitRootedGraph *handle);

/**
 * Fractional independence number of G - R as numerator / denominator.
 *
 * # Safety
 * `handle`, `out_num`, and `out_den` must be valid pointers.
 */
enum TailkitStatus tailkit_rooted_alpha_star(const struct TailkitRootedGraph *handle,
                                             int64_t *out_num,
                                             int64_t *out_den);

/**
 * Rooted density m_R(G) as a double.
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum TailkitStatus tailkit_rooted_density(const struct TailkitRootedGraph *handle, double *out);

/**
 * Exponent base M_{R,G} at (n, p).
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum TailkitStatus tailkit_rooted_m_value(const struct TailkitRootedGraph *handle,
                                          uint64_t n,
                                          double p,
                                          double *out);

/**
 * Expected rooted copy count mu at (n, p).
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum TailkitStatus tailkit_rooted_mean(const struct TailkitRootedGraph *handle,
                                       uint64_t n,
                                       double p,
                                       double *out);

/**
 * Tail regime of (n, p, t): writes the regime letter ('a'..'d') plus the
 * appearance threshold and the phase boundaries p1, p2.
 *
 * # Safety
 * `handle` and all out pointers must be valid.
 */
enum TailkitStatus tailkit_rooted_regime(const struct TailkitRootedGraph *handle,
                                         uint64_t n,
                                         double p,
                                         double t,
                                         char *out_letter,
                                         double *out_threshold,
                                         double *out_p1,
                                         double *out_p2);

/**
 * Exact tail P(X_G^R >= threshold) in G(n, p) by enumeration (guarded).
 *
 * # Safety
 * `handle` and `out` must be valid pointers.
 */
enum TailkitStatus tailkit_rooted_exact_tail(const struct TailkitRootedGraph *handle,
                                             uintptr_t n,
                                             double p,
                                             double threshold,
                                             double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAILKIT_H */
