#ifndef DIMWIT_H
#define DIMWIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

typedef enum DimwitStatus {
  DIMWIT_STATUS_OK = 0,
  DIMWIT_STATUS_NULL_POINTER = 1,
  DIMWIT_STATUS_INVALID_UTF8 = 2,
  DIMWIT_STATUS_MALFORMED_GRAPH = 3,
  DIMWIT_STATUS_INVALID_PARAMETER = 4,
  DIMWIT_STATUS_NUMERIC = 5,
  DIMWIT_STATUS_HEURISTIC_FAILED = 6,
  DIMWIT_STATUS_IO = 7,
  DIMWIT_STATUS_PANIC = 8,
} DimwitStatus;

typedef enum DimwitFormat {
  DIMWIT_FORMAT_JSON = 0,
  DIMWIT_FORMAT_DIMACS = 1,
} DimwitFormat;

typedef enum DimwitFamily {
  DIMWIT_FAMILY_CYCLE = 0,
  DIMWIT_FAMILY_COMPLETE = 1,
  DIMWIT_FAMILY_EMPTY = 2,
} DimwitFamily;

/**
 * Opaque graph handle.
 */
typedef struct DimwitGraph DimwitGraph;

typedef struct DimwitHeuristicConfig {
  size_t d;
  size_t iters;
  size_t restarts;
  uint64_t seed;
  double stop_tol;
} DimwitHeuristicConfig;

typedef struct DimwitHeuristicResult {
  double bound;
  bool converged;
  size_t achieved_rank;
  size_t failed_restarts;
} DimwitHeuristicResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *dimwit_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void dimwit_string_free(char *s);

/**
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum DimwitStatus dimwit_graph_parse(const char *text,
                                     enum DimwitFormat format,
                                     struct DimwitGraph **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum DimwitStatus dimwit_graph_standard(enum DimwitFamily family,
                                        size_t n,
                                        struct DimwitGraph **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum DimwitStatus dimwit_graph_qite(size_t k, struct DimwitGraph **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum DimwitStatus dimwit_graph_mermin(struct DimwitGraph **out);

/**
 * # Safety
 * `g` must be null or a handle from this library that has not been freed.
 */
void dimwit_graph_free(struct DimwitGraph *g);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t dimwit_graph_vertex_count(const struct DimwitGraph *g);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t dimwit_graph_edge_count(const struct DimwitGraph *g);

/**
 * Graph as JSON.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum DimwitStatus dimwit_graph_to_json(const struct DimwitGraph *g, char **out);

/**
 * Independence number as a double. If `members_json` is non-null it
 * receives a maximum stable set as a JSON array.
 *
 * # Safety
 * `g` must be a live handle; `value` must be writable; `members_json` may be null.
 */
enum DimwitStatus dimwit_alpha(const struct DimwitGraph *g, double *value, char **members_json);

/**
 * # Safety
 * `g` must be a live handle; `value` must be writable.
 */
enum DimwitStatus dimwit_theta(const struct DimwitGraph *g, double *value);

/**
 * # Safety
 * `g` must be null or a live handle.
 */
size_t dimwit_barvinok_bound(const struct DimwitGraph *g);

/**
 * Default heuristic settings for dimension `d`.
 */
struct DimwitHeuristicConfig dimwit_heuristic_config_default(size_t d);

/**
 * Heuristic lower bound on the dimension-restricted theta. The bound is
 * only valid when `converged` is set.
 *
 * # Safety
 * `g` and `cfg` must be valid; `out` must be writable.
 */
enum DimwitStatus dimwit_heuristic(const struct DimwitGraph *g,
                                   const struct DimwitHeuristicConfig *cfg,
                                   struct DimwitHeuristicResult *out);

/**
 * Witness report JSON for the `ndims` caps in `dims`; `cfg.d` is ignored.
 *
 * # Safety
 * `g` and `cfg` must be valid, `dims` must point to `ndims` values and
 * `out` must be writable.
 */
enum DimwitStatus dimwit_report_json(const struct DimwitGraph *g,
                                     const size_t *dims,
                                     size_t ndims,
                                     const struct DimwitHeuristicConfig *cfg,
                                     char **out);

/**
 * Static description of a status code.
 */
const char *dimwit_status_str(enum DimwitStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIMWIT_H */
