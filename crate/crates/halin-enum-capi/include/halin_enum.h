/* C interface to the halin-enum spanning-tree enumeration library. */

#ifndef HALIN_ENUM_H
#define HALIN_ENUM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum HalinStatus {
  HALIN_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  HALIN_STATUS_NULL_ARGUMENT = 1,
  /**
   * Input text was not valid UTF-8.
   */
  HALIN_STATUS_INVALID_UTF8 = 2,
  /**
   * The graph file could not be parsed.
   */
  HALIN_STATUS_PARSE_ERROR = 3,
  /**
   * The tree violates the Halin constraints.
   */
  HALIN_STATUS_INVALID_GRAPH = 4,
  /**
   * A parameter was out of range.
   */
  HALIN_STATUS_INVALID_ARGUMENT = 5,
  /**
   * The retained-tree cap was hit; results are partial.
   */
  HALIN_STATUS_CAPACITY_EXCEEDED = 6,
  /**
   * The graph exceeds an oracle guard.
   */
  HALIN_STATUS_TOO_LARGE = 7,
  /**
   * The verification verdict was FAIL.
   */
  HALIN_STATUS_CHECK_FAILED = 8,
  /**
   * Unexpected internal failure.
   */
  HALIN_STATUS_INTERNAL = 9,
} HalinStatus;

/**
 * Enumeration mode selector.
 */
typedef enum HalinMode {
  /**
   * Emit every spanning tree at least once; repeats possible.
   */
  HALIN_MODE_NAIVE = 0,
  /**
   * Emit every spanning tree exactly once.
   */
  HALIN_MODE_DISTINCT = 1,
} HalinMode;

/**
 * Opaque graph handle.
 */
typedef struct HalinGraphHandle HalinGraphHandle;

/**
 * Summary of one enumeration run.
 */
typedef struct HalinEnumStats {
  uint64_t total_emitted;
  /**
   * Distinct canonical keys; equals `total_emitted` in distinct mode.
   */
  uint64_t distinct;
  /**
   * Emissions that repeated an earlier key.
   */
  uint64_t duplicates;
  uint64_t expansions;
  uint64_t max_delay_us;
  uint64_t mean_delay_us;
} HalinEnumStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a graph file (text format) into a new handle.
 *
 * On success `*out` owns the graph; release it with [`halin_graph_free`].
 * # Safety
 *
 * `text` must point to a NUL-terminated string; `out` must be valid for writes.
 */
enum HalinStatus halin_graph_parse(const char *text, struct HalinGraphHandle **out);

/**
 * Generates a random Halin graph; deterministic for a fixed seed.
 * # Safety
 *
 * `out` must be valid for writes.
 */
enum HalinStatus halin_graph_generate(uint64_t seed,
                                      uint32_t target_n,
                                      uint32_t max_children,
                                      struct HalinGraphHandle **out);

/**
 * Releases a graph handle. Null is ignored.
 * # Safety
 *
 * `graph` must be a handle from this library, released at most once.
 */
void halin_graph_free(struct HalinGraphHandle *graph);

/**
 * Number of vertices, or 0 for a null handle.
 * # Safety
 *
 * `graph` must be null or a live handle from this library.
 */
uint32_t halin_graph_vertex_count(const struct HalinGraphHandle *graph);

/**
 * Number of leaves (accompanying-cycle length), or 0 for a null handle.
 * # Safety
 *
 * `graph` must be null or a live handle from this library.
 */
uint32_t halin_graph_leaf_count(const struct HalinGraphHandle *graph);

/**
 * Depth of the characteristic tree, or 0 for a null handle.
 * # Safety
 *
 * `graph` must be null or a live handle from this library.
 */
uint32_t halin_graph_depth(const struct HalinGraphHandle *graph);

/**
 * Serializes the graph back into the text format. The returned string must
 * be released with [`halin_string_free`].
 * # Safety
 *
 * `graph` must be null or a live handle; `out` must be valid for writes.
 */
enum HalinStatus halin_graph_serialize(const struct HalinGraphHandle *graph, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 * # Safety
 *
 * `s` must be a string from this library, released at most once.
 */
void halin_string_free(char *s);

/**
 * Enumerates spanning trees and fills `stats`.
 *
 * `workers == 1` runs sequentially; larger values use a fork-join pool.
 * `cap == 0` keeps the default retained-tree cap.
 * # Safety
 *
 * `graph` must be null or a live handle; `stats` must be valid for writes.
 */
enum HalinStatus halin_enumerate(const struct HalinGraphHandle *graph,
                                 enum HalinMode mode,
                                 uint32_t workers,
                                 uint64_t cap,
                                 struct HalinEnumStats *stats);

/**
 * Exact spanning-tree count by the matrix-tree theorem, as a decimal
 * string (counts overflow fixed-width integers quickly). Release the
 * string with [`halin_string_free`].
 * # Safety
 *
 * `graph` must be null or a live handle; `out` must be valid for writes.
 */
enum HalinStatus halin_spanning_tree_count(const struct HalinGraphHandle *graph, char **out);

/**
 * Runs the oracle verification suite. `guard` bounds the brute-force
 * clauses (pass 0 for the default). Writes the verdict into `out_pass`
 * and returns `CheckFailed` alongside `*out_pass == false` on FAIL.
 * # Safety
 *
 * `graph` must be null or a live handle; `out_pass` must be valid for writes.
 */
enum HalinStatus halin_check(const struct HalinGraphHandle *graph, uint32_t guard, bool *out_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HALIN_ENUM_H */
