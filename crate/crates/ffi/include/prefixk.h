/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef PREFIXK_H
#define PREFIXK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PrefixkStatus {
  PREFIXK_STATUS_OK = 0,
  PREFIXK_STATUS_NULL_ARGUMENT = 1,
  PREFIXK_STATUS_INVALID_UTF8 = 2,
  PREFIXK_STATUS_INVALID_BITS = 3,
  PREFIXK_STATUS_INVALID_CATALOG = 4,
  /**
   * The program has no output on the catalog.
   */
  PREFIXK_STATUS_DIVERGES = 5,
  /**
   * `retrace` input without a `1`.
   */
  PREFIXK_STATUS_NO_MARKER = 6,
  /**
   * A Kraft–Chaitin request would exceed total weight 1.
   */
  PREFIXK_STATUS_OVERWEIGHT = 7,
  PREFIXK_STATUS_PANIC = 8,
} PrefixkStatus;

/**
 * Opaque handle to a validated machine catalog.
 */
typedef struct PrefixkCatalog PrefixkCatalog;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message for the most recent failure on this thread, or null. Valid
 * until the next call into this library from the same thread.
 */
const char *prefixk_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void prefixk_string_free(char *s);

/**
 * The catalog holding only the literal machine.
 */
struct PrefixkCatalog *prefixk_catalog_new_base(void);

/**
 * Parses and validates a catalog in its TOML form.
 *
 * # Safety
 * `toml` must be a valid C string; `out` must be writable.
 */
enum PrefixkStatus prefixk_catalog_from_toml(const char *toml, struct PrefixkCatalog **out);

/**
 * # Safety
 * `catalog` must come from this library and not have been freed. Null is ignored.
 */
void prefixk_catalog_free(struct PrefixkCatalog *catalog);

/**
 * Number of machines, or 0 for a null handle.
 *
 * # Safety
 * `catalog` must be null or a live handle.
 */
size_t prefixk_catalog_len(const struct PrefixkCatalog *catalog);

/**
 * `K(x)`, or `K(x | condition)` when `condition` is not null.
 *
 * # Safety
 * String arguments must be valid C strings; `out_k` must be writable.
 */
enum PrefixkStatus prefixk_k(const struct PrefixkCatalog *catalog,
                             const char *x,
                             const char *condition,
                             size_t *out_k);

/**
 * The canonical shortest unconditional description of `x`.
 *
 * # Safety
 * `x` must be a valid C string; `out` must be writable.
 */
enum PrefixkStatus prefixk_shortest_desc(const struct PrefixkCatalog *catalog,
                                         const char *x,
                                         char **out);

/**
 * Runs a full program (header included). Returns `Diverges` when it has no output.
 *
 * # Safety
 * String arguments must be valid C strings (`condition` may be null); `out`
 * must be writable.
 */
enum PrefixkStatus prefixk_run(const struct PrefixkCatalog *catalog,
                               const char *program,
                               const char *condition,
                               char **out);

/**
 * `tau` cut just before its last `1`.
 *
 * # Safety
 * `tau` must be a valid C string; `out` must be writable.
 */
enum PrefixkStatus prefixk_retrace(const char *tau, char **out);

/**
 * Allocates prefix-free codewords of the requested lengths, in order.
 *
 * The issued codewords are written newline-separated to `out_codewords`,
 * and `out_issued` receives their count. On `Overweight`, the request at
 * index `*out_issued` was the first one refused and the codewords before it
 * are still written.
 *
 * # Safety
 * `lengths` must point to `count` readable values (or be null with `count`
 * 0); both out pointers must be writable.
 */
enum PrefixkStatus prefixk_kc_allocate(const size_t *lengths,
                                       size_t count,
                                       char **out_codewords,
                                       size_t *out_issued);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PREFIXK_H */
