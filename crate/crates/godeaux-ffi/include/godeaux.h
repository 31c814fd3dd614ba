#ifndef GODEAUX_H
#define GODEAUX_H

/* Generated by cbindgen from godeaux-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every FFI entry point.
 */
typedef enum {
  GODEAUX_STATUS_OK = 0,
  /**
   * Bad argument: unsupported torsion order, null pointer, parse failure.
   */
  GODEAUX_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Internal consistency failure.
   */
  GODEAUX_STATUS_INTERNAL = 2,
} GodeauxStatus;

/**
 * Opaque handle for one torsion case with its computed stratification.
 */
typedef struct GodeauxCase GodeauxCase;

/**
 * Build the pipeline for torsion order `nu` (3, 4 or 5). On success the
 * handle is stored in `out`; release it with `godeaux_case_free`.
 * # Safety
 *
 * `out` must point to writable storage for one pointer.
 */
GodeauxStatus godeaux_case_new(uint32_t nu, GodeauxCase **out);

/**
 * Release a case handle. A null pointer is a no-op.
 * # Safety
 *
 * `case` must be null or a handle from `godeaux_case_new`, not yet freed.
 */
void godeaux_case_free(GodeauxCase *case_);

/**
 * Release a string returned by any query function.
 * # Safety
 *
 * `s` must be null or a string returned by a query function, not yet freed.
 */
void godeaux_string_free(char *s);

/**
 * Stratification table, collapsed components and Hasse diagram as JSON.
 * # Safety
 *
 * `case` must be a live handle; `out` must point to writable storage.
 */
GodeauxStatus godeaux_case_strata_json(const GodeauxCase *case_, char **out);

/**
 * Hasse diagram in DOT syntax.
 * # Safety
 *
 * `case` must be a live handle; `out` must point to writable storage.
 */
GodeauxStatus godeaux_case_strata_dot(const GodeauxCase *case_, char **out);

/**
 * Inertia component decomposition as JSON.
 * # Safety
 *
 * `case` must be a live handle; `out` must point to writable storage.
 */
GodeauxStatus godeaux_case_inertia_json(const GodeauxCase *case_, char **out);

/**
 * The modular equation system of one twist (a unit mod nu) as JSON.
 * # Safety
 *
 * `case` must be a live handle; `out` must point to writable storage.
 */
GodeauxStatus godeaux_case_equations_json(const GodeauxCase *case_, uint32_t twist, char **out);

/**
 * Orders, structure and generators of the ambient group as JSON.
 * # Safety
 *
 * `case` must be a live handle; `out` must point to writable storage.
 */
GodeauxStatus godeaux_case_ambient_json(const GodeauxCase *case_, char **out);

/**
 * Identify the subgroup generated by semicolon-separated tuples such as
 * "(2,2,0,0);(0,0,0,1)", quotiented by the torsion group. JSON result.
 * # Safety
 *
 * `case` must be a live handle, `generators` null or NUL-terminated, `out` writable.
 */
GodeauxStatus godeaux_case_group_id_json(const GodeauxCase *case_,
                                         const char *generators,
                                         char **out);

#endif /* GODEAUX_H */
