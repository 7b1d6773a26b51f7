#ifndef GF_H
#define GF_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum gf_algebra {
  GF_ALGEBRA_W1 = 0,
  GF_ALGEBRA_L0 = 1,
  GF_ALGEBRA_L1 = 2,
} gf_algebra;

typedef enum gf_degree_status {
  GF_DEGREE_STATUS_EXACT = 0,
  GF_DEGREE_STATUS_STABILIZED = 1,
  GF_DEGREE_STATUS_NONSTABILIZED = 2,
} gf_degree_status;

typedef enum gf_status {
  GF_STATUS_OK = 0,
  GF_STATUS_NON_STABILIZED = 1,
  GF_STATUS_INVALID = 2,
  GF_STATUS_UNSUPPORTED = 3,
  GF_STATUS_NULL_POINTER = 4,
  GF_STATUS_INTERNAL = 5,
} gf_status;

/**
 * Result of [`gf_betti`].
 */
typedef struct gf_betti_report gf_betti_report;

/**
 * Parsed coefficient module.
 */
typedef struct gf_module gf_module;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Owned by the
 * library; valid until the next call on the same thread.
 */
const char *gf_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void gf_string_free(char *s);

/**
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum gf_status gf_module_parse(const char *text, struct gf_module **out);

/**
 * # Safety
 * `m` must be null or a handle from [`gf_module_parse`], not yet freed.
 */
void gf_module_free(struct gf_module *m);

/**
 * Canonical text form; release with [`gf_string_free`].
 *
 * # Safety
 * `m` must be a live module handle; `out` must be writable.
 */
enum gf_status gf_module_canonical(const struct gf_module *m, char **out);

/**
 * Betti numbers in degrees `0..=qmax`. A `window` of 0 selects the default
 * ladder 8:2:3. The report is produced also when some degree did not
 * stabilize; the status is then [`GfStatus::NonStabilized`].
 *
 * # Safety
 * `m` must be a live module handle; `out` must be writable.
 */
enum gf_status gf_betti(enum gf_algebra algebra,
                        const struct gf_module *m,
                        size_t qmax,
                        int64_t ladder_start,
                        int64_t ladder_step,
                        size_t window,
                        struct gf_betti_report **out);

/**
 * # Safety
 * `r` must be null or a live report handle.
 */
void gf_betti_report_free(struct gf_betti_report *r);

/**
 * Number of degrees in the report (`qmax + 1`), or 0 for a null handle.
 *
 * # Safety
 * `r` must be null or a live report handle.
 */
size_t gf_betti_report_degree_count(const struct gf_betti_report *r);

/**
 * # Safety
 * `r` must be a live report handle; `out` must be writable.
 */
enum gf_status gf_betti_report_betti(const struct gf_betti_report *r, size_t q, size_t *out);

/**
 * # Safety
 * `r` must be a live report handle; `out` must be writable.
 */
enum gf_status gf_betti_report_status(const struct gf_betti_report *r,
                                      size_t q,
                                      enum gf_degree_status *out);

/**
 * Canonical JSON of the report; release with [`gf_string_free`].
 *
 * # Safety
 * `r` must be a live report handle; `out` must be writable.
 */
enum gf_status gf_betti_report_json(const struct gf_betti_report *r, char **out);

/**
 * Checks the named cocycle on all tuples with indices `<= k`.
 * `marked_points` of 0 uses the largest index in the name.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `pass` must be writable.
 */
enum gf_status gf_verify_cocycle(const char *name, size_t marked_points, int64_t k, bool *pass);

/**
 * Dimension of the L1-invariants of weight `w`.
 *
 * # Safety
 * `m` must be a live module handle; `dim` must be writable.
 */
enum gf_status gf_invariants_h0(const struct gf_module *m, int64_t w, size_t *dim);

/**
 * Runs a JSON job as the `gf run` command does, without caching or
 * writing files. `exit_code` receives the CLI exit code and `report` the
 * JSON report (release with [`gf_string_free`]).
 *
 * # Safety
 * `job_json` must be a NUL-terminated string; `exit_code` and `report` must be writable.
 */
enum gf_status gf_run_job(const char *job_json, int32_t *exit_code, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GF_H */
