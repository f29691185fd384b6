/* C interface to the hsz library. Handles are opaque; free them with the matching *_free. */

#ifndef HSZ_H
#define HSZ_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible call.
typedef enum HszStatus {
  HSZ_STATUS_OK = 0,
  // A required pointer argument was null.
  HSZ_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  HSZ_STATUS_INVALID_UTF8 = 2,
  // The input could not be parsed or violates a type invariant.
  HSZ_STATUS_BAD_INPUT = 3,
  // A numerical precondition failed (positivity, contraction, ...).
  HSZ_STATUS_NUMERIC = 4,
  // A size or order limit was exceeded.
  HSZ_STATUS_CAP_EXCEEDED = 5,
  // An internal invariant failed; report this as a bug.
  HSZ_STATUS_INTERNAL = 6,
} HszStatus;

// Verdict categories of a diagnostic report.
typedef enum HszVerdict {
  HSZ_VERDICT_CERTIFIED_HS = 0,
  HSZ_VERDICT_LIKELY_HS = 1,
  HSZ_VERDICT_LIKELY_NOT_HS = 2,
  HSZ_VERDICT_NOT_HS_NECESSARY_VIOLATION = 3,
  HSZ_VERDICT_INCONCLUSIVE = 4,
} HszVerdict;

typedef struct HszMoments HszMoments;

typedef struct HszReport HszReport;

typedef struct HszSchurParams HszSchurParams;

typedef struct HszSeries HszSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static string; do not free.
const char *hsz_version(void);

// Message of the last failure on this thread, or null. Valid until the
// next failing call on the same thread; do not free.
const char *hsz_last_error_message(void);

// Releases a string returned through an out-parameter.
//
// # Safety
// `s` must have been returned by this library and not freed before.
void hsz_string_free(char *s);

// Parses `{"gamma": [[re,im],..], "terminal_unimodular": bool}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum HszStatus hsz_schur_params_parse(const char *json, struct HszSchurParams **out);

// Renders the canonical JSON form; release with [`hsz_string_free`].
//
// # Safety
// `handle` must be a live parse/transform result; `out` must be valid.
enum HszStatus hsz_schur_params_to_json(const struct HszSchurParams *handle, char **out);

// Number of stored entries.
//
// # Safety
// `handle` must be live; null yields zero.
size_t hsz_schur_params_len(const struct HszSchurParams *handle);

// Whether the sequence ends with a unimodular entry.
//
// # Safety
// `handle` must be live; null yields false.
bool hsz_schur_params_is_terminal(const struct HszSchurParams *handle);

// Reads entry `index` (zero-extended beyond the support).
//
// # Safety
// `handle` must be live; `re` and `im` must be valid pointers.
enum HszStatus hsz_schur_params_entry(const struct HszSchurParams *handle,
                                      size_t index,
                                      double *re,
                                      double *im);

// # Safety
// `handle` must come from this library and not be freed twice.
void hsz_schur_params_free(struct HszSchurParams *handle);

// Parses `{"moments": [[re,im],..]}`; validates Toeplitz positivity.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum HszStatus hsz_moments_parse(const char *json, struct HszMoments **out);

// # Safety
// `handle` must come from this library and not be freed twice.
void hsz_moments_free(struct HszMoments *handle);

// Parses `{"coeffs": [[re,im],..]}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum HszStatus hsz_series_parse(const char *json, struct HszSeries **out);

// Truncation order (highest stored power).
//
// # Safety
// `handle` must be live; null yields zero.
size_t hsz_series_order(const struct HszSeries *handle);

// Reads coefficient `k` (zero beyond the order).
//
// # Safety
// `handle` must be live; `re` and `im` must be valid pointers.
enum HszStatus hsz_series_coeff(const struct HszSeries *handle, size_t k, double *re, double *im);

// # Safety
// `handle` must come from this library and not be freed twice.
void hsz_series_free(struct HszSeries *handle);

// Taylor coefficients of the Schur function with the given parameters.
//
// # Safety
// `gamma` must be live and `out` a valid pointer.
enum HszStatus hsz_inverse_schur(const struct HszSchurParams *gamma,
                                 size_t order,
                                 struct HszSeries **out);

// Runs the Schur algorithm on a series. `trusted` (optional) receives the
// number of parameters backed by the series order.
//
// # Safety
// `theta` must be live and `out` a valid pointer; `trusted` may be null.
enum HszStatus hsz_schur_algorithm(const struct HszSeries *theta,
                                   size_t max_order,
                                   struct HszSchurParams **out,
                                   size_t *trusted);

// Parameters from moments through the Herglotz/Schur route.
//
// # Safety
// `moments` must be live and `out` a valid pointer.
enum HszStatus hsz_gamma_from_moments(const struct HszMoments *moments,
                                      size_t order,
                                      struct HszSchurParams **out);

// Parameters straight from moments through the Levinson recurrence.
//
// # Safety
// `moments` must be live and `out` a valid pointer.
enum HszStatus hsz_levinson(const struct HszMoments *moments, struct HszSchurParams **out);

// Strong-Szego certificate: sufficiency flag and certified lower bound.
//
// # Safety
// `gamma` must be live; `passes` and `c_bound` must be valid pointers.
enum HszStatus hsz_strong_szego(const struct HszSchurParams *gamma, bool *passes, double *c_bound);

// Smallest singular values of the adjoint triangular sections at the given
// sizes; `values` must have room for `len` results.
//
// # Safety
// `gamma` must be live; `sizes` and `values` must point to `len` elements.
enum HszStatus hsz_sigma_min_sweep(const struct HszSchurParams *gamma,
                                   const size_t *sizes,
                                   size_t len,
                                   double *values);

// Finite-section Riesz projection norm on `span{t^-n..t^n}`.
//
// # Safety
// `moments` must be live and `out` a valid pointer.
enum HszStatus hsz_riesz_norm(const struct HszMoments *moments, size_t n, double *out);

// Best conjugation constant on degree-`n` trigonometric polynomials.
//
// # Safety
// `moments` must be live and `out` a valid pointer.
enum HszStatus hsz_conjugation_ratio(const struct HszMoments *moments, size_t n, double *out);

// Product-vs-quadrature residual of the Szego identity; pass a
// non-positive `radius` for the default.
//
// # Safety
// `gamma` and `theta` must be live and `out` a valid pointer.
enum HszStatus hsz_szego_identity_residual(const struct HszSchurParams *gamma,
                                           const struct HszSeries *theta,
                                           size_t quad_points,
                                           double radius,
                                           double *out);

// Triangular section rendered as matrix JSON; set `direct` to use the
// composition-sum route (sizes within the brute-force cap only).
//
// # Safety
// `gamma` must be live and `out` a valid pointer.
enum HszStatus hsz_l_matrix_json(const struct HszSchurParams *gamma,
                                 size_t n,
                                 bool direct,
                                 char **out);

// Full diagnosis from parameters alone, with default thresholds.
//
// # Safety
// `gamma` must be live and `out` a valid pointer.
enum HszStatus hsz_diagnose_gamma(const struct HszSchurParams *gamma, struct HszReport **out);

// Full diagnosis from moments, with default thresholds; runs the
// two-route consistency check and the moment-side oracle sweeps.
//
// # Safety
// `moments` must be live and `out` a valid pointer.
enum HszStatus hsz_diagnose_moments(const struct HszMoments *moments, struct HszReport **out);

// Verdict category of a report.
//
// # Safety
// `report` must be live; null yields `Inconclusive`.
enum HszVerdict hsz_report_verdict(const struct HszReport *report);

// Process-style exit code of a report: 0 positive, 1 negative, 2 undecided.
//
// # Safety
// `report` must be live; null yields 2.
int32_t hsz_report_exit_code(const struct HszReport *report);

// Full report JSON; release with [`hsz_string_free`].
//
// # Safety
// `report` must be live and `out` a valid pointer.
enum HszStatus hsz_report_to_json(const struct HszReport *report, char **out);

// # Safety
// `report` must come from this library and not be freed twice.
void hsz_report_free(struct HszReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HSZ_H */
