/* SPDX-License-Identifier: Apache-2.0 */

#ifndef CHOI_DYNAMICS_H
#define CHOI_DYNAMICS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Separability verdict of a report.
typedef enum ChoiSeparability {
  CHOI_SEPARABILITY_YES = 0,
  CHOI_SEPARABILITY_NO = 1,
  CHOI_SEPARABILITY_UNDECIDABLE = 2,
} ChoiSeparability;

// Outcome of a call.
typedef enum ChoiStatus {
  CHOI_STATUS_OK = 0,
  CHOI_STATUS_NULL_POINTER = 1,
  CHOI_STATUS_INVALID_ARGUMENT = 2,
  CHOI_STATUS_DOMAIN = 3,
  CHOI_STATUS_CONSTRUCTION = 4,
  CHOI_STATUS_NUMERICAL = 5,
  CHOI_STATUS_PANIC = 6,
} ChoiStatus;

// Opaque PPT construction.
typedef struct ChoiPpt ChoiPpt;

// Opaque classification report.
typedef struct ChoiReport ChoiReport;

// Analytic verdicts of a report; `positive` is -1 when not populated.
typedef struct ChoiVerdicts {
  int32_t positive;
  bool completely_positive;
  bool completely_copositive;
  bool ppt;
  enum ChoiSeparability separable;
  size_t choi_rank;
  bool all_agree;
} ChoiVerdicts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next call on the same thread.
const char *choi_last_error(void);

// Frees a string returned by this library. NULL is ignored.
//
// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void choi_string_free(char *s);

// Classifies `family[params]` (`"rho"`, `"tau"` or `"theta"`).
//
// # Safety
// `family` must be a NUL-terminated string, `params` must point to four
// doubles and `out` must be writable.
enum ChoiStatus choi_classify(const char *family,
                              const double *params,
                              double tol,
                              struct ChoiReport **out);

// # Safety
// `report` must be a live handle and `out` writable.
enum ChoiStatus choi_report_verdicts(const struct ChoiReport *report, struct ChoiVerdicts *out);

// The full report as JSON; free with [`choi_string_free`].
//
// # Safety
// `report` must be a live handle and `out` writable.
enum ChoiStatus choi_report_json(const struct ChoiReport *report, char **out);

// # Safety
// `report` must be NULL or a handle from [`choi_classify`], not yet freed.
void choi_report_free(struct ChoiReport *report);

// Time at which `e^{t·rho[a,b,c,d]}` becomes PPT.
//
// # Safety
// `out` must be writable.
enum ChoiStatus choi_transition_time(double a,
                                     double b,
                                     double c,
                                     double d,
                                     double tol,
                                     double *out);

// `(a(t), b(t), c(t), d(t))` of `e^{t·rho[params]}` written to `out[0..4]`.
//
// # Safety
// `params` must point to four doubles and `out` to four writable doubles.
enum ChoiStatus choi_evolve_params(const double *params, double t, double *out);

// Builds an `n²×n²` PPT matrix with the reversal permutation as witness.
//
// # Safety
// `out` must be writable.
enum ChoiStatus choi_construct_ppt(size_t n, uint64_t seed, bool zero_tuple, struct ChoiPpt **out);

// Side of the matrix, the shift `a0` and the smallest eigenvalues of the
// matrix and of its partial transpose. Any output pointer may be NULL.
//
// # Safety
// `ppt` must be a live handle; non-NULL outputs must be writable.
enum ChoiStatus choi_ppt_summary(const struct ChoiPpt *ppt,
                                 size_t *side,
                                 double *a0,
                                 double *min_eig,
                                 double *min_eig_pt);

// Copies the matrix in row-major order as interleaved `(re, im)` pairs
// into `buf`, which must hold `2·side²` doubles.
//
// # Safety
// `ppt` must be a live handle and `buf` must hold `len` doubles.
enum ChoiStatus choi_ppt_matrix(const struct ChoiPpt *ppt, double *buf, size_t len);

// # Safety
// `ppt` must be NULL or a handle from [`choi_construct_ppt`], not yet freed.
void choi_ppt_free(struct ChoiPpt *ppt);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHOI_DYNAMICS_H */
