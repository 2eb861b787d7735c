#ifndef TJCM_H
#define TJCM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TjcmStatus {
  TJCM_STATUS_OK = 0,
  TJCM_STATUS_NULL_POINTER = 1,
  TJCM_STATUS_INVALID_ARGUMENT = 2,
  TJCM_STATUS_NUMERICAL = 3,
  TJCM_STATUS_BUFFER_TOO_SMALL = 4,
  TJCM_STATUS_RESOURCE_LIMIT = 5,
  TJCM_STATUS_IO = 6,
  TJCM_STATUS_PANIC = 7,
} TjcmStatus;

/**
 * Opaque model handle.
 */
typedef struct TjcmModel TjcmModel;

typedef struct TjcmReducedState {
  double p_plus;
  double p_minus;
  double coh_re;
  double coh_im;
} TjcmReducedState;

/**
 * Single-atom diagnostics at one time.
 */
typedef struct TjcmObservables {
  double time;
  double sx;
  double sy;
  double sz;
  double e_x;
  double e_y;
  double f_x;
  double f_y;
  double gamma;
  double eur_residual;
} TjcmObservables;

typedef struct TjcmVerifyReport {
  size_t samples;
  size_t oracle_dim;
  double max_deviation;
  double max_eur_violation;
  double max_norm_drift;
  bool passed;
} TjcmVerifyReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a model for initial field amplitude `alpha`, coupling ratio `g`,
 * `l`-photon transitions and Fock tail mass `cutoff_eps`.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum TjcmStatus tjcm_model_new(double alpha,
                               double g,
                               uint32_t l,
                               double cutoff_eps,
                               struct TjcmModel **out);

/**
 * # Safety
 * `model` must be null or a handle from [`tjcm_model_new`] not yet freed.
 */
void tjcm_model_free(struct TjcmModel *model);

/**
 * Largest photon number kept by the truncation.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writing.
 */
enum TjcmStatus tjcm_model_n_max(const struct TjcmModel *model, size_t *out);

/**
 * Reduced density matrix of `atom` (0 or 1) at scaled time `time`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writing.
 */
enum TjcmStatus tjcm_model_reduced_state(const struct TjcmModel *model,
                                         double time,
                                         uint32_t atom,
                                         struct TjcmReducedState *out);

/**
 * Diagnostics of `atom` at each of `len` caller-supplied times.
 *
 * # Safety
 * `model` must be a live handle; `times` must be readable and `out`
 * writable for `len` elements.
 */
enum TjcmStatus tjcm_model_observables(const struct TjcmModel *model,
                                       const double *times,
                                       size_t len,
                                       uint32_t atom,
                                       struct TjcmObservables *out);

/**
 * Diagnostics of `atom` on the uniform grid of `steps` points over
 * `[0, t_max]`. `capacity` is the length of `out`; on
 * [`TjcmStatus::BufferTooSmall`] nothing is written.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable for `capacity` elements.
 */
enum TjcmStatus tjcm_model_scan(const struct TjcmModel *model,
                                double t_max,
                                size_t steps,
                                uint32_t atom,
                                struct TjcmObservables *out,
                                size_t capacity);

/**
 * Cross-checks the model against the brute-force integrator at `samples`
 * random points of the `steps`-point grid over `[0, t_max]`. A failed
 * comparison still returns [`TjcmStatus::Ok`] with `passed = false`.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writing.
 */
enum TjcmStatus tjcm_model_verify(const struct TjcmModel *model,
                                  double t_max,
                                  size_t steps,
                                  size_t samples,
                                  size_t max_dim,
                                  uint64_t seed,
                                  struct TjcmVerifyReport *out);

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *tjcm_last_error(void);

/**
 * Static description of a status code.
 */
const char *tjcm_status_str(int32_t status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TJCM_H */
