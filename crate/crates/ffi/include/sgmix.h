#ifndef SGMIX_H
#define SGMIX_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum SgmixStatus {
  SGMIX_STATUS_OK = 0,
  SGMIX_STATUS_NULL_POINTER = 1,
  SGMIX_STATUS_INVALID_ARGUMENT = 2,
  SGMIX_STATUS_INVALID_GAS = 3,
  /**
   * A state has no admissible closure.
   */
  SGMIX_STATUS_NOT_ADMISSIBLE = 4,
  SGMIX_STATUS_UNKNOWN_CASE = 5,
  /**
   * The solver aborted; the simulation keeps a previous good level.
   */
  SGMIX_STATUS_SOLVER_FAILURE = 6,
  SGMIX_STATUS_PARSE = 7,
  SGMIX_STATUS_BUFFER_TOO_SMALL = 8,
  SGMIX_STATUS_PANIC = 9,
} SgmixStatus;

/**
 * Per-node output fields.
 */
typedef enum SgmixField {
  SGMIX_FIELD_X = 0,
  SGMIX_FIELD_RHO1 = 1,
  SGMIX_FIELD_RHO2 = 2,
  SGMIX_FIELD_RHO = 3,
  SGMIX_FIELD_Y1 = 4,
  SGMIX_FIELD_ALPHA1 = 5,
  SGMIX_FIELD_ALPHA2 = 6,
  SGMIX_FIELD_P = 7,
  SGMIX_FIELD_U = 8,
  SGMIX_FIELD_THETA = 9,
  SGMIX_FIELD_CS = 10,
} SgmixField;

/**
 * Opaque simulation handle.
 */
typedef struct SgmixSim SgmixSim;

/**
 * Stiffened-gas parameters of one component.
 */
typedef struct SgmixGas {
  double gamma;
  double cv;
  double p_star;
  double eps0;
} SgmixGas;

/**
 * Conserved node state `(ρ1, ρ2, ρu, E)`.
 */
typedef struct SgmixConserved {
  double rho1;
  double rho2;
  double mom;
  double etot;
} SgmixConserved;

/**
 * Closed quantities of one node state.
 */
typedef struct SgmixClosure {
  double p;
  double theta;
  double u;
  double alpha1;
  double alpha2;
  double cs;
  double rho;
  /**
   * Residual of the rational pressure equation at the computed root.
   */
  double residual;
} SgmixClosure;

/**
 * Numerical parameters: `reg` 0 = QGD, 1 = QHD; `boundary` 0 = copy,
 * 1 = periodic.
 */
typedef struct SgmixNumerics {
  uint32_t reg;
  double a;
  double beta;
  double schmidt;
  double prandtl_inv;
  uint32_t boundary;
} SgmixNumerics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len - 1` bytes) and returns the full message length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t sgmix_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sgmix_version(void);

/**
 * Closes one conserved node state.
 *
 * # Safety
 * All pointers must be null or valid for the duration of the call.
 */
enum SgmixStatus sgmix_closure(const struct SgmixGas *g1,
                               const struct SgmixGas *g2,
                               const struct SgmixConserved *state,
                               struct SgmixClosure *out);

/**
 * Conserved state from pressure, velocity, temperature and volume fraction.
 *
 * # Safety
 * All pointers must be null or valid for the duration of the call.
 */
enum SgmixStatus sgmix_primitive_to_conserved(const struct SgmixGas *g1,
                                              const struct SgmixGas *g2,
                                              double p,
                                              double u,
                                              double theta,
                                              double alpha1,
                                              struct SgmixConserved *out);

/**
 * Creates a simulation of benchmark case `case_id` ("A".."G") with `n`
 * cells (0 selects the case's coarse mesh) and the case's default numerics.
 *
 * # Safety
 * `case_id` must be a NUL-terminated string; `out` must be valid.
 */
enum SgmixStatus sgmix_sim_new_case(const char *case_id, size_t n, struct SgmixSim **out);

/**
 * Creates a simulation from `key = value` configuration text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid.
 */
enum SgmixStatus sgmix_sim_new_config(const char *text, struct SgmixSim **out);

/**
 * Releases a simulation. Null is ignored.
 *
 * # Safety
 * `sim` must be null or a handle from this library not yet freed.
 */
void sgmix_sim_free(struct SgmixSim *sim);

/**
 * Reads the current numerical parameters.
 *
 * # Safety
 * `sim` and `out` must be valid.
 */
enum SgmixStatus sgmix_sim_get_numerics(const struct SgmixSim *sim, struct SgmixNumerics *out);

/**
 * Replaces the numerical parameters after validating them.
 *
 * # Safety
 * `sim` and `numerics` must be valid.
 */
enum SgmixStatus sgmix_sim_set_numerics(struct SgmixSim *sim, const struct SgmixNumerics *numerics);

/**
 * Takes one step of the automatic size; writes the step to `dt_out` if non-null.
 *
 * # Safety
 * `sim` must be valid; `dt_out` null or valid.
 */
enum SgmixStatus sgmix_sim_step(struct SgmixSim *sim, double *dt_out);

/**
 * Advances to time `t` (the last step is shortened to land on it). A
 * negative `t` selects the case's final time. On failure the state is left
 * as it was before the call.
 *
 * # Safety
 * `sim` must be valid.
 */
enum SgmixStatus sgmix_sim_advance(struct SgmixSim *sim, double t);

/**
 * Current time, or NaN for a null handle.
 *
 * # Safety
 * `sim` must be null or valid.
 */
double sgmix_sim_time(const struct SgmixSim *sim);

/**
 * Steps taken so far, or 0 for a null handle.
 *
 * # Safety
 * `sim` must be null or valid.
 */
uint64_t sgmix_sim_steps(const struct SgmixSim *sim);

/**
 * Number of mesh nodes (`N + 1`), or 0 for a null handle.
 *
 * # Safety
 * `sim` must be null or valid.
 */
size_t sgmix_sim_num_nodes(const struct SgmixSim *sim);

/**
 * Copies one node field into `buf`, which must hold `sgmix_sim_num_nodes` values.
 *
 * # Safety
 * `sim` must be valid; `buf` must point to `len` writable doubles.
 */
enum SgmixStatus sgmix_sim_copy_field(const struct SgmixSim *sim,
                                      enum SgmixField field,
                                      double *buf,
                                      size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SGMIX_H */
