#ifndef QPOT_H
#define QPOT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QpotStatus {
  QPOT_STATUS_OK = 0,
  QPOT_STATUS_NULL_POINTER = 1,
  QPOT_STATUS_INVALID_UTF8 = 2,
  QPOT_STATUS_PARSE = 3,
  QPOT_STATUS_INCOMPATIBLE = 4,
  QPOT_STATUS_NODE_HALT = 5,
  QPOT_STATUS_INVALID_ARGUMENT = 6,
  QPOT_STATUS_BUFFER_TOO_SMALL = 7,
  QPOT_STATUS_PANIC = 8,
} QpotStatus;

typedef enum QpotRepresentation {
  QPOT_REPRESENTATION_CONFIGURATION = 0,
  QPOT_REPRESENTATION_MOMENTUM = 1,
} QpotRepresentation;

typedef enum QpotPart {
  QPOT_PART_QUANTUM = 0,
  QPOT_PART_CLASSICAL = 1,
  QPOT_PART_TOTAL = 2,
} QpotPart;

typedef enum QpotProfileColumn {
  QPOT_PROFILE_COLUMN_AXIS = 0,
  QPOT_PROFILE_COLUMN_RHO = 1,
  QPOT_PROFILE_COLUMN_Q = 2,
  QPOT_PROFILE_COLUMN_DISP = 3,
  QPOT_PROFILE_COLUMN_LOC = 4,
  QPOT_PROFILE_COLUMN_Q_DENSITY = 5,
  QPOT_PROFILE_COLUMN_DISP_DENSITY = 6,
  QPOT_PROFILE_COLUMN_LOC_DENSITY = 7,
} QpotProfileColumn;

typedef enum QpotTrajectoryColumn {
  QPOT_TRAJECTORY_COLUMN_T = 0,
  QPOT_TRAJECTORY_COLUMN_X = 1,
  QPOT_TRAJECTORY_COLUMN_P = 2,
  QPOT_TRAJECTORY_COLUMN_H = 3,
} QpotTrajectoryColumn;

typedef struct QpotExpansion QpotExpansion;

typedef struct QpotProfile QpotProfile;

typedef struct QpotState QpotState;

typedef struct QpotTrajectory QpotTrajectory;

/**
 * Physical constants; all three must be positive and finite.
 */
typedef struct QpotUnits {
  double hbar;
  double mass;
  double omega;
} QpotUnits;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *qpot_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void qpot_string_free(char *s);

/**
 * Expands a polynomial operator such as `"x^4"` or `"p^2/2"`.
 *
 * # Safety
 * `op` must be a nul-terminated string and `out` a valid pointer.
 */
enum QpotStatus qpot_expand(const char *op,
                            enum QpotRepresentation representation,
                            struct QpotExpansion **out);

/**
 * # Safety
 * `e` must come from [`qpot_expand`] and not have been freed. NULL is ignored.
 */
void qpot_expansion_free(struct QpotExpansion *e);

/**
 * Number of terms in one part of the expansion.
 *
 * # Safety
 * `e` must be a live expansion and `out` a valid pointer.
 */
enum QpotStatus qpot_expansion_term_count(const struct QpotExpansion *e,
                                          enum QpotPart part,
                                          size_t *out);

/**
 * Serialises the expansion as JSON; release with [`qpot_string_free`].
 *
 * # Safety
 * `e` must be a live expansion and `out` a valid pointer.
 */
enum QpotStatus qpot_expansion_to_json(const struct QpotExpansion *e, char **out);

/**
 * Renders the expansion as LaTeX; release with [`qpot_string_free`].
 *
 * # Safety
 * `e` must be a live expansion and `out` a valid pointer.
 */
enum QpotStatus qpot_expansion_to_latex(const struct QpotExpansion *e, char **out);

/**
 * Evaluates one part of the expansion for `state` at axis value `at`.
 *
 * # Safety
 * `e` and `state` must be live handles and `out` a valid pointer.
 */
enum QpotStatus qpot_expansion_evaluate(const struct QpotExpansion *e,
                                        enum QpotPart part,
                                        const struct QpotState *state,
                                        double at,
                                        double *out);

/**
 * Builds a reference state: `"airy"`, `"linear-momentum"` or `"qho:<n>"`.
 * `energy` is used by the linear-potential states and ignored by the
 * oscillator. `units` may be NULL for ħ = m = ω = 1.
 *
 * # Safety
 * `selector` must be a nul-terminated string, `units` NULL or valid and
 * `out` a valid pointer.
 */
enum QpotStatus qpot_state_new(const char *selector,
                               enum QpotRepresentation representation,
                               double energy,
                               const struct QpotUnits *units,
                               struct QpotState **out);

/**
 * # Safety
 * `s` must come from [`qpot_state_new`] and not have been freed. NULL is ignored.
 */
void qpot_state_free(struct QpotState *s);

/**
 * `order`-th derivative of the amplitude `R` at `at`.
 *
 * # Safety
 * `s` must be a live state and `out` a valid pointer.
 */
enum QpotStatus qpot_state_r_derivative(const struct QpotState *s,
                                        double at,
                                        size_t order,
                                        double *out);

/**
 * `order`-th derivative of the phase `S` at `at`.
 *
 * # Safety
 * `s` must be a live state and `out` a valid pointer.
 */
enum QpotStatus qpot_state_s_derivative(const struct QpotState *s,
                                        double at,
                                        size_t order,
                                        double *out);

/**
 * Energy decomposition of `state` on a uniform grid.
 *
 * # Safety
 * `s` must be a live state and `out` a valid pointer.
 */
enum QpotStatus qpot_profile_new(const struct QpotState *s,
                                 double min,
                                 double max,
                                 size_t count,
                                 struct QpotProfile **out);

/**
 * # Safety
 * `p` must come from [`qpot_profile_new`] and not have been freed. NULL is ignored.
 */
void qpot_profile_free(struct QpotProfile *p);

/**
 * Number of grid points in the profile; 0 for NULL.
 *
 * # Safety
 * `p` must be NULL or a live profile.
 */
size_t qpot_profile_len(const struct QpotProfile *p);

/**
 * Copies one column into `buf`, which must hold at least
 * [`qpot_profile_len`] values. Masked points are NaN in the pointwise columns.
 *
 * # Safety
 * `p` must be a live profile and `buf` valid for `len` writes.
 */
enum QpotStatus qpot_profile_copy_column(const struct QpotProfile *p,
                                         enum QpotProfileColumn column,
                                         double *buf,
                                         size_t len);

/**
 * Copies the node mask (1 near a node, 0 elsewhere) into `buf`.
 *
 * # Safety
 * `p` must be a live profile and `buf` valid for `len` writes.
 */
enum QpotStatus qpot_profile_copy_mask(const struct QpotProfile *p, uint8_t *buf, size_t len);

/**
 * Integrates the causal trajectory of `state` starting at axis value `start`
 * (x in the configuration representation, p in momentum) up to `t_end` with
 * fixed RK4 step `dt`.
 *
 * When the integration halts at a node or on energy drift the status is
 * `NodeHalt` and `*out` still receives the partial trajectory, which the
 * caller must free.
 *
 * # Safety
 * `s` must be a live state and `out` a valid pointer.
 */
enum QpotStatus qpot_trajectory_new(const struct QpotState *s,
                                    double start,
                                    double t_end,
                                    double dt,
                                    struct QpotTrajectory **out);

/**
 * # Safety
 * `t` must come from [`qpot_trajectory_new`] and not have been freed. NULL is ignored.
 */
void qpot_trajectory_free(struct QpotTrajectory *t);

/**
 * Number of samples; 0 for NULL.
 *
 * # Safety
 * `t` must be NULL or a live trajectory.
 */
size_t qpot_trajectory_len(const struct QpotTrajectory *t);

/**
 * Copies one column of the samples into `buf`.
 *
 * # Safety
 * `t` must be a live trajectory and `buf` valid for `len` writes.
 */
enum QpotStatus qpot_trajectory_copy_column(const struct QpotTrajectory *t,
                                            enum QpotTrajectoryColumn column,
                                            double *buf,
                                            size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QPOT_H */
