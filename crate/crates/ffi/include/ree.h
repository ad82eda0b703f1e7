#ifndef REE_H
#define REE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ReeStatus {
  REE_STATUS_OK = 0,
  REE_STATUS_NULL_POINTER = 1,
  REE_STATUS_INVALID_INPUT = 2,
  REE_STATUS_DIMENSION = 3,
  REE_STATUS_NOT_A_STATE = 4,
  REE_STATUS_NOT_PSD = 5,
  REE_STATUS_SINGULAR = 6,
  REE_STATUS_SUPPORT = 7,
  REE_STATUS_NOT_CONVERGED = 8,
  REE_STATUS_IO = 9,
  REE_STATUS_PANIC = 10,
} ReeStatus;

typedef enum ReeFamily {
  /**
   * `sqrt(p)|00> + sqrt(1-p)|11>`
   */
  REE_FAMILY_PURE = 0,
  /**
   * `p|00><00| + (1-p)|11><11|`
   */
  REE_FAMILY_PURE_CLOSEST = 1,
  /**
   * Werner state with singlet fidelity `param`.
   */
  REE_FAMILY_WERNER = 2,
} ReeFamily;

typedef enum ReeParty {
  REE_PARTY_A = 0,
  REE_PARTY_B = 1,
} ReeParty;

typedef enum ReeCategory {
  REE_CATEGORY_CATEGORY_I = 0,
  REE_CATEGORY_CATEGORY_II = 1,
  REE_CATEGORY_CONSTRAINT_ONLY = 2,
  REE_CATEGORY_NONE = 3,
} ReeCategory;

/**
 * Result of the three-parameter bound.
 */
typedef struct ReeBound ReeBound;

/**
 * Result of the closest-PPT search.
 */
typedef struct ReeOracle ReeOracle;

/**
 * A validated density matrix.
 */
typedef struct ReeState ReeState;

/**
 * Residual norms of the filtering and local-unitary conditions on one party.
 */
typedef struct ReeConditionSummary {
  double filter_residual;
  double unitary_residual;
  /**
   * Frobenius norm of the reduction of `rho o g`.
   */
  double g_norm;
} ReeConditionSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next `ree_*` call on the same thread.
 */
const char *ree_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ree_version(void);

/**
 * Builds a state from row-major real and imaginary parts of length
 * `(dim_a * dim_b)^2`. `im` may be null for a real matrix.
 *
 * # Safety
 * `re` (and `im` if non-null) must point to that many readable doubles;
 * `out` must be writable.
 */
enum ReeStatus ree_state_new(size_t dim_a,
                             size_t dim_b,
                             const double *re,
                             const double *im,
                             struct ReeState **out);

/**
 * Two-qubit family member with a single parameter.
 *
 * # Safety
 * `out` must be writable.
 */
enum ReeStatus ree_state_family(enum ReeFamily family, double param, struct ReeState **out);

/**
 * Bell-diagonal state with weights on `Phi+, Phi-, Psi+, Psi-`.
 *
 * # Safety
 * `weights` must point to 4 readable doubles; `out` must be writable.
 */
enum ReeStatus ree_state_bell_diagonal(const double *weights, struct ReeState **out);

/**
 * Isotropic state on `d (x) d` with fidelity `f`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ReeStatus ree_state_isotropic(size_t d, double f, struct ReeState **out);

/**
 * # Safety
 * `state` must come from this library and not be freed twice. Null is ignored.
 */
void ree_state_free(struct ReeState *state);

/**
 * # Safety
 * Pointers must be valid.
 */
enum ReeStatus ree_state_dims(const struct ReeState *state, size_t *dim_a, size_t *dim_b);

/**
 * Copies the matrix into row-major `re` and `im`, each of length `len`,
 * which must equal `(dim_a * dim_b)^2`.
 *
 * # Safety
 * `re` and `im` must point to `len` writable doubles.
 */
enum ReeStatus ree_state_matrix(const struct ReeState *state, double *re, double *im, size_t len);

/**
 * `S(rho || sigma)` in nats; `+inf` when the supports are incompatible.
 *
 * # Safety
 * Pointers must be valid.
 */
enum ReeStatus ree_relative_entropy(const struct ReeState *rho,
                                    const struct ReeState *sigma,
                                    double *nats);

/**
 * # Safety
 * Pointers must be valid.
 */
enum ReeStatus ree_concurrence(const struct ReeState *rho, double *out);

/**
 * Smallest eigenvalue of the partial transpose on B.
 *
 * # Safety
 * Pointers must be valid.
 */
enum ReeStatus ree_ppt_min_eigenvalue(const struct ReeState *rho, double *out);

/**
 * Three-parameter upper bound with default optimizer settings.
 *
 * # Safety
 * `rho` must be valid; `out` must be writable.
 */
enum ReeStatus ree_bound(const struct ReeState *rho, struct ReeBound **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum ReeStatus ree_bound_value(const struct ReeBound *bound, double *nats, double *bits);

/**
 * Optimal diagonal correlations in the canonical frame.
 *
 * # Safety
 * `tau` must point to 3 writable doubles.
 */
enum ReeStatus ree_bound_tau(const struct ReeBound *bound, double *tau);

/**
 * New handle holding a copy of the minimizing state.
 *
 * # Safety
 * Pointers must be valid.
 */
enum ReeStatus ree_bound_sigma(const struct ReeBound *bound, struct ReeState **out);

/**
 * # Safety
 * `bound` must come from `ree_bound` and not be freed twice. Null is ignored.
 */
void ree_bound_free(struct ReeBound *bound);

/**
 * Multi-start closest-PPT search; deterministic for a fixed seed.
 *
 * # Safety
 * `rho` must be valid; `out` must be writable.
 */
enum ReeStatus ree_oracle(const struct ReeState *rho,
                          size_t starts,
                          uint64_t seed,
                          struct ReeOracle **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum ReeStatus ree_oracle_value(const struct ReeOracle *oracle, double *nats, double *bits);

/**
 * # Safety
 * Pointers must be valid.
 */
enum ReeStatus ree_oracle_sigma(const struct ReeOracle *oracle, struct ReeState **out);

/**
 * # Safety
 * `oracle` must come from `ree_oracle` and not be freed twice. Null is ignored.
 */
void ree_oracle_free(struct ReeOracle *oracle);

/**
 * Filtering and unitary condition residuals of `sigma` as a candidate
 * closest state of `rho`, on one party.
 *
 * # Safety
 * Pointers must be valid.
 */
enum ReeStatus ree_conditions(const struct ReeState *rho,
                              const struct ReeState *sigma,
                              enum ReeParty which,
                              struct ReeConditionSummary *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum ReeStatus ree_category(const struct ReeState *rho,
                            const struct ReeState *sigma,
                            enum ReeCategory *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* REE_H */
