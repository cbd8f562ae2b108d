/* C interface to the mogp multi-objective geometric programming solver. */

#ifndef MOGP_H
#define MOGP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a C API call.
 */
typedef enum MogpStatus {
  /**
   * The call succeeded.
   */
  MOGP_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MOGP_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  MOGP_STATUS_INVALID_UTF8 = 2,
  /**
   * The problem text is not a valid problem document.
   */
  MOGP_STATUS_PARSE_ERROR = 3,
  /**
   * The problem is structurally invalid.
   */
  MOGP_STATUS_INVALID_MODEL = 4,
  /**
   * The weight vector is rejected (wrong length, nonpositive, or not
   * summing to one).
   */
  MOGP_STATUS_INVALID_WEIGHTS = 5,
  /**
   * The dual program has no feasible point; the weighted objective has no
   * positive stationary point under these constraints.
   */
  MOGP_STATUS_DUAL_INFEASIBLE = 6,
  /**
   * The weighted objective can be driven toward zero; no finite optimum.
   */
  MOGP_STATUS_UNBOUNDED = 7,
  /**
   * The solver stopped without certifying optimality.
   */
  MOGP_STATUS_NOT_OPTIMAL = 8,
  /**
   * A primal minimizer could not be recovered from the dual certificate.
   */
  MOGP_STATUS_RECOVERY_FAILED = 9,
  /**
   * A point could not be evaluated (nonpositive variable value).
   */
  MOGP_STATUS_EVALUATION_ERROR = 10,
  /**
   * An output buffer is shorter than the data it must receive.
   */
  MOGP_STATUS_BUFFER_TOO_SMALL = 11,
  /**
   * The library caught an internal panic; treat the handle as poisoned.
   */
  MOGP_STATUS_INTERNAL_PANIC = 12,
} MogpStatus;

/**
 * A parsed problem. Opaque; create with [`mogp_problem_parse_json`] and
 * release with [`mogp_problem_free`].
 */
typedef struct MogpProblem MogpProblem;

/**
 * A solved weighting with its certificate. Opaque; create with
 * [`mogp_solve`] and release with [`mogp_solution_free`].
 */
typedef struct MogpSolution MogpSolution;

/**
 * Tuning knobs for the dual ascent, shared by every solve call.
 */
typedef struct MogpSolverOptions {
  /**
   * Iteration cap for the dual ascent. Must be positive.
   */
  size_t max_iterations;
  /**
   * Reduced gradient norm required to declare optimality.
   */
  double gradient_tolerance;
  /**
   * Equality residual allowed at an optimal point.
   */
  double equality_tolerance;
  /**
   * Dual weights below this are treated as zero.
   */
  double active_threshold;
} MogpSolverOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static nul-terminated string.
 */
const char *mogp_version(void);

/**
 * Static name of a status code, e.g. `"dual infeasible"`.
 */
const char *mogp_status_name(enum MogpStatus status);

/**
 * Message describing the most recent failure on this thread, or an empty
 * string if nothing failed yet. The pointer stays valid until the next
 * failing call on the same thread.
 */
const char *mogp_last_error_message(void);

/**
 * The solver defaults: 200 iterations, 1e-9 gradient tolerance, 1e-10
 * equality tolerance, 1e-7 active threshold.
 */
struct MogpSolverOptions mogp_solver_options_default(void);

/**
 * Parse a problem document from a nul-terminated JSON string into a new
 * handle stored in `*out`.
 *
 * # Safety
 *
 * `json` must point to a nul-terminated string and `out` to a writable
 * pointer slot.
 */
enum MogpStatus mogp_problem_parse_json(const char *json, struct MogpProblem **out);

/**
 * Release a problem handle. Null is a no-op.
 *
 * # Safety
 *
 * `problem` must be null or a handle from [`mogp_problem_parse_json`] that
 * has not been freed.
 */
void mogp_problem_free(struct MogpProblem *problem);

/**
 * Number of decision variables, or 0 for a null handle.
 *
 * # Safety
 *
 * `problem` must be null or a live problem handle.
 */
size_t mogp_problem_num_variables(const struct MogpProblem *problem);

/**
 * Number of objectives, or 0 for a null handle.
 *
 * # Safety
 *
 * `problem` must be null or a live problem handle.
 */
size_t mogp_problem_num_objectives(const struct MogpProblem *problem);

/**
 * Number of constraints, or 0 for a null handle.
 *
 * # Safety
 *
 * `problem` must be null or a live problem handle.
 */
size_t mogp_problem_num_constraints(const struct MogpProblem *problem);

/**
 * Degree of difficulty of the scalarized program (terms minus variables
 * minus one; may be negative), or `INT64_MIN` for a null handle.
 *
 * # Safety
 *
 * `problem` must be null or a live problem handle.
 */
int64_t mogp_problem_degree_of_difficulty(const struct MogpProblem *problem);

/**
 * Solve one weighting of the objectives and store a solution handle in
 * `*out`. `weights` must hold one positive entry per objective, summing to
 * one. Pass null `options` for the defaults.
 *
 * Returns `MOGP_STATUS_OK` only for a certified optimum; `NOT_OPTIMAL`
 * means the iteration cap was reached first and no handle is produced.
 *
 * # Safety
 *
 * `problem` must be a live problem handle, `weights` must point to
 * `num_weights` doubles, `options` must be null or valid, and `out` must
 * point to a writable pointer slot.
 */
enum MogpStatus mogp_solve(const struct MogpProblem *problem,
                           const double *weights,
                           size_t num_weights,
                           const struct MogpSolverOptions *options,
                           struct MogpSolution **out);

/**
 * Release a solution handle. Null is a no-op.
 *
 * # Safety
 *
 * `solution` must be null or a handle from [`mogp_solve`] that has not
 * been freed.
 */
void mogp_solution_free(struct MogpSolution *solution);

/**
 * Optimal dual objective value (equals the optimal weighted objective), or
 * NaN for a null handle.
 *
 * # Safety
 *
 * `solution` must be null or a live solution handle.
 */
double mogp_solution_dual_value(const struct MogpSolution *solution);

/**
 * Weighted objective evaluated at the recovered minimizer, or NaN for a
 * null handle.
 *
 * # Safety
 *
 * `solution` must be null or a live solution handle.
 */
double mogp_solution_scalarized_objective(const struct MogpSolution *solution);

/**
 * True when optimality was certified within the iteration cap.
 *
 * # Safety
 *
 * `solution` must be null or a live solution handle.
 */
bool mogp_solution_converged(const struct MogpSolution *solution);

/**
 * True when the recovered minimizer is the unique one; false when it is
 * the minimum-norm representative of a solution family (or the handle is
 * null).
 *
 * # Safety
 *
 * `solution` must be null or a live solution handle.
 */
bool mogp_solution_unique(const struct MogpSolution *solution);

/**
 * Dual ascent iterations used, or 0 for a null handle.
 *
 * # Safety
 *
 * `solution` must be null or a live solution handle.
 */
size_t mogp_solution_iterations(const struct MogpSolution *solution);

/**
 * Reduced gradient norm at the final dual point, or NaN for a null handle.
 *
 * # Safety
 *
 * `solution` must be null or a live solution handle.
 */
double mogp_solution_reduced_gradient_norm(const struct MogpSolution *solution);

/**
 * Length of the minimizer vector, or 0 for a null handle.
 *
 * # Safety
 *
 * `solution` must be null or a live solution handle.
 */
size_t mogp_solution_num_variables(const struct MogpSolution *solution);

/**
 * Number of per-objective values, or 0 for a null handle.
 *
 * # Safety
 *
 * `solution` must be null or a live solution handle.
 */
size_t mogp_solution_num_objectives(const struct MogpSolution *solution);

/**
 * Number of dual weights (scalarized terms), or 0 for a null handle.
 *
 * # Safety
 *
 * `solution` must be null or a live solution handle.
 */
size_t mogp_solution_num_terms(const struct MogpSolution *solution);

/**
 * Number of constraint multipliers, or 0 for a null handle.
 *
 * # Safety
 *
 * `solution` must be null or a live solution handle.
 */
size_t mogp_solution_num_constraints(const struct MogpSolution *solution);

/**
 * Copy the recovered minimizer into `buffer` (capacity `length` doubles;
 * see [`mogp_solution_num_variables`]).
 *
 * # Safety
 *
 * `solution` must be a live solution handle and `buffer` must point to
 * `length` writable doubles.
 */
enum MogpStatus mogp_solution_copy_x(const struct MogpSolution *solution,
                                     double *buffer,
                                     size_t length);

/**
 * Copy the per-objective values at the minimizer into `buffer` (capacity
 * `length` doubles; see [`mogp_solution_num_objectives`]).
 *
 * # Safety
 *
 * `solution` must be a live solution handle and `buffer` must point to
 * `length` writable doubles.
 */
enum MogpStatus mogp_solution_copy_objectives(const struct MogpSolution *solution,
                                              double *buffer,
                                              size_t length);

/**
 * Copy the optimal dual weights, in scalarized term order, into `buffer`
 * (capacity `length` doubles; see [`mogp_solution_num_terms`]).
 *
 * # Safety
 *
 * `solution` must be a live solution handle and `buffer` must point to
 * `length` writable doubles.
 */
enum MogpStatus mogp_solution_copy_deltas(const struct MogpSolution *solution,
                                          double *buffer,
                                          size_t length);

/**
 * Copy the per-constraint multipliers into `buffer` (capacity `length`
 * doubles; see [`mogp_solution_num_constraints`]).
 *
 * # Safety
 *
 * `solution` must be a live solution handle and `buffer` must point to
 * `length` writable doubles.
 */
enum MogpStatus mogp_solution_copy_multipliers(const struct MogpSolution *solution,
                                               double *buffer,
                                               size_t length);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOGP_H */
