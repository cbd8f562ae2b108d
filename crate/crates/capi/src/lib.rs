//! C ABI over the mogp solver: opaque handles, status codes, and plain
//! buffers, so other languages can parse problems, solve one weighting, and
//! read the certificate back.
//!
//! Every function is safe to call with null handles; failures return a
//! status code and leave a message readable through
//! [`mogp_last_error_message`]. Handles must be released with the matching
//! `_free` function exactly once.

use mogp::error::Error;
use mogp::io::{constraint_multipliers, parse_problem};
use mogp::model::MultiObjectiveProgram;
use mogp::recover::recover_primal;
use mogp::scalarize::{scalarize, PreferenceWeights};
use mogp::solver::{solve_scalarized, SolverOptions, SolverStatus};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Outcome of a C API call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MogpStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The problem text is not a valid problem document.
    ParseError = 3,
    /// The problem is structurally invalid.
    InvalidModel = 4,
    /// The weight vector is rejected (wrong length, nonpositive, or not
    /// summing to one).
    InvalidWeights = 5,
    /// The dual program has no feasible point; the weighted objective has no
    /// positive stationary point under these constraints.
    DualInfeasible = 6,
    /// The weighted objective can be driven toward zero; no finite optimum.
    Unbounded = 7,
    /// The solver stopped without certifying optimality.
    NotOptimal = 8,
    /// A primal minimizer could not be recovered from the dual certificate.
    RecoveryFailed = 9,
    /// A point could not be evaluated (nonpositive variable value).
    EvaluationError = 10,
    /// An output buffer is shorter than the data it must receive.
    BufferTooSmall = 11,
    /// The library caught an internal panic; treat the handle as poisoned.
    InternalPanic = 12,
}

/// Tuning knobs for the dual ascent, shared by every solve call.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MogpSolverOptions {
    /// Iteration cap for the dual ascent. Must be positive.
    pub max_iterations: usize,
    /// Reduced gradient norm required to declare optimality.
    pub gradient_tolerance: f64,
    /// Equality residual allowed at an optimal point.
    pub equality_tolerance: f64,
    /// Dual weights below this are treated as zero.
    pub active_threshold: f64,
}

impl MogpSolverOptions {
    fn to_options(self) -> SolverOptions {
        SolverOptions {
            max_iterations: self.max_iterations,
            gradient_tolerance: self.gradient_tolerance,
            equality_tolerance: self.equality_tolerance,
            active_threshold: self.active_threshold,
        }
    }
}

/// A parsed problem. Opaque; create with [`mogp_problem_parse_json`] and
/// release with [`mogp_problem_free`].
pub struct MogpProblem {
    program: MultiObjectiveProgram,
}

/// A solved weighting with its certificate. Opaque; create with
/// [`mogp_solve`] and release with [`mogp_solution_free`].
pub struct MogpSolution {
    dual_value: f64,
    converged: bool,
    iterations: usize,
    reduced_gradient_norm: f64,
    deltas: Vec<f64>,
    multipliers: Vec<f64>,
    x: Vec<f64>,
    objectives: Vec<f64>,
    scalarized_objective: f64,
    unique: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: impl std::fmt::Display) {
    let text = message.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(text).expect("nul bytes stripped");
    });
}

fn fail(status: MogpStatus, message: impl std::fmt::Display) -> MogpStatus {
    set_last_error(message);
    status
}

fn status_of(error: &Error) -> MogpStatus {
    match error {
        Error::Parse(_) | Error::Io(_) => MogpStatus::ParseError,
        Error::InvalidModel(_) | Error::NotConvertible(_) | Error::RaggedInput => {
            MogpStatus::InvalidModel
        }
        Error::InvalidWeights(_) | Error::DimensionMismatch { .. } => MogpStatus::InvalidWeights,
        Error::DualInfeasible(_) => MogpStatus::DualInfeasible,
        Error::Unbounded => MogpStatus::Unbounded,
        Error::NotOptimal(_) | Error::BoundaryPoint(_) => MogpStatus::NotOptimal,
        Error::RecoveryImpossible | Error::InconsistentCertificate { .. } => {
            MogpStatus::RecoveryFailed
        }
        Error::NonPositiveArgument { .. } => MogpStatus::EvaluationError,
    }
}

fn guard(body: impl FnOnce() -> MogpStatus) -> MogpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(MogpStatus::InternalPanic, "internal panic"),
    }
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn mogp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Static name of a status code, e.g. `"dual infeasible"`.
#[no_mangle]
pub extern "C" fn mogp_status_name(status: MogpStatus) -> *const c_char {
    let name: &'static str = match status {
        MogpStatus::Ok => "ok\0",
        MogpStatus::NullArgument => "null argument\0",
        MogpStatus::InvalidUtf8 => "invalid utf-8\0",
        MogpStatus::ParseError => "parse error\0",
        MogpStatus::InvalidModel => "invalid model\0",
        MogpStatus::InvalidWeights => "invalid weights\0",
        MogpStatus::DualInfeasible => "dual infeasible\0",
        MogpStatus::Unbounded => "unbounded\0",
        MogpStatus::NotOptimal => "not optimal\0",
        MogpStatus::RecoveryFailed => "recovery failed\0",
        MogpStatus::EvaluationError => "evaluation error\0",
        MogpStatus::BufferTooSmall => "buffer too small\0",
        MogpStatus::InternalPanic => "internal panic\0",
    };
    name.as_ptr() as *const c_char
}

/// Message describing the most recent failure on this thread, or an empty
/// string if nothing failed yet. The pointer stays valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn mogp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// The solver defaults: 200 iterations, 1e-9 gradient tolerance, 1e-10
/// equality tolerance, 1e-7 active threshold.
#[no_mangle]
pub extern "C" fn mogp_solver_options_default() -> MogpSolverOptions {
    let defaults = SolverOptions::default();
    MogpSolverOptions {
        max_iterations: defaults.max_iterations,
        gradient_tolerance: defaults.gradient_tolerance,
        equality_tolerance: defaults.equality_tolerance,
        active_threshold: defaults.active_threshold,
    }
}

/// Parse a problem document from a nul-terminated JSON string into a new
/// handle stored in `*out`.
///
/// # Safety
///
/// `json` must point to a nul-terminated string and `out` to a writable
/// pointer slot.
#[no_mangle]
pub unsafe extern "C" fn mogp_problem_parse_json(
    json: *const c_char,
    out: *mut *mut MogpProblem,
) -> MogpStatus {
    guard(|| {
        if json.is_null() || out.is_null() {
            return fail(MogpStatus::NullArgument, "json and out must be non-null");
        }
        let text = match unsafe { CStr::from_ptr(json) }.to_str() {
            Ok(t) => t,
            Err(e) => return fail(MogpStatus::InvalidUtf8, e),
        };
        match parse_problem(text) {
            Ok(program) => {
                unsafe { *out = Box::into_raw(Box::new(MogpProblem { program })) };
                MogpStatus::Ok
            }
            Err(e) => fail(status_of(&e), e),
        }
    })
}

/// Release a problem handle. Null is a no-op.
///
/// # Safety
///
/// `problem` must be null or a handle from [`mogp_problem_parse_json`] that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn mogp_problem_free(problem: *mut MogpProblem) {
    if !problem.is_null() {
        drop(unsafe { Box::from_raw(problem) });
    }
}

/// Number of decision variables, or 0 for a null handle.
///
/// # Safety
///
/// `problem` must be null or a live problem handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_problem_num_variables(problem: *const MogpProblem) -> usize {
    unsafe { problem.as_ref() }.map_or(0, |p| p.program.num_variables())
}

/// Number of objectives, or 0 for a null handle.
///
/// # Safety
///
/// `problem` must be null or a live problem handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_problem_num_objectives(problem: *const MogpProblem) -> usize {
    unsafe { problem.as_ref() }.map_or(0, |p| p.program.num_objectives())
}

/// Number of constraints, or 0 for a null handle.
///
/// # Safety
///
/// `problem` must be null or a live problem handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_problem_num_constraints(problem: *const MogpProblem) -> usize {
    unsafe { problem.as_ref() }.map_or(0, |p| p.program.num_constraints())
}

/// Degree of difficulty of the scalarized program (terms minus variables
/// minus one; may be negative), or `INT64_MIN` for a null handle.
///
/// # Safety
///
/// `problem` must be null or a live problem handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_problem_degree_of_difficulty(problem: *const MogpProblem) -> i64 {
    unsafe { problem.as_ref() }.map_or(i64::MIN, |p| p.program.degree_of_difficulty() as i64)
}

/// Solve one weighting of the objectives and store a solution handle in
/// `*out`. `weights` must hold one positive entry per objective, summing to
/// one. Pass null `options` for the defaults.
///
/// Returns `MOGP_STATUS_OK` only for a certified optimum; `NOT_OPTIMAL`
/// means the iteration cap was reached first and no handle is produced.
///
/// # Safety
///
/// `problem` must be a live problem handle, `weights` must point to
/// `num_weights` doubles, `options` must be null or valid, and `out` must
/// point to a writable pointer slot.
#[no_mangle]
pub unsafe extern "C" fn mogp_solve(
    problem: *const MogpProblem,
    weights: *const f64,
    num_weights: usize,
    options: *const MogpSolverOptions,
    out: *mut *mut MogpSolution,
) -> MogpStatus {
    guard(|| {
        let Some(handle) = (unsafe { problem.as_ref() }) else {
            return fail(MogpStatus::NullArgument, "problem must be non-null");
        };
        if out.is_null() {
            return fail(MogpStatus::NullArgument, "out must be non-null");
        }
        if weights.is_null() && num_weights > 0 {
            return fail(MogpStatus::NullArgument, "weights must be non-null");
        }
        let prog = &handle.program;
        if num_weights != prog.num_objectives() {
            return fail(
                MogpStatus::InvalidWeights,
                format!("expected {} weights, got {}", prog.num_objectives(), num_weights),
            );
        }
        let weights = unsafe { std::slice::from_raw_parts(weights, num_weights) };
        let opts = match unsafe { options.as_ref() } {
            Some(o) => o.to_options(),
            None => SolverOptions::default(),
        };
        let scalarized = PreferenceWeights::new(weights.to_vec())
            .and_then(|w| scalarize(prog, &w));
        let sp = match scalarized {
            Ok(sp) => sp,
            Err(e) => return fail(status_of(&e), e),
        };
        let dual = match solve_scalarized(&sp, &opts) {
            Ok(d) => d,
            Err(e) => return fail(status_of(&e), e),
        };
        if dual.status != SolverStatus::Optimal {
            return fail(
                MogpStatus::NotOptimal,
                "iteration cap reached before optimality was certified",
            );
        }
        let primal = match recover_primal(&dual, &sp) {
            Ok(p) => p,
            Err(e) => return fail(status_of(&e), e),
        };
        let solution = MogpSolution {
            dual_value: dual.value,
            converged: true,
            iterations: dual.iterations,
            reduced_gradient_norm: dual.reduced_gradient_norm,
            multipliers: constraint_multipliers(prog, &dual.point.delta),
            deltas: dual.point.delta,
            x: primal.x,
            objectives: primal.objective_values,
            scalarized_objective: primal.scalarized_objective,
            unique: primal.unique,
        };
        unsafe { *out = Box::into_raw(Box::new(solution)) };
        MogpStatus::Ok
    })
}

/// Release a solution handle. Null is a no-op.
///
/// # Safety
///
/// `solution` must be null or a handle from [`mogp_solve`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_free(solution: *mut MogpSolution) {
    if !solution.is_null() {
        drop(unsafe { Box::from_raw(solution) });
    }
}

/// Optimal dual objective value (equals the optimal weighted objective), or
/// NaN for a null handle.
///
/// # Safety
///
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_dual_value(solution: *const MogpSolution) -> f64 {
    unsafe { solution.as_ref() }.map_or(f64::NAN, |s| s.dual_value)
}

/// Weighted objective evaluated at the recovered minimizer, or NaN for a
/// null handle.
///
/// # Safety
///
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_scalarized_objective(
    solution: *const MogpSolution,
) -> f64 {
    unsafe { solution.as_ref() }.map_or(f64::NAN, |s| s.scalarized_objective)
}

/// True when optimality was certified within the iteration cap.
///
/// # Safety
///
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_converged(solution: *const MogpSolution) -> bool {
    unsafe { solution.as_ref() }.is_some_and(|s| s.converged)
}

/// True when the recovered minimizer is the unique one; false when it is
/// the minimum-norm representative of a solution family (or the handle is
/// null).
///
/// # Safety
///
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_unique(solution: *const MogpSolution) -> bool {
    unsafe { solution.as_ref() }.is_some_and(|s| s.unique)
}

/// Dual ascent iterations used, or 0 for a null handle.
///
/// # Safety
///
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_iterations(solution: *const MogpSolution) -> usize {
    unsafe { solution.as_ref() }.map_or(0, |s| s.iterations)
}

/// Reduced gradient norm at the final dual point, or NaN for a null handle.
///
/// # Safety
///
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_reduced_gradient_norm(
    solution: *const MogpSolution,
) -> f64 {
    unsafe { solution.as_ref() }.map_or(f64::NAN, |s| s.reduced_gradient_norm)
}

/// Length of the minimizer vector, or 0 for a null handle.
///
/// # Safety
///
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_num_variables(solution: *const MogpSolution) -> usize {
    unsafe { solution.as_ref() }.map_or(0, |s| s.x.len())
}

/// Number of per-objective values, or 0 for a null handle.
///
/// # Safety
///
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_num_objectives(solution: *const MogpSolution) -> usize {
    unsafe { solution.as_ref() }.map_or(0, |s| s.objectives.len())
}

/// Number of dual weights (scalarized terms), or 0 for a null handle.
///
/// # Safety
///
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_num_terms(solution: *const MogpSolution) -> usize {
    unsafe { solution.as_ref() }.map_or(0, |s| s.deltas.len())
}

/// Number of constraint multipliers, or 0 for a null handle.
///
/// # Safety
///
/// `solution` must be null or a live solution handle.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_num_constraints(solution: *const MogpSolution) -> usize {
    unsafe { solution.as_ref() }.map_or(0, |s| s.multipliers.len())
}

unsafe fn copy_out(source: &[f64], buffer: *mut f64, length: usize) -> MogpStatus {
    if buffer.is_null() {
        return fail(MogpStatus::NullArgument, "buffer must be non-null");
    }
    if length < source.len() {
        return fail(
            MogpStatus::BufferTooSmall,
            format!("buffer holds {length} values, {} required", source.len()),
        );
    }
    unsafe { std::ptr::copy_nonoverlapping(source.as_ptr(), buffer, source.len()) };
    MogpStatus::Ok
}

/// Copy the recovered minimizer into `buffer` (capacity `length` doubles;
/// see [`mogp_solution_num_variables`]).
///
/// # Safety
///
/// `solution` must be a live solution handle and `buffer` must point to
/// `length` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_copy_x(
    solution: *const MogpSolution,
    buffer: *mut f64,
    length: usize,
) -> MogpStatus {
    guard(|| {
        let Some(s) = (unsafe { solution.as_ref() }) else {
            return fail(MogpStatus::NullArgument, "solution must be non-null");
        };
        unsafe { copy_out(&s.x, buffer, length) }
    })
}

/// Copy the per-objective values at the minimizer into `buffer` (capacity
/// `length` doubles; see [`mogp_solution_num_objectives`]).
///
/// # Safety
///
/// `solution` must be a live solution handle and `buffer` must point to
/// `length` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_copy_objectives(
    solution: *const MogpSolution,
    buffer: *mut f64,
    length: usize,
) -> MogpStatus {
    guard(|| {
        let Some(s) = (unsafe { solution.as_ref() }) else {
            return fail(MogpStatus::NullArgument, "solution must be non-null");
        };
        unsafe { copy_out(&s.objectives, buffer, length) }
    })
}

/// Copy the optimal dual weights, in scalarized term order, into `buffer`
/// (capacity `length` doubles; see [`mogp_solution_num_terms`]).
///
/// # Safety
///
/// `solution` must be a live solution handle and `buffer` must point to
/// `length` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_copy_deltas(
    solution: *const MogpSolution,
    buffer: *mut f64,
    length: usize,
) -> MogpStatus {
    guard(|| {
        let Some(s) = (unsafe { solution.as_ref() }) else {
            return fail(MogpStatus::NullArgument, "solution must be non-null");
        };
        unsafe { copy_out(&s.deltas, buffer, length) }
    })
}

/// Copy the per-constraint multipliers into `buffer` (capacity `length`
/// doubles; see [`mogp_solution_num_constraints`]).
///
/// # Safety
///
/// `solution` must be a live solution handle and `buffer` must point to
/// `length` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mogp_solution_copy_multipliers(
    solution: *const MogpSolution,
    buffer: *mut f64,
    length: usize,
) -> MogpStatus {
    guard(|| {
        let Some(s) = (unsafe { solution.as_ref() }) else {
            return fail(MogpStatus::NullArgument, "solution must be non-null");
        };
        unsafe { copy_out(&s.multipliers, buffer, length) }
    })
}
