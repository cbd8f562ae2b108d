//! Primal recovery from optimal dual weights. Terms carrying dual mass above
//! the active threshold pin down the monomial values at the optimum, which is
//! a linear system in the logs of the primal variables.

use crate::dual::{build_dual, DualProgram};
use crate::error::{Error, Result};
use crate::linalg::lstsq_min_norm;
use crate::scalarize::ScalarizedProgram;
use crate::solver::{DualSolution, SolverStatus};
use nalgebra::{DMatrix, DVector};

/// Terms with dual mass below this contribute no recovery equation.
pub const DEFAULT_ACTIVE_THRESHOLD: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct PrimalSolution {
    pub x: Vec<f64>,
    /// Each original objective evaluated at `x`, before weighting.
    pub objective_values: Vec<f64>,
    /// The weighted-sum objective evaluated at `x`.
    pub scalarized_objective: f64,
    /// True when the recovery system determines `x` uniquely; otherwise `x`
    /// is the minimum-norm representative in log space.
    pub unique: bool,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    /// Largest amount by which any constraint exceeds 1, clamped at zero.
    pub max_constraint_violation: f64,
    /// `|Z - V| / V` between the primal objective and the dual bound.
    pub duality_gap: f64,
    /// Infinity norm of the log-linear recovery residual.
    pub recovery_residual: f64,
    /// Constraints whose multiplier exceeds the active threshold.
    pub active_constraints: Vec<usize>,
}

struct RecoverySystem {
    a: DMatrix<f64>,
    b: DVector<f64>,
}

fn recovery_system(dp: &DualProgram, delta: &[f64], value: f64) -> RecoverySystem {
    let exps = dp.exponents();
    let c = dp.coefficients();
    let lambdas = dp.lambdas(delta);
    let mut rows: Vec<usize> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    for t in 0..dp.num_terms() {
        if delta[t] <= DEFAULT_ACTIVE_THRESHOLD {
            continue;
        }
        let gi = dp.group_of()[t];
        let target = if gi == 0 {
            (delta[t] * value).ln() - c[t].ln()
        } else {
            (delta[t] / lambdas[gi]).ln() - c[t].ln()
        };
        rows.push(t);
        rhs.push(target);
    }
    let a = DMatrix::from_fn(rows.len(), dp.num_variables(), |i, j| exps[(rows[i], j)]);
    RecoverySystem { a, b: DVector::from_vec(rhs) }
}

/// Inverts the active terms of an optimal dual solution into a primal
/// minimizer. Fails when the dual did not converge, no term is active, or
/// the active terms contradict each other (a bad certificate).
pub fn recover_primal(dual: &DualSolution, sp: &ScalarizedProgram) -> Result<PrimalSolution> {
    if dual.status != SolverStatus::Optimal {
        return Err(Error::NotOptimal(dual.status.to_string()));
    }
    let dp = build_dual(sp);
    check_point(&dp, dual)?;
    let sys = recovery_system(&dp, &dual.point.delta, dual.value);
    if sys.a.nrows() == 0 {
        return Err(Error::RecoveryImpossible);
    }
    let sol = lstsq_min_norm(&sys.a, &sys.b);
    let resid = (&sys.a * &sol.x - &sys.b).amax();
    if resid > 1e-6 {
        return Err(Error::InconsistentCertificate { residual: resid });
    }
    let x: Vec<f64> = sol.x.iter().map(|v| v.exp()).collect();
    let objective_values = sp.objective_values(&x)?;
    let scalarized_objective = sp.objective().eval(&x)?;
    Ok(PrimalSolution {
        x,
        objective_values,
        scalarized_objective,
        unique: sol.rank == sp.variables().len(),
    })
}

/// Diagnostics for a recovered (or externally supplied) primal point against
/// the dual certificate it should agree with.
pub fn verify(x: &[f64], dual: &DualSolution, sp: &ScalarizedProgram) -> Result<VerificationReport> {
    let dp = build_dual(sp);
    check_point(&dp, dual)?;
    if x.len() != sp.variables().len() {
        return Err(Error::DimensionMismatch { expected: sp.variables().len(), got: x.len() });
    }
    let mut max_violation: f64 = 0.0;
    for g in sp.constraints() {
        max_violation = max_violation.max(g.eval(x)? - 1.0);
    }
    let z = sp.objective().eval(x)?;
    let duality_gap = (z - dual.value).abs() / dual.value;
    let sys = recovery_system(&dp, &dual.point.delta, dual.value);
    let xi = DVector::from_fn(x.len(), |i, _| x[i].ln());
    let recovery_residual = if sys.a.nrows() == 0 {
        0.0
    } else {
        (&sys.a * xi - &sys.b).amax()
    };
    let lambdas = dp.lambdas(&dual.point.delta);
    let active_constraints = (1..lambdas.len())
        .filter(|&i| lambdas[i] > DEFAULT_ACTIVE_THRESHOLD)
        .map(|i| i - 1)
        .collect();
    Ok(VerificationReport {
        max_constraint_violation: max_violation,
        duality_gap,
        recovery_residual,
        active_constraints,
    })
}

fn check_point(dp: &DualProgram, dual: &DualSolution) -> Result<()> {
    if dual.point.delta.len() != dp.num_terms() {
        return Err(Error::DimensionMismatch {
            expected: dp.num_terms(),
            got: dual.point.delta.len(),
        });
    }
    Ok(())
}
