use thiserror::Error;

/// Why the dual feasible region is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfeasibilityKind {
    /// The normality/orthogonality equalities admit no solution at all.
    InconsistentEqualities,
    /// The equalities are solvable, but every solution has a negative component.
    NoNonnegativeSolution,
}

impl std::fmt::Display for InfeasibilityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InfeasibilityKind::InconsistentEqualities => write!(f, "inconsistent equalities"),
            InfeasibilityKind::NoNonnegativeSolution => write!(f, "no nonnegative solution"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    /// Construction-time violations: empty variable lists, duplicate names,
    /// non-positive coefficients or bounds, empty posynomials.
    #[error("{0}")]
    InvalidModel(String),

    /// Evaluation outside the positive orthant.
    #[error("variable {index} is {value}, evaluation requires strictly positive values")]
    NonPositiveArgument { index: usize, value: f64 },

    /// A maximize objective with more than one term has no monomial reciprocal.
    #[error("{0}")]
    NotConvertible(String),

    #[error("expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0}")]
    InvalidWeights(String),

    /// Gradient (or any boundary-sensitive quantity) requested at a point with
    /// a zero or negative component.
    #[error("{0}")]
    BoundaryPoint(String),

    #[error("dual program is infeasible: {0}")]
    DualInfeasible(InfeasibilityKind),

    /// The dual ascent diverged, so the primal problem has no finite optimum.
    #[error("dual objective is unbounded above")]
    Unbounded,

    /// Primal recovery requires a converged dual solution.
    #[error("recovery requires an optimal dual solution, got status {0}")]
    NotOptimal(String),

    /// No term exceeded the active threshold, so there is nothing to invert.
    #[error("no active terms above threshold, cannot recover a primal point")]
    RecoveryImpossible,

    /// The log-linear recovery system is inconsistent beyond tolerance, which
    /// means the dual certificate does not describe a primal optimum.
    #[error("recovery system inconsistent, residual {residual:.3e} exceeds 1e-6")]
    InconsistentCertificate { residual: f64 },

    /// Dominance filtering requires all objective vectors to share one length.
    #[error("objective vectors have mismatched lengths")]
    RaggedInput,

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
