//! Multi-objective posynomial geometric programming.
//!
//! Builds multi-objective programs whose objectives and constraints are
//! posynomials, scalarizes them with preference weights, solves the
//! associated dual by projected Newton ascent, recovers primal minimizers
//! from optimal dual weights, and sweeps weight grids to trace Pareto
//! frontiers.
//!
//! The pipeline, end to end:
//!
//! ```
//! use mogp::model::{Monomial, MultiObjectiveProgram, Posynomial, VariableSpace};
//! use mogp::scalarize::{scalarize, PreferenceWeights};
//! use mogp::solver::{solve_scalarized, SolverOptions};
//! use mogp::recover::recover_primal;
//!
//! let vars = VariableSpace::new(vec!["x".into()]).unwrap();
//! let f1 = Posynomial::new(vec![Monomial::new(1.0, vec![1.0]).unwrap()]).unwrap();
//! let f2 = Posynomial::new(vec![Monomial::new(1.0, vec![-1.0]).unwrap()]).unwrap();
//! let prog = MultiObjectiveProgram::new(vars, vec![f1, f2], vec![]).unwrap();
//!
//! let w = PreferenceWeights::new(vec![0.5, 0.5]).unwrap();
//! let sp = scalarize(&prog, &w).unwrap();
//! let dual = solve_scalarized(&sp, &SolverOptions::default()).unwrap();
//! let primal = recover_primal(&dual, &sp).unwrap();
//! assert!((primal.x[0] - 1.0).abs() < 1e-9);
//! ```

pub mod dual;
pub mod error;
pub mod io;
pub mod linalg;
pub mod model;
pub mod recover;
pub mod scalarize;
pub mod simplex;
pub mod solver;
pub mod sweep;

pub use error::{Error, InfeasibilityKind, Result};
pub use model::{Monomial, MultiObjectiveProgram, Posynomial, RawConstraint, RawObjective, Sense, VariableSpace};
pub use scalarize::{scalarize, weight_grid, PreferenceWeights, ScalarizedProgram};
pub use solver::{solve_dual, solve_scalarized, DualSolution, SolverOptions, SolverStatus};
pub use recover::{recover_primal, verify, PrimalSolution, VerificationReport};
pub use sweep::{dominance_filter, ideal_points, sweep, IdealPoint, ParetoPoint, SweepReport};
