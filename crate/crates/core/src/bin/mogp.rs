//! Command-line front end: analyze problem files, solve one weighting,
//! sweep a weight grid, compute ideal points, and check candidate points.
//!
//! Exit codes: 0 success, 1 usage or input errors, 2 solve failures,
//! 3 sweeps with failed grid points, 4 infeasible check points.

use clap::{Args, Parser, Subcommand};
use mogp::error::Error;
use mogp::io::{
    constraint_multipliers, format_sig7, parse_problem, report_from_ideal, report_from_point,
    report_from_sweep, sweep_csv, ReportDocument,
};
use mogp::model::MultiObjectiveProgram;
use mogp::recover::{recover_primal, verify};
use mogp::scalarize::{scalarize, weight_grid, PreferenceWeights};
use mogp::solver::{solve_scalarized, SolverOptions, SolverStatus};
use mogp::sweep::{sweep_grid, sweep_grid_parallel, ParetoPoint};
use std::path::{Path, PathBuf};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_SOLVE: i32 = 2;
const EXIT_SWEEP: i32 = 3;
const EXIT_INFEASIBLE: i32 = 4;

#[derive(Parser)]
#[command(
    name = "mogp",
    version,
    about = "Multi-objective posynomial geometric programming"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SolverArgs {
    /// Iteration cap for the dual ascent.
    #[arg(long, default_value_t = 200)]
    max_iterations: usize,
    /// Reduced gradient norm required to declare optimality.
    #[arg(long, default_value_t = 1e-9)]
    gradient_tolerance: f64,
    /// Equality residual allowed at an optimal point.
    #[arg(long, default_value_t = 1e-10)]
    equality_tolerance: f64,
    /// Dual weights below this are treated as zero.
    #[arg(long, default_value_t = 1e-7)]
    active_threshold: f64,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            max_iterations: self.max_iterations,
            gradient_tolerance: self.gradient_tolerance,
            equality_tolerance: self.equality_tolerance,
            active_threshold: self.active_threshold,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the dimensions of a problem file.
    Analyze { problem: PathBuf },
    /// Solve one weighting of the objectives.
    Solve {
        problem: PathBuf,
        /// Comma-separated positive weights summing to 1, one per objective.
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<f64>,
        /// Write a JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Solve every point of an interior weight grid.
    Sweep {
        problem: PathBuf,
        /// Grid step; 1/step must be an integer.
        #[arg(long)]
        step: f64,
        /// Keep only grid points whose first weight is at most this.
        #[arg(long)]
        max_weight: Option<f64>,
        /// Write dual and primal tables here as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write a JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Number of worker threads.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Minimize each objective alone under the shared constraints.
    Ideal {
        problem: PathBuf,
        /// Write a JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Evaluate a candidate point against one weighting.
    Check {
        problem: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<f64>,
        /// Comma-separated variable values, in problem order.
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
    },
}

fn main() {
    // Die silently on closed pipes (e.g. `mogp sweep ... | head`) instead of
    // panicking mid-print.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match cli.cmd {
        Cmd::Analyze { problem } => analyze(&problem),
        Cmd::Solve { problem, weights, json, solver } => {
            solve(&problem, &weights, json.as_deref(), &solver.options())
        }
        Cmd::Sweep { problem, step, max_weight, csv, json, parallel, solver } => sweep_cmd(
            &problem,
            step,
            max_weight,
            csv.as_deref(),
            json.as_deref(),
            parallel,
            &solver.options(),
        ),
        Cmd::Ideal { problem, json, solver } => {
            ideal_cmd(&problem, json.as_deref(), &solver.options())
        }
        Cmd::Check { problem, weights, x } => check(&problem, &weights, &x),
    }
}

fn fail(code: i32, e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    code
}

fn load(path: &Path) -> Result<MultiObjectiveProgram, Error> {
    let text = std::fs::read_to_string(path)?;
    parse_problem(&text)
}

fn join(values: &[f64]) -> String {
    values.iter().map(|&v| format_sig7(v)).collect::<Vec<_>>().join(", ")
}

fn write_json(path: &Path, report: &ReportDocument) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    std::fs::write(path, text + "\n")
}

fn analyze(path: &Path) -> i32 {
    let prog = match load(path) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    println!(
        "variables: {} ({})",
        prog.num_variables(),
        prog.variables().names().join(", ")
    );
    let obj_terms: Vec<String> =
        prog.objectives().iter().map(|p| p.num_terms().to_string()).collect();
    println!("objectives: {} with terms {}", prog.num_objectives(), obj_terms.join(", "));
    if prog.num_constraints() == 0 {
        println!("constraints: 0");
    } else {
        let cons_terms: Vec<String> =
            prog.constraints().iter().map(|p| p.num_terms().to_string()).collect();
        println!("constraints: {} with terms {}", prog.num_constraints(), cons_terms.join(", "));
    }
    println!("scalarized terms: {}", prog.total_terms());
    println!("degree of difficulty: {}", prog.degree_of_difficulty());
    EXIT_OK
}

fn solve_one(
    prog: &MultiObjectiveProgram,
    w: &PreferenceWeights,
    opts: &SolverOptions,
) -> Result<ParetoPoint, Error> {
    let sp = scalarize(prog, w)?;
    let dual = solve_scalarized(&sp, opts)?;
    let primal = recover_primal(&dual, &sp)?;
    Ok(ParetoPoint { weights: w.clone(), dual, primal })
}

fn solve(path: &Path, weights: &[f64], json: Option<&Path>, opts: &SolverOptions) -> i32 {
    let prog = match load(path) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let w = match PreferenceWeights::new(weights.to_vec()) {
        Ok(w) => w,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    if w.len() != prog.num_objectives() {
        return fail(
            EXIT_USAGE,
            format!("expected {} weights, got {}", prog.num_objectives(), w.len()),
        );
    }
    let result = solve_one(&prog, &w, opts);
    if let Some(path) = json {
        let report = report_from_point(&prog, weights, &result, opts);
        if let Err(e) = write_json(path, &report) {
            return fail(EXIT_USAGE, e);
        }
    }
    match result {
        Ok(point) => {
            println!("status: {}", point.dual.status);
            println!("V: {}", format_sig7(point.dual.value));
            println!("iterations: {}", point.dual.iterations);
            println!(
                "reduced gradient norm: {}",
                format_sig7(point.dual.reduced_gradient_norm)
            );
            println!("dual weights: {}", join(&point.dual.point.delta));
            let lambdas = constraint_multipliers(&prog, &point.dual.point.delta);
            if !lambdas.is_empty() {
                println!("multipliers: {}", join(&lambdas));
            }
            println!("x: {}", join(&point.primal.x));
            println!("objectives: {}", join(&point.primal.objective_values));
            println!("Z: {}", format_sig7(point.primal.scalarized_objective));
            println!("unique: {}", point.primal.unique);
            let sp = scalarize(&prog, &w).expect("weights already validated");
            match verify(&point.primal.x, &point.dual, &sp) {
                Ok(report) => {
                    println!(
                        "max constraint violation: {}",
                        format_sig7(report.max_constraint_violation)
                    );
                    println!("duality gap: {}", format_sig7(report.duality_gap));
                    println!(
                        "recovery residual: {}",
                        format_sig7(report.recovery_residual)
                    );
                    let active: Vec<String> =
                        report.active_constraints.iter().map(|i| (i + 1).to_string()).collect();
                    println!("active constraints: {}", if active.is_empty() {
                        "none".to_string()
                    } else {
                        active.join(", ")
                    });
                }
                Err(e) => return fail(EXIT_SOLVE, e),
            }
            if point.dual.status == SolverStatus::Optimal {
                EXIT_OK
            } else {
                EXIT_SOLVE
            }
        }
        Err(e) => fail(EXIT_SOLVE, e),
    }
}

fn sweep_cmd(
    path: &Path,
    step: f64,
    max_weight: Option<f64>,
    csv: Option<&Path>,
    json: Option<&Path>,
    parallel: usize,
    opts: &SolverOptions,
) -> i32 {
    let prog = match load(path) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let mut grid = match weight_grid(prog.num_objectives(), step) {
        Ok(g) => g,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    if let Some(mw) = max_weight {
        grid.retain(|w| w.values()[0] <= mw + 1e-12);
    }
    let report = if parallel > 1 {
        sweep_grid_parallel(&prog, &grid, opts, parallel)
    } else {
        sweep_grid(&prog, &grid, opts)
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => return fail(EXIT_SOLVE, e),
    };
    for (entry, &nd) in report.entries.iter().zip(&report.nondominated) {
        let labels: Vec<String> = entry
            .weights
            .values()
            .iter()
            .enumerate()
            .map(|(k, &w)| format!("w{}={}", k + 1, format_sig7(w)))
            .collect();
        match &entry.result {
            Ok(point) => println!(
                "{}: {}, V={}, Z={}, {}",
                labels.join(" "),
                point.dual.status,
                format_sig7(point.dual.value),
                format_sig7(point.primal.scalarized_objective),
                if nd { "nondominated" } else { "dominated" }
            ),
            Err(e) => println!("{}: error: {e}", labels.join(" ")),
        }
    }
    for (k, r) in report.ideal.iter().enumerate() {
        match r {
            Ok(p) => println!(
                "ideal {}: {} at x=({}){}",
                k + 1,
                format_sig7(p.value),
                join(&p.x),
                if p.unique { "" } else { " (not unique)" }
            ),
            Err(e) => println!("ideal {}: error: {e}", k + 1),
        }
    }
    if let Some(path) = csv {
        if let Err(e) = std::fs::write(path, sweep_csv(&prog, &report)) {
            return fail(EXIT_USAGE, e);
        }
    }
    if let Some(path) = json {
        let doc = report_from_sweep(&prog, &report, opts);
        if let Err(e) = write_json(path, &doc) {
            return fail(EXIT_USAGE, e);
        }
    }
    if report.entries.iter().any(|e| e.result.is_err()) {
        EXIT_SWEEP
    } else {
        EXIT_OK
    }
}

fn ideal_cmd(path: &Path, json: Option<&Path>, opts: &SolverOptions) -> i32 {
    let prog = match load(path) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let ideal = mogp::sweep::ideal_points(&prog, opts);
    for (k, r) in ideal.iter().enumerate() {
        match r {
            Ok(p) => println!(
                "ideal {}: {} at x=({}){}",
                k + 1,
                format_sig7(p.value),
                join(&p.x),
                if p.unique { "" } else { " (not unique)" }
            ),
            Err(e) => println!("ideal {}: error: {e}", k + 1),
        }
    }
    if let Some(path) = json {
        let doc = report_from_ideal(&ideal, opts);
        if let Err(e) = write_json(path, &doc) {
            return fail(EXIT_USAGE, e);
        }
    }
    EXIT_OK
}

fn check(path: &Path, weights: &[f64], x: &[f64]) -> i32 {
    let prog = match load(path) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let w = match PreferenceWeights::new(weights.to_vec()) {
        Ok(w) => w,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let sp = match scalarize(&prog, &w) {
        Ok(sp) => sp,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    if x.len() != prog.num_variables() {
        return fail(
            EXIT_USAGE,
            format!("expected {} variable values, got {}", prog.num_variables(), x.len()),
        );
    }
    let objectives = match sp.objective_values(x) {
        Ok(v) => v,
        Err(e) => return fail(EXIT_INFEASIBLE, e),
    };
    let z = sp.objective().eval(x).expect("objective evaluates where objectives did");
    println!("Z: {}", format_sig7(z));
    println!("objectives: {}", join(&objectives));
    let mut feasible = true;
    for (i, g) in sp.constraints().iter().enumerate() {
        let v = match g.eval(x) {
            Ok(v) => v,
            Err(e) => return fail(EXIT_INFEASIBLE, e),
        };
        let ok = v <= 1.0 + 1e-6;
        feasible &= ok;
        println!(
            "constraint {}: {} ({})",
            i + 1,
            format_sig7(v),
            if ok { "satisfied" } else { "violated" }
        );
    }
    println!("feasible: {feasible}");
    if feasible {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    }
}
