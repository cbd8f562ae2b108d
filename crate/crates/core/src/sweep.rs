//! Weight-grid sweeps over the preference simplex, Pareto dominance
//! filtering, and per-objective ideal points.

use crate::error::{Error, Result};
use crate::model::MultiObjectiveProgram;
use crate::recover::{recover_primal, PrimalSolution};
use crate::scalarize::{scalarize, weight_grid, PreferenceWeights};
use crate::solver::{solve_scalarized, DualSolution, SolverOptions};

/// One solved grid point: the dual certificate and the recovered primal.
#[derive(Debug, Clone)]
pub struct ParetoPoint {
    pub weights: PreferenceWeights,
    pub dual: DualSolution,
    pub primal: PrimalSolution,
}

#[derive(Debug)]
pub struct SweepEntry {
    pub weights: PreferenceWeights,
    pub result: Result<ParetoPoint>,
}

/// The minimum of one objective alone, subject to all constraints.
#[derive(Debug, Clone)]
pub struct IdealPoint {
    pub value: f64,
    pub x: Vec<f64>,
    pub unique: bool,
}

#[derive(Debug)]
pub struct SweepReport {
    pub entries: Vec<SweepEntry>,
    /// Parallel to `entries`; `false` for entries that failed to solve.
    pub nondominated: Vec<bool>,
    /// One result per objective.
    pub ideal: Vec<Result<IdealPoint>>,
}

fn solve_point(
    prog: &MultiObjectiveProgram,
    w: &PreferenceWeights,
    opts: &SolverOptions,
) -> Result<ParetoPoint> {
    let sp = scalarize(prog, w)?;
    let dual = solve_scalarized(&sp, opts)?;
    let primal = recover_primal(&dual, &sp)?;
    Ok(ParetoPoint { weights: w.clone(), dual, primal })
}

/// Sweeps the interior simplex lattice with the given step.
pub fn sweep(
    prog: &MultiObjectiveProgram,
    step: f64,
    opts: &SolverOptions,
) -> Result<SweepReport> {
    let grid = weight_grid(prog.num_objectives(), step)?;
    sweep_grid(prog, &grid, opts)
}

pub fn sweep_grid(
    prog: &MultiObjectiveProgram,
    weights: &[PreferenceWeights],
    opts: &SolverOptions,
) -> Result<SweepReport> {
    let entries: Vec<SweepEntry> = weights
        .iter()
        .map(|w| SweepEntry { weights: w.clone(), result: solve_point(prog, w, opts) })
        .collect();
    assemble(prog, entries, opts)
}

/// Same result as [`sweep_grid`], with grid points distributed round-robin
/// over `threads` worker threads.
pub fn sweep_grid_parallel(
    prog: &MultiObjectiveProgram,
    weights: &[PreferenceWeights],
    opts: &SolverOptions,
    threads: usize,
) -> Result<SweepReport> {
    let threads = threads.max(1).min(weights.len().max(1));
    if threads <= 1 {
        return sweep_grid(prog, weights, opts);
    }
    let mut slots: Vec<Option<SweepEntry>> = (0..weights.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for tid in 0..threads {
            handles.push(scope.spawn(move || {
                let mut out = Vec::new();
                for (i, w) in weights.iter().enumerate() {
                    if i % threads == tid {
                        out.push((
                            i,
                            SweepEntry {
                                weights: w.clone(),
                                result: solve_point(prog, w, opts),
                            },
                        ));
                    }
                }
                out
            }));
        }
        for h in handles {
            for (i, entry) in h.join().expect("sweep worker panicked") {
                slots[i] = Some(entry);
            }
        }
    });
    let entries: Vec<SweepEntry> = slots.into_iter().map(|s| s.expect("slot filled")).collect();
    assemble(prog, entries, opts)
}

fn assemble(
    prog: &MultiObjectiveProgram,
    entries: Vec<SweepEntry>,
    opts: &SolverOptions,
) -> Result<SweepReport> {
    let solved: Vec<usize> = entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.result.is_ok())
        .map(|(i, _)| i)
        .collect();
    let values: Vec<Vec<f64>> = solved
        .iter()
        .map(|&i| match &entries[i].result {
            Ok(p) => p.primal.objective_values.clone(),
            Err(_) => unreachable!(),
        })
        .collect();
    let keep = dominance_filter(&values)?;
    let mut nondominated = vec![false; entries.len()];
    for (k, &i) in solved.iter().enumerate() {
        nondominated[i] = keep[k];
    }
    let ideal = ideal_points(prog, opts);
    Ok(SweepReport { entries, nondominated, ideal })
}

/// Marks the nondominated rows of a set of objective vectors. Row `i` is
/// dominated when some row `j` is no worse in every component (within 1e-9)
/// and strictly better in at least one.
pub fn dominance_filter(values: &[Vec<f64>]) -> Result<Vec<bool>> {
    if values.is_empty() {
        return Ok(Vec::new());
    }
    let p = values[0].len();
    if values.iter().any(|v| v.len() != p) {
        return Err(Error::RaggedInput);
    }
    let dominates = |a: &[f64], b: &[f64]| {
        a.iter().zip(b).all(|(&x, &y)| x <= y + 1e-9)
            && a.iter().zip(b).any(|(&x, &y)| x < y - 1e-9)
    };
    Ok((0..values.len())
        .map(|i| !values.iter().enumerate().any(|(j, v)| j != i && dominates(v, &values[i])))
        .collect())
}

/// Minimizes each objective alone under the shared constraints. An `Err`
/// entry records why that single-objective program has no attained minimum.
pub fn ideal_points(prog: &MultiObjectiveProgram, opts: &SolverOptions) -> Vec<Result<IdealPoint>> {
    let w1 = PreferenceWeights::new(vec![1.0]).expect("unit weight is valid");
    prog.objectives()
        .iter()
        .map(|obj| {
            let single = MultiObjectiveProgram::new(
                prog.variables().clone(),
                vec![obj.clone()],
                prog.constraints().to_vec(),
            )?;
            let sp = scalarize(&single, &w1)?;
            let dual = solve_scalarized(&sp, opts)?;
            let primal = recover_primal(&dual, &sp)?;
            Ok(IdealPoint {
                value: primal.objective_values[0],
                x: primal.x,
                unique: primal.unique,
            })
        })
        .collect()
}
