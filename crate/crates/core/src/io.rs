//! JSON problem documents, JSON result reports, and CSV table writers.
//!
//! A problem document looks like:
//!
//! ```json
//! {
//!   "variables": ["x1", "x2"],
//!   "objectives": [
//!     {"sense": "min", "terms": [{"coef": 2.0, "exps": {"x1": 1.0}}]}
//!   ],
//!   "constraints": [
//!     {"terms": [{"coef": 1.0, "exps": {"x1": -1.0, "x2": -1.0}}], "bound": 1.0}
//!   ]
//! }
//! ```
//!
//! Exponents are sparse: variables missing from `exps` have exponent zero.
//! Unknown keys anywhere in the document are rejected.

use crate::error::{Error, Result};
use crate::model::{
    Monomial, MultiObjectiveProgram, Posynomial, RawConstraint, RawObjective, Sense,
    VariableSpace,
};
use crate::recover::PrimalSolution;
use crate::solver::{DualSolution, SolverOptions};
use crate::sweep::{IdealPoint, ParetoPoint, SweepReport};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub variables: Vec<String>,
    pub objectives: Vec<ObjectiveDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<ConstraintDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveDoc {
    /// `"min"` or `"max"`; a maximization must be a single monomial.
    pub sense: String,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coef: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub exps: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintDoc {
    pub terms: Vec<TermDoc>,
    pub bound: f64,
}

/// Parses a JSON problem document into a standardized program.
pub fn parse_problem(json: &str) -> Result<MultiObjectiveProgram> {
    let doc: ProblemDocument =
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    document_to_program(&doc)
}

fn with_context(ctx: &str, e: Error) -> Error {
    match e {
        Error::InvalidModel(m) => Error::Parse(format!("{ctx}: {m}")),
        other => Error::Parse(format!("{ctx}: {other}")),
    }
}

fn posynomial_from_terms(vars: &VariableSpace, terms: &[TermDoc], ctx: &str) -> Result<Posynomial> {
    if terms.is_empty() {
        return Err(Error::Parse(format!("{ctx}: needs at least one term")));
    }
    let mut monos = Vec::with_capacity(terms.len());
    for (j, term) in terms.iter().enumerate() {
        let mut exps = vec![0.0; vars.len()];
        for (name, &e) in &term.exps {
            let Some(idx) = vars.index_of(name) else {
                return Err(Error::Parse(format!(
                    "{ctx}, term {}: unknown variable \"{name}\"",
                    j + 1
                )));
            };
            exps[idx] = e;
        }
        let mono = Monomial::new(term.coef, exps)
            .map_err(|e| with_context(&format!("{ctx}, term {}", j + 1), e))?;
        monos.push(mono);
    }
    Posynomial::new(monos)
}

pub fn document_to_program(doc: &ProblemDocument) -> Result<MultiObjectiveProgram> {
    let vars = VariableSpace::new(doc.variables.clone())?;
    let mut objectives = Vec::with_capacity(doc.objectives.len());
    for (k, o) in doc.objectives.iter().enumerate() {
        let ctx = format!("objective {}", k + 1);
        let sense = match o.sense.as_str() {
            "min" => Sense::Minimize,
            "max" => Sense::Maximize,
            other => {
                return Err(Error::Parse(format!(
                    "{ctx}: sense must be \"min\" or \"max\", got \"{other}\""
                )))
            }
        };
        let posynomial = posynomial_from_terms(&vars, &o.terms, &ctx)?;
        objectives.push(RawObjective { sense, posynomial });
    }
    let mut constraints = Vec::with_capacity(doc.constraints.len());
    for (i, c) in doc.constraints.iter().enumerate() {
        let ctx = format!("constraint {}", i + 1);
        let posynomial = posynomial_from_terms(&vars, &c.terms, &ctx)?;
        constraints.push(RawConstraint::new(posynomial, c.bound).map_err(|e| with_context(&ctx, e))?);
    }
    MultiObjectiveProgram::from_raw(vars, &objectives, &constraints)
}

/// A standardized program as a document: minimizations only, unit bounds.
pub fn program_to_document(prog: &MultiObjectiveProgram) -> ProblemDocument {
    let names = prog.variables().names();
    let posy_terms = |p: &Posynomial| {
        p.terms()
            .iter()
            .map(|m| TermDoc {
                coef: m.coefficient(),
                exps: m
                    .exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0.0)
                    .map(|(j, &e)| (names[j].clone(), e))
                    .collect(),
            })
            .collect::<Vec<_>>()
    };
    ProblemDocument {
        description: None,
        variables: names.to_vec(),
        objectives: prog
            .objectives()
            .iter()
            .map(|p| ObjectiveDoc { sense: "min".into(), terms: posy_terms(p) })
            .collect(),
        constraints: prog
            .constraints()
            .iter()
            .map(|p| ConstraintDoc { terms: posy_terms(p), bound: 1.0 })
            .collect(),
    }
}

pub fn serialize_problem(prog: &MultiObjectiveProgram) -> String {
    serde_json::to_string_pretty(&program_to_document(prog)).expect("document serializes")
}

/// Shortest representation with 7 significant digits, matching C's `%.7g`:
/// fixed notation when the decimal exponent is in `[-4, 7)`, otherwise
/// scientific with a two-digit exponent; trailing zeros trimmed.
pub fn format_sig7(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.6e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponential form");
    let exp: i32 = exp.parse().expect("exponent parses");
    if exp < -4 || exp >= 7 {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let prec = (6 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", prec, x))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Objective term count and per-constraint term counts, in scalarized term
/// order.
fn term_layout(prog: &MultiObjectiveProgram) -> (usize, Vec<usize>) {
    let obj: usize = prog.objectives().iter().map(Posynomial::num_terms).sum();
    let cons = prog.constraints().iter().map(Posynomial::num_terms).collect();
    (obj, cons)
}

/// Per-constraint multipliers `lambda_i`, summed from a dual point in
/// scalarized term order.
pub fn constraint_multipliers(prog: &MultiObjectiveProgram, delta: &[f64]) -> Vec<f64> {
    let (obj, cons) = term_layout(prog);
    let mut out = Vec::with_capacity(cons.len());
    let mut at = obj;
    for len in cons {
        out.push(delta[at..at + len].iter().sum());
        at += len;
    }
    out
}

fn nan_row(cols: usize) -> Vec<String> {
    vec!["nan".to_string(); cols]
}

/// Dual-weight table: one row per grid point with columns
/// `w1..wp, w01..w0T, w11.., ..., V`. Failed points keep their weight cells
/// and carry `nan` elsewhere.
pub fn dual_csv(prog: &MultiObjectiveProgram, report: &SweepReport) -> String {
    let p = prog.num_objectives();
    let (obj_terms, cons_terms) = term_layout(prog);
    let mut header: Vec<String> = (1..=p).map(|k| format!("w{k}")).collect();
    header.extend((1..=obj_terms).map(|t| format!("w0{t}")));
    for (i, &len) in cons_terms.iter().enumerate() {
        header.extend((1..=len).map(move |t| format!("w{}{t}", i + 1)));
    }
    header.push("V".into());
    let mut lines = vec![header.join(",")];
    let data_cols = obj_terms + cons_terms.iter().sum::<usize>() + 1;
    for entry in &report.entries {
        let mut row: Vec<String> =
            entry.weights.values().iter().map(|&w| format_sig7(w)).collect();
        match &entry.result {
            Ok(point) => {
                row.extend(point.dual.point.delta.iter().map(|&d| format_sig7(d)));
                row.push(format_sig7(point.dual.value));
            }
            Err(_) => row.extend(nan_row(data_cols)),
        }
        lines.push(row.join(","));
    }
    lines.join("\n") + "\n"
}

/// Primal table: `w1..wp, x1..xn, Z` per grid point, `nan` for failures.
pub fn primal_csv(prog: &MultiObjectiveProgram, report: &SweepReport) -> String {
    let p = prog.num_objectives();
    let n = prog.num_variables();
    let mut header: Vec<String> = (1..=p).map(|k| format!("w{k}")).collect();
    header.extend((1..=n).map(|j| format!("x{j}")));
    header.push("Z".into());
    let mut lines = vec![header.join(",")];
    for entry in &report.entries {
        let mut row: Vec<String> =
            entry.weights.values().iter().map(|&w| format_sig7(w)).collect();
        match &entry.result {
            Ok(point) => {
                row.extend(point.primal.x.iter().map(|&v| format_sig7(v)));
                row.push(format_sig7(point.primal.scalarized_objective));
            }
            Err(_) => row.extend(nan_row(n + 1)),
        }
        lines.push(row.join(","));
    }
    lines.join("\n") + "\n"
}

/// Both tables in one file, separated by a single blank line.
pub fn sweep_csv(prog: &MultiObjectiveProgram, report: &SweepReport) -> String {
    format!("{}\n{}", dual_csv(prog, report), primal_csv(prog, report))
}

#[derive(Debug, Serialize)]
pub struct ReportOptionsDoc {
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
    pub equality_tolerance: f64,
    pub active_threshold: f64,
}

impl From<&SolverOptions> for ReportOptionsDoc {
    fn from(o: &SolverOptions) -> Self {
        Self {
            max_iterations: o.max_iterations,
            gradient_tolerance: o.gradient_tolerance,
            equality_tolerance: o.equality_tolerance,
            active_threshold: o.active_threshold,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DualDoc {
    pub value: f64,
    pub reduced_gradient_norm: f64,
    pub iterations: usize,
    pub deltas: Vec<f64>,
    /// One multiplier per constraint.
    pub lambdas: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct PrimalDoc {
    pub x: Vec<f64>,
    pub objectives: Vec<f64>,
    pub z: f64,
    pub unique: bool,
}

#[derive(Debug, Serialize)]
pub struct PointDoc {
    pub weights: Vec<f64>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual: Option<DualDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primal: Option<PrimalDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nondominated: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct IdealDoc {
    /// 1-based objective index.
    pub objective: usize,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unique: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub version: String,
    pub options: ReportOptionsDoc,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<IdealDoc>>,
}

fn dual_doc(prog: &MultiObjectiveProgram, dual: &DualSolution) -> DualDoc {
    DualDoc {
        value: dual.value,
        reduced_gradient_norm: dual.reduced_gradient_norm,
        iterations: dual.iterations,
        deltas: dual.point.delta.clone(),
        lambdas: constraint_multipliers(prog, &dual.point.delta),
    }
}

fn primal_doc(primal: &PrimalSolution) -> PrimalDoc {
    PrimalDoc {
        x: primal.x.clone(),
        objectives: primal.objective_values.clone(),
        z: primal.scalarized_objective,
        unique: primal.unique,
    }
}

pub fn point_doc(
    prog: &MultiObjectiveProgram,
    weights: &[f64],
    result: &Result<ParetoPoint>,
    nondominated: Option<bool>,
) -> PointDoc {
    match result {
        Ok(point) => PointDoc {
            weights: weights.to_vec(),
            status: point.dual.status.to_string(),
            error: None,
            dual: Some(dual_doc(prog, &point.dual)),
            primal: Some(primal_doc(&point.primal)),
            nondominated,
        },
        Err(e) => PointDoc {
            weights: weights.to_vec(),
            status: "error".into(),
            error: Some(e.to_string()),
            dual: None,
            primal: None,
            nondominated,
        },
    }
}

fn ideal_docs(ideal: &[Result<IdealPoint>]) -> Vec<IdealDoc> {
    ideal
        .iter()
        .enumerate()
        .map(|(k, r)| match r {
            Ok(p) => IdealDoc {
                objective: k + 1,
                status: "optimal".into(),
                error: None,
                value: Some(p.value),
                x: Some(p.x.clone()),
                unique: Some(p.unique),
            },
            Err(e) => IdealDoc {
                objective: k + 1,
                status: "error".into(),
                error: Some(e.to_string()),
                value: None,
                x: None,
                unique: None,
            },
        })
        .collect()
}

pub fn report_from_sweep(
    prog: &MultiObjectiveProgram,
    report: &SweepReport,
    opts: &SolverOptions,
) -> ReportDocument {
    ReportDocument {
        version: env!("CARGO_PKG_VERSION").into(),
        options: opts.into(),
        points: report
            .entries
            .iter()
            .zip(&report.nondominated)
            .map(|(e, &nd)| point_doc(prog, e.weights.values(), &e.result, Some(nd)))
            .collect(),
        ideal: Some(ideal_docs(&report.ideal)),
    }
}

pub fn report_from_point(
    prog: &MultiObjectiveProgram,
    weights: &[f64],
    result: &Result<ParetoPoint>,
    opts: &SolverOptions,
) -> ReportDocument {
    ReportDocument {
        version: env!("CARGO_PKG_VERSION").into(),
        options: opts.into(),
        points: vec![point_doc(prog, weights, result, None)],
        ideal: None,
    }
}

pub fn report_from_ideal(
    ideal: &[Result<IdealPoint>],
    opts: &SolverOptions,
) -> ReportDocument {
    ReportDocument {
        version: env!("CARGO_PKG_VERSION").into(),
        options: opts.into(),
        points: Vec::new(),
        ideal: Some(ideal_docs(ideal)),
    }
}
