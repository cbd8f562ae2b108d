//! Weighted-sum scalarization of a multi-objective program into a single
//! posynomial objective, plus simplex-lattice weight grids for sweeps.

use crate::error::{Error, Result};
use crate::model::{Monomial, MultiObjectiveProgram, Posynomial, VariableSpace};

/// Strictly positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceWeights {
    w: Vec<f64>,
}

impl PreferenceWeights {
    /// Requires every weight `> 0` and `|sum - 1| <= 1e-12`.
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidWeights("weights must be non-empty".into()));
        }
        if w.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidWeights("all weights must be strictly positive".into()));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!(
                "weights must sum to 1, got {sum:.15}"
            )));
        }
        Ok(Self { w })
    }

    pub fn values(&self) -> &[f64] {
        &self.w
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }
}

/// Where a scalarized objective term came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermOrigin {
    /// Objective index `k`.
    pub objective: usize,
    /// Term index within that objective.
    pub term: usize,
    /// Coefficient before weighting.
    pub coefficient: f64,
}

/// Single-objective standard-form program `min sum_k w_k g_k0` with the
/// originating objective recorded for every term.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarizedProgram {
    variables: VariableSpace,
    objective: Posynomial,
    constraints: Vec<Posynomial>,
    weights: PreferenceWeights,
    origins: Vec<TermOrigin>,
}

impl ScalarizedProgram {
    pub fn variables(&self) -> &VariableSpace {
        &self.variables
    }

    pub fn objective(&self) -> &Posynomial {
        &self.objective
    }

    pub fn constraints(&self) -> &[Posynomial] {
        &self.constraints
    }

    pub fn weights(&self) -> &PreferenceWeights {
        &self.weights
    }

    /// One entry per objective term, ordered like `objective().terms()`.
    pub fn origins(&self) -> &[TermOrigin] {
        &self.origins
    }

    pub fn num_objectives(&self) -> usize {
        self.weights.len()
    }

    pub fn total_terms(&self) -> usize {
        self.objective.num_terms()
            + self.constraints.iter().map(Posynomial::num_terms).sum::<usize>()
    }

    pub fn degree_of_difficulty(&self) -> i64 {
        self.total_terms() as i64 - self.variables.len() as i64 - 1
    }

    /// Per-objective values of the unweighted standard-form objectives at `x`.
    pub fn objective_values(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut vals = vec![0.0; self.num_objectives()];
        for (term, origin) in self.objective.terms().iter().zip(&self.origins) {
            let m = Monomial::new(origin.coefficient, term.exponents().to_vec())?;
            vals[origin.objective] += m.eval(x)?;
        }
        Ok(vals)
    }
}

/// Builds `min sum_k w_k g_k0` keeping constraints unchanged. Terms are
/// ordered by objective index, then by term index; terms with identical
/// exponents are kept separate.
pub fn scalarize(
    prog: &MultiObjectiveProgram,
    weights: &PreferenceWeights,
) -> Result<ScalarizedProgram> {
    if weights.len() != prog.num_objectives() {
        return Err(Error::DimensionMismatch {
            expected: prog.num_objectives(),
            got: weights.len(),
        });
    }
    let mut terms = Vec::new();
    let mut origins = Vec::new();
    for (k, (g, &w)) in prog.objectives().iter().zip(weights.values()).enumerate() {
        for (t, term) in g.terms().iter().enumerate() {
            terms.push(Monomial::new(w * term.coefficient(), term.exponents().to_vec())?);
            origins.push(TermOrigin { objective: k, term: t, coefficient: term.coefficient() });
        }
    }
    Ok(ScalarizedProgram {
        variables: prog.variables().clone(),
        objective: Posynomial::new(terms)?,
        constraints: prog.constraints().to_vec(),
        weights: weights.clone(),
        origins,
    })
}

/// All simplex lattice points with spacing `step` whose coordinates are all
/// `>= step`, in lexicographic order. `1/step` must be an integer within
/// `1e-9`.
pub fn weight_grid(p: usize, step: f64) -> Result<Vec<PreferenceWeights>> {
    if p == 0 {
        return Err(Error::InvalidWeights("grid needs at least one objective".into()));
    }
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::InvalidWeights(format!("step must be in (0, 1), got {step}")));
    }
    let m = (1.0 / step).round();
    if (1.0 / step - m).abs() > 1e-9 {
        return Err(Error::InvalidWeights(format!("1/step must be an integer, got {}", 1.0 / step)));
    }
    let m = m as u64;
    let mut out = Vec::new();
    let mut counts = vec![0u64; p];
    fill(&mut out, &mut counts, 0, m, p as u64, m);
    out.into_iter().map(PreferenceWeights::new).collect()
}

fn fill(
    out: &mut Vec<Vec<f64>>,
    counts: &mut [u64],
    pos: usize,
    remaining: u64,
    slots_left: u64,
    m: u64,
) {
    if slots_left == 1 {
        if remaining >= 1 {
            counts[pos] = remaining;
            out.push(counts.iter().map(|&k| k as f64 / m as f64).collect());
        }
        return;
    }
    if remaining < slots_left {
        return;
    }
    for k in 1..=remaining - (slots_left - 1) {
        counts[pos] = k;
        fill(out, counts, pos + 1, remaining - k, slots_left - 1, m);
    }
}
