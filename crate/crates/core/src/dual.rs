//! Dual of a scalarized posynomial program: one dual variable per term, the
//! normality/orthogonality equality system, and the concave log-dual
//! objective with its gradient.

use crate::error::{Error, Result};
use crate::scalarize::ScalarizedProgram;
use nalgebra::{DMatrix, DVector};

/// A point in dual space, one weight per scalarized term.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPoint {
    pub delta: Vec<f64>,
}

/// Structure of the dual: coefficients and exponents in scalarized term
/// order, term-to-group assignment (group 0 is the objective, group `i >= 1`
/// is constraint `i`), and the equality system `E d = r` whose first row is
/// normality and whose remaining rows are the per-variable orthogonality
/// conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct DualProgram {
    coefficients: Vec<f64>,
    group_of: Vec<usize>,
    groups: Vec<Vec<usize>>,
    exponents: DMatrix<f64>,
    equality: DMatrix<f64>,
    rhs: DVector<f64>,
}

pub fn build_dual(sp: &ScalarizedProgram) -> DualProgram {
    let n = sp.variables().len();
    let mut coefficients = Vec::new();
    let mut group_of = Vec::new();
    let mut groups = vec![Vec::new()];
    let mut exp_rows: Vec<Vec<f64>> = Vec::new();
    for term in sp.objective().terms() {
        groups[0].push(coefficients.len());
        group_of.push(0);
        coefficients.push(term.coefficient());
        exp_rows.push(term.exponents().to_vec());
    }
    for (i, g) in sp.constraints().iter().enumerate() {
        let mut grp = Vec::new();
        for term in g.terms() {
            grp.push(coefficients.len());
            group_of.push(i + 1);
            coefficients.push(term.coefficient());
            exp_rows.push(term.exponents().to_vec());
        }
        groups.push(grp);
    }
    let t = coefficients.len();
    let exponents = DMatrix::from_fn(t, n, |i, j| exp_rows[i][j]);
    let mut equality = DMatrix::<f64>::zeros(n + 1, t);
    for &idx in &groups[0] {
        equality[(0, idx)] = 1.0;
    }
    for i in 0..t {
        for j in 0..n {
            equality[(j + 1, i)] = exponents[(i, j)];
        }
    }
    let mut rhs = DVector::<f64>::zeros(n + 1);
    rhs[0] = 1.0;
    DualProgram { coefficients, group_of, groups, exponents, equality, rhs }
}

impl DualProgram {
    pub fn num_terms(&self) -> usize {
        self.coefficients.len()
    }

    pub fn num_variables(&self) -> usize {
        self.exponents.ncols()
    }

    pub fn num_constraints(&self) -> usize {
        self.groups.len() - 1
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn group_of(&self) -> &[usize] {
        &self.group_of
    }

    /// `groups()[0]` lists objective terms; `groups()[i]` lists the terms of
    /// constraint `i`.
    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn exponents(&self) -> &DMatrix<f64> {
        &self.exponents
    }

    pub fn equality(&self) -> &DMatrix<f64> {
        &self.equality
    }

    pub fn rhs(&self) -> &DVector<f64> {
        &self.rhs
    }

    pub fn degree_of_difficulty(&self) -> i64 {
        self.num_terms() as i64 - self.num_variables() as i64 - 1
    }

    /// Group sums of `delta`, including the objective group at index 0.
    pub fn lambdas(&self, delta: &[f64]) -> Vec<f64> {
        self.groups
            .iter()
            .map(|grp| grp.iter().map(|&t| delta[t]).sum())
            .collect()
    }

    /// Equality residual `E d - r` in the infinity norm.
    pub fn equality_residual(&self, delta: &[f64]) -> f64 {
        let d = DVector::from_column_slice(delta);
        (&self.equality * d - &self.rhs).amax()
    }

    /// Concave log-dual objective, with `0 ln 0 = 0` on the boundary.
    /// Requires `delta >= 0` componentwise.
    pub fn log_dual_objective(&self, delta: &[f64]) -> Result<f64> {
        self.check_len(delta)?;
        if let Some(i) = delta.iter().position(|&d| d < 0.0 || !d.is_finite()) {
            return Err(Error::BoundaryPoint(format!(
                "dual weight {i} is {}, the log-dual needs nonnegative weights",
                delta[i]
            )));
        }
        let mut val = 0.0;
        for (&d, &c) in delta.iter().zip(&self.coefficients) {
            val += xlogy(d, c) - xlogy(d, d);
        }
        for grp in &self.groups[1..] {
            let lam: f64 = grp.iter().map(|&t| delta[t]).sum();
            val += xlogy(lam, lam);
        }
        Ok(val)
    }

    /// Gradient of the log-dual. Defined only strictly inside the positive
    /// orthant; any zero component is a boundary error.
    pub fn log_dual_gradient(&self, delta: &[f64]) -> Result<DVector<f64>> {
        self.check_len(delta)?;
        if let Some(i) = delta.iter().position(|&d| d <= 0.0 || !d.is_finite()) {
            return Err(Error::BoundaryPoint(format!(
                "dual weight {i} is {}, the gradient needs strictly positive weights",
                delta[i]
            )));
        }
        let mut g = DVector::<f64>::zeros(delta.len());
        for (t, (&d, &c)) in delta.iter().zip(&self.coefficients).enumerate() {
            g[t] = c.ln() - d.ln() - 1.0;
        }
        for grp in &self.groups[1..] {
            let lam: f64 = grp.iter().map(|&t| delta[t]).sum();
            for &t in grp {
                g[t] += lam.ln() + 1.0;
            }
        }
        Ok(g)
    }

    fn check_len(&self, delta: &[f64]) -> Result<()> {
        if delta.len() != self.num_terms() {
            return Err(Error::DimensionMismatch {
                expected: self.num_terms(),
                got: delta.len(),
            });
        }
        Ok(())
    }
}

fn xlogy(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        a * b.ln()
    }
}
