//! Posynomial program model: variables, monomials, posynomials, and the
//! conversion of raw min/max objectives and bounded constraints into the
//! standard form `min g_0(x)` subject to `g_i(x) <= 1`, `x > 0`.

use crate::error::{Error, Result};

/// Ordered list of strictly positive decision variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSpace {
    names: Vec<String>,
}

impl VariableSpace {
    /// Requires at least one variable and unique, non-empty names.
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidModel("variable space must be non-empty".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidModel(format!("variable {i} has an empty name")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidModel(format!("duplicate variable name '{name}'")));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// A single term `c * x1^a1 * ... * xn^an` with `c > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    coefficient: f64,
    exponents: Vec<f64>,
}

impl Monomial {
    pub fn new(coefficient: f64, exponents: Vec<f64>) -> Result<Self> {
        if !(coefficient > 0.0) || !coefficient.is_finite() {
            return Err(Error::InvalidModel(
                "posynomial coefficient must be positive".into(),
            ));
        }
        if exponents.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidModel("exponents must be finite".into()));
        }
        Ok(Self { coefficient, exponents })
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn arity(&self) -> usize {
        self.exponents.len()
    }

    /// Evaluates at `x > 0` componentwise.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.exponents.len() {
            return Err(Error::DimensionMismatch { expected: self.exponents.len(), got: x.len() });
        }
        let mut ln = self.coefficient.ln();
        for (j, (&a, &xj)) in self.exponents.iter().zip(x).enumerate() {
            if !(xj > 0.0) {
                return Err(Error::NonPositiveArgument { index: j, value: xj });
            }
            ln += a * xj.ln();
        }
        Ok(ln.exp())
    }

    /// The reciprocal `1/c * x^(-a)`, itself a monomial.
    pub fn reciprocal(&self) -> Monomial {
        Monomial {
            coefficient: 1.0 / self.coefficient,
            exponents: self.exponents.iter().map(|a| -a).collect(),
        }
    }
}

/// A positive sum of monomials over a common variable space.
#[derive(Debug, Clone, PartialEq)]
pub struct Posynomial {
    terms: Vec<Monomial>,
}

impl Posynomial {
    /// Requires at least one term; all terms must share one arity.
    pub fn new(terms: Vec<Monomial>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidModel("posynomial must have at least one term".into()));
        }
        let arity = terms[0].arity();
        if terms.iter().any(|t| t.arity() != arity) {
            return Err(Error::InvalidModel("all terms must have the same number of exponents".into()));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn arity(&self) -> usize {
        self.terms[0].arity()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let mut sum = 0.0;
        for t in &self.terms {
            sum += t.eval(x)?;
        }
        Ok(sum)
    }

    /// Scales every coefficient by `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Posynomial> {
        let terms = self
            .terms
            .iter()
            .map(|t| Monomial::new(t.coefficient * s, t.exponents.clone()))
            .collect::<Result<Vec<_>>>()?;
        Posynomial::new(terms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// An objective as stated by the user, before standardization.
#[derive(Debug, Clone, PartialEq)]
pub struct RawObjective {
    pub sense: Sense,
    pub posynomial: Posynomial,
}

impl RawObjective {
    /// Converts to an equivalent minimization. A maximization is convertible
    /// only when its posynomial is a single monomial, whose reciprocal is then
    /// minimized.
    pub fn standardized(&self, index: usize) -> Result<Posynomial> {
        match self.sense {
            Sense::Minimize => Ok(self.posynomial.clone()),
            Sense::Maximize => {
                if self.posynomial.num_terms() != 1 {
                    return Err(Error::NotConvertible(format!(
                        "objective {}: a maximization must be a single monomial to have a posynomial reciprocal",
                        index + 1
                    )));
                }
                Posynomial::new(vec![self.posynomial.terms()[0].reciprocal()])
            }
        }
    }
}

/// A constraint `g(x) <= bound` with `bound > 0`, before standardization.
#[derive(Debug, Clone, PartialEq)]
pub struct RawConstraint {
    posynomial: Posynomial,
    bound: f64,
}

impl RawConstraint {
    pub fn new(posynomial: Posynomial, bound: f64) -> Result<Self> {
        if !(bound > 0.0) || !bound.is_finite() {
            return Err(Error::InvalidModel("constraint bound must be positive".into()));
        }
        Ok(Self { posynomial, bound })
    }

    pub fn posynomial(&self) -> &Posynomial {
        &self.posynomial
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// `(1/bound) g(x) <= 1`.
    pub fn standardized(&self) -> Result<Posynomial> {
        self.posynomial.scaled(1.0 / self.bound)
    }
}

/// Standard-form multi-objective program: every objective is minimized and
/// every constraint is `g_i(x) <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiObjectiveProgram {
    variables: VariableSpace,
    objectives: Vec<Posynomial>,
    constraints: Vec<Posynomial>,
}

impl MultiObjectiveProgram {
    pub fn new(
        variables: VariableSpace,
        objectives: Vec<Posynomial>,
        constraints: Vec<Posynomial>,
    ) -> Result<Self> {
        if objectives.is_empty() {
            return Err(Error::InvalidModel("program must have at least one objective".into()));
        }
        let n = variables.len();
        for g in objectives.iter().chain(constraints.iter()) {
            if g.arity() != n {
                return Err(Error::DimensionMismatch { expected: n, got: g.arity() });
            }
        }
        Ok(Self { variables, objectives, constraints })
    }

    /// Standardizes raw objectives and constraints in place of the caller:
    /// maximizations become reciprocal minimizations, bounds are folded into
    /// coefficients.
    pub fn from_raw(
        variables: VariableSpace,
        objectives: &[RawObjective],
        constraints: &[RawConstraint],
    ) -> Result<Self> {
        let objectives = objectives
            .iter()
            .enumerate()
            .map(|(k, o)| o.standardized(k))
            .collect::<Result<Vec<_>>>()?;
        let constraints = constraints
            .iter()
            .map(|c| c.standardized())
            .collect::<Result<Vec<_>>>()?;
        Self::new(variables, objectives, constraints)
    }

    pub fn variables(&self) -> &VariableSpace {
        &self.variables
    }

    pub fn objectives(&self) -> &[Posynomial] {
        &self.objectives
    }

    pub fn constraints(&self) -> &[Posynomial] {
        &self.constraints
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_objectives(&self) -> usize {
        self.objectives.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn total_terms(&self) -> usize {
        self.objectives.iter().chain(self.constraints.iter()).map(Posynomial::num_terms).sum()
    }

    /// `T - n - 1` where `T` counts every term across objectives and
    /// constraints. Negative values are meaningful (overdetermined duals).
    pub fn degree_of_difficulty(&self) -> i64 {
        self.total_terms() as i64 - self.num_variables() as i64 - 1
    }
}
