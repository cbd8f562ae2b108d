//! Dense two-phase primal simplex with Bland's rule, sized for the small
//! equality-form feasibility programs that certify whether a dual program has
//! any nonnegative solution. Bland's rule guarantees termination, and phase
//! one produces an explicit infeasibility certificate (a strictly positive
//! artificial residual) rather than diverging.

use nalgebra::{DMatrix, DVector};

const RCOST_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;

#[derive(Debug)]
pub enum LpOutcome {
    Optimal { x: DVector<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    num_structural: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        *self.rows[i].last().unwrap()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = 1.0 / self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v *= inv;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = r[col];
            if factor != 0.0 {
                for (v, p) in r.iter_mut().zip(&pivot_row) {
                    *v -= factor * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland's-rule pivoting on the current cost row (the last row).
    /// Columns at `num_structural..limit` are eligible; returns false on
    /// unboundedness.
    fn optimize(&mut self, limit: usize) -> bool {
        let m = self.rows.len() - 1;
        loop {
            let cost = &self.rows[m];
            let entering = (0..limit).find(|&j| cost[j] > RCOST_TOL);
            let Some(col) = entering else { return true };
            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for i in 0..m {
                let a = self.rows[i][col];
                if a > PIVOT_TOL {
                    let ratio = (self.rhs(i) / a).max(0.0);
                    let better = ratio < best_ratio - 1e-12
                        || (ratio < best_ratio + 1e-12
                            && leave.is_some_and(|l| self.basis[i] < self.basis[l]));
                    if better {
                        best_ratio = ratio;
                        leave = Some(i);
                    }
                }
            }
            let Some(row) = leave else { return false };
            self.pivot(row, col);
        }
    }
}

/// Maximizes `c . x` subject to `a x = b`, `x >= 0`.
pub fn solve_max(a: &DMatrix<f64>, b: &DVector<f64>, c: &DVector<f64>) -> LpOutcome {
    let (m, n) = a.shape();
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);
    let total = n + m;
    let mut rows = Vec::with_capacity(m + 1);
    for i in 0..m {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut row = vec![0.0; total + 1];
        for j in 0..n {
            row[j] = sign * a[(i, j)];
        }
        row[n + i] = 1.0;
        row[total] = sign * b[i];
        rows.push(row);
    }
    let mut cost = vec![0.0; total + 1];
    for j in n..total {
        cost[j] = -1.0;
    }
    rows.push(cost);
    let mut tab = Tableau { rows, basis: (n..total).collect(), num_structural: n };
    for i in 0..m {
        let row = tab.rows[i].clone();
        let factor = tab.rows[m][tab.basis[i]];
        if factor != 0.0 {
            for (v, p) in tab.rows[m].iter_mut().zip(&row) {
                *v -= factor * p;
            }
        }
    }
    if !tab.optimize(total) {
        return LpOutcome::Unbounded;
    }
    let artificial_sum = tab.rows[m][total];
    if artificial_sum > 1e-8 {
        return LpOutcome::Infeasible;
    }

    let m_rows = tab.rows.len() - 1;
    let mut keep = Vec::new();
    for i in 0..m_rows {
        if tab.basis[i] >= tab.num_structural {
            let col = (0..tab.num_structural).find(|&j| tab.rows[i][j].abs() > RCOST_TOL);
            match col {
                Some(j) => tab.pivot(i, j),
                None => continue,
            }
        }
        keep.push(i);
    }
    if keep.len() != m_rows {
        let rows: Vec<Vec<f64>> = keep.iter().map(|&i| tab.rows[i].clone()).collect();
        let basis: Vec<usize> = keep.iter().map(|&i| tab.basis[i]).collect();
        let mut cost_row = tab.rows[m_rows].clone();
        cost_row.iter_mut().for_each(|v| *v = 0.0);
        let mut new_rows = rows;
        new_rows.push(cost_row);
        tab = Tableau { rows: new_rows, basis, num_structural: n };
    }

    let m_rows = tab.rows.len() - 1;
    let cost_idx = m_rows;
    for v in tab.rows[cost_idx].iter_mut() {
        *v = 0.0;
    }
    for j in 0..n {
        tab.rows[cost_idx][j] = c[j];
    }
    for i in 0..m_rows {
        let factor = tab.rows[cost_idx][tab.basis[i]];
        if factor != 0.0 {
            let row = tab.rows[i].clone();
            for (v, p) in tab.rows[cost_idx].iter_mut().zip(&row) {
                *v -= factor * p;
            }
        }
    }
    if !tab.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = DVector::<f64>::zeros(n);
    for i in 0..m_rows {
        if tab.basis[i] < n {
            x[tab.basis[i]] = tab.rhs(i).max(0.0);
        }
    }
    let objective = -tab.rows[cost_idx][total];
    LpOutcome::Optimal { x, objective }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, v: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, cols, v)
    }

    #[test]
    fn simple_bounded_maximum() {
        let a = mat(1, 3, &[1.0, 1.0, 1.0]);
        let b = DVector::from_column_slice(&[1.0]);
        let c = DVector::from_column_slice(&[2.0, 1.0, 0.0]);
        match solve_max(&a, &b, &c) {
            LpOutcome::Optimal { x, objective } => {
                assert!((objective - 2.0).abs() < 1e-9);
                assert!((x[0] - 1.0).abs() < 1e-9);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn detects_unbounded() {
        let a = mat(1, 2, &[1.0, -1.0]);
        let b = DVector::from_column_slice(&[0.0]);
        let c = DVector::from_column_slice(&[1.0, 0.0]);
        assert!(matches!(solve_max(&a, &b, &c), LpOutcome::Unbounded));
    }

    #[test]
    fn detects_infeasible() {
        let a = mat(1, 2, &[1.0, 1.0]);
        let b = DVector::from_column_slice(&[-1.0]);
        let c = DVector::from_column_slice(&[0.0, 0.0]);
        assert!(matches!(solve_max(&a, &b, &c), LpOutcome::Infeasible));
    }

    #[test]
    fn handles_redundant_rows() {
        let a = mat(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let b = DVector::from_column_slice(&[1.0, 1.0]);
        let c = DVector::from_column_slice(&[1.0, 0.0]);
        match solve_max(&a, &b, &c) {
            LpOutcome::Optimal { x, objective } => {
                assert!((objective - 1.0).abs() < 1e-9);
                assert!((x[0] - 1.0).abs() < 1e-9);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn negative_rhs_rows_are_normalized() {
        let a = mat(2, 2, &[-1.0, 0.0, 0.0, 1.0]);
        let b = DVector::from_column_slice(&[-2.0, 3.0]);
        let c = DVector::from_column_slice(&[1.0, 1.0]);
        match solve_max(&a, &b, &c) {
            LpOutcome::Optimal { x, objective } => {
                assert!((x[0] - 2.0).abs() < 1e-9);
                assert!((x[1] - 3.0).abs() < 1e-9);
                assert!((objective - 5.0).abs() < 1e-9);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_vertices_terminate() {
        let a = mat(2, 4, &[1.0, 1.0, 1.0, 0.0, 1.0, 2.0, 0.0, 1.0]);
        let b = DVector::from_column_slice(&[1.0, 1.0]);
        let c = DVector::from_column_slice(&[3.0, 2.0, 0.0, 0.0]);
        match solve_max(&a, &b, &c) {
            LpOutcome::Optimal { objective, .. } => {
                assert!((objective - 3.0).abs() < 1e-9);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }
}
