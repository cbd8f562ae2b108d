//! Maximizes the concave log-dual over the intersection of the equality
//! manifold and the nonnegative orthant: phase-one simplex start, projected
//! Newton ascent on the free face, and multiplier-based release tests for
//! pinned coordinates. Zero-difficulty programs with a full-rank equality
//! system are solved directly.

use crate::dual::{build_dual, DualPoint, DualProgram};
use crate::error::{Error, InfeasibilityKind, Result};
use crate::linalg::{cholesky_solve, lstsq_min_norm, nullspace, ColPivQr};
use crate::scalarize::ScalarizedProgram;
use crate::simplex::{solve_max, LpOutcome};
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    pub gradient_tolerance: f64,
    pub equality_tolerance: f64,
    pub active_threshold: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            gradient_tolerance: 1e-9,
            equality_tolerance: 1e-10,
            active_threshold: 1e-7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverStatus {
    /// Equality residual within tolerance and reduced gradient norm at most
    /// `gradient_tolerance` on the free coordinates.
    Optimal,
    /// Stopped without certifying optimality (iteration cap or the numeric
    /// noise floor of double precision).
    MaxIterations,
}

impl std::fmt::Display for SolverStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolverStatus::Optimal => write!(f, "optimal"),
            SolverStatus::MaxIterations => write!(f, "max-iterations"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DualSolution {
    pub point: DualPoint,
    /// `exp` of the log-dual at the returned point.
    pub value: f64,
    pub status: SolverStatus,
    pub reduced_gradient_norm: f64,
    pub iterations: usize,
}

/// Phase-one start: maximizes the minimum dual component subject to the
/// equality system. A zero minimum is accepted (the point then rests on the
/// boundary); failure certifies which kind of infeasibility occurred.
pub fn find_interior_point(dp: &DualProgram) -> Result<DualPoint> {
    let (delta, _) = phase_one(dp)?;
    Ok(DualPoint { delta: delta.iter().copied().collect() })
}

fn phase_one(dp: &DualProgram) -> Result<(DVector<f64>, f64)> {
    let e = dp.equality();
    let (rows, t) = e.shape();
    let mut a = DMatrix::<f64>::zeros(rows, t + 2);
    a.view_range_mut(0..rows, 0..t).copy_from(e);
    let esum = e * DVector::from_element(t, 1.0);
    for i in 0..rows {
        a[(i, t)] = esum[i];
        a[(i, t + 1)] = -esum[i];
    }
    let mut c = DVector::<f64>::zeros(t + 2);
    c[t] = 1.0;
    c[t + 1] = -1.0;
    match solve_max(&a, dp.rhs(), &c) {
        LpOutcome::Infeasible => {
            Err(Error::DualInfeasible(InfeasibilityKind::InconsistentEqualities))
        }
        LpOutcome::Unbounded => unreachable!("normality bounds the phase-one objective"),
        LpOutcome::Optimal { x, .. } => {
            let s = x[t] - x[t + 1];
            if s < -1e-9 {
                return Err(Error::DualInfeasible(InfeasibilityKind::NoNonnegativeSolution));
            }
            let delta = DVector::from_fn(t, |i, _| x[i] + s);
            Ok((delta, s))
        }
    }
}

/// Convenience: builds the dual of a scalarized program and solves it.
pub fn solve_scalarized(sp: &ScalarizedProgram, opts: &SolverOptions) -> Result<DualSolution> {
    solve_dual(&build_dual(sp), opts)
}

pub fn solve_dual(dp: &DualProgram, opts: &SolverOptions) -> Result<DualSolution> {
    if opts.max_iterations == 0 {
        return Err(Error::InvalidModel("max_iterations must be at least 1".into()));
    }
    if dp.degree_of_difficulty() == 0 {
        if let Some(sol) = solve_direct(dp, opts)? {
            return Ok(sol);
        }
    }
    let mut trace = Vec::new();
    ascend(dp, opts, &mut trace)
}

#[cfg(test)]
pub(crate) fn solve_dual_traced(
    dp: &DualProgram,
    opts: &SolverOptions,
) -> Result<(DualSolution, Vec<f64>)> {
    let mut trace = Vec::new();
    let sol = ascend(dp, opts, &mut trace)?;
    Ok((sol, trace))
}

/// Zero degree of difficulty with a full-rank square system: the dual point
/// is the unique solution of `E d = r`, and any negative component proves
/// dual infeasibility.
fn solve_direct(dp: &DualProgram, opts: &SolverOptions) -> Result<Option<DualSolution>> {
    let e = dp.equality();
    let t = dp.num_terms();
    let rowmax = (0..e.nrows()).map(|i| e.row(i).norm()).fold(0.0, f64::max);
    let qr = ColPivQr::new(e);
    if qr.rank(1e-12 * rowmax.max(1.0)) < t {
        return Ok(None);
    }
    let sol = lstsq_min_norm(e, dp.rhs());
    let mut delta: Vec<f64> = sol.x.iter().copied().collect();
    for v in &mut delta {
        if *v < 0.0 {
            if *v < -1e-12 {
                return Err(Error::DualInfeasible(InfeasibilityKind::NoNonnegativeSolution));
            }
            *v = 0.0;
        }
    }
    let f = dp.log_dual_objective(&delta)?;
    let status = if dp.equality_residual(&delta) <= opts.equality_tolerance {
        SolverStatus::Optimal
    } else {
        SolverStatus::MaxIterations
    };
    Ok(Some(DualSolution {
        point: DualPoint { delta },
        value: f.exp(),
        status,
        reduced_gradient_norm: 0.0,
        iterations: 0,
    }))
}

fn dvec(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

fn select_columns(e: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(e.nrows(), idx.len(), |i, j| e[(i, idx[j])])
}

/// Kernel basis of the free columns of `E`, embedded into term space with
/// exact zeros at pinned coordinates.
fn nullspace_free(e: &DMatrix<f64>, free: &[usize], t: usize) -> DMatrix<f64> {
    if free.is_empty() {
        return DMatrix::zeros(t, 0);
    }
    let ef = select_columns(e, free);
    let rowmax = (0..ef.nrows()).map(|i| ef.row(i).norm()).fold(0.0, f64::max);
    let nf = nullspace(&ef, 1e-12 * rowmax.max(1.0));
    let mut n = DMatrix::<f64>::zeros(t, nf.ncols());
    for (j, &i) in free.iter().enumerate() {
        n.row_mut(i).copy_from(&nf.row(j));
    }
    n
}

/// Gradient over free coordinates with positive mass; other entries zero.
fn masked_gradient(dp: &DualProgram, d: &[f64], pinned: &[bool]) -> Vec<f64> {
    let c = dp.coefficients();
    let mut g = vec![0.0; d.len()];
    for t in 0..d.len() {
        if !pinned[t] && d[t] > 0.0 {
            g[t] = c[t].ln() - d[t].ln() - 1.0;
        }
    }
    for grp in &dp.groups()[1..] {
        let lam: f64 = grp.iter().map(|&t| d[t]).sum();
        if lam > 0.0 {
            for &t in grp {
                if !pinned[t] {
                    g[t] += lam.ln() + 1.0;
                }
            }
        }
    }
    g
}

fn masked_hessian(dp: &DualProgram, d: &[f64], pinned: &[bool]) -> DMatrix<f64> {
    let t = d.len();
    let mut h = DMatrix::<f64>::zeros(t, t);
    for i in 0..t {
        if !pinned[i] && d[i] > 0.0 {
            h[(i, i)] = -1.0 / d[i];
        }
    }
    for grp in &dp.groups()[1..] {
        let lam: f64 = grp.iter().map(|&i| d[i]).sum();
        if lam <= 0.0 {
            continue;
        }
        for &s in grp {
            for &t2 in grp {
                if !pinned[s] && !pinned[t2] {
                    h[(s, t2)] += 1.0 / lam;
                }
            }
        }
    }
    h
}

enum ReleaseMove {
    Single { term: usize, ln_dhat: f64 },
    Group { group: usize, composition: Vec<f64> },
}

fn ascend(dp: &DualProgram, opts: &SolverOptions, trace: &mut Vec<f64>) -> Result<DualSolution> {
    let t = dp.num_terms();
    let e = dp.equality();
    let r = dp.rhs();
    let c = dp.coefficients();
    let act = opts.active_threshold;

    let (d0, s) = phase_one(dp)?;
    let mut d: Vec<f64> = d0.iter().map(|&v| v.max(0.0)).collect();
    let mut pinned = vec![false; t];
    if s <= act {
        for i in 0..t {
            if d0[i] <= act {
                pinned[i] = true;
                d[i] = 0.0;
            }
        }
    }
    let mut releases = vec![0usize; t];
    let mut stall = 0usize;
    let mut best_rgn = f64::INFINITY;
    let mut nit = 0usize;

    for _ in 0..opts.max_iterations {
        nit += 1;
        let free: Vec<usize> = (0..t).filter(|&i| !pinned[i]).collect();

        if !free.is_empty() {
            let resid = e * dvec(&d) - r;
            if resid.norm() > 1e-14 {
                let corr = lstsq_min_norm(&select_columns(e, &free), &resid).x;
                for (j, &i) in free.iter().enumerate() {
                    d[i] -= corr[j];
                }
                for v in &mut d {
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
                for i in 0..t {
                    if pinned[i] {
                        d[i] = 0.0;
                    }
                }
            }
        }

        let n = nullspace_free(e, &free, t);
        let g = masked_gradient(dp, &d, &pinned);
        let red = n.transpose() * dvec(&g);
        let rgn = if red.is_empty() { 0.0 } else { red.norm() };

        if rgn <= opts.gradient_tolerance {
            if !pinned.iter().any(|&p| p) {
                return finish(dp, d, rgn, nit, opts);
            }
            let mu = if free.is_empty() {
                DVector::zeros(e.nrows())
            } else {
                let g_free = DVector::from_fn(free.len(), |j, _| g[free[j]]);
                lstsq_min_norm(&select_columns(e, &free).transpose(), &g_free).x
            };
            let ln_act = act.ln();
            let mut best_sigma = -1e-8;
            let mut best: Option<ReleaseMove> = None;
            for ti in 0..t {
                if !pinned[ti] || releases[ti] >= 3 {
                    continue;
                }
                let gi = dp.group_of()[ti];
                let lam: f64 = if gi > 0 {
                    dp.groups()[gi].iter().map(|&x| d[x]).sum()
                } else {
                    0.0
                };
                if gi > 0 && lam <= 0.0 {
                    continue;
                }
                let emu = e.column(ti).dot(&mu);
                let ln_dhat = if gi == 0 {
                    c[ti].ln() - 1.0 - emu
                } else {
                    c[ti].ln() + lam.ln() - emu
                };
                if ln_dhat < ln_act {
                    continue;
                }
                let sigma = ln_act - ln_dhat;
                if sigma < best_sigma {
                    best_sigma = sigma;
                    best = Some(ReleaseMove::Single { term: ti, ln_dhat });
                }
            }
            for gi in 1..dp.groups().len() {
                let grp = &dp.groups()[gi];
                let lam: f64 = grp.iter().map(|&x| d[x]).sum();
                if lam > 0.0 || !grp.iter().all(|&x| pinned[x]) {
                    continue;
                }
                if grp.iter().any(|&x| releases[x] >= 3) {
                    continue;
                }
                let ln_scores: Vec<f64> =
                    grp.iter().map(|&x| c[x].ln() - e.column(x).dot(&mu)).collect();
                let peak = ln_scores.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
                let lse = peak + ln_scores.iter().map(|v| (v - peak).exp()).sum::<f64>().ln();
                let sigma = -lse;
                if sigma < best_sigma {
                    let mut u: Vec<f64> = ln_scores.iter().map(|v| (v - peak).exp()).collect();
                    let total: f64 = u.iter().sum();
                    for v in &mut u {
                        *v /= total;
                    }
                    best_sigma = sigma;
                    best = Some(ReleaseMove::Group { group: gi, composition: u });
                }
            }
            let Some(mv) = best else {
                return finish(dp, d, rgn, nit, opts);
            };
            let f0 = dp.log_dual_objective(&d)?;
            let (dirv, members, target) = match mv {
                ReleaseMove::Single { term, ln_dhat } => {
                    pinned[term] = false;
                    let free2: Vec<usize> = (0..t).filter(|&i| !pinned[i]).collect();
                    let n2 = nullspace_free(e, &free2, t);
                    let dirv = &n2 * n2.row(term).transpose();
                    if dirv[term] < 1e-12 {
                        pinned[term] = true;
                        return finish(dp, d, rgn, nit, opts);
                    }
                    let target = ln_dhat.min(0.0).exp().min(0.1) / dirv[term];
                    let dirv: Vec<f64> = dirv.iter().copied().collect();
                    (dirv, vec![term], target)
                }
                ReleaseMove::Group { group, composition } => {
                    let grp = &dp.groups()[group];
                    let mut u = vec![0.0; t];
                    for (k, &ti) in grp.iter().enumerate() {
                        u[ti] = composition[k];
                    }
                    let rhs_val = -(e * dvec(&u));
                    let vfree = lstsq_min_norm(&select_columns(e, &free), &rhs_val).x;
                    let mut dirv = u;
                    for (j, &i) in free.iter().enumerate() {
                        dirv[i] = vfree[j];
                    }
                    let dir_norm = dvec(&dirv).norm();
                    if (e * dvec(&dirv)).norm() > 1e-8 * dir_norm.max(1.0) {
                        return finish(dp, d, rgn, nit, opts);
                    }
                    for &ti in grp {
                        pinned[ti] = false;
                    }
                    (dirv, grp.clone(), 0.1)
                }
            };
            let mut amax = f64::INFINITY;
            for i in 0..t {
                if dirv[i] < 0.0 && d[i] > 0.0 {
                    amax = amax.min(d[i] / -dirv[i]);
                }
            }
            let mut a = target.min(0.5 * amax);
            let mut improved = false;
            for _ in 0..80 {
                let mut dt = d.clone();
                for i in 0..t {
                    dt[i] += a * dirv[i];
                }
                if dp.log_dual_objective(&dt).map_or(false, |f| f > f0) {
                    improved = true;
                    break;
                }
                a *= 0.5;
            }
            if !improved {
                for &ti in &members {
                    pinned[ti] = true;
                }
                return finish(dp, d, rgn, nit, opts);
            }
            for &ti in &members {
                releases[ti] += 1;
            }
            for i in 0..t {
                d[i] += a * dirv[i];
            }
            for i in 0..t {
                if pinned[i] {
                    d[i] = 0.0;
                }
            }
            trace.push(dp.log_dual_objective(&d)?);
            continue;
        }

        let h = masked_hessian(dp, &d, &pinned);
        let hr = n.transpose() * &h * &n;
        let hscale = (0..hr.nrows()).map(|i| hr[(i, i)].abs()).fold(0.0, f64::max).max(1.0);
        let pivot_tol = 1e-12 * hscale;
        let neg_hr = -&hr;
        let mut dz = cholesky_solve(&neg_hr, &red, pivot_tol);
        let mut ridge = 1e-10 * hscale;
        while dz.is_none() && ridge <= 1e4 * hscale {
            let m = &neg_hr + DMatrix::<f64>::identity(hr.nrows(), hr.nrows()) * ridge;
            dz = cholesky_solve(&m, &red, pivot_tol);
            ridge *= 100.0;
        }
        let mut dd = match dz {
            Some(z) => &n * z,
            None => &n * &red,
        };
        let g_vec = dvec(&g);
        if dd.dot(&g_vec) <= 0.0 {
            dd = &n * &red;
        }
        for i in 0..t {
            if pinned[i] {
                dd[i] = 0.0;
            }
        }
        let mut amax = f64::INFINITY;
        for &i in &free {
            if dd[i] < 0.0 && d[i] > 0.0 {
                amax = amax.min(d[i] / -dd[i]);
            }
        }
        let mut a = 1.0f64.min(0.99 * amax);
        let f0 = dp.log_dual_objective(&d)?;
        let g_dd = g_vec.dot(&dd);
        let mut accepted = false;
        while a > 1e-20 {
            let mut dt = d.clone();
            for i in 0..t {
                dt[i] += a * dd[i];
            }
            if dp.log_dual_objective(&dt).map_or(false, |f| f >= f0 + 1e-4 * a * g_dd) {
                accepted = true;
                break;
            }
            a *= 0.5;
        }
        if !accepted {
            return finish(dp, d, rgn, nit, opts);
        }
        for i in 0..t {
            d[i] += a * dd[i];
        }
        for i in 0..t {
            if pinned[i] {
                d[i] = 0.0;
            }
        }
        let f1 = dp.log_dual_objective(&d)?;
        trace.push(f1);
        let gain = f1 - f0;
        if gain > 0.0 && d.iter().any(|&v| v > 1e8) {
            return Err(Error::Unbounded);
        }
        if gain <= 1e-15 * (1.0 + f0.abs()) && rgn >= 0.9 * best_rgn {
            stall += 1;
            if stall >= 5 {
                return finish(dp, d, rgn, nit, opts);
            }
        } else {
            stall = 0;
        }
        best_rgn = best_rgn.min(rgn);

        let newly: Vec<usize> = (0..t).filter(|&i| !pinned[i] && d[i] < act).collect();
        if !newly.is_empty() {
            for &i in &newly {
                d[i] = 0.0;
                pinned[i] = true;
            }
            let still_free: Vec<usize> = (0..t).filter(|&i| !pinned[i]).collect();
            if !still_free.is_empty() {
                let resid = e * dvec(&d) - r;
                let corr = lstsq_min_norm(&select_columns(e, &still_free), &resid).x;
                for (j, &i) in still_free.iter().enumerate() {
                    d[i] -= corr[j];
                }
                for v in &mut d {
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
                for i in 0..t {
                    if pinned[i] {
                        d[i] = 0.0;
                    }
                }
            }
        }
    }

    let free: Vec<usize> = (0..t).filter(|&i| !pinned[i]).collect();
    let n = nullspace_free(e, &free, t);
    let red = n.transpose() * dvec(&masked_gradient(dp, &d, &pinned));
    let rgn = if red.is_empty() { 0.0 } else { red.norm() };
    finish(dp, d, rgn, nit, opts)
}

fn finish(
    dp: &DualProgram,
    mut d: Vec<f64>,
    rgn: f64,
    nit: usize,
    opts: &SolverOptions,
) -> Result<DualSolution> {
    for v in &mut d {
        if *v < 0.0 {
            debug_assert!(*v >= -1e-14, "negative dual weight {v} beyond clamp range");
            *v = 0.0;
        }
    }
    let f = dp.log_dual_objective(&d)?;
    let status = if rgn <= opts.gradient_tolerance
        && dp.equality_residual(&d) <= opts.equality_tolerance
    {
        SolverStatus::Optimal
    } else {
        SolverStatus::MaxIterations
    };
    Ok(DualSolution {
        point: DualPoint { delta: d },
        value: f.exp(),
        status,
        reduced_gradient_norm: rgn,
        iterations: nit,
    })
}
