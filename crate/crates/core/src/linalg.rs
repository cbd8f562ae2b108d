//! Dense factorizations used by the dual solver: Householder QR with column
//! pivoting (full Q, so orthogonal complements are available), nullspace
//! bases, minimum-norm least squares via complete orthogonal decomposition,
//! and a Cholesky that refuses pivots below a threshold instead of producing
//! garbage directions on singular systems.

use nalgebra::{DMatrix, DVector};

/// `A P = Q R` with `Q` square orthogonal and `R` upper trapezoidal, columns
/// pivoted so the diagonal of `R` is non-increasing in magnitude.
pub struct ColPivQr {
    q: DMatrix<f64>,
    r: DMatrix<f64>,
    perm: Vec<usize>,
}

impl ColPivQr {
    pub fn new(a: &DMatrix<f64>) -> Self {
        let (m, n) = a.shape();
        let mut r = a.clone();
        let mut q = DMatrix::<f64>::identity(m, m);
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..m.min(n) {
            let mut best = k;
            let mut best_norm = 0.0;
            for j in k..n {
                let nrm = r.view_range(k..m, j..j + 1).norm_squared();
                if nrm > best_norm {
                    best_norm = nrm;
                    best = j;
                }
            }
            if best_norm == 0.0 {
                break;
            }
            if best != k {
                r.swap_columns(k, best);
                perm.swap(k, best);
            }
            let mut u: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
            let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
            let alpha = if u[0] >= 0.0 { -norm } else { norm };
            u[0] -= alpha;
            let unorm2 = u.iter().map(|v| v * v).sum::<f64>();
            if unorm2 > 0.0 {
                let scale = 2.0 / unorm2;
                for j in k..n {
                    let mut w = 0.0;
                    for (off, ui) in u.iter().enumerate() {
                        w += ui * r[(k + off, j)];
                    }
                    w *= scale;
                    for (off, ui) in u.iter().enumerate() {
                        r[(k + off, j)] -= w * ui;
                    }
                }
                for i in 0..m {
                    let mut w = 0.0;
                    for (off, ui) in u.iter().enumerate() {
                        w += q[(i, k + off)] * ui;
                    }
                    w *= scale;
                    for (off, ui) in u.iter().enumerate() {
                        q[(i, k + off)] -= w * ui;
                    }
                }
            }
            r[(k, k)] = alpha;
            for i in k + 1..m {
                r[(i, k)] = 0.0;
            }
        }
        Self { q, r, perm }
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn r(&self) -> &DMatrix<f64> {
        &self.r
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Number of diagonal entries of `R` exceeding `tol` in magnitude.
    pub fn rank(&self, tol: f64) -> usize {
        let k = self.r.nrows().min(self.r.ncols());
        (0..k).take_while(|&i| self.r[(i, i)].abs() > tol).count()
    }
}

/// Orthonormal basis of the kernel of `a` (an `ncols x k` matrix), using a
/// full-Q pivoted QR of the transpose. Diagonal entries of `R` at or below
/// `tol` count as zero.
pub fn nullspace(a: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = a.ncols();
    let qr = ColPivQr::new(&a.transpose());
    let rank = qr.rank(tol);
    let mut basis = DMatrix::<f64>::zeros(n, n - rank);
    for (j, col) in (rank..n).enumerate() {
        basis.set_column(j, &qr.q().column(col));
    }
    basis
}

pub struct Lstsq {
    pub x: DVector<f64>,
    pub rank: usize,
}

/// Minimum-norm least-squares solution of `a x = b` via complete orthogonal
/// decomposition, with an epsilon-scaled rank cutoff.
pub fn lstsq_min_norm(a: &DMatrix<f64>, b: &DVector<f64>) -> Lstsq {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Lstsq { x: DVector::zeros(n), rank: 0 };
    }
    let qr = ColPivQr::new(a);
    let tol = f64::EPSILON * m.max(n) as f64 * qr.r()[(0, 0)].abs().max(f64::MIN_POSITIVE);
    let rank = qr.rank(tol);
    if rank == 0 {
        return Lstsq { x: DVector::zeros(n), rank: 0 };
    }
    let c = qr.q().transpose() * b;
    let c1 = c.rows(0, rank).clone_owned();
    let r1t = qr.r().rows(0, rank).transpose();
    let inner = ColPivQrNoPivot::new(&r1t);
    let t2 = inner.r.view_range(0..rank, 0..rank).clone_owned();
    let w = t2
        .transpose()
        .solve_lower_triangular(&c1)
        .expect("triangular factor of a full-row-rank block is invertible");
    let y = inner.q.columns(0, rank) * w;
    let mut x = DVector::zeros(n);
    for (j, &pj) in qr.permutation().iter().enumerate() {
        x[pj] = y[j];
    }
    Lstsq { x, rank }
}

/// Householder QR without pivoting, full Q. Used for the inner factorization
/// of the complete orthogonal decomposition, where the input already has full
/// column rank.
struct ColPivQrNoPivot {
    q: DMatrix<f64>,
    r: DMatrix<f64>,
}

impl ColPivQrNoPivot {
    fn new(a: &DMatrix<f64>) -> Self {
        let (m, n) = a.shape();
        let mut r = a.clone();
        let mut q = DMatrix::<f64>::identity(m, m);
        for k in 0..m.min(n) {
            let mut u: Vec<f64> = (k..m).map(|i| r[(i, k)]).collect();
            let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let alpha = if u[0] >= 0.0 { -norm } else { norm };
            u[0] -= alpha;
            let unorm2 = u.iter().map(|v| v * v).sum::<f64>();
            if unorm2 > 0.0 {
                let scale = 2.0 / unorm2;
                for j in k..n {
                    let mut w = 0.0;
                    for (off, ui) in u.iter().enumerate() {
                        w += ui * r[(k + off, j)];
                    }
                    w *= scale;
                    for (off, ui) in u.iter().enumerate() {
                        r[(k + off, j)] -= w * ui;
                    }
                }
                for i in 0..m {
                    let mut w = 0.0;
                    for (off, ui) in u.iter().enumerate() {
                        w += q[(i, k + off)] * ui;
                    }
                    w *= scale;
                    for (off, ui) in u.iter().enumerate() {
                        q[(i, k + off)] -= w * ui;
                    }
                }
            }
            r[(k, k)] = alpha;
            for i in k + 1..m {
                r[(i, k)] = 0.0;
            }
        }
        Self { q, r }
    }
}

/// Solves `a x = b` for symmetric positive definite `a`, returning `None` as
/// soon as any pivot drops below `pivot_tol`.
pub fn cholesky_solve(a: &DMatrix<f64>, b: &DVector<f64>, pivot_tol: f64) -> Option<DVector<f64>> {
    let m = a.nrows();
    let mut l = DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        let mut s = a[(j, j)];
        for k in 0..j {
            s -= l[(j, k)] * l[(j, k)];
        }
        if s < pivot_tol {
            return None;
        }
        l[(j, j)] = s.sqrt();
        for i in j + 1..m {
            let mut v = a[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / l[(j, j)];
        }
    }
    let y = l.solve_lower_triangular(b)?;
    l.transpose().solve_upper_triangular(&y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> DMatrix<f64> {
        DMatrix::from_fn(m, n, |_, _| rng.gen_range(-3.0..3.0))
    }

    #[test]
    fn qr_reconstructs_and_q_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = rng.gen_range(1..8);
            let n = rng.gen_range(1..8);
            let a = random_matrix(&mut rng, m, n);
            let qr = ColPivQr::new(&a);
            let mut ap = DMatrix::<f64>::zeros(m, n);
            for (j, &pj) in qr.permutation().iter().enumerate() {
                ap.set_column(j, &a.column(pj));
            }
            let err = (qr.q() * qr.r() - &ap).norm();
            assert!(err <= 1e-12 * a.norm().max(1.0), "reconstruction error {err}");
            let qtq = qr.q().transpose() * qr.q();
            assert!((qtq - DMatrix::<f64>::identity(m, m)).norm() <= 1e-12);
        }
    }

    #[test]
    fn nullspace_annihilates_and_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let m = rng.gen_range(1..6);
            let n = rng.gen_range(1..6);
            let r = rng.gen_range(1..=m.min(n));
            let a = random_matrix(&mut rng, m, r) * random_matrix(&mut rng, r, n);
            let tol = 1e-10 * a.norm().max(1.0);
            let ns = nullspace(&a, tol);
            assert_eq!(ns.ncols(), n - r, "kernel dimension");
            if ns.ncols() > 0 {
                assert!((&a * &ns).norm() <= 1e-8 * a.norm().max(1.0));
                let gram = ns.transpose() * &ns;
                assert!((gram - DMatrix::<f64>::identity(ns.ncols(), ns.ncols())).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn lstsq_matches_normal_equations_when_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let n = rng.gen_range(1..6);
            let m = rng.gen_range(n..n + 5);
            let a = random_matrix(&mut rng, m, n);
            let b = DVector::from_fn(m, |_, _| rng.gen_range(-2.0..2.0));
            let sol = lstsq_min_norm(&a, &b);
            if sol.rank < n {
                continue;
            }
            let ata = a.transpose() * &a;
            let atb = a.transpose() * &b;
            let direct = ata.lu().solve(&atb).unwrap();
            assert!((&sol.x - &direct).norm() <= 1e-8 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn lstsq_min_norm_is_orthogonal_to_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..50 {
            let n = rng.gen_range(2..6);
            let r = rng.gen_range(1..n);
            let m = rng.gen_range(r..r + 4);
            let a = random_matrix(&mut rng, m, r) * random_matrix(&mut rng, r, n);
            let b = DVector::from_fn(m, |_, _| rng.gen_range(-2.0..2.0));
            let sol = lstsq_min_norm(&a, &b);
            let ns = nullspace(&a, 1e-10 * a.norm().max(1.0));
            if ns.ncols() > 0 {
                let leak = (ns.transpose() * &sol.x).norm();
                assert!(leak <= 1e-8 * sol.x.norm().max(1.0), "kernel leak {leak}");
            }
        }
    }

    #[test]
    fn lstsq_solves_consistent_systems_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..50 {
            let m = rng.gen_range(1..5);
            let n = rng.gen_range(m..m + 4);
            let a = random_matrix(&mut rng, m, n);
            let x0 = DVector::from_fn(n, |_, _| rng.gen_range(-2.0..2.0));
            let b = &a * &x0;
            let sol = lstsq_min_norm(&a, &b);
            let resid = (&a * &sol.x - &b).amax();
            assert!(resid <= 1e-10 * b.amax().max(1.0), "residual {resid}");
        }
    }

    #[test]
    fn cholesky_solves_spd_and_rejects_singular() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..50 {
            let n = rng.gen_range(1..7);
            let m = random_matrix(&mut rng, n, n);
            let spd = m.transpose() * &m + DMatrix::<f64>::identity(n, n);
            let b = DVector::from_fn(n, |_, _| rng.gen_range(-2.0..2.0));
            let x = cholesky_solve(&spd, &b, 1e-12).unwrap();
            assert!((&spd * &x - &b).norm() <= 1e-9 * b.norm().max(1.0));
        }
        let singular = DMatrix::<f64>::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let b = DVector::from_column_slice(&[1.0, 1.0]);
        assert!(cholesky_solve(&singular, &b, 1e-12).is_none());
    }

    proptest! {
        #[test]
        fn qr_rank_never_exceeds_dims(
            vals in proptest::collection::vec(-5.0f64..5.0, 12),
        ) {
            let a = DMatrix::from_row_slice(3, 4, &vals);
            let qr = ColPivQr::new(&a);
            let rank = qr.rank(1e-12 * a.norm().max(1.0));
            prop_assert!(rank <= 3);
            let ns = nullspace(&a, 1e-12 * a.norm().max(1.0));
            prop_assert!((&a * &ns).norm() <= 1e-9 * a.norm().max(1.0));
        }
    }
}
