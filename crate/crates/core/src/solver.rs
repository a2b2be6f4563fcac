//! Jacobi-preconditioned conjugate gradients and a dense Cholesky oracle.

use std::time::Instant;

use nalgebra::{DVector, SymmetricEigen};
use serde::Serialize;

use crate::exec::Execution;
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest system accepted by [`solve_dense`].
pub const DENSE_LIMIT: usize = 2000;

/// `20 √n + 200`.
pub fn default_maxit(n: usize) -> usize {
    (20.0 * (n as f64).sqrt()).ceil() as usize + 200
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    JacobiCg,
    DenseCholesky,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub method: Method,
    pub iterations: usize,
    /// `‖b − Ax‖ / ‖b‖`, recomputed from the returned iterate.
    pub relative_residual: f64,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgOptions {
    pub tol: f64,
    /// `None` means [`default_maxit`].
    pub maxit: Option<usize>,
    pub exec: Execution,
}

impl Default for CgOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            maxit: None,
            exec: Execution::default(),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn true_residual(a: &CsrMatrix, b: &[f64], x: &[f64], exec: Execution) -> Vec<f64> {
    let mut ax = vec![0.0; b.len()];
    a.mul_vec_into(x, &mut ax, exec);
    b.iter().zip(&ax).map(|(b, ax)| b - ax).collect()
}

pub fn solve_cg(a: &CsrMatrix, b: &[f64], opts: &CgOptions) -> Result<(Vec<f64>, SolveReport)> {
    solve_cg_observed(a, b, opts, |_, _| {})
}

/// CG that hands every iterate to `observer` (iteration 0 is the initial guess).
pub fn solve_cg_observed(
    a: &CsrMatrix,
    b: &[f64],
    opts: &CgOptions,
    mut observer: impl FnMut(usize, &[f64]),
) -> Result<(Vec<f64>, SolveReport)> {
    let start = Instant::now();
    let n = b.len();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{}, right-hand side has {n} entries",
            a.nrows(),
            a.ncols()
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::Breakdown("non-finite right-hand side".into()));
    }
    let maxit = opts.maxit.unwrap_or_else(|| default_maxit(n));
    let exec = opts.exec;
    let mut x = vec![0.0; n];
    observer(0, &x);
    let bnorm = norm(b);
    let report = |iterations, residual: f64, start: Instant| SolveReport {
        method: Method::JacobiCg,
        iterations,
        relative_residual: residual,
        seconds: start.elapsed().as_secs_f64(),
    };
    if bnorm == 0.0 {
        return Ok((x, report(0, 0.0, start)));
    }

    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut best = (f64::INFINITY, x.clone());

    for it in 1..=maxit {
        a.mul_vec_into(&p, &mut ap, exec);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) || !pap.is_finite() {
            return Err(Error::Breakdown(format!("pᵀAp = {pap:e} at iteration {it}")));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        observer(it, &x);
        if norm(&r) <= opts.tol * bnorm {
            // confirm against the true residual and restart from it if needed
            r = true_residual(a, b, &x, exec);
            let rel = norm(&r) / bnorm;
            if rel < best.0 {
                best = (rel, x.clone());
            }
            if rel <= opts.tol {
                return Ok((x, report(it, rel, start)));
            }
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let rel = norm(&true_residual(a, b, &x, exec)) / bnorm;
    if rel < best.0 {
        best = (rel, x);
    }
    Err(Error::NotConverged {
        iterations: maxit,
        residual: best.0,
        best: best.1,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseSolution {
    pub x: Vec<f64>,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// Cholesky solve after checking positive definiteness through the spectrum.
pub fn solve_dense(a: &CsrMatrix, b: &[f64]) -> Result<DenseSolution> {
    let n = b.len();
    if n > DENSE_LIMIT {
        return Err(Error::TooLarge(n));
    }
    let m = a.to_dense();
    let eig = SymmetricEigen::new(m.clone());
    let min_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let max_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if n > 0 && !(min_eigenvalue > 0.0) {
        return Err(Error::NotSpd { min_eigenvalue });
    }
    let chol = m.cholesky().ok_or(Error::NotSpd { min_eigenvalue })?;
    let x = chol.solve(&DVector::from_column_slice(b));
    Ok(DenseSolution {
        x: x.as_slice().to_vec(),
        min_eigenvalue,
        max_eigenvalue,
    })
}

/// `‖v‖_A = sqrt(vᵀ A v)`.
pub fn energy_norm(a: &CsrMatrix, v: &[f64]) -> f64 {
    dot(v, &a.mul_vec(v)).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_converges_in_one_step() {
        let a = CsrMatrix::identity(5);
        let b = vec![1.0, -2.0, 3.0, 0.5, 7.0];
        let (x, rep) = solve_cg(&a, &b, &CgOptions::default()).unwrap();
        assert_eq!(rep.iterations, 1);
        for (x, b) in x.iter().zip(&b) {
            assert!((x - b).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_rhs() {
        let a = CsrMatrix::identity(3);
        let (x, rep) = solve_cg(&a, &[0.0; 3], &CgOptions::default()).unwrap();
        assert_eq!(x, vec![0.0; 3]);
        assert_eq!(rep.iterations, 0);
    }

    #[test]
    fn dense_diagonal() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 2.0), (1, 1, 3.0)]).unwrap();
        let s = solve_dense(&a, &[2.0, 3.0]).unwrap();
        assert!((s.x[0] - 1.0).abs() < 1e-15 && (s.x[1] - 1.0).abs() < 1e-15);
        assert_eq!(s.min_eigenvalue, 2.0);
    }

    #[test]
    fn dense_rejects_indefinite() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (1, 1, -1.0)]).unwrap();
        assert!(matches!(solve_dense(&a, &[1.0, 1.0]), Err(Error::NotSpd { .. })));
    }

    #[test]
    fn non_convergence_returns_best_iterate() {
        let n = 50;
        let triplets = (0..n)
            .flat_map(|i| {
                let mut t = vec![(i, i, 2.0 + i as f64)];
                if i + 1 < n {
                    t.push((i, i + 1, -1.0));
                    t.push((i + 1, i, -1.0));
                }
                t
            })
            .collect();
        let a = CsrMatrix::from_triplets(n, n, triplets).unwrap();
        let b = vec![1.0; n];
        let opts = CgOptions {
            tol: 1e-14,
            maxit: Some(2),
            ..CgOptions::default()
        };
        match solve_cg(&a, &b, &opts) {
            Err(Error::NotConverged {
                iterations,
                best,
                residual,
            }) => {
                assert_eq!(iterations, 2);
                assert_eq!(best.len(), n);
                assert!(residual < 1.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn maxit_formula() {
        assert_eq!(default_maxit(0), 200);
        assert_eq!(default_maxit(100), 400);
    }
}
