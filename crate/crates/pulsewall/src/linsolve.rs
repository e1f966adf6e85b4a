//! Direct linear solvers.
//!
//! The production path factors a sparse matrix once (the stepping matrices
//! are constant over a run) and back-substitutes per step, then verifies
//! every solution against the retained matrix with a relative residual
//! check. A self-contained dense row-pivoted LU serves as an independent
//! cross-check for small systems in tests.

use crate::fem::Csr;
use faer::prelude::*;
use std::sync::Once;

/// Default relative residual tolerance for verified solves.
pub const SOLVE_TOL: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("matrix factorization failed; system is singular or badly scaled")]
    Factorization,
    #[error("linear solve residual {rel:.3e} exceeds tolerance {tol:.3e}")]
    Residual { rel: f64, tol: f64 },
}

static PAR_ONCE: Once = Once::new();

fn force_sequential() {
    // One worker keeps factorization and solve bitwise reproducible.
    PAR_ONCE.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
}

/// Sparse LU factorization retaining its matrix for residual verification.
pub struct SparseLu {
    a: Csr,
    lu: faer::sparse::linalg::solvers::Lu<usize, f64>,
}

impl SparseLu {
    pub fn factor(a: Csr) -> Result<SparseLu, SolveError> {
        force_sequential();
        let trips: Vec<faer::sparse::Triplet<usize, usize, f64>> = (0..a.nrows)
            .flat_map(|r| {
                let a = &a;
                (a.row_ptr[r]..a.row_ptr[r + 1])
                    .map(move |k| faer::sparse::Triplet::new(r, a.col_idx[k], a.vals[k]))
            })
            .collect();
        let mat = faer::sparse::SparseColMat::try_new_from_triplets(a.nrows, a.ncols, &trips)
            .map_err(|_| SolveError::Factorization)?;
        let lu = mat.sp_lu().map_err(|_| SolveError::Factorization)?;
        Ok(SparseLu { a, lu })
    }

    pub fn matrix(&self) -> &Csr {
        &self.a
    }

    /// Solve A x = rhs and verify ||rhs - A x|| <= tol * ||rhs|| (absolute
    /// when the right-hand side vanishes).
    pub fn solve(&self, rhs: &[f64], tol: f64) -> Result<Vec<f64>, SolveError> {
        assert_eq!(rhs.len(), self.a.nrows);
        let b = faer::Mat::from_fn(rhs.len(), 1, |i, _| rhs[i]);
        let x = self.lu.solve(&b);
        let x: Vec<f64> = (0..rhs.len()).map(|i| x[(i, 0)]).collect();
        let mut ax = vec![0.0; rhs.len()];
        self.a.matvec(&x, &mut ax);
        let norm = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
        let res: Vec<f64> = rhs.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let bnorm = norm(rhs);
        let rel = if bnorm > 0.0 {
            norm(&res) / bnorm
        } else {
            norm(&res)
        };
        if rel <= tol {
            Ok(x)
        } else {
            Err(SolveError::Residual { rel, tol })
        }
    }
}

/// One-shot verified sparse solve.
pub fn solve(a: &Csr, rhs: &[f64], tol: f64) -> Result<Vec<f64>, SolveError> {
    SparseLu::factor(a.clone())?.solve(rhs, tol)
}

/// Dense LU with row pivoting, written out longhand so it shares nothing
/// with the sparse path. Intended for oracle comparisons on small systems.
pub fn solve_dense(a_in: &[Vec<f64>], b_in: &[f64]) -> Option<Vec<f64>> {
    let n = b_in.len();
    assert!(a_in.len() == n && a_in.iter().all(|r| r.len() == n));
    let mut a = a_in.to_vec();
    let mut b = b_in.to_vec();
    for k in 0..n {
        let mut p = k;
        for r in k + 1..n {
            if a[r][k].abs() > a[p][k].abs() {
                p = r;
            }
        }
        if a[p][k] == 0.0 {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        for r in k + 1..n {
            let f = a[r][k] / a[k][k];
            if f != 0.0 {
                for c in k..n {
                    a[r][c] -= f * a[k][c];
                }
                b[r] -= f * b[k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for c in k + 1..n {
            s -= a[k][c] * x[c];
        }
        x[k] = s / a[k][k];
    }
    Some(x)
}
