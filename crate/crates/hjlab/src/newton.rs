//! Damped Newton iteration on a sparse nonlinear system.
//!
//! Steps solve the exact Jacobian by banded LU; an Armijo backtracking line
//! search on the residual 2-norm enforces monotone decrease. The final
//! Jacobian is re-assembled at the accepted solution so downstream adjoint
//! solves transpose exactly the linearization of the converged state.

use crate::linalg::SparseMatrix;
use crate::solvers::{SolveError, SolverSettings};

pub trait NonlinearSystem {
    fn dof_count(&self) -> usize;
    fn residual(&self, u: &[f64], out: &mut [f64]);
    fn jacobian(&self, u: &[f64]) -> SparseMatrix;
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    pub residual_linf: f64,
    /// Residual 2-norms per accepted iterate, starting at the initial guess.
    pub residual_history: Vec<f64>,
    pub jacobian: SparseMatrix,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Solve `R(u) = 0` to `|R|_inf <= tol_abs` by damped Newton from `u0`.
pub fn solve_damped<S: NonlinearSystem>(
    sys: &S,
    u0: Vec<f64>,
    tol_abs: f64,
    settings: &SolverSettings,
) -> Result<NewtonOutcome, SolveError> {
    let n = sys.dof_count();
    assert_eq!(u0.len(), n);
    let mut u = u0;
    let mut r = vec![0.0; n];
    sys.residual(&u, &mut r);
    let mut r2 = norm2(&r);
    let mut history = vec![r2];

    for iter in 0..settings.max_iter {
        if norm_inf(&r) <= tol_abs {
            return Ok(NewtonOutcome {
                residual_linf: norm_inf(&r),
                jacobian: sys.jacobian(&u),
                solution: u,
                iterations: iter,
                residual_history: history,
            });
        }
        let jac = sys.jacobian(&u);
        let lu = jac.factorize().map_err(SolveError::Linear)?;
        let neg_r: Vec<f64> = r.iter().map(|v| -v).collect();
        let step = lu.solve(&neg_r).map_err(SolveError::Linear)?;

        let mut t = 1.0;
        let mut accepted = false;
        let mut trial = vec![0.0; n];
        let mut r_trial = vec![0.0; n];
        for _ in 0..settings.max_backtracks {
            for i in 0..n {
                trial[i] = u[i] + t * step[i];
            }
            sys.residual(&trial, &mut r_trial);
            let r2_trial = norm2(&r_trial);
            if r2_trial <= (1.0 - settings.armijo_c * t) * r2 {
                u.copy_from_slice(&trial);
                r.copy_from_slice(&r_trial);
                r2 = r2_trial;
                history.push(r2);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(SolveError::NonConvergence {
                iterations: iter,
                residual: norm_inf(&r),
            });
        }
    }

    if norm_inf(&r) <= tol_abs {
        Ok(NewtonOutcome {
            residual_linf: norm_inf(&r),
            jacobian: sys.jacobian(&u),
            solution: u,
            iterations: settings.max_iter,
            residual_history: history,
        })
    } else {
        Err(SolveError::NonConvergence {
            iterations: settings.max_iter,
            residual: norm_inf(&r),
        })
    }
}
