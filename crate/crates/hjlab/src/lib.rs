//! Finite-difference laboratory for penalized Hamilton-Jacobi obstacle
//! problems, weakly coupled systems, and cell problems, together with the
//! discrete adjoint measures of their linearizations.
//!
//! The crate is organized around four regularized problems on the unit
//! torus or the unit box with zero Dirichlet data:
//!
//! * the penalized obstacle problem
//!   `u + H(x,Du) + gamma^eps(u - psi) = eps Lap u`,
//! * the monotone weakly coupled two-system
//!   `c_j1 u_1 + c_j2 u_2 + H_j(x,Du_j) = eps Lap u_j`,
//! * the cell system
//!   `(c_j + eps) u_j - c_j u_k + H_j(x,Du_j) = eps^2 Lap u_j`
//!   (and the scalar cell problem with an explicit effective constant),
//! * the obstacle-type system coupled through `u_j - u_k - psi_j`.
//!
//! Every solver exposes the exact Jacobian of its monotone discretization,
//! so the adjoint measure `sigma` is obtained by transposing that matrix
//! against a discrete Dirac load ("discretize then transpose"); the mass,
//! positivity, Hessian, and transport identities then hold at linear-solver
//! precision instead of at grid accuracy.

pub mod adjoint;
pub mod config;
pub mod field;
pub mod grid;
pub mod hamiltonian;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod newton;
pub mod ops;
pub mod penalty;
pub mod problem;
pub mod solvers;
pub mod stochastic;

pub use adjoint::AdjointSolution;
pub use field::{ScalarField, VectorField};
pub use grid::{Grid, GridKind};
pub use hamiltonian::HamiltonianModel;
pub use harness::{ConvergenceReport, SweepConfig};
pub use penalty::PenaltyModel;
pub use problem::{
    CellSystemSpec, CoupledSystemSpec, ObstacleProblemSpec, ObstacleSystemSpec, ProblemInstance,
};
pub use solvers::{CellSolveResult, SolveResult, SolverSettings};
