//! Newton-based solvers for the four regularized problems and the direct
//! (`eps = 0`) reference solvers for their limit problems.
//!
//! All solvers share one spatial discretization: the local Lax-Friedrichs
//! numerical Hamiltonian on one-sided differences plus the centered
//! Laplacian, which keeps every Jacobian an M-matrix. Direct reference
//! solvers reuse the identical stencils so that sweeps over `eps` isolate
//! the regularization error from the grid error.

mod cell;
mod coupled;
mod obstacle;
mod obstacle_system;
pub(crate) mod scheme;

pub use cell::{solve_scalar_cell, solve_system_cell};
pub use coupled::{solve_coupled_system, solve_system_direct};
pub use obstacle::{solve_obstacle_direct, solve_penalized_obstacle};
pub use obstacle_system::{solve_obstacle_system, solve_obstacle_system_direct};

use crate::field::ScalarField;
use crate::grid::Grid;
use crate::linalg::{LinalgError, SparseMatrix};
use crate::problem::{ProblemInstance, SpecError};
use std::sync::atomic::{AtomicU64, Ordering};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("newton did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("invalid spec: {0}")]
    InvalidSpec(#[from] SpecError),
    #[error("eps must be positive, got {0}")]
    NonpositiveEpsilon(f64),
    #[error(transparent)]
    Linear(#[from] LinalgError),
}

/// Tolerances and damping constants shared by every solver.
#[derive(Debug, Clone)]
pub struct SolverSettings {
    /// Residual max-norm tolerance, scaled by the problem scale.
    pub tol: f64,
    pub max_iter: usize,
    pub armijo_c: f64,
    pub max_backtracks: u32,
    /// Half-width of the sampled slope box that calibrates the
    /// Lax-Friedrichs dissipation per node and axis.
    pub lf_p_range: f64,
    /// Cold solves below this eps run a continuation ladder from here.
    pub continuation_start: f64,
    pub continuation_factor: f64,
    /// Nodewise presweeps seeding the direct (eps = 0) solvers.
    pub direct_sweeps: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol: 1e-10,
            max_iter: 60,
            armijo_c: 1e-4,
            max_backtracks: 45,
            lf_p_range: 4.0,
            continuation_start: 0.25,
            continuation_factor: 0.5,
            direct_sweeps: 40,
        }
    }
}

/// Map between grid nodes and solver unknowns.
///
/// Torus grids solve every node; Dirichlet boxes solve interior nodes only
/// and pin the boundary to 0. Components interleave: the unknown of
/// `(node, c)` is `solved_index(node) * components + c`.
#[derive(Debug, Clone)]
pub struct DofMap {
    grid: Grid,
    components: usize,
    node_to_solved: Vec<Option<usize>>,
    solved_to_node: Vec<usize>,
}

impl DofMap {
    pub fn new(grid: Grid, components: usize) -> Self {
        let mut node_to_solved = vec![None; grid.node_count()];
        let mut solved_to_node = Vec::new();
        for node in 0..grid.node_count() {
            if grid.is_interior(node) {
                node_to_solved[node] = Some(solved_to_node.len());
                solved_to_node.push(node);
            }
        }
        DofMap {
            grid,
            components,
            node_to_solved,
            solved_to_node,
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn dof_count(&self) -> usize {
        self.solved_to_node.len() * self.components
    }

    pub fn dof(&self, node: usize, comp: usize) -> Option<usize> {
        self.node_to_solved[node].map(|s| s * self.components + comp)
    }

    pub fn node_of(&self, dof: usize) -> (usize, usize) {
        (
            self.solved_to_node[dof / self.components],
            dof % self.components,
        )
    }

    /// Expand dof values of one component into a full field (boundary 0).
    pub fn scatter(&self, dofs: &[f64], comp: usize) -> ScalarField {
        let mut f = ScalarField::zeros(self.grid);
        for (s, &node) in self.solved_to_node.iter().enumerate() {
            f.set(node, dofs[s * self.components + comp]);
        }
        f
    }

    /// Pack full fields (one per component) into a dof vector.
    pub fn gather(&self, fields: &[ScalarField]) -> Vec<f64> {
        assert_eq!(fields.len(), self.components);
        let mut dofs = vec![0.0; self.dof_count()];
        for (s, &node) in self.solved_to_node.iter().enumerate() {
            for c in 0..self.components {
                dofs[s * self.components + c] = fields[c].get(node);
            }
        }
        dofs
    }

    pub fn solved_nodes(&self) -> &[usize] {
        &self.solved_to_node
    }
}

static RESULT_IDS: AtomicU64 = AtomicU64::new(0);

/// Converged solution of one regularized problem, with the exact Jacobian
/// of the discrete residual at that solution.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub problem: ProblemInstance,
    pub eps: f64,
    pub fields: Vec<ScalarField>,
    pub residual_linf: f64,
    pub newton_iters: usize,
    pub jacobian: SparseMatrix,
    pub dof_map: DofMap,
    /// `max_x (u - psi)/eps` (or `max theta_j/eps` for the obstacle
    /// system); finite on every converged solve.
    pub penalty_overshoot: Option<f64>,
    /// `max_x gamma^eps)` over components, when a penalty is present.
    pub max_penalty: Option<f64>,
    id: u64,
}

impl SolveResult {
    pub(crate) fn new(
        problem: ProblemInstance,
        eps: f64,
        fields: Vec<ScalarField>,
        residual_linf: f64,
        newton_iters: usize,
        jacobian: SparseMatrix,
        dof_map: DofMap,
    ) -> Self {
        SolveResult {
            problem,
            eps,
            fields,
            residual_linf,
            newton_iters,
            jacobian,
            dof_map,
            penalty_overshoot: None,
            max_penalty: None,
            id: RESULT_IDS.fetch_add(1, Ordering::Relaxed),
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn grid(&self) -> Grid {
        self.problem.grid()
    }

    /// Viscosity coefficient of the regularization: `eps` everywhere except
    /// the cell system, which uses `eps^2`.
    pub fn viscosity(&self) -> f64 {
        match &self.problem {
            ProblemInstance::CellSystem(_) => self.eps * self.eps,
            _ => self.eps,
        }
    }

    /// Scale of the Dirac load in the adjoint equation (the cell system
    /// scales its source by `eps`).
    pub fn adjoint_source_scale(&self) -> f64 {
        match &self.problem {
            ProblemInstance::CellSystem(_) => self.eps,
            _ => 1.0,
        }
    }

    /// Nodewise weight of the section mass identity:
    /// `1 + (gamma^eps)'` for the obstacle problem, the coupling row sum
    /// for the coupled system, and 1 for the cell and obstacle systems.
    pub fn mass_weight(&self, comp: usize) -> ScalarField {
        match &self.problem {
            ProblemInstance::Obstacle(spec) => {
                let pm = crate::penalty::PenaltyModel::new();
                let eps = self.eps;
                self.fields[0]
                    .zip_map(&spec.psi, |u, psi| 1.0 + pm.prime(eps, u - psi))
            }
            ProblemInstance::Coupled(spec) => ScalarField::constant(
                self.grid(),
                spec.coupling[comp][0] + spec.coupling[comp][1],
            ),
            ProblemInstance::CellSystem(_) | ProblemInstance::ObstacleSystem(_) => {
                ScalarField::constant(self.grid(), 1.0)
            }
        }
    }

    /// The `eps`-power weighting the Hessian integral for this section.
    pub fn hessian_weight(&self) -> f64 {
        self.viscosity()
    }
}

/// Result of a cell-problem solve: normalized corrector(s) plus effective
/// constant estimate(s).
#[derive(Debug, Clone)]
pub struct CellSolveResult {
    pub fields: Vec<ScalarField>,
    /// `Hbar^eta` for the scalar problem; `(Hbar_1, Hbar_2)` estimated as
    /// `-mean(eps u_j)` for the system.
    pub hbar: Vec<f64>,
    /// `c_2 Hbar_1 + c_1 Hbar_2`, the shift-invariant combination (system
    /// only).
    pub mu_hat: Option<f64>,
    /// `max - min` of `eps u_j`, the nonuniformity of the estimate.
    pub spread: Vec<f64>,
    /// Normalization anchor node of the scalar solve.
    pub anchor: Option<usize>,
    pub residual_linf: f64,
    pub newton_iters: usize,
    /// The regularized-system solve backing a system-cell result.
    pub system: Option<SolveResult>,
}
