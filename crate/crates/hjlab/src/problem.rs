//! Problem-data bundles for the four regularized problems, with the
//! hypothesis checks that make a spec admissible:
//!
//! * obstacle problem: `psi >= 0` on the boundary;
//! * coupled system: off-diagonal couplings nonpositive, row sums
//!   `c_j1 + c_j2 >= alpha > 0`;
//! * cell system: `c_1, c_2 > 0` on the torus;
//! * obstacle-type system: `psi_j >= alpha > 0`, convex Hamiltonians with
//!   bounded `D_x H`.

use crate::field::ScalarField;
use crate::grid::{Grid, GridKind};
use crate::hamiltonian::HamiltonianModel;
use crate::ops;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("grid kind mismatch: expected {expected:?}")]
    WrongGridKind { expected: GridKind },
    #[error("obstacle must be >= 0 on the boundary: psi = {value} at node {node}")]
    ObstacleNegativeOnBoundary { node: usize, value: f64 },
    #[error("(H3.2) violated: need c12, c21 <= 0, got c12 = {c12}, c21 = {c21}")]
    CouplingSign { c12: f64, c21: f64 },
    #[error("(H3.3) violated: need row sums c11+c12, c21+c22 >= alpha > 0, got {row1} and {row2}")]
    CouplingRowSum { row1: f64, row2: f64 },
    #[error("(H4.2) violated: need c1, c2 > 0, got c1 = {c1}, c2 = {c2}")]
    CellCouplingSign { c1: f64, c2: f64 },
    #[error("(5.1) violated: need psi_{which} >= alpha > 0, got min {min}")]
    ObstacleNotPositive { which: usize, min: f64 },
    #[error("(H5.1) violated: hamiltonian {which} of an obstacle system must be convex in p")]
    NotConvex { which: usize },
    #[error("(H5.3) violated: hamiltonian {which} of an obstacle system must have bounded D_x H")]
    DxUnbounded { which: usize },
    #[error("compatibility precondition violated at node {node}: {what}")]
    Precondition { node: usize, what: String },
    #[error("field does not match the spec grid")]
    GridMismatch,
}

/// Scalar obstacle problem data: `max(u - psi, u + H(x, Du)) = 0` and its
/// penalized regularization.
#[derive(Debug, Clone)]
pub struct ObstacleProblemSpec {
    pub grid: Grid,
    pub hamiltonian: HamiltonianModel,
    pub psi: ScalarField,
}

impl ObstacleProblemSpec {
    pub fn new(
        grid: Grid,
        hamiltonian: HamiltonianModel,
        psi: ScalarField,
    ) -> Result<Self, SpecError> {
        if grid.kind() != GridKind::DirichletBox {
            return Err(SpecError::WrongGridKind {
                expected: GridKind::DirichletBox,
            });
        }
        if psi.grid() != grid {
            return Err(SpecError::GridMismatch);
        }
        for node in grid.boundary_nodes() {
            if psi.get(node) < 0.0 {
                return Err(SpecError::ObstacleNegativeOnBoundary {
                    node,
                    value: psi.get(node),
                });
            }
        }
        Ok(ObstacleProblemSpec {
            grid,
            hamiltonian,
            psi,
        })
    }
}

/// Outcome of the compatibility check `Phi + H(x, D Phi) < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompatibilityReport {
    pub ok: bool,
    /// `-max_x (Phi + H(x, D Phi))`; positive slack means the hypothesis
    /// holds strictly.
    pub min_slack: f64,
}

/// Evaluates `Phi + H(x, D Phi)` with centered gradients at every interior
/// node. `Phi` must vanish on the boundary and lie below the obstacle.
pub fn check_compatibility(
    spec: &ObstacleProblemSpec,
    phi: &ScalarField,
) -> Result<CompatibilityReport, SpecError> {
    if phi.grid() != spec.grid {
        return Err(SpecError::GridMismatch);
    }
    for node in spec.grid.boundary_nodes() {
        if phi.get(node) != 0.0 {
            return Err(SpecError::Precondition {
                node,
                what: format!("Phi must vanish on the boundary, got {}", phi.get(node)),
            });
        }
    }
    for node in 0..spec.grid.node_count() {
        if phi.get(node) > spec.psi.get(node) {
            return Err(SpecError::Precondition {
                node,
                what: format!(
                    "Phi must lie below the obstacle, got Phi = {} > psi = {}",
                    phi.get(node),
                    spec.psi.get(node)
                ),
            });
        }
    }
    let grad = ops::gradient_central(phi);
    let mut worst = f64::NEG_INFINITY;
    for node in spec.grid.interior_nodes() {
        let x = spec.grid.position(node);
        let v = phi.get(node) + spec.hamiltonian.eval(x, grad.get(node));
        worst = worst.max(v);
    }
    Ok(CompatibilityReport {
        ok: worst < 0.0,
        min_slack: -worst,
    })
}

/// Monotone weakly coupled two-system on a Dirichlet box:
/// `c_j1 u_1 + c_j2 u_2 + H_j(x, Du_j) = 0`.
#[derive(Debug, Clone)]
pub struct CoupledSystemSpec {
    pub grid: Grid,
    /// Row-major coupling matrix `[[c11, c12], [c21, c22]]`.
    pub coupling: [[f64; 2]; 2],
    pub hamiltonians: [HamiltonianModel; 2],
    /// The largest alpha with row sums >= alpha; positive by construction.
    pub alpha: f64,
}

impl CoupledSystemSpec {
    pub fn new(
        grid: Grid,
        coupling: [[f64; 2]; 2],
        h1: HamiltonianModel,
        h2: HamiltonianModel,
    ) -> Result<Self, SpecError> {
        if grid.kind() != GridKind::DirichletBox {
            return Err(SpecError::WrongGridKind {
                expected: GridKind::DirichletBox,
            });
        }
        let [[_c11, c12], [c21, _c22]] = coupling;
        if c12 > 0.0 || c21 > 0.0 {
            return Err(SpecError::CouplingSign { c12, c21 });
        }
        let row1 = coupling[0][0] + coupling[0][1];
        let row2 = coupling[1][0] + coupling[1][1];
        if row1 <= 0.0 || row2 <= 0.0 {
            return Err(SpecError::CouplingRowSum { row1, row2 });
        }
        Ok(CoupledSystemSpec {
            grid,
            coupling,
            hamiltonians: [h1, h2],
            alpha: row1.min(row2),
        })
    }

    /// Same data with the two equations relabeled.
    pub fn swapped(&self) -> CoupledSystemSpec {
        CoupledSystemSpec {
            grid: self.grid,
            coupling: [
                [self.coupling[1][1], self.coupling[1][0]],
                [self.coupling[0][1], self.coupling[0][0]],
            ],
            hamiltonians: [self.hamiltonians[1].clone(), self.hamiltonians[0].clone()],
            alpha: self.alpha,
        }
    }
}

/// Cell problem for the weakly coupled system on the torus:
/// `c_1 u_1 - c_1 u_2 + H_1(x, Du_1) = Hbar_1` and symmetrically, with the
/// quasi-monotone regularization `(c_j + eps) u_j - c_j u_k + ... = eps^2 Lap u_j`.
#[derive(Debug, Clone)]
pub struct CellSystemSpec {
    pub grid: Grid,
    pub c1: f64,
    pub c2: f64,
    pub hamiltonians: [HamiltonianModel; 2],
    /// Momentum shift `P`; only the scalar cell problem uses it.
    pub p_shift: [f64; 2],
}

impl CellSystemSpec {
    pub fn new(
        grid: Grid,
        c1: f64,
        c2: f64,
        h1: HamiltonianModel,
        h2: HamiltonianModel,
    ) -> Result<Self, SpecError> {
        if grid.kind() != GridKind::Torus {
            return Err(SpecError::WrongGridKind {
                expected: GridKind::Torus,
            });
        }
        if c1 <= 0.0 || c2 <= 0.0 {
            return Err(SpecError::CellCouplingSign { c1, c2 });
        }
        Ok(CellSystemSpec {
            grid,
            c1,
            c2,
            hamiltonians: [h1, h2],
            p_shift: [0.0, 0.0],
        })
    }
}

/// Obstacle-type system coupled through the differences
/// `theta_j = u_j - u_k - psi_j`.
#[derive(Debug, Clone)]
pub struct ObstacleSystemSpec {
    pub grid: Grid,
    pub hamiltonians: [HamiltonianModel; 2],
    pub psi: [ScalarField; 2],
    pub alpha: f64,
}

impl ObstacleSystemSpec {
    pub fn new(
        grid: Grid,
        h1: HamiltonianModel,
        h2: HamiltonianModel,
        psi1: ScalarField,
        psi2: ScalarField,
    ) -> Result<Self, SpecError> {
        if grid.kind() != GridKind::DirichletBox {
            return Err(SpecError::WrongGridKind {
                expected: GridKind::DirichletBox,
            });
        }
        if psi1.grid() != grid || psi2.grid() != grid {
            return Err(SpecError::GridMismatch);
        }
        for (which, h) in [&h1, &h2].into_iter().enumerate() {
            if !h.convex_in_p {
                return Err(SpecError::NotConvex { which: which + 1 });
            }
            if !h.dx_bounded {
                return Err(SpecError::DxUnbounded { which: which + 1 });
            }
        }
        let mins = [psi1.min(), psi2.min()];
        for (which, &min) in mins.iter().enumerate() {
            if min <= 0.0 {
                return Err(SpecError::ObstacleNotPositive {
                    which: which + 1,
                    min,
                });
            }
        }
        Ok(ObstacleSystemSpec {
            grid,
            hamiltonians: [h1, h2],
            psi: [psi1, psi2],
            alpha: mins[0].min(mins[1]),
        })
    }
}

/// Union of the sweepable problem classes; the solvers attach `solve` and
/// reference-solution methods to it.
#[derive(Debug, Clone)]
pub enum ProblemInstance {
    Obstacle(ObstacleProblemSpec),
    Coupled(CoupledSystemSpec),
    ObstacleSystem(ObstacleSystemSpec),
    CellSystem(CellSystemSpec),
}

impl ProblemInstance {
    pub fn grid(&self) -> Grid {
        match self {
            ProblemInstance::Obstacle(s) => s.grid,
            ProblemInstance::Coupled(s) => s.grid,
            ProblemInstance::ObstacleSystem(s) => s.grid,
            ProblemInstance::CellSystem(s) => s.grid,
        }
    }

    pub fn component_count(&self) -> usize {
        match self {
            ProblemInstance::Obstacle(_) => 1,
            _ => 2,
        }
    }

    pub fn class_name(&self) -> &'static str {
        match self {
            ProblemInstance::Obstacle(_) => "obstacle",
            ProblemInstance::Coupled(_) => "coupled",
            ProblemInstance::ObstacleSystem(_) => "obstacle_system",
            ProblemInstance::CellSystem(_) => "cell_system",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::Potential;
    use approx::assert_abs_diff_eq;

    fn quad(c: f64) -> HamiltonianModel {
        HamiltonianModel::quadratic(Potential::Zero, c)
    }

    #[test]
    fn compatibility_trivial_ok() {
        // H = |p|^2/2 - 1, psi = 1, Phi = 0: slack is exactly 1.
        let g = Grid::dirichlet_box(1, 16);
        let spec =
            ObstacleProblemSpec::new(g, quad(1.0), ScalarField::constant(g, 1.0)).unwrap();
        let rep = check_compatibility(&spec, &ScalarField::zeros(g)).unwrap();
        assert!(rep.ok);
        assert_abs_diff_eq!(rep.min_slack, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn compatibility_boundary_case_fails() {
        // H = |p|^2/2, Phi = 0: 0 + 0 = 0 is not strictly negative.
        let g = Grid::dirichlet_box(1, 16);
        let spec =
            ObstacleProblemSpec::new(g, quad(0.0), ScalarField::constant(g, 1.0)).unwrap();
        let rep = check_compatibility(&spec, &ScalarField::zeros(g)).unwrap();
        assert!(!rep.ok);
        assert_eq!(rep.min_slack, 0.0);
    }

    #[test]
    fn compatibility_parabola() {
        // Phi(x) = -x (1 - x) on (0, 1): slack from nodewise evaluation of
        // Phi + Phi'^2/2 - 1. With |Phi| <= 1/4 and |Phi'| <= 1 the worst
        // value is at most -1/4, so slack is at least 1/4.
        let g = Grid::dirichlet_box(1, 64);
        let spec =
            ObstacleProblemSpec::new(g, quad(1.0), ScalarField::constant(g, 1.0)).unwrap();
        let phi = ScalarField::from_fn(g, |x| -x[0] * (1.0 - x[0]));
        let rep = check_compatibility(&spec, &phi).unwrap();
        assert!(rep.ok);
        // Independent nodewise evaluation with the exact derivative.
        let mut worst = f64::NEG_INFINITY;
        for node in g.interior_nodes() {
            let x = g.position(node)[0];
            let dphi = -(1.0 - 2.0 * x);
            worst = worst.max(-x * (1.0 - x) + 0.5 * dphi * dphi - 1.0);
        }
        assert!((rep.min_slack + worst).abs() < 1e-3);
    }

    #[test]
    fn compatibility_rejects_phi_above_psi() {
        let g = Grid::dirichlet_box(1, 8);
        let spec =
            ObstacleProblemSpec::new(g, quad(1.0), ScalarField::constant(g, 0.1)).unwrap();
        let phi = ScalarField::from_fn(g, |x| if x[0] > 0.0 && x[0] < 1.0 { 0.2 } else { 0.0 });
        let err = check_compatibility(&spec, &phi).unwrap_err();
        assert!(matches!(err, SpecError::Precondition { node: 1, .. }));
    }

    #[test]
    fn coupling_hypotheses() {
        let g = Grid::dirichlet_box(1, 8);
        let bad_sign = CoupledSystemSpec::new(g, [[2.0, 0.5], [-1.0, 2.0]], quad(0.0), quad(0.0));
        assert!(matches!(bad_sign, Err(SpecError::CouplingSign { .. })));
        let bad_row = CoupledSystemSpec::new(g, [[1.0, -1.0], [-1.0, 2.0]], quad(0.0), quad(0.0));
        assert!(matches!(bad_row, Err(SpecError::CouplingRowSum { .. })));
        let ok = CoupledSystemSpec::new(g, [[2.0, -1.0], [-1.0, 2.0]], quad(0.0), quad(0.0));
        assert_eq!(ok.unwrap().alpha, 1.0);
    }

    #[test]
    fn cell_spec_needs_positive_couplings() {
        let g = Grid::torus(1, 8);
        assert!(CellSystemSpec::new(g, 0.0, 1.0, quad(0.0), quad(0.0)).is_err());
        assert!(CellSystemSpec::new(g, 1.0, 1.0, quad(0.0), quad(0.0)).is_ok());
        let b = Grid::dirichlet_box(1, 8);
        assert!(CellSystemSpec::new(b, 1.0, 1.0, quad(0.0), quad(0.0)).is_err());
    }

    #[test]
    fn obstacle_system_flags() {
        let g = Grid::dirichlet_box(1, 8);
        let dw = HamiltonianModel::double_well(Potential::Zero, 0.0);
        let psi = ScalarField::constant(g, 0.05);
        let e = ObstacleSystemSpec::new(g, dw, quad(0.0), psi.clone(), psi.clone());
        assert!(matches!(e, Err(SpecError::NotConvex { which: 1 })));
        let e2 = ObstacleSystemSpec::new(
            g,
            quad(0.0),
            quad(0.0),
            ScalarField::zeros(g),
            psi.clone(),
        );
        assert!(matches!(e2, Err(SpecError::ObstacleNotPositive { which: 1, .. })));
        let ok = ObstacleSystemSpec::new(g, quad(0.0), quad(0.0), psi.clone(), psi).unwrap();
        assert_abs_diff_eq!(ok.alpha, 0.05);
    }
}
