//! Local Lax-Friedrichs numerical Hamiltonian on one-sided differences.
//!
//! With backward/forward differences `a`, `b` the scheme evaluates
//!
//! ```text
//! Hhat(x, a, b) = H(x, P + (a + b)/2) - sum_d lambda_d(x) (b_d - a_d) / 2
//! ```
//!
//! with the dissipation `lambda_d(x) = max |dH/dp_d(x, p)|` over a sampled
//! slope box around the momentum shift `P`. That choice makes the scheme
//! monotone for any Hamiltonian, convex or not, and keeps every Jacobian
//! row diagonally dominant with nonpositive off-diagonal entries.

use crate::grid::{Grid, Neighbor};
use crate::hamiltonian::HamiltonianModel;

pub(crate) fn value_at(values: &[f64], nb: Neighbor) -> f64 {
    match nb {
        Neighbor::Node(j) => values[j],
        Neighbor::ZeroGhost => 0.0,
    }
}

pub(crate) struct NumHamiltonian {
    grid: Grid,
    p_shift: [f64; 2],
    /// Dissipation per node and axis.
    lambda: Vec<[f64; 2]>,
}

impl NumHamiltonian {
    pub fn new(grid: Grid, ham: &HamiltonianModel, p_shift: [f64; 2], p_range: f64) -> Self {
        let per_axis = if grid.dim() == 1 { 17 } else { 9 };
        let mut samples: Vec<[f64; 2]> = Vec::new();
        let coords: Vec<f64> = (0..per_axis)
            .map(|k| -p_range + 2.0 * p_range * k as f64 / (per_axis - 1) as f64)
            .collect();
        if grid.dim() == 1 {
            for &p in &coords {
                samples.push([p_shift[0] + p, 0.0]);
            }
        } else {
            for &p in &coords {
                for &q in &coords {
                    samples.push([p_shift[0] + p, p_shift[1] + q]);
                }
            }
        }
        let mut lambda = vec![[0.0; 2]; grid.node_count()];
        for node in 0..grid.node_count() {
            let x = grid.position(node);
            let mut lam = [0.0; 2];
            for s in &samples {
                let gp = ham.grad_p(x, *s);
                lam[0] = lam[0].max(gp[0].abs());
                lam[1] = lam[1].max(gp[1].abs());
            }
            // Safety margin over the sampled maximum.
            lambda[node] = [1.05 * lam[0], 1.05 * lam[1]];
        }
        NumHamiltonian {
            grid,
            p_shift,
            lambda,
        }
    }

    pub fn lambda(&self, node: usize) -> [f64; 2] {
        self.lambda[node]
    }

    /// Central slope `P + (D^- u + D^+ u) / 2` at a node.
    pub fn central_slope(&self, values: &[f64], node: usize) -> [f64; 2] {
        let h = self.grid.spacing();
        let mut s = [0.0; 2];
        for d in 0..self.grid.dim() {
            let um = value_at(values, self.grid.neighbor(node, d, -1));
            let up = value_at(values, self.grid.neighbor(node, d, 1));
            s[d] = self.p_shift[d] + (up - um) / (2.0 * h);
        }
        s
    }

    /// `Hhat(x, D^- u, D^+ u)` at a node.
    pub fn eval(&self, ham: &HamiltonianModel, values: &[f64], node: usize) -> f64 {
        let h = self.grid.spacing();
        let x = self.grid.position(node);
        let s = self.central_slope(values, node);
        let mut dissipation = 0.0;
        for d in 0..self.grid.dim() {
            let um = value_at(values, self.grid.neighbor(node, d, -1));
            let up = value_at(values, self.grid.neighbor(node, d, 1));
            dissipation += self.lambda[node][d] * (up - 2.0 * values[node] + um) / (2.0 * h);
        }
        ham.eval(x, s) - dissipation
    }

    /// Stencil derivative of `eval` w.r.t. the nodal values; emits
    /// `(neighbor, coefficient)` pairs including the center node.
    pub fn jacobian_row(
        &self,
        ham: &HamiltonianModel,
        values: &[f64],
        node: usize,
        sink: &mut dyn FnMut(Neighbor, f64),
    ) {
        let h = self.grid.spacing();
        let x = self.grid.position(node);
        let s = self.central_slope(values, node);
        let hp = ham.grad_p(x, s);
        let mut center = 0.0;
        for d in 0..self.grid.dim() {
            let lam = self.lambda[node][d];
            center += lam / h;
            sink(
                self.grid.neighbor(node, d, 1),
                (hp[d] - lam) / (2.0 * h),
            );
            sink(
                self.grid.neighbor(node, d, -1),
                (-hp[d] - lam) / (2.0 * h),
            );
        }
        sink(Neighbor::Node(node), center);
    }

    /// Nodewise relaxation value: the `z` solving
    /// `diag_coeff * z + Hhat(...) = rhs` with the neighbors held fixed.
    pub fn relaxation_value(
        &self,
        ham: &HamiltonianModel,
        values: &[f64],
        node: usize,
        diag_coeff: f64,
        rhs: f64,
    ) -> f64 {
        let h = self.grid.spacing();
        let x = self.grid.position(node);
        let s = self.central_slope(values, node);
        let mut lam_sum = 0.0;
        let mut nb_sum = 0.0;
        for d in 0..self.grid.dim() {
            let um = value_at(values, self.grid.neighbor(node, d, -1));
            let up = value_at(values, self.grid.neighbor(node, d, 1));
            lam_sum += self.lambda[node][d];
            nb_sum += self.lambda[node][d] * (up + um) / (2.0 * h);
        }
        (rhs - ham.eval(x, s) + nb_sum) / (diag_coeff + lam_sum / h)
    }
}

/// Negative Laplacian stencil scaled by `visc`: adds the coefficients of
/// `-visc * Lap u` at `node` to the sink.
pub(crate) fn negative_laplacian_row(
    grid: Grid,
    visc: f64,
    node: usize,
    sink: &mut dyn FnMut(Neighbor, f64),
) {
    let h2 = grid.spacing() * grid.spacing();
    for d in 0..grid.dim() {
        sink(grid.neighbor(node, d, 1), -visc / h2);
        sink(grid.neighbor(node, d, -1), -visc / h2);
    }
    sink(Neighbor::Node(node), 2.0 * grid.dim() as f64 * visc / h2);
}

/// `Lap u` at a node from a full nodal array (ghost 0 outside a box).
pub(crate) fn laplacian_at(grid: Grid, values: &[f64], node: usize) -> f64 {
    let h2 = grid.spacing() * grid.spacing();
    let mut acc = 0.0;
    for d in 0..grid.dim() {
        let um = value_at(values, grid.neighbor(node, d, -1));
        let up = value_at(values, grid.neighbor(node, d, 1));
        acc += um - 2.0 * values[node] + up;
    }
    acc / h2
}
