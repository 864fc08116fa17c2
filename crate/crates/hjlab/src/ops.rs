//! Monotone finite-difference building blocks shared by every solver:
//! centered Laplacian, one-sided and centered gradients, second
//! differences, nodal quadrature, and off-grid interpolation.
//!
//! On the Dirichlet box the operators read the stored boundary values of
//! the field (0 for solution fields) and return 0 at boundary nodes, which
//! are constrained rather than solved.

use crate::field::{ScalarField, VectorField};
use crate::grid::{Grid, GridKind, Neighbor};

fn value_at(f: &ScalarField, nb: Neighbor) -> f64 {
    match nb {
        Neighbor::Node(j) => f.get(j),
        Neighbor::ZeroGhost => 0.0,
    }
}

/// Centered second-difference Laplacian
/// `sum_d (f(x+h e_d) - 2 f(x) + f(x-h e_d)) / h^2`.
///
/// Boundary nodes of a Dirichlet box return 0.
pub fn laplacian(f: &ScalarField) -> ScalarField {
    let grid = f.grid();
    let h2 = grid.spacing() * grid.spacing();
    let mut out = ScalarField::zeros(grid);
    for node in 0..grid.node_count() {
        if grid.is_boundary(node) {
            continue;
        }
        let mut acc = 0.0;
        for axis in 0..grid.dim() {
            let fm = value_at(f, grid.neighbor(node, axis, -1));
            let fp = value_at(f, grid.neighbor(node, axis, 1));
            acc += fm - 2.0 * f.get(node) + fp;
        }
        out.set(node, acc / h2);
    }
    out
}

/// One-sided differences `D^-_d f = (f(x) - f(x - h e_d)) / h` and
/// `D^+_d f = (f(x + h e_d) - f(x)) / h` at every node, with wraparound on
/// the torus and the Dirichlet 0 used as ghost on the box.
pub fn upwind_gradient(f: &ScalarField) -> (VectorField, VectorField) {
    let grid = f.grid();
    let h = grid.spacing();
    let mut backward = VectorField::zeros(grid);
    let mut forward = VectorField::zeros(grid);
    for node in 0..grid.node_count() {
        let mut bw = [0.0; 2];
        let mut fw = [0.0; 2];
        for axis in 0..grid.dim() {
            let fm = value_at(f, grid.neighbor(node, axis, -1));
            let fp = value_at(f, grid.neighbor(node, axis, 1));
            bw[axis] = (f.get(node) - fm) / h;
            fw[axis] = (fp - f.get(node)) / h;
        }
        backward.set(node, bw);
        forward.set(node, fw);
    }
    (backward, forward)
}

/// Centered gradient `(f(x+h e_d) - f(x-h e_d)) / 2h`; falls back to the
/// one-sided difference at the boundary nodes of a box.
pub fn gradient_central(f: &ScalarField) -> VectorField {
    let grid = f.grid();
    let h = grid.spacing();
    let mut out = VectorField::zeros(grid);
    for node in 0..grid.node_count() {
        let mut g = [0.0; 2];
        for axis in 0..grid.dim() {
            let m = grid.neighbor(node, axis, -1);
            let p = grid.neighbor(node, axis, 1);
            g[axis] = if grid.kind() == GridKind::DirichletBox && grid.is_boundary(node) {
                match (m, p) {
                    (Neighbor::ZeroGhost, Neighbor::Node(j)) => (f.get(j) - f.get(node)) / h,
                    (Neighbor::Node(j), Neighbor::ZeroGhost) => (f.get(node) - f.get(j)) / h,
                    (Neighbor::Node(jm), Neighbor::Node(jp)) => (f.get(jp) - f.get(jm)) / (2.0 * h),
                    (Neighbor::ZeroGhost, Neighbor::ZeroGhost) => 0.0,
                }
            } else {
                (value_at(f, p) - value_at(f, m)) / (2.0 * h)
            };
        }
        out.set(node, g);
    }
    out
}

/// All centered second differences of `f`: the diagonal entries by the
/// three-point stencil, the mixed entry by successive centered first
/// differences. Entries are 0 at box boundary nodes.
#[derive(Debug, Clone)]
pub struct HessianField {
    pub xx: ScalarField,
    pub yy: ScalarField,
    pub xy: ScalarField,
}

impl HessianField {
    pub fn entry(&self, node: usize) -> [[f64; 2]; 2] {
        let xy = self.xy.get(node);
        [[self.xx.get(node), xy], [xy, self.yy.get(node)]]
    }

    /// `sum_{jk} (d^2 f / dx_j dx_k)^2` per node.
    pub fn frobenius_sq(&self) -> ScalarField {
        let mut out = ScalarField::zeros(self.xx.grid());
        for node in 0..out.grid().node_count() {
            let xx = self.xx.get(node);
            let yy = self.yy.get(node);
            let xy = self.xy.get(node);
            out.set(node, xx * xx + yy * yy + 2.0 * xy * xy);
        }
        out
    }
}

pub fn hessian(f: &ScalarField) -> HessianField {
    let grid = f.grid();
    let h2 = grid.spacing() * grid.spacing();
    let mut xx = ScalarField::zeros(grid);
    let mut yy = ScalarField::zeros(grid);
    let mut xy = ScalarField::zeros(grid);
    let gx = gradient_central(f).component(0);
    for node in 0..grid.node_count() {
        if grid.is_boundary(node) {
            continue;
        }
        let fm = value_at(f, grid.neighbor(node, 0, -1));
        let fp = value_at(f, grid.neighbor(node, 0, 1));
        xx.set(node, (fm - 2.0 * f.get(node) + fp) / h2);
        if grid.dim() == 2 {
            let fm = value_at(f, grid.neighbor(node, 1, -1));
            let fp = value_at(f, grid.neighbor(node, 1, 1));
            yy.set(node, (fm - 2.0 * f.get(node) + fp) / h2);
        }
    }
    if grid.dim() == 2 {
        let gxy = gradient_central(&gx);
        for node in 0..grid.node_count() {
            if !grid.is_boundary(node) {
                xy.set(node, gxy.get(node)[1]);
            }
        }
    }
    HessianField { xx, yy, xy }
}

/// Nodal quadrature `h^dim * sum_nodes f`, boundary nodes included with
/// their stored values.
pub fn integrate(f: &ScalarField) -> f64 {
    f.values().iter().sum::<f64>() * f.grid().cell_volume()
}

/// Quadrature of a product, `h^dim * sum_nodes f g`.
pub fn integrate_product(f: &ScalarField, g: &ScalarField) -> f64 {
    assert_eq!(f.grid(), g.grid(), "fields live on different grids");
    f.values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| a * b)
        .sum::<f64>()
        * f.grid().cell_volume()
}

fn interp_weights(grid: Grid, x: [f64; 2], axis: usize) -> (usize, usize, f64) {
    let h = grid.spacing();
    let p = grid.points_per_dim();
    match grid.kind() {
        GridKind::Torus => {
            let s = (x[axis] / h).rem_euclid(p as f64);
            let i0 = s.floor() as usize % p;
            ((i0) % p, (i0 + 1) % p, s - s.floor())
        }
        GridKind::DirichletBox => {
            let s = (x[axis] / h).clamp(0.0, (p - 1) as f64);
            let i0 = (s.floor() as usize).min(p - 2);
            (i0, i0 + 1, s - i0 as f64)
        }
    }
}

/// Multilinear interpolation of a scalar field at an off-grid point.
pub fn interpolate_scalar(f: &ScalarField, x: [f64; 2]) -> f64 {
    let grid = f.grid();
    let (i0, i1, tx) = interp_weights(grid, x, 0);
    if grid.dim() == 1 {
        return (1.0 - tx) * f.get(i0) + tx * f.get(i1);
    }
    let (j0, j1, ty) = interp_weights(grid, x, 1);
    let f00 = f.get(grid.flat_index(i0, j0));
    let f10 = f.get(grid.flat_index(i1, j0));
    let f01 = f.get(grid.flat_index(i0, j1));
    let f11 = f.get(grid.flat_index(i1, j1));
    (1.0 - ty) * ((1.0 - tx) * f00 + tx * f10) + ty * ((1.0 - tx) * f01 + tx * f11)
}

/// Multilinear interpolation of a vector field at an off-grid point.
pub fn interpolate_vector(f: &VectorField, x: [f64; 2]) -> [f64; 2] {
    let grid = f.grid();
    let (i0, i1, tx) = interp_weights(grid, x, 0);
    if grid.dim() == 1 {
        let a = f.get(i0);
        let b = f.get(i1);
        return [(1.0 - tx) * a[0] + tx * b[0], 0.0];
    }
    let (j0, j1, ty) = interp_weights(grid, x, 1);
    let mut out = [0.0; 2];
    for d in 0..2 {
        let f00 = f.get(grid.flat_index(i0, j0))[d];
        let f10 = f.get(grid.flat_index(i1, j0))[d];
        let f01 = f.get(grid.flat_index(i0, j1))[d];
        let f11 = f.get(grid.flat_index(i1, j1))[d];
        out[d] = (1.0 - ty) * ((1.0 - tx) * f00 + tx * f10) + ty * ((1.0 - tx) * f01 + tx * f11);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn laplacian_of_constant_is_zero() {
        let g = Grid::torus(1, 16);
        let f = ScalarField::constant(g, 3.7);
        assert_eq!(laplacian(&f).norm_inf(), 0.0);
        let g2 = Grid::torus(2, 8);
        let f2 = ScalarField::constant(g2, -1.25);
        assert_eq!(laplacian(&f2).norm_inf(), 0.0);
    }

    #[test]
    fn laplacian_of_sine_torus() {
        // Centered-difference error bounded by (2 pi)^4 h^2 / 12 ~ 8e-4 at N = 256.
        let g = Grid::torus(1, 256);
        let f = ScalarField::from_fn(g, |x| (2.0 * PI * x[0]).sin());
        let lap = laplacian(&f);
        for node in 0..g.node_count() {
            let x = g.position(node)[0];
            let exact = -4.0 * PI * PI * (2.0 * PI * x).sin();
            assert!((lap.get(node) - exact).abs() < 1e-3);
        }
    }

    #[test]
    fn laplacian_box_stencil_arithmetic() {
        // 4-node box (3 cells): values (0, 1, 1, 0), interior Laplacian
        // N^2 (0 - 2 + 1) = -9 and N^2 (1 - 2 + 0) = -9.
        let g = Grid::dirichlet_box(1, 3);
        let f = ScalarField::from_values(g, vec![0.0, 1.0, 1.0, 0.0]);
        let lap = laplacian(&f);
        assert_eq!(lap.values(), &[0.0, -9.0, -9.0, 0.0]);
    }

    #[test]
    fn upwind_stencil_arithmetic() {
        // 1D torus, N = 4, f = (0, 1, 3, 0): D- at node 1 is (1-0)/h = 4,
        // D+ at node 1 is (3-1)/h = 8.
        let g = Grid::torus(1, 4);
        let f = ScalarField::from_values(g, vec![0.0, 1.0, 3.0, 0.0]);
        let (bw, fw) = upwind_gradient(&f);
        assert_eq!(bw.get(1)[0], 4.0);
        assert_eq!(fw.get(1)[0], 8.0);
    }

    #[test]
    fn upwind_exact_for_affine_interior() {
        let g = Grid::dirichlet_box(1, 16);
        let f = ScalarField::from_fn(g, |x| 2.5 * x[0]);
        let (bw, fw) = upwind_gradient(&f);
        for node in 2..g.node_count() - 2 {
            assert_abs_diff_eq!(bw.get(node)[0], 2.5, epsilon = 1e-12);
            assert_abs_diff_eq!(fw.get(node)[0], 2.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn upwind_of_zero_field() {
        let g = Grid::torus(2, 8);
        let f = ScalarField::zeros(g);
        let (bw, fw) = upwind_gradient(&f);
        assert!(bw.values().iter().all(|v| v == &[0.0, 0.0]));
        assert!(fw.values().iter().all(|v| v == &[0.0, 0.0]));
    }

    #[test]
    fn integrate_unit_torus() {
        let g = Grid::torus(1, 64);
        assert_eq!(integrate(&ScalarField::constant(g, 1.0)), 1.0);
        assert_eq!(integrate(&ScalarField::zeros(g)), 0.0);
        let g2 = Grid::torus(2, 16);
        assert_abs_diff_eq!(integrate(&ScalarField::constant(g2, 1.0)), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn integrate_sine_squared_spectrally_exact() {
        // The periodic rectangle rule is exact for this trigonometric polynomial.
        let g = Grid::torus(1, 256);
        let f = ScalarField::from_fn(g, |x| (2.0 * PI * x[0]).sin().powi(2));
        assert_abs_diff_eq!(integrate(&f), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn laplacian_annihilates_affine_away_from_wrap() {
        let g = Grid::torus(1, 32);
        let f = ScalarField::from_fn(g, |x| 1.5 * x[0] - 0.25);
        let lap = laplacian(&f);
        for node in 1..g.node_count() - 1 {
            assert_eq!(lap.get(node), 0.0);
        }
    }

    #[test]
    fn hessian_of_quadratic_2d() {
        let g = Grid::torus(2, 32);
        // Use a periodic field; check the mixed stencil on sin*sin.
        let f = ScalarField::from_fn(g, |x| (2.0 * PI * x[0]).sin() * (2.0 * PI * x[1]).sin());
        let hess = hessian(&f);
        let node = g.flat_index(5, 9);
        let [x, y] = g.position(node);
        let exact_xy = 4.0 * PI * PI * (2.0 * PI * x).cos() * (2.0 * PI * y).cos();
        assert!((hess.xy.get(node) - exact_xy).abs() < 0.3);
    }

    #[test]
    fn interpolation_reproduces_linear() {
        let g = Grid::dirichlet_box(1, 10);
        let f = ScalarField::from_fn(g, |x| 3.0 * x[0]);
        assert_abs_diff_eq!(interpolate_scalar(&f, [0.13, 0.0]), 0.39, epsilon = 1e-12);
        let g2 = Grid::dirichlet_box(2, 10);
        let f2 = ScalarField::from_fn(g2, |x| 2.0 * x[0] - x[1]);
        assert_abs_diff_eq!(interpolate_scalar(&f2, [0.33, 0.71]), 2.0 * 0.33 - 0.71, epsilon = 1e-12);
    }

    proptest! {
        // Discrete self-adjointness of the Laplacian stencil on the torus.
        #[test]
        fn summation_by_parts(seed in 0u64..1000) {
            let g = Grid::torus(1, 32);
            let f = ScalarField::from_fn(g, |x| ((seed % 7 + 1) as f64 * 2.0 * PI * x[0]).sin() + 0.3);
            let q = ScalarField::from_fn(g, |x| ((seed % 5 + 1) as f64 * 2.0 * PI * x[0]).cos());
            let a = integrate_product(&f, &laplacian(&q));
            let b = integrate_product(&q, &laplacian(&f));
            let scale = 1.0 + a.abs().max(b.abs());
            prop_assert!((a - b).abs() / scale < 1e-10);
        }

        #[test]
        fn integrate_is_linear(a in -10.0f64..10.0, b in -10.0f64..10.0) {
            let g = Grid::torus(1, 16);
            let f = ScalarField::from_fn(g, |x| x[0] * x[0]);
            let q = ScalarField::from_fn(g, |x| (2.0 * PI * x[0]).cos());
            let lhs = integrate(&f.zip_map(&q, |fv, gv| a * fv + b * gv));
            let rhs = a * integrate(&f) + b * integrate(&q);
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
        }
    }
}
