//! Structured grids on the unit torus and on the unit box with zero
//! Dirichlet boundary.
//!
//! Both kinds use `n` cells of width `h = 1/n` per dimension. The torus
//! stores `n` nodes per dimension (index arithmetic wraps, no boundary
//! node); the Dirichlet box stores `n + 1` nodes per dimension at
//! `x_i = i h`, the first and last of which are boundary nodes that carry
//! the value 0 in every solution field.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Torus,
    DirichletBox,
}

/// Uniform grid over the unit torus or the unit Dirichlet box, `dim` in {1, 2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    kind: GridKind,
    dim: usize,
    cells: usize,
    h: f64,
    points_per_dim: usize,
}

impl Grid {
    pub fn new(kind: GridKind, dim: usize, cells_per_dim: usize) -> Self {
        assert!(dim == 1 || dim == 2, "dim must be 1 or 2, got {dim}");
        assert!(cells_per_dim >= 2, "need at least 2 cells per dim");
        let points_per_dim = match kind {
            GridKind::Torus => cells_per_dim,
            GridKind::DirichletBox => cells_per_dim + 1,
        };
        Grid {
            kind,
            dim,
            cells: cells_per_dim,
            h: 1.0 / cells_per_dim as f64,
            points_per_dim,
        }
    }

    pub fn torus(dim: usize, cells_per_dim: usize) -> Self {
        Self::new(GridKind::Torus, dim, cells_per_dim)
    }

    pub fn dirichlet_box(dim: usize, cells_per_dim: usize) -> Self {
        Self::new(GridKind::DirichletBox, dim, cells_per_dim)
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells_per_dim(&self) -> usize {
        self.cells
    }

    /// Grid spacing; `h * cells_per_dim == 1` exactly for power-of-two cells.
    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn points_per_dim(&self) -> usize {
        self.points_per_dim
    }

    pub fn node_count(&self) -> usize {
        self.points_per_dim.pow(self.dim as u32)
    }

    /// Cell volume `h^dim`, the quadrature weight of one node.
    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    pub fn is_torus(&self) -> bool {
        self.kind == GridKind::Torus
    }

    /// Multi-index of a flat node index (lexicographic, x fastest).
    pub fn multi_index(&self, node: usize) -> [usize; 2] {
        debug_assert!(node < self.node_count());
        match self.dim {
            1 => [node, 0],
            _ => [node % self.points_per_dim, node / self.points_per_dim],
        }
    }

    pub fn flat_index(&self, ix: usize, iy: usize) -> usize {
        debug_assert!(ix < self.points_per_dim);
        debug_assert!(self.dim == 2 || iy == 0);
        ix + iy * self.points_per_dim
    }

    /// Coordinates of a node; the second entry is 0 in one dimension.
    pub fn position(&self, node: usize) -> [f64; 2] {
        let [ix, iy] = self.multi_index(node);
        [ix as f64 * self.h, iy as f64 * self.h]
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        match self.kind {
            GridKind::Torus => false,
            GridKind::DirichletBox => {
                let idx = self.multi_index(node);
                (0..self.dim).any(|d| idx[d] == 0 || idx[d] == self.points_per_dim - 1)
            }
        }
    }

    pub fn is_interior(&self, node: usize) -> bool {
        !self.is_boundary(node)
    }

    pub fn interior_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(move |&i| self.is_interior(i))
    }

    pub fn boundary_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(move |&i| self.is_boundary(i))
    }

    /// Neighbor of `node` one step along `axis` in direction `dir` (+1/-1).
    ///
    /// Wraps on the torus. On the box the neighbor of a boundary node may
    /// leave the domain, which stands for the zero Dirichlet ghost value.
    pub fn neighbor(&self, node: usize, axis: usize, dir: i64) -> Neighbor {
        debug_assert!(axis < self.dim);
        let mut idx = self.multi_index(node);
        let p = self.points_per_dim as i64;
        let moved = idx[axis] as i64 + dir;
        match self.kind {
            GridKind::Torus => {
                idx[axis] = moved.rem_euclid(p) as usize;
                Neighbor::Node(self.flat_index(idx[0], idx[1]))
            }
            GridKind::DirichletBox => {
                if moved < 0 || moved >= p {
                    Neighbor::ZeroGhost
                } else {
                    idx[axis] = moved as usize;
                    Neighbor::Node(self.flat_index(idx[0], idx[1]))
                }
            }
        }
    }

    /// Node whose position is nearest to `x` (componentwise rounding,
    /// wrapped on the torus, clamped on the box).
    pub fn nearest_node(&self, x: [f64; 2]) -> usize {
        let mut idx = [0usize; 2];
        for d in 0..self.dim {
            let raw = (x[d] / self.h).round() as i64;
            idx[d] = match self.kind {
                GridKind::Torus => raw.rem_euclid(self.points_per_dim as i64) as usize,
                GridKind::DirichletBox => raw.clamp(0, self.points_per_dim as i64 - 1) as usize,
            };
        }
        self.flat_index(idx[0], idx[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbor {
    Node(usize),
    /// Off-domain neighbor on a Dirichlet box; carries the value 0.
    ZeroGhost,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_wraps() {
        let g = Grid::torus(1, 8);
        assert_eq!(g.node_count(), 8);
        assert_eq!(g.neighbor(0, 0, -1), Neighbor::Node(7));
        assert_eq!(g.neighbor(7, 0, 1), Neighbor::Node(0));
        assert!(g.boundary_nodes().next().is_none());
    }

    #[test]
    fn box_boundary_set() {
        let g = Grid::dirichlet_box(1, 4);
        assert_eq!(g.node_count(), 5);
        let b: Vec<usize> = g.boundary_nodes().collect();
        assert_eq!(b, vec![0, 4]);
        assert_eq!(g.neighbor(0, 0, -1), Neighbor::ZeroGhost);
        assert_eq!(g.neighbor(4, 0, 1), Neighbor::ZeroGhost);
    }

    #[test]
    fn box_2d_indexing() {
        let g = Grid::dirichlet_box(2, 4);
        assert_eq!(g.node_count(), 25);
        let inner: Vec<usize> = g.interior_nodes().collect();
        assert_eq!(inner.len(), 9);
        for &i in &inner {
            let [ix, iy] = g.multi_index(i);
            assert!(ix >= 1 && ix <= 3 && iy >= 1 && iy <= 3);
        }
        assert_eq!(g.flat_index(2, 3), 2 + 3 * 5);
    }

    #[test]
    fn spacing_times_cells_is_one() {
        for n in [8usize, 12, 100, 4096] {
            let g = Grid::torus(1, n);
            assert_eq!(g.spacing() * n as f64, 1.0);
        }
    }

    #[test]
    fn nearest_node_wraps_and_clamps() {
        let g = Grid::torus(1, 8);
        assert_eq!(g.nearest_node([0.99, 0.0]), 0);
        let b = Grid::dirichlet_box(1, 8);
        assert_eq!(b.nearest_node([1.2, 0.0]), 8);
        assert_eq!(b.nearest_node([0.49, 0.0]), 4);
    }
}
