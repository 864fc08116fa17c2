//! Sparse matrix assembly and a banded LU direct solver.
//!
//! Every Jacobian produced by the solvers is a banded M-matrix (strictly
//! diagonally dominant with nonpositive off-diagonals), so LU without
//! pivoting is stable and fill-in stays inside the band. The factorization
//! also solves transpose systems, which is how the adjoint measures are
//! computed from the same matrix.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("zero pivot at row {row}; the matrix is singular to working precision")]
    SingularPivot { row: usize },
    #[error("dimension mismatch: matrix is {n}x{n}, vector has length {len}")]
    DimensionMismatch { n: usize, len: usize },
}

/// Square sparse matrix stored as sorted adjacency rows.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn zeros(n: usize) -> Self {
        SparseMatrix {
            n,
            rows: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Accumulate `v` into entry `(i, j)`.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.n && j < self.n);
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(pos) => row[pos].1 += v,
            Err(pos) => row.insert(pos, (j, v)),
        }
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self.rows[i].binary_search_by_key(&j, |e| e.0) {
            Ok(pos) => self.rows[i][pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(out.len(), self.n);
        for (i, row) in self.rows.iter().enumerate() {
            out[i] = row.iter().map(|&(j, v)| v * x[j]).sum();
        }
    }

    pub fn matvec_transpose(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(out.len(), self.n);
        out.fill(0.0);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out[j] += v * x[i];
            }
        }
    }

    pub fn bandwidth(&self) -> usize {
        let mut bw = 0usize;
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, _) in row {
                bw = bw.max(i.abs_diff(j));
            }
        }
        bw
    }

    /// Dense copy; intended for small oracle comparisons only.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                d[i][j] = v;
            }
        }
        d
    }

    pub fn factorize(&self) -> Result<BandedLu, LinalgError> {
        BandedLu::from_sparse(self)
    }
}

/// LU factorization of a banded matrix, no pivoting.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    bw: usize,
    /// Row-major band storage: entry (i, j) at `i * (2 bw + 1) + (j - i + bw)`.
    data: Vec<f64>,
}

impl BandedLu {
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i.abs_diff(j) <= self.bw);
        i * (2 * self.bw + 1) + (j + self.bw - i)
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    pub fn from_sparse(a: &SparseMatrix) -> Result<Self, LinalgError> {
        let n = a.n();
        let bw = a.bandwidth().max(1);
        let mut lu = BandedLu {
            n,
            bw,
            data: vec![0.0; n * (2 * bw + 1)],
        };
        for i in 0..n {
            for &(j, v) in a.row(i) {
                let at = lu.idx(i, j);
                lu.data[at] = v;
            }
        }
        lu.factor()?;
        Ok(lu)
    }

    fn factor(&mut self) -> Result<(), LinalgError> {
        let (n, bw) = (self.n, self.bw);
        for k in 0..n {
            let pivot = self.at(k, k);
            if pivot.abs() < 1e-300 {
                return Err(LinalgError::SingularPivot { row: k });
            }
            let imax = (k + bw).min(n - 1);
            for i in k + 1..=imax {
                let l = self.at(i, k) / pivot;
                let at_ik = self.idx(i, k);
                self.data[at_ik] = l;
                if l != 0.0 {
                    let jmax = (k + bw).min(n - 1);
                    for j in k + 1..=jmax {
                        let ukj = self.at(k, j);
                        if ukj != 0.0 {
                            let at_ij = self.idx(i, j);
                            self.data[at_ij] -= l * ukj;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if b.len() != self.n {
            return Err(LinalgError::DimensionMismatch {
                n: self.n,
                len: b.len(),
            });
        }
        let (n, bw) = (self.n, self.bw);
        let mut y = b.to_vec();
        for i in 1..n {
            let j0 = i.saturating_sub(bw);
            let mut s = y[i];
            for j in j0..i {
                s -= self.at(i, j) * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let jmax = (i + bw).min(n - 1);
            let mut s = y[i];
            for j in i + 1..=jmax {
                s -= self.at(i, j) * y[j];
            }
            y[i] = s / self.at(i, i);
        }
        Ok(y)
    }

    /// Solve `A^T x = b` using the same factors (`A^T = U^T L^T`).
    pub fn solve_transpose(&self, b: &[f64]) -> Result<Vec<f64>, LinalgError> {
        if b.len() != self.n {
            return Err(LinalgError::DimensionMismatch {
                n: self.n,
                len: b.len(),
            });
        }
        let (n, bw) = (self.n, self.bw);
        let mut y = b.to_vec();
        // U^T is lower triangular with the U diagonal.
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            let mut s = y[i];
            for j in j0..i {
                s -= self.at(j, i) * y[j];
            }
            y[i] = s / self.at(i, i);
        }
        // L^T is upper triangular with unit diagonal.
        for i in (0..n).rev() {
            let jmax = (i + bw).min(n - 1);
            let mut s = y[i];
            for j in i + 1..=jmax {
                s -= self.at(j, i) * y[j];
            }
            y[i] = s;
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Dense Gaussian elimination with partial pivoting; the independent
    /// oracle for the banded path.
    pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for k in 0..n {
            let piv = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs())).unwrap();
            a.swap(k, piv);
            b.swap(k, piv);
            for i in k + 1..n {
                let l = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] -= l * a[k][j];
                }
                b[i] -= l * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
            x[i] = (b[i] - s) / a[i][i];
        }
        x
    }

    fn random_banded(n: usize, bw: usize, seed: u64) -> SparseMatrix {
        // Diagonally dominant with nonpositive off-diagonals, like the
        // solver Jacobians.
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15) | 1;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut a = SparseMatrix::zeros(n);
        for i in 0..n {
            let mut offsum = 0.0;
            for j in i.saturating_sub(bw)..=(i + bw).min(n - 1) {
                if j != i {
                    let v = -next();
                    offsum += v.abs();
                    a.add(i, j, v);
                }
            }
            a.add(i, i, offsum + 0.5 + next());
        }
        a
    }

    #[test]
    fn banded_matches_dense_oracle() {
        for (n, bw, seed) in [(5, 1, 1u64), (12, 2, 7), (30, 4, 42)] {
            let a = random_banded(n, bw, seed);
            let b: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
            let lu = a.factorize().unwrap();
            let x = lu.solve(&b).unwrap();
            let xd = dense_solve(a.to_dense(), b.clone());
            for (u, v) in x.iter().zip(&xd) {
                assert!((u - v).abs() < 1e-11, "banded {u} vs dense {v}");
            }
            // Transpose solve against the transposed dense system.
            let xt = lu.solve_transpose(&b).unwrap();
            let dense_t: Vec<Vec<f64>> = {
                let d = a.to_dense();
                (0..n).map(|i| (0..n).map(|j| d[j][i]).collect()).collect()
            };
            let xtd = dense_solve(dense_t, b.clone());
            for (u, v) in xt.iter().zip(&xtd) {
                assert!((u - v).abs() < 1e-11, "banded^T {u} vs dense^T {v}");
            }
        }
    }

    #[test]
    fn singular_matrix_is_detected() {
        let mut a = SparseMatrix::zeros(3);
        a.add(0, 0, 1.0);
        a.add(1, 1, 0.0);
        a.add(2, 2, 1.0);
        assert_eq!(
            a.factorize().unwrap_err(),
            LinalgError::SingularPivot { row: 1 }
        );
    }

    proptest! {
        // <J a, b> = <a, J^T b> by construction of matvec_transpose.
        #[test]
        fn transpose_adjoint_identity(seed in 0u64..500) {
            let n = 20;
            let a = random_banded(n, 3, seed);
            let x: Vec<f64> = (0..n).map(|i| ((i as f64) * 0.3 + seed as f64).sin()).collect();
            let y: Vec<f64> = (0..n).map(|i| ((i as f64) * 0.9).cos()).collect();
            let mut ax = vec![0.0; n];
            a.matvec(&x, &mut ax);
            let mut aty = vec![0.0; n];
            a.matvec_transpose(&y, &mut aty);
            let lhs: f64 = ax.iter().zip(&y).map(|(u, v)| u * v).sum();
            let rhs: f64 = x.iter().zip(&aty).map(|(u, v)| u * v).sum();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }

        #[test]
        fn solve_then_multiply_roundtrip(seed in 0u64..200) {
            let n = 24;
            let a = random_banded(n, 2, seed);
            let b: Vec<f64> = (0..n).map(|i| ((i * 7 + 3) as f64 * 0.11).sin()).collect();
            let lu = a.factorize().unwrap();
            let x = lu.solve(&b).unwrap();
            let mut ax = vec![0.0; n];
            a.matvec(&x, &mut ax);
            for (u, v) in ax.iter().zip(&b) {
                prop_assert!((u - v).abs() < 1e-10);
            }
        }
    }
}
