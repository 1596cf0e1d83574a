//! Dense matrix algebra over Z_p: echelon forms, kernels, solving, inversion,
//! Kronecker products and basis extension.
//!
//! The reduced row echelon form doubles as the canonical representative of a
//! row space, so two spanning sets describe the same subspace exactly when
//! their RREFs are identical. Dimensions here stay small (at most ~16), so
//! everything is plain Gaussian elimination.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, FieldSpec, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("rows are linearly dependent")]
    DependentRows,
}

/// A dense row-major matrix over Z_p. Entries are canonical residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<u64>,
}

/// Outcome of row reduction: the RREF together with rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Matrix {
        Matrix { rows, cols, field, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Matrix {
        let mut m = Matrix::zero(n, n, field);
        for i in 0..n {
            m.entries[i * n + i] = 1 % field.modulus();
        }
        m
    }

    /// Build from row vectors of raw residues; values are reduced mod p.
    pub fn from_rows(rows: &[Vec<u64>], cols: usize, field: FieldSpec) -> Result<Matrix, LinalgError> {
        let p = field.modulus();
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::Dimension(format!(
                    "row of length {} in a {}-column matrix",
                    r.len(),
                    cols
                )));
            }
            entries.extend(r.iter().map(|&v| v % p));
        }
        Ok(Matrix { rows: rows.len(), cols, field, entries })
    }

    pub fn row_count(&self) -> usize {
        self.rows
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.field.scalar(self.entries[r * self.cols + c] as i64)
    }

    pub fn get_raw(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "entry from a different field");
        self.entries[r * self.cols + c] = v.value();
    }

    pub fn row(&self, r: usize) -> Vec<u64> {
        self.entries[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn rows_raw(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.cols, self.rows, self.field);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.entries[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.field.same_as(&rhs.field)?;
        if self.cols != rhs.rows {
            return Err(LinalgError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let p = self.field.modulus();
        let mut out = Matrix::zero(self.rows, rhs.cols, self.field);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cell = &mut out.entries[i * rhs.cols + j];
                    *cell = (*cell + a * rhs.entries[k * rhs.cols + j]) % p;
                }
            }
        }
        Ok(out)
    }

    /// Apply the matrix to a coordinate vector (length = cols).
    pub fn apply(&self, v: &[u64]) -> Result<Vec<u64>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Dimension(format!(
                "vector of length {} for a {}-column matrix",
                v.len(),
                self.cols
            )));
        }
        let p = self.field.modulus();
        let mut out = vec![0u64; self.rows];
        for i in 0..self.rows {
            let mut acc = 0u64;
            for j in 0..self.cols {
                acc = (acc + self.entries[i * self.cols + j] % p * (v[j] % p)) % p;
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Reduced row echelon form. Pivot entries are 1 with zeros above and
    /// below; zero rows trail.
    pub fn rref(&self) -> Rref {
        let p = self.field.modulus();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(src) = (pivot_row..m.rows).find(|&r| m.entries[r * m.cols + col] != 0) else {
                continue;
            };
            m.swap_rows(pivot_row, src);
            let lead = self.field.scalar(m.entries[pivot_row * m.cols + col] as i64);
            let inv = lead.inv().expect("pivot is nonzero").value();
            for c in col..m.cols {
                let cell = &mut m.entries[pivot_row * m.cols + c];
                *cell = *cell * inv % p;
            }
            for r in 0..m.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = m.entries[r * m.cols + col];
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = m.entries[pivot_row * m.cols + c] * factor % p;
                    let cell = &mut m.entries[r * m.cols + c];
                    *cell = (*cell + p - v) % p;
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        let rank = pivots.len();
        Rref { matrix: m, rank, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Row basis of `{x : self * x = 0}`, canonical (RREF).
    pub fn kernel(&self) -> Matrix {
        let p = self.field.modulus();
        let Rref { matrix: r, rank, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis_rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u64; self.cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                // x_pc = -sum over free columns of R[i][fc] * x_fc
                v[pc] = (p - r.entries[i * self.cols + fc] % p) % p;
            }
            basis_rows.push(v);
        }
        let _ = rank;
        let m = Matrix::from_rows(&basis_rows, self.cols, self.field).expect("kernel rows conform");
        m.rref().matrix.drop_zero_rows()
    }

    /// Drop trailing all-zero rows (the RREF leaves them at the bottom).
    pub fn drop_zero_rows(&self) -> Matrix {
        let keep: Vec<Vec<u64>> = (0..self.rows)
            .map(|r| self.row(r))
            .filter(|row| row.iter().any(|&v| v != 0))
            .collect();
        Matrix::from_rows(&keep, self.cols, self.field).expect("rows conform")
    }

    /// Some solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Dimension(format!(
                "rhs of length {} for {} equations",
                b.len(),
                self.rows
            )));
        }
        let p = self.field.modulus();
        // Augment with b as an extra column and reduce.
        let mut aug_rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = self.row(r);
            row.push(b[r] % p);
            aug_rows.push(row);
        }
        let aug = Matrix::from_rows(&aug_rows, self.cols + 1, self.field)?;
        let Rref { matrix: r, pivots, .. } = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u64; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.entries[i * (self.cols + 1) + self.cols];
        }
        Ok(Some(x))
    }

    /// Inverse if the matrix has full rank, `None` if singular.
    pub fn invert(&self) -> Result<Option<Matrix>, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut aug_rows = Vec::with_capacity(n);
        for r in 0..n {
            let mut row = self.row(r);
            row.extend((0..n).map(|c| u64::from(c == r)));
            aug_rows.push(row);
        }
        let aug = Matrix::from_rows(&aug_rows, 2 * n, self.field)?;
        let Rref { matrix: red, rank, .. } = aug.rref();
        if rank < n || (0..n).any(|i| red.entries[i * 2 * n + i] != 1 % self.field.modulus()) {
            return Ok(None);
        }
        let inv_rows: Vec<Vec<u64>> = (0..n).map(|r| red.row(r)[n..].to_vec()).collect();
        Ok(Some(Matrix::from_rows(&inv_rows, n, self.field)?))
    }

    /// Kronecker product with row-major (left factor major) index pairing:
    /// `kron(a,b)[(i1,i2),(j1,j2)] = a[i1,j1] * b[i2,j2]`.
    pub fn kron(&self, rhs: &Matrix) -> Result<Matrix, LinalgError> {
        self.field.same_as(&rhs.field)?;
        let p = self.field.modulus();
        let mut out = Matrix::zero(self.rows * rhs.rows, self.cols * rhs.cols, self.field);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.entries[i1 * self.cols + j1];
                if a == 0 {
                    continue;
                }
                for i2 in 0..rhs.rows {
                    for j2 in 0..rhs.cols {
                        let v = a * rhs.entries[i2 * rhs.cols + j2] % p;
                        out.entries[(i1 * rhs.rows + i2) * out.cols + (j1 * rhs.cols + j2)] = v;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Complete independent rows to an invertible square matrix, picking the
    /// lowest-index standard basis vector outside the current span at each
    /// step.
    pub fn extend_to_basis(&self) -> Result<Matrix, LinalgError> {
        if self.rref().rank != self.rows {
            return Err(LinalgError::DependentRows);
        }
        let n = self.cols;
        let mut rows = self.rows_raw();
        for i in 0..n {
            if rows.len() == n {
                break;
            }
            let mut candidate = vec![0u64; n];
            candidate[i] = 1;
            let mut trial = rows.clone();
            trial.push(candidate.clone());
            let m = Matrix::from_rows(&trial, n, self.field)?;
            if m.rref().rank == trial.len() {
                rows.push(candidate);
            }
        }
        let out = Matrix::from_rows(&rows, n, self.field)?;
        debug_assert_eq!(out.rref().rank, n);
        Ok(out)
    }

    /// True when both matrices span the same row space.
    pub fn same_row_space(&self, other: &Matrix) -> bool {
        self.cols == other.cols
            && self.field == other.field
            && self.rref().matrix.drop_zero_rows() == other.rref().matrix.drop_zero_rows()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    fn m(rows: &[Vec<u64>], cols: usize, p: u64) -> Matrix {
        Matrix::from_rows(rows, cols, f(p)).unwrap()
    }

    #[test]
    fn rref_examples() {
        let r = m(&[vec![1, 1], vec![0, 1]], 2, 2).rref();
        assert_eq!(r.matrix, Matrix::identity(2, f(2)));
        assert_eq!(r.rank, 2);

        let r = m(&[vec![1, 1], vec![1, 1]], 2, 2).rref();
        assert_eq!(r.matrix, m(&[vec![1, 1], vec![0, 0]], 2, 2));
        assert_eq!(r.rank, 1);

        // Over Z_5: scale the first row by inv(2)=3, eliminate the second.
        let r = m(&[vec![2, 4], vec![1, 2]], 2, 5).rref();
        assert_eq!(r.matrix, m(&[vec![1, 2], vec![0, 0]], 2, 5));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn rref_is_idempotent_and_canonical() {
        let a = m(&[vec![1, 1, 0], vec![0, 1, 1]], 3, 2);
        let b = m(&[vec![1, 0, 1], vec![0, 1, 1]], 3, 2); // same span, different rows
        let ra = a.rref().matrix;
        assert_eq!(ra.rref().matrix, ra);
        assert!(a.same_row_space(&b));
        let c = m(&[vec![1, 0, 0], vec![0, 1, 1]], 3, 2);
        assert!(!a.same_row_space(&c));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(2, f(2)).kernel().row_count(), 0);
        let k = m(&[vec![1, 1]], 2, 2).kernel();
        assert_eq!(k.rows_raw(), vec![vec![1, 1]]);
        assert_eq!(m(&[vec![0, 0, 0]], 3, 3).kernel().row_count(), 3);
    }

    #[test]
    fn rank_nullity_exhaustive_over_z2() {
        // All 2x2 and 2x3 matrices over Z_2.
        for cols in [2usize, 3] {
            let cells = 2 * cols;
            for mask in 0u32..(1 << cells) {
                let rows: Vec<Vec<u64>> = (0..2)
                    .map(|r| (0..cols).map(|c| u64::from(mask >> (r * cols + c) & 1 == 1)).collect())
                    .collect();
                let mat = m(&rows, cols, 2);
                assert_eq!(mat.rank() + mat.kernel().row_count(), cols);
            }
        }
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(2, f(2));
        assert_eq!(id.solve(&[1, 0]).unwrap(), Some(vec![1, 0]));
        assert_eq!(m(&[vec![1, 1], vec![1, 1]], 2, 2).solve(&[1, 0]).unwrap(), None);
        let a = m(&[vec![1, 1], vec![0, 1]], 2, 3);
        assert_eq!(a.solve(&[2, 1]).unwrap(), Some(vec![1, 1]));
    }

    #[test]
    fn invert_examples() {
        let id = Matrix::identity(2, f(2));
        assert_eq!(id.invert().unwrap(), Some(id.clone()));
        let swap = m(&[vec![0, 1], vec![1, 0]], 2, 2);
        assert_eq!(swap.invert().unwrap(), Some(swap.clone()));
        let u = m(&[vec![1, 1], vec![0, 1]], 2, 2);
        let ui = u.invert().unwrap().unwrap();
        assert_eq!(ui, u); // self-inverse in characteristic 2
        assert_eq!(u.mul(&ui).unwrap(), id);
        assert!(m(&[vec![1, 1], vec![1, 1]], 2, 2).invert().unwrap().is_none());
        assert!(m(&[vec![1, 1]], 2, 2).invert().is_err());
    }

    #[test]
    fn kron_examples() {
        let id2 = Matrix::identity(2, f(2));
        assert_eq!(id2.kron(&id2).unwrap(), Matrix::identity(4, f(2)));
        let ket0 = m(&[vec![1], vec![0]], 1, 2);
        let ket1 = m(&[vec![0], vec![1]], 1, 2);
        assert_eq!(ket0.kron(&ket1).unwrap(), m(&[vec![0], vec![1], vec![0], vec![0]], 1, 2));
        let sigma = m(&[vec![1], vec![1]], 1, 2);
        assert_eq!(
            sigma.kron(&sigma).unwrap(),
            m(&[vec![1], vec![1], vec![1], vec![1]], 1, 2)
        );
    }

    #[test]
    fn extend_to_basis_examples() {
        // Greedy completion: e1 is independent of (1,1), so it is picked.
        let e = m(&[vec![1, 1]], 2, 2).extend_to_basis().unwrap();
        assert_eq!(e, m(&[vec![1, 1], vec![1, 0]], 2, 2));

        let full = Matrix::identity(3, f(3));
        assert_eq!(full.extend_to_basis().unwrap(), full);

        let empty = Matrix::from_rows(&[], 2, f(2)).unwrap();
        assert_eq!(empty.extend_to_basis().unwrap(), Matrix::identity(2, f(2)));

        assert!(m(&[vec![1, 1], vec![1, 1]], 2, 2).extend_to_basis().is_err());
    }

    proptest! {
        #[test]
        fn kron_mixed_product(seed in 0u64..500) {
            // kron(a,b) * kron(c,d) = kron(a*c, b*d) on random conforming triples.
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = *[2u64, 3, 5].iter().nth(rng.gen_range(0..3)).unwrap();
            let field = f(p);
            let dims: Vec<usize> = (0..6).map(|_| rng.gen_range(1..=3)).collect();
            let rnd = |r: usize, c: usize, rng: &mut rand_chacha::ChaCha8Rng| {
                let rows: Vec<Vec<u64>> =
                    (0..r).map(|_| (0..c).map(|_| rng.gen_range(0..p)).collect()).collect();
                Matrix::from_rows(&rows, c, field).unwrap()
            };
            let a = rnd(dims[0], dims[1], &mut rng);
            let c = rnd(dims[1], dims[2], &mut rng);
            let b = rnd(dims[3], dims[4], &mut rng);
            let d = rnd(dims[4], dims[5], &mut rng);
            let lhs = a.kron(&b).unwrap().mul(&c.kron(&d).unwrap()).unwrap();
            let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn invert_round_trip(seed in 0u64..300) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = *[2u64, 3, 7].iter().nth(rng.gen_range(0..3)).unwrap();
            let field = f(p);
            let n = rng.gen_range(1..=4);
            let rows: Vec<Vec<u64>> =
                (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
            let mat = Matrix::from_rows(&rows, n, field).unwrap();
            if let Some(inv) = mat.invert().unwrap() {
                prop_assert_eq!(inv.mul(&mat).unwrap(), Matrix::identity(n, field));
            } else {
                prop_assert!(mat.rank() < n);
            }
        }
    }
}
