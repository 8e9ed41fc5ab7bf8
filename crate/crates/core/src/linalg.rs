//! Exact Gaussian elimination over any [`Scalar`] field: rank, reduced row
//! echelon form, nullspace, inverse, determinant. No pivot-size heuristics
//! are needed since arithmetic is exact.

use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    pub rows: usize,
    pub cols: usize,
    a: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            a: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &S {
        &self.a[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut S {
        &mut self.a[i * self.cols + j]
    }

    pub fn rows_vec(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, o: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, o.rows);
        let mut out = Matrix::<S>::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let lik = self.at(i, k);
                if lik.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let add = lik.clone() * o.at(k, j);
                    *out.at_mut(i, j) = out.at(i, j).clone() + add;
                }
            }
        }
        out
    }

    /// In-place reduction to reduced row echelon form.
    /// Returns the pivot columns in order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, col).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.at(r, col).inv().unwrap();
            for j in col..self.cols {
                *self.at_mut(r, j) = self.at(r, j).clone() * &inv;
            }
            for i in 0..self.rows {
                if i == r || self.at(i, col).is_zero() {
                    continue;
                }
                let f = self.at(i, col).clone();
                for j in col..self.cols {
                    let sub = f.clone() * self.at(r, j);
                    *self.at_mut(i, j) = self.at(i, j).clone() - sub;
                }
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.cols {
            self.a.swap(i * self.cols + k, j * self.cols + k);
        }
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(
            self.cols,
            (0..self.rows).map(|i| self.row(i).to_vec()),
        )
    }

    /// Basis of the right nullspace {x : A x = 0}.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut x = vec![S::zero(); self.cols];
            x[free] = S::one();
            for (col, pr) in pivot_set.iter().enumerate() {
                if let Some(r) = pr {
                    x[col] = -(m.at(*r, free).clone());
                }
            }
            basis.push(x);
        }
        basis
    }

    /// Inverse of a square matrix; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<S>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = S::one();
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(k, &c)| c != k) {
            return None;
        }
        let mut inv = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                *inv.at_mut(i, j) = aug.at(i, n + j).clone();
            }
        }
        Some(inv)
    }

    /// Determinant by elimination with row swaps.
    pub fn det(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !m.at(i, col).is_zero()) else {
                return S::zero();
            };
            if p != col {
                m.swap_rows(col, p);
                det = -det;
            }
            let pivot = m.at(col, col).clone();
            det = det * &pivot;
            let inv = pivot.inv().unwrap();
            for i in col + 1..n {
                if m.at(i, col).is_zero() {
                    continue;
                }
                let f = m.at(i, col).clone() * &inv;
                for j in col..n {
                    let sub = f.clone() * m.at(col, j);
                    *m.at_mut(i, j) = m.at(i, j).clone() - sub;
                }
            }
        }
        det
    }
}

/// Rank of a row iterator, processing rows incrementally so that large sparse
/// systems (the cocycle system is ~875 rows) never materialize at once.
/// Pivot rows are kept pivot-normalized.
pub fn rank_of_rows<S: Scalar, I>(cols: usize, rows: I) -> usize
where
    I: IntoIterator<Item = Vec<S>>,
{
    // pivots[k] = (pivot column, reduced row)
    let mut pivots: Vec<(usize, Vec<S>)> = Vec::new();
    for mut row in rows {
        debug_assert_eq!(row.len(), cols);
        for (pc, prow) in &pivots {
            if row[*pc].is_zero() {
                continue;
            }
            let f = std::mem::replace(&mut row[*pc], S::zero());
            for j in *pc + 1..cols {
                if prow[j].is_zero() {
                    continue;
                }
                let sub = f.clone() * &prow[j];
                row[j] = row[j].clone() - sub;
            }
        }
        if let Some(lead) = row.iter().position(|x| !x.is_zero()) {
            let inv = row[lead].inv().unwrap();
            for x in row.iter_mut().skip(lead) {
                if !x.is_zero() {
                    *x = x.clone() * &inv;
                }
            }
            let at = pivots.partition_point(|(pc, _)| *pc < lead);
            pivots.insert(at, (lead, row));
        }
    }
    pivots.len()
}
