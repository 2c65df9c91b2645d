//! Small dense matrices over any [`Scalar`] backend.
//!
//! Elimination picks the largest pivot by magnitude, which is harmless on the
//! exact backend and keeps the float backend stable.

use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data: Vec<S> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged rows");
        Matrix { rows: r, cols: c, data }
    }

    pub fn diag(d: &[S]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { S::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, o: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let mut out: Matrix<S> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let t = a.clone() * b.clone();
                    out[(i, j)] = out[(i, j)].clone() + t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn add(&self, o: &Matrix<S>) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Matrix<S>) -> Self {
        self.add(&o.scale(&-S::one()))
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |a, i| a + self[(i, i)].clone())
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)].clone() - self[(j, i)].clone()).is_negligible(tol)))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Submatrix on the given row and column index lists.
    pub fn minor(&self, rs: &[usize], cs: &[usize]) -> Self {
        Self::from_fn(rs.len(), cs.len(), |i, j| self[(rs[i], cs[j])].clone())
    }

    pub fn det(&self) -> S {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        match n {
            0 => return S::one(),
            1 => return self.data[0].clone(),
            2 => {
                return self.data[0].clone() * self.data[3].clone() - self.data[1].clone() * self.data[2].clone()
            }
            _ => {}
        }
        let mut a = self.clone();
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = pivot_row(&a, c, c, 0.0) else {
                return S::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a[(c, c)].clone();
            det = det * piv.clone();
            for r in c + 1..n {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone() / piv.clone();
                for k in c..n {
                    let t = f.clone() * a[(c, k)].clone();
                    a[(r, k)] = a[(r, k)].clone() - t;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    /// `tol` is relative to the largest entry and ignored on exact backends.
    pub fn rref(&mut self, tol: f64) -> Vec<usize> {
        let abs_tol = tol * self.max_abs().max(1e-300);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = pivot_row(self, r, c, abs_tol) else {
                continue;
            };
            self.swap_rows(p, r);
            let piv = self[(r, c)].clone();
            for k in c..self.cols {
                self[(r, k)] = self[(r, k)].clone() / piv.clone();
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for k in c..self.cols {
                    let t = f.clone() * self[(r, k)].clone();
                    self[(i, k)] = self[(i, k)].clone() - t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.clone().rref(tol).len()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        let piv = aug.rref(1e-13);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| aug[(i, j + n)].clone()))
    }

    /// Some solution `x` of `self * x = b`, or `None` if inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[S], tol: f64) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let n = self.cols;
        let mut aug = Self::from_fn(self.rows, n + 1, |i, j| if j < n { self[(i, j)].clone() } else { b[i].clone() });
        let scale = self.max_abs().max(b.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max));
        let piv = aug.rref(tol);
        if piv.last() == Some(&n) {
            return None;
        }
        // Rows beyond the pivots must be (numerically) zero in the last column.
        let abs_tol = tol * scale.max(1e-300) * 10.0;
        for i in piv.len()..self.rows {
            if !aug[(i, n)].is_negligible(abs_tol) {
                return None;
            }
        }
        let mut x = vec![S::zero(); n];
        for (r, &c) in piv.iter().enumerate() {
            x[c] = aug[(r, n)].clone();
        }
        Some(x)
    }

    /// Basis of the right null space.
    pub fn nullspace(&self, tol: f64) -> Vec<Vec<S>> {
        let mut a = self.clone();
        let piv = a.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (r, &c) in piv.iter().enumerate() {
                    v[c] = -a[(r, f)].clone();
                }
                v
            })
            .collect()
    }
}

fn pivot_row<S: Scalar>(a: &Matrix<S>, from: usize, col: usize, abs_tol: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for r in from..a.rows {
        let x = &a[(r, col)];
        if x.is_zero() || x.is_negligible(abs_tol) {
            continue;
        }
        let m = x.to_f64().abs();
        if S::EXACT {
            // Any nonzero pivot is exact.
            return Some(r);
        }
        if best.map_or(true, |(_, b)| m > b) {
            best = Some((r, m));
        }
    }
    best.map(|(r, _)| r)
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};

    fn m(rows: &[&[i64]]) -> Matrix<Q> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x, 1)).collect()).collect())
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), q(18, 1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_and_nullspace() {
        let a = m(&[&[1, 1, 1], &[1, -1, 0]]);
        let x = a.solve(&[q(3, 1), q(0, 1)], 0.0).unwrap();
        assert_eq!(a.mul_vec(&x), vec![q(3, 1), q(0, 1)]);
        let ns = a.nullspace(0.0);
        assert_eq!(ns.len(), 1);
        assert_eq!(a.mul_vec(&ns[0]), vec![q(0, 1), q(0, 1)]);
        let bad = m(&[&[1, 1], &[1, 1]]);
        assert!(bad.solve(&[q(1, 1), q(2, 1)], 0.0).is_none());
    }

    #[test]
    fn float_rank_tolerance() {
        let a = Matrix::from_rows(vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-15]]);
        assert_eq!(a.rank(1e-10), 1);
        assert_eq!(a.rank(0.0), 2);
    }
}
