//! Small dense square matrices over a [`Field`].
//!
//! Indices are zero-based here; row `n` of a Bell matrix in the usual
//! one-based notation is row `n - 1`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T = Scalar> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![T::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Matrix { dim, data }
    }

    /// Panics if `rows` is not square.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix rows must form a square");
        Matrix { dim, data: rows.into_iter().flatten().collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        if self.dim == 0 {
            return Vec::new();
        }
        self.data.chunks(self.dim).map(<[T]>::to_vec).collect()
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }

    pub fn scale(&self, s: T) -> Self {
        Matrix { dim: self.dim, data: self.data.iter().map(|&v| v * s).collect() }
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(&a, &b)| (a - b).magnitude()).fold(0.0, f64::max)
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.dim).all(|r| (r + 1..self.dim).all(|c| self[(r, c)].magnitude() == 0.0))
    }

    /// Leading `dim x dim` block.
    pub fn leading(&self, dim: usize) -> Self {
        assert!(dim <= self.dim);
        Self::from_fn(dim, |r, c| self[(r, c)])
    }

    pub fn map<U: Field>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix { dim: self.dim, data: self.data.iter().map(|&v| f(v)).collect() }
    }

    pub fn to_scalar(&self) -> Matrix<Scalar> {
        self.map(T::to_scalar)
    }

    pub fn convert<U: Field>(&self) -> Matrix<U> {
        self.map(|v| U::from_wide(v.to_wide()))
    }

    /// Product that skips the zero upper triangles of both factors.
    pub fn mul_lower(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        Self::from_fn(self.dim, |r, c| {
            if c > r {
                return T::zero();
            }
            (c..=r).fold(T::zero(), |acc, k| acc + self[(r, k)] * rhs[(k, c)])
        })
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        &self.data[r * self.dim + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        &mut self.data[r * self.dim + c]
    }
}

impl<T: Field> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        Matrix::from_fn(self.dim, |r, c| (0..self.dim).fold(T::zero(), |acc, k| acc + self[(r, k)] * rhs[(k, c)]))
    }
}

impl<T: Field> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        Matrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect() }
    }
}

impl<T: Field> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        Matrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect() }
    }
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn determinant<T: Field>(mut m: Matrix<T>) -> T {
    let n = m.dim;
    let mut det = T::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[(a, col)].magnitude().total_cmp(&m[(b, col)].magnitude()))
            .expect("non-empty pivot range");
        if m[(pivot, col)].magnitude() == 0.0 {
            return T::zero();
        }
        if pivot != col {
            for c in 0..n {
                let tmp = m[(col, c)];
                m[(col, c)] = m[(pivot, c)];
                m[(pivot, c)] = tmp;
            }
            det = -det;
        }
        let p = m[(col, col)];
        det = det * p;
        for r in col + 1..n {
            let factor = m[(r, col)].quot(p);
            for c in col..n {
                let v = m[(col, c)];
                m[(r, c)] = m[(r, c)] - factor * v;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Wide;

    fn s(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    #[test]
    fn product_and_identity() {
        let a = Matrix::from_rows(vec![vec![s(1.0), s(2.0)], vec![s(3.0), s(4.0)]]);
        let i = Matrix::identity(2);
        assert_eq!(&a * &i, a);
        let sq = &a * &a;
        assert_eq!(sq[(0, 0)], s(7.0));
        assert_eq!(sq[(1, 1)], s(22.0));
        assert_eq!(a.trace(), s(5.0));
    }

    #[test]
    fn lower_product_matches_dense() {
        let l = Matrix::from_fn(4, |r, c| if c <= r { s((r * 4 + c) as f64 + 1.0) } else { s(0.0) });
        assert_eq!(l.mul_lower(&l), &l * &l);
        assert!(l.is_lower_triangular());
        assert_eq!(l.rows().len(), 4);
    }

    #[test]
    fn determinant_small() {
        let m = Matrix::from_rows(vec![
            vec![s(2.0), s(0.0), s(1.0)],
            vec![s(1.0), s(3.0), s(2.0)],
            vec![s(1.0), s(1.0), s(1.0)],
        ]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(determinant(m).norm() < 1e-15);
        let w: Matrix<Wide> = Matrix::from_rows(vec![vec![Wide::from_f64(0.0), Wide::from_f64(1.0)], vec![Wide::from_f64(1.0), Wide::from_f64(0.0)]]);
        assert_eq!(determinant(w).to_scalar(), s(-1.0));
    }
}
