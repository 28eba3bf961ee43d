//! Bell polynomials and Bell matrices.
//!
//! `B_nk[g]` is the coefficient of `t^n / n!` in `g(t)^k / k!`. Laid out as a
//! lower-triangular matrix with row `n` and column `k`, these polynomials
//! give the anti-representation `B[g] B[f] = B[f ∘ g]` of series composition,
//! so inversion and integer iteration of a map become matrix inversion and
//! matrix powers.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};
use crate::series::FormalSeries;

/// Rows `0..=n` of Pascal's triangle.
pub(crate) fn binomials(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut row = vec![1.0; m + 1];
        for k in 1..m {
            row[k] = rows[m - 1][k - 1] + rows[m - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// All `B_nk` for `1 <= k <= n <= g.len()`, entry `(n-1, k-1)`.
///
/// Uses `B_nk = Σ_{j=1}^{n-k+1} C(n-1, j-1) g_j B_{n-j,k-1}` with
/// `B_00 = 1` and `B_n0 = 0`, filling the table row by row.
pub(crate) fn bell_table<T: Field>(g: &[T]) -> Matrix<T> {
    let order = g.len();
    let binom = binomials(order);
    // table[n][k], n and k from 0
    let mut table = vec![vec![T::zero(); order + 1]; order + 1];
    table[0][0] = T::one();
    for n in 1..=order {
        for k in 1..=n {
            let mut acc = T::zero();
            for j in 1..=n - k + 1 {
                let prev = table[n - j][k - 1];
                acc = acc + T::from_f64(binom[n - 1][j - 1]) * g[j - 1] * prev;
            }
            table[n][k] = acc;
        }
    }
    Matrix::from_fn(order, |r, c| table[r + 1][c + 1])
}

/// Single Bell polynomial `B_nk(g_1, ..., g_{n-k+1})`.
///
/// Missing coefficients are taken as zero.
pub fn bell_polynomial(n: usize, k: usize, coeffs: &[Scalar]) -> Result<Scalar> {
    if k < 1 || k > n {
        return Err(Error::BellIndex { n, k });
    }
    let mut g = coeffs.to_vec();
    g.resize(n, Scalar::default());
    Ok(bell_table(&g)[(n - 1, k - 1)])
}

/// Truncated `N x N` Bell matrix of a series.
#[derive(Clone, Debug, PartialEq)]
pub struct BellMatrix {
    entries: Matrix<Scalar>,
}

impl BellMatrix {
    pub(crate) fn of(series: &FormalSeries) -> Self {
        BellMatrix { entries: bell_table(series.taylor()) }
    }

    pub fn identity(order: usize) -> Self {
        BellMatrix { entries: Matrix::identity(order) }
    }

    pub fn order(&self) -> usize {
        self.entries.dim()
    }

    /// `B_nk` with one-based indices; zero above the diagonal.
    pub fn entry(&self, n: usize, k: usize) -> Scalar {
        self.entries[(n - 1, k - 1)]
    }

    pub fn matrix(&self) -> &Matrix<Scalar> {
        &self.entries
    }

    /// The plain product `self · rhs`. For `self = B[g]` and `rhs = B[f]`
    /// this is `B[f ∘ g]`.
    pub fn multiply(&self, rhs: &BellMatrix) -> Result<BellMatrix> {
        if self.order() != rhs.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: rhs.order() });
        }
        Ok(BellMatrix { entries: self.entries.mul_lower(&rhs.entries) })
    }

    /// Triangular inverse by forward substitution.
    pub fn inverse(&self, tolerances: &Tolerances) -> Result<BellMatrix> {
        let g1 = self.entries[(0, 0)];
        if g1.norm() <= tolerances.singular {
            return Err(Error::SingularMap { magnitude: g1.norm(), threshold: tolerances.singular });
        }
        let n = self.order();
        let l = &self.entries;
        let mut inv = Matrix::<Scalar>::zeros(n);
        for c in 0..n {
            inv[(c, c)] = Scalar::new(1.0, 0.0) / l[(c, c)];
            for r in c + 1..n {
                let acc = (c..r).fold(Scalar::default(), |acc, k| acc + l[(r, k)] * inv[(k, c)]);
                inv[(r, c)] = -acc / l[(r, r)];
            }
        }
        Ok(BellMatrix { entries: inv })
    }

    /// `B^n` by binary exponentiation.
    pub fn pow(&self, mut n: u64) -> BellMatrix {
        let mut base = self.entries.clone();
        let mut acc = Matrix::identity(self.order());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_lower(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_lower(&base);
            }
        }
        BellMatrix { entries: acc }
    }

    /// Series read off the first column.
    pub fn series(&self) -> FormalSeries {
        FormalSeries::from_taylor(self.entries.column(0)).expect("Bell matrices have order >= 1 and finite entries")
    }
}

pub fn bell_matrix(series: &FormalSeries) -> BellMatrix {
    series.bell_matrix().clone()
}

/// `B[g] · B[f]`, equal to `B[f ∘ g]`.
pub fn multiply(bg: &BellMatrix, bf: &BellMatrix) -> Result<BellMatrix> {
    bg.multiply(bf)
}

pub fn series_of(b: &BellMatrix) -> FormalSeries {
    b.series()
}

/// Compositional inverse `s^⟨-1⟩`, read off `B⁻¹[s]`.
pub fn invert_series(s: &FormalSeries) -> Result<FormalSeries> {
    invert_series_with(s, &Tolerances::default())
}

pub fn invert_series_with(s: &FormalSeries, tolerances: &Tolerances) -> Result<FormalSeries> {
    Ok(s.bell_matrix().inverse(tolerances)?.series())
}

/// `s^⟨n⟩`; `n = 0` gives the identity series.
pub fn iterate_integer(s: &FormalSeries, n: u64) -> FormalSeries {
    s.bell_matrix().pow(n).series()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Scalar {
        Scalar::new(x, 0.0)
    }

    fn log1p(order: usize) -> FormalSeries {
        let mut coeffs = Vec::new();
        let mut fact = 1.0;
        for j in 1..=order {
            if j > 1 {
                fact *= (j - 1) as f64;
            }
            coeffs.push(if j % 2 == 1 { fact } else { -fact });
        }
        FormalSeries::from_real_taylor(&coeffs).unwrap()
    }

    #[test]
    fn pascal() {
        let b = binomials(5);
        assert_eq!(b[4], vec![1.0, 4.0, 6.0, 4.0, 1.0]);
        assert_eq!(b[0], vec![1.0]);
    }

    #[test]
    fn bell_polynomial_values() {
        let g = [c(1.5), c(-0.7), c(2.2), c(0.9)];
        let b42 = bell_polynomial(4, 2, &g).unwrap();
        let expected = c(4.0) * g[0] * g[2] + c(3.0) * g[1] * g[1];
        assert!((b42 - expected).norm() < 1e-14);

        for n in 1..=6 {
            assert_eq!(bell_polynomial(n, n, &[c(2.0)]).unwrap(), c(2f64.powi(n as i32)));
        }
        assert_eq!(bell_polynomial(4, 2, &[c(1.0); 4]).unwrap(), c(7.0));
        assert_eq!(bell_polynomial(3, 1, &[c(1.0), c(2.0), c(5.0)]).unwrap(), c(5.0));
        assert_eq!(bell_polynomial(2, 3, &[c(1.0)]), Err(Error::BellIndex { n: 2, k: 3 }));
        assert_eq!(bell_polynomial(2, 0, &[c(1.0)]), Err(Error::BellIndex { n: 2, k: 0 }));
    }

    #[test]
    fn generic_layout_at_order_five() {
        let g: Vec<Scalar> = [0.9, -1.3, 0.4, 2.1, -0.6].iter().map(|&x| c(x)).collect();
        let s = FormalSeries::from_taylor(g.clone()).unwrap();
        let b = bell_matrix(&s);
        let (g1, g2, g3, g4) = (g[0], g[1], g[2], g[3]);
        let expected = [
            (3, 2, c(3.0) * g1 * g2),
            (4, 2, c(4.0) * g1 * g3 + c(3.0) * g2 * g2),
            (4, 3, c(6.0) * g1 * g1 * g2),
            (5, 2, c(10.0) * g2 * g3 + c(5.0) * g1 * g4),
            (5, 3, c(15.0) * g1 * g2 * g2 + c(10.0) * g1 * g1 * g3),
            (5, 4, c(10.0) * g1 * g1 * g1 * g2),
        ];
        for (n, k, v) in expected {
            assert!((b.entry(n, k) - v).norm() < 1e-14, "entry ({n},{k})");
        }
        for n in 1..=5 {
            assert_eq!(b.entry(n, 1), g[n - 1]);
            assert!((b.entry(n, n) - g1.powu(n as u64)).norm() < 1e-15);
        }
        assert!(b.matrix().is_lower_triangular());
    }

    #[test]
    fn identity_and_stirling_first_kind() {
        assert_eq!(bell_matrix(&FormalSeries::identity(4)), BellMatrix::identity(4));
        // s_n^(k) for n <= 5, signed
        let s = [
            [1.0, 0.0, 0.0, 0.0, 0.0],
            [-1.0, 1.0, 0.0, 0.0, 0.0],
            [2.0, -3.0, 1.0, 0.0, 0.0],
            [-6.0, 11.0, -6.0, 1.0, 0.0],
            [24.0, -50.0, 35.0, -10.0, 1.0],
        ];
        let b = bell_matrix(&log1p(5));
        for n in 1..=5 {
            for k in 1..=5 {
                assert_eq!(b.entry(n, k), c(s[n - 1][k - 1]), "s({n},{k})");
            }
        }
    }

    #[test]
    fn stirling_matrices_are_inverse() {
        let expm1 = FormalSeries::from_real_taylor(&[1.0; 8]).unwrap();
        let prod = multiply(&bell_matrix(&log1p(8)), &bell_matrix(&expm1)).unwrap();
        assert!(prod.matrix().max_abs_diff(&Matrix::identity(8)) < 1e-12);
    }

    #[test]
    fn multiply_checks_order() {
        let a = BellMatrix::identity(3);
        let b = BellMatrix::identity(4);
        assert_eq!(multiply(&a, &b), Err(Error::OrderMismatch { left: 3, right: 4 }));
        let g = bell_matrix(&log1p(4));
        assert_eq!(multiply(&g, &BellMatrix::identity(4)).unwrap(), g);
    }

    #[test]
    fn series_round_trip() {
        let g = FormalSeries::from_real_taylor(&[0.4, 1.0, -2.0]).unwrap();
        assert_eq!(series_of(&bell_matrix(&g)), g);
        assert!(series_of(&BellMatrix::identity(3)).is_identity());
        let squared = bell_matrix(&g).pow(2).series();
        assert!(squared.max_abs_diff(&g.compose(&g)) < 1e-14);
    }

    #[test]
    fn inversion() {
        let inv = invert_series(&log1p(6)).unwrap();
        assert!(inv.max_abs_diff(&FormalSeries::from_real_taylor(&[1.0; 6]).unwrap()) < 1e-12);
        assert!(invert_series(&FormalSeries::identity(5)).unwrap().is_identity());

        let singular = FormalSeries::from_real_taylor(&[1e-13, 1.0]).unwrap();
        assert!(matches!(invert_series(&singular), Err(Error::SingularMap { .. })));
        let zero = FormalSeries::from_real_taylor(&[0.0, 1.0]).unwrap();
        // a singular matrix is still a valid Bell matrix
        assert_eq!(bell_matrix(&zero).entry(2, 2), c(0.0));
        assert!(invert_series(&zero).is_err());
    }

    #[test]
    fn integer_iteration() {
        let g = FormalSeries::from_real_taylor(&[4.0, -8.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(iterate_integer(&g, 0).is_identity());
        assert_eq!(iterate_integer(&g, 1), g);
        let triple = g.compose(&g.compose(&g));
        let it = iterate_integer(&g, 3);
        assert!(it.max_abs_diff(&triple) <= 1e-12 * triple.max_abs());
        // logistic x3 is a degree-8 polynomial: g3(x) = 64x - 1344x^2 + ...
        assert_eq!(it.coeff(1), c(64.0));
    }
}
