//! Bell matrices over the rationals.
//!
//! Used as an independent oracle for the floating-point kernels and for the
//! Stirling tables, which are Bell matrices of `e^x - 1` and `log(1 + x)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Exact coefficient field. Values are always reduced with a positive
/// denominator.
pub type RationalScalar = BigRational;

/// Lower-triangular `N x N` Bell matrix with rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactBellMatrix {
    rows: Vec<Vec<BigRational>>,
}

fn binomial_rows(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![BigInt::one(); i + 1];
        for j in 1..i {
            row[j] = &rows[i - 1][j - 1] + &rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

/// Bell matrix of the series with Taylor coefficients `g_1..g_N`.
pub fn exact_bell_matrix(g: &[BigRational]) -> Result<ExactBellMatrix> {
    let n = g.len();
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    let binom = binomial_rows(n);
    // b[m][k] for 0 <= k <= m <= n, with b[0][0] = 1
    let mut b = vec![vec![BigRational::zero(); n + 1]; n + 1];
    b[0][0] = BigRational::one();
    for m in 1..=n {
        for k in 1..=m {
            let mut acc = BigRational::zero();
            for j in 1..=m - k + 1 {
                let prev = &b[m - j][k - 1];
                if prev.is_zero() || g[j - 1].is_zero() {
                    continue;
                }
                acc += BigRational::from_integer(binom[m - 1][j - 1].clone()) * &g[j - 1] * prev;
            }
            b[m][k] = acc;
        }
    }
    Ok(ExactBellMatrix { rows: (1..=n).map(|m| b[m][1..=n].to_vec()).collect() })
}

impl ExactBellMatrix {
    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|r| (0..n).map(|c| if r == c { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        ExactBellMatrix { rows }
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    /// `B_nk`, one-based; zero above the diagonal.
    pub fn entry(&self, n: usize, k: usize) -> &BigRational {
        &self.rows[n - 1][k - 1]
    }

    /// First column.
    pub fn series(&self) -> Vec<BigRational> {
        self.rows.iter().map(|r| r[0].clone()).collect()
    }

    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        let n = self.order();
        if rhs.order() != n {
            return Err(Error::OrderMismatch { left: n, right: rhs.order() });
        }
        let rows = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        let mut acc = BigRational::zero();
                        for k in c..=r {
                            acc += &self.rows[r][k] * &rhs.rows[k][c];
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Ok(ExactBellMatrix { rows })
    }

    /// Rounds every entry to the nearest double.
    pub fn to_matrix(&self) -> Matrix<Scalar> {
        Matrix::from_fn(self.order(), |r, c| Scalar::new(to_f64(&self.rows[r][c]), 0.0))
    }
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a double.
pub fn from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub fn from_integers(g: &[i64]) -> Vec<BigRational> {
    g.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()
}

/// `(f ∘ g)_n = Σ_k f_k B_nk[g]`.
pub fn exact_compose(f: &[BigRational], g: &[BigRational]) -> Result<Vec<BigRational>> {
    if f.len() != g.len() {
        return Err(Error::OrderMismatch { left: f.len(), right: g.len() });
    }
    let b = exact_bell_matrix(g)?;
    Ok((1..=g.len())
        .map(|n| (1..=n).fold(BigRational::zero(), |acc, k| acc + &f[k - 1] * b.entry(n, k)))
        .collect())
}

/// Triangular inverse by forward substitution.
pub fn exact_invert(b: &ExactBellMatrix) -> Result<ExactBellMatrix> {
    let n = b.order();
    if let Some(i) = (0..n).find(|&i| b.rows[i][i].is_zero()) {
        return Err(Error::ZeroDiagonal { index: i + 1 });
    }
    let mut inv = vec![vec![BigRational::zero(); n]; n];
    for c in 0..n {
        inv[c][c] = b.rows[c][c].recip();
        for r in c + 1..n {
            let mut acc = BigRational::zero();
            for k in c..r {
                acc += &b.rows[r][k] * &inv[k][c];
            }
            inv[r][c] = -acc / &b.rows[r][r];
        }
    }
    Ok(ExactBellMatrix { rows: inv })
}

/// Compositional inverse series, read from the first column of `B[g]⁻¹`.
pub fn exact_invert_series(g: &[BigRational]) -> Result<Vec<BigRational>> {
    Ok(exact_invert(&exact_bell_matrix(g)?)?.series())
}

/// Lower-triangular integer table, `table[n - 1][k - 1]` holding entry `(n, k)`.
pub type IntegerTable = Vec<Vec<BigInt>>;

fn integer_table(b: &ExactBellMatrix) -> IntegerTable {
    b.rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|q| {
                    debug_assert!(q.is_integer());
                    q.to_integer()
                })
                .collect()
        })
        .collect()
}

/// `(s, S)`: signed Stirling numbers of the first kind and Stirling numbers
/// of the second kind, as full `N x N` tables.
///
/// They are the Bell matrices of `log(1 + x)` and `e^x - 1`.
pub fn exact_stirling_tables(n: usize) -> Result<(IntegerTable, IntegerTable)> {
    let mut factorial = BigInt::one();
    let mut log = Vec::with_capacity(n);
    for j in 1..=n {
        // log(1+x) has Taylor coefficients (-1)^(j-1) (j-1)!
        let v = if j % 2 == 1 { factorial.clone() } else { -factorial.clone() };
        log.push(BigRational::from_integer(v));
        factorial *= BigInt::from(j);
    }
    let exp = vec![BigRational::one(); n];
    Ok((integer_table(&exact_bell_matrix(&log)?), integer_table(&exact_bell_matrix(&exp)?)))
}

/// Largest `|B_float - B_exact| / max(1, |B_exact|)` over all entries.
pub fn float_deviation(float: &Matrix<Scalar>, exact: &ExactBellMatrix) -> f64 {
    let n = exact.order();
    assert_eq!(float.dim(), n);
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in 0..n {
            let e = &exact.rows[r][c];
            let diff = from_f64(float[(r, c)].re).map(|f| (f - e).abs()).map_or(f64::INFINITY, |d| to_f64(&d));
            let im = float[(r, c)].im.abs();
            worst = worst.max(diff.max(im) / to_f64(&e.abs()).max(1.0));
        }
    }
    worst
}
