//! Truncated formal power series with vanishing constant term.
//!
//! Coefficients are stored in the factorial-scaled convention
//! `g(x) = Σ_{j=1}^{N} g_j x^j / j!`, so `g_j` is the j-th derivative at the
//! origin and reads directly as the first column of the Bell matrix.

use std::ops::{Add, Sub};
use std::sync::OnceLock;

use crate::bell::BellMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, is_finite};

#[derive(Clone, Debug)]
pub struct FormalSeries {
    coeffs: Vec<Scalar>,
    bell: OnceLock<BellMatrix>,
}

impl PartialEq for FormalSeries {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

impl FormalSeries {
    /// Series with Taylor coefficients `g_1..g_N` taken from `coeffs`.
    pub fn from_taylor(coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = coeffs.iter().position(|&z| !is_finite(z)) {
            return Err(Error::NonFinite { index: index + 1 });
        }
        Ok(FormalSeries { coeffs, bell: OnceLock::new() })
    }

    pub fn from_real_taylor(coeffs: &[f64]) -> Result<Self> {
        Self::from_taylor(coeffs.iter().map(|&x| Scalar::new(x, 0.0)).collect())
    }

    /// Series from power-basis coefficients `c_j` of `Σ c_j x^j`; `g_j = j! c_j`.
    pub fn from_monomial(coeffs: &[Scalar]) -> Result<Self> {
        Self::from_taylor(coeffs.iter().enumerate().map(|(i, &c)| c * factorial(i + 1)).collect())
    }

    pub fn from_real_monomial(coeffs: &[f64]) -> Result<Self> {
        Self::from_monomial(&coeffs.iter().map(|&x| Scalar::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// `e(x) = x` truncated at `order`.
    pub fn identity(order: usize) -> Self {
        assert!(order >= 1, "series order must be positive");
        let mut coeffs = vec![Scalar::new(0.0, 0.0); order];
        coeffs[0] = Scalar::new(1.0, 0.0);
        FormalSeries { coeffs, bell: OnceLock::new() }
    }

    pub fn zero(order: usize) -> Self {
        assert!(order >= 1, "series order must be positive");
        FormalSeries { coeffs: vec![Scalar::new(0.0, 0.0); order], bell: OnceLock::new() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn taylor(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// `g_n` for one-based `n`; zero past the truncation order.
    pub fn coeff(&self, n: usize) -> Scalar {
        assert!(n >= 1, "coefficients are indexed from 1");
        self.coeffs.get(n - 1).copied().unwrap_or_default()
    }

    /// The multiplier `a = g_1 = g'(0)`.
    pub fn multiplier(&self) -> Scalar {
        self.coeffs[0]
    }

    /// Power-basis coefficients `c_j = g_j / j!`.
    pub fn monomial(&self) -> Vec<Scalar> {
        self.coeffs.iter().enumerate().map(|(i, &g)| g / factorial(i + 1)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs[0] == Scalar::new(1.0, 0.0) && self.coeffs[1..].iter().all(|z| *z == Scalar::default())
    }

    /// Truncated sum `Σ g_j x^j / j!`, Horner-ordered.
    pub fn evaluate(&self, x: Scalar) -> Scalar {
        let n = self.coeffs.len();
        let mut acc = self.coeffs[n - 1];
        for j in (1..n).rev() {
            acc = self.coeffs[j - 1] + acc * x / (j + 1) as f64;
        }
        acc * x
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`, through the Faà di Bruno
    /// formula `F_n = Σ_k f_k B_nk[inner]`. The shorter input is zero-padded.
    pub fn compose(&self, inner: &FormalSeries) -> FormalSeries {
        let order = self.order().max(inner.order());
        let inner = inner.resized(order);
        let bell = inner.bell_matrix();
        let coeffs = (1..=order)
            .map(|n| (1..=n).fold(Scalar::default(), |acc, k| acc + self.coeff(k) * bell.entry(n, k)))
            .collect();
        FormalSeries { coeffs, bell: OnceLock::new() }
    }

    /// Truncate or zero-pad to `order`.
    pub fn resized(&self, order: usize) -> FormalSeries {
        if order == self.order() {
            return self.clone();
        }
        assert!(order >= 1, "series order must be positive");
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order, Scalar::default());
        FormalSeries { coeffs, bell: OnceLock::new() }
    }

    pub fn scaled(&self, c: Scalar) -> FormalSeries {
        FormalSeries { coeffs: self.coeffs.iter().map(|&g| g * c).collect(), bell: OnceLock::new() }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise modulus of `self - other`, zero-padding the shorter one.
    pub fn max_abs_diff(&self, other: &FormalSeries) -> f64 {
        let order = self.order().max(other.order());
        (1..=order).map(|n| (self.coeff(n) - other.coeff(n)).norm()).fold(0.0, f64::max)
    }

    /// Bell matrix of this series at its own order, built once and cached.
    pub fn bell_matrix(&self) -> &BellMatrix {
        self.bell.get_or_init(|| BellMatrix::of(self))
    }
}

impl Add for &FormalSeries {
    type Output = FormalSeries;

    fn add(self, rhs: &FormalSeries) -> FormalSeries {
        let order = self.order().max(rhs.order());
        let coeffs = (1..=order).map(|n| self.coeff(n) + rhs.coeff(n)).collect();
        FormalSeries { coeffs, bell: OnceLock::new() }
    }
}

impl Sub for &FormalSeries {
    type Output = FormalSeries;

    fn sub(self, rhs: &FormalSeries) -> FormalSeries {
        let order = self.order().max(rhs.order());
        let coeffs = (1..=order).map(|n| self.coeff(n) - rhs.coeff(n)).collect();
        FormalSeries { coeffs, bell: OnceLock::new() }
    }
}

/// `f ∘ g`.
pub fn compose(f: &FormalSeries, g: &FormalSeries) -> FormalSeries {
    f.compose(g)
}
