//! Coefficient scalars.
//!
//! Every public value is a [`Scalar`] (`Complex<f64>`). The spectral kernels
//! are generic over [`Field`] so they can run either in plain double
//! precision or in double-double ([`Wide`]) precision; results are rounded
//! back to [`Scalar`] at the module boundary.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};
use twofloat::TwoFloat;

pub type Scalar = Complex64;

/// Complex number with double-double real and imaginary parts.
pub type Wide = Complex<TwoFloat>;

/// Arithmetic used by the working-precision kernels.
pub trait Field:
    Copy
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_scalar(z: Scalar) -> Self;
    fn from_wide(z: Wide) -> Self;
    fn to_scalar(self) -> Scalar;
    fn to_wide(self) -> Wide;
    fn recip(self) -> Self;

    fn quot(self, rhs: Self) -> Self {
        self * rhs.recip()
    }

    fn from_f64(x: f64) -> Self {
        Self::from_scalar(Scalar::new(x, 0.0))
    }

    /// Modulus, rounded to `f64`.
    fn magnitude(self) -> f64 {
        self.to_scalar().norm()
    }

    fn powu(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    fn powi(self, exp: i64) -> Self {
        let p = self.powu(exp.unsigned_abs());
        if exp < 0 { p.recip() } else { p }
    }
}

impl Field for Complex64 {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_scalar(z: Scalar) -> Self {
        z
    }
    fn from_wide(z: Wide) -> Self {
        Complex64::new(z.re.hi(), z.im.hi())
    }
    fn to_scalar(self) -> Scalar {
        self
    }
    fn to_wide(self) -> Wide {
        Wide::new(TwoFloat::from(self.re), TwoFloat::from(self.im))
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn recip(self) -> Self {
        self.inv()
    }
    fn quot(self, rhs: Self) -> Self {
        self / rhs
    }
}

impl Field for Wide {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_scalar(z: Scalar) -> Self {
        z.to_wide()
    }
    fn from_wide(z: Wide) -> Self {
        z
    }
    fn to_scalar(self) -> Scalar {
        Complex64::from_wide(self)
    }
    fn to_wide(self) -> Wide {
        self
    }
    fn recip(self) -> Self {
        let r = real_recip(self.norm_sqr());
        Wide::new(self.re * r, -self.im * r)
    }
}

/// `1 / x` from the double quotient plus two Newton steps.
///
/// `TwoFloat`'s own division drops the low word for some operands
/// (`1 / 3` comes back with `lo = 0`), so it is never used here.
fn real_recip(x: TwoFloat) -> TwoFloat {
    let one = TwoFloat::from(1.0);
    let mut q = TwoFloat::from(1.0 / x.hi());
    for _ in 0..2 {
        q = q + q * (one - x * q);
    }
    q
}

/// True when both parts are finite.
pub fn is_finite(z: Scalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Real integer value of `t`, if it has one.
pub(crate) fn as_integer(t: Scalar) -> Option<i64> {
    if t.im == 0.0 && t.re.fract() == 0.0 && t.re.abs() <= (1u64 << 52) as f64 {
        Some(t.re as i64)
    } else {
        None
    }
}
