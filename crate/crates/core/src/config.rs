//! Working precision and numerical tolerances.

use std::fmt;
use std::str::FromStr;

/// Arithmetic used inside the spectral kernels.
///
/// The closed-form projectors combine powers `B^k` with coefficients of
/// wildly different magnitudes (for `a = 4`, `N = 6` the terms reach 4^36 while
/// the result is of order 10^2), so `Double` loses most of its digits to
/// cancellation at moderate orders. `Extended` runs those kernels in
/// double-double arithmetic and rounds the results.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Precision {
    Double,
    #[default]
    Extended,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::Double => "double",
            Precision::Extended => "extended",
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "double" | "f64" => Ok(Precision::Double),
            "extended" | "double-double" | "dd" => Ok(Precision::Extended),
            other => Err(format!("unknown precision profile `{other}` (expected `double` or `extended`)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Maps with `|g_1|` at or below this are outside the invertible group.
    pub singular: f64,
    /// Letters closer than `separation * max|letter|` count as a collision.
    pub separation: f64,
    /// Relative disagreement between the two flow forms, or trace deviation
    /// of a projector, that aborts the computation.
    pub conditioning: f64,
    /// Relative disagreement between the closed-form and product-form
    /// projectors above which a warning is attached.
    pub cross_check: f64,
    /// Orbit points whose a-priori truncation estimate `|x|^{N+1}` exceeds
    /// this produce a warning.
    pub truncation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { singular: 1e-12, separation: 1e-8, conditioning: 1e-6, cross_check: 1e-8, truncation: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Config {
    pub precision: Precision,
    pub tolerances: Tolerances,
}

impl Config {
    pub fn with_precision(precision: Precision) -> Self {
        Config { precision, ..Config::default() }
    }
}
