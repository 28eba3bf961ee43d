use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a series needs at least one coefficient")]
    EmptySeries,

    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },

    #[error("Bell polynomial B_{{{n},{k}}} is undefined: need 1 <= k <= n")]
    BellIndex { n: usize, k: usize },

    #[error("order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("singular map: |g_1| = {magnitude:e} is not above the threshold {threshold:e}")]
    SingularMap { magnitude: f64, threshold: f64 },

    #[error(
        "degenerate spectrum: letters {first} and {second} collide \
         (|x_{first} - x_{second}| = {gap:e}, tolerance {tolerance:e})"
    )]
    DegenerateSpectrum { first: usize, second: usize, gap: f64, tolerance: f64 },

    #[error("diagonal entry {index} is zero")]
    ZeroDiagonal { index: usize },

    #[error("alphabet letter {index} is zero")]
    ZeroLetter { index: usize },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("Bell matrix does not belong to the basis: B_11 = {found}, multiplier {expected}")]
    BasisMismatch { found: String, expected: String },

    #[error("ill-conditioned: {what} deviates by {deviation:e} (tolerance {tolerance:e})")]
    IllConditioned { what: String, deviation: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
