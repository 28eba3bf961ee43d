//! Continuous iteration of analytic maps with a fixed point at the origin.
//!
//! A map `g(x) = Σ g_j x^j / j!` is represented by its truncated Bell matrix
//! `B[g]`, which turns composition into a (reversed) matrix product and
//! iteration into matrix powers. Real and complex powers `B^t` are built from
//! the eigenprojectors of `B`, whose spectrum is the set of powers of the
//! multiplier `a = g_1`. Reading the first column of `B^t` back out gives the
//! continuous iterate `g^⟨t⟩`, and the first columns of the projectors give
//! the elementary modes `R_k`, each of which evolves as `a^{kt}`.
//!
//! ```
//! use bellflow::{ContinuousFlow, FormalSeries, Scalar};
//!
//! // logistic map g(x) = 4x - 4x^2, Taylor coefficients [4, -8]
//! let g = FormalSeries::from_real_taylor(&[4.0, -8.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
//! let flow = ContinuousFlow::new(&g).unwrap();
//! let half = flow.at(Scalar::new(0.5, 0.0)).unwrap();
//! let twice = half.series().compose(half.series());
//! assert!(twice.max_abs_diff(&g) < 1e-9);
//! ```
//!
//! Modules:
//! - [`series`]: truncated formal series, evaluation and composition
//! - [`bell`]: Bell polynomials and Bell matrices
//! - [`spectral`]: alphabets, symmetric functions, `Λ⁻¹`, eigenprojectors
//! - [`flow`]: the continuous iterate, its modes and the identity checks
//! - [`exact`]: rational-arithmetic replica of the integer-order pipeline

pub mod bell;
pub mod config;
pub mod error;
pub mod exact;
pub mod flow;
pub mod matrix;
pub mod scalar;
pub mod series;
pub mod spectral;

pub use bell::{BellMatrix, bell_matrix, bell_polynomial, invert_series, iterate_integer, multiply, series_of};
pub use config::{Config, Precision, Tolerances};
pub use error::{Error, Result};
pub use exact::{ExactBellMatrix, RationalScalar, exact_bell_matrix, exact_invert, exact_stirling_tables};
pub use flow::{
    ContinuousFlow, FlowDiagnostics, FlowResult, ModeComposition, ModeDecomposition, Orbit, OrbitPoint,
    continuous_iterate, determinant_residual, flow_weights, mode_evolution_check, mode_series, orbit,
    semigroup_residual,
};
pub use matrix::Matrix;
pub use scalar::{Field, Scalar, Wide};
pub use series::{FormalSeries, compose};
pub use spectral::{
    Alphabet, Conditioning, ProjectorSet, SpectralBasis, cayley_hamilton_residual, elementary_symmetric,
    lambda_inverse, projectors, projectors_product_form, sigma_missing,
};
