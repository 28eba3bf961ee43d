//! The continuous iterate `g^⟨t⟩` and its elementary modes.
//!
//! With `B^t = Σ_i a^{it} Z_i`, the coefficients of the continuous iterate
//! are the first column of `B^t`. Two algebraically equal routes are
//! evaluated and compared:
//!
//! - weighted iterates: `g^⟨t⟩ = Σ_k C_k(t) g^⟨k⟩` with `C_k(t) = Σ_i a^{it} Λ⁻¹_{ik}`
//! - modes: `g^⟨t⟩ = Σ_k a^{kt} R_k` where `R_k` is read off the first column of `Z_k`
//!
//! `a^t` uses the principal branch of the logarithm, so a negative or complex
//! multiplier gives a complex-valued flow. The identity map is handled
//! directly: its Bell matrix is `I` at every time and it has no simple
//! spectrum to decompose.

use crate::config::{Config, Precision};
use crate::error::{Error, Result};
use crate::matrix::{Matrix, determinant};
use crate::scalar::{Field, Scalar, Wide};
use crate::series::FormalSeries;
use crate::spectral::{Conditioning, ProjectorSet, SpectralBasis, projectors};

/// The elementary functions `R_1..R_N` of a map.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeDecomposition {
    multiplier: Scalar,
    modes: Vec<FormalSeries>,
    source: FormalSeries,
}

/// One entry of [`ModeDecomposition::composition_report`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeComposition {
    pub outer: usize,
    pub inner: usize,
    /// Relative distance between `R_i ∘ R_j` and `R_i(x^j / j!)`.
    pub residual: f64,
}

impl ModeDecomposition {
    pub fn order(&self) -> usize {
        self.modes.len()
    }

    pub fn multiplier(&self) -> Scalar {
        self.multiplier
    }

    pub fn modes(&self) -> &[FormalSeries] {
        &self.modes
    }

    /// `R_k`, one-based.
    pub fn mode(&self, k: usize) -> &FormalSeries {
        &self.modes[k - 1]
    }

    pub fn source(&self) -> &FormalSeries {
        &self.source
    }

    fn scale(&self) -> f64 {
        self.modes.iter().map(FormalSeries::max_abs).fold(1.0, f64::max)
    }

    /// `‖Σ R_k - Id‖`, relative to `max(1, max_k ‖R_k‖)`. Coefficient-wise max norm.
    pub fn identity_residual(&self) -> f64 {
        let n = self.order();
        let sum = self.modes.iter().fold(FormalSeries::zero(n), |acc, r| &acc + r);
        sum.max_abs_diff(&FormalSeries::identity(n)) / self.scale()
    }

    /// `‖Σ a^k R_k - g‖`, relative to `max(1, max_k ‖a^k R_k‖)`.
    pub fn reconstruction_residual(&self) -> f64 {
        let n = self.order();
        let mut letter = self.multiplier;
        let mut sum = FormalSeries::zero(n);
        let mut scale: f64 = 1.0;
        for r in &self.modes {
            let term = r.scaled(letter);
            scale = scale.max(term.max_abs());
            sum = &sum + &term;
            letter *= self.multiplier;
        }
        sum.max_abs_diff(&self.source) / scale
    }

    /// `R_1(x)..R_N(x)`.
    pub fn evaluate(&self, x: Scalar) -> Vec<Scalar> {
        self.modes.iter().map(|r| r.evaluate(x)).collect()
    }

    /// Compares `R_i ∘ R_j` against `R_i(x^j / j!)` for every pair.
    ///
    /// The second form is sometimes stated as an identity; it fails already
    /// for linear maps (where `R_j = 0` for `j ≥ 2`), so this is reported as a
    /// diagnostic and never asserted.
    pub fn composition_report(&self) -> Vec<ModeComposition> {
        let n = self.order();
        let mut out = Vec::with_capacity(n * n);
        for (i, outer) in self.modes.iter().enumerate() {
            for (j, inner) in self.modes.iter().enumerate() {
                let lhs = outer.compose(inner);
                let rhs = substitute_monomial(outer, j + 1);
                let scale = lhs.max_abs().max(rhs.max_abs()).max(f64::MIN_POSITIVE);
                out.push(ModeComposition { outer: i + 1, inner: j + 1, residual: lhs.max_abs_diff(&rhs) / scale });
            }
        }
        out
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `s(x^j / j!)` truncated at the order of `s`.
fn substitute_monomial(s: &FormalSeries, j: usize) -> FormalSeries {
    let n = s.order();
    let mut coeffs = vec![Scalar::default(); n];
    let jf = factorial(j);
    for r in 1..=n {
        let m = j * r;
        if m > n {
            break;
        }
        coeffs[m - 1] = s.coeff(r) * (factorial(m) / (factorial(r) * jf.powi(r as i32)));
    }
    FormalSeries::from_taylor(coeffs).expect("non-empty")
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowDiagnostics {
    /// Absent for the identity map.
    pub conditioning: Option<Conditioning>,
    /// Relative disagreement between the weighted-iterate and mode forms.
    pub form_deviation: f64,
}

/// `g^⟨t⟩` together with the weights `C_k(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowResult {
    t: Scalar,
    series: FormalSeries,
    weights: Vec<Scalar>,
    diagnostics: FlowDiagnostics,
}

impl FlowResult {
    pub fn t(&self) -> Scalar {
        self.t
    }

    pub fn series(&self) -> &FormalSeries {
        &self.series
    }

    pub fn into_series(self) -> FormalSeries {
        self.series
    }

    /// `C_1(t)..C_N(t)`.
    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn diagnostics(&self) -> &FlowDiagnostics {
        &self.diagnostics
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitPoint {
    pub t: Scalar,
    /// `x(t) = g^⟨t⟩(x0)`.
    pub x: Scalar,
    /// `x_k(t) = a^{kt} R_k(x0)`; these sum to `x(t)`.
    pub modes: Vec<Scalar>,
    /// `|x(t)|^{N+1}`.
    pub truncation_estimate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Orbit {
    pub x0: Scalar,
    pub points: Vec<OrbitPoint>,
    /// `max_j |x(t_j)|^{N+1}`; a-priori size of the neglected terms.
    pub truncation_estimate: f64,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
struct Spectrum {
    basis: SpectralBasis,
    projectors: ProjectorSet,
}

/// Precomputed spectral data for the continuous iteration of one map.
#[derive(Clone, Debug)]
pub struct ContinuousFlow {
    series: FormalSeries,
    config: Config,
    spectrum: Option<Spectrum>,
    modes: ModeDecomposition,
}

impl ContinuousFlow {
    pub fn new(series: &FormalSeries) -> Result<Self> {
        Self::with_config(series, &Config::default())
    }

    pub fn with_config(series: &FormalSeries, config: &Config) -> Result<Self> {
        let n = series.order();
        let a = series.multiplier();
        if series.is_identity() {
            let mut modes = vec![FormalSeries::zero(n); n];
            modes[0] = FormalSeries::identity(n);
            return Ok(ContinuousFlow {
                series: series.clone(),
                config: *config,
                spectrum: None,
                modes: ModeDecomposition { multiplier: a, modes, source: series.clone() },
            });
        }
        let basis = SpectralBasis::new(a, n, config)?;
        let projectors = projectors(series.bell_matrix(), &basis)?;
        let modes = projectors
            .projectors()
            .iter()
            .map(|z| FormalSeries::from_taylor(z.column(0)).expect("projectors are finite"))
            .collect();
        Ok(ContinuousFlow {
            series: series.clone(),
            config: *config,
            spectrum: Some(Spectrum { basis, projectors }),
            modes: ModeDecomposition { multiplier: a, modes, source: series.clone() },
        })
    }

    pub fn series(&self) -> &FormalSeries {
        &self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    pub fn multiplier(&self) -> Scalar {
        self.series.multiplier()
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    /// `None` for the identity map.
    pub fn basis(&self) -> Option<&SpectralBasis> {
        self.spectrum.as_ref().map(|s| &s.basis)
    }

    /// `None` for the identity map.
    pub fn projectors(&self) -> Option<&ProjectorSet> {
        self.spectrum.as_ref().map(|s| &s.projectors)
    }

    pub fn modes(&self) -> &ModeDecomposition {
        &self.modes
    }

    /// `a^{kt}` for `k = 1..=N`, rounded to double precision.
    pub fn mode_factors(&self, t: Scalar) -> Vec<Scalar> {
        match &self.spectrum {
            Some(s) => s.basis.letter_powers_at::<Scalar>(t),
            None => vec![Scalar::new(1.0, 0.0); self.order()],
        }
    }

    /// `C_1(t)..C_N(t)`.
    pub fn weights(&self, t: Scalar) -> Vec<Scalar> {
        match &self.spectrum {
            Some(s) => flow_weights(&s.basis, t),
            None => unit_weights(self.order()),
        }
    }

    /// `g^⟨t⟩`, cross-checked between the two evaluation forms.
    pub fn at(&self, t: Scalar) -> Result<FlowResult> {
        let Some(spectrum) = &self.spectrum else {
            return Ok(FlowResult {
                t,
                series: FormalSeries::identity(self.order()),
                weights: unit_weights(self.order()),
                diagnostics: FlowDiagnostics { conditioning: None, form_deviation: 0.0 },
            });
        };
        let (coeffs, weights, form_deviation) = match self.config.precision {
            Precision::Double => evaluate_forms::<Scalar>(spectrum, t),
            Precision::Extended => evaluate_forms::<Wide>(spectrum, t),
        };
        let tol = self.config.tolerances.conditioning;
        if !(form_deviation <= tol) {
            return Err(Error::IllConditioned {
                what: "weighted-iterate vs mode form of g^⟨t⟩".into(),
                deviation: form_deviation,
                tolerance: tol,
            });
        }
        Ok(FlowResult {
            t,
            series: FormalSeries::from_taylor(coeffs)?,
            weights,
            diagnostics: FlowDiagnostics {
                conditioning: Some(spectrum.projectors.conditioning().clone()),
                form_deviation,
            },
        })
    }

    /// `max_r |(g^⟨t1⟩ ∘ g^⟨t2⟩)_r - g^⟨t1+t2⟩_r| / max_r |g^⟨t1+t2⟩_r|`,
    /// taking the worse of both composition orders.
    pub fn semigroup_residual(&self, t1: Scalar, t2: Scalar) -> Result<f64> {
        let f1 = self.at(t1)?.into_series();
        let f2 = self.at(t2)?.into_series();
        let target = self.at(t1 + t2)?.into_series();
        let scale = target.max_abs().max(f64::MIN_POSITIVE);
        let forward = f1.compose(&f2).max_abs_diff(&target);
        let backward = f2.compose(&f1).max_abs_diff(&target);
        Ok(forward.max(backward) / scale)
    }

    /// `max_{k,r} |(R_k ∘ g^⟨t⟩)_r - a^{kt} (R_k)_r|`, relative to the largest
    /// coefficient of `a^{kt} R_k` over all k.
    pub fn mode_evolution_residual(&self, t: Scalar) -> Result<f64> {
        let gt = self.at(t)?.into_series();
        let factors = self.mode_factors(t);
        let mut worst: f64 = 0.0;
        let mut scale: f64 = f64::MIN_POSITIVE;
        for (r, &f) in self.modes.modes().iter().zip(&factors) {
            let evolved = r.scaled(f);
            scale = scale.max(evolved.max_abs());
            worst = worst.max(r.compose(&gt).max_abs_diff(&evolved));
        }
        Ok(worst / scale)
    }

    /// Per-coefficient residual of the determinant identity whose rows are
    /// `[g_r^⟨n⟩, a^n, a^{2n}, ..., a^{Nn}]` for `n = 1..N` and
    /// `[g_r^⟨t⟩, a^t, ..., a^{Nt}]`.
    ///
    /// Each determinant is expanded along its first column and divided by
    /// `max_m |M_m| · max_m |c_m|`, the largest absolute minor times the
    /// largest first-column entry.
    pub fn determinant_residual(&self, t: Scalar) -> Result<Vec<f64>> {
        let gt = self.at(t)?.into_series();
        let n = self.order();
        let iterates: Vec<FormalSeries> =
            (1..=n as u64).map(|m| self.series.bell_matrix().pow(m).series()).collect();
        Ok(match self.config.precision {
            Precision::Double => self.determinants::<Scalar>(&iterates, &gt, t),
            Precision::Extended => self.determinants::<Wide>(&iterates, &gt, t),
        })
    }

    fn determinants<T: Field>(&self, iterates: &[FormalSeries], gt: &FormalSeries, t: Scalar) -> Vec<f64> {
        let n = self.order();
        let a = T::from_scalar(self.multiplier());
        // Vandermonde-power block, rows n = 1..N then the time row
        let mut block: Vec<Vec<T>> = (1..=n as u64).map(|m| (1..=n as u64).map(|k| a.powu(m * k)).collect()).collect();
        block.push(match &self.spectrum {
            Some(s) => s.basis.letter_powers_at::<T>(t),
            None => vec![T::one(); n],
        });
        let minors: Vec<T> = (0..=n)
            .map(|skip| {
                let rows: Vec<Vec<T>> =
                    block.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, row)| row.clone()).collect();
                determinant(Matrix::from_rows(rows))
            })
            .collect();
        let largest_minor = minors.iter().map(|m| m.magnitude()).fold(0.0, f64::max);
        (1..=n)
            .map(|r| {
                let column: Vec<T> = iterates
                    .iter()
                    .map(|s| T::from_scalar(s.coeff(r)))
                    .chain(std::iter::once(T::from_scalar(gt.coeff(r))))
                    .collect();
                let mut det = T::zero();
                for (m, (&c, &minor)) in column.iter().zip(&minors).enumerate() {
                    let term = c * minor;
                    det = if m % 2 == 0 { det + term } else { det - term };
                }
                let scale = column.iter().map(|c| c.magnitude()).fold(0.0, f64::max) * largest_minor;
                if scale == 0.0 { 0.0 } else { det.magnitude() / scale }
            })
            .collect()
    }

    /// `x(t_j) = g^⟨t_j⟩(x0)` with the per-mode split `a^{kt} R_k(x0)`.
    pub fn orbit(&self, x0: Scalar, times: &[Scalar]) -> Result<Orbit> {
        let n = self.order();
        let limit = self.config.tolerances.truncation;
        let mut warnings = Vec::new();
        let start = x0.norm().powi(n as i32 + 1);
        if start > limit {
            warnings.push(format!(
                "|x0|^(N+1) = {start:.3e} exceeds {limit:.1e}; truncation at order {n} may dominate the error"
            ));
        }
        let r0 = self.modes.evaluate(x0);
        let mut points = Vec::with_capacity(times.len());
        for &t in times {
            let x = self.at(t)?.series().evaluate(x0);
            let modes = self.mode_factors(t).iter().zip(&r0).map(|(&f, &r)| f * r).collect();
            points.push(OrbitPoint { t, x, modes, truncation_estimate: x.norm().powi(n as i32 + 1) });
        }
        let truncation_estimate = points.iter().map(|p| p.truncation_estimate).fold(0.0, f64::max);
        if truncation_estimate > limit && start <= limit {
            warnings.push(format!(
                "max |x(t)|^(N+1) = {truncation_estimate:.3e} exceeds {limit:.1e}; later points may be unreliable"
            ));
        }
        Ok(Orbit { x0, points, truncation_estimate, warnings })
    }
}

fn unit_weights(n: usize) -> Vec<Scalar> {
    let mut w = vec![Scalar::default(); n];
    w[0] = Scalar::new(1.0, 0.0);
    w
}

fn evaluate_forms<T: Field>(spectrum: &Spectrum, t: Scalar) -> (Vec<Scalar>, Vec<Scalar>, f64) {
    let basis = &spectrum.basis;
    let z = &spectrum.projectors;
    let n = basis.order();
    let powers = basis.letter_powers_at::<T>(t);
    let weights = weights_in(basis, &powers);

    let mut by_modes = vec![T::zero(); n];
    let mut by_iterates = vec![T::zero(); n];
    for k in 0..n {
        let zcol = &z.projector_columns[k];
        let icol = &z.iterate_columns[k];
        for r in 0..n {
            by_modes[r] = by_modes[r] + powers[k] * T::from_wide(zcol[r]);
            by_iterates[r] = by_iterates[r] + weights[k] * T::from_wide(icol[r]);
        }
    }
    let scale = by_modes.iter().map(|v| v.magnitude()).fold(f64::MIN_POSITIVE, f64::max);
    let deviation = by_modes.iter().zip(&by_iterates).map(|(&p, &q)| (p - q).magnitude()).fold(0.0, f64::max) / scale;
    (
        by_modes.into_iter().map(Field::to_scalar).collect(),
        weights.into_iter().map(Field::to_scalar).collect(),
        deviation,
    )
}

fn weights_in<T: Field>(basis: &SpectralBasis, powers: &[T]) -> Vec<T> {
    let inverse = basis.kernel_inverse::<T>();
    let n = basis.order();
    (0..n).map(|k| (0..n).fold(T::zero(), |acc, i| acc + powers[i] * inverse[(i, k)])).collect()
}

/// `C_k(t) = Σ_i a^{it} Λ⁻¹_{ik}`; `C_k(n) = δ_nk` for integer `n` in `1..=N`.
pub fn flow_weights(basis: &SpectralBasis, t: Scalar) -> Vec<Scalar> {
    fn run<T: Field>(basis: &SpectralBasis, t: Scalar) -> Vec<Scalar> {
        weights_in(basis, &basis.letter_powers_at::<T>(t)).into_iter().map(Field::to_scalar).collect()
    }
    match basis.precision() {
        Precision::Double => run::<Scalar>(basis, t),
        Precision::Extended => run::<Wide>(basis, t),
    }
}

pub fn mode_series(s: &FormalSeries) -> Result<ModeDecomposition> {
    Ok(ContinuousFlow::new(s)?.modes)
}

pub fn continuous_iterate(s: &FormalSeries, t: Scalar) -> Result<FlowResult> {
    ContinuousFlow::new(s)?.at(t)
}

pub fn semigroup_residual(s: &FormalSeries, t1: Scalar, t2: Scalar) -> Result<f64> {
    ContinuousFlow::new(s)?.semigroup_residual(t1, t2)
}

pub fn mode_evolution_check(s: &FormalSeries, t: Scalar) -> Result<f64> {
    ContinuousFlow::new(s)?.mode_evolution_residual(t)
}

pub fn determinant_residual(s: &FormalSeries, t: Scalar) -> Result<Vec<f64>> {
    ContinuousFlow::new(s)?.determinant_residual(t)
}

pub fn orbit(s: &FormalSeries, x0: Scalar, times: &[Scalar]) -> Result<Orbit> {
    ContinuousFlow::new(s)?.orbit(x0, times)
}
