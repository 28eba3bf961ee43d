//! Spectral machinery for Bell matrices.
//!
//! The spectrum of `B[g]` is the alphabet `{a, a^2, ..., a^N}` with
//! `a = g_1`. With all letters distinct, the eigenprojectors are polynomials
//! in `B` with no constant term,
//!
//! ```text
//! Z_i = Σ_{k=1}^{N} [Λ⁻¹]_{ik} B^k,      Λ_{ni} = x_i^n,
//! ```
//!
//! where `Λ⁻¹` has a closed form in the elementary symmetric functions of the
//! alphabet. The product form `Z_i = (B/x_i) Π_{k≠i} (B - x_k)/(x_i - x_k)`
//! is kept as an independent cross-check.
//!
//! The kernels here are generic over [`Field`] and run in the precision
//! carried by the [`SpectralBasis`].

use crate::bell::{BellMatrix, bell_table};
use crate::config::{Config, Precision};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar, Wide};

/// A list of nonzero, pairwise distinct letters.
#[derive(Clone, Debug, PartialEq)]
pub struct Alphabet {
    letters: Vec<Scalar>,
}

impl Alphabet {
    /// Letters closer than `separation * max|x|` are rejected as a collision.
    pub fn new(letters: Vec<Scalar>, separation: f64) -> Result<Self> {
        if let Some(i) = letters.iter().position(|x| x.norm() == 0.0) {
            return Err(Error::ZeroLetter { index: i + 1 });
        }
        let scale = letters.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let tolerance = separation * scale;
        let mut closest: Option<(usize, usize, f64)> = None;
        for i in 0..letters.len() {
            for j in i + 1..letters.len() {
                let gap = (letters[i] - letters[j]).norm();
                if closest.is_none_or(|(_, _, g)| gap < g) {
                    closest = Some((i, j, gap));
                }
            }
        }
        if let Some((i, j, gap)) = closest
            && gap < tolerance
        {
            return Err(Error::DegenerateSpectrum { first: i + 1, second: j + 1, gap, tolerance });
        }
        Ok(Alphabet { letters })
    }

    /// `{a, a^2, ..., a^n}`.
    pub fn powers(a: Scalar, n: usize, separation: f64) -> Result<Self> {
        Self::new(letter_powers(a, n), separation)
    }

    pub fn letters(&self) -> &[Scalar] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The alphabet `x*` with `x*_j = -1/x_j`.
    pub fn reciprocal(&self) -> Alphabet {
        Alphabet { letters: self.letters.iter().map(|&x| -x.inv()).collect() }
    }
}

fn letter_powers<T: Field>(a: T, n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n);
    let mut p = a;
    for _ in 0..n {
        out.push(p);
        p = p * a;
    }
    out
}

pub(crate) fn elementary_symmetric_in<T: Field>(letters: &[T]) -> Vec<T> {
    let n = letters.len();
    let mut sigma = vec![T::zero(); n + 1];
    sigma[0] = T::one();
    for (m, &x) in letters.iter().enumerate() {
        for j in (1..=m + 1).rev() {
            sigma[j] = sigma[j] + x * sigma[j - 1];
        }
    }
    sigma
}

/// `σ_{ki} = σ_k - x_i σ_{k-1,i}`, which unrolls to `Σ_j (-x_i)^{k-j} σ_j`.
pub(crate) fn sigma_missing_in<T: Field>(sigma: &[T], letter: T) -> Vec<T> {
    let mut out = Vec::with_capacity(sigma.len());
    let mut prev = T::zero();
    for &s in sigma {
        prev = s - letter * prev;
        out.push(prev);
    }
    out
}

/// `σ_0..σ_N` of the alphabet, from `Π (1 + x_j t)`.
pub fn elementary_symmetric(alphabet: &Alphabet) -> Vec<Scalar> {
    elementary_symmetric_in(alphabet.letters())
}

/// Elementary symmetric functions of the alphabet with letter `i` (one-based)
/// removed, for `k = 0..=N`.
///
/// Entry `N - 1` is the product of the remaining letters. Entry `N` comes out
/// of the recurrence as well and vanishes up to rounding, which makes it a
/// cheap consistency check.
pub fn sigma_missing(alphabet: &Alphabet, i: usize) -> Result<Vec<Scalar>> {
    if i < 1 || i > alphabet.len() {
        return Err(Error::IndexOutOfRange { index: i, len: alphabet.len() });
    }
    let sigma = elementary_symmetric(alphabet);
    Ok(sigma_missing_in(&sigma, alphabet.letters()[i - 1]))
}

/// Closed form of `[Λ⁻¹]_{ik}` for `Λ_{ni} = x_i^n`:
///
/// ```text
///            Σ_{j=0}^{k-1} x_i^{j-k} (-1)^j σ_{N-j}
/// Λ⁻¹_ik = ------------------------------------------
///           Σ_{j=0}^{N-1} (N-j) x_i^j (-1)^j σ_{N-j}
/// ```
fn lambda_inverse_in<T: Field>(letters: &[T]) -> Matrix<T> {
    let n = letters.len();
    let sigma = elementary_symmetric_in(letters);
    let signed: Vec<T> = (0..=n).map(|j| if j % 2 == 0 { sigma[n - j] } else { -sigma[n - j] }).collect();
    let denominators: Vec<T> = letters
        .iter()
        .map(|&x| {
            let mut p = T::one();
            let mut acc = T::zero();
            for (j, &s) in signed.iter().enumerate().take(n) {
                acc = acc + T::from_f64((n - j) as f64) * p * s;
                p = p * x;
            }
            acc
        })
        .collect();
    let mut out = Matrix::zeros(n);
    for (i, &x) in letters.iter().enumerate() {
        let inv = x.recip();
        for k in 1..=n {
            let mut p = inv.powu(k as u64);
            let mut num = T::zero();
            for &s in &signed[..k] {
                num = num + p * s;
                p = p * x;
            }
            out[(i, k - 1)] = num.quot(denominators[i]);
        }
    }
    out
}

fn vandermonde_powers<T: Field>(letters: &[T]) -> Matrix<T> {
    Matrix::from_fn(letters.len(), |n, i| letters[i].powu(n as u64 + 1))
}

/// Spectral data of a Bell matrix with multiplier `a`.
#[derive(Clone, Debug)]
pub struct SpectralBasis {
    multiplier: Scalar,
    log_multiplier: Scalar,
    order: usize,
    config: Config,
    alphabet: Alphabet,
    reciprocal: Alphabet,
    sigma: Vec<Scalar>,
    lambda_inverse: Matrix<Scalar>,
    inverse_residual: f64,
    // working-precision copies; exact promotions in `Double` mode
    kernel_letters: Vec<Wide>,
    kernel_inverse: Matrix<Wide>,
}

impl SpectralBasis {
    pub fn new(a: Scalar, order: usize, config: &Config) -> Result<Self> {
        assert!(order >= 1, "spectral basis needs order >= 1");
        let tol = &config.tolerances;
        if a.norm() <= tol.singular {
            return Err(Error::SingularMap { magnitude: a.norm(), threshold: tol.singular });
        }
        let alphabet = Alphabet::powers(a, order, tol.separation)?;
        let reciprocal = alphabet.reciprocal();
        let (kernel_letters, kernel_inverse, inverse_residual) = match config.precision {
            Precision::Double => kernel::<Scalar>(a, order),
            Precision::Extended => kernel::<Wide>(a, order),
        };
        let sigma = elementary_symmetric_in(&kernel_letters).into_iter().map(Field::to_scalar).collect();
        Ok(SpectralBasis {
            multiplier: a,
            log_multiplier: a.ln(),
            order,
            config: *config,
            alphabet,
            reciprocal,
            sigma,
            lambda_inverse: kernel_inverse.to_scalar(),
            inverse_residual,
            kernel_letters,
            kernel_inverse,
        })
    }

    pub fn multiplier(&self) -> Scalar {
        self.multiplier
    }

    /// `ε = ln a`, principal branch.
    pub fn log_multiplier(&self) -> Scalar {
        self.log_multiplier
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn precision(&self) -> Precision {
        self.config.precision
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn reciprocal(&self) -> &Alphabet {
        &self.reciprocal
    }

    /// `σ_0..σ_N` of the alphabet.
    pub fn sigma(&self) -> &[Scalar] {
        &self.sigma
    }

    /// `Λ⁻¹` with row `i - 1` and column `k - 1`.
    pub fn lambda_inverse(&self) -> &Matrix<Scalar> {
        &self.lambda_inverse
    }

    /// `Λ_{ni} = a^{ni}`.
    pub fn lambda(&self) -> Matrix<Scalar> {
        vandermonde_powers(self.alphabet.letters())
    }

    /// `max_{nk} |Λ·Λ⁻¹ - I|_{nk} / Σ_i |Λ_{ni}| |Λ⁻¹_{ik}|`, evaluated in the
    /// working precision.
    pub fn inverse_residual(&self) -> f64 {
        self.inverse_residual
    }

    pub(crate) fn kernel_letters<T: Field>(&self) -> Vec<T> {
        self.kernel_letters.iter().map(|&x| T::from_wide(x)).collect()
    }

    pub(crate) fn kernel_inverse<T: Field>(&self) -> Matrix<T> {
        self.kernel_inverse.convert()
    }

    /// `a^{it}` for `i = 1..=N`, as working-precision powers of `a^t`.
    /// Integer `t` starts from `a^t` by repeated multiplication, otherwise
    /// from `exp(t ε)` in double precision.
    pub(crate) fn letter_powers_at<T: Field>(&self, t: Scalar) -> Vec<T> {
        if let Some(m) = crate::scalar::as_integer(t) {
            let base = T::from_scalar(self.multiplier).powi(m);
            return letter_powers(base, self.order);
        }
        // powers of one rounded a^t: the rounding then only shifts t
        letter_powers(T::from_scalar((self.log_multiplier * t).exp()), self.order)
    }
}

fn kernel<T: Field>(a: Scalar, order: usize) -> (Vec<Wide>, Matrix<Wide>, f64) {
    let letters = letter_powers(T::from_scalar(a), order);
    let inverse = lambda_inverse_in(&letters);
    let lambda = vandermonde_powers(&letters);
    let product = &lambda * &inverse;
    let mut residual: f64 = 0.0;
    for n in 0..order {
        for k in 0..order {
            let scale: f64 = (0..order).map(|i| lambda[(n, i)].magnitude() * inverse[(i, k)].magnitude()).sum();
            let target = if n == k { T::one() } else { T::zero() };
            let r = (product[(n, k)] - target).magnitude() / scale.max(f64::MIN_POSITIVE);
            residual = if r.is_finite() { residual.max(r) } else { f64::INFINITY };
        }
    }
    (letters.iter().map(|x| x.to_wide()).collect(), inverse.convert(), residual)
}

pub fn lambda_inverse(basis: &SpectralBasis) -> Matrix<Scalar> {
    basis.lambda_inverse.clone()
}

/// Numerical health of a projector computation.
#[derive(Clone, Debug, PartialEq)]
pub struct Conditioning {
    pub precision: Precision,
    /// `max |I + Σ_j σ_j[x*] B^j|`.
    pub cayley_hamilton_residual: f64,
    /// Largest closed-form vs product-form deviation, relative to `max ‖Z_i‖`.
    pub cross_check_deviation: f64,
    /// `max |Λ·Λ⁻¹ - I|`.
    pub inverse_residual: f64,
    /// `max |tr Z_i - 1|`.
    pub trace_deviation: f64,
    pub warning: Option<String>,
}

/// The eigenprojectors `Z_1..Z_N` of a Bell matrix.
#[derive(Clone, Debug)]
pub struct ProjectorSet {
    multiplier: Scalar,
    projectors: Vec<Matrix<Scalar>>,
    conditioning: Conditioning,
    // first columns of Z_i and of B^k in working precision
    pub(crate) projector_columns: Vec<Vec<Wide>>,
    pub(crate) iterate_columns: Vec<Vec<Wide>>,
}

/// Residuals of the projector identities, relative to `max_i ‖Z_i‖_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectorAlgebra {
    /// `Z_i Z_i - Z_i`
    pub idempotence: f64,
    /// `Z_i Z_j` for `i ≠ j`
    pub orthogonality: f64,
    /// `Σ Z_i - I`
    pub resolution: f64,
    /// `tr Z_i - 1`
    pub trace: f64,
    /// `B Z_i - a^i Z_i`
    pub eigen: f64,
}

impl ProjectorAlgebra {
    pub fn max(&self) -> f64 {
        [self.idempotence, self.orthogonality, self.resolution, self.trace, self.eigen].into_iter().fold(0.0, f64::max)
    }
}

impl ProjectorSet {
    pub fn order(&self) -> usize {
        self.projectors.len()
    }

    pub fn multiplier(&self) -> Scalar {
        self.multiplier
    }

    pub fn projectors(&self) -> &[Matrix<Scalar>] {
        &self.projectors
    }

    /// `Z_i`, one-based.
    pub fn projector(&self, i: usize) -> &Matrix<Scalar> {
        &self.projectors[i - 1]
    }

    pub fn conditioning(&self) -> &Conditioning {
        &self.conditioning
    }

    fn scale(&self) -> f64 {
        self.projectors.iter().map(Matrix::max_abs).fold(0.0, f64::max).max(f64::MIN_POSITIVE)
    }

    /// `F(B) = Σ F(x_i) Z_i`.
    pub fn matrix_function(&self, f: impl Fn(Scalar) -> Scalar) -> Matrix<Scalar> {
        let n = self.order();
        let mut x = self.multiplier;
        let mut out = Matrix::zeros(n);
        for z in &self.projectors {
            out = &out + &z.scale(f(x));
            x *= self.multiplier;
        }
        out
    }

    pub fn algebra(&self, b: &BellMatrix) -> ProjectorAlgebra {
        let n = self.order();
        let scale = self.scale();
        let mut idempotence: f64 = 0.0;
        let mut orthogonality: f64 = 0.0;
        let mut trace: f64 = 0.0;
        let mut eigen: f64 = 0.0;
        let mut sum = Matrix::zeros(n);
        let mut letter = self.multiplier;
        for (i, zi) in self.projectors.iter().enumerate() {
            for (j, zj) in self.projectors.iter().enumerate() {
                let prod = zi * zj;
                if i == j {
                    idempotence = idempotence.max(prod.max_abs_diff(zi));
                } else {
                    orthogonality = orthogonality.max(prod.max_abs());
                }
            }
            trace = trace.max((zi.trace() - Scalar::new(1.0, 0.0)).norm());
            eigen = eigen.max((b.matrix() * zi).max_abs_diff(&zi.scale(letter)));
            sum = &sum + zi;
            letter *= self.multiplier;
        }
        ProjectorAlgebra {
            idempotence: idempotence / scale,
            orthogonality: orthogonality / scale,
            resolution: sum.max_abs_diff(&Matrix::identity(n)) / scale,
            trace: trace / scale,
            eigen: eigen / scale,
        }
    }
}

fn check_basis(b: &BellMatrix, basis: &SpectralBasis) -> Result<()> {
    if b.order() != basis.order() {
        return Err(Error::OrderMismatch { left: b.order(), right: basis.order() });
    }
    let b11 = b.entry(1, 1);
    let a = basis.multiplier();
    if (b11 - a).norm() > 1e-12 * a.norm() {
        return Err(Error::BasisMismatch { found: b11.to_string(), expected: a.to_string() });
    }
    Ok(())
}

/// `B^1..B^N` in working precision. `B` is rebuilt from its first column so
/// that its diagonal is exactly `a^n` in `T`, matching the kernel letters.
pub(crate) fn powers_in<T: Field>(b: &BellMatrix) -> Vec<Matrix<T>> {
    let g: Vec<T> = b.matrix().column(0).into_iter().map(T::from_scalar).collect();
    let base = bell_table(&g);
    let mut out = Vec::with_capacity(b.order());
    let mut p = base.clone();
    for _ in 0..b.order() {
        out.push(p.clone());
        p = p.mul_lower(&base);
    }
    out
}

fn closed_form<T: Field>(powers: &[Matrix<T>], inverse: &Matrix<T>) -> Vec<Matrix<T>> {
    let n = powers.len();
    (0..n)
        .map(|i| {
            let mut z = Matrix::zeros(n);
            for (k, p) in powers.iter().enumerate() {
                z = &z + &p.scale(inverse[(i, k)]);
            }
            z
        })
        .collect()
}

fn product_form<T: Field>(b: &Matrix<T>, letters: &[T]) -> Vec<Matrix<T>> {
    let n = letters.len();
    let id = Matrix::<T>::identity(n);
    (0..n)
        .map(|i| {
            let xi = letters[i];
            let mut z = b.scale(xi.recip());
            for (k, &xk) in letters.iter().enumerate() {
                if k != i {
                    let factor = (b - &id.scale(xk)).scale((xi - xk).recip());
                    z = z.mul_lower(&factor);
                }
            }
            z
        })
        .collect()
}

fn cayley_hamilton_in<T: Field>(powers: &[Matrix<T>], letters: &[T]) -> f64 {
    let n = letters.len();
    let reciprocal: Vec<T> = letters.iter().map(|&x| -x.recip()).collect();
    let sigma = elementary_symmetric_in(&reciprocal);
    let mut acc = Matrix::<T>::identity(n);
    for (j, p) in powers.iter().enumerate() {
        acc = &acc + &p.scale(sigma[j + 1]);
    }
    acc.max_abs()
}

fn projectors_in<T: Field>(b: &BellMatrix, basis: &SpectralBasis) -> Result<ProjectorSet> {
    let tol = &basis.config.tolerances;
    if !(basis.inverse_residual() <= tol.conditioning) {
        return Err(Error::IllConditioned {
            what: "Λ·Λ⁻¹ - I".into(),
            deviation: basis.inverse_residual(),
            tolerance: tol.conditioning,
        });
    }
    let powers = powers_in::<T>(b);
    let letters = basis.kernel_letters::<T>();
    let closed = closed_form(&powers, &basis.kernel_inverse::<T>());
    let product = product_form(&powers[0], &letters);

    let scale = closed.iter().map(Matrix::max_abs).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let cross_check_deviation =
        closed.iter().zip(&product).map(|(z, p)| z.max_abs_diff(p)).fold(0.0, f64::max) / scale;
    let trace_deviation = closed.iter().map(|z| (z.trace() - T::one()).magnitude()).fold(0.0, f64::max);
    if !(trace_deviation <= tol.conditioning) {
        return Err(Error::IllConditioned {
            what: "projector trace".into(),
            deviation: trace_deviation,
            tolerance: tol.conditioning,
        });
    }
    let warning = (!(cross_check_deviation <= tol.cross_check)).then(|| {
        format!(
            "closed-form and product-form projectors differ by {cross_check_deviation:.3e} (relative); \
             results may be inaccurate in {} precision",
            basis.precision()
        )
    });
    let conditioning = Conditioning {
        precision: basis.precision(),
        cayley_hamilton_residual: cayley_hamilton_in(&powers, &letters),
        cross_check_deviation,
        inverse_residual: basis.inverse_residual(),
        trace_deviation,
        warning,
    };
    Ok(ProjectorSet {
        multiplier: basis.multiplier(),
        projector_columns: closed.iter().map(|z| z.column(0).into_iter().map(Field::to_wide).collect()).collect(),
        iterate_columns: powers.iter().map(|p| p.column(0).into_iter().map(Field::to_wide).collect()).collect(),
        projectors: closed.iter().map(Matrix::to_scalar).collect(),
        conditioning,
    })
}

/// Eigenprojectors `Z_i = Σ_k [Λ⁻¹]_{ik} B^k`, validated against the
/// product form.
pub fn projectors(b: &BellMatrix, basis: &SpectralBasis) -> Result<ProjectorSet> {
    check_basis(b, basis)?;
    match basis.precision() {
        Precision::Double => projectors_in::<Scalar>(b, basis),
        Precision::Extended => projectors_in::<Wide>(b, basis),
    }
}

/// Eigenprojectors from `Z_i = (B/x_i) Π_{k≠i} (B - x_k)/(x_i - x_k)`.
pub fn projectors_product_form(b: &BellMatrix, basis: &SpectralBasis) -> Result<Vec<Matrix<Scalar>>> {
    check_basis(b, basis)?;
    fn run<T: Field>(b: &BellMatrix, basis: &SpectralBasis) -> Vec<Matrix<Scalar>> {
        product_form(&b.matrix().convert::<T>(), &basis.kernel_letters::<T>()).iter().map(Matrix::to_scalar).collect()
    }
    Ok(match basis.precision() {
        Precision::Double => run::<Scalar>(b, basis),
        Precision::Extended => run::<Wide>(b, basis),
    })
}

/// `max |I + Σ_{j=1}^{N} σ_j[x*] B^j|`, zero in exact arithmetic.
pub fn cayley_hamilton_residual(b: &BellMatrix, basis: &SpectralBasis) -> Result<f64> {
    check_basis(b, basis)?;
    Ok(match basis.precision() {
        Precision::Double => cayley_hamilton_in(&powers_in::<Scalar>(b), &basis.kernel_letters::<Scalar>()),
        Precision::Extended => cayley_hamilton_in(&powers_in::<Wide>(b), &basis.kernel_letters::<Wide>()),
    })
}
