//! Map specifications: presets, explicit coefficients and the fixed-point shift.

use bellflow::{Config, FormalSeries, Scalar};
use clap::ValueEnum;
use serde::Serialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// g(x) = a x
    Linear,
    /// g(x) = r x (1 - x)
    Logistic,
    /// g(x) = c (e^x - 1)
    Expm1,
}

impl Preset {
    fn parameter_name(self) -> &'static str {
        match self {
            Preset::Linear => "a",
            Preset::Logistic => "r",
            Preset::Expm1 => "c",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// coefficients are derivatives g^(j)(0)
    #[default]
    Taylor,
    /// coefficients are g^(j)(0) / j!
    Monomial,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Preset { preset: Preset, parameter: Scalar },
    /// Polynomial `constant + Σ monomial[j-1] x^j`.
    Polynomial { constant: Scalar, monomial: Vec<Scalar> },
}

/// A map in user coordinates, its fixed point and the working order.
#[derive(Clone, Debug)]
pub struct MapSpec {
    pub source: Source,
    /// Coefficients as given on the command line, for echoing.
    pub given: Option<(Vec<Scalar>, Convention)>,
    pub shift: Option<Scalar>,
    pub order: usize,
    pub config: Config,
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Accepts `1.5`, `-2e-3`, `2i`, `1-0.5i` and `(re, im)`.
pub fn parse_scalar(text: &str) -> Result<Scalar, String> {
    let s = text.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        let (re, im) = inner.split_once(',').ok_or_else(|| format!("expected (re, im), got `{text}`"))?;
        let part = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("`{text}`: {e}"));
        return Ok(Scalar::new(part(re)?, part(im)?));
    }
    let z: Scalar = s.parse().map_err(|_| format!("`{text}` is not a real or complex number"))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("`{text}` is not finite"));
    }
    Ok(z)
}

/// Splits on commas outside parentheses.
pub fn parse_list(text: &str) -> Result<Vec<Scalar>, String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(parse_scalar(&text[start..i])?);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(parse_scalar(&text[start..])?);
    Ok(out)
}

impl MapSpec {
    pub fn preset(preset: Preset, parameter: Scalar, order: usize, config: Config) -> Self {
        MapSpec { source: Source::Preset { preset, parameter }, given: None, shift: None, order, config }
    }

    pub fn coefficients(
        coeffs: Vec<Scalar>,
        convention: Convention,
        constant: Scalar,
        order: usize,
        config: Config,
    ) -> Self {
        let monomial = match convention {
            Convention::Monomial => coeffs.clone(),
            Convention::Taylor => coeffs.iter().enumerate().map(|(j, c)| c / factorial(j + 1)).collect(),
        };
        MapSpec {
            source: Source::Polynomial { constant, monomial },
            given: Some((coeffs, convention)),
            shift: None,
            order,
            config,
        }
    }

    pub fn with_shift(mut self, shift: Option<Scalar>) -> Self {
        self.shift = shift;
        self
    }

    pub fn preset_parameter(&self) -> Option<(Preset, &'static str, Scalar)> {
        match self.source {
            Source::Preset { preset, parameter } => Some((preset, preset.parameter_name(), parameter)),
            Source::Polynomial { .. } => None,
        }
    }

    pub fn constant(&self) -> Option<Scalar> {
        match &self.source {
            Source::Polynomial { constant, .. } => Some(*constant),
            Source::Preset { .. } => None,
        }
    }

    /// `g(x)` in user coordinates.
    pub fn evaluate(&self, x: Scalar) -> Scalar {
        match &self.source {
            Source::Preset { preset, parameter: p } => match preset {
                Preset::Linear => p * x,
                Preset::Logistic => p * x * (1.0 - x),
                Preset::Expm1 => p * (x.exp() - 1.0),
            },
            Source::Polynomial { constant, monomial } => {
                monomial.iter().rev().fold(Scalar::default(), |acc, &c| (acc + c) * x) + constant
            }
        }
    }

    /// Value and Taylor coefficients `g^(j)(p)`, `j = 1..=order`, at `p`.
    fn expand_at(&self, p: Scalar) -> (Scalar, Vec<Scalar>) {
        let n = self.order;
        let zero = Scalar::default();
        match &self.source {
            Source::Preset { preset, parameter: r } => {
                let mut d = vec![zero; n];
                match preset {
                    Preset::Linear => d[0] = *r,
                    Preset::Logistic => {
                        d[0] = r * (1.0 - 2.0 * p);
                        if n > 1 {
                            d[1] = -2.0 * r;
                        }
                    }
                    Preset::Expm1 => d.iter_mut().for_each(|v| *v = r * p.exp()),
                }
                (self.evaluate(p), d)
            }
            Source::Polynomial { monomial, .. } => {
                let taylor = (1..=n)
                    .map(|j| {
                        let m: Scalar = (j..=monomial.len())
                            .map(|m| monomial[m - 1] * binomial(m, j) * p.powu((m - j) as u32))
                            .sum();
                        m * factorial(j)
                    })
                    .collect();
                (self.evaluate(p), taylor)
            }
        }
    }

    /// The conjugated map `h(y) = g(y + p) - p` with `p` the shift (0 if none).
    pub fn series(&self) -> Result<FormalSeries, CliError> {
        if self.order == 0 {
            return Err(CliError::Usage("--order must be at least 1".into()));
        }
        let p = self.shift.unwrap_or_default();
        let (value, taylor) = self.expand_at(p);
        let gap = (value - p).norm();
        if !(gap <= 1e-10 * p.norm().max(1.0)) {
            let hint = if self.shift.is_some() { "" } else { "; pass the fixed point with --shift" };
            return Err(CliError::Usage(format!(
                "the point {} is not a fixed point: |g(p) - p| = {gap:.3e}{hint}",
                format_plain(p)
            )));
        }
        Ok(FormalSeries::from_taylor(taylor)?)
    }

    /// `Some` when every Taylor coefficient of the conjugated map is an
    /// integer representable exactly in a double.
    pub fn integer_taylor(&self, series: &FormalSeries) -> Option<Vec<i64>> {
        series
            .taylor()
            .iter()
            .map(|c| {
                (c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() < 9.0e15).then_some(c.re as i64)
            })
            .collect()
    }
}

fn format_plain(z: Scalar) -> String {
    if z.im == 0.0 { format!("{}", z.re) } else { format!("({}, {})", z.re, z.im) }
}
