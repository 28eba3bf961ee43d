//! `flowctl`: fractional iterates, orbits, modes and the identity checks of a
//! map with a fixed point, from the command line.

mod commands;
mod error;
mod map;
mod report;

use std::io::Write;
use std::time::Instant;

use bellflow::{Config, Precision, Scalar};
use clap::{Args, Parser, Subcommand};

use crate::commands::Render;
use crate::error::CliError;
use crate::map::{Convention, MapSpec, Preset, parse_list, parse_scalar};
use crate::report::{Format, TextStyle};

const DEFAULT_ORDER: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "flowctl", version, about = "Continuous iterates g^<t> of maps with a fixed point")]
struct Cli {
    /// Working precision of the spectral kernels: double or extended
    #[arg(long, global = true, env = "FLOWCTL_PRECISION", default_value = "extended")]
    precision: Precision,

    #[arg(long, global = true, value_enum, default_value_t)]
    format: Format,

    /// Drop imaginary parts with magnitude at or below this in table output
    #[arg(long, global = true, value_name = "TOL")]
    real_tol: Option<f64>,

    /// Report wall-clock time of the computation
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Debug)]
struct ScalarList(Vec<Scalar>);

fn scalar_list(text: &str) -> Result<ScalarList, String> {
    parse_list(text).map(ScalarList)
}

#[derive(Args, Debug)]
struct MapArgs {
    /// Built-in map
    #[arg(long, value_enum, required_unless_present = "coeffs", conflicts_with = "coeffs")]
    preset: Option<Preset>,

    /// Multiplier of the linear preset
    #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar)]
    a: Option<Scalar>,

    /// Parameter of the logistic preset
    #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar)]
    r: Option<Scalar>,

    /// Scale of the expm1 preset
    #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar)]
    c: Option<Scalar>,

    /// Comma-separated coefficients of x, x^2, ...
    #[arg(long, allow_hyphen_values = true, value_parser = scalar_list, value_name = "LIST")]
    coeffs: Option<ScalarList>,

    #[arg(long, value_enum, default_value_t)]
    convention: Convention,

    /// Constant term of an explicit polynomial; requires --shift when nonzero
    #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar, requires = "coeffs")]
    constant: Option<Scalar>,

    /// Truncation order N [default: number of coefficients, or 6 for presets]
    #[arg(long)]
    order: Option<usize>,

    /// Fixed point moved to the origin before processing
    #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar, value_name = "POINT")]
    shift: Option<Scalar>,

    /// Relative eigenvalue separation below which the spectrum is degenerate
    #[arg(long, value_name = "TOL")]
    separation: Option<f64>,

    /// Relative disagreement of the two flow forms that aborts a computation
    #[arg(long, value_name = "TOL")]
    conditioning: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of g^<t> and the weights C_k(t)
    Iterate {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar)]
        t: Scalar,
    },
    /// x(t) = g^<t>(x0) on an inclusive time grid
    Orbit {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar)]
        x0: Scalar,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar, default_value = "0")]
        t_start: Scalar,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_scalar)]
        t_end: Scalar,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// The mode series R_k and their sum identities
    Modes {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run the identity checks at the given times
    Verify {
        #[command(flatten)]
        map: MapArgs,
        /// Comma-separated times
        #[arg(long, allow_hyphen_values = true, value_parser = scalar_list, default_value = "0.25,0.5,1.5")]
        t: ScalarList,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

impl MapArgs {
    fn spec(&self, precision: Precision) -> Result<MapSpec, CliError> {
        let mut config = Config::with_precision(precision);
        if let Some(s) = self.separation {
            config.tolerances.separation = positive("--separation", s)?;
        }
        if let Some(c) = self.conditioning {
            config.tolerances.conditioning = positive("--conditioning", c)?;
        }
        let given = [("a", self.a), ("r", self.r), ("c", self.c)];
        let spec = match (self.preset, &self.coeffs) {
            (Some(preset), None) => {
                let wanted = match preset {
                    Preset::Linear => "a",
                    Preset::Logistic => "r",
                    Preset::Expm1 => "c",
                };
                if let Some((name, _)) = given.iter().find(|(n, v)| *n != wanted && v.is_some()) {
                    return Err(CliError::Usage(format!("--{name} does not apply to this preset (use --{wanted})")));
                }
                let value = given
                    .iter()
                    .find(|(n, _)| *n == wanted)
                    .and_then(|(_, v)| *v)
                    .ok_or_else(|| CliError::Usage(format!("this preset needs --{wanted}")))?;
                MapSpec::preset(preset, value, self.order.unwrap_or(DEFAULT_ORDER), config)
            }
            (None, Some(ScalarList(coeffs))) => {
                if let Some((name, _)) = given.iter().find(|(_, v)| v.is_some()) {
                    return Err(CliError::Usage(format!("--{name} only applies to presets")));
                }
                let order = self.order.unwrap_or(coeffs.len());
                MapSpec::coefficients(coeffs.clone(), self.convention, self.constant.unwrap_or_default(), order, config)
            }
            _ => return Err(CliError::Usage("give exactly one of --preset or --coeffs".into())),
        };
        if spec.order == 0 {
            return Err(CliError::Usage("--order must be at least 1".into()));
        }
        Ok(spec.with_shift(self.shift))
    }
}

fn positive(flag: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() { Ok(v) } else { Err(CliError::Usage(format!("{flag} must be positive"))) }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let start = Instant::now();
    let mut verify_failures = None;
    let mut output: Box<dyn Render> = match &cli.command {
        Command::Iterate { map, t } => Box::new(commands::iterate(&map.spec(cli.precision)?, *t)?),
        Command::Orbit { map, x0, t_start, t_end, steps } => {
            Box::new(commands::orbit(&map.spec(cli.precision)?, *x0, *t_start, *t_end, *steps)?)
        }
        Command::Modes { map, tol } => Box::new(commands::modes(&map.spec(cli.precision)?, *tol)?),
        Command::Verify { map, t, tol } => {
            let report = commands::verify(&map.spec(cli.precision)?, &t.0, *tol)?;
            if !report.failed().is_empty() {
                verify_failures = Some(report.failed().to_vec());
            }
            Box::new(report)
        }
    };
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    if cli.timing {
        output.set_timing(elapsed);
    }
    let text = match cli.format {
        Format::Table => output.table(&TextStyle { real_tol: cli.real_tol }),
        Format::Json => output.json()?,
        Format::Csv => output.csv()?,
    };
    std::io::stdout().write_all(text.as_bytes())?;
    if cli.timing && cli.format == Format::Csv {
        eprintln!("time: {elapsed:.3} ms");
    }
    match verify_failures {
        Some(failed) => Err(CliError::Verification(failed)),
        None => Ok(()),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(e) = execute(&cli) {
        if cli.format == Format::Json
            && !matches!(e, CliError::Verification(_))
            && let Ok(text) = report::json(&e.report())
        {
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
        eprintln!("flowctl: {e}");
        std::process::exit(e.exit_code());
    }
}
