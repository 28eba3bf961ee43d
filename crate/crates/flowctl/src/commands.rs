//! The `iterate`, `orbit`, `modes` and `verify` commands.

use bellflow::exact::{self, exact_bell_matrix, exact_invert_series, float_deviation, from_integers};
use bellflow::{Conditioning, ContinuousFlow, FormalSeries, Scalar};
use serde::Serialize;

use crate::error::CliError;
use crate::map::{Convention, MapSpec, Preset};
use crate::report::{self, Cx, Num, TextStyle, csv_num, cx_cells, cx_headers, cx_list};

/// A finished command, renderable in every output format.
pub trait Render {
    fn set_timing(&mut self, ms: f64);
    fn json(&self) -> Result<String, CliError>;
    fn table(&self, style: &TextStyle) -> String;
    fn csv(&self) -> Result<String, CliError>;
}

#[derive(Serialize)]
pub struct InputEcho {
    source: &'static str,
    preset: Option<Preset>,
    parameter: Option<Cx>,
    coefficients: Option<Vec<Cx>>,
    convention: Option<Convention>,
    constant: Option<Cx>,
    shift: Option<Cx>,
    precision: String,
}

impl InputEcho {
    fn new(spec: &MapSpec) -> Self {
        let preset = spec.preset_parameter();
        InputEcho {
            source: if preset.is_some() { "preset" } else { "coefficients" },
            preset: preset.map(|p| p.0),
            parameter: preset.map(|p| Cx(p.2)),
            coefficients: spec.given.as_ref().map(|g| cx_list(&g.0)),
            convention: spec.given.as_ref().map(|g| g.1),
            constant: spec.constant().map(Cx),
            shift: spec.shift.map(Cx),
            precision: spec.config.precision.to_string(),
        }
    }

    fn describe(&self, style: &TextStyle, order: usize) -> String {
        let mut text = match (&self.preset, &self.parameter, &self.coefficients) {
            (Some(p), Some(v), _) => {
                let name = match p {
                    Preset::Linear => "linear a",
                    Preset::Logistic => "logistic r",
                    Preset::Expm1 => "expm1 c",
                };
                format!("map: {name} = {}", style.cx(v.0))
            }
            (_, _, Some(c)) => {
                let list: Vec<String> = c.iter().map(|z| style.cx(z.0)).collect();
                let conv = match self.convention {
                    Some(Convention::Monomial) => "monomial",
                    _ => "taylor",
                };
                format!("map: {conv} coefficients [{}]", list.join(", "))
            }
            _ => "map".into(),
        };
        if let Some(c) = self.constant.filter(|c| c.0 != Scalar::default()) {
            text += &format!(", constant {}", style.cx(c.0));
        }
        if let Some(p) = self.shift {
            text += &format!(", shifted by {}", style.cx(p.0));
        }
        text + &format!(", order {order}, precision {}\n", self.precision)
    }
}

#[derive(Serialize)]
struct ConditioningReport {
    precision: String,
    cayley_hamilton_residual: Num,
    cross_check_deviation: Num,
    inverse_residual: Num,
    trace_deviation: Num,
    error_estimate: Option<Num>,
}

impl ConditioningReport {
    fn new(c: &Conditioning, error_estimate: Option<f64>) -> Self {
        ConditioningReport {
            precision: c.precision.to_string(),
            cayley_hamilton_residual: Num(c.cayley_hamilton_residual),
            cross_check_deviation: Num(c.cross_check_deviation),
            inverse_residual: Num(c.inverse_residual),
            trace_deviation: Num(c.trace_deviation),
            error_estimate: error_estimate.map(Num),
        }
    }

    fn lines(&self, style: &TextStyle) -> String {
        format!(
            "  cayley-hamilton residual  {}\n  projector cross-check     {}\n  kernel inverse residual   {}\n  trace deviation           {}\n  error estimate            {}\n",
            style.num(self.cayley_hamilton_residual.0),
            style.num(self.cross_check_deviation.0),
            style.num(self.inverse_residual.0),
            style.num(self.trace_deviation.0),
            self.error_estimate.map_or("-".into(), |e| style.num(e.0)),
        )
    }
}

/// Absolute coefficient error expected from the mode sum: the largest mode
/// coefficient times the worst relative kernel residual.
fn error_estimate(flow: &ContinuousFlow) -> Option<f64> {
    let c = flow.projectors()?.conditioning();
    let residual = c.inverse_residual.max(c.trace_deviation).max(c.cross_check_deviation).max(f64::EPSILON.powi(2));
    let scale = flow.modes().modes().iter().map(FormalSeries::max_abs).fold(0.0, f64::max);
    Some(scale * residual)
}

fn conditioning_of(flow: &ContinuousFlow) -> (Option<ConditioningReport>, Vec<String>) {
    let Some(p) = flow.projectors() else {
        return (None, Vec::new());
    };
    let mut warnings: Vec<String> = p.conditioning().warning.iter().cloned().collect();
    let limit = flow.config().tolerances.conditioning * flow.series().max_abs().max(1.0);
    if let Some(e) = error_estimate(flow).filter(|&e| !(e <= limit)) {
        warnings.push(format!(
            "modes reach {:.1e}; estimated coefficient error {e:.1e} exceeds {limit:.1e}",
            flow.modes().modes().iter().map(FormalSeries::max_abs).fold(0.0, f64::max)
        ));
    }
    (Some(ConditioningReport::new(p.conditioning(), error_estimate(flow))), warnings)
}

fn timing_line(timing: Option<Num>) -> String {
    timing.map(|t| format!("time: {:.3} ms\n", t.0)).unwrap_or_default()
}

fn build(spec: &MapSpec) -> Result<(FormalSeries, ContinuousFlow), CliError> {
    let series = spec.series()?;
    let flow = ContinuousFlow::with_config(&series, &spec.config)?;
    Ok((series, flow))
}

// iterate

#[derive(Serialize)]
struct IterateDiagnostics {
    form_deviation: Num,
    conditioning: Option<ConditioningReport>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
pub struct IterateReport {
    command: &'static str,
    input: InputEcho,
    order: usize,
    multiplier: Cx,
    t: Cx,
    taylor: Vec<Cx>,
    monomial: Vec<Cx>,
    weights: Vec<Cx>,
    diagnostics: IterateDiagnostics,
    timing_ms: Option<Num>,
}

pub fn iterate(spec: &MapSpec, t: Scalar) -> Result<IterateReport, CliError> {
    let (series, flow) = build(spec)?;
    let result = flow.at(t)?;
    let (conditioning, warnings) = conditioning_of(&flow);
    Ok(IterateReport {
        command: "iterate",
        input: InputEcho::new(spec),
        order: series.order(),
        multiplier: Cx(series.multiplier()),
        t: Cx(t),
        taylor: cx_list(result.series().taylor()),
        monomial: cx_list(&result.series().monomial()),
        weights: cx_list(result.weights()),
        diagnostics: IterateDiagnostics {
            form_deviation: Num(result.diagnostics().form_deviation),
            conditioning,
            warnings,
        },
        timing_ms: None,
    })
}

impl Render for IterateReport {
    fn set_timing(&mut self, ms: f64) {
        self.timing_ms = Some(Num(ms));
    }

    fn json(&self) -> Result<String, CliError> {
        report::json(self)
    }

    fn table(&self, style: &TextStyle) -> String {
        let mut out = self.input.describe(style, self.order);
        out += &format!("t = {}, multiplier = {}\n\n", style.cx(self.t.0), style.cx(self.multiplier.0));
        let rows: Vec<Vec<String>> = (0..self.order)
            .map(|i| {
                vec![
                    (i + 1).to_string(),
                    style.cx(self.taylor[i].0),
                    style.cx(self.monomial[i].0),
                    style.cx(self.weights[i].0),
                ]
            })
            .collect();
        out += &report::table(&["n", "taylor", "monomial", "weight C_n(t)"], &rows);
        out += &format!("\ndiagnostics:\n  form deviation            {}\n", style.num(self.diagnostics.form_deviation.0));
        if let Some(c) = &self.diagnostics.conditioning {
            out += &c.lines(style);
        }
        for w in &self.diagnostics.warnings {
            out += &format!("warning: {w}\n");
        }
        out + &timing_line(self.timing_ms)
    }

    fn csv(&self) -> Result<String, CliError> {
        let mut headers = vec!["n".to_string()];
        for p in ["taylor", "monomial", "weight"] {
            headers.extend(cx_headers(p));
        }
        let rows: Vec<Vec<String>> = (0..self.order)
            .map(|i| {
                let mut row = vec![(i + 1).to_string()];
                row.extend(cx_cells(self.taylor[i].0));
                row.extend(cx_cells(self.monomial[i].0));
                row.extend(cx_cells(self.weights[i].0));
                row
            })
            .collect();
        report::csv(&headers, &rows)
    }
}

// orbit

#[derive(Serialize)]
struct Grid {
    t_start: Cx,
    t_end: Cx,
    steps: usize,
}

#[derive(Serialize)]
struct OrbitRow {
    t: Cx,
    x: Cx,
    modes: Vec<Cx>,
    truncation_estimate: Num,
    direct: Option<Cx>,
    direct_deviation: Option<Num>,
}

#[derive(Serialize)]
pub struct OrbitReport {
    command: &'static str,
    input: InputEcho,
    order: usize,
    multiplier: Cx,
    x0: Cx,
    grid: Grid,
    rows: Vec<OrbitRow>,
    truncation_estimate: Num,
    warnings: Vec<String>,
    timing_ms: Option<Num>,
}

/// Inclusive grid of `steps + 1` points; a single point when the ends agree.
pub fn grid(t_start: Scalar, t_end: Scalar, steps: usize) -> Vec<Scalar> {
    if t_start == t_end {
        return vec![t_start];
    }
    (0..=steps)
        .map(|j| if j == steps { t_end } else { t_start + (t_end - t_start) * (j as f64 / steps as f64) })
        .collect()
}

/// `Some(n)` for real non-negative integer `t`.
fn whole_time(t: Scalar) -> Option<u64> {
    let r = t.re.round();
    (t.im == 0.0 && r >= 0.0 && (t.re - r).abs() <= 1e-12 * r.max(1.0)).then_some(r as u64)
}

pub fn orbit(spec: &MapSpec, x0: Scalar, t_start: Scalar, t_end: Scalar, steps: usize) -> Result<OrbitReport, CliError> {
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let (series, flow) = build(spec)?;
    let p = spec.shift.unwrap_or_default();
    let times = grid(t_start, t_end, steps);
    let orbit = flow.orbit(x0 - p, &times)?;
    let (_, mut warnings) = conditioning_of(&flow);
    warnings.extend(orbit.warnings.iter().cloned());
    let rows = orbit
        .points
        .iter()
        .map(|pt| {
            let x = pt.x + p;
            let direct = whole_time(pt.t).map(|n| (0..n).fold(x0, |y, _| spec.evaluate(y)));
            OrbitRow {
                t: Cx(pt.t),
                x: Cx(x),
                modes: cx_list(&pt.modes),
                truncation_estimate: Num(pt.truncation_estimate),
                direct: direct.map(Cx),
                direct_deviation: direct.map(|d| Num((d - x).norm())),
            }
        })
        .collect();
    Ok(OrbitReport {
        command: "orbit",
        input: InputEcho::new(spec),
        order: series.order(),
        multiplier: Cx(series.multiplier()),
        x0: Cx(x0),
        grid: Grid { t_start: Cx(t_start), t_end: Cx(t_end), steps },
        rows,
        truncation_estimate: Num(orbit.truncation_estimate),
        warnings,
        timing_ms: None,
    })
}

impl Render for OrbitReport {
    fn set_timing(&mut self, ms: f64) {
        self.timing_ms = Some(Num(ms));
    }

    fn json(&self) -> Result<String, CliError> {
        report::json(self)
    }

    fn table(&self, style: &TextStyle) -> String {
        let mut out = self.input.describe(style, self.order);
        out += &format!("x0 = {}, multiplier = {}\n\n", style.cx(self.x0.0), style.cx(self.multiplier.0));
        let mode_names: Vec<String> = (1..=self.order).map(|k| format!("x_{k}(t)")).collect();
        let mut headers = vec!["t", "x(t)", "direct", "truncation"];
        headers.extend(mode_names.iter().map(String::as_str));
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![
                    style.cx(r.t.0),
                    style.cx(r.x.0),
                    r.direct.map(|d| style.cx(d.0)).unwrap_or_else(|| "-".into()),
                    style.num(r.truncation_estimate.0),
                ];
                row.extend(r.modes.iter().map(|m| style.cx(m.0)));
                row
            })
            .collect();
        out += &report::table(&headers, &rows);
        for w in &self.warnings {
            out += &format!("warning: {w}\n");
        }
        out + &timing_line(self.timing_ms)
    }

    fn csv(&self) -> Result<String, CliError> {
        let mut headers: Vec<String> = Vec::new();
        headers.extend(cx_headers("t"));
        headers.extend(cx_headers("x"));
        for k in 1..=self.order {
            headers.extend(cx_headers(&format!("x{k}")));
        }
        headers.push("truncation_estimate".into());
        headers.extend(cx_headers("direct"));
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let mut row: Vec<String> = Vec::new();
                row.extend(cx_cells(r.t.0));
                row.extend(cx_cells(r.x.0));
                for m in &r.modes {
                    row.extend(cx_cells(m.0));
                }
                row.push(csv_num(r.truncation_estimate.0));
                match r.direct {
                    Some(d) => row.extend(cx_cells(d.0)),
                    None => row.extend([String::new(), String::new()]),
                }
                row
            })
            .collect();
        report::csv(&headers, &rows)
    }
}

// modes

#[derive(Serialize)]
struct ModeEntry {
    k: usize,
    factor: Cx,
    taylor: Vec<Cx>,
    monomial: Vec<Cx>,
}

#[derive(Serialize)]
struct ModeResiduals {
    identity: Num,
    reconstruction: Num,
    tolerance: Num,
    pass: bool,
}

#[derive(Serialize)]
struct CompositionEntry {
    outer: usize,
    inner: usize,
    residual: Num,
}

#[derive(Serialize)]
pub struct ModesReport {
    command: &'static str,
    input: InputEcho,
    order: usize,
    multiplier: Cx,
    modes: Vec<ModeEntry>,
    residuals: ModeResiduals,
    composition: Vec<CompositionEntry>,
    conditioning: Option<ConditioningReport>,
    warnings: Vec<String>,
    timing_ms: Option<Num>,
}

pub fn modes(spec: &MapSpec, tolerance: f64) -> Result<ModesReport, CliError> {
    let (series, flow) = build(spec)?;
    let modes = flow.modes();
    let a = series.multiplier();
    let mut factor = a;
    let mut entries = Vec::with_capacity(series.order());
    for (k, r) in modes.modes().iter().enumerate() {
        entries.push(ModeEntry { k: k + 1, factor: Cx(factor), taylor: cx_list(r.taylor()), monomial: cx_list(&r.monomial()) });
        factor *= a;
    }
    let identity = modes.identity_residual();
    let reconstruction = modes.reconstruction_residual();
    let composition = modes
        .composition_report()
        .into_iter()
        .map(|c| CompositionEntry { outer: c.outer, inner: c.inner, residual: Num(c.residual) })
        .collect();
    let (conditioning, warnings) = conditioning_of(&flow);
    Ok(ModesReport {
        command: "modes",
        input: InputEcho::new(spec),
        order: series.order(),
        multiplier: Cx(a),
        modes: entries,
        residuals: ModeResiduals {
            identity: Num(identity),
            reconstruction: Num(reconstruction),
            tolerance: Num(tolerance),
            pass: identity <= tolerance && reconstruction <= tolerance,
        },
        composition,
        conditioning,
        warnings,
        timing_ms: None,
    })
}

const MODE_TABLE_COEFFS: usize = 4;

impl Render for ModesReport {
    fn set_timing(&mut self, ms: f64) {
        self.timing_ms = Some(Num(ms));
    }

    fn json(&self) -> Result<String, CliError> {
        report::json(self)
    }

    fn table(&self, style: &TextStyle) -> String {
        let mut out = self.input.describe(style, self.order);
        out += &format!("multiplier = {}\n\n", style.cx(self.multiplier.0));
        let shown = self.order.min(MODE_TABLE_COEFFS);
        let names: Vec<String> = (1..=shown).map(|r| format!("[x^{r}/{r}!]")).collect();
        let mut headers = vec!["k", "a^k"];
        headers.extend(names.iter().map(String::as_str));
        let rows: Vec<Vec<String>> = self
            .modes
            .iter()
            .map(|m| {
                let mut row = vec![m.k.to_string(), style.cx(m.factor.0)];
                row.extend(m.taylor[..shown].iter().map(|c| style.cx(c.0)));
                row
            })
            .collect();
        out += &report::table(&headers, &rows);
        let r = &self.residuals;
        out += &format!(
            "\nsum R_k = x          residual {}\nsum a^k R_k = g      residual {}\ntolerance {}: {}\n",
            style.num(r.identity.0),
            style.num(r.reconstruction.0),
            style.num(r.tolerance.0),
            if r.pass { "PASS" } else { "FAIL" },
        );
        out += "\nR_i o R_j vs R_i(x^j / j!) relative residual (diagnostic)\n";
        let n = self.order;
        let cols: Vec<String> = (1..=n).map(|j| format!("j={j}")).collect();
        let mut headers = vec!["i"];
        headers.extend(cols.iter().map(String::as_str));
        let rows: Vec<Vec<String>> = (0..n)
            .map(|i| {
                let mut row = vec![(i + 1).to_string()];
                row.extend((0..n).map(|j| style.num(self.composition[i * n + j].residual.0)));
                row
            })
            .collect();
        out += &report::table(&headers, &rows);
        if let Some(c) = &self.conditioning {
            out += "\nconditioning:\n";
            out += &c.lines(style);
        }
        for w in &self.warnings {
            out += &format!("warning: {w}\n");
        }
        out + &timing_line(self.timing_ms)
    }

    fn csv(&self) -> Result<String, CliError> {
        let mut headers = vec!["k".to_string()];
        headers.extend(cx_headers("factor"));
        headers.push("r".into());
        headers.extend(cx_headers("taylor"));
        headers.extend(cx_headers("monomial"));
        let mut rows = Vec::new();
        for m in &self.modes {
            for r in 0..self.order {
                let mut row = vec![m.k.to_string()];
                row.extend(cx_cells(m.factor.0));
                row.push((r + 1).to_string());
                row.extend(cx_cells(m.taylor[r].0));
                row.extend(cx_cells(m.monomial[r].0));
                rows.push(row);
            }
        }
        report::csv(&headers, &rows)
    }
}

// verify

#[derive(Serialize)]
struct Check {
    name: String,
    identity: &'static str,
    residual: Num,
    tolerance: Num,
    pass: bool,
}

#[derive(Serialize)]
pub struct VerifyReport {
    command: &'static str,
    input: InputEcho,
    order: usize,
    multiplier: Cx,
    t_list: Vec<Cx>,
    exact_oracle: bool,
    checks: Vec<Check>,
    conditioning: Option<ConditioningReport>,
    pass: bool,
    failed: Vec<String>,
    timing_ms: Option<Num>,
}

impl VerifyReport {
    pub fn failed(&self) -> &[String] {
        &self.failed
    }
}

struct Checks {
    list: Vec<Check>,
}

impl Checks {
    fn push(&mut self, name: String, identity: &'static str, residual: f64, tolerance: f64) {
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        self.list.push(Check { name, identity, residual: Num(residual), tolerance: Num(tolerance), pass: residual <= tolerance });
    }

    fn push_result(&mut self, name: String, identity: &'static str, residual: bellflow::Result<f64>, tolerance: f64) {
        self.push(name, identity, residual.unwrap_or(f64::INFINITY), tolerance);
    }
}

fn label(t: Scalar) -> String {
    if t.im == 0.0 { format!("{}", t.re) } else { format!("({},{})", t.re, t.im) }
}

fn relative_to_exact(float: &[Scalar], exact: &[bellflow::RationalScalar]) -> f64 {
    let scale = exact.iter().map(|q| exact::to_f64(q).abs()).fold(1.0, f64::max);
    let worst = float
        .iter()
        .zip(exact)
        .map(|(f, q)| Scalar::new(f.re - exact::to_f64(q), f.im).norm())
        .fold(0.0, f64::max);
    worst / scale
}

pub fn verify(spec: &MapSpec, t_list: &[Scalar], tolerance: f64) -> Result<VerifyReport, CliError> {
    if t_list.is_empty() {
        return Err(CliError::Usage("--t needs at least one value".into()));
    }
    let (series, flow) = build(spec)?;
    let n = series.order();
    let forms_tol = spec.config.tolerances.conditioning;
    let mut checks = Checks { list: Vec::new() };

    let one = Scalar::new(1.0, 0.0);
    let at0 = flow.at(Scalar::default()).map(|r| r.series().max_abs_diff(&FormalSeries::identity(n)));
    checks.push_result("time_zero".into(), "g^<0> = x", at0, tolerance);
    let scale = series.max_abs().max(f64::MIN_POSITIVE);
    let at1 = flow.at(one).map(|r| r.series().max_abs_diff(&series) / scale);
    checks.push_result("time_one".into(), "g^<1> = g", at1, tolerance);

    match flow.projectors() {
        Some(p) => {
            let alg = p.algebra(series.bell_matrix());
            checks.push("projector_idempotence".into(), "Z_i Z_i = Z_i", alg.idempotence, tolerance);
            checks.push("projector_orthogonality".into(), "Z_i Z_j = 0", alg.orthogonality, tolerance);
            checks.push("projector_resolution".into(), "sum Z_i = I", alg.resolution, tolerance);
            checks.push("projector_trace".into(), "tr Z_i = 1", alg.trace, tolerance);
            checks.push("projector_eigen".into(), "B Z_i = a^i Z_i", alg.eigen, tolerance);
            checks.push(
                "projector_cross_check".into(),
                "closed form = product form",
                p.conditioning().cross_check_deviation,
                spec.config.tolerances.cross_check,
            );
        }
        None => {
            for (name, identity) in [
                ("projector_idempotence", "Z_i Z_i = Z_i"),
                ("projector_orthogonality", "Z_i Z_j = 0"),
                ("projector_resolution", "sum Z_i = I"),
                ("projector_trace", "tr Z_i = 1"),
                ("projector_eigen", "B Z_i = a^i Z_i"),
                ("projector_cross_check", "closed form = product form"),
            ] {
                checks.push(name.into(), identity, 0.0, tolerance);
            }
        }
    }
    checks.push("mode_sum_identity".into(), "sum R_k = x", flow.modes().identity_residual(), tolerance);
    checks.push("mode_sum_map".into(), "sum a^k R_k = g", flow.modes().reconstruction_residual(), tolerance);

    for &t in t_list {
        let forms = flow.at(t).map(|r| r.diagnostics().form_deviation).or_else(|e| match e {
            bellflow::Error::IllConditioned { deviation, .. } => Ok(deviation),
            other => Err(other),
        });
        checks.push_result(format!("flow_forms@{}", label(t)), "sum a^it (Z_i)_1 = sum C_k(t) g^<k>", forms, forms_tol);
        checks.push_result(
            format!("mode_evolution@{}", label(t)),
            "R_k o g^<t> = a^kt R_k",
            flow.mode_evolution_residual(t),
            tolerance,
        );
        let det = flow.determinant_residual(t).map(|v| v.into_iter().fold(0.0, f64::max));
        checks.push_result(format!("determinant@{}", label(t)), "det[g^<1..N>, g^<t>] = 0", det, tolerance);
    }
    for (i, &t1) in t_list.iter().enumerate() {
        for &t2 in &t_list[i..] {
            checks.push_result(
                format!("semigroup@{},{}", label(t1), label(t2)),
                "g^<s> o g^<t> = g^<s+t>",
                flow.semigroup_residual(t1, t2),
                tolerance,
            );
        }
    }

    let integer = spec.integer_taylor(&series);
    if let Some(ints) = &integer {
        let exact_g = from_integers(ints);
        let b = exact_bell_matrix(&exact_g)?;
        checks.push(
            "exact_bell_matrix".into(),
            "B[g] float = B[g] rational",
            float_deviation(series.bell_matrix().matrix(), &b),
            tolerance,
        );
        let mut power = b.clone();
        let mut worst: f64 = 0.0;
        for k in 2..=n as u64 {
            power = power.multiply(&b)?;
            let r = flow.at(Scalar::new(k as f64, 0.0)).map(|r| relative_to_exact(r.series().taylor(), &power.series()));
            worst = worst.max(r.unwrap_or(f64::INFINITY));
        }
        checks.push("exact_integer_iterates".into(), "g^<k> = first column of B^k, k = 2..N", worst, tolerance);
        let inverse = exact_invert_series(&exact_g)?;
        let r = flow.at(-one).map(|r| relative_to_exact(r.series().taylor(), &inverse));
        checks.push_result("exact_inverse".into(), "g^<-1> = rational inverse series", r, tolerance);
    }

    let failed: Vec<String> = checks.list.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    let (conditioning, _) = conditioning_of(&flow);
    Ok(VerifyReport {
        command: "verify",
        input: InputEcho::new(spec),
        order: n,
        multiplier: Cx(series.multiplier()),
        t_list: cx_list(t_list),
        exact_oracle: integer.is_some(),
        checks: checks.list,
        conditioning,
        pass: failed.is_empty(),
        failed,
        timing_ms: None,
    })
}

impl Render for VerifyReport {
    fn set_timing(&mut self, ms: f64) {
        self.timing_ms = Some(Num(ms));
    }

    fn json(&self) -> Result<String, CliError> {
        report::json(self)
    }

    fn table(&self, style: &TextStyle) -> String {
        let mut out = self.input.describe(style, self.order);
        let ts: Vec<String> = self.t_list.iter().map(|t| style.cx(t.0)).collect();
        out += &format!("t = [{}], exact oracle: {}\n\n", ts.join(", "), if self.exact_oracle { "yes" } else { "no" });
        let rows: Vec<Vec<String>> = self
            .checks
            .iter()
            .map(|c| {
                vec![
                    c.name.clone(),
                    style.num(c.residual.0),
                    style.num(c.tolerance.0),
                    if c.pass { "PASS".into() } else { "FAIL".into() },
                    c.identity.into(),
                ]
            })
            .collect();
        out += &report::table(&["check", "residual", "tolerance", "result", "identity"], &rows);
        out += &if self.pass { "\nall checks passed\n".to_string() } else { format!("\nfailed: {}\n", self.failed.join(", ")) };
        out + &timing_line(self.timing_ms)
    }

    fn csv(&self) -> Result<String, CliError> {
        let headers: Vec<String> = ["check", "identity", "residual", "tolerance", "pass"].map(String::from).to_vec();
        let rows: Vec<Vec<String>> = self
            .checks
            .iter()
            .map(|c| {
                vec![c.name.clone(), c.identity.into(), csv_num(c.residual.0), csv_num(c.tolerance.0), c.pass.to_string()]
            })
            .collect();
        report::csv(&headers, &rows)
    }
}
