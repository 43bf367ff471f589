use std::f64::consts::PI;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};

use faddeev_point::geometry::{momentum_from_lambda, ComplexMomentum, Sheet, SpectralPoint, Vec2};
use faddeev_point::io::{format_float, write_field_csv, write_field_json, FieldRow};
use faddeev_point::regularization::{convergence_report, dyadic_cutoffs};
use faddeev_point::{Error, PointModel, QuadratureConfig, Side};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigError, FileDefaults};
use crate::suites::{self, SuiteParams};
use crate::{
    BoundStateArgs, Common, ContoursArgs, ConvergeArgs, FieldArgs, Format, Kind, SideArg,
    VerifyArgs,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Model(Error),
    Io(std::io::Error),
}

pub enum Outcome {
    Success,
    ChecksFailed,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 4,
            CliError::Io(_) | CliError::Model(Error::Io(_)) => 3,
            CliError::Model(e) if is_input_error(e) => 2,
            CliError::Model(_) => 1,
        }
    }
}

fn is_input_error(e: &Error) -> bool {
    e.is_singular_input()
        || matches!(
            e,
            Error::Domain(_) | Error::Inconsistent { .. } | Error::Precondition(_)
        )
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

#[derive(Serialize)]
struct ErrorRecord<'a> {
    error: &'a str,
    message: String,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Inconsistent { .. } => "inconsistent-momentum",
        Error::Singularity => "singular-point",
        Error::ContourSingularity { .. } => "contour-singularity",
        Error::ExceptionalPoint { .. } => "exceptional-point",
        Error::Resonance { .. } => "resonance",
        Error::Quadrature { .. } => "quadrature",
        Error::Extrapolation { .. } => "extrapolation",
        Error::Precondition(_) => "precondition",
        Error::Io(_) => "io",
    }
}

struct Settings {
    alpha: f64,
    format: Format,
    cfg: QuadratureConfig,
}

fn settings(
    common: &Common,
    defaults: &FileDefaults,
    alpha_default: f64,
) -> Result<Settings, CliError> {
    let alpha = defaults.resolve(common.alpha, "alpha", alpha_default)?;
    let format = match common.format {
        Some(f) => f,
        None => match defaults.get::<String>("format")?.as_deref() {
            None | Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => return Err(CliError::Usage(format!("unknown format {other:?}"))),
        },
    };
    let mut cfg = QuadratureConfig::default();
    if let Some(tol) = defaults
        .resolve(common.tol, "tol", f64::NAN)
        .ok()
        .filter(|t| !t.is_nan())
    {
        cfg.abs_tol = tol;
        cfg.rel_tol = tol;
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Settings { alpha, format, cfg })
}

fn open_output(common: &Common) -> Result<Box<dyn Write>, CliError> {
    Ok(match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

/// Runs `body`; a model error is also written as a JSON record to the output.
fn with_record<F>(common: &Common, body: F) -> Result<Outcome, CliError>
where
    F: FnOnce() -> Result<Outcome, CliError>,
{
    let result = body();
    if let Err(CliError::Model(e)) = &result {
        let record = ErrorRecord {
            error: error_kind(e),
            message: e.to_string(),
        };
        if let Ok(mut out) = open_output(common) {
            let _ = serde_json::to_writer(&mut out, &record);
            let _ = writeln!(out);
            let _ = out.flush();
        }
    }
    result
}

fn parse_pair(text: &str, what: &str) -> Result<[f64; 2], CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || {
        CliError::Usage(format!(
            "{what} must be two comma-separated numbers, got {text:?}"
        ))
    };
    if parts.len() != 2 {
        return Err(bad());
    }
    let a = parts[0].parse().map_err(|_| bad())?;
    let b = parts[1].parse().map_err(|_| bad())?;
    Ok([a, b])
}

/// `xmin:xmax:nx,ymin:ymax:ny`, rows ordered with x varying fastest.
pub fn parse_grid(text: &str) -> Result<Vec<Vec2>, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "grid must look like xmin:xmax:nx,ymin:ymax:ny, got {text:?}"
        ))
    };
    let axes: Vec<&str> = text.split(',').collect();
    if axes.len() != 2 {
        return Err(bad());
    }
    let axis = |s: &str| -> Result<Vec<f64>, CliError> {
        let f: Vec<&str> = s.split(':').map(str::trim).collect();
        if f.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = f[0].parse().map_err(|_| bad())?;
        let hi: f64 = f[1].parse().map_err(|_| bad())?;
        let n: usize = f[2].parse().map_err(|_| bad())?;
        if n == 0 || !lo.is_finite() || !hi.is_finite() {
            return Err(bad());
        }
        Ok(if n == 1 {
            vec![lo]
        } else {
            (0..n)
                .map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64)
                .collect()
        })
    };
    let (xs, ys) = (axis(axes[0])?, axis(axes[1])?);
    Ok(ys
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| [x, y]))
        .collect())
}

fn side_of(arg: Option<SideArg>) -> Option<Side> {
    arg.map(|s| match s {
        SideArg::Plus => Side::Plus,
        SideArg::Minus => Side::Minus,
    })
}

fn write_rows(common: &Common, format: Format, rows: &[FieldRow]) -> Result<(), CliError> {
    let out = open_output(common)?;
    match format {
        Format::Csv => write_field_csv(out, rows)?,
        Format::Json => write_field_json(out, rows)?,
    }
    Ok(())
}

fn evaluate_grid<F>(points: &[Vec2], f: F) -> Result<Vec<FieldRow>, CliError>
where
    F: Fn(Vec2) -> faddeev_point::Result<Complex64> + Sync,
{
    let rows: faddeev_point::Result<Vec<FieldRow>> = points
        .par_iter()
        .map(|&x| f(x).map(|psi| FieldRow::new(x, psi)))
        .collect();
    Ok(rows?)
}

pub fn field(a: &FieldArgs, defaults: &FileDefaults) -> Result<Outcome, CliError> {
    let s = settings(&a.common, defaults, 4.0 * PI)?;
    let points = parse_grid(&a.grid)?;
    let energy = defaults.resolve(a.energy, "energy", f64::NAN)?;
    with_record(&a.common, || {
        let model = PointModel::new(s.alpha)?;
        let side = side_of(a.side);
        let rows = match a.kind {
            Kind::Faddeev => {
                if energy.is_nan() {
                    return Err(CliError::Usage(
                        "--energy is required for the Faddeev kind".into(),
                    ));
                }
                let lambda = parse_pair(a.lambda.as_deref().unwrap_or("1,0"), "--lambda")?;
                let sheet = match (energy == 0.0, a.sheet) {
                    (true, Some(SideArg::Plus)) => Sheet::Plus,
                    (true, Some(SideArg::Minus)) => Sheet::Minus,
                    (true, None) => {
                        return Err(CliError::Usage("--sheet is required at zero energy".into()))
                    }
                    (false, _) => Sheet::NotApplicable,
                };
                let point = SpectralPoint::on_sheet(Complex64::new(lambda[0], lambda[1]), sheet);
                evaluate_grid(&points, |x| model.psi_at(x, energy, point, side, &s.cfg))?
            }
            Kind::Classical | Kind::Boundary => {
                let k = match &a.k {
                    Some(text) => parse_pair(text, "--k")?,
                    None => return Err(CliError::Usage("--k is required for real momenta".into())),
                };
                if a.kind == Kind::Classical {
                    evaluate_grid(&points, |x| model.psi_plus(x, k))?
                } else {
                    let side = side.ok_or_else(|| {
                        CliError::Usage("--side is required for boundary values".into())
                    })?;
                    evaluate_grid(&points, |x| model.psi_pm(x, k, side, &s.cfg))?
                }
            }
        };
        write_rows(&a.common, s.format, &rows)?;
        Ok(Outcome::Success)
    })
}

#[derive(Serialize)]
struct ContourReport {
    energy: f64,
    alpha: f64,
    classification: faddeev_point::model::SpectrumClassification,
    scan: faddeev_point::model::BlowupScan,
}

pub fn contours(a: &ContoursArgs, defaults: &FileDefaults) -> Result<Outcome, CliError> {
    let s = settings(&a.common, defaults, 4.0 * PI)?;
    let energy = defaults.resolve(a.energy, "energy", f64::NAN)?;
    if energy.is_nan() {
        return Err(CliError::Usage("--energy is required".into()));
    }
    with_record(&a.common, || {
        let model = PointModel::new(s.alpha)?;
        let classification = model.classify_spectrum(energy)?;
        let scan = model.contour_blowup_scan(energy, a.samples)?;
        let mut out = open_output(&a.common)?;
        match s.format {
            Format::Json => {
                let report = ContourReport {
                    energy,
                    alpha: s.alpha,
                    classification,
                    scan,
                };
                serde_json::to_writer_pretty(&mut out, &report)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let radii: Vec<String> = classification
                    .contour_radii
                    .iter()
                    .map(|r| format_float(*r))
                    .collect();
                writeln!(
                    out,
                    "# case={} radii={} bound_state={} exceptional={}",
                    classification.case_id,
                    radii.join(" "),
                    classification.is_bound_state_energy,
                    classification.has_real_exceptional_points
                )?;
                writeln!(out, "radius,approach,lambda_modulus,distance,abs_a")?;
                for p in &scan.samples {
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        format_float(p.radius),
                        p.approach,
                        format_float(p.lambda_modulus),
                        format_float(p.distance),
                        format_float(p.abs_a)
                    )?;
                }
            }
        }
        out.flush()?;
        Ok(Outcome::Success)
    })
}

pub fn verify(a: &VerifyArgs, defaults: &FileDefaults) -> Result<Outcome, CliError> {
    let s = settings(&a.common, defaults, suites::default_alpha())?;
    let mut cfg = s.cfg;
    if a.common.tol.is_none() && defaults.get::<f64>("tol")?.is_none() {
        cfg = QuadratureConfig::precise();
    }
    let params = SuiteParams {
        alpha: s.alpha,
        energy: match a.energy {
            Some(e) => Some(e),
            None => defaults.get("energy")?,
        },
        n_quad: defaults.resolve(a.nquad, "nquad", 512)?,
        fd_step: defaults.resolve(a.fd_step, "fd_step", 5e-3)?,
        cfg,
    };
    if params.fd_step.is_nan() || params.fd_step <= 0.0 || params.n_quad < 2 {
        return Err(CliError::Usage(
            "--fd-step must be positive and --nquad at least 2".into(),
        ));
    }
    with_record(&a.common, || {
        let report = suites::run(a.suite, &params)?;
        let mut out = open_output(&a.common)?;
        match s.format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &report)?;
                writeln!(out)?;
            }
            Format::Csv => {
                writeln!(out, "check,value,threshold,passed")?;
                for c in &report.checks {
                    writeln!(
                        out,
                        "\"{}\",{},{},{}",
                        c.name.replace('"', "'"),
                        format_float(c.value),
                        format_float(c.threshold),
                        c.passed
                    )?;
                }
            }
        }
        out.flush()?;
        for c in &report.checks {
            eprintln!(
                "{} {}: {:.3e} (threshold {:.1e})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.threshold
            );
        }
        Ok(if report.passed {
            Outcome::Success
        } else {
            Outcome::ChecksFailed
        })
    })
}

#[derive(Serialize)]
struct ConvergeOutput {
    limit: Complex64,
    fitted_exponent: f64,
    monotone: bool,
    rows: Vec<faddeev_point::regularization::ConvergenceRow>,
}

pub fn converge(a: &ConvergeArgs, defaults: &FileDefaults) -> Result<Outcome, CliError> {
    let s = settings(&a.common, defaults, 4.0 * PI)?;
    let x = parse_pair(&a.x, "--x")?;
    if a.nmin > a.nmax {
        return Err(CliError::Usage("--nmin must not exceed --nmax".into()));
    }
    let energy = defaults.resolve(a.energy, "energy", -1.0)?;
    with_record(&a.common, || {
        let k = match &a.k {
            Some(text) => ComplexMomentum::real(parse_pair(text, "--k")?),
            None => {
                let l = parse_pair(a.lambda.as_deref().unwrap_or("2,0"), "--lambda")?;
                let sheet = if energy == 0.0 {
                    Sheet::Plus
                } else {
                    Sheet::NotApplicable
                };
                momentum_from_lambda(
                    energy,
                    SpectralPoint::on_sheet(Complex64::new(l[0], l[1]), sheet),
                )?
            }
        };
        let report = convergence_report(x, &k, s.alpha, &dyadic_cutoffs(a.nmin, a.nmax), &s.cfg)?;
        let mut out = open_output(&a.common)?;
        match s.format {
            Format::Json => {
                let o = ConvergeOutput {
                    limit: report.limit,
                    fitted_exponent: report.fitted_exponent,
                    monotone: report.monotone,
                    rows: report.rows,
                };
                serde_json::to_writer_pretty(&mut out, &o)?;
                writeln!(out)?;
            }
            Format::Csv => {
                writeln!(out, "n,re_mu_n,im_mu_n,error,prefactor_error")?;
                for r in &report.rows {
                    writeln!(
                        out,
                        "{},{},{},{},{}",
                        format_float(r.n),
                        format_float(r.mu_n.re),
                        format_float(r.mu_n.im),
                        format_float(r.error),
                        format_float(r.prefactor_error)
                    )?;
                }
            }
        }
        out.flush()?;
        Ok(Outcome::Success)
    })
}

pub fn bound_state(a: &BoundStateArgs, defaults: &FileDefaults) -> Result<Outcome, CliError> {
    let s = settings(&a.common, defaults, 4.0 * PI)?;
    let points = parse_grid(&a.grid)?;
    with_record(&a.common, || {
        let state = PointModel::new(s.alpha)?.bound_state()?;
        let rows = evaluate_grid(&points, |x| {
            state.wavefunction(x).map(|v| Complex64::new(v, 0.0))
        })?;
        write_rows(&a.common, s.format, &rows)?;
        Ok(Outcome::Success)
    })
}
