//! Verification suites run by `faddeev-point verify`.

use std::f64::consts::PI;

use faddeev_point::geometry::{momentum_from_lambda, Sheet, SpectralPoint, Vec2};
use faddeev_point::regularization::{convergence_report, dyadic_cutoffs, log_integral_identities};
use faddeev_point::verify::{check_eq29, check_eq30, check_eq31, dbar_convergence, dbar_residual};
use faddeev_point::{PointModel, QuadratureConfig, Result, Side};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Dbar,
    Eq29,
    Eq30,
    Eq31,
    QuadratureIdentities,
    Convergence,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            passed: value <= threshold,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub alpha: f64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Parameters shared by the suites; `None` selects the suite's own default.
#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub alpha: f64,
    pub energy: Option<f64>,
    pub n_quad: usize,
    pub fd_step: f64,
    pub cfg: QuadratureConfig,
}

pub fn dbar_points(energy: Option<f64>) -> Vec<(f64, SpectralPoint, Vec2)> {
    let c = Complex64::new;
    let all = vec![
        (-1.0, SpectralPoint::new(c(2.0, 0.0)), [1.0, 0.0]),
        (-1.0, SpectralPoint::new(c(0.3, 0.2)), [0.5, -0.7]),
        (-1.0, SpectralPoint::new(c(-0.6, 0.9)), [-1.2, 0.4]),
        (-4.0, SpectralPoint::new(c(0.2, -1.5)), [0.8, 0.8]),
        (
            0.0,
            SpectralPoint::on_sheet(c(0.5, 0.3), Sheet::Plus),
            [1.0, 0.3],
        ),
        (
            0.0,
            SpectralPoint::on_sheet(c(1.4, -0.4), Sheet::Minus),
            [-0.6, 1.1],
        ),
        (1.0, SpectralPoint::new(c(0.25, 0.25)), [0.7, 0.2]),
        (1.0, SpectralPoint::new(c(0.0, 1.3)), [0.4, -0.9]),
        (1.0, SpectralPoint::new(c(-2.5, 0.5)), [1.5, 0.5]),
        (4.0, SpectralPoint::new(c(0.5, 0.3)), [1.0, 0.3]),
        (4.0, SpectralPoint::new(c(2.5, -1.0)), [-0.3, -0.8]),
        (9.0, SpectralPoint::new(c(-0.4, -0.6)), [0.9, -0.2]),
    ];
    match energy {
        Some(e) => all.into_iter().filter(|p| p.0 == e).collect(),
        None => all,
    }
}

pub fn run(suite: Suite, p: &SuiteParams) -> Result<SuiteReport> {
    let model = PointModel::new(p.alpha)?;
    let checks = match suite {
        Suite::Dbar => dbar(&model, p)?,
        Suite::Eq29 => eq29(&model, p)?,
        Suite::Eq30 => eq30(p)?,
        Suite::Eq31 => eq31(&model, p)?,
        Suite::QuadratureIdentities => log_integral_identities(&p.cfg)?
            .into_iter()
            .map(|c| Check::below(c.name, c.residual, 1e-10))
            .collect(),
        Suite::Convergence => convergence(p)?,
    };
    let passed = checks.iter().all(|c| c.passed);
    let name = format!("{suite:?}").to_lowercase();
    Ok(SuiteReport {
        suite: name,
        alpha: p.alpha,
        checks,
        passed,
    })
}

fn dbar(model: &PointModel, p: &SuiteParams) -> Result<Vec<Check>> {
    let h = p.fd_step;
    let points = dbar_points(p.energy);
    let per_point: Vec<Result<Vec<Check>>> = points
        .par_iter()
        .map(|&(energy, point, x)| {
            let label = format!("E={energy} lambda={} x={x:?}", point.lambda);
            let conv = dbar_convergence(x, energy, point, model, &[4.0 * h, 2.0 * h, h], &p.cfg)?;
            let fine = dbar_residual(x, energy, point, model, 1e-4, &p.cfg)?;
            let mut out = vec![Check::below(
                format!("{label} residual(fd_step=1e-4)"),
                fine.residual,
                1e-5,
            )];
            if !model.is_free() {
                out.push(Check::below(
                    format!("{label} |order-2|"),
                    (conv.order - 2.0).abs(),
                    0.3,
                ));
            }
            Ok(out)
        })
        .collect();
    Ok(per_point.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

fn eq29(model: &PointModel, p: &SuiteParams) -> Result<Vec<Check>> {
    let energy = p.energy.unwrap_or(1.0);
    let samples = [([2.0, 1.0], 0.0), ([-0.5, 1.5], 1.2), ([1.0, -2.0], -2.4)];
    let mut out = Vec::new();
    for (x, theta) in samples {
        for side in [Side::Plus, Side::Minus] {
            let r = check_eq29(x, energy, theta, side, model, p.n_quad, &p.cfg)?;
            out.push(Check::below(
                format!("E={energy} theta={theta} x={x:?} {side:?}"),
                r.residual,
                1e-4,
            ));
        }
    }
    Ok(out)
}

fn eq30(p: &SuiteParams) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut worst_algebraic: f64 = 0.0;
    let mut worst_quadrature: f64 = 0.0;
    for i in 0..10 {
        let alpha = -20.0 + 40.0 * (i as f64 + 0.5) / 10.0;
        let model = PointModel::new(alpha)?;
        for j in 0..10 {
            let energy = 0.1 * 1.8f64.powi(j);
            let r = check_eq30(energy, &model, p.n_quad)?;
            worst_algebraic = worst_algebraic.max(r.algebraic_residual);
            worst_quadrature =
                worst_quadrature.max((r.quadrature_residual - r.algebraic_residual).abs());
        }
    }
    out.push(Check::below(
        "algebraic form, 10x10 (alpha, E) grid",
        worst_algebraic,
        1e-13,
    ));
    out.push(Check::below(
        "quadrature form vs algebraic form",
        worst_quadrature,
        1e-10,
    ));
    Ok(out)
}

fn eq31(model: &PointModel, p: &SuiteParams) -> Result<Vec<Check>> {
    let energies = match p.energy {
        Some(e) => vec![e],
        None => vec![-1.0, 4.0],
    };
    let mut out = Vec::new();
    for energy in energies {
        let r = check_eq31(
            [1.0, 0.0],
            energy,
            model,
            &[4.0, 8.0, 16.0, 32.0],
            0.0,
            &p.cfg,
        )?;
        let increases = r
            .rows
            .windows(2)
            .filter(|w| w[1].deviation >= w[0].deviation)
            .count();
        let label = format!("E={energy} |mu-1| non-decreasing steps over |lambda| in 4..32");
        if model.is_free() {
            let worst = r.rows.iter().map(|row| row.deviation).fold(0.0, f64::max);
            out.push(Check::below(format!("E={energy} max |mu-1|"), worst, 0.0));
        } else {
            out.push(Check::below(label, increases as f64, 0.0));
        }
    }
    Ok(out)
}

fn convergence(p: &SuiteParams) -> Result<Vec<Check>> {
    let energy = p.energy.unwrap_or(-1.0);
    let k = momentum_from_lambda(energy, SpectralPoint::new(Complex64::new(2.0, 0.0)))?;
    let report = convergence_report([1.0, 0.0], &k, p.alpha, &dyadic_cutoffs(6, 14), &p.cfg)?;
    let increases = report
        .rows
        .windows(2)
        .filter(|w| w[1].error > w[0].error)
        .count();
    let last = report.rows.last().map(|r| r.error).unwrap_or(f64::NAN);
    Ok(vec![
        Check::below(
            "increases of |mu_N - mu| over N = 2^6..2^14",
            increases as f64,
            0.0,
        ),
        Check::below("|mu_N - mu| at N = 2^14", last, 1e-3),
    ])
}

pub fn default_alpha() -> f64 {
    4.0 * PI
}
