//! Numerical checks of the spectral identities satisfied by the point model:
//! the dbar equations in `lambda`, the relation between `psi+-` and `psi+`
//! on the unit circle, the circle equation linking `h+-` and `f`, and the
//! normalization `mu -> 1` as `lambda -> infinity`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{chi_plus, momentum_from_lambda, SpectralPoint, Vec2};
use crate::green::QuadratureConfig;
use crate::model::{PointModel, Side};
use crate::quadrature::gauss_legendre;
use crate::regularization::fit_decay;

/// Finite-difference check of `d psi/d lambda-bar = (pi s / lambda-bar) b conj(psi)`,
/// `s = sign(|lambda|^2 - 1)` for `E != 0` and `s = 1` at `E = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DbarReport {
    pub lambda: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub fd_step: f64,
}

/// Residuals of [`dbar_residual`] over a step sequence with the fitted order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbarConvergence {
    pub reports: Vec<DbarReport>,
    pub order: f64,
}

fn check_clearance(model: &PointModel, energy: f64, lambda: Complex64, margin: f64) -> Result<()> {
    let modulus = lambda.norm();
    let mut forbidden = vec![0.0];
    if energy > 0.0 {
        forbidden.push(1.0);
    }
    if !model.is_free() {
        forbidden.extend(model.classify_spectrum(energy)?.contour_radii);
    }
    for r in forbidden {
        if (modulus - r).abs() <= margin {
            return Err(Error::Precondition(format!(
                "|lambda| = {modulus} is within {margin} of the singular circle |lambda| = {r}"
            )));
        }
    }
    Ok(())
}

pub fn dbar_residual(
    x: Vec2,
    energy: f64,
    point: SpectralPoint,
    model: &PointModel,
    fd_step: f64,
    cfg: &QuadratureConfig,
) -> Result<DbarReport> {
    if !(fd_step > 0.0) {
        return Err(Error::Precondition("fd_step must be positive".into()));
    }
    let lambda = point.lambda;
    check_clearance(model, energy, lambda, 10.0 * fd_step)?;
    // psi = e^{ikx} mu with k_E(lambda) holomorphic in lambda, so only mu is differenced.
    let mu = |l: Complex64| {
        let k = momentum_from_lambda(energy, SpectralPoint { lambda: l, ..point })?;
        model.mu(x, &k, cfg)
    };
    let h = fd_step;
    let i = Complex64::i();
    let d_re = (mu(lambda + h)? - mu(lambda - h)?) / (2.0 * h);
    let d_im = (mu(lambda + i * h)? - mu(lambda - i * h)?) / (2.0 * h);
    let k = momentum_from_lambda(energy, point)?;
    let wave = (i * k.dot_real(x)).exp();
    let lhs = wave * 0.5 * (d_re + i * d_im);
    let b = model.data_b(&k)?;
    let sign = if energy == 0.0 {
        1.0
    } else {
        (lambda.norm_sqr() - 1.0).signum()
    };
    let rhs = PI * sign / lambda.conj() * b * (wave * mu(lambda)?).conj();
    Ok(DbarReport {
        lambda,
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        fd_step,
    })
}

pub fn dbar_convergence(
    x: Vec2,
    energy: f64,
    point: SpectralPoint,
    model: &PointModel,
    steps: &[f64],
    cfg: &QuadratureConfig,
) -> Result<DbarConvergence> {
    let reports = steps
        .iter()
        .map(|&h| dbar_residual(x, energy, point, model, h, cfg))
        .collect::<Result<Vec<_>>>()?;
    let order = fit_decay(
        &reports
            .iter()
            .map(|r| (1.0 / r.fd_step, r.residual))
            .collect::<Vec<_>>(),
    );
    Ok(DbarConvergence { reports, order })
}

/// Both sides of the `psi+-` / `psi+` relation at one point of the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eq29Report {
    pub theta: f64,
    pub side: Side,
    pub direct: Complex64,
    pub reconstructed: Complex64,
    pub residual: f64,
    pub n_quad: usize,
}

// Weighted nodes for int_0^{2pi} chi_+(-+2 sin(theta - t)) F(t) dt. The indicator
// jumps at t = theta and t = theta + pi, so each half circle gets its own
// Gauss-Legendre rule with n/2 nodes and the indicator is evaluated at the nodes.
fn half_circle_rule(theta: f64, side: Side, n_quad: usize) -> Vec<(f64, f64)> {
    let half = (n_quad / 2).max(1);
    let (nodes, weights) = gauss_legendre(half);
    let mut out = Vec::with_capacity(2 * half);
    for start in [theta - PI, theta] {
        for (t, w) in nodes.iter().zip(&weights) {
            let angle = start + 0.5 * PI * (t + 1.0);
            let arg = -side.sign() * 2.0 * (theta - angle).sin();
            let weight = 0.5 * PI * w * f64::from(chi_plus(arg));
            out.push((angle, weight));
        }
    }
    out
}

/// `psi+-(x, k_E(lambda))` against
/// `psi+(x, k_E(lambda)) + pi i h+- int_{|lambda'|=1} chi_+(+-i(lambda/lambda' - lambda'/lambda)) psi+(x, k_E(lambda')) |d lambda'|`
/// for `lambda = e^{i theta}`.
pub fn check_eq29(
    x: Vec2,
    energy: f64,
    theta: f64,
    side: Side,
    model: &PointModel,
    n_quad: usize,
    cfg: &QuadratureConfig,
) -> Result<Eq29Report> {
    if !(energy > 0.0) {
        return Err(Error::Precondition(
            "the unit-circle relation needs E > 0".into(),
        ));
    }
    if n_quad < 2 {
        return Err(Error::Precondition("n_quad must be at least 2".into()));
    }
    let root = energy.sqrt();
    let k_at = |t: f64| [root * t.cos(), root * t.sin()];
    let direct = model.psi_pm(x, k_at(theta), side, cfg)?;
    let h = if model.is_free() {
        0.0
    } else {
        model.data_h_pm(root)?
    };
    let mut integral = Complex64::new(0.0, 0.0);
    for (angle, weight) in half_circle_rule(theta, side, n_quad) {
        if weight != 0.0 {
            integral += weight * model.psi_plus(x, k_at(angle))?;
        }
    }
    let reconstructed = model.psi_plus(x, k_at(theta))? + Complex64::new(0.0, PI * h) * integral;
    Ok(Eq29Report {
        theta,
        side,
        direct,
        reconstructed,
        residual: (direct - reconstructed).norm(),
        n_quad,
    })
}

/// The circle equation `h - pi i int h chi_+ f |d lambda''| = f` with constant kernels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eq30Report {
    pub energy: f64,
    pub alpha: f64,
    /// `|h (1 - i pi^2 f) - f|`.
    pub algebraic_residual: f64,
    /// The same with the half-circle measure computed by quadrature.
    pub quadrature_residual: f64,
    pub n_quad: usize,
}

pub fn check_eq30(energy: f64, model: &PointModel, n_quad: usize) -> Result<Eq30Report> {
    if !(energy > 0.0) {
        return Err(Error::Precondition(
            "the circle equation needs E > 0".into(),
        ));
    }
    let modulus = energy.sqrt();
    let f = model.data_f(modulus)?;
    let h = if model.is_free() {
        0.0
    } else {
        model.data_h_pm(modulus)?
    };
    let algebraic = (h * (1.0 - Complex64::new(0.0, PI * PI) * f) - f).norm();
    let mut quadrature_residual: f64 = 0.0;
    for side in [Side::Plus, Side::Minus] {
        let measure: f64 = half_circle_rule(0.3, side, n_quad)
            .iter()
            .map(|(_, w)| w)
            .sum();
        let lhs = h - Complex64::new(0.0, PI) * h * measure * f;
        quadrature_residual = quadrature_residual.max((lhs - f).norm());
    }
    Ok(Eq30Report {
        energy,
        alpha: model.alpha,
        algebraic_residual: algebraic,
        quadrature_residual,
        n_quad,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eq31Row {
    pub lambda_modulus: f64,
    pub deviation: f64,
}

/// `|mu(x, k_E(lambda)) - 1|` along the ray `arg lambda = angle`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eq31Report {
    pub rows: Vec<Eq31Row>,
    pub strictly_decreasing: bool,
}

pub fn check_eq31(
    x: Vec2,
    energy: f64,
    model: &PointModel,
    moduli: &[f64],
    angle: f64,
    cfg: &QuadratureConfig,
) -> Result<Eq31Report> {
    if !model.is_free() {
        let radii = model.classify_spectrum(energy)?.contour_radii;
        let outer = radii
            .iter()
            .copied()
            .fold(if energy > 0.0 { 1.0 } else { 0.0 }, f64::max);
        if moduli.iter().any(|&m| m <= outer) {
            return Err(Error::Precondition(format!(
                "moduli must exceed the outermost contour {outer}"
            )));
        }
    }
    let sheet = if energy == 0.0 {
        crate::geometry::Sheet::Plus
    } else {
        crate::geometry::Sheet::NotApplicable
    };
    let rows = moduli
        .iter()
        .map(|&m| {
            let point = SpectralPoint::on_sheet(Complex64::from_polar(m, angle), sheet);
            let k = momentum_from_lambda(energy, point)?;
            let deviation = (model.mu(x, &k, cfg)? - 1.0).norm();
            Ok(Eq31Row {
                lambda_modulus: m,
                deviation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let strictly_decreasing = rows.windows(2).all(|w| w[1].deviation < w[0].deviation);
    Ok(Eq31Report {
        rows,
        strictly_decreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_selects_half_the_circle() {
        for side in [Side::Plus, Side::Minus] {
            for theta in [0.0, 1.0, -2.0] {
                let rule = half_circle_rule(theta, side, 64);
                let measure: f64 = rule.iter().map(|(_, w)| w).sum();
                assert!((measure - PI).abs() < 1e-14);
                // The selected half is (theta, theta + pi) for the plus side.
                let inside = rule.iter().filter(|(_, w)| *w > 0.0).all(|(t, _)| {
                    let s = (t - theta).sin();
                    if side == Side::Plus {
                        s > 0.0
                    } else {
                        s < 0.0
                    }
                });
                assert!(inside);
            }
        }
    }

    #[test]
    fn clearance_is_enforced() {
        let model = PointModel::new(4.0 * PI).unwrap();
        let cfg = QuadratureConfig::default();
        let near = SpectralPoint::new(Complex64::new((0.5f64).exp() + 1e-4, 0.0));
        let err = dbar_residual([1.0, 0.0], -1.0, near, &model, 1e-4, &cfg);
        assert!(matches!(err, Err(Error::Precondition(_))));
        let unit = SpectralPoint::new(Complex64::new(0.0, 1.0 + 5e-4));
        assert!(dbar_residual([1.0, 0.0], 4.0, unit, &model, 1e-4, &cfg).is_err());
    }
}
