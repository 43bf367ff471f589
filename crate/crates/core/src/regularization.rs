//! Finite-`N` rank-one regularization of the point potential.
//!
//! The potential `v_N = eps(N) |u_N><u_N|` with `u_N` the Fourier indicator of
//! the disc `|xi| <= N` and the renormalized coupling
//! `eps(N) = alpha / (1 - (alpha/2pi) ln N)` has the Faddeev solution
//!
//! ```text
//! mu_N(x, k) = 1 + A_N(k) [ g(x, k) + (1/2pi)^2 T_N(x, k) ],
//! A_N(k)     = eps(N) / (1 + eps(N) D_N(k)),
//! D_N(k)     = (1/2pi)^2 int_{|z| <= N} dz / (z^2 + 2kz),
//! ```
//!
//! where `T_N = int_{|xi| > N} e^{i xi x}/(xi^2 + 2k xi)` is the part of the
//! Green function integral cut off by the regularization. For complex `k`,
//! `D_N = (1/2pi) ln((N + sqrt(N^2 - 4E)) / (2L))` once `N >= 2|Re k|`, so
//! `D_N - (1/2pi) ln(N/L) = O(N^-2)`. Real momenta use the limit `k + i0 k`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{norm, ComplexMomentum, Vec2};
use crate::green::{disc_tail, green_classical, green_faddeev, QuadratureConfig};
use crate::model::PointModel;
use crate::quadrature::integrate_real;
use crate::special::bessel_j1;

const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// Cutoff radius `N` and bare coupling `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffModel {
    pub n: f64,
    pub alpha: f64,
}

impl CutoffModel {
    pub fn new(n: f64, alpha: f64) -> Result<Self> {
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Domain(format!(
                "cutoff must be positive and finite, got {n}"
            )));
        }
        if !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "coupling must be finite, got {alpha}"
            )));
        }
        Ok(Self { n, alpha })
    }

    /// `eps(N) = alpha / (1 - (alpha/2pi) ln N)`.
    pub fn epsilon(&self) -> Result<f64> {
        let den = 1.0 - self.alpha / (2.0 * PI) * self.n.ln();
        if den.abs() <= 1e-14 * (1.0 + (self.alpha / (2.0 * PI) * self.n.ln()).abs()) {
            return Err(Error::Domain(format!(
                "eps(N) has a pole at N = {}",
                self.n
            )));
        }
        Ok(self.alpha / den)
    }

    /// `A_N(k) = eps / (1 + eps D_N(k))`.
    pub fn amplitude(&self, k: &ComplexMomentum) -> Result<Complex64> {
        let eps = self.epsilon()?;
        let den = 1.0 + eps * denom_integral(k, self.n)?;
        if den.norm() <= 1e-14 * (1.0 + eps.abs()) {
            return Err(Error::Resonance { cutoff: self.n });
        }
        Ok(eps / den)
    }
}

/// Fourier-space profile: `1` on the closed disc `|xi| <= N`, `0` outside.
pub fn u_hat(xi: Vec2, n: f64) -> u8 {
    u8::from(norm(xi) <= n)
}

/// `u_N(x) = (1/2pi)^2 int_{|xi|<=N} e^{i xi x} dxi = N J1(N|x|) / (2pi |x|)`.
pub fn u_position(x: Vec2, n: f64) -> f64 {
    let r = norm(x);
    let z = n * r;
    if z < 1e-6 {
        // J1(z)/z = 1/2 - z^2/16 + ...
        return n * n / (2.0 * PI) * (0.5 - z * z / 16.0);
    }
    n * bessel_j1(z) / (2.0 * PI * r)
}

/// `D_N(k) = (1/2pi)^2 int_{|z| <= N} dz/(z^2 + 2kz)`, exact.
///
/// Real `k` is read as `k + i0 k`, for which the angular integral is
/// `2 pi i / sqrt(4|k|^2 - rho^2)` inside the singular circle.
pub fn denom_integral(k: &ComplexMomentum, n: f64) -> Result<Complex64> {
    if !(n > 0.0) {
        return Err(Error::Domain("cutoff must be positive".into()));
    }
    let energy = k.square().re;
    if k.is_real() {
        let kn = norm(k.re());
        if kn == 0.0 {
            return Err(Error::Domain("D_N diverges at k = 0".into()));
        }
        let inside = 2.0 * PI * (n.min(2.0 * kn) / (2.0 * kn)).asin();
        let outside = if n > 2.0 * kn {
            2.0 * PI * ((n + (n * n - 4.0 * kn * kn).sqrt()) / (2.0 * kn)).ln()
        } else {
            0.0
        };
        return Ok(Complex64::new(outside, inside) / FOUR_PI_SQ);
    }
    let pn = norm(k.re());
    if n <= 2.0 * pn {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let l = k.l1_norm();
    let v = ((n + (n * n - 4.0 * energy).sqrt()) / (2.0 * l)).ln() / (2.0 * PI);
    Ok(Complex64::new(v, 0.0))
}

/// `D_N` minus its leading large-`N` behaviour: `(1/2pi) ln(N/L)` for complex `k`,
/// `(1/2pi) ln(N/|k|) + i/4` for real `k`.
pub fn denom_remainder(k: &ComplexMomentum, n: f64) -> Result<Complex64> {
    let d = denom_integral(k, n)?;
    let lead = if k.is_real() {
        Complex64::new((n / norm(k.re())).ln() / (2.0 * PI), 0.25)
    } else {
        Complex64::new((n / k.l1_norm()).ln() / (2.0 * PI), 0.0)
    };
    Ok(d - lead)
}

/// One numeric check of a logarithmic integral identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub numeric: f64,
    pub exact: f64,
    pub residual: f64,
}

/// `int_0^{pi/2} ln(cos phi) d phi = -(pi/2) ln 2`.
pub fn log_cos_identity(cfg: &QuadratureConfig) -> Result<IdentityCheck> {
    let numeric = integrate_real(|phi: f64| phi.cos().ln(), 0.0, PI / 2.0, 4, cfg)?;
    let exact = -PI / 2.0 * 2f64.ln();
    Ok(IdentityCheck {
        name: "log-cos".into(),
        numeric,
        exact,
        residual: (numeric - exact).abs(),
    })
}

/// `int_0^{pi/2} ln sqrt(a^2 cos^2 + b^2 sin^2) d phi = (pi/2) ln((|a| + |b|)/2)`, `a, b != 0`.
pub fn log_ellipse_identity(a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IdentityCheck> {
    if a == 0.0 || b == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::Precondition(
            "the ellipse identity needs finite a, b != 0".into(),
        ));
    }
    let f = |phi: f64| 0.5 * (a * a * phi.cos().powi(2) + b * b * phi.sin().powi(2)).ln();
    let numeric = integrate_real(f, 0.0, PI / 2.0, 4, cfg)?;
    let exact = PI / 2.0 * ((a.abs() + b.abs()) / 2.0).ln();
    Ok(IdentityCheck {
        name: format!("log-ellipse a={a} b={b}"),
        numeric,
        exact,
        residual: (numeric - exact).abs(),
    })
}

/// The log-cos identity and the ellipse identity at `(1,1)`, `(3,1)`, `(0.5,2)`.
pub fn log_integral_identities(cfg: &QuadratureConfig) -> Result<Vec<IdentityCheck>> {
    let mut out = vec![log_cos_identity(cfg)?];
    for (a, b) in [(1.0, 1.0), (3.0, 1.0), (0.5, 2.0)] {
        out.push(log_ellipse_identity(a, b, cfg)?);
    }
    Ok(out)
}

/// `mu_N(x, k)` for `Im k != 0`, or `mu+_N(x, k) = mu_N(x, k + i0 k)` for real `k`.
/// Needs `N > 2|Re k|` so that the cut-off region avoids the singular circle.
pub fn mu_n(
    x: Vec2,
    k: &ComplexMomentum,
    m: &CutoffModel,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    if m.alpha == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if !(m.n > 2.0 * norm(k.re())) {
        return Err(Error::Precondition(format!(
            "cutoff {} must exceed 2|Re k| = {}",
            m.n,
            2.0 * norm(k.re())
        )));
    }
    let amplitude = m.amplitude(k)?;
    let g = if k.is_real() {
        green_classical(x, k.re())?
    } else {
        green_faddeev(x, k, cfg)?
    };
    let tail = disc_tail(x, k, m.n, cfg)?;
    Ok(1.0 + amplitude * (g + tail / FOUR_PI_SQ))
}

/// `N -> infinity` limit of [`mu_n`]: `mu` for complex `k`, `mu+` for real `k`.
pub fn mu_limit(
    x: Vec2,
    k: &ComplexMomentum,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let model = PointModel::new(alpha)?;
    if k.is_real() {
        let kr = k.re();
        let wave = Complex64::from_polar(1.0, kr[0] * x[0] + kr[1] * x[1]);
        return Ok(model.psi_plus(x, kr)? / wave);
    }
    model.mu(x, k, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: f64,
    pub mu_n: Complex64,
    pub error: f64,
    /// `|A_N - A| / |A|` with `A` the limiting prefactor.
    pub prefactor_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub limit: Complex64,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares `p` in `error ~ C N^{-p}`.
    pub fitted_exponent: f64,
    pub monotone: bool,
}

/// `|mu_N - mu|` over the given cutoffs (powers of two `2^4 .. 2^14` by default in callers).
pub fn convergence_report(
    x: Vec2,
    k: &ComplexMomentum,
    alpha: f64,
    cutoffs: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ConvergenceReport> {
    if cutoffs.is_empty() {
        return Err(Error::Precondition("empty cutoff sequence".into()));
    }
    let limit = mu_limit(x, k, alpha, cfg)?;
    let model = PointModel::new(alpha)?;
    let limit_prefactor = if alpha == 0.0 {
        Complex64::new(0.0, 0.0)
    } else if k.is_real() {
        FOUR_PI_SQ * model.data_f(norm(k.re()))?
    } else {
        Complex64::new(model.faddeev_prefactor(k)?, 0.0)
    };
    let mut rows = Vec::with_capacity(cutoffs.len());
    for &n in cutoffs {
        let m = CutoffModel::new(n, alpha)?;
        let value = mu_n(x, k, &m, cfg)?;
        let prefactor_error = if alpha == 0.0 {
            0.0
        } else {
            (m.amplitude(k)? - limit_prefactor).norm() / limit_prefactor.norm()
        };
        rows.push(ConvergenceRow {
            n,
            mu_n: value,
            error: (value - limit).norm(),
            prefactor_error,
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].error <= w[0].error);
    let fitted_exponent = fit_decay(&rows.iter().map(|r| (r.n, r.error)).collect::<Vec<_>>());
    Ok(ConvergenceReport {
        limit,
        rows,
        fitted_exponent,
        monotone,
    })
}

/// Least-squares `p` in `y ~ C n^{-p}`; NaN if fewer than two positive samples.
pub fn fit_decay(samples: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(n, y)| *n > 0.0 && *y > 0.0)
        .map(|(n, y)| (n.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    -sxy / sxx
}

/// Dyadic cutoffs `2^lo ..= 2^hi`.
pub fn dyadic_cutoffs(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|j| 2f64.powi(j)).collect()
}
