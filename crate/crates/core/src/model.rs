//! The solved point model: eigenfunctions, scattering data, bound state and
//! the classification of contour singularities in the spectral parameter.
//!
//! All data are constant in the Fourier variable. With
//! `L = |Re k| + |Im k|` and `E1 = -exp(4 pi/alpha)`:
//!
//! ```text
//! a(k) = b(k) = (1/2pi)^2 alpha / (1 - (alpha/2pi) ln L)
//! f(|k|)      = (1/2pi)^2 alpha / (1 + (alpha/4pi)(pi i - 2 ln|k|))
//! h+-(|k|)    = (1/2pi)^2 alpha / (1 - (alpha/2pi) ln|k|)
//! psi(x, k)   = e^{ikx} (1 + (2pi)^2 a(k) g(x, k))
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    l1_norm_on_chart, lambda_from_momentum, momentum_from_lambda, norm, ComplexMomentum, Sheet,
    SpectralPoint, Vec2,
};
pub use crate::green::Side;
use crate::green::{green_classical, green_faddeev, green_pm, QuadratureConfig};
use crate::special::bessel_k0;

const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// Relative width used to decide the measure-zero cases `E = E1`, `E = 0`, `E = |E1|`.
pub const CASE_EPSILON: f64 = 1e-12;

/// Relative distance to a pole below which a prefactor is reported as singular.
const POLE_EPSILON: f64 = 1e-12;

/// Point potential with coupling `alpha`; `alpha = 0` is the free model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointModel {
    pub alpha: f64,
}

/// Generalized scattering data at one momentum. `f` and `h+-` exist only for `E > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringData {
    pub a: Complex64,
    pub b: Complex64,
    pub f: Option<Complex64>,
    pub h_plus: Option<Complex64>,
    pub h_minus: Option<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumClassification {
    pub case_id: u8,
    /// Circles `|lambda| = r` carrying singularities, ascending.
    pub contour_radii: Vec<f64>,
    pub continuity_region: String,
    pub has_real_exceptional_points: bool,
    pub is_bound_state_energy: bool,
}

/// The negative eigenvalue `E1` and its eigenfunction `-(1/2pi) K0(sqrt|E1| |x|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub energy: f64,
}

impl BoundState {
    pub fn decay_rate(&self) -> f64 {
        (-self.energy).sqrt()
    }

    pub fn wavefunction(&self, x: Vec2) -> Result<f64> {
        let r = norm(x);
        if r == 0.0 {
            return Err(Error::Singularity);
        }
        Ok(-bessel_k0(self.decay_rate() * r)? / (2.0 * PI))
    }
}

/// One sample of `|a|` on a ray approaching a contour.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupSample {
    pub radius: f64,
    /// `-1` for approach from inside the circle, `+1` from outside.
    pub approach: i8,
    pub lambda_modulus: f64,
    pub distance: f64,
    pub abs_a: f64,
}

/// Log-log slope of `|a|` against the distance to one contour, from one side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupFit {
    pub radius: f64,
    pub approach: i8,
    /// `p` in `|a| ~ C / dist^p`.
    pub exponent: f64,
    /// `|a| dist` at the closest sample.
    pub residue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupScan {
    pub energy: f64,
    pub alpha: f64,
    pub case_id: u8,
    pub samples: Vec<BlowupSample>,
    pub fits: Vec<BlowupFit>,
    /// Largest `|a|` seen on a coarse sweep `|lambda| in [1e-2, 1e2]` off the contours.
    pub sweep_max_abs_a: f64,
}

impl PointModel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::Domain(format!(
                "coupling must be finite, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn is_free(&self) -> bool {
        self.alpha == 0.0
    }

    /// `E1 = -exp(4 pi/alpha)`, or `None` for the free model.
    pub fn ground_energy(&self) -> Option<f64> {
        (!self.is_free()).then(|| -(4.0 * PI / self.alpha).exp())
    }

    fn require_coupling(&self) -> Result<f64> {
        self.ground_energy().ok_or_else(|| {
            Error::Precondition("the free model has no bound state or contours".into())
        })
    }

    // alpha / (1 - (alpha/2pi) ln t), or None on the pole.
    fn log_prefactor(&self, t: f64) -> Option<f64> {
        if self.is_free() {
            return Some(0.0);
        }
        let den = 1.0 - self.alpha / (2.0 * PI) * t.ln();
        let scale = 1.0 + (self.alpha / (2.0 * PI) * t.ln()).abs();
        (den.abs() > POLE_EPSILON * scale).then(|| self.alpha / den)
    }

    /// `(2pi)^2 a(k) = alpha / (1 - (alpha/2pi) ln(|Re k| + |Im k|))`.
    pub fn faddeev_prefactor(&self, k: &ComplexMomentum) -> Result<f64> {
        let l = k.l1_norm();
        self.log_prefactor(l).ok_or_else(|| {
            let energy = k.square().re;
            let radius = lambda_from_momentum(*k, energy)
                .map(|s| s.lambda.norm())
                .unwrap_or(f64::NAN);
            Error::ContourSingularity {
                energy,
                alpha: self.alpha,
                radius,
            }
        })
    }

    pub fn data_a(&self, k: &ComplexMomentum) -> Result<f64> {
        if k.is_real() {
            return Err(Error::Domain("a(k) requires Im k != 0".into()));
        }
        Ok(self.faddeev_prefactor(k)? / FOUR_PI_SQ)
    }

    pub fn data_b(&self, k: &ComplexMomentum) -> Result<f64> {
        self.data_a(k)
    }

    /// Classical scattering amplitude; independent of the scattering angle.
    pub fn data_f(&self, k_modulus: f64) -> Result<Complex64> {
        if !(k_modulus > 0.0) {
            return Err(Error::Domain("f requires |k| > 0".into()));
        }
        let den = Complex64::new(
            1.0 - self.alpha / (2.0 * PI) * k_modulus.ln(),
            self.alpha / 4.0,
        );
        Ok(self.alpha / den / FOUR_PI_SQ)
    }

    /// `f(k, l)` for `|l| = |k|`.
    pub fn data_f_at(&self, k: Vec2, l: Vec2) -> Result<Complex64> {
        let (kn, ln) = (norm(k), norm(l));
        if (kn - ln).abs() > 1e-10 * kn.max(ln) {
            return Err(Error::Domain(format!(
                "f(k, l) requires |l| = |k|, got {ln} and {kn}"
            )));
        }
        self.data_f(kn)
    }

    /// `h+ = h-`; undefined at `E = |E1|`.
    pub fn data_h_pm(&self, k_modulus: f64) -> Result<f64> {
        if !(k_modulus > 0.0) {
            return Err(Error::Domain("h+- requires |k| > 0".into()));
        }
        self.log_prefactor(k_modulus)
            .map(|v| v / FOUR_PI_SQ)
            .ok_or(Error::ExceptionalPoint {
                energy: k_modulus * k_modulus,
                alpha: self.alpha,
            })
    }

    /// `H(k, xi)`; constant in `xi`.
    pub fn kernel_h(&self, k: &ComplexMomentum, _xi: Vec2) -> Result<f64> {
        self.data_a(k)
    }

    /// `F(k, l)`; constant in `l`.
    pub fn kernel_f(&self, k: Vec2, _l: Vec2) -> Result<Complex64> {
        self.data_f(norm(k))
    }

    /// `H+-(k, l)`; constant in `l`, equal for both sides.
    pub fn kernel_h_pm(&self, k: Vec2, _l: Vec2, _side: Side) -> Result<f64> {
        self.data_h_pm(norm(k))
    }

    pub fn scattering_data(&self, k: &ComplexMomentum) -> Result<ScatteringData> {
        let a = Complex64::new(self.data_a(k)?, 0.0);
        let energy = k.square().re;
        let (f, h) = if energy > 0.0 {
            let modulus = energy.sqrt();
            let h = self.data_h_pm(modulus).ok().map(|v| Complex64::new(v, 0.0));
            (Some(self.data_f(modulus)?), h)
        } else {
            (None, None)
        };
        Ok(ScatteringData {
            a,
            b: a,
            f,
            h_plus: h,
            h_minus: h,
        })
    }

    /// `e^{-ikx} psi(x, k) = 1 + (2pi)^2 a(k) g(x, k)`.
    pub fn mu(&self, x: Vec2, k: &ComplexMomentum, cfg: &QuadratureConfig) -> Result<Complex64> {
        if self.is_free() {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let prefactor = self.faddeev_prefactor(k)?;
        Ok(1.0 + prefactor * green_faddeev(x, k, cfg)?)
    }

    /// Faddeev eigenfunction, `Im k != 0`.
    pub fn psi(&self, x: Vec2, k: &ComplexMomentum, cfg: &QuadratureConfig) -> Result<Complex64> {
        if k.is_real() {
            return Err(Error::Domain(
                "psi requires Im k != 0; use psi_pm on real momenta".into(),
            ));
        }
        Ok((Complex64::i() * k.dot_real(x)).exp() * self.mu(x, k, cfg)?)
    }

    /// Classical scattering solution with outgoing boundary condition.
    pub fn psi_plus(&self, x: Vec2, k: Vec2) -> Result<Complex64> {
        let wave = Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1]);
        if self.is_free() {
            return Ok(wave);
        }
        let amplitude = FOUR_PI_SQ * self.data_f(norm(k))?;
        Ok(wave * (1.0 + amplitude * green_classical(x, k)?))
    }

    /// Boundary values of the Faddeev function on real momenta.
    pub fn psi_pm(
        &self,
        x: Vec2,
        k: Vec2,
        side: Side,
        cfg: &QuadratureConfig,
    ) -> Result<Complex64> {
        let wave = Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1]);
        if self.is_free() {
            return Ok(wave);
        }
        let amplitude = FOUR_PI_SQ * self.data_h_pm(norm(k))?;
        Ok(wave * (1.0 + amplitude * green_pm(x, k, side, cfg)?))
    }

    /// `psi(x, k_E(lambda))`. On `|lambda| = 1` with `E > 0` the momentum is real
    /// and `side` selects the boundary value: `Plus` is the limit from inside
    /// the unit circle, `Minus` from outside.
    pub fn psi_at(
        &self,
        x: Vec2,
        energy: f64,
        point: SpectralPoint,
        side: Option<Side>,
        cfg: &QuadratureConfig,
    ) -> Result<Complex64> {
        let k = momentum_from_lambda(energy, point)?;
        if energy > 0.0 && (point.lambda.norm() - 1.0).abs() <= CASE_EPSILON {
            let side = side.ok_or_else(|| {
                Error::Precondition("|lambda| = 1 at E > 0 needs a boundary side".into())
            })?;
            let kr = k.re();
            return self.psi_pm(x, kr, side, cfg);
        }
        self.psi(x, &k, cfg)
    }

    pub fn bound_state(&self) -> Result<BoundState> {
        Ok(BoundState {
            energy: self.require_coupling()?,
        })
    }

    pub fn classify_spectrum(&self, energy: f64) -> Result<SpectrumClassification> {
        let e1 = self.require_coupling()?;
        if !energy.is_finite() {
            return Err(Error::Domain("energy must be finite".into()));
        }
        let scale = e1.abs();
        let near = |a: f64, b: f64| (a - b).abs() <= CASE_EPSILON * scale;
        let reciprocal = || {
            let r = (energy / e1).abs().sqrt();
            vec![r.min(1.0 / r), r.max(1.0 / r)]
        };
        let (case_id, radii, region) = if near(energy, e1) {
            (2, vec![1.0], "continuous off the unit circle")
        } else if energy < e1 {
            (1, vec![], "continuous on the whole Riemann sphere")
        } else if near(energy, 0.0) {
            (
                4,
                vec![0.5 * scale.sqrt()],
                "continuous off the contour, on both sheets",
            )
        } else if energy < 0.0 {
            (3, reciprocal(), "continuous off the two contours")
        } else if near(energy, scale) {
            (
                6,
                vec![1.0],
                "continuous off the unit circle; h+- undefined on it",
            )
        } else if energy < scale {
            (
                5,
                reciprocal(),
                "continuous off the two contours and the unit circle",
            )
        } else {
            (
                7,
                vec![],
                "continuous off the unit circle, with boundary values on it",
            )
        };
        Ok(SpectrumClassification {
            case_id,
            contour_radii: radii,
            continuity_region: region.to_string(),
            has_real_exceptional_points: case_id == 6,
            is_bound_state_energy: case_id == 2,
        })
    }

    /// Samples `|a(k_E(lambda))|` on a ray approaching every contour from both
    /// sides at distances `r 2^{-j}`, `j = 3 .. 3 + radial_samples`.
    pub fn contour_blowup_scan(&self, energy: f64, radial_samples: usize) -> Result<BlowupScan> {
        let class = self.classify_spectrum(energy)?;
        let sheet = if class.case_id == 4 {
            Sheet::Plus
        } else {
            Sheet::NotApplicable
        };
        let direction = Complex64::from_polar(1.0, 0.3);
        let abs_a = |modulus: f64| -> Option<f64> {
            let point = SpectralPoint::on_sheet(direction * modulus, sheet);
            let k = momentum_from_lambda(energy, point).ok()?;
            if k.is_real() {
                return None;
            }
            self.data_a(&k).ok().map(f64::abs)
        };
        let mut samples = Vec::new();
        let mut fits = Vec::new();
        for &radius in &class.contour_radii {
            for approach in [-1i8, 1] {
                let mut side = Vec::new();
                for j in 3..3 + radial_samples.max(2) {
                    let distance = radius * 0.5f64.powi(j as i32);
                    let modulus = radius + f64::from(approach) * distance;
                    if let Some(v) = abs_a(modulus) {
                        side.push(BlowupSample {
                            radius,
                            approach,
                            lambda_modulus: modulus,
                            distance,
                            abs_a: v,
                        });
                    }
                }
                if side.len() >= 2 {
                    fits.push(fit_blowup(radius, approach, &side));
                }
                samples.extend(side);
            }
        }
        let mut sweep_max_abs_a: f64 = 0.0;
        for j in 0..=400 {
            let modulus = 10f64.powf(-2.0 + 4.0 * j as f64 / 400.0);
            let clear = class
                .contour_radii
                .iter()
                .all(|r| (modulus - r).abs() > 1e-3 * r);
            if clear {
                if let Some(v) = abs_a(modulus) {
                    sweep_max_abs_a = sweep_max_abs_a.max(v);
                }
            }
        }
        Ok(BlowupScan {
            energy,
            alpha: self.alpha,
            case_id: class.case_id,
            samples,
            fits,
            sweep_max_abs_a,
        })
    }
}

// Least-squares slope of ln|a| against -ln(dist).
fn fit_blowup(radius: f64, approach: i8, side: &[BlowupSample]) -> BlowupFit {
    let pts: Vec<(f64, f64)> = side
        .iter()
        .map(|s| (-s.distance.ln(), s.abs_a.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let last = side.last().expect("non-empty side");
    BlowupFit {
        radius,
        approach,
        exponent: sxy / sxx,
        residue: last.abs_a * last.distance,
    }
}

/// `|Re k| + |Im k|` at which `a` has its pole, `sqrt|E1| = exp(2 pi/alpha)`.
pub fn pole_norm(model: &PointModel) -> Option<f64> {
    model.ground_energy().map(|e1| (-e1).sqrt())
}

/// Whether `k_E(lambda)` lies on a singular contour, by the norm criterion.
pub fn on_contour(model: &PointModel, energy: f64, lambda: Complex64, rel_tol: f64) -> bool {
    match pole_norm(model) {
        Some(l) => (l1_norm_on_chart(energy, lambda) - l).abs() <= rel_tol * l,
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn model() -> PointModel {
        PointModel::new(4.0 * PI).unwrap()
    }

    #[test]
    fn ground_energies() {
        assert_relative_eq!(model().ground_energy().unwrap(), -E, max_relative = 1e-15);
        assert_relative_eq!(
            PointModel::new(-4.0 * PI).unwrap().ground_energy().unwrap(),
            -1.0 / E,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            PointModel::new(2.0 * PI).unwrap().ground_energy().unwrap(),
            -E * E,
            max_relative = 1e-15
        );
        assert_eq!(PointModel::new(0.0).unwrap().ground_energy(), None);
        assert!(PointModel::new(f64::NAN).is_err());
    }

    #[test]
    fn data_values() {
        let m = model();
        let k = momentum_from_lambda(-1.0, SpectralPoint::new(Complex64::new(1.0, 0.0))).unwrap();
        assert_relative_eq!(k.l1_norm(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(m.data_a(&k).unwrap(), 1.0 / PI, epsilon = 1e-15);
        let f = m.data_f(1.0).unwrap();
        let expected = Complex64::new(1.0, -PI) / (PI * (1.0 + PI * PI));
        assert!((f - expected).norm() < 1e-15);
        assert_relative_eq!(m.data_h_pm(1.0).unwrap(), 1.0 / PI, epsilon = 1e-15);
        assert!(matches!(
            m.data_h_pm(0.5f64.exp()),
            Err(Error::ExceptionalPoint { .. })
        ));
    }

    #[test]
    fn pole_of_a_reports_the_contour() {
        let m = model();
        let r = (-0.5f64).exp();
        let k = momentum_from_lambda(-1.0, SpectralPoint::new(Complex64::new(0.0, r))).unwrap();
        match m.data_a(&k) {
            Err(Error::ContourSingularity { energy, radius, .. }) => {
                assert_relative_eq!(energy, -1.0, epsilon = 1e-12);
                assert!((radius - r).abs() < 1e-12 || (radius - 1.0 / r).abs() < 1e-12);
            }
            other => panic!("expected a contour singularity, got {other:?}"),
        }
    }

    #[test]
    fn classification_examples() {
        let m = model();
        let c1 = m.classify_spectrum(-10.0).unwrap();
        assert_eq!((c1.case_id, c1.contour_radii.len()), (1, 0));
        let c2 = m.classify_spectrum(-E).unwrap();
        assert_eq!(
            (
                c2.case_id,
                c2.contour_radii.clone(),
                c2.is_bound_state_energy
            ),
            (2, vec![1.0], true)
        );
        let c3 = m.classify_spectrum(-1.0).unwrap();
        assert_eq!(c3.case_id, 3);
        assert_relative_eq!(c3.contour_radii[0], (-0.5f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(c3.contour_radii[1], 0.5f64.exp(), epsilon = 1e-15);
        let c4 = m.classify_spectrum(0.0).unwrap();
        assert_eq!(c4.case_id, 4);
        assert_relative_eq!(c4.contour_radii[0], 0.5 * 0.5f64.exp(), epsilon = 1e-15);
        assert_eq!(m.classify_spectrum(1.0).unwrap().case_id, 5);
        let c6 = m.classify_spectrum(E).unwrap();
        assert_eq!((c6.case_id, c6.has_real_exceptional_points), (6, true));
        assert_eq!(m.classify_spectrum(10.0).unwrap().case_id, 7);
        assert!(PointModel::new(0.0)
            .unwrap()
            .classify_spectrum(1.0)
            .is_err());
    }

    #[test]
    fn free_model_is_trivial() {
        let m = PointModel::new(0.0).unwrap();
        let cfg = QuadratureConfig::default();
        let k = momentum_from_lambda(-1.0, SpectralPoint::new(Complex64::new(2.0, 0.0))).unwrap();
        let x = [0.3, -0.7];
        let psi = m.psi(x, &k, &cfg).unwrap();
        assert!((psi - (Complex64::i() * k.dot_real(x)).exp()).norm() < 1e-15);
        assert_eq!(m.data_a(&k).unwrap(), 0.0);
        assert_eq!(m.data_f(2.0).unwrap(), Complex64::new(0.0, 0.0));
        let wave = Complex64::from_polar(1.0, 0.6);
        assert!((m.psi_plus(x, [2.0, 0.0]).unwrap() - wave).norm() < 1e-15);
        assert!((m.psi_pm(x, [2.0, 0.0], Side::Minus, &cfg).unwrap() - wave).norm() < 1e-15);
    }

    #[test]
    fn scan_sees_simple_poles() {
        let scan = model().contour_blowup_scan(-1.0, 12).unwrap();
        assert_eq!(scan.fits.len(), 4);
        for fit in &scan.fits {
            assert!((fit.exponent - 1.0).abs() < 0.02, "{fit:?}");
            assert!(fit.residue > 0.0 && fit.residue.is_finite());
        }
        let quiet = model().contour_blowup_scan(-10.0, 12).unwrap();
        assert!(quiet.fits.is_empty());
        assert!(quiet.sweep_max_abs_a < 1.0);
    }
}
