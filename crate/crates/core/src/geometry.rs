//! Charts of the fixed-energy surface `k1^2 + k2^2 = E` and small vector helpers.
//!
//! For `E != 0` the surface is parametrized by `lambda` through
//! `k_E(lambda) = ((1/lambda + lambda) sqrt(E)/2, (1/lambda - lambda) i sqrt(E)/2)`,
//! with the branch `sqrt(E) = i sqrt(|E|)` when `E < 0`. At `E = 0` the surface
//! splits into two sheets `k = (lambda, +-i lambda)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Real planar vector.
pub type Vec2 = [f64; 2];

/// Default relative tolerance for `k^2 = E` consistency checks.
pub const MOMENTUM_TOL: f64 = 1e-10;

pub fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

/// Rotation by +pi/2: `(k1, k2) -> (-k2, k1)`.
pub fn k_perp(k: Vec2) -> Vec2 {
    [-k[1], k[0]]
}

/// Heaviside indicator with `chi_plus(0) = 0`.
pub fn chi_plus(s: f64) -> u8 {
    u8::from(s > 0.0)
}

/// Sheet label of the zero-energy surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sheet {
    Plus,
    Minus,
    NotApplicable,
}

/// A point `lambda` of the spectral plane. The sheet is only meaningful at `E = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub lambda: Complex64,
    pub sheet: Sheet,
}

impl SpectralPoint {
    pub fn new(lambda: Complex64) -> Self {
        Self {
            lambda,
            sheet: Sheet::NotApplicable,
        }
    }

    pub fn on_sheet(lambda: Complex64, sheet: Sheet) -> Self {
        Self { lambda, sheet }
    }

    /// Same point with `lambda` rescaled by a real factor, sheet kept.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            lambda: self.lambda * factor,
            sheet: self.sheet,
        }
    }
}

/// A complex momentum `k = p + i q` in `C^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexMomentum {
    pub k1: Complex64,
    pub k2: Complex64,
}

impl ComplexMomentum {
    pub fn new(k1: Complex64, k2: Complex64) -> Self {
        Self { k1, k2 }
    }

    pub fn from_parts(p: Vec2, q: Vec2) -> Self {
        Self {
            k1: Complex64::new(p[0], q[0]),
            k2: Complex64::new(p[1], q[1]),
        }
    }

    pub fn real(k: Vec2) -> Self {
        Self::from_parts(k, [0.0, 0.0])
    }

    /// `p = Re k`.
    pub fn re(&self) -> Vec2 {
        [self.k1.re, self.k2.re]
    }

    /// `q = Im k`.
    pub fn im(&self) -> Vec2 {
        [self.k1.im, self.k2.im]
    }

    /// `k1^2 + k2^2`.
    pub fn square(&self) -> Complex64 {
        self.k1 * self.k1 + self.k2 * self.k2
    }

    /// `k . x` for real `x`.
    pub fn dot_real(&self, x: Vec2) -> Complex64 {
        self.k1 * x[0] + self.k2 * x[1]
    }

    pub fn is_real(&self) -> bool {
        self.k1.im == 0.0 && self.k2.im == 0.0
    }

    /// `|Re k| + |Im k|` with Euclidean lengths.
    pub fn l1_norm(&self) -> f64 {
        norm(self.re()) + norm(self.im())
    }

    /// Checks `k^2 = E` to relative tolerance `tol` (scaled by `|p|^2 + |q|^2`).
    pub fn check_energy(&self, energy: f64, tol: f64) -> Result<()> {
        let sq = self.square();
        let scale = dot(self.re(), self.re()) + dot(self.im(), self.im());
        let bound = tol * scale.max(energy.abs()).max(f64::MIN_POSITIVE);
        if (sq.re - energy).abs() > bound || sq.im.abs() > bound {
            return Err(Error::Inconsistent {
                expected: energy,
                got: sq.re,
            });
        }
        Ok(())
    }
}

/// Chosen branch of `sqrt(E)`: nonnegative for `E >= 0`, `i sqrt(|E|)` for `E < 0`.
pub fn sqrt_energy(energy: f64) -> Complex64 {
    if energy >= 0.0 {
        Complex64::new(energy.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-energy).sqrt())
    }
}

/// `k_E(lambda)` for `E != 0`, `k_0^{+-}(lambda)` for `E = 0`.
pub fn momentum_from_lambda(energy: f64, point: SpectralPoint) -> Result<ComplexMomentum> {
    if !energy.is_finite() || !point.lambda.is_finite() {
        return Err(Error::Domain("non-finite energy or lambda".into()));
    }
    let lambda = point.lambda;
    if energy == 0.0 {
        let i = Complex64::i();
        return match point.sheet {
            Sheet::Plus => Ok(ComplexMomentum::new(lambda, i * lambda)),
            Sheet::Minus => Ok(ComplexMomentum::new(lambda, -i * lambda)),
            Sheet::NotApplicable => Err(Error::Domain(
                "a sheet (plus/minus) is required at zero energy".into(),
            )),
        };
    }
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain(
            "lambda = 0 is not a point of the chart for E != 0".into(),
        ));
    }
    let root = sqrt_energy(energy);
    let inv = lambda.inv();
    let k1 = (inv + lambda) * root * 0.5;
    let k2 = (inv - lambda) * root * Complex64::new(0.0, 0.5);
    Ok(ComplexMomentum::new(k1, k2))
}

/// Inverse chart: `lambda = (k1 + i k2)/sqrt(E)` for `E != 0`, `lambda = k1` at `E = 0`.
pub fn lambda_from_momentum(k: ComplexMomentum, energy: f64) -> Result<SpectralPoint> {
    k.check_energy(energy, MOMENTUM_TOL)?;
    let i = Complex64::i();
    if energy == 0.0 {
        let scale = k.k1.norm().max(k.k2.norm());
        if scale == 0.0 {
            return Err(Error::Domain(
                "k = 0 lies on both zero-energy sheets".into(),
            ));
        }
        let sheet = if (k.k2 - i * k.k1).norm() <= (k.k2 + i * k.k1).norm() {
            Sheet::Plus
        } else {
            Sheet::Minus
        };
        return Ok(SpectralPoint::on_sheet(k.k1, sheet));
    }
    // k1 + i k2 = sqrt(E) lambda and k1 - i k2 = sqrt(E)/lambda; use the larger one.
    let forward = k.k1 + i * k.k2;
    let backward = k.k1 - i * k.k2;
    let root = sqrt_energy(energy);
    let lambda = if forward.norm() >= backward.norm() {
        forward / root
    } else {
        root / backward
    };
    Ok(SpectralPoint::new(lambda))
}

/// `|Re k| + |Im k|`.
pub fn l1_momentum_norm(k: &ComplexMomentum) -> f64 {
    k.l1_norm()
}

/// Closed form of `|Re k| + |Im k|` on the charts: `sqrt|E| max(|lambda|, 1/|lambda|)`
/// for `E != 0` and `2 |lambda|` at `E = 0`.
pub fn l1_norm_on_chart(energy: f64, lambda: Complex64) -> f64 {
    let r = lambda.norm();
    if energy == 0.0 {
        2.0 * r
    } else {
        energy.abs().sqrt() * r.max(1.0 / r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn momentum_examples() {
        let k = momentum_from_lambda(4.0, SpectralPoint::new(c(1.0, 0.0))).unwrap();
        assert_relative_eq!(k.k1.re, 2.0);
        assert_eq!(k.k1.im, 0.0);
        assert!(k.k2.norm() < 1e-15);

        let k =
            momentum_from_lambda(0.0, SpectralPoint::on_sheet(c(1.0, 0.0), Sheet::Plus)).unwrap();
        assert_eq!(k, ComplexMomentum::new(c(1.0, 0.0), c(0.0, 1.0)));

        let k = momentum_from_lambda(-1.0, SpectralPoint::new(c(0.0, 1.0))).unwrap();
        assert!(k.k1.norm() < 1e-15);
        assert!((k.k2 - c(0.0, 1.0)).norm() < 1e-15);
        assert!((k.square() - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn momentum_domain_errors() {
        assert!(matches!(
            momentum_from_lambda(2.0, SpectralPoint::new(c(0.0, 0.0))),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            momentum_from_lambda(0.0, SpectralPoint::new(c(1.0, 0.0))),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn lambda_examples() {
        let s = lambda_from_momentum(ComplexMomentum::real([2.0, 0.0]), 4.0).unwrap();
        assert!((s.lambda - c(1.0, 0.0)).norm() < 1e-15);
        let s = lambda_from_momentum(ComplexMomentum::new(c(1.0, 0.0), c(0.0, 1.0)), 0.0).unwrap();
        assert_eq!(s.sheet, Sheet::Plus);
        assert!((s.lambda - c(1.0, 0.0)).norm() < 1e-15);
        let s = lambda_from_momentum(ComplexMomentum::new(c(0.0, 0.0), c(0.0, 1.0)), -1.0).unwrap();
        assert!((s.lambda - c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn lambda_rejects_off_surface() {
        let err = lambda_from_momentum(ComplexMomentum::real([2.0, 0.0]), 3.0).unwrap_err();
        assert!(matches!(err, Error::Inconsistent { .. }));
    }

    #[test]
    fn l1_norm_examples() {
        let k = momentum_from_lambda(4.0, SpectralPoint::new(c(2.0, 0.0))).unwrap();
        assert_relative_eq!(l1_momentum_norm(&k), 4.0, max_relative = 1e-14);
        let k =
            momentum_from_lambda(0.0, SpectralPoint::on_sheet(c(3.0, 0.0), Sheet::Plus)).unwrap();
        assert_relative_eq!(l1_momentum_norm(&k), 6.0, max_relative = 1e-14);
        let k =
            momentum_from_lambda(5.0, SpectralPoint::new(Complex64::from_polar(1.0, 0.7))).unwrap();
        assert_relative_eq!(l1_momentum_norm(&k), 5f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn helpers() {
        assert_eq!(chi_plus(1.0), 1);
        assert_eq!(chi_plus(0.0), 0);
        assert_eq!(chi_plus(-2.0), 0);
        assert_eq!(k_perp([1.0, 0.0]), [-0.0, 1.0]);
        assert_eq!(k_perp([0.0, 1.0]), [-1.0, 0.0]);
        assert_eq!(k_perp([3.0, 4.0]), [-4.0, 3.0]);
    }

    #[test]
    fn log_radial_grid_consistency() {
        for &energy in &[-3.0, -0.25, 0.5, 7.0] {
            for i in 0..=24 {
                let r = 10f64.powf(-3.0 + 6.0 * i as f64 / 24.0);
                for j in 0..64 {
                    let phi = std::f64::consts::TAU * j as f64 / 64.0;
                    let lambda = Complex64::from_polar(r, phi);
                    let k = momentum_from_lambda(energy, SpectralPoint::new(lambda)).unwrap();
                    let scale = dot(k.re(), k.re()) + dot(k.im(), k.im());
                    assert!((k.square() - energy).norm() <= 1e-12 * scale.max(1.0));
                    assert!(dot(k.re(), k.im()).abs() <= 1e-12 * scale.max(1.0));
                    let back = lambda_from_momentum(k, energy).unwrap();
                    assert!((back.lambda - lambda).norm() <= 1e-12 * r);
                    assert!(
                        (l1_momentum_norm(&k) - l1_norm_on_chart(energy, lambda)).abs()
                            <= 1e-12 * l1_momentum_norm(&k)
                    );
                }
            }
        }
    }

    #[test]
    fn unit_circle_is_real_for_positive_energy() {
        for j in 0..32 {
            let lambda = Complex64::from_polar(1.0, 0.2 * j as f64);
            let k = momentum_from_lambda(3.0, SpectralPoint::new(lambda)).unwrap();
            assert!(norm(k.im()) < 1e-15);
        }
    }

    #[test]
    fn branch_swap_is_lambda_flip() {
        let lambda = c(0.3, -1.7);
        for &energy in &[-2.0, 2.0] {
            let k = momentum_from_lambda(energy, SpectralPoint::new(lambda)).unwrap();
            let flipped = momentum_from_lambda(energy, SpectralPoint::new(-lambda)).unwrap();
            assert!((k.k1 + flipped.k1).norm() < 1e-14);
            assert!((k.k2 + flipped.k2).norm() < 1e-14);
        }
    }
}
