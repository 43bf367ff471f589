use std::f64::consts::{E, PI};

use faddeev_point::geometry::{l1_norm_on_chart, momentum_from_lambda, Sheet, SpectralPoint, Vec2};
use faddeev_point::green::green_faddeev;
use faddeev_point::quadrature::{integrate, oscillatory_tail};
use faddeev_point::special::bessel_j0;
use faddeev_point::{PointModel, QuadratureConfig, Side};
use num_complex::Complex64;
use proptest::prelude::*;

fn model() -> PointModel {
    PointModel::new(4.0 * PI).unwrap()
}

// (-Delta - E) u with fourth-order central differences.
fn schrodinger_residual<F: Fn(Vec2) -> Complex64>(u: F, x: Vec2, energy: f64, h: f64) -> Complex64 {
    let lap = |i: usize| {
        let at = |s: f64| {
            let mut y = x;
            y[i] += s * h;
            u(y)
        };
        (-at(2.0) + 16.0 * at(1.0) - 30.0 * at(0.0) + 16.0 * at(-1.0) - at(-2.0)) / (12.0 * h * h)
    };
    -(lap(0) + lap(1)) - energy * u(x)
}

#[test]
fn eigenfunctions_solve_the_schrodinger_equation_off_the_origin() {
    let m = model();
    let cfg = QuadratureConfig::precise();
    let points = [[0.7, 0.1], [-0.3, 0.8], [1.1, -0.9]];
    for (energy, lambda, sheet) in [
        (-1.0, Complex64::new(2.0, 0.0), Sheet::NotApplicable),
        (4.0, Complex64::new(0.5, 0.0), Sheet::NotApplicable),
        (0.0, Complex64::new(0.8, 0.0), Sheet::Plus),
        (-4.0, Complex64::new(0.3, 0.6), Sheet::NotApplicable),
    ] {
        let k = momentum_from_lambda(energy, SpectralPoint::on_sheet(lambda, sheet)).unwrap();
        for x in points {
            let psi = |y: Vec2| m.psi(y, &k, &cfg).unwrap();
            let res = schrodinger_residual(psi, x, energy, 1e-2).norm() / psi(x).norm().max(1.0);
            assert!(res < 1e-6, "psi E={energy} lambda={lambda} x={x:?}: {res}");
        }
    }
    let k = [1.5, 0.5];
    let energy = 2.5;
    for x in points {
        let res = schrodinger_residual(|y| m.psi_plus(y, k).unwrap(), x, energy, 1e-2);
        assert!(res.norm() < 1e-6, "psi+ at {x:?}: {}", res.norm());
        for side in [Side::Plus, Side::Minus] {
            let res =
                schrodinger_residual(|y| m.psi_pm(y, k, side, &cfg).unwrap(), x, energy, 1e-2);
            assert!(res.norm() < 1e-6, "psi {side:?} at {x:?}: {}", res.norm());
        }
    }
}

#[test]
fn composition_of_prefactor_and_green_function() {
    let m = model();
    let cfg = QuadratureConfig::precise();
    let k = momentum_from_lambda(-1.0, SpectralPoint::new(Complex64::new(2.0, 0.0))).unwrap();
    let x = [1.0, 0.0];
    let psi = m.psi(x, &k, &cfg).unwrap();
    let composed = (Complex64::i() * k.dot_real(x)).exp()
        * (1.0 + 4.0 * PI * PI * m.data_a(&k).unwrap() * green_faddeev(x, &k, &cfg).unwrap());
    assert!((psi - composed).norm() < 1e-14);
    // Regression lock: psi(x=(1,0), k_{-1}(2)), alpha = 4 pi.
    let locked = Complex64::new(1.2467818769300998, 0.0);
    assert!((psi - locked).norm() < 1e-10, "{psi:?}");
}

#[test]
fn faddeev_function_approaches_the_plane_wave() {
    let m = model();
    let cfg = QuadratureConfig::precise();
    for (energy, lambda) in [
        (-1.0, Complex64::new(2.0, 0.0)),
        (4.0, Complex64::new(0.5, 0.3)),
    ] {
        let k = momentum_from_lambda(energy, SpectralPoint::new(lambda)).unwrap();
        for dir in [[0.6, -0.8], [-1.0, 0.0]] {
            // |mu - 1| oscillates while it decays; compare maxima over dyadic windows.
            let dev: Vec<f64> = (0..9)
                .map(|j| {
                    let r = 2f64.powi(j);
                    (m.mu([r * dir[0], r * dir[1]], &k, &cfg).unwrap() - 1.0).norm()
                })
                .collect();
            let window = |w: &[f64]| w.iter().copied().fold(0.0, f64::max);
            let (a, b, c) = (window(&dev[0..3]), window(&dev[3..6]), window(&dev[6..9]));
            assert!(
                a > b && b > c && c < 0.1 * a,
                "E={energy} dir={dir:?}: {dev:?}"
            );
        }
    }
}

fn far_field_estimate(m: &PointModel, k: [f64; 2], angle: f64, radius: f64) -> Complex64 {
    let kn = k[0].hypot(k[1]);
    let x = [radius * angle.cos(), radius * angle.sin()];
    let wave = Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1]);
    let scattered = m.psi_plus(x, k).unwrap() - wave;
    let norm = Complex64::new(0.0, -PI * (2.0 * PI).sqrt()) * Complex64::from_polar(1.0, -PI / 4.0);
    scattered * (kn * radius).sqrt() * Complex64::from_polar(1.0, -kn * radius) / norm
}

#[test]
fn classical_far_field_is_the_constant_amplitude() {
    let m = model();
    for k in [[1.0, 0.0], [0.4, 1.7]] {
        let kn = f64::hypot(k[0], k[1]);
        let f = m.data_f(kn).unwrap();
        let mut estimates = Vec::new();
        for angle in [0.0, 1.0, 2.5, 4.0] {
            let est = far_field_estimate(&m, k, angle, 100.0 / kn);
            assert!(
                (est - f).norm() < 0.01 * f.norm(),
                "k={k:?} angle={angle}: {est} vs {f}"
            );
            estimates.push(est);
        }
        for e in &estimates[1..] {
            assert!((e - estimates[0]).norm() < 1e-12 * f.norm());
        }
    }
}

#[test]
fn faddeev_function_tends_to_boundary_values() {
    let m = model();
    let cfg = QuadratureConfig::precise();
    let energy = 1.0;
    let theta = 0.7;
    let x = [0.4, -1.1];
    for (side, sign) in [(Side::Plus, -1.0), (Side::Minus, 1.0)] {
        let unit = SpectralPoint::new(Complex64::from_polar(1.0, theta));
        let target = m.psi_at(x, energy, unit, Some(side), &cfg).unwrap();
        let mut errors = Vec::new();
        for j in 8..=14 {
            let delta = 2f64.powi(-j);
            let point = unit.scaled(1.0 + sign * delta);
            errors.push((m.psi_at(x, energy, point, None, &cfg).unwrap() - target).norm());
        }
        assert!(errors.last().unwrap() < &1e-3, "{side:?}: {errors:?}");
        assert!(
            errors.windows(2).all(|w| w[1] < w[0]),
            "{side:?}: {errors:?}"
        );
    }
    let unit = SpectralPoint::new(Complex64::from_polar(1.0, theta));
    assert!(m.psi_at(x, energy, unit, None, &cfg).is_err());
}

#[test]
fn bound_state_matches_its_fourier_integral() {
    // psi_1(r) = -(1/2pi) int_0^inf rho J0(rho r)/(rho^2 + kappa^2) d rho.
    let cfg = QuadratureConfig::precise();
    let state = model().bound_state().unwrap();
    assert!((state.energy + E).abs() < 1e-15);
    let kappa = state.decay_rate();
    for r in [0.5, 1.0, 2.0] {
        let f =
            |rho: f64| Complex64::new(rho * bessel_j0(rho * r) / (rho * rho + kappa * kappa), 0.0);
        let head = integrate(f, 0.0, 40.0, 40, &cfg).unwrap().value;
        let tail = oscillatory_tail(f, 40.0, PI / r, &cfg).unwrap().value;
        let oracle = -(head + tail).re / (2.0 * PI);
        let value = state.wavefunction([r, 0.0]).unwrap();
        assert!((value - oracle).abs() < 1e-8, "r={r}: {value} vs {oracle}");
    }
    let closed = state.wavefunction([0.0, 1.0]).unwrap();
    assert!(
        (closed + faddeev_point::special::bessel_k0(0.5f64.exp()).unwrap() / (2.0 * PI)).abs()
            < 1e-15
    );
}

#[test]
fn bound_state_eigen_equation() {
    let state = model().bound_state().unwrap();
    let h = 1e-3;
    for x in [[1.0, 0.0], [0.4, 0.7], [-1.5, 0.5]] {
        let u = |y: Vec2| Complex64::new(state.wavefunction(y).unwrap(), 0.0);
        let res = schrodinger_residual(u, x, state.energy, h);
        let rel = res.norm() / (state.energy * u(x).re).abs();
        assert!(rel < 1e-4, "{x:?}: {rel}");
        let r = f64::hypot(x[0], x[1]);
        let rotated = state.wavefunction([0.0, r]).unwrap();
        assert!((rotated - u(x).re).abs() < 1e-15);
        assert!(u(x).re < 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn a_is_real_and_depends_only_on_the_l1_norm(
        alpha in prop_oneof![-20.0f64..-0.5, 0.5f64..20.0],
        energy in -5.0f64..5.0,
        r in 0.1f64..5.0,
        a1 in 0.0f64..(2.0 * PI),
        a2 in 0.0f64..(2.0 * PI),
    ) {
        let m = PointModel::new(alpha).unwrap();
        let k1 = momentum_from_lambda(energy, SpectralPoint::new(Complex64::from_polar(r, a1))).unwrap();
        let k2 = momentum_from_lambda(energy, SpectralPoint::new(Complex64::from_polar(r, a2))).unwrap();
        prop_assume!(!k1.is_real() && !k2.is_real());
        if let (Ok(v1), Ok(v2)) = (m.data_a(&k1), m.data_a(&k2)) {
            prop_assert!((v1 - v2).abs() <= 1e-9 * v1.abs().max(1.0));
            prop_assert_eq!(m.data_b(&k1).unwrap(), v1);
            let sd = m.scattering_data(&k1).unwrap();
            prop_assert_eq!(sd.a.im, 0.0);
            prop_assert_eq!(sd.a, sd.b);
        }
    }

    #[test]
    fn boundary_amplitude_solves_the_circle_equation(
        alpha in prop_oneof![-20.0f64..-0.5, 0.5f64..20.0],
        k in 0.05f64..20.0,
    ) {
        let m = PointModel::new(alpha).unwrap();
        if let Ok(h) = m.data_h_pm(k) {
            let f = m.data_f(k).unwrap();
            let rhs = f / (1.0 - Complex64::new(0.0, PI * PI) * f);
            prop_assert!((rhs - h).norm() <= 1e-12 * h.abs().max(1e-300) + 1e-300);
        }
    }

    #[test]
    fn pole_loci_are_the_classified_radii(
        alpha in prop_oneof![-20.0f64..-0.5, 0.5f64..20.0],
        energy_scale in -3.0f64..3.0,
        angle in 0.0f64..(2.0 * PI),
    ) {
        let m = PointModel::new(alpha).unwrap();
        let e1 = m.ground_energy().unwrap();
        let energy = energy_scale * e1.abs();
        let class = m.classify_spectrum(energy).unwrap();
        let pole = (-e1).sqrt();
        for r in &class.contour_radii {
            let lambda = Complex64::from_polar(*r, angle);
            let l = l1_norm_on_chart(energy, lambda);
            prop_assert!((l - pole).abs() <= 1e-12 * pole);
        }
        let mut radii = class.contour_radii.clone();
        radii.sort_by(f64::total_cmp);
        prop_assert_eq!(radii, class.contour_radii);
    }
}
