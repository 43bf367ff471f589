use std::f64::consts::PI;

use faddeev_point::geometry::{momentum_from_lambda, ComplexMomentum, Sheet, SpectralPoint};
use faddeev_point::green::{
    green_classical, green_faddeev, green_oracle_2d, green_oracle_2d_complete, green_pm, Side,
};
use faddeev_point::quadrature::gauss_legendre;
use faddeev_point::QuadratureConfig;
use num_complex::Complex64;

fn k_at(energy: f64, lambda: Complex64, sheet: Sheet) -> ComplexMomentum {
    momentum_from_lambda(energy, SpectralPoint::on_sheet(lambda, sheet)).unwrap()
}

fn momenta() -> Vec<(&'static str, ComplexMomentum)> {
    vec![
        (
            "E=-1",
            k_at(-1.0, Complex64::new(2.0, 0.0), Sheet::NotApplicable),
        ),
        (
            "E=4",
            k_at(4.0, Complex64::new(0.5, 0.0), Sheet::NotApplicable),
        ),
        ("E=0", k_at(0.0, Complex64::new(0.8, 0.0), Sheet::Plus)),
        (
            "E=-2 complex",
            k_at(-2.0, Complex64::new(0.6, 0.9), Sheet::NotApplicable),
        ),
    ]
}

#[test]
fn faddeev_matches_polar_quadrature() {
    let cfg = QuadratureConfig::default();
    let points = [[1.0, 0.0], [0.0, 0.5], [1.0, 1.0], [-1.0, 0.3], [0.2, -1.4]];
    for (label, k) in momenta() {
        for x in points {
            let g = green_faddeev(x, &k, &QuadratureConfig::precise()).unwrap();
            let oracle = green_oracle_2d_complete(x, &k, &cfg).unwrap();
            let err = (g - oracle).norm();
            assert!(
                err <= 1e-6 * g.norm().max(1.0),
                "{label} x={x:?}: {g} vs {oracle}"
            );
        }
    }
}

#[test]
fn truncated_oracle_converges_at_the_predicted_rate() {
    // |bias(N)| <= C N^{-3/2}; check the envelope between N = 250 and N = 1000.
    let cfg = QuadratureConfig::default();
    let k = k_at(-1.0, Complex64::new(2.0, 0.0), Sheet::NotApplicable);
    let x = [1.0, 0.0];
    let exact = green_faddeev(x, &k, &QuadratureConfig::precise()).unwrap();
    let r = 1.0_f64;
    for n in [250.0, 1000.0] {
        let truncated = green_oracle_2d(x, &k, n, &cfg).unwrap();
        let bound = 2.0 / (PI * (PI * n * n * n * r).sqrt()) + 1e-8;
        assert!(
            (truncated - exact).norm() <= bound,
            "N={n}: {}",
            (truncated - exact).norm()
        );
    }
}

#[test]
fn boundary_values_against_classical_green_function() {
    // g+- - g+ = (i/4pi) e^{-ikx} int over the half circle of e^{il.x}.
    let cfg = QuadratureConfig::precise();
    let k = [0.8_f64, -0.6];
    let x = [0.7, 1.3];
    let gp = green_classical(x, k).unwrap();
    for side in [Side::Plus, Side::Minus] {
        let g = green_pm(x, k, side, &cfg).unwrap();
        let s = side.sign();
        let perp = [-k[1] * s, k[0] * s];
        let centre = perp[1].atan2(perp[0]);
        let (nodes, weights) = gauss_legendre(60);
        let half: Complex64 = nodes
            .iter()
            .zip(&weights)
            .map(|(t, w)| {
                let theta = centre + 0.5 * PI * t;
                0.5 * PI * w * Complex64::from_polar(1.0, theta.cos() * x[0] + theta.sin() * x[1])
            })
            .sum();
        let expected = gp
            + Complex64::new(0.0, 1.0 / (4.0 * PI))
                * Complex64::from_polar(1.0, -(k[0] * x[0] + k[1] * x[1]))
                * half;
        assert!((g - expected).norm() < 1e-10, "{side:?}: {g} vs {expected}");
    }
}
