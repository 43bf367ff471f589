//! Green functions of `Delta + 2ik.grad` in the plane.
//!
//! * `g(x, k)` (Faddeev), `k = p + iq` with `p.q = 0`, `q != 0`;
//! * `g+(x, k)` (classical outgoing), `k` real;
//! * `g+-(x, k)`, the limits of `g(x, k +- i0 k_perp)`.
//!
//! All three are normalized by `(Delta + 2ik.grad) g = delta`, so that
//! `e^{ikx} g` is a fundamental solution of `Delta + E`.
//!
//! ## Residue reduction of the Faddeev integral
//!
//! In the frame `e2 = q/|q|`, `e1 = p/|p|`, with `xi = s e1 + t e2`, the
//! denominator is `s^2 + t^2 + 2|p|s + 2i|q|t` and the `t`-integral is done by
//! residues. With `u = s + |p|` and `R(u) = sqrt(u^2 - E)` the result is
//!
//! ```text
//! g = -(1/4pi^2) e^{-i|p|x1} e^{|q|y} J,
//! J = pi int_{|u|>|p|} e^{iux1} e^{-R|y|}/R du
//!   + [y < 0] 2 pi int_{|u|<|p|} e^{iux1} sinh(Ry)/R du,
//! ```
//!
//! where `x1 = x.e1`, `y = x.e2`. The first integral extended over the whole
//! line is `2 pi K0(sqrt(-E)|x|)` for `E < 0` and `i pi^2 H0(sqrt(E)|x|)` for
//! `E > 0` (branch `R = -i sqrt(E - u^2)` on `|u| < sqrt(E)`), which leaves a
//! finite integral over `|u| < |p|` with integrand `-pi e^{iux1} e^{sR|y|}/R`,
//! `s = -1` for `y >= 0` and `s = +1` for `y < 0`. The substitutions
//! `u = sqrt|E| sinh(t)`, `u = sqrt(E) cosh(t)`, `u = sqrt(E) cos(t)` remove
//! the `1/R` factor. For `y > 0` far from the line `y = 0` the growing
//! factor `e^{|q|y}` would cancel badly, and the outside integral is
//! evaluated directly instead. At `E = 0` the outside integral is a pair of
//! exponential integrals `E1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dot, k_perp, norm, ComplexMomentum, Vec2};
pub use crate::quadrature::QuadratureConfig;
use crate::quadrature::{integrate, integrate_panels, oscillatory_tail};
use crate::special::{bessel_k0_scaled, expint_e1_scaled, hankel_h0_1};

const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// Cancellation budget (in e-folds) before switching to the direct outside integral.
const CANCELLATION_LIMIT: f64 = 2.0;

/// Which boundary value `k +- i0 k_perp` is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check_point(x: Vec2) -> Result<f64> {
    let r = norm(x);
    if !r.is_finite() {
        return Err(Error::Domain("non-finite evaluation point".into()));
    }
    if r == 0.0 {
        return Err(Error::Singularity);
    }
    Ok(r)
}

/// Classical outgoing Green function `g+(x, k) = e^{-ikx} (-i/4) H0^(1)(|k||x|)`.
pub fn green_classical(x: Vec2, k: Vec2) -> Result<Complex64> {
    let r = check_point(x)?;
    let kn = norm(k);
    if kn == 0.0 {
        return Err(Error::Domain("g+ requires k != 0".into()));
    }
    let phase = Complex64::from_polar(1.0, -dot(k, x));
    Ok(phase * c(0.0, -0.25) * hankel_h0_1(kn * r)?)
}

/// Faddeev Green function `g(x, k)` for `Im k != 0`, `k^2` real.
pub fn green_faddeev(x: Vec2, k: &ComplexMomentum, cfg: &QuadratureConfig) -> Result<Complex64> {
    let (p, q) = (k.re(), k.im());
    let (pn, qn) = (norm(p), norm(q));
    if qn == 0.0 {
        return Err(Error::Domain(
            "Faddeev Green function requires Im k != 0".into(),
        ));
    }
    let scale = pn * pn + qn * qn;
    if dot(p, q).abs() > 1e-10 * scale {
        return Err(Error::Inconsistent {
            expected: 0.0,
            got: 2.0 * dot(p, q),
        });
    }
    check_point(x)?;
    let e2 = [q[0] / qn, q[1] / qn];
    let e1 = if pn > 0.0 {
        [p[0] / pn, p[1] / pn]
    } else {
        [e2[1], -e2[0]]
    };
    reduced_green(dot(x, e1), dot(x, e2), pn, qn, cfg)
}

/// Boundary values `g+-(x, k) = lim_{d -> 0+} g(x, k +- i d k_perp)` for real `k != 0`,
/// evaluated directly at `|q| = 0` in the frame `e2 = +-k_perp/|k|`.
pub fn green_pm(x: Vec2, k: Vec2, side: Side, cfg: &QuadratureConfig) -> Result<Complex64> {
    check_point(x)?;
    let kn = norm(k);
    if kn == 0.0 {
        return Err(Error::Domain("g+- requires k != 0".into()));
    }
    let e1 = [k[0] / kn, k[1] / kn];
    let perp = k_perp(e1);
    let e2 = [side.sign() * perp[0], side.sign() * perp[1]];
    reduced_green(dot(x, e1), dot(x, e2), kn, 0.0, cfg)
}

/// `g+-` from the defining limit: `g(x, k +- i d k_perp)` on `d_n = 2^-n d_0`,
/// `d_0 = 1e-2`, with two-term Richardson extrapolation.
pub fn green_pm_delta_sequence(
    x: Vec2,
    k: Vec2,
    side: Side,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    if norm(k) == 0.0 {
        return Err(Error::Domain("g+- requires k != 0".into()));
    }
    let inner = QuadratureConfig {
        abs_tol: cfg.abs_tol * 1e-2,
        rel_tol: cfg.rel_tol * 1e-2,
        ..*cfg
    };
    let perp = k_perp(k);
    let at = |delta: f64| {
        let q = [side.sign() * delta * perp[0], side.sign() * delta * perp[1]];
        green_faddeev(x, &ComplexMomentum::from_parts(k, q), &inner)
    };
    let mut delta = 1e-2;
    let mut coarse = at(delta)?;
    let mut previous: Option<Complex64> = None;
    let mut change = f64::INFINITY;
    for _ in 0..24 {
        delta *= 0.5;
        let fine = at(delta)?;
        let extrapolated = 2.0 * fine - coarse;
        if let Some(prev) = previous {
            change = (extrapolated - prev).norm();
            if change <= cfg.abs_tol.max(cfg.rel_tol * extrapolated.norm()) {
                return Ok(extrapolated);
            }
        }
        previous = Some(extrapolated);
        coarse = fine;
    }
    Err(Error::Extrapolation { change })
}

/// `g` in the reduced frame: `x1 = x.e1`, `y = x.e2`, `p = pn e1`, `q = qn e2`.
fn reduced_green(x1: f64, y: f64, pn: f64, qn: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let energy = pn * pn - qn * qn;
    let scale = pn * pn + qn * qn;
    let bracket = if energy.abs() <= 1e-12 * scale {
        zero_energy_bracket(x1, y, 0.5 * (pn + qn), cfg)?
    } else if energy < 0.0 {
        negative_energy_bracket(x1, y, pn, qn, energy, cfg)?
    } else {
        positive_energy_bracket(x1, y, pn, qn, energy, cfg)?
    };
    Ok(Complex64::from_polar(-1.0 / FOUR_PI_SQ, -pn * x1) * bracket)
}

fn oscillation_panels(span: f64, frequency: f64) -> usize {
    ((span * frequency.abs() / PI).ceil() as usize).clamp(1, 4096) + 1
}

// e^{qn y} pi int_{|u|>pn} e^{iux1} e^{-R y}/R du for y > 0 (R >= qn there).
fn outside_direct(
    x1: f64,
    y: f64,
    pn: f64,
    qn: f64,
    energy: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let r_max = qn + 60.0 / y;
    let u_max = (r_max * r_max + energy).sqrt();
    let integrand = |u: f64| {
        let rr = (u * u - energy).sqrt();
        c(2.0 * (u * x1).cos() * (-(rr - qn) * y).exp() / rr, 0.0)
    };
    let panels = oscillation_panels(u_max - pn, x1);
    let v = integrate(integrand, pn, u_max, panels, cfg)?;
    Ok(PI * v.value)
}

fn negative_energy_bracket(
    x1: f64,
    y: f64,
    pn: f64,
    qn: f64,
    energy: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let cm = (-energy).sqrt();
    if y >= 0.0 && (qn - cm) * y > CANCELLATION_LIMIT {
        return outside_direct(x1, y, pn, qn, energy, cfg);
    }
    let r = x1.hypot(y);
    let full = 2.0 * PI * bessel_k0_scaled(cm * r)? * (qn * y - cm * r).exp();
    let sigma = if y >= 0.0 { -1.0 } else { 1.0 };
    let t0 = (pn / cm).asinh();
    let inner = if t0 > 0.0 {
        let f = |t: f64| {
            let u = cm * t.sinh();
            let rr = cm * t.cosh();
            c(
                2.0 * (u * x1).cos() * (qn * y + sigma * rr * y.abs()).exp(),
                0.0,
            )
        };
        integrate(f, 0.0, t0, oscillation_panels(pn, x1), cfg)?.value
    } else {
        c(0.0, 0.0)
    };
    Ok(c(full, 0.0) - PI * inner)
}

fn positive_energy_bracket(
    x1: f64,
    y: f64,
    pn: f64,
    qn: f64,
    energy: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let cp = energy.sqrt();
    if y >= 0.0 && qn * y > CANCELLATION_LIMIT {
        return outside_direct(x1, y, pn, qn, energy, cfg);
    }
    let r = x1.hypot(y);
    let growth = (qn * y).exp();
    let full = growth * c(0.0, PI * PI) * hankel_h0_1(cp * r)?;
    let sigma = if y >= 0.0 { -1.0 } else { 1.0 };
    let t0 = (pn / cp).max(1.0).acosh();
    let hyperbolic = if t0 > 0.0 {
        let f = |t: f64| {
            let u = cp * t.cosh();
            let rr = cp * t.sinh();
            c(
                2.0 * (u * x1).cos() * (qn * y + sigma * rr * y.abs()).exp(),
                0.0,
            )
        };
        integrate(f, 0.0, t0, oscillation_panels(pn - cp, x1), cfg)?.value
    } else {
        c(0.0, 0.0)
    };
    // Half-circle average of plane waves, u = sqrt(E) cos(theta).
    let f = |theta: f64| Complex64::from_polar(1.0, cp * (x1 * theta.cos() + y * theta.sin()));
    let circle = integrate(f, 0.0, PI, oscillation_panels(2.0 * cp, r), cfg)?.value;
    let inner = hyperbolic + c(0.0, 1.0) * growth * circle;
    Ok(full - PI * inner)
}

fn zero_energy_bracket(x1: f64, y: f64, m: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let ay = y.abs();
    let damping = (m * y - m * ay).exp();
    let z1 = c(m * ay, -m * x1);
    let z2 = c(m * ay, m * x1);
    let outside = damping
        * (Complex64::from_polar(1.0, m * x1) * expint_e1_scaled(z1)?
            + Complex64::from_polar(1.0, -m * x1) * expint_e1_scaled(z2)?);
    let mut bracket = PI * outside;
    if y < 0.0 {
        // e^{m y} 4 pi int_0^m cos(u x1) sinh(u y)/u du
        let f = |u: f64| {
            let w = u * y;
            let ratio = if w.abs() < 0.5 {
                (m * y).exp() * y * crate::special::sinhc(c(w, 0.0)).re
            } else {
                ((m * y + w).exp() - (m * y - w).exp()) / (2.0 * u)
            };
            c(4.0 * PI * (u * x1).cos() * ratio, 0.0)
        };
        bracket += integrate(f, 0.0, m, oscillation_panels(m, x1), cfg)?.value;
    }
    Ok(bracket)
}

/// Closed form of the angular integral `int_0^{2pi} dphi / (rho + 2 k.omega)`:
/// zero for `rho < 2|Re k|`, `2 pi / sqrt(rho^2 - 4E)` beyond.
pub fn angular_kernel(rho: f64, k: &ComplexMomentum) -> f64 {
    let pn = norm(k.re());
    let energy = k.square().re;
    if rho < 2.0 * pn {
        0.0
    } else {
        2.0 * PI / (rho * rho - 4.0 * energy).sqrt()
    }
}

// int_0^{2pi} e^{i rho x.omega} / (rho + 2 k.omega) dphi, brute force.
fn angular_integral(
    x: Vec2,
    k: &ComplexMomentum,
    rho: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let (p, q) = (k.re(), k.im());
    let pn = norm(p);
    let big = 4.0 * (pn + norm(q));
    let r = norm(x);
    let integrand = |phi: f64| {
        let w = [phi.cos(), phi.sin()];
        let den = c(rho + 2.0 * dot(p, w), 2.0 * dot(q, w));
        Complex64::from_polar(1.0, rho * dot(x, w)) / den
    };
    if rho > big {
        let m = (1.5 * rho * r).ceil() as usize + 64;
        let h = 2.0 * PI / m as f64;
        let sum: Complex64 = (0..m).map(|j| integrand(j as f64 * h)).sum();
        return Ok(sum * h);
    }
    if pn == 0.0 {
        let panels = oscillation_panels(2.0 * PI, rho * r) + 4;
        return Ok(integrate(integrand, 0.0, 2.0 * PI, panels, cfg)?.value);
    }
    // Subtract the numerator at the singular direction omega* = -p/|p|.
    let phi_star = (-p[1]).atan2(-p[0]);
    let w_star = [-p[0] / pn, -p[1] / pn];
    let n_star = Complex64::from_polar(1.0, rho * dot(x, w_star));
    let subtracted = |phi: f64| {
        let w = [phi.cos(), phi.sin()];
        let den = c(rho + 2.0 * dot(p, w), 2.0 * dot(q, w));
        (Complex64::from_polar(1.0, rho * dot(x, w)) - n_star) / den
    };
    let panels = oscillation_panels(2.0 * PI, rho * r) + 4;
    let edges: Vec<f64> = (0..=panels)
        .map(|j| phi_star + 2.0 * PI * j as f64 / panels as f64)
        .collect();
    let v = integrate_panels(subtracted, &edges, cfg)?.value;
    Ok(v + n_star * angular_kernel(rho, k))
}

/// Brute-force evaluation of `-(1/4pi^2) int_{|xi| <= cutoff} e^{i xi x}/(xi^2 + 2k xi) dxi`
/// in polar coordinates. Truncation bias decays like `cutoff^{-3/2}` (oscillating).
pub fn green_oracle_2d(
    x: Vec2,
    k: &ComplexMomentum,
    cutoff: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    if norm(k.im()) == 0.0 {
        return Err(Error::Domain("the 2D oracle requires Im k != 0".into()));
    }
    if !(cutoff > 0.0) {
        return Err(Error::Domain("cutoff must be positive".into()));
    }
    Ok(-disc_integral(x, k, cutoff, cfg)? / FOUR_PI_SQ)
}

/// `int_{|xi| <= cutoff} e^{i xi x}/(xi^2 + 2k xi) dxi` by polar quadrature.
pub fn disc_integral(
    x: Vec2,
    k: &ComplexMomentum,
    cutoff: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    annulus_integral(x, k, 0.0, cutoff, cfg)
}

/// The same integrand over `inner <= |xi| <= outer`.
pub fn annulus_integral(
    x: Vec2,
    k: &ComplexMomentum,
    inner: f64,
    outer: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let ring = 2.0 * norm(k.re());
    if norm(k.im()) == 0.0 && inner <= ring && ring <= outer {
        return Err(Error::Domain(
            "real k: the annulus contains the singular circle".into(),
        ));
    }
    let r = norm(x);
    let step = if r > 0.0 { (PI / r).min(1.0) } else { 1.0 };
    let mut edges = vec![inner];
    let push_span = |a: f64, b: f64, edges: &mut Vec<f64>| {
        let n = ((b - a) / step).ceil().max(1.0) as usize;
        for j in 1..=n {
            edges.push(a + (b - a) * j as f64 / n as f64);
        }
    };
    if ring > inner && ring < outer {
        push_span(inner, ring, &mut edges);
        push_span(ring, outer, &mut edges);
    } else {
        push_span(inner, outer, &mut edges);
    }
    let inner_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol * 1e-2,
        rel_tol: cfg.rel_tol * 1e-2,
        ..*cfg
    };
    let failure = std::cell::Cell::new(None);
    let f = |rho: f64| match angular_integral(x, k, rho, &inner_cfg) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            c(0.0, 0.0)
        }
    };
    let v = integrate_panels(f, &edges, cfg)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(v.value)
}

/// `int_{|xi| > cutoff} e^{i xi x}/(xi^2 + 2k xi) dxi` for `x != 0`, by polar
/// quadrature with Wynn-accelerated summation over radial half periods.
/// Real `k` is allowed when `cutoff > 2|k|`.
pub fn disc_tail(
    x: Vec2,
    k: &ComplexMomentum,
    cutoff: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let r = check_point(x)?;
    if k.is_real() && !(cutoff > 2.0 * norm(k.re())) {
        return Err(Error::Domain(
            "real k: the tail must start beyond |xi| = 2|k|".into(),
        ));
    }
    let big = 4.0 * k.l1_norm();
    let inner_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol * 1e-2,
        rel_tol: cfg.rel_tol * 1e-2,
        ..*cfg
    };
    let start = cutoff.max(big);
    let mut total = c(0.0, 0.0);
    if cutoff < big {
        total += annulus_integral(x, k, cutoff, big, cfg)?;
    }
    let failure = std::cell::Cell::new(None);
    let f = |rho: f64| match angular_integral(x, k, rho, &inner_cfg) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            c(0.0, 0.0)
        }
    };
    let tail = oscillatory_tail(f, start, PI / r, cfg)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(total + tail.value)
}

/// Brute-force value of the untruncated integral: disc quadrature up to
/// `cutoff` plus the accelerated tail beyond it.
pub fn green_oracle_2d_complete(
    x: Vec2,
    k: &ComplexMomentum,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let cutoff = cfg.oracle_cutoff_radius;
    let head = green_oracle_2d(x, k, cutoff, cfg)?;
    Ok(head - disc_tail(x, k, cutoff, cfg)? / FOUR_PI_SQ)
}
