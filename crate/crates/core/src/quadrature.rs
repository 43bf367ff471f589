//! One-dimensional quadrature: adaptive Gauss-Kronrod (21 points) for
//! complex-valued integrands, Gauss-Legendre rules, and Wynn-accelerated
//! summation of oscillatory tails.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances shared by every numerical integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Cutoff radius of the brute-force two-dimensional oracle.
    pub oracle_cutoff_radius: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-8,
            max_subdivisions: 4000,
            oracle_cutoff_radius: 1e3,
        }
    }
}

impl QuadratureConfig {
    /// Tight settings for finite-difference work, where quadrature noise is
    /// amplified by `1/h^2`.
    pub fn precise() -> Self {
        Self {
            abs_tol: 1e-15,
            rel_tol: 1e-14,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        if !(self.oracle_cutoff_radius > 0.0) {
            return Err(Error::Domain(
                "oracle cutoff radius must be positive".into(),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }
}

/// Value and error estimate of a numerical integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: Complex64,
    pub error: f64,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Single 21-point Gauss-Kronrod panel with the QUADPACK error heuristic.
pub fn gk21<F>(f: &F, a: f64, b: f64) -> Integral
where
    F: Fn(f64) -> Complex64,
{
    gk21_with_abs(f, a, b).0
}

fn gk21_with_abs<F>(f: &F, a: f64, b: f64) -> (Integral, f64)
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut abs_sum = fc.norm() * WGK[10];
    let mut values = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        values[j] = (f1, f2);
        kronrod += (f1 + f2) * WGK[j];
        abs_sum += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).norm() * WGK[10];
    for j in 0..10 {
        asc += ((values[j].0 - mean).norm() + (values[j].1 - mean).norm()) * WGK[j];
    }
    let result = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).norm();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (
        Integral {
            value: result,
            error: err,
        },
        res_abs,
    )
}

/// Globally adaptive integration of `f` over the partition `edges`
/// (sorted breakpoints, at least two). Panels are bisected in order of
/// decreasing error estimate until `error <= max(abs_tol, rel_tol |value|)`.
pub fn integrate_panels<F>(f: F, edges: &[f64], cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    if edges.len() < 2 {
        return Err(Error::Domain(
            "integration needs at least two breakpoints".into(),
        ));
    }
    let mut panels: Vec<(f64, f64, Integral, f64)> = edges
        .windows(2)
        .filter(|w| w[1] != w[0])
        .map(|w| panel(&f, w[0], w[1]))
        .collect();
    loop {
        let value: Complex64 = panels.iter().map(|p| p.2.value).sum();
        let error: f64 = panels.iter().map(|p| p.2.error).sum();
        let roundoff: f64 = panels.iter().map(|p| p.3).sum();
        let target = cfg.abs_tol.max(cfg.rel_tol * value.norm());
        if error <= target || error <= 1.01 * roundoff {
            return Ok(Integral { value, error });
        }
        if panels.len() >= cfg.max_subdivisions {
            return Err(Error::Quadrature {
                achieved: error,
                requested: target,
            });
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .expect("non-empty partition");
        let (a, b, _, _) = panels[idx];
        let mid = 0.5 * (a + b);
        if !(mid > a.min(b) && mid < a.max(b)) {
            // Panel cannot be split further in double precision.
            return Err(Error::Quadrature {
                achieved: error,
                requested: target,
            });
        }
        panels[idx] = panel(&f, a, mid);
        panels.push(panel(&f, mid, b));
    }
}

// Panel with its roundoff floor, 50 eps times the integral of |f|.
fn panel<F>(f: &F, a: f64, b: f64) -> (f64, f64, Integral, f64)
where
    F: Fn(f64) -> Complex64,
{
    let (integral, abs) = gk21_with_abs(f, a, b);
    (a, b, integral, 50.0 * f64::EPSILON * abs)
}

/// Adaptive integration over `[a, b]` starting from `pieces` equal panels.
pub fn integrate<F>(f: F, a: f64, b: f64, pieces: usize, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    let n = pieces.max(1);
    let edges: Vec<f64> = (0..=n).map(|j| a + (b - a) * j as f64 / n as f64).collect();
    integrate_panels(f, &edges, cfg)
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(f: F, a: f64, b: f64, pieces: usize, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    Ok(integrate(|t| Complex64::new(f(t), 0.0), a, b, pieces, cfg)?
        .value
        .re)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Wynn's epsilon algorithm on a sequence of partial sums; returns the
/// accelerated limit and the difference between the last two estimates.
pub fn wynn_epsilon(sums: &[Complex64]) -> (Complex64, f64) {
    let n = sums.len();
    if n < 3 {
        let last = sums.last().copied().unwrap_or_default();
        let diff = if n == 2 {
            (sums[1] - sums[0]).norm()
        } else {
            f64::INFINITY
        };
        return (last, diff);
    }
    // Table columns: eps_{-1} = 0, eps_0 = sums.
    let mut prev: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur: Vec<Complex64> = sums.to_vec();
    let mut estimates: Vec<Complex64> = vec![sums[n - 1]];
    let mut col = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        let mut broken = false;
        for j in 0..cur.len() - 1 {
            let d = cur[j + 1] - cur[j];
            if d.norm() == 0.0 {
                broken = true;
                break;
            }
            next.push(prev[j + 1] + d.inv());
        }
        if broken {
            break;
        }
        prev = cur;
        cur = next;
        col += 1;
        if col % 2 == 0 {
            estimates.push(*cur.last().expect("non-empty column"));
        }
    }
    let best = *estimates.last().expect("at least one estimate");
    let diff = if estimates.len() >= 2 {
        (estimates[estimates.len() - 1] - estimates[estimates.len() - 2]).norm()
    } else {
        (sums[n - 1] - sums[n - 2]).norm()
    };
    (best, diff)
}

/// Integral of `f` over `[start, infinity)` for slowly decaying oscillatory
/// integrands: panels of length `chunk` (ideally half an oscillation period)
/// are integrated with a fixed 21-point rule and the partial sums are
/// accelerated with Wynn's epsilon algorithm.
pub fn oscillatory_tail<F>(f: F, start: f64, chunk: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> Complex64,
{
    let mut sums = Vec::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut last_estimate = Complex64::new(f64::NAN, 0.0);
    let max_chunks = 400;
    for j in 0..max_chunks {
        let a = start + j as f64 * chunk;
        let piece = gk21(&f, a, a + chunk);
        total += piece.value;
        sums.push(total);
        if piece.value.norm() <= 1e-3 * cfg.abs_tol && j > 2 {
            return Ok(Integral {
                value: total,
                error: piece.value.norm(),
            });
        }
        // Wynn on a trailing window keeps the table well conditioned.
        if sums.len() >= 8 && sums.len() % 2 == 0 {
            let window = &sums[sums.len().saturating_sub(24)..];
            let (estimate, diff) = wynn_epsilon(window);
            let target = cfg.abs_tol.max(cfg.rel_tol * estimate.norm());
            let change = (estimate - last_estimate).norm();
            if diff <= target && change <= target {
                return Ok(Integral {
                    value: estimate,
                    error: diff.max(change),
                });
            }
            last_estimate = estimate;
        }
    }
    Err(Error::Quadrature {
        achieved: f64::NAN,
        requested: cfg.abs_tol,
    })
}
