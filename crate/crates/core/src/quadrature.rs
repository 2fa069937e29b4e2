//! Adaptive Gauss–Kronrod integration.
//!
//! Every integral in the crate goes through the 21-point Kronrod rule with
//! its embedded 10-point Gauss rule, refined by repeatedly bisecting the
//! segment that carries the largest error estimate. The error heuristics
//! follow QUADPACK's `qk21`.
//!
//! Line integrals are evaluated on a finite window `[-truncation, truncation]`;
//! every density in this crate is dominated by a Gaussian factor so the mass
//! outside the window is far below the tolerances in use. Densities with
//! heavier polynomial-in-`Phi` tails widen the window themselves.

// Nodes and weights are quoted to the published digits.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and truncation bounds governing numerical integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Half-width of the integration window for line integrals.
    pub truncation: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            truncation: 12.0,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, truncation: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = Self {
            abs_tol,
            rel_tol,
            truncation,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Config(format!("abs_tol must be > 0, got {}", self.abs_tol)));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::Config(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if !(self.truncation >= 8.0 && self.truncation.is_finite()) {
            return Err(Error::Config(format!(
                "truncation must be >= 8, got {}",
                self.truncation
            )));
        }
        if self.max_subdivisions < 10 {
            return Err(Error::Config(format!(
                "max_subdivisions must be >= 10, got {}",
                self.max_subdivisions
            )));
        }
        Ok(())
    }

    /// Parses a `key=value` config text, starting from the defaults.
    ///
    /// Blank lines and lines starting with `#` are ignored. Recognised keys are
    /// `abs_tol`, `rel_tol`, `truncation` and `max_subdivisions`.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut spec = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "abs_tol" => spec.abs_tol = parse_value(key, value, lineno)?,
                "rel_tol" => spec.rel_tol = parse_value(key, value, lineno)?,
                "truncation" => spec.truncation = parse_value(key, value, lineno)?,
                "max_subdivisions" => spec.max_subdivisions = parse_value(key, value, lineno)?,
                other => return Err(Error::Config(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Tolerance threshold for a given estimate.
    pub fn threshold(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str, lineno: usize) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("line {}: bad value for {key}: `{value}`", lineno + 1)))
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

// Kronrod abscissae, descending; odd indices are the Gauss nodes.
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

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_030_275,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 21-point Kronrod panel: `(value, error estimate)`.
pub(crate) fn gk21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Adaptive integration over the union of consecutive `breaks` segments,
/// with global error control. Returns the best estimate even on failure;
/// the flag reports convergence.
pub(crate) fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    limit: usize,
) -> (Estimate, bool) {
    let mut heap = BinaryHeap::with_capacity(limit + breaks.len());
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, error) = gk21(f, w[0], w[1]);
        total += value;
        total_err += error;
        heap.push(Segment {
            lo: w[0],
            hi: w[1],
            value,
            error,
        });
    }
    let mut frozen_err = 0.0;
    let mut subdivisions = heap.len();
    loop {
        let tol = abs_tol.max(rel_tol * total.abs());
        if !total.is_finite() {
            return (
                Estimate {
                    value: total,
                    error: f64::INFINITY,
                    subdivisions,
                },
                false,
            );
        }
        if total_err <= tol {
            return (
                Estimate {
                    value: total,
                    error: total_err,
                    subdivisions,
                },
                true,
            );
        }
        if subdivisions >= limit {
            break;
        }
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.lo + seg.hi);
        if mid <= seg.lo || mid >= seg.hi || (seg.hi - seg.lo) < 4.0 * f64::EPSILON * mid.abs() {
            // Cannot bisect further; its error is final.
            frozen_err += seg.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let (v1, e1) = gk21(f, seg.lo, mid);
        let (v2, e2) = gk21(f, mid, seg.hi);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment {
            lo: seg.lo,
            hi: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            lo: mid,
            hi: seg.hi,
            value: v2,
            error: e2,
        });
        subdivisions += 1;
        if frozen_err > tol {
            break;
        }
    }
    // Recompute the sum from the segments to shed accumulated rounding.
    let value: f64 = heap.iter().map(|s| s.value).sum();
    let error: f64 = heap.iter().map(|s| s.error).sum::<f64>() + frozen_err;
    let tol = abs_tol.max(rel_tol * value.abs());
    (
        Estimate {
            value,
            error,
            subdivisions,
        },
        error <= tol,
    )
}

fn finish(est: Estimate, converged: bool, spec: &QuadratureSpec) -> Result<Estimate> {
    if converged && est.value.is_finite() {
        Ok(est)
    } else {
        Err(Error::Integration {
            estimate: est.value,
            error: est.error,
            requested: spec.threshold(est.value),
        })
    }
}

/// Integrates `f` over `[lo, hi]`, additionally splitting at any interior `breaks`.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    let mut points = Vec::with_capacity(breaks.len() + 2);
    points.push(lo);
    points.extend(breaks.iter().copied().filter(|&b| b > lo && b < hi));
    points.push(hi);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let (est, ok) = adaptive(&f, &points, spec.abs_tol, spec.rel_tol, spec.max_subdivisions);
    finish(est, ok, spec)
}

/// Integrates `f` over the finite interval `[lo, hi]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    integrate_with_breaks(f, lo, hi, &[], spec)
}

/// Integrates `f` over the real line, truncated to `[-truncation, truncation]`.
pub fn integrate_line<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<Estimate> {
    let t = spec.truncation;
    integrate_with_breaks(f, -t, t, &[0.0], spec)
}

/// Integrates `f` over `(0, 1)`, tolerating integrable endpoint singularities.
pub fn integrate_unit<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<Estimate> {
    integrate_unit_pair(|z, _| f(z), spec)
}

/// Like [`integrate_unit`], but the integrand receives both `z` and `1 - z`
/// computed without cancellation, so factors like `(1 - z)^(b - 1)` stay
/// accurate right up to the upper endpoint.
///
/// Uses `z = u^2` on `(0, 1/2]` and `1 - z = u^2` on `[1/2, 1)`.
pub fn integrate_unit_pair<F: Fn(f64, f64) -> f64>(f: F, spec: &QuadratureSpec) -> Result<Estimate> {
    let edge = std::f64::consts::FRAC_1_SQRT_2;
    let g = |u: f64| {
        let u2 = u * u;
        2.0 * u * (f(u2, 1.0 - u2) + f(1.0 - u2, u2))
    };
    integrate(g, 0.0, edge, spec)
}

/// Integrates `f` over `(0, upper]`, with the same substitution near zero.
pub fn integrate_unit_upto<F: Fn(f64) -> f64>(f: F, upper: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    if !(0.0..=1.0).contains(&upper) {
        return Err(Error::Domain(format!("upper limit {upper} outside [0, 1]")));
    }
    let g = |u: f64| 2.0 * u * f(u * u);
    integrate(g, 0.0, upper.sqrt(), spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{norm_cdf, norm_pdf};

    #[test]
    fn kronrod_weights_sum_to_two() {
        let s: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        assert!((s - 2.0).abs() < 1e-15);
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_panel_exact_for_polynomials() {
        for k in 0..=30 {
            let (v, _) = gk21(&|x: f64| x.powi(k), 0.0, 1.0);
            assert!((v - 1.0 / (k as f64 + 1.0)).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn line_integrals() {
        let spec = QuadratureSpec::default();
        let one = integrate_line(norm_pdf, &spec).unwrap();
        assert!((one.value - 1.0).abs() < 1e-10);
        let odd = integrate_line(|x| x * norm_pdf(x), &spec).unwrap();
        assert!(odd.value.abs() < 1e-10);
        let sn_mean = integrate_line(|x| 2.0 * norm_pdf(x) * norm_cdf(x) * x, &spec).unwrap();
        assert!((sn_mean.value - 0.564_189_583_5).abs() < 1e-10);
    }

    #[test]
    fn unit_integrals() {
        let spec = QuadratureSpec::default();
        let one = integrate_unit(|_| 1.0, &spec).unwrap();
        assert!((one.value - 1.0).abs() < 1e-12);
        // Beta(1/2, 1) density, B(1/2, 1) = 2.
        let sing = integrate_unit(|z| z.powf(-0.5) / 2.0, &spec).unwrap();
        assert!((sing.value - 1.0).abs() < 1e-10);
        let poly = integrate_unit_upto(|z| 12.0 * z * (1.0 - z) * (1.0 - z), 0.3, &spec).unwrap();
        assert!((poly.value - 0.3483).abs() < 1e-12);
    }

    #[test]
    fn upper_singularity_uses_complement() {
        let spec = QuadratureSpec::default();
        // (1 - z)^(-3/4) / 4 integrates to 1.
        let est = integrate_unit_pair(|_, w| w.powf(-0.75) / 4.0, &spec).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9, "{}", est.value);
    }

    #[test]
    fn reports_non_convergence() {
        let spec = QuadratureSpec::new(1e-14, 1e-14, 12.0, 10).unwrap();
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &spec).unwrap_err();
        assert!(matches!(err, Error::Integration { .. }));
    }

    #[test]
    fn stable_under_more_subdivisions() {
        let spec = QuadratureSpec::default();
        let doubled = QuadratureSpec {
            max_subdivisions: 2 * spec.max_subdivisions,
            ..spec
        };
        let f = |x: f64| x.abs().sqrt() * norm_pdf(x);
        let a = integrate_line(f, &spec).unwrap().value;
        let b = integrate_line(f, &doubled).unwrap().value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn config_parsing() {
        let spec = QuadratureSpec::from_config_str("# tolerances\nabs_tol = 1e-9\nmax_subdivisions=500\n").unwrap();
        assert_eq!(spec.abs_tol, 1e-9);
        assert_eq!(spec.max_subdivisions, 500);
        assert_eq!(spec.truncation, 12.0);
        assert!(QuadratureSpec::from_config_str("truncation=4").is_err());
        assert!(QuadratureSpec::from_config_str("bogus=1").is_err());
        assert!(QuadratureSpec::from_config_str("abs_tol").is_err());
    }
}
