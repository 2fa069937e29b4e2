//! The skew-normal distribution `SN(xi, psi, lambda)`.
//!
//! The standardized cdf is `Phi(z) - 2 T(z, lambda)`. Each branch below is
//! arranged so that whichever of `F` and `1 - F` is small is produced as a
//! sum of positive terms, which keeps both tails accurate:
//!
//! * `lambda < 0`: `F = Phi(z) + 2 T(|z|, |lambda|)`
//! * `lambda > 0, z <= 0`: `F = 2 T_upper(|z|, lambda)`, the integral of
//!   Owen's integrand over `(lambda, inf)`
//! * `lambda > 0, z > 0`: `F = 1 - F(-z; -lambda)`

use std::f64::consts::LN_2;

use crate::error::{domain, Result};
use crate::rng::{SampleBatch, Stream};
use crate::special::{
    ln_norm_cdf, ln_norm_pdf, ln_owen_t_upper, mills_ratio, norm_cdf, norm_pdf, owen_t, owen_t_scaled, owen_t_upper,
    FRAC_1_SQRT_2PI,
};

/// Location `xi`, scale `psi` and shape `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SkewNormalParams {
    pub xi: f64,
    pub psi: f64,
    pub lambda: f64,
}

impl SkewNormalParams {
    pub fn new(xi: f64, psi: f64, lambda: f64) -> Result<Self> {
        let p = Self { xi, psi, lambda };
        p.validate()?;
        Ok(p)
    }

    /// Standard form `SN(lambda)`.
    pub fn standard(lambda: f64) -> Self {
        Self {
            xi: 0.0,
            psi: 1.0,
            lambda,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.xi.is_finite() && self.lambda.is_finite()) {
            return Err(domain("skew-normal xi and lambda must be finite"));
        }
        if !(self.psi > 0.0 && self.psi.is_finite()) {
            return Err(domain(format!("skew-normal psi must be > 0 (got {})", self.psi)));
        }
        Ok(())
    }

    fn standardize(&self, x: f64) -> f64 {
        (x - self.xi) / self.psi
    }
}

// ---------------------------------------------------------------------------
// Standardized kernels
// ---------------------------------------------------------------------------

/// `2 phi(z) Phi(lambda z)`.
pub fn std_pdf(z: f64, lambda: f64) -> f64 {
    2.0 * norm_pdf(z) * norm_cdf(lambda * z)
}

pub fn ln_std_pdf(z: f64, lambda: f64) -> f64 {
    LN_2 + ln_norm_pdf(z) + ln_norm_cdf(lambda * z)
}

/// Standardized skew-normal cdf `Phi(z; lambda)`.
pub fn std_cdf(z: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return norm_cdf(z);
    }
    let h = z.abs();
    if lambda < 0.0 {
        (norm_cdf(z) - 2.0 * owen_t(h, lambda)).min(1.0)
    } else if z <= 0.0 {
        2.0 * owen_t_upper(h, lambda)
    } else {
        1.0 - std_cdf(-z, -lambda)
    }
}

/// Standardized survival function `1 - Phi(z; lambda) = Phi(-z; -lambda)`.
pub fn std_sf(z: f64, lambda: f64) -> f64 {
    std_cdf(-z, -lambda)
}

/// `(F, 1 - F)` with the smaller member computed directly.
pub fn std_cdf_pair(z: f64, lambda: f64) -> (f64, f64) {
    let f = std_cdf(z, lambda);
    if f <= 0.5 {
        (f, 1.0 - f)
    } else {
        let s = std_sf(z, lambda);
        (1.0 - s, s)
    }
}

/// `ln Phi(z; lambda)`, finite far into the light tail where `F` underflows.
pub fn ln_std_cdf(z: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        return ln_norm_cdf(z);
    }
    let h = z.abs();
    if lambda > 0.0 {
        if z <= 0.0 {
            LN_2 + ln_owen_t_upper(h, lambda)
        } else {
            (-std_cdf(-z, -lambda)).ln_1p()
        }
    } else if z > -30.0 {
        std_cdf(z, lambda).ln()
    } else {
        // F = exp(-h^2/2) [R(h) / sqrt(2 pi) + 2 T_scaled(h, |lambda|)]
        -0.5 * h * h + (FRAC_1_SQRT_2PI * mills_ratio(h) + 2.0 * owen_t_scaled(h, -lambda)).ln()
    }
}

pub fn ln_std_sf(z: f64, lambda: f64) -> f64 {
    ln_std_cdf(-z, -lambda)
}

/// Solves `F(x; lambda) = p` (or `1 - F(x; lambda) = p` when `upper`).
///
/// Brackets by expanding steps out of 0, then Newton on `ln F`, which is
/// concave because the density is log-concave; steps leaving the bracket
/// are replaced by bisection.
pub(crate) fn std_inverse(p: f64, upper: bool, lambda: f64) -> f64 {
    if upper {
        return -std_inverse(p, false, -lambda);
    }
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    if p > 0.5 {
        // Solve on the small side instead.
        return -std_inverse(1.0 - p, false, -lambda);
    }
    let target = p.ln();
    let g = |x: f64| ln_std_cdf(x, lambda) - target;

    let mut lo;
    let mut hi;
    let g0 = g(0.0);
    if g0 == 0.0 {
        return 0.0;
    }
    if g0 > 0.0 {
        hi = 0.0;
        let mut step = 1.0;
        lo = -step;
        while g(lo) > 0.0 {
            hi = lo;
            step *= 2.0;
            lo = -step;
        }
    } else {
        lo = 0.0;
        let mut step = 1.0;
        hi = step;
        while g(hi) < 0.0 {
            lo = hi;
            step *= 2.0;
            hi = step;
        }
    }

    let mut x = lo;
    for _ in 0..200 {
        let gx = g(x);
        if gx == 0.0 {
            return x;
        }
        if gx < 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let slope = (ln_std_pdf(x, lambda) - ln_std_cdf(x, lambda)).exp();
        let mut next = x - gx / slope;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let scale = 1.0f64.max(next.abs());
        if (next - x).abs() <= 1e-14 * scale || hi - lo <= 1e-14 * scale {
            return next;
        }
        x = next;
    }
    x
}

// ---------------------------------------------------------------------------
// Parameterized operations
// ---------------------------------------------------------------------------

pub fn sn_pdf(p: &SkewNormalParams, x: f64) -> f64 {
    std_pdf(p.standardize(x), p.lambda) / p.psi
}

pub fn sn_ln_pdf(p: &SkewNormalParams, x: f64) -> f64 {
    ln_std_pdf(p.standardize(x), p.lambda) - p.psi.ln()
}

pub fn sn_cdf(p: &SkewNormalParams, x: f64) -> f64 {
    std_cdf(p.standardize(x), p.lambda)
}

pub fn sn_sf(p: &SkewNormalParams, x: f64) -> f64 {
    std_sf(p.standardize(x), p.lambda)
}

pub fn sn_quantile(p: &SkewNormalParams, q: f64) -> Result<f64> {
    if q.is_nan() || q <= 0.0 || q >= 1.0 {
        return Err(domain(format!("sn_quantile requires 0 < q < 1 (got {q})")));
    }
    Ok(p.xi + p.psi * std_inverse(q, false, p.lambda))
}

/// Draws via `delta |U| + sqrt(1 - delta^2) V` with `delta = lambda / sqrt(1 + lambda^2)`.
pub(crate) fn draw_std(rng: &mut Stream, lambda: f64) -> f64 {
    let norm = (1.0 + lambda * lambda).sqrt();
    let delta = lambda / norm;
    let u = rng.normal();
    let v = rng.normal();
    delta * u.abs() + v / norm
}

pub fn sn_sample(p: &SkewNormalParams, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(domain("sample count must be >= 1"));
    }
    let mut rng = Stream::new(seed);
    let values = (0..n).map(|_| p.xi + p.psi * draw_std(&mut rng, p.lambda)).collect();
    Ok(SampleBatch::new(seed, values))
}

/// Grid on `[lo, hi]` with `points` equally spaced nodes.
pub(crate) fn grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(move |i| lo + step * i as f64)
}

/// `-Z ~ SN(-lambda)` when `Z ~ SN(lambda)`: compares the two densities on
/// a 401-point grid over `[-6, 6]`.
pub fn sn_neg_closure_check(lambda: f64) -> bool {
    grid(-6.0, 6.0, 401).all(|x| (std_pdf(-x, lambda) - std_pdf(x, -lambda)).abs() <= 1e-13)
}

/// Largest second difference of `ln pdf` on a grid; nonpositive for log-concave densities.
pub(crate) fn max_log_second_difference<F: Fn(f64) -> f64>(ln_pdf: F, lo: f64, hi: f64, points: usize) -> f64 {
    let values: Vec<f64> = grid(lo, hi, points).map(ln_pdf).collect();
    values
        .windows(3)
        .map(|w| w[0] - 2.0 * w[1] + w[2])
        .fold(f64::NEG_INFINITY, f64::max)
}
