//! The Beta skew-normal distribution `BSN(mu, sigma, lambda, a, b)`: the
//! beta-generated distribution over the skew-normal base,
//!
//! `g(z) = 2 / B(a, b) Phi(z; lambda)^(a-1) (1 - Phi(z; lambda))^(b-1) phi(z) Phi(lambda z)`.

use serde::{Deserialize, Serialize};

use crate::beta_family::{tail_window, BetaGenerated, HalfNormalBase, SkewNormalBase};
use crate::error::{domain, Result};
use crate::quadrature::{integrate_with_breaks, QuadratureSpec};
use crate::rng::{SampleBatch, Stream};
use crate::sn::{self, grid, max_log_second_difference, SkewNormalParams};
use crate::special::{ln_beta_unchecked, ln_norm_cdf, ln_norm_pdf, norm_pdf, norm_quantile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsnParams {
    pub mu: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub a: f64,
    pub b: f64,
}

impl BsnParams {
    pub fn new(mu: f64, sigma: f64, lambda: f64, a: f64, b: f64) -> Result<Self> {
        let p = Self {
            mu,
            sigma,
            lambda,
            a,
            b,
        };
        p.validate()?;
        Ok(p)
    }

    /// `BSN(lambda, a, b)` with `mu = 0`, `sigma = 1`.
    pub fn standard(lambda: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(0.0, 1.0, lambda, a, b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.lambda.is_finite()) {
            return Err(domain("bsn mu and lambda must be finite"));
        }
        for (name, v) in [("sigma", self.sigma), ("a", self.a), ("b", self.b)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(format!("bsn {name} must be positive and finite (got {v})")));
            }
        }
        Ok(())
    }

    /// `-X ~ BSN(-mu, sigma, -lambda, b, a)`.
    pub fn reflected(&self) -> Self {
        Self {
            mu: -self.mu,
            sigma: self.sigma,
            lambda: -self.lambda,
            a: self.b,
            b: self.a,
        }
    }

    fn generated(&self) -> BetaGenerated<SkewNormalBase> {
        let base = SkewNormalBase(SkewNormalParams {
            xi: self.mu,
            psi: self.sigma,
            lambda: self.lambda,
        });
        BetaGenerated::new(base, self.a, self.b).expect("validated shapes")
    }

    /// Integration window `[mu - sigma W, mu + sigma W]`.
    fn window(&self, spec: &QuadratureSpec) -> (f64, f64) {
        let w = self.sigma * tail_window(self.a, self.b, spec.truncation);
        (self.mu - w, self.mu + w)
    }
}

pub fn bsn_ln_pdf(p: &BsnParams, x: f64) -> f64 {
    p.generated().ln_pdf(x)
}

pub fn bsn_pdf(p: &BsnParams, x: f64) -> f64 {
    p.generated().pdf(x)
}

/// `I_{Phi(z; lambda)}(a, b)`, with the small tail taken directly.
pub fn bsn_cdf(p: &BsnParams, x: f64) -> f64 {
    p.generated().cdf(x)
}

pub fn bsn_sf(p: &BsnParams, x: f64) -> f64 {
    p.generated().sf(x)
}

pub fn bsn_quantile(p: &BsnParams, q: f64) -> Result<f64> {
    p.generated().quantile(q)
}

/// Draws `Y ~ Beta(a, b)` and returns the skew-normal quantile of `Y`.
pub fn bsn_sample_inverse(p: &BsnParams, n: usize, seed: u64) -> Result<SampleBatch> {
    p.generated().sample(n, seed)
}

/// Outcome counts of the acceptance-rejection sampler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RejectionStats {
    pub proposals: u64,
    pub accepted: u64,
    pub acceptance_rate: f64,
}

/// `BSN(lambda, n, 1)` by acceptance-rejection: draw `T, U_1, ..., U_{n-1}`
/// from `SN(lambda)` and keep `T` when it is the largest.
pub fn bsn_sample_rejection(
    lambda: f64,
    n_param: u32,
    count: usize,
    seed: u64,
) -> Result<(SampleBatch, RejectionStats)> {
    if !lambda.is_finite() {
        return Err(domain("lambda must be finite"));
    }
    if n_param == 0 {
        return Err(domain("rejection sampler needs n >= 1"));
    }
    if count == 0 {
        return Err(domain("sample count must be >= 1"));
    }
    let mut rng = Stream::new(seed);
    let mut values = Vec::with_capacity(count);
    let mut proposals = 0u64;
    while values.len() < count {
        proposals += 1;
        let t = sn::draw_std(&mut rng, lambda);
        let mut accept = true;
        for _ in 1..n_param {
            if sn::draw_std(&mut rng, lambda) > t {
                accept = false;
            }
        }
        if accept {
            values.push(t);
        }
    }
    let stats = RejectionStats {
        proposals,
        accepted: count as u64,
        acceptance_rate: count as f64 / proposals as f64,
    };
    Ok((SampleBatch::new(seed, values), stats))
}

// ---------------------------------------------------------------------------
// Moments
// ---------------------------------------------------------------------------

/// Mean, standard deviation, skewness and (non-excess) kurtosis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub mean: f64,
    pub sd: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

/// `M(t) = 2 e^(t^2/2) / B(a, b) E[Phi(Z; lambda)^(a-1) (1 - Phi(Z; lambda))^(b-1) Phi(lambda Z)]`
/// with `Z ~ N(t, 1)`, for the standardized variable; location and scale
/// enter as `e^(mu t) M(sigma t)`.
pub fn bsn_mgf(p: &BsnParams, t: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !t.is_finite() {
        return Err(domain(format!("mgf argument must be finite (got {t})")));
    }
    let s = p.sigma * t;
    let ln_front = std::f64::consts::LN_2 + 0.5 * s * s - ln_beta_unchecked(p.a, p.b);
    let l = p.lambda;
    let (a, b) = (p.a, p.b);
    let weight = |z: f64| {
        let (ln_f, ln_s) = (sn::ln_std_cdf(z, l), sn::ln_std_sf(z, l));
        let mut v = ln_norm_pdf(z - s) + ln_norm_cdf(l * z);
        if a != 1.0 {
            v += (a - 1.0) * ln_f;
        }
        if b != 1.0 {
            v += (b - 1.0) * ln_s;
        }
        if v.is_nan() {
            0.0
        } else {
            (v + ln_front).exp()
        }
    };
    let w = tail_window(a, b, spec.truncation);
    let est = integrate_with_breaks(weight, s - w, s + w, &[0.0, s], spec)?;
    Ok((p.mu * t).exp() * est.value)
}

/// `E[h(X)]` for `X ~ p` by quadrature of `h g` over the tail-adjusted window.
fn expect<H: Fn(f64) -> f64>(p: &BsnParams, h: H, extra_breaks: &[f64], spec: &QuadratureSpec) -> Result<f64> {
    let g = p.generated();
    let (lo, hi) = p.window(spec);
    let mut breaks = vec![p.mu];
    breaks.extend_from_slice(extra_breaks);
    Ok(integrate_with_breaks(
        |x| {
            let d = g.pdf(x);
            if d == 0.0 {
                0.0
            } else {
                h(x) * d
            }
        },
        lo,
        hi,
        &breaks,
        spec,
    )?
    .value)
}

/// Moments by quadrature: the mean first, then central moments about it.
pub fn bsn_moments(p: &BsnParams, spec: &QuadratureSpec) -> Result<MomentSummary> {
    let mean = expect(p, |x| x, &[], spec)?;
    let central = |k: i32| expect(p, move |x| (x - mean).powi(k), &[mean], spec);
    let var = central(2)?;
    let m3 = central(3)?;
    let m4 = central(4)?;
    let sd = var.sqrt();
    Ok(MomentSummary {
        mean,
        sd,
        skewness: m3 / (var * sd),
        kurtosis: m4 / (var * var),
    })
}

/// `|LHS - RHS|` of the moment recursion
///
/// `E X^k = (k-1) E X^(k-2) + lambda E[X^(k-1) phi(lambda X) / Phi(lambda X)]
///        + (a+b-1) E[U^(k-1) phi(U; lambda)] - (a+b-1) E[V^(k-1) phi(V; lambda)]`
///
/// with `U ~ BSN(lambda, a-1, b)`, `V ~ BSN(lambda, a, b-1)`. Standard form only
/// (`mu`, `sigma` are ignored); requires `a, b > 1` and `k >= 2`.
pub fn bsn_moment_recursion_check(p: &BsnParams, k: u32, spec: &QuadratureSpec) -> Result<f64> {
    if !(p.a > 1.0 && p.b > 1.0) {
        return Err(domain(format!(
            "moment recursion requires a > 1 and b > 1 (got a = {}, b = {})",
            p.a, p.b
        )));
    }
    if k < 2 {
        return Err(domain(format!("moment recursion requires k >= 2 (got {k})")));
    }
    let x = BsnParams::standard(p.lambda, p.a, p.b)?;
    let u = BsnParams::standard(p.lambda, p.a - 1.0, p.b)?;
    let v = BsnParams::standard(p.lambda, p.a, p.b - 1.0)?;
    let l = p.lambda;
    let k = k as i32;
    let lhs = expect(&x, |t| t.powi(k), &[], spec)?;
    let lower = if k == 2 {
        1.0
    } else {
        expect(&x, |t| t.powi(k - 2), &[], spec)?
    };
    // phi(l t) / Phi(l t) = exp(ln phi - ln Phi), finite far into the tail.
    let hazard = expect(
        &x,
        |t| t.powi(k - 1) * (ln_norm_pdf(l * t) - ln_norm_cdf(l * t)).exp(),
        &[],
        spec,
    )?;
    let sn_weight = |t: f64| t.powi(k - 1) * sn::std_pdf(t, l);
    let eu = expect(&u, sn_weight, &[], spec)?;
    let ev = expect(&v, sn_weight, &[], spec)?;
    let c = p.a + p.b - 1.0;
    let rhs = (k - 1) as f64 * lower + l * hazard + c * eu - c * ev;
    Ok((lhs - rhs).abs())
}

/// Reflection property: `g(-x; lambda, a, b) = g(x; -lambda, b, a)` on a grid,
/// and the moment sign relations between the two distributions.
pub fn bsn_reflection_check(p: &BsnParams, spec: &QuadratureSpec) -> Result<bool> {
    let q = p.reflected();
    let (lo, hi) = (p.mu - 6.0 * p.sigma, p.mu + 6.0 * p.sigma);
    let pointwise = grid(lo, hi, 401).all(|x| {
        let (u, v) = (bsn_pdf(p, -x), bsn_pdf(&q, x));
        (u - v).abs() <= 1e-12 * u.max(1.0)
    });
    let (mx, my) = (bsn_moments(p, spec)?, bsn_moments(&q, spec)?);
    let moments = (mx.mean + my.mean).abs() < 1e-6
        && (mx.sd * mx.sd - my.sd * my.sd).abs() < 1e-6
        && (mx.skewness + my.skewness).abs() < 1e-6
        && (mx.kurtosis - my.kurtosis).abs() < 1e-6;
    Ok(pointwise && moments)
}

/// Stationary-point analysis of the density.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeReport {
    pub mode_count: usize,
    pub mode_locations: Vec<f64>,
    pub log_concave_on_grid: bool,
}

/// Scans a 4001-point grid on `mu +- 8 sigma` for sign changes (+ to -) of
/// the numerically differentiated log density, polishes each by bisection
/// and merges modes closer than 1e-4.
pub fn bsn_mode_report(p: &BsnParams) -> ModeReport {
    let g = p.generated();
    let step = 1e-6 * p.sigma;
    let slope = |x: f64| (g.ln_pdf(x + step) - g.ln_pdf(x - step)) / (2.0 * step);
    let (lo, hi) = (p.mu - 8.0 * p.sigma, p.mu + 8.0 * p.sigma);
    let xs: Vec<f64> = grid(lo, hi, 4001).collect();
    let ds: Vec<f64> = xs.iter().map(|&x| slope(x)).collect();
    let mut modes: Vec<f64> = Vec::new();
    for i in 0..xs.len() - 1 {
        if ds[i] > 0.0 && ds[i + 1] <= 0.0 {
            let (mut a, mut b) = (xs[i], xs[i + 1]);
            while b - a > 1e-10 {
                let m = 0.5 * (a + b);
                if slope(m) > 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            let x = 0.5 * (a + b);
            if modes.last().is_none_or(|&prev| x - prev > 1e-4) {
                modes.push(x);
            }
        }
    }
    let d2 = max_log_second_difference(|x| g.ln_pdf(x), lo, hi, 4001);
    ModeReport {
        mode_count: modes.len(),
        mode_locations: modes,
        log_concave_on_grid: d2 <= 1e-8,
    }
}

/// Whether `BSN(lambda, a, a)` is symmetric about 0 on a 401-point grid over `[-6, 6]`.
pub fn bsn_symmetry_check(lambda: f64, a: f64) -> Result<bool> {
    let p = BsnParams::standard(lambda, a, a)?;
    Ok(grid(-6.0, 6.0, 401).all(|x| (bsn_pdf(&p, x) - bsn_pdf(&p, -x)).abs() <= 1e-12))
}

/// `int_0^inf |g_BSN - g_BHN| + int_-inf^0 g_BSN`, which tends to 0 as `lambda` grows.
pub fn bsn_bhn_limit_distance(lambda: f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(domain(format!("limit distance requires lambda > 0 (got {lambda})")));
    }
    let p = BsnParams::standard(lambda, a, b)?;
    let bsn = p.generated();
    let bhn = BetaGenerated::new(HalfNormalBase, a, b)?;
    let w = tail_window(a, b, spec.truncation);
    // The skew-normal factor switches on over a width of order 1/lambda.
    let mut breaks = Vec::new();
    let mut x = 0.25 / lambda;
    while x < 1.0 {
        breaks.push(x);
        x *= 4.0;
    }
    breaks.push(1.0);
    let right = integrate_with_breaks(|x| (bsn.pdf(x) - bhn.pdf(x)).abs(), 0.0, w, &breaks, spec)?.value;
    Ok(right + bsn.cdf(0.0))
}

/// Which Kumaraswamy property a transform follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KumaraswamyDirection {
    /// `X ~ BSN(lambda, 1, b)`: `Phi(X; lambda)^(1/c) ~ Kumaraswamy(c, b)`.
    Lower,
    /// `X ~ BSN(lambda, a, 1)`: `(1 - Phi(X; lambda))^(1/c) ~ Kumaraswamy(c, a)`.
    Upper,
}

pub fn kumaraswamy_transform(p: &BsnParams, direction: KumaraswamyDirection, exponent: f64, x: f64) -> Result<f64> {
    if !(exponent > 0.0 && exponent.is_finite()) {
        return Err(domain(format!("exponent must be positive (got {exponent})")));
    }
    let z = (x - p.mu) / p.sigma;
    let (f, s) = sn::std_cdf_pair(z, p.lambda);
    match direction {
        KumaraswamyDirection::Lower if p.a == 1.0 => Ok(f.powf(1.0 / exponent)),
        KumaraswamyDirection::Upper if p.b == 1.0 => Ok(s.powf(1.0 / exponent)),
        KumaraswamyDirection::Lower => Err(domain(format!("lower transform requires a = 1 (got {})", p.a))),
        KumaraswamyDirection::Upper => Err(domain(format!("upper transform requires b = 1 (got {})", p.b))),
    }
}

/// Skewing weight `p(u) = 2 / B(a, b) Phi(lambda y) Phi(y; lambda)^(a-1) (1 - Phi(y; lambda))^(b-1)`,
/// `y = Phi^-1(u)`, so that `phi(y) p(Phi(y))` is the BSN density.
pub fn skewing_weight(u: f64, lambda: f64, a: f64, b: f64) -> Result<f64> {
    let y = norm_quantile(u)?;
    Ok(skewing_weight_at(y, lambda, a, b))
}

pub(crate) fn skewing_weight_at(y: f64, lambda: f64, a: f64, b: f64) -> f64 {
    let mut v = std::f64::consts::LN_2 - ln_beta_unchecked(a, b) + ln_norm_cdf(lambda * y);
    if a != 1.0 {
        v += (a - 1.0) * sn::ln_std_cdf(y, lambda);
    }
    if b != 1.0 {
        v += (b - 1.0) * sn::ln_std_sf(y, lambda);
    }
    v.exp()
}

/// `phi(y) p(Phi(y))` at a point, the skewed-density reading of the BSN density.
pub fn skewed_density(y: f64, lambda: f64, a: f64, b: f64) -> f64 {
    norm_pdf(y) * skewing_weight_at(y, lambda, a, b)
}
