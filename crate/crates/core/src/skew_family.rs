//! Balakrishnan-type skew-normal families.
//!
//! All three families are normal densities reweighted by powers of normal
//! cdfs, so they share one representation, [`WeightedNormal`]:
//!
//! `f(x) = (1 / sigma) K phi(z) Phi(l1 z)^n Phi(l2 z)^m`, `z = (x - mu) / sigma`,
//!
//! with `K = 1 / E[Phi(l1 X)^n Phi(l2 X)^m]` for `X ~ N(0, 1)`.
//!
//! * `SNB_n(lambda)`: `l1 = lambda`, `m = 0`
//! * `GBSN_{n,m}(lambda)`: `l1 = lambda`, `l2 = -lambda`, since `1 - Phi(t) = Phi(-t)`
//! * `TBSN_{n,m}(l1, l2)`: the general case

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use crate::error::{domain, Result};
use crate::quadrature::{gk21, integrate_line, integrate_with_breaks, QuadratureSpec};
use crate::rng::{SampleBatch, Stream};
use crate::special::{ln_gamma, ln_norm_cdf, ln_norm_pdf};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SnbParams {
    pub mu: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub n: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GbsnParams {
    pub lambda: f64,
    pub n: u32,
    pub m: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TbsnParams {
    pub mu: f64,
    pub sigma: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub n: u32,
    pub m: u32,
}

fn check_location_scale(mu: f64, sigma: f64) -> Result<()> {
    if !mu.is_finite() {
        return Err(domain(format!("mu must be finite (got {mu})")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(domain(format!("sigma must be > 0 (got {sigma})")));
    }
    Ok(())
}

fn check_shape(l: f64) -> Result<()> {
    if l.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("shape parameter must be finite (got {l})")))
    }
}

/// `k ln Phi(l z)` with `0 * ln 0 = 0`.
fn ln_weight(k: u32, l: f64, z: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * ln_norm_cdf(l * z)
    }
}

fn ln_kernel(z: f64, l1: f64, n: u32, l2: f64, m: u32) -> f64 {
    ln_norm_pdf(z) + ln_weight(n, l1, z) + ln_weight(m, l2, z)
}

// ---------------------------------------------------------------------------
// Normalizing constants
// ---------------------------------------------------------------------------

const CACHE_CAPACITY: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct ConstantKey {
    n: u32,
    l1: u64,
    m: u32,
    l2: u64,
    spec: [u64; 4],
}

fn cache() -> &'static RwLock<HashMap<ConstantKey, f64>> {
    static CACHE: OnceLock<RwLock<HashMap<ConstantKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Constants are integrated a little tighter than the caller's tolerance
/// because every later pdf, cdf and moment inherits their error.
fn constant_spec(spec: &QuadratureSpec) -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: spec.abs_tol.min(1e-15),
        rel_tol: spec.rel_tol.min(1e-13),
        ..*spec
    }
}

/// `E[Phi(l1 X)^n Phi(l2 X)^m]` for `X ~ N(0, 1)`, memoized.
fn expectation(n: u32, l1: f64, m: u32, l2: f64, spec: &QuadratureSpec) -> Result<f64> {
    // Canonical form: drop empty factors and merge equal shapes.
    let (mut n, mut l1, mut m, mut l2) = (n, l1, m, l2);
    if l1 == l2 {
        n += m;
        m = 0;
    }
    if n == 0 {
        (n, l1, m, l2) = (m, l2, 0, 0.0);
    }
    if m == 0 {
        l2 = 0.0;
    }
    if n == 0 {
        l1 = 0.0;
    }
    if n == 0 {
        return Ok(1.0);
    }
    // Phi(l X)^1 has mean 1/2 by symmetry; Phi(0)^k = 2^-k.
    if m == 0 && (n == 1 || l1 == 0.0) {
        return Ok(0.5f64.powi(n as i32));
    }
    let key = ConstantKey {
        n,
        l1: l1.to_bits(),
        m,
        l2: l2.to_bits(),
        spec: [
            spec.abs_tol.to_bits(),
            spec.rel_tol.to_bits(),
            spec.truncation.to_bits(),
            spec.max_subdivisions as u64,
        ],
    };
    if let Some(&v) = cache().read().expect("constant cache poisoned").get(&key) {
        return Ok(v);
    }
    let value = integrate_line(|z| ln_kernel(z, l1, n, l2, m).exp(), &constant_spec(spec))?.value;
    let mut guard = cache().write().expect("constant cache poisoned");
    if guard.len() >= CACHE_CAPACITY {
        guard.clear();
    }
    guard.insert(key, value);
    Ok(value)
}

/// `c_n(lambda) = 1 / E[Phi(lambda U)^n]`, the multiplier of `phi(x) Phi(lambda x)^n`.
///
/// Closed forms: `c_0 = 1`, `c_1 = 2`, `c_2 = pi / arctan(sqrt(1 + 2 lambda^2))`.
pub fn snb_constant(n: u32, lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_shape(lambda)?;
    Ok(1.0 / expectation(n, lambda, 0, 0.0, spec)?)
}

/// `C_{n,m}(lambda)`, the multiplier of `phi(x) Phi(lambda x)^n (1 - Phi(lambda x))^m`.
///
/// For `lambda = 1` this is `(n + m + 1)! / (n! m!)`.
pub fn gbsn_constant(n: u32, m: u32, lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_shape(lambda)?;
    Ok(1.0 / expectation(n, lambda, m, -lambda, spec)?)
}

/// The same constant from the binomial expansion
/// `sum_i (-1)^i binom(m, i) E[Phi(lambda X)^(n+i)]`.
///
/// Cancels badly as `m` grows; meant as a cross-check only.
pub fn gbsn_constant_alternating(n: u32, m: u32, lambda: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_shape(lambda)?;
    let mut sum = 0.0;
    for i in 0..=m {
        let ln_binom = ln_gamma(m as f64 + 1.0) - ln_gamma(i as f64 + 1.0) - ln_gamma((m - i) as f64 + 1.0);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * ln_binom.exp().round() * expectation(n + i, lambda, 0, 0.0, spec)?;
    }
    Ok(1.0 / sum)
}

/// `c_{n,m}(l1, l2) = E[Phi(l1 X)^n Phi(l2 X)^m]`; the density divides by it.
pub fn tbsn_constant(n: u32, m: u32, l1: f64, l2: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_shape(l1)?;
    check_shape(l2)?;
    expectation(n, l1, m, l2, spec)
}

// ---------------------------------------------------------------------------
// Shared density object
// ---------------------------------------------------------------------------

/// Location-scale normal reweighted by `Phi(l1 z)^n Phi(l2 z)^m`, with its
/// normalizing constant resolved at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedNormal {
    pub mu: f64,
    pub sigma: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub n: u32,
    pub m: u32,
    ln_norm: f64,
}

impl WeightedNormal {
    pub fn tbsn(p: &TbsnParams, spec: &QuadratureSpec) -> Result<Self> {
        check_location_scale(p.mu, p.sigma)?;
        let e = tbsn_constant(p.n, p.m, p.lambda1, p.lambda2, spec)?;
        Ok(Self {
            mu: p.mu,
            sigma: p.sigma,
            lambda1: p.lambda1,
            lambda2: p.lambda2,
            n: p.n,
            m: p.m,
            ln_norm: -e.ln(),
        })
    }

    pub fn snb(p: &SnbParams, spec: &QuadratureSpec) -> Result<Self> {
        Self::tbsn(
            &TbsnParams {
                mu: p.mu,
                sigma: p.sigma,
                lambda1: p.lambda,
                lambda2: 0.0,
                n: p.n,
                m: 0,
            },
            spec,
        )
    }

    pub fn gbsn(p: &GbsnParams, spec: &QuadratureSpec) -> Result<Self> {
        Self::tbsn(
            &TbsnParams {
                mu: 0.0,
                sigma: 1.0,
                lambda1: p.lambda,
                lambda2: -p.lambda,
                n: p.n,
                m: p.m,
            },
            spec,
        )
    }

    /// Natural log of the multiplying constant `K`.
    pub fn ln_constant(&self) -> f64 {
        self.ln_norm
    }

    fn ln_std_pdf(&self, z: f64) -> f64 {
        self.ln_norm + ln_kernel(z, self.lambda1, self.n, self.lambda2, self.m)
    }

    fn std_pdf(&self, z: f64) -> f64 {
        self.ln_std_pdf(z).exp()
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        self.ln_std_pdf((x - self.mu) / self.sigma) - self.sigma.ln()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    /// `(F(x), 1 - F(x))` by quadrature of the density, integrating whichever
    /// side of 0 the point lies on.
    pub fn cdf_pair(&self, x: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
        let z = (x - self.mu) / self.sigma;
        let t = spec.truncation;
        let f = |u: f64| self.std_pdf(u);
        if z <= 0.0 {
            let lo = (-t).min(z - 1.0);
            let lower = integrate_with_breaks(f, lo, z, &[], spec)?.value.clamp(0.0, 1.0);
            Ok((lower, 1.0 - lower))
        } else {
            let hi = t.max(z + 1.0);
            let upper = integrate_with_breaks(f, z, hi, &[], spec)?.value.clamp(0.0, 1.0);
            Ok((1.0 - upper, upper))
        }
    }

    pub fn cdf(&self, x: f64, spec: &QuadratureSpec) -> Result<f64> {
        Ok(self.cdf_pair(x, spec)?.0)
    }

    /// Tabulated cdf of the standardized variable.
    pub fn table(&self, spec: &QuadratureSpec) -> TabulatedCdf {
        let t = spec.truncation;
        TabulatedCdf::build(|z| self.std_pdf(z), -t, t, 1e-11)
    }

    pub fn quantile(&self, u: f64, spec: &QuadratureSpec) -> Result<f64> {
        if u.is_nan() || u <= 0.0 || u >= 1.0 {
            return Err(domain(format!("quantile requires 0 < u < 1 (got {u})")));
        }
        Ok(self.mu + self.sigma * self.table(spec).invert(u))
    }

    /// Quantile transform of a uniform stream through the tabulated cdf.
    pub fn sample(&self, count: usize, seed: u64, spec: &QuadratureSpec) -> Result<SampleBatch> {
        if count == 0 {
            return Err(domain("sample count must be >= 1"));
        }
        let table = self.table(spec);
        let mut rng = Stream::new(seed);
        let values = (0..count)
            .map(|_| self.mu + self.sigma * table.invert(rng.uniform()))
            .collect();
        Ok(SampleBatch::new(seed, values))
    }
}

pub fn snb_pdf(p: &SnbParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(WeightedNormal::snb(p, spec)?.pdf(x))
}

pub fn snb_cdf(p: &SnbParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    WeightedNormal::snb(p, spec)?.cdf(x, spec)
}

pub fn snb_sample(p: &SnbParams, count: usize, seed: u64, spec: &QuadratureSpec) -> Result<SampleBatch> {
    WeightedNormal::snb(p, spec)?.sample(count, seed, spec)
}

/// `SNB_n(+-1)` as the maximum (`lambda = 1`) or minimum (`lambda = -1`) of
/// `n + 1` standard normals.
pub fn snb_sample_order_stat(p: &SnbParams, count: usize, seed: u64) -> Result<SampleBatch> {
    check_location_scale(p.mu, p.sigma)?;
    if p.lambda.abs() != 1.0 {
        return Err(domain(format!(
            "order-statistic sampler needs lambda = +-1 (got {})",
            p.lambda
        )));
    }
    if count == 0 {
        return Err(domain("sample count must be >= 1"));
    }
    let mut rng = Stream::new(seed);
    let values = (0..count)
        .map(|_| {
            let draws = (0..=p.n).map(|_| rng.normal());
            let z = if p.lambda > 0.0 {
                draws.fold(f64::NEG_INFINITY, f64::max)
            } else {
                draws.fold(f64::INFINITY, f64::min)
            };
            p.mu + p.sigma * z
        })
        .collect();
    Ok(SampleBatch::new(seed, values))
}

pub fn gbsn_pdf(p: &GbsnParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(WeightedNormal::gbsn(p, spec)?.pdf(x))
}

pub fn tbsn_pdf(p: &TbsnParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(WeightedNormal::tbsn(p, spec)?.pdf(x))
}

// ---------------------------------------------------------------------------
// Tabulated cdf
// ---------------------------------------------------------------------------

/// Piecewise monotone cubic Hermite cdf.
///
/// Nodes come from recursive bisection of an initial uniform grid until the
/// Hermite midpoint prediction agrees with the integrated half-panel mass.
/// Slopes are the density itself, limited (Fritsch–Carlson) so every piece
/// is monotone.
#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    x: Vec<f64>,
    f: Vec<f64>,
    d: Vec<f64>,
}

impl TabulatedCdf {
    pub fn build<P: Fn(f64) -> f64>(pdf: P, lo: f64, hi: f64, tol: f64) -> Self {
        const INITIAL: usize = 128;
        const MAX_DEPTH: u32 = 24;
        let mut x = vec![lo];
        let mut mass = vec![0.0];
        let mut dens = vec![pdf(lo)];

        #[allow(clippy::too_many_arguments)]
        fn refine<P: Fn(f64) -> f64>(
            pdf: &P,
            a: f64,
            b: f64,
            pa: f64,
            pb: f64,
            whole: f64,
            depth: u32,
            tol: f64,
            out: &mut (Vec<f64>, Vec<f64>, Vec<f64>),
        ) {
            let mid = 0.5 * (a + b);
            let left = gk21(pdf, a, mid).0;
            let predicted = 0.5 * whole + (b - a) / 8.0 * (pa - pb);
            if depth >= MAX_DEPTH || (predicted - left).abs() <= tol {
                out.0.push(b);
                out.1.push(whole);
                out.2.push(pb);
                return;
            }
            let pm = pdf(mid);
            refine(pdf, a, mid, pa, pm, left, depth + 1, tol, out);
            refine(pdf, mid, b, pm, pb, whole - left, depth + 1, tol, out);
        }

        let h = (hi - lo) / INITIAL as f64;
        let mut out = (Vec::new(), Vec::new(), Vec::new());
        for i in 0..INITIAL {
            let a = lo + h * i as f64;
            let b = if i + 1 == INITIAL { hi } else { a + h };
            let whole = gk21(&pdf, a, b).0;
            let pa = *out.2.last().unwrap_or(&dens[0]);
            refine(&pdf, a, b, pa, pdf(b), whole, 0, tol, &mut out);
        }
        let mut running = 0.0;
        for (xi, (mi, di)) in out.0.into_iter().zip(out.1.into_iter().zip(out.2)) {
            running += mi.max(0.0);
            x.push(xi);
            mass.push(running);
            dens.push(di);
        }
        let total = running;
        let f: Vec<f64> = mass.iter().map(|v| v / total).collect();
        let mut d: Vec<f64> = dens.iter().map(|v| v.max(0.0) / total).collect();
        for i in 0..x.len() - 1 {
            let delta = (f[i + 1] - f[i]) / (x[i + 1] - x[i]);
            if delta <= 0.0 {
                d[i] = 0.0;
                d[i + 1] = 0.0;
                continue;
            }
            let (alpha, beta) = (d[i] / delta, d[i + 1] / delta);
            let r = alpha.hypot(beta);
            if r > 3.0 {
                d[i] = 3.0 / r * alpha * delta;
                d[i + 1] = 3.0 / r * beta * delta;
            }
        }
        Self { x, f, d }
    }

    pub fn nodes(&self) -> usize {
        self.x.len()
    }

    fn hermite(&self, i: usize, t: f64) -> (f64, f64) {
        let h = self.x[i + 1] - self.x[i];
        let (f0, f1, d0, d1) = (self.f[i], self.f[i + 1], self.d[i] * h, self.d[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let value =
            (2.0 * t3 - 3.0 * t2 + 1.0) * f0 + (t3 - 2.0 * t2 + t) * d0 + (-2.0 * t3 + 3.0 * t2) * f1 + (t3 - t2) * d1;
        let slope = (6.0 * t2 - 6.0 * t) * f0
            + (3.0 * t2 - 4.0 * t + 1.0) * d0
            + (-6.0 * t2 + 6.0 * t) * f1
            + (3.0 * t2 - 2.0 * t) * d1;
        (value, slope)
    }

    /// Interpolated cdf.
    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.x[0] {
            return 0.0;
        }
        if x >= self.x[self.x.len() - 1] {
            return 1.0;
        }
        let i = self.x.partition_point(|&v| v <= x) - 1;
        let t = (x - self.x[i]) / (self.x[i + 1] - self.x[i]);
        self.hermite(i, t).0
    }

    /// Inverse of [`eval`](Self::eval).
    pub fn invert(&self, u: f64) -> f64 {
        let last = self.x.len() - 1;
        if u <= 0.0 {
            return self.x[0];
        }
        if u >= 1.0 {
            return self.x[last];
        }
        let i = (self.f.partition_point(|&v| v <= u)).clamp(1, last) - 1;
        let (mut lo, mut hi) = (0.0, 1.0);
        let span = self.f[i + 1] - self.f[i];
        let mut t = if span > 0.0 {
            ((u - self.f[i]) / span).clamp(0.0, 1.0)
        } else {
            0.5
        };
        for _ in 0..100 {
            let (v, s) = self.hermite(i, t);
            let g = v - u;
            if g < 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            let mut next = if s > 0.0 { t - g / s } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() < 1e-15 || hi - lo < 1e-15 {
                t = next;
                break;
            }
            t = next;
        }
        self.x[i] + t * (self.x[i + 1] - self.x[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ks::ks_test;
    use crate::sn::{grid, std_cdf, std_pdf};
    use crate::special::{norm_cdf, norm_pdf};

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn snb(lambda: f64, n: u32) -> SnbParams {
        SnbParams {
            mu: 0.0,
            sigma: 1.0,
            lambda,
            n,
        }
    }

    fn tbsn(l1: f64, l2: f64, n: u32, m: u32) -> WeightedNormal {
        WeightedNormal::tbsn(
            &TbsnParams {
                mu: 0.0,
                sigma: 1.0,
                lambda1: l1,
                lambda2: l2,
                n,
                m,
            },
            &spec(),
        )
        .unwrap()
    }

    #[test]
    fn snb_constants() {
        let s = spec();
        for &l in &[-3.0, 0.0, 0.7, 5.0] {
            assert_eq!(snb_constant(0, l, &s).unwrap(), 1.0);
            assert_eq!(snb_constant(1, l, &s).unwrap(), 2.0);
        }
        assert!((snb_constant(2, 1.0, &s).unwrap() - 3.0).abs() < 1e-12);
        for l in grid(-5.0, 5.0, 41) {
            let closed = std::f64::consts::PI / (1.0 + 2.0 * l * l).sqrt().atan();
            assert!((snb_constant(2, l, &s).unwrap() - closed).abs() < 1e-9, "l={l}");
        }
        // lambda = 1: (n + 1) phi Phi^n is the density of the maximum of n + 1 normals.
        for n in 0..8 {
            assert!((snb_constant(n, 1.0, &s).unwrap() - (n + 1) as f64).abs() < 1e-11);
        }
    }

    #[test]
    fn snb_density() {
        let s = spec();
        for x in grid(-6.0, 6.0, 49) {
            assert!((snb_pdf(&snb(2.5, 0), x, &s).unwrap() - norm_pdf(x)).abs() < 1e-15);
            assert!((snb_pdf(&snb(-1.5, 1), x, &s).unwrap() - std_pdf(x, -1.5)).abs() < 1e-15);
            let max4 = 4.0 * norm_pdf(x) * norm_cdf(x).powi(3);
            assert!((snb_pdf(&snb(1.0, 3), x, &s).unwrap() - max4).abs() < 1e-12);
        }
        assert!((snb_pdf(&snb(1.0, 2), 0.0, &s).unwrap() - 0.299_206_710_301_074_5).abs() < 1e-12);
        let shifted = SnbParams {
            mu: 1.0,
            sigma: 2.0,
            lambda: 1.0,
            n: 2,
        };
        assert!((snb_pdf(&shifted, 1.0, &s).unwrap() - 0.299_206_710_301_074_5 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn snb_cdf_values() {
        let s = spec();
        let p = snb(1.0, 3);
        assert_eq!(snb_cdf(&p, -50.0, &s).unwrap(), 0.0);
        assert_eq!(snb_cdf(&p, 50.0, &s).unwrap(), 1.0);
        for x in grid(-4.0, 4.0, 17) {
            let exact = norm_cdf(x).powi(4);
            assert!((snb_cdf(&p, x, &s).unwrap() - exact).abs() < 1e-10, "x={x}");
        }
        let sn = snb(-2.0, 1);
        for x in grid(-4.0, 4.0, 17) {
            assert!((snb_cdf(&sn, x, &s).unwrap() - std_cdf(x, -2.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn gbsn_constants() {
        let s = spec();
        assert!((gbsn_constant(1, 1, 1.0, &s).unwrap() - 6.0).abs() < 1e-10);
        for n in 0..4 {
            for m in 0..4 {
                for &l in &[-2.0, -0.5, 1.0, 3.0] {
                    let direct = gbsn_constant(n, m, l, &s).unwrap();
                    let alt = gbsn_constant_alternating(n, m, l, &s).unwrap();
                    assert!((direct - alt).abs() < 1e-9, "n={n} m={m} l={l}");
                }
                // (n + m + 1)! / (n! m!)
                let exact = ((n + m + 1) as f64) * binom(n + m, n);
                assert!((gbsn_constant(n, m, 1.0, &s).unwrap() - exact).abs() < 1e-9 * exact);
            }
        }
    }

    fn binom(n: u32, k: u32) -> f64 {
        (1..=k).fold(1.0, |acc, i| acc * (n - k + i) as f64 / i as f64)
    }

    #[test]
    fn gbsn_density() {
        let s = spec();
        for x in grid(-6.0, 6.0, 49) {
            for &l in &[-1.0, 2.0] {
                let g = gbsn_pdf(&GbsnParams { lambda: l, n: 2, m: 0 }, x, &s).unwrap();
                let b = snb_pdf(&snb(l, 2), x, &s).unwrap();
                assert!((g - b).abs() < 1e-13);
            }
            // 2nd order statistic of 4 normals: 12 phi Phi (1 - Phi)^2.
            let classical = 12.0 * norm_pdf(x) * norm_cdf(x) * norm_cdf(-x).powi(2);
            let g = gbsn_pdf(
                &GbsnParams {
                    lambda: 1.0,
                    n: 1,
                    m: 2,
                },
                x,
                &s,
            )
            .unwrap();
            assert!((g - classical).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn tbsn_properties() {
        let s = spec();
        let ls = [0.0, 1.0, -1.0, 2.0, -2.0];
        for n in 0..4u32 {
            for m in 0..4u32 {
                for &l in &ls {
                    let p2 = tbsn(l, l, n, m);
                    let s2 = WeightedNormal::snb(&snb(l, n + m), &s).unwrap();
                    let p3a = tbsn(l, 0.0, n, m);
                    let s3a = WeightedNormal::snb(&snb(l, n), &s).unwrap();
                    let p3b = tbsn(0.0, l, n, m);
                    let s3b = WeightedNormal::snb(&snb(l, m), &s).unwrap();
                    let p4a = tbsn(l, -l, n, m);
                    let g4a = WeightedNormal::gbsn(&GbsnParams { lambda: l, n, m }, &s).unwrap();
                    let p4b = tbsn(-l, l, n, m);
                    let g4b = WeightedNormal::gbsn(&GbsnParams { lambda: l, n: m, m: n }, &s).unwrap();
                    let p5 = tbsn(0.0, 0.0, n, m);
                    let p5b = tbsn(l, -0.5 * l, 0, 0);
                    for z in grid(-6.0, 6.0, 61) {
                        let close = |a: f64, b: f64| (a - b).abs() < 1e-10;
                        assert!(close(p2.pdf(z), s2.pdf(z)), "P2 n={n} m={m} l={l} z={z}");
                        assert!(close(p3a.pdf(z), s3a.pdf(z)), "P3a n={n} m={m} l={l}");
                        assert!(close(p3b.pdf(z), s3b.pdf(z)), "P3b n={n} m={m} l={l}");
                        assert!(close(p4a.pdf(z), g4a.pdf(z)), "P4a n={n} m={m} l={l}");
                        assert!(close(p4b.pdf(z), g4b.pdf(z)), "P4b n={n} m={m} l={l}");
                        assert!(close(p5.pdf(z), norm_pdf(z)), "P5 n={n} m={m}");
                        assert!(close(p5b.pdf(z), norm_pdf(z)), "P5 l={l}");
                    }
                }
            }
        }
        for &l in &ls {
            let p1a = tbsn(l, 0.0, 1, 1);
            let p1b = tbsn(0.0, l, 1, 1);
            for z in grid(-6.0, 6.0, 61) {
                assert!((p1a.pdf(z) - std_pdf(z, l)).abs() < 1e-10);
                assert!((p1b.pdf(z) - std_pdf(z, l)).abs() < 1e-10);
            }
        }
        assert!((tbsn_constant(1, 0, 3.0, 0.0, &s).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tabulated_cdf_tracks_quadrature() {
        let s = spec();
        let w = WeightedNormal::tbsn(
            &TbsnParams {
                mu: 0.5,
                sigma: 1.5,
                lambda1: 3.0,
                lambda2: -0.5,
                n: 2,
                m: 3,
            },
            &s,
        )
        .unwrap();
        let table = w.table(&s);
        for x in grid(-5.0, 5.0, 41) {
            let exact = w.cdf(0.5 + 1.5 * x, &s).unwrap();
            assert!((table.eval(x) - exact).abs() < 1e-9, "x={x}");
        }
        for &u in &[1e-6, 0.1, 0.5, 0.77, 0.999] {
            let q = w.quantile(u, &s).unwrap();
            assert!((w.cdf(q, &s).unwrap() - u).abs() < 1e-9, "u={u}");
        }
        assert!(w.quantile(0.0, &s).is_err());
    }

    #[test]
    fn samplers() {
        let s = spec();
        let p = SnbParams {
            mu: -1.0,
            sigma: 0.5,
            lambda: 2.0,
            n: 3,
        };
        let dist = WeightedNormal::snb(&p, &s).unwrap();
        let batch = snb_sample(&p, 100_000, 31, &s).unwrap();
        assert!(ks_test(&batch.values, |x| dist.cdf(x, &s).unwrap()).pass);

        for &l in &[1.0, -1.0] {
            let q = snb(l, 4);
            let d = WeightedNormal::snb(&q, &s).unwrap();
            let batch = snb_sample_order_stat(&q, 100_000, 32).unwrap();
            assert!(ks_test(&batch.values, |x| d.cdf(x, &s).unwrap()).pass, "l={l}");
        }
        assert!(snb_sample_order_stat(&snb(2.0, 1), 10, 1).is_err());
    }

    #[test]
    fn second_of_five_order_statistic() {
        let s = spec();
        let d = tbsn(1.0, -1.0, 1, 3);
        let mut rng = Stream::new(41);
        let draws: Vec<f64> = (0..100_000)
            .map(|_| {
                let mut v: Vec<f64> = (0..5).map(|_| rng.normal()).collect();
                v.sort_by(f64::total_cmp);
                v[1]
            })
            .collect();
        assert!(ks_test(&draws, |x| d.cdf(x, &s).unwrap()).pass);
    }
}
