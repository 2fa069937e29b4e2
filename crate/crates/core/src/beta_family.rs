//! Beta, generalized beta of the first kind, Kumaraswamy, and the
//! beta-generated construction `g(x) = F(x)^(a-1) (1 - F(x))^(b-1) f(x) / B(a, b)`
//! over a base distribution `F`.
//!
//! Densities return 0 outside their support and cdfs clamp to `[0, 1]`.

use crate::error::{domain, Result};
use crate::rng::{SampleBatch, Stream};
use crate::sn::{self, SkewNormalParams};
use crate::special::{
    inc_beta_pair, inv_inc_beta_pair, ln_beta_unchecked, ln_norm_cdf, ln_norm_pdf, norm_cdf, norm_pdf,
    norm_quantile_unchecked, norm_quantile_upper, norm_sf, norm_two_sided,
};

fn check_shape(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive and finite (got {v})")))
    }
}

/// `(k - 1) ln v` with the convention `0 * ln 0 = 0` for `k = 1`.
fn power_term(k: f64, ln_v: f64) -> f64 {
    if k == 1.0 {
        0.0
    } else {
        (k - 1.0) * ln_v
    }
}

// ---------------------------------------------------------------------------
// Beta
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BetaParams {
    pub a: f64,
    pub b: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let p = Self { a, b };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_shape("beta a", self.a)?;
        check_shape("beta b", self.b)
    }
}

pub fn beta_pdf(p: &BetaParams, y: f64) -> f64 {
    if !(0.0..=1.0).contains(&y) {
        return 0.0;
    }
    let ln = power_term(p.a, y.ln()) + power_term(p.b, (-y).ln_1p()) - ln_beta_unchecked(p.a, p.b);
    ln.exp()
}

pub fn beta_cdf(p: &BetaParams, y: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else if y >= 1.0 {
        1.0
    } else {
        inc_beta_pair(y, 1.0 - y, p.a, p.b).0
    }
}

pub fn beta_quantile(p: &BetaParams, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) {
        return Err(domain(format!("beta_quantile requires 0 <= q <= 1 (got {q})")));
    }
    Ok(inv_inc_beta_pair(q, 1.0 - q, p.a, p.b).0)
}

/// Quantile transform of a uniform stream.
pub fn beta_sample(p: &BetaParams, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(domain("sample count must be >= 1"));
    }
    let mut rng = Stream::new(seed);
    let values = (0..n)
        .map(|_| {
            let u = rng.uniform();
            inv_inc_beta_pair(u, 1.0 - u, p.a, p.b).0
        })
        .collect();
    Ok(SampleBatch::new(seed, values))
}

// ---------------------------------------------------------------------------
// Generalized beta of the first kind and Kumaraswamy
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Gb1Params {
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub q: f64,
}

impl Gb1Params {
    pub fn new(a: f64, b: f64, p: f64, q: f64) -> Result<Self> {
        let g = Self { a, b, p, q };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        check_shape("gb1 a", self.a)?;
        check_shape("gb1 b", self.b)?;
        check_shape("gb1 p", self.p)?;
        check_shape("gb1 q", self.q)
    }
}

/// `p x^(ap-1) (1 - (x/q)^p)^(b-1) / (q^(ap) B(a, b))` on `[0, q]`.
pub fn gb1_pdf(g: &Gb1Params, x: f64) -> f64 {
    if !(0.0..=g.q).contains(&x) {
        return 0.0;
    }
    let ln_ratio = g.p * (x / g.q).ln();
    let ln = g.p.ln() + power_term(g.a * g.p, x.ln()) + power_term(g.b, (-ln_ratio.exp_m1()).ln())
        - g.a * g.p * g.q.ln()
        - ln_beta_unchecked(g.a, g.b);
    ln.exp()
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct KumaraswamyParams {
    pub p: f64,
    pub b: f64,
}

impl KumaraswamyParams {
    pub fn new(p: f64, b: f64) -> Result<Self> {
        let k = Self { p, b };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        check_shape("kumaraswamy p", self.p)?;
        check_shape("kumaraswamy b", self.b)
    }
}

/// `p b x^(p-1) (1 - x^p)^(b-1)` on `[0, 1]`.
pub fn kumaraswamy_pdf(k: &KumaraswamyParams, x: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return 0.0;
    }
    let ln_one_minus_xp = (-(k.p * x.ln()).exp_m1()).ln();
    (k.p.ln() + k.b.ln() + power_term(k.p, x.ln()) + power_term(k.b, ln_one_minus_xp)).exp()
}

/// `1 - (1 - x^p)^b`.
pub fn kumaraswamy_cdf(k: &KumaraswamyParams, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    -(k.b * (-x.powf(k.p)).ln_1p()).exp_m1()
}

/// `(1 - (1 - u)^(1/b))^(1/p)`.
pub fn kumaraswamy_quantile(k: &KumaraswamyParams, u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(domain(format!("kumaraswamy_quantile requires 0 <= u <= 1 (got {u})")));
    }
    let inner = -((-u).ln_1p() / k.b).exp_m1();
    Ok(inner.powf(1.0 / k.p))
}

// ---------------------------------------------------------------------------
// Beta-generated distributions
// ---------------------------------------------------------------------------

/// A continuous base distribution for the beta-generated construction.
///
/// Implementations supply `F` and `1 - F` separately so that both tails of
/// the generated distribution stay accurate.
pub trait BaseDistribution: Send + Sync {
    /// `(F(x), 1 - F(x))`.
    fn cdf_pair(&self, x: f64) -> (f64, f64);
    /// `(ln F(x), ln(1 - F(x)))`.
    fn ln_cdf_pair(&self, x: f64) -> (f64, f64);
    fn ln_pdf(&self, x: f64) -> f64;
    /// Solves `F(x) = p` given `p` and `q = 1 - p`.
    fn quantile_pair(&self, p: f64, q: f64) -> f64;
    /// Interior points where the integrand may need a break.
    fn breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// Normal base `N(mu, sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalBase {
    pub mu: f64,
    pub sigma: f64,
}

impl NormalBase {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(domain("normal mu must be finite"));
        }
        check_shape("normal sigma", sigma)?;
        Ok(Self { mu, sigma })
    }

    pub fn standard() -> Self {
        Self { mu: 0.0, sigma: 1.0 }
    }
}

impl BaseDistribution for NormalBase {
    fn cdf_pair(&self, x: f64) -> (f64, f64) {
        let z = (x - self.mu) / self.sigma;
        (norm_cdf(z), norm_sf(z))
    }

    fn ln_cdf_pair(&self, x: f64) -> (f64, f64) {
        let z = (x - self.mu) / self.sigma;
        (ln_norm_cdf(z), ln_norm_cdf(-z))
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        ln_norm_pdf((x - self.mu) / self.sigma) - self.sigma.ln()
    }

    fn quantile_pair(&self, p: f64, q: f64) -> f64 {
        let z = if p <= q {
            norm_quantile_unchecked(p)
        } else {
            norm_quantile_upper(q)
        };
        self.mu + self.sigma * z
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.mu]
    }
}

/// Standard half-normal base, `F(x) = 2 Phi(x) - 1` on `x > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HalfNormalBase;

impl BaseDistribution for HalfNormalBase {
    fn cdf_pair(&self, x: f64) -> (f64, f64) {
        if x <= 0.0 {
            (0.0, 1.0)
        } else {
            (norm_two_sided(x), 2.0 * norm_sf(x))
        }
    }

    fn ln_cdf_pair(&self, x: f64) -> (f64, f64) {
        if x <= 0.0 {
            (f64::NEG_INFINITY, 0.0)
        } else {
            (norm_two_sided(x).ln(), std::f64::consts::LN_2 + ln_norm_cdf(-x))
        }
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            f64::NEG_INFINITY
        } else {
            std::f64::consts::LN_2 + ln_norm_pdf(x)
        }
    }

    fn quantile_pair(&self, p: f64, q: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        if q <= 0.0 {
            return f64::INFINITY;
        }
        // 1 - F = 2 (1 - Phi(x)).
        let mut x = norm_quantile_upper(0.5 * q);
        if p < 0.25 {
            // Newton on erf to recover relative accuracy near zero.
            for _ in 0..4 {
                let step = (norm_two_sided(x) - p) / (2.0 * norm_pdf(x));
                x -= step;
                if step.abs() <= 1e-16 * x {
                    break;
                }
            }
        }
        x
    }
}

/// Skew-normal base `SN(xi, psi, lambda)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewNormalBase(pub SkewNormalParams);

impl BaseDistribution for SkewNormalBase {
    fn cdf_pair(&self, x: f64) -> (f64, f64) {
        let p = &self.0;
        sn::std_cdf_pair((x - p.xi) / p.psi, p.lambda)
    }

    fn ln_cdf_pair(&self, x: f64) -> (f64, f64) {
        let p = &self.0;
        let z = (x - p.xi) / p.psi;
        (sn::ln_std_cdf(z, p.lambda), sn::ln_std_sf(z, p.lambda))
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        sn::sn_ln_pdf(&self.0, x)
    }

    fn quantile_pair(&self, p: f64, q: f64) -> f64 {
        let z = if p <= q {
            sn::std_inverse(p, false, self.0.lambda)
        } else {
            sn::std_inverse(q, true, self.0.lambda)
        };
        self.0.xi + self.0.psi * z
    }

    fn breakpoints(&self) -> Vec<f64> {
        vec![self.0.xi]
    }
}

/// Beta-generated distribution over `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaGenerated<B> {
    pub base: B,
    pub a: f64,
    pub b: f64,
    ln_beta: f64,
}

impl<B: BaseDistribution> BetaGenerated<B> {
    pub fn new(base: B, a: f64, b: f64) -> Result<Self> {
        check_shape("a", a)?;
        check_shape("b", b)?;
        Ok(Self {
            base,
            a,
            b,
            ln_beta: ln_beta_unchecked(a, b),
        })
    }

    /// Log density, evaluated as `(a-1) ln F + (b-1) ln(1-F) + ln f - ln B(a, b)`.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        let ln_f = self.base.ln_pdf(x);
        if ln_f == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let (ln_cdf, ln_sf) = self.base.ln_cdf_pair(x);
        let v = power_term(self.a, ln_cdf) + power_term(self.b, ln_sf) + ln_f - self.ln_beta;
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    /// `I_{F(x)}(a, b)`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.cdf_pair(x).0
    }

    pub fn sf(&self, x: f64) -> f64 {
        self.cdf_pair(x).1
    }

    /// `(G(x), 1 - G(x))`.
    pub fn cdf_pair(&self, x: f64) -> (f64, f64) {
        let (f, s) = self.base.cdf_pair(x);
        inc_beta_pair(f, s, self.a, self.b)
    }

    /// Solves `G(x) = u` given `u` and `1 - u`.
    pub fn quantile_pair(&self, u: f64, v: f64) -> f64 {
        let (f, s) = inv_inc_beta_pair(u, v, self.a, self.b);
        self.base.quantile_pair(f, s)
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        if u.is_nan() || u <= 0.0 || u >= 1.0 {
            return Err(domain(format!("quantile requires 0 < u < 1 (got {u})")));
        }
        Ok(self.quantile_pair(u, 1.0 - u))
    }

    /// Quantile transform of a uniform stream.
    pub fn sample(&self, n: usize, seed: u64) -> Result<SampleBatch> {
        if n == 0 {
            return Err(domain("sample count must be >= 1"));
        }
        let mut rng = Stream::new(seed);
        let values = (0..n)
            .map(|_| {
                let u = rng.uniform();
                self.quantile_pair(u, 1.0 - u)
            })
            .collect();
        Ok(SampleBatch::new(seed, values))
    }
}

/// Half-width for integrating a beta-generated density over a normal-type
/// base: the lower tail decays like `exp(-a x^2 / 2)` and the upper like
/// `exp(-b x^2 / 2)`, so small shapes need more than the default window.
pub(crate) fn tail_window(a: f64, b: f64, truncation: f64) -> f64 {
    let k = a.min(b).min(1.0);
    truncation.max((90.0 / k).sqrt())
}

/// Beta-normal density `BN(a, b, mu, sigma)`.
pub fn bn_pdf(a: f64, b: f64, mu: f64, sigma: f64, x: f64) -> Result<f64> {
    Ok(BetaGenerated::new(NormalBase::new(mu, sigma)?, a, b)?.pdf(x))
}

/// Beta half-normal density `BHN(a, b)`: `2^b / B(a, b) (2 Phi(x) - 1)^(a-1) (1 - Phi(x))^(b-1) phi(x)`.
pub fn bhn_pdf(a: f64, b: f64, x: f64) -> Result<f64> {
    Ok(BetaGenerated::new(HalfNormalBase, a, b)?.pdf(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ks::ks_test;
    use crate::quadrature::{integrate, integrate_with_breaks, QuadratureSpec};
    use crate::sn::grid;

    const SHAPES: [(f64, f64); 7] = [
        (1.0, 1.0),
        (0.5, 0.5),
        (0.25, 0.5),
        (2.0, 3.0),
        (10.0, 1.0),
        (0.5, 10.0),
        (1.0, 0.25),
    ];

    #[test]
    fn beta_examples() {
        let u = BetaParams::new(1.0, 1.0).unwrap();
        for y in grid(0.0, 1.0, 11) {
            assert!((beta_cdf(&u, y) - y).abs() < 1e-15);
        }
        let p = BetaParams::new(2.0, 3.0).unwrap();
        assert!((beta_cdf(&p, 0.3) - 0.3483).abs() < 1e-14);
        assert!((beta_pdf(&p, 0.3) - 12.0 * 0.3 * 0.49).abs() < 1e-14);
        assert_eq!(beta_pdf(&p, -0.1), 0.0);
        assert_eq!(beta_cdf(&p, 1.5), 1.0);
        let x = beta_quantile(&p, 0.3483).unwrap();
        assert!((x - 0.3).abs() < 1e-12);
        assert!(beta_quantile(&p, 1.2).is_err());
        assert!(BetaParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn beta_sampler() {
        for &(a, b) in &[(2.0, 3.0), (0.5, 0.5)] {
            let p = BetaParams::new(a, b).unwrap();
            let batch = beta_sample(&p, 100_000, 21).unwrap();
            assert!(ks_test(&batch.values, |y| beta_cdf(&p, y)).pass, "a={a} b={b}");
        }
    }

    #[test]
    fn gb1_reductions() {
        let spec = QuadratureSpec::default();
        for &(a, b) in &SHAPES {
            let g = Gb1Params::new(a, b, 1.0, 1.0).unwrap();
            let beta = BetaParams::new(a, b).unwrap();
            for x in grid(0.01, 0.99, 99) {
                let (u, v) = (gb1_pdf(&g, x), beta_pdf(&beta, x));
                assert!((u - v).abs() <= 1e-13 * v.max(1.0), "a={a} b={b} x={x}");
            }
        }
        for &p in &[0.5, 2.0, 5.0] {
            for &b in &[0.5, 1.0, 3.0] {
                let g = Gb1Params::new(1.0, b, p, 1.0).unwrap();
                let k = KumaraswamyParams::new(p, b).unwrap();
                for x in grid(0.01, 0.99, 99) {
                    let (u, v) = (gb1_pdf(&g, x), kumaraswamy_pdf(&k, x));
                    assert!((u - v).abs() <= 1e-13 * v.max(1.0), "p={p} b={b} x={x}");
                }
            }
        }
        let uniform = Gb1Params::new(1.0, 1.0, 1.0, 1.0).unwrap();
        assert!(grid(0.0, 1.0, 21).all(|x| (gb1_pdf(&uniform, x) - 1.0).abs() < 1e-15));
        assert_eq!(gb1_pdf(&uniform, 1.5), 0.0);
        let scaled = Gb1Params::new(2.0, 3.0, 1.5, 4.0).unwrap();
        let mass = integrate(|x| gb1_pdf(&scaled, x), 0.0, 4.0, &spec).unwrap();
        assert!((mass.value - 1.0).abs() < 5e-9);
    }

    #[test]
    fn kumaraswamy_examples() {
        let id = KumaraswamyParams::new(1.0, 1.0).unwrap();
        let sq = KumaraswamyParams::new(2.0, 1.0).unwrap();
        for x in grid(0.0, 1.0, 11) {
            assert!((kumaraswamy_cdf(&id, x) - x).abs() < 1e-15);
            assert!((kumaraswamy_cdf(&sq, x) - x * x).abs() < 1e-15);
        }
        let k = KumaraswamyParams::new(2.0, 3.0).unwrap();
        assert!((kumaraswamy_cdf(&k, 0.5) - 0.578_125).abs() < 1e-15);
        let spec = QuadratureSpec::default();
        let area = integrate(|x| kumaraswamy_pdf(&k, x), 0.0, 0.5, &spec).unwrap();
        assert!((area.value - 0.578_125).abs() < 1e-12);
        let x = kumaraswamy_quantile(&k, 0.578_125).unwrap();
        assert!((x - 0.5).abs() < 1e-14);
    }

    #[test]
    fn generated_trivial_cases() {
        let bn = BetaGenerated::new(NormalBase::standard(), 1.0, 1.0).unwrap();
        let bhn = BetaGenerated::new(HalfNormalBase, 1.0, 1.0).unwrap();
        for x in grid(-6.0, 6.0, 49) {
            assert!((bn.pdf(x) - norm_pdf(x)).abs() < 1e-15);
            assert!((bn.cdf(x) - norm_cdf(x)).abs() < 1e-15);
            assert!((bn_pdf(1.0, 1.0, 0.0, 1.0, x).unwrap() - norm_pdf(x)).abs() < 1e-15);
            let half = if x > 0.0 { 2.0 * norm_pdf(x) } else { 0.0 };
            assert!((bhn.pdf(x) - half).abs() < 1e-15, "x={x}");
        }
        assert!(bn.cdf(-40.0) == 0.0 && bn.cdf(40.0) == 1.0);
        assert_eq!(bhn_pdf(2.0, 3.0, -1.0).unwrap(), 0.0);
        assert_eq!(bhn_pdf(2.0, 3.0, 0.0).unwrap(), 0.0);
        assert!(bn_pdf(1.0, 1.0, 0.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn bhn_matches_closed_form() {
        for &(a, b) in &SHAPES {
            for x in grid(0.05, 5.0, 34) {
                let closed = 2f64.powf(b) / ln_beta_unchecked(a, b).exp()
                    * norm_two_sided(x).powf(a - 1.0)
                    * norm_sf(x).powf(b - 1.0)
                    * norm_pdf(x);
                let v = bhn_pdf(a, b, x).unwrap();
                assert!((v - closed).abs() <= 1e-12 * closed, "a={a} b={b} x={x}");
            }
        }
    }

    #[test]
    fn bn_symmetric_when_shapes_equal() {
        for &a in &[0.25, 1.0, 3.0] {
            for x in grid(0.0, 8.0, 33) {
                let (l, r) = (bn_pdf(a, a, 0.0, 1.0, -x).unwrap(), bn_pdf(a, a, 0.0, 1.0, x).unwrap());
                assert!((l - r).abs() <= 1e-13 * l.max(1e-300), "a={a} x={x}");
            }
        }
    }

    #[test]
    fn densities_integrate_to_one() {
        let spec = QuadratureSpec::default();
        for &(a, b) in &SHAPES {
            let w = tail_window(a, b, spec.truncation);
            let bn = BetaGenerated::new(NormalBase::standard(), a, b).unwrap();
            let mass = integrate_with_breaks(|x| bn.pdf(x), -w, w, &[0.0], &spec).unwrap();
            assert!((mass.value - 1.0).abs() < 5e-9, "bn a={a} b={b} {}", mass.value);

            let bhn = BetaGenerated::new(HalfNormalBase, a, b).unwrap();
            let mass = integrate(|x| bhn.pdf(x), 0.0, w, &spec).unwrap();
            assert!((mass.value - 1.0).abs() < 5e-9, "bhn a={a} b={b} {}", mass.value);

            let sn = BetaGenerated::new(SkewNormalBase(SkewNormalParams::standard(2.0)), a, b).unwrap();
            let mass = integrate_with_breaks(|x| sn.pdf(x), -w, w, &[0.0], &spec).unwrap();
            assert!((mass.value - 1.0).abs() < 5e-9, "sn a={a} b={b} {}", mass.value);

            let beta = BetaParams::new(a, b).unwrap();
            let mass = crate::quadrature::integrate_unit_pair(
                |y, ymc| (power_term(a, y.ln()) + power_term(b, ymc.ln()) - ln_beta_unchecked(a, b)).exp(),
                &spec,
            )
            .unwrap();
            assert!((mass.value - 1.0).abs() < 5e-9, "beta a={a} b={b}");
            assert!(
                (beta_pdf(&beta, 0.3)
                    - (power_term(a, 0.3f64.ln()) + power_term(b, 0.7f64.ln()) - ln_beta_unchecked(a, b)).exp())
                .abs()
                    < 1e-13
            );
        }
    }

    #[test]
    fn cdf_is_antiderivative() {
        let h = 1e-5;
        for &(a, b) in &SHAPES {
            let bn = BetaGenerated::new(NormalBase::new(0.5, 2.0).unwrap(), a, b).unwrap();
            let sn = BetaGenerated::new(SkewNormalBase(SkewNormalParams::standard(-1.5)), a, b).unwrap();
            for x in grid(-3.0, 3.0, 25) {
                let fd = (bn.cdf(x + h) - bn.cdf(x - h)) / (2.0 * h);
                assert!((fd - bn.pdf(x)).abs() < 1e-6, "bn a={a} b={b} x={x}");
                let fd = (sn.cdf(x + h) - sn.cdf(x - h)) / (2.0 * h);
                assert!((fd - sn.pdf(x)).abs() < 1e-6, "sn a={a} b={b} x={x}");
            }
            let bhn = BetaGenerated::new(HalfNormalBase, a, b).unwrap();
            for x in grid(0.1, 4.0, 14) {
                let fd = (bhn.cdf(x + h) - bhn.cdf(x - h)) / (2.0 * h);
                assert!((fd - bhn.pdf(x)).abs() < 1e-6, "bhn a={a} b={b} x={x}");
            }
        }
    }

    #[test]
    fn generated_quantile_and_sampler() {
        for &(a, b) in &SHAPES {
            let bn = BetaGenerated::new(NormalBase::standard(), a, b).unwrap();
            let bhn = BetaGenerated::new(HalfNormalBase, a, b).unwrap();
            for &u in &[1e-10, 0.01, 0.3, 0.5, 0.9, 1.0 - 1e-8] {
                let x = bn.quantile(u).unwrap();
                assert!((bn.cdf(x) - u).abs() < 1e-10 * u.max(1e-2), "bn a={a} b={b} u={u}");
                let x = bhn.quantile(u).unwrap();
                assert!((bhn.cdf(x) - u).abs() < 1e-10 * u.max(1e-2), "bhn a={a} b={b} u={u}");
            }
        }
        let g = BetaGenerated::new(HalfNormalBase, 0.5, 2.0).unwrap();
        let batch = g.sample(100_000, 4).unwrap();
        assert!(ks_test(&batch.values, |x| g.cdf(x)).pass);
    }
}
