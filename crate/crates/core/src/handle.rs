//! A single value type covering every supported family.

use std::fmt;

use crate::beta_family::{
    beta_cdf, beta_pdf, gb1_pdf, kumaraswamy_cdf, kumaraswamy_pdf, kumaraswamy_quantile, tail_window, BetaGenerated,
    BetaParams, Gb1Params, HalfNormalBase, KumaraswamyParams, NormalBase,
};
use crate::bsn::{bsn_moments, BsnParams, MomentSummary};
use crate::error::{domain, Result};
use crate::quadrature::{integrate_unit, integrate_with_breaks, QuadratureSpec};
use crate::rng::{SampleBatch, Stream};
use crate::skew_family::{GbsnParams, SnbParams, TabulatedCdf, TbsnParams, WeightedNormal};
use crate::sn::{self, SkewNormalParams};
use crate::special::{inc_beta_pair, inv_inc_beta_pair, norm_cdf, norm_pdf, norm_quantile};

/// Family tag plus parameters; constants are resolved at construction.
#[derive(Debug, Clone)]
pub enum Family {
    Normal(NormalBase),
    Sn(SkewNormalParams),
    Snb(SnbParams, WeightedNormal),
    Gbsn(GbsnParams, WeightedNormal),
    Tbsn(TbsnParams, WeightedNormal),
    Beta(BetaParams),
    Gb1(Gb1Params),
    Kumaraswamy(KumaraswamyParams),
    Bn(BetaGenerated<NormalBase>),
    Bhn(BetaGenerated<HalfNormalBase>),
    Bsn(BsnParams),
}

/// An immutable, validated distribution together with the quadrature
/// settings used by its numerically defined operations.
#[derive(Debug, Clone)]
pub struct DistributionHandle {
    family: Family,
    spec: QuadratureSpec,
}

/// Draws single variates from a handle.
pub struct Sampler<'a> {
    handle: &'a DistributionHandle,
    table: Option<TabulatedCdf>,
}

impl Sampler<'_> {
    pub fn draw(&self, rng: &mut Stream) -> f64 {
        let h = self.handle;
        match &h.family {
            Family::Normal(p) => p.mu + p.sigma * rng.normal(),
            Family::Sn(p) => p.xi + p.psi * sn::draw_std(rng, p.lambda),
            Family::Snb(_, w) | Family::Gbsn(_, w) | Family::Tbsn(_, w) => {
                let t = self.table.as_ref().expect("table built for weighted families");
                w.mu + w.sigma * t.invert(rng.uniform())
            }
            _ => {
                let u = rng.uniform();
                h.quantile_pair(u, 1.0 - u)
            }
        }
    }
}

/// Repeated cdf evaluation; weighted families go through a precomputed table.
pub struct CdfEvaluator<'a> {
    handle: &'a DistributionHandle,
    table: Option<(TabulatedCdf, f64, f64)>,
}

impl CdfEvaluator<'_> {
    pub fn eval(&self, x: f64) -> f64 {
        match &self.table {
            Some((t, mu, sigma)) => t.eval((x - mu) / sigma),
            None => self.handle.cdf(x).unwrap_or(f64::NAN),
        }
    }
}

impl DistributionHandle {
    pub fn new(family: Family, spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { family, spec })
    }

    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::Normal(NormalBase::new(mu, sigma)?), QuadratureSpec::default())
    }

    pub fn sn(p: SkewNormalParams) -> Result<Self> {
        p.validate()?;
        Self::new(Family::Sn(p), QuadratureSpec::default())
    }

    pub fn snb(p: SnbParams, spec: QuadratureSpec) -> Result<Self> {
        let w = WeightedNormal::snb(&p, &spec)?;
        Self::new(Family::Snb(p, w), spec)
    }

    pub fn gbsn(p: GbsnParams, spec: QuadratureSpec) -> Result<Self> {
        let w = WeightedNormal::gbsn(&p, &spec)?;
        Self::new(Family::Gbsn(p, w), spec)
    }

    pub fn tbsn(p: TbsnParams, spec: QuadratureSpec) -> Result<Self> {
        let w = WeightedNormal::tbsn(&p, &spec)?;
        Self::new(Family::Tbsn(p, w), spec)
    }

    pub fn beta(p: BetaParams) -> Result<Self> {
        p.validate()?;
        Self::new(Family::Beta(p), QuadratureSpec::default())
    }

    pub fn gb1(p: Gb1Params) -> Result<Self> {
        p.validate()?;
        Self::new(Family::Gb1(p), QuadratureSpec::default())
    }

    pub fn kumaraswamy(p: KumaraswamyParams) -> Result<Self> {
        p.validate()?;
        Self::new(Family::Kumaraswamy(p), QuadratureSpec::default())
    }

    pub fn bn(a: f64, b: f64, mu: f64, sigma: f64) -> Result<Self> {
        let g = BetaGenerated::new(NormalBase::new(mu, sigma)?, a, b)?;
        Self::new(Family::Bn(g), QuadratureSpec::default())
    }

    pub fn bhn(a: f64, b: f64) -> Result<Self> {
        Self::new(
            Family::Bhn(BetaGenerated::new(HalfNormalBase, a, b)?),
            QuadratureSpec::default(),
        )
    }

    pub fn bsn(p: BsnParams) -> Result<Self> {
        p.validate()?;
        Self::new(Family::Bsn(p), QuadratureSpec::default())
    }

    /// Replaces the quadrature settings, recomputing any normalizing constant.
    pub fn with_spec(self, spec: QuadratureSpec) -> Result<Self> {
        match self.family {
            Family::Snb(p, _) => Self::snb(p, spec),
            Family::Gbsn(p, _) => Self::gbsn(p, spec),
            Family::Tbsn(p, _) => Self::tbsn(p, spec),
            family => Self::new(family, spec),
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Normal(_) => "normal",
            Family::Sn(_) => "sn",
            Family::Snb(..) => "snb",
            Family::Gbsn(..) => "gbsn",
            Family::Tbsn(..) => "tbsn",
            Family::Beta(_) => "beta",
            Family::Gb1(_) => "gb1",
            Family::Kumaraswamy(_) => "kumaraswamy",
            Family::Bn(_) => "bn",
            Family::Bhn(_) => "bhn",
            Family::Bsn(_) => "bsn",
        }
    }

    /// Re-checks parameter invariants.
    pub fn validate(&self) -> Result<()> {
        match &self.family {
            Family::Normal(p) => NormalBase::new(p.mu, p.sigma).map(|_| ()),
            Family::Sn(p) => p.validate(),
            Family::Snb(p, _) => WeightedNormal::snb(p, &self.spec).map(|_| ()),
            Family::Gbsn(p, _) => WeightedNormal::gbsn(p, &self.spec).map(|_| ()),
            Family::Tbsn(p, _) => WeightedNormal::tbsn(p, &self.spec).map(|_| ()),
            Family::Beta(p) => p.validate(),
            Family::Gb1(p) => p.validate(),
            Family::Kumaraswamy(p) => p.validate(),
            Family::Bn(g) => BetaGenerated::new(g.base, g.a, g.b).map(|_| ()),
            Family::Bhn(g) => BetaGenerated::new(g.base, g.a, g.b).map(|_| ()),
            Family::Bsn(p) => p.validate(),
        }?;
        self.spec.validate()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match &self.family {
            Family::Normal(p) => norm_pdf((x - p.mu) / p.sigma) / p.sigma,
            Family::Sn(p) => sn::sn_pdf(p, x),
            Family::Snb(_, w) | Family::Gbsn(_, w) | Family::Tbsn(_, w) => w.pdf(x),
            Family::Beta(p) => beta_pdf(p, x),
            Family::Gb1(p) => gb1_pdf(p, x),
            Family::Kumaraswamy(p) => kumaraswamy_pdf(p, x),
            Family::Bn(g) => g.pdf(x),
            Family::Bhn(g) => g.pdf(x),
            Family::Bsn(p) => crate::bsn::bsn_pdf(p, x),
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(match &self.family {
            Family::Normal(p) => norm_cdf((x - p.mu) / p.sigma),
            Family::Sn(p) => sn::sn_cdf(p, x),
            Family::Snb(_, w) | Family::Gbsn(_, w) | Family::Tbsn(_, w) => w.cdf(x, &self.spec)?,
            Family::Beta(p) => beta_cdf(p, x),
            Family::Gb1(p) => {
                if x <= 0.0 {
                    0.0
                } else if x >= p.q {
                    1.0
                } else {
                    let y = (x / p.q).powf(p.p);
                    inc_beta_pair(y, 1.0 - y, p.a, p.b).0
                }
            }
            Family::Kumaraswamy(p) => kumaraswamy_cdf(p, x),
            Family::Bn(g) => g.cdf(x),
            Family::Bhn(g) => g.cdf(x),
            Family::Bsn(p) => crate::bsn::bsn_cdf(p, x),
        })
    }

    /// Inverse cdf for `0 < u < 1`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if u.is_nan() || u <= 0.0 || u >= 1.0 {
            return Err(domain(format!("quantile requires 0 < q < 1 (got {u})")));
        }
        if let Family::Normal(p) = &self.family {
            return Ok(p.mu + p.sigma * norm_quantile(u)?);
        }
        if let Family::Snb(_, w) | Family::Gbsn(_, w) | Family::Tbsn(_, w) = &self.family {
            return w.quantile(u, &self.spec);
        }
        Ok(self.quantile_pair(u, 1.0 - u))
    }

    fn quantile_pair(&self, u: f64, v: f64) -> f64 {
        match &self.family {
            Family::Normal(p) => {
                use crate::beta_family::BaseDistribution;
                p.quantile_pair(u, v)
            }
            Family::Sn(p) => {
                let z = if u <= v {
                    sn::std_inverse(u, false, p.lambda)
                } else {
                    sn::std_inverse(v, true, p.lambda)
                };
                p.xi + p.psi * z
            }
            Family::Beta(p) => inv_inc_beta_pair(u, v, p.a, p.b).0,
            Family::Gb1(p) => p.q * inv_inc_beta_pair(u, v, p.a, p.b).0.powf(1.0 / p.p),
            Family::Kumaraswamy(p) => kumaraswamy_quantile(p, u).unwrap_or(f64::NAN),
            Family::Bn(g) => g.quantile_pair(u, v),
            Family::Bhn(g) => g.quantile_pair(u, v),
            Family::Bsn(p) => crate::bsn::bsn_quantile(p, u).unwrap_or(f64::NAN),
            Family::Snb(_, w) | Family::Gbsn(_, w) | Family::Tbsn(_, w) => {
                w.quantile(u, &self.spec).unwrap_or(f64::NAN)
            }
        }
    }

    pub fn cdf_evaluator(&self) -> CdfEvaluator<'_> {
        let table = match &self.family {
            Family::Snb(_, w) | Family::Gbsn(_, w) | Family::Tbsn(_, w) => Some((w.table(&self.spec), w.mu, w.sigma)),
            _ => None,
        };
        CdfEvaluator { handle: self, table }
    }

    pub fn sampler(&self) -> Sampler<'_> {
        let table = match &self.family {
            Family::Snb(_, w) | Family::Gbsn(_, w) | Family::Tbsn(_, w) => Some(w.table(&self.spec)),
            _ => None,
        };
        Sampler { handle: self, table }
    }

    /// `count` draws from one seeded stream.
    pub fn sample(&self, count: usize, seed: u64) -> Result<SampleBatch> {
        if count == 0 {
            return Err(domain("sample count must be >= 1"));
        }
        let sampler = self.sampler();
        let mut rng = Stream::new(seed);
        let values = (0..count).map(|_| sampler.draw(&mut rng)).collect();
        Ok(SampleBatch::new(seed, values))
    }

    /// `E[h(X)]` by quadrature over the support.
    pub fn expect<H: Fn(f64) -> f64>(&self, h: H) -> Result<f64> {
        let spec = &self.spec;
        // Nodes that round onto the closed end of the unit interval carry no mass.
        let unit = |f: &dyn Fn(f64) -> f64| integrate_unit(|y| if y < 1.0 { f(y) } else { 0.0 }, spec);
        Ok(match &self.family {
            Family::Beta(p) => unit(&|y| h(y) * beta_pdf(p, y))?.value,
            Family::Kumaraswamy(p) => unit(&|y| h(y) * kumaraswamy_pdf(p, y))?.value,
            Family::Gb1(p) => unit(&|y| h(p.q * y) * p.q * gb1_pdf(p, p.q * y))?.value,
            _ => {
                let (lo, hi, breaks) = self.support();
                let f = |x: f64| {
                    let d = self.pdf(x);
                    if d == 0.0 {
                        0.0
                    } else {
                        h(x) * d
                    }
                };
                integrate_with_breaks(f, lo, hi, &breaks, spec)?.value
            }
        })
    }

    /// Mean, standard deviation, skewness and non-excess kurtosis.
    pub fn moments(&self) -> Result<MomentSummary> {
        if let Family::Bsn(p) = &self.family {
            return bsn_moments(p, &self.spec);
        }
        let mean = self.expect(|x| x)?;
        let var = self.expect(|x| (x - mean).powi(2))?;
        let m3 = self.expect(|x| (x - mean).powi(3))?;
        let m4 = self.expect(|x| (x - mean).powi(4))?;
        let sd = var.sqrt();
        Ok(MomentSummary {
            mean,
            sd,
            skewness: m3 / (var * sd),
            kurtosis: m4 / (var * var),
        })
    }

    /// Finite interval carrying all but a negligible part of the mass, with
    /// interior points where integrands should be split.
    pub fn support(&self) -> (f64, f64, Vec<f64>) {
        let t = self.spec.truncation;
        match &self.family {
            Family::Normal(p) => (p.mu - t * p.sigma, p.mu + t * p.sigma, vec![p.mu]),
            Family::Sn(p) => (p.xi - t * p.psi, p.xi + t * p.psi, vec![p.xi]),
            Family::Snb(_, w) | Family::Gbsn(_, w) | Family::Tbsn(_, w) => {
                (w.mu - t * w.sigma, w.mu + t * w.sigma, vec![w.mu])
            }
            Family::Beta(_) | Family::Kumaraswamy(_) => (0.0, 1.0, vec![]),
            Family::Gb1(p) => (0.0, p.q, vec![]),
            Family::Bn(g) => {
                let w = g.base.sigma * tail_window(g.a, g.b, t);
                (g.base.mu - w, g.base.mu + w, vec![g.base.mu])
            }
            Family::Bhn(g) => (0.0, tail_window(g.a, g.b, t), vec![]),
            Family::Bsn(p) => {
                let w = p.sigma * tail_window(p.a, p.b, t);
                (p.mu - w, p.mu + w, vec![p.mu])
            }
        }
    }
}

impl fmt::Display for DistributionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Normal(p) => write!(f, "N({}, {})", p.mu, p.sigma),
            Family::Sn(p) => write!(f, "SN({}, {}, {})", p.xi, p.psi, p.lambda),
            Family::Snb(p, _) => write!(f, "SNB_{}({}, {}, {})", p.n, p.mu, p.sigma, p.lambda),
            Family::Gbsn(p, _) => write!(f, "GBSN_{{{},{}}}({})", p.n, p.m, p.lambda),
            Family::Tbsn(p, _) => write!(
                f,
                "TBSN_{{{},{}}}({}, {}, {}, {})",
                p.n, p.m, p.mu, p.sigma, p.lambda1, p.lambda2
            ),
            Family::Beta(p) => write!(f, "Beta({}, {})", p.a, p.b),
            Family::Gb1(p) => write!(f, "GB1({}, {}, {}, {})", p.a, p.b, p.p, p.q),
            Family::Kumaraswamy(p) => write!(f, "Kumaraswamy({}, {})", p.p, p.b),
            Family::Bn(g) => write!(f, "BN({}, {}, {}, {})", g.a, g.b, g.base.mu, g.base.sigma),
            Family::Bhn(g) => write!(f, "BHN({}, {})", g.a, g.b),
            Family::Bsn(p) => write!(f, "BSN({}, {}, {}, {}, {})", p.mu, p.sigma, p.lambda, p.a, p.b),
        }
    }
}
