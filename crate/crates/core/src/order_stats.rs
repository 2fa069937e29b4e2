//! Order-statistic mappings and their Monte Carlo oracle.
//!
//! Simulations are split into fixed blocks of trials; block `i` draws from
//! `Stream::substream(seed, i)`, so results do not depend on how many worker
//! threads process the blocks.

use rayon::prelude::*;
use serde::Serialize;

use crate::bsn::{bsn_ln_pdf, BsnParams};
use crate::error::{domain, Error, Result};
use crate::handle::{DistributionHandle, Family};
use crate::ks::{ks_test, KsReport};
use crate::quadrature::QuadratureSpec;
use crate::rng::Stream;
use crate::skew_family::{GbsnParams, SnbParams, TbsnParams};
use crate::sn::{self, max_log_second_difference};
use crate::special::{ln_beta_unchecked, ln_gamma};

/// Trials simulated per substream.
const BLOCK: usize = 4096;
/// Minimum number of simulated order statistics or conditional survivors.
pub const MIN_TRIALS: usize = 10_000;
/// Hard cap on conditioning proposals.
pub const MAX_PROPOSALS: u64 = 100_000_000;

const SUPPORTED: &str = "supported: SN(lambda) any rank; N(0,1) any rank; \
SNB_m(1) with rank = n; SNB_m(-1) with rank = 1";

/// The `rank`-th smallest of `sample_size` i.i.d. draws from `base`.
#[derive(Debug, Clone)]
pub struct OrderStatSpec {
    pub base: DistributionHandle,
    pub sample_size: u32,
    pub rank: u32,
}

impl OrderStatSpec {
    pub fn new(base: DistributionHandle, sample_size: u32, rank: u32) -> Result<Self> {
        let s = Self {
            base,
            sample_size,
            rank,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_size == 0 || self.rank == 0 || self.rank > self.sample_size {
            return Err(domain(format!(
                "order statistic needs 1 <= rank <= sample_size (got rank {} of {})",
                self.rank, self.sample_size
            )));
        }
        Ok(())
    }
}

fn unsupported(what: String) -> Error {
    Error::Unsupported(format!("{what}; {SUPPORTED}"))
}

/// Closed-form law of the order statistic.
pub fn analytic_order_stat(spec: &OrderStatSpec) -> Result<DistributionHandle> {
    spec.validate()?;
    let (n, j) = (spec.sample_size, spec.rank);
    let qspec = *spec.base.spec();
    match spec.base.family() {
        Family::Sn(p) => DistributionHandle::bsn(BsnParams::new(p.xi, p.psi, p.lambda, j as f64, (n - j + 1) as f64)?),
        Family::Normal(p) if p.mu == 0.0 && p.sigma == 1.0 => DistributionHandle::gbsn(
            GbsnParams {
                lambda: 1.0,
                n: j - 1,
                m: n - j,
            },
            qspec,
        ),
        Family::Snb(p, _) if p.lambda.abs() == 1.0 => {
            let wanted = if p.lambda > 0.0 { n } else { 1 };
            if j != wanted {
                return Err(unsupported(format!(
                    "rank {j} of {n} from SNB_{}({}) has no stated closed form",
                    p.n, p.lambda
                )));
            }
            let k = n * (p.n + 1) - 1;
            DistributionHandle::snb(SnbParams { n: k, ..*p }, qspec)
        }
        _ => Err(unsupported(format!(
            "no closed form for rank {j} of {n} from {}",
            spec.base
        ))),
    }
}

/// The normal-base mapping written as `TBSN_{j-1,n-j}(mu, sigma, 1, -1)`.
pub fn analytic_order_stat_tbsn(spec: &OrderStatSpec) -> Result<DistributionHandle> {
    spec.validate()?;
    let (n, j) = (spec.sample_size, spec.rank);
    match spec.base.family() {
        Family::Normal(p) => DistributionHandle::tbsn(
            TbsnParams {
                mu: p.mu,
                sigma: p.sigma,
                lambda1: 1.0,
                lambda2: -1.0,
                n: j - 1,
                m: n - j,
            },
            *spec.base.spec(),
        ),
        _ => Err(unsupported(format!(
            "TBSN form needs a normal base (got {})",
            spec.base
        ))),
    }
}

/// `n! / ((j-1)! (n-j)!) F^(j-1) (1-F)^(n-j) f`, evaluated from the base handle.
pub fn classical_order_stat_pdf(spec: &OrderStatSpec, x: f64) -> Result<f64> {
    spec.validate()?;
    let (n, j) = (spec.sample_size as f64, spec.rank as f64);
    let f = spec.base.pdf(x);
    if f == 0.0 {
        return Ok(0.0);
    }
    let cdf = spec.base.cdf(x)?;
    let ln_c = ln_gamma(n + 1.0) - ln_gamma(j) - ln_gamma(n - j + 1.0);
    let power = |v: f64, k: f64| if k == 0.0 { 0.0 } else { k * v.ln() };
    Ok((ln_c + power(cdf, j - 1.0) + power(1.0 - cdf, n - j)).exp() * f)
}

/// Largest `|analytic - classical|` over a 401-point grid spanning the base window.
pub fn order_stat_density_discrepancy(spec: &OrderStatSpec, mapped: &DistributionHandle) -> Result<f64> {
    let (lo, hi, _) = spec.base.support();
    let mut worst: f64 = 0.0;
    for x in sn::grid(lo, hi, 401) {
        let d = (mapped.pdf(x) - classical_order_stat_pdf(spec, x)?).abs();
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Simulates `trials` order statistics and compares them with the mapped law.
pub fn mc_order_stat_ks(spec: &OrderStatSpec, trials: usize, seed: u64) -> Result<KsReport> {
    let target = analytic_order_stat(spec)?;
    mc_order_stat_ks_against(spec, &target, trials, seed)
}

/// As [`mc_order_stat_ks`] with an explicit reference law.
pub fn mc_order_stat_ks_against(
    spec: &OrderStatSpec,
    target: &DistributionHandle,
    trials: usize,
    seed: u64,
) -> Result<KsReport> {
    let values = mc_order_stat_values(spec, trials, seed)?;
    let cdf = target.cdf_evaluator();
    Ok(ks_test(&values, |x| cdf.eval(x)))
}

/// `trials` simulated order statistics, in block order.
pub fn mc_order_stat_values(spec: &OrderStatSpec, trials: usize, seed: u64) -> Result<Vec<f64>> {
    spec.validate()?;
    if trials < MIN_TRIALS {
        return Err(domain(format!(
            "order-statistic simulation needs >= {MIN_TRIALS} trials (got {trials})"
        )));
    }
    let (n, j) = (spec.sample_size as usize, spec.rank as usize);
    let sampler = spec.base.sampler();
    let blocks = trials.div_ceil(BLOCK);
    Ok((0..blocks)
        .into_par_iter()
        .flat_map_iter(|block| {
            let mut rng = Stream::substream(seed, block as u64);
            let len = BLOCK.min(trials - block * BLOCK);
            let mut draws = vec![0.0; n];
            (0..len)
                .map(|_| {
                    for d in draws.iter_mut() {
                        *d = sampler.draw(&mut rng);
                    }
                    *draws.select_nth_unstable_by(j - 1, f64::total_cmp).1
                })
                .collect::<Vec<_>>()
        })
        .collect())
}

/// Conditioning event on an independent `SN(lambda)` sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConditioningEvent {
    /// `max(Y_1..Y_n) <= X`.
    Max { n: u32 },
    /// `min(Y_1..Y_n) >= X`.
    Min { n: u32 },
    /// `max(U_1..U_{n-1}) <= X <= min(V_1..V_{m-1})`.
    TwoSided { n: u32, m: u32 },
}

impl ConditioningEvent {
    /// Shape parameters of the conditional law starting from `(a, b)`.
    pub fn target_shapes(&self, a: f64, b: f64) -> (f64, f64) {
        match *self {
            Self::Max { n } => (a + n as f64, b),
            Self::Min { n } => (a, b + n as f64),
            Self::TwoSided { n, m } => (a + n as f64 - 1.0, b + m as f64 - 1.0),
        }
    }

    fn counts(&self) -> (u32, u32) {
        match *self {
            Self::Max { n } => (n, 0),
            Self::Min { n } => (0, n),
            Self::TwoSided { n, m } => (n - 1, m - 1),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Max { n } | Self::Min { n } => n >= 1,
            Self::TwoSided { n, m } => n >= 1 && m >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("invalid conditioning sizes {self:?}")))
        }
    }
}

/// KS comparison of the conditional survivors plus the event-probability check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditioningReport {
    pub event: ConditioningEvent,
    pub ks: KsReport,
    pub proposals: u64,
    pub accepted: u64,
    pub event_probability: f64,
    pub expected_probability: f64,
    pub standard_error: f64,
    pub probability_pass: bool,
}

impl ConditioningReport {
    pub fn pass(&self) -> bool {
        self.ks.pass && self.probability_pass
    }
}

/// Draws `X ~ BSN(lambda, a, b)` with an independent `SN(lambda)` sample,
/// keeps `X` on `event` and compares the survivors with the target BSN law.
/// Proposals run in rounds of parallel blocks until at least `trials`
/// survivors exist.
pub fn mc_conditioning_ks(
    a: f64,
    b: f64,
    lambda: f64,
    event: ConditioningEvent,
    trials: usize,
    seed: u64,
) -> Result<ConditioningReport> {
    event.validate()?;
    if trials < MIN_TRIALS {
        return Err(domain(format!(
            "conditioning simulation needs >= {MIN_TRIALS} survivors (got {trials})"
        )));
    }
    let x_handle = if a == 1.0 && b == 1.0 {
        DistributionHandle::sn(sn::SkewNormalParams::new(0.0, 1.0, lambda)?)?
    } else {
        DistributionHandle::bsn(BsnParams::standard(lambda, a, b)?)?
    };
    let (ta, tb) = event.target_shapes(a, b);
    let target = BsnParams::standard(lambda, ta, tb)?;
    let (below, above) = event.counts();
    let sampler = x_handle.sampler();

    const ROUND: usize = 64;
    let mut survivors: Vec<f64> = Vec::new();
    let mut proposals = 0u64;
    let mut next_block = 0u64;
    while survivors.len() < trials {
        if proposals >= MAX_PROPOSALS {
            return Err(Error::ResourceLimit(format!(
                "conditioning stopped after {proposals} proposals with {} of {trials} survivors",
                survivors.len()
            )));
        }
        let round: Vec<Vec<f64>> = (next_block..next_block + ROUND as u64)
            .into_par_iter()
            .map(|block| {
                let mut rng = Stream::substream(seed, block);
                let mut kept = Vec::new();
                for _ in 0..BLOCK {
                    let x = sampler.draw(&mut rng);
                    let mut ok = true;
                    for _ in 0..below {
                        ok &= sn::draw_std(&mut rng, lambda) <= x;
                    }
                    for _ in 0..above {
                        ok &= sn::draw_std(&mut rng, lambda) >= x;
                    }
                    if ok {
                        kept.push(x);
                    }
                }
                kept
            })
            .collect();
        next_block += ROUND as u64;
        proposals += (ROUND * BLOCK) as u64;
        survivors.extend(round.into_iter().flatten());
    }

    let ks = ks_test(&survivors, |x| crate::bsn::bsn_cdf(&target, x));
    let accepted = survivors.len() as u64;
    let event_probability = accepted as f64 / proposals as f64;
    let expected_probability = (ln_beta_unchecked(ta, tb) - ln_beta_unchecked(a, b)).exp();
    let standard_error = (expected_probability * (1.0 - expected_probability) / proposals as f64).sqrt();
    Ok(ConditioningReport {
        event,
        ks,
        proposals,
        accepted,
        event_probability,
        expected_probability,
        standard_error,
        probability_pass: (event_probability - expected_probability).abs() <= 3.0 * standard_error,
    })
}

/// Second-difference test of `ln g` for the `j`-th of `n` order statistics
/// from `SN(lambda)` on a 1601-point grid over `[-8, 8]`.
pub fn log_concavity_order_stat_check(lambda: f64, n: u32, j: u32) -> Result<bool> {
    if j == 0 || j > n {
        return Err(domain(format!("need 1 <= j <= n (got j {j}, n {n})")));
    }
    let p = BsnParams::standard(lambda, j as f64, (n - j + 1) as f64)?;
    Ok(max_log_second_difference(|x| bsn_ln_pdf(&p, x), -8.0, 8.0, 1601) <= 1e-8)
}

/// Tight quadrature for the brute-force density comparison.
pub fn comparison_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-14,
        rel_tol: 1e-13,
        ..QuadratureSpec::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sn::SkewNormalParams;

    fn sn_base(lambda: f64) -> DistributionHandle {
        DistributionHandle::sn(SkewNormalParams::standard(lambda)).unwrap()
    }

    fn snb_base(n: u32, lambda: f64) -> DistributionHandle {
        DistributionHandle::snb(
            SnbParams {
                mu: 0.0,
                sigma: 1.0,
                lambda,
                n,
            },
            comparison_spec(),
        )
        .unwrap()
    }

    #[test]
    fn mapping_examples() {
        let s = OrderStatSpec::new(sn_base(1.0), 5, 5).unwrap();
        assert_eq!(analytic_order_stat(&s).unwrap().to_string(), "BSN(0, 1, 1, 5, 1)");
        let s = OrderStatSpec::new(sn_base(-1.0), 4, 1).unwrap();
        assert_eq!(analytic_order_stat(&s).unwrap().to_string(), "BSN(0, 1, -1, 1, 4)");
        let s = OrderStatSpec::new(snb_base(1, 1.0), 3, 3).unwrap();
        assert_eq!(analytic_order_stat(&s).unwrap().to_string(), "SNB_5(0, 1, 1)");
        let s = OrderStatSpec::new(snb_base(2, -1.0), 3, 1).unwrap();
        assert_eq!(analytic_order_stat(&s).unwrap().to_string(), "SNB_8(0, 1, -1)");
        let s = OrderStatSpec::new(DistributionHandle::normal(0.0, 1.0).unwrap(), 5, 2).unwrap();
        assert_eq!(analytic_order_stat(&s).unwrap().to_string(), "GBSN_{1,3}(1)");
    }

    #[test]
    fn unsupported_cases() {
        let cases = [
            OrderStatSpec::new(snb_base(2, 1.0), 3, 2).unwrap(),
            OrderStatSpec::new(snb_base(2, 0.5), 3, 3).unwrap(),
            OrderStatSpec::new(DistributionHandle::normal(1.0, 2.0).unwrap(), 3, 2).unwrap(),
            OrderStatSpec::new(DistributionHandle::bhn(2.0, 2.0).unwrap(), 3, 2).unwrap(),
        ];
        for s in &cases {
            match analytic_order_stat(s) {
                Err(Error::Unsupported(msg)) => assert!(msg.contains("supported:"), "{msg}"),
                other => panic!("{other:?}"),
            }
        }
        assert!(OrderStatSpec::new(sn_base(0.0), 3, 4).is_err());
        assert!(OrderStatSpec::new(sn_base(0.0), 3, 0).is_err());
    }

    #[test]
    fn mapped_densities_match_classical_formula() {
        let mut specs = Vec::new();
        for &l in &[1.0, -1.0, 3.0, -0.5] {
            for j in 1..=5 {
                specs.push(OrderStatSpec::new(sn_base(l), 5, j).unwrap());
            }
        }
        let normal = DistributionHandle::normal(0.0, 1.0).unwrap();
        for j in 1..=4 {
            specs.push(OrderStatSpec::new(normal.clone(), 4, j).unwrap());
        }
        specs.push(OrderStatSpec::new(snb_base(2, 1.0), 3, 3).unwrap());
        specs.push(OrderStatSpec::new(snb_base(1, -1.0), 4, 1).unwrap());
        for s in &specs {
            let mapped = analytic_order_stat(s).unwrap().with_spec(comparison_spec()).unwrap();
            let d = order_stat_density_discrepancy(s, &mapped).unwrap();
            assert!(d < 1e-10, "{} rank {}: {d}", s.base, s.rank);
        }
        // The TBSN form of the normal mapping.
        for j in 1..=4 {
            let s = OrderStatSpec::new(normal.clone(), 4, j).unwrap();
            let t = analytic_order_stat_tbsn(&s)
                .unwrap()
                .with_spec(comparison_spec())
                .unwrap();
            assert!(order_stat_density_discrepancy(&s, &t).unwrap() < 1e-10);
        }
    }

    #[test]
    fn monte_carlo_examples() {
        let s = OrderStatSpec::new(sn_base(1.0), 5, 3).unwrap();
        let r = mc_order_stat_ks(&s, 100_000, 11).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r, mc_order_stat_ks(&s, 100_000, 11).unwrap());
        let s = OrderStatSpec::new(DistributionHandle::normal(0.0, 1.0).unwrap(), 5, 2).unwrap();
        assert!(mc_order_stat_ks(&s, 100_000, 12).unwrap().pass);
        let s = OrderStatSpec::new(snb_base(2, 1.0), 3, 3).unwrap();
        assert!(mc_order_stat_ks(&s, 100_000, 13).unwrap().pass);
        assert!(mc_order_stat_ks(&s, 9_999, 13).is_err());
    }

    #[test]
    fn conditioning_examples() {
        let r = mc_conditioning_ks(1.0, 1.0, 1.0, ConditioningEvent::Max { n: 2 }, 100_000, 5).unwrap();
        assert!(r.pass(), "{r:?}");
        assert!((r.expected_probability - 1.0 / 3.0).abs() < 1e-14);
        let r = mc_conditioning_ks(1.0, 1.0, 0.0, ConditioningEvent::TwoSided { n: 2, m: 2 }, 100_000, 6).unwrap();
        assert!(r.pass(), "{r:?}");
        let r = mc_conditioning_ks(1.0, 1.0, -2.0, ConditioningEvent::Min { n: 3 }, 20_000, 7).unwrap();
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn log_concavity_examples() {
        for j in 1..=5 {
            assert!(log_concavity_order_stat_check(1.0, 5, j).unwrap());
        }
        assert!(log_concavity_order_stat_check(0.0, 2, 1).unwrap());
        assert!(log_concavity_order_stat_check(-3.0, 7, 4).unwrap());
        assert!(log_concavity_order_stat_check(1.0, 3, 4).is_err());
    }
}
