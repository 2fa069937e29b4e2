//! Named invariant suites with a deterministic JSON report.
//!
//! Every check records the measured quantity, the threshold it is held to and
//! the comparison used. Stochastic checks derive their seeds from the suite
//! seed, so a report depends only on `(suite, seed, spec)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::beta_family::{
    beta_cdf, beta_pdf, beta_sample, bn_pdf, gb1_pdf, kumaraswamy_cdf, kumaraswamy_pdf, BetaParams, Gb1Params,
    KumaraswamyParams,
};
use crate::bsn::{
    bsn_bhn_limit_distance, bsn_cdf, bsn_mgf, bsn_mode_report, bsn_moment_recursion_check, bsn_moments, bsn_pdf,
    bsn_reflection_check, bsn_sample_inverse, bsn_sample_rejection, bsn_symmetry_check, kumaraswamy_transform,
    skewing_weight, BsnParams, KumaraswamyDirection,
};
use crate::error::{Error, Result};
use crate::handle::DistributionHandle;
use crate::ks::{ks_test, KsReport};
use crate::order_stats::{
    analytic_order_stat, analytic_order_stat_tbsn, comparison_spec, log_concavity_order_stat_check, mc_conditioning_ks,
    mc_order_stat_ks, mc_order_stat_ks_against, order_stat_density_discrepancy, ConditioningEvent, OrderStatSpec,
};
use crate::quadrature::{integrate_unit, QuadratureSpec};
use crate::rng::Stream;
use crate::skew_family::{
    gbsn_constant, snb_constant, snb_sample_order_stat, GbsnParams, SnbParams, TbsnParams, WeightedNormal,
};
use crate::sn::{self, grid, max_log_second_difference, SkewNormalParams};
use crate::special::{chisq1_cdf, inc_beta_pair, inv_inc_beta_pair, ln_gamma, norm_cdf, norm_pdf, owen_t};
use crate::table1::{compare_row, table1_rows};

/// Draws per sampler check.
pub const SAMPLER_DRAWS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Identities,
    Orderstats,
    Moments,
    Samplers,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = ["identities", "orderstats", "moments", "samplers", "all"];

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Identities, Suite::Orderstats, Suite::Moments, Suite::Samplers],
            s => vec![s],
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Orderstats => "orderstats",
            Suite::Moments => "moments",
            Suite::Samplers => "samplers",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "orderstats" => Ok(Suite::Orderstats),
            "moments" => Ok(Suite::Moments),
            "samplers" => Ok(Suite::Samplers),
            "all" => Ok(Suite::All),
            _ => Err(Error::Config(format!(
                "unknown suite '{s}' (expected one of {})",
                Suite::NAMES.join(", ")
            ))),
        }
    }
}

/// How `measured` is compared with `threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Less,
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = "==")]
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, relation: Relation, threshold: f64) -> Self {
        let pass = match relation {
            Relation::Less => measured < threshold,
            Relation::AtMost => measured <= threshold,
            Relation::Equal => measured == threshold,
        };
        Self {
            name: name.into(),
            measured,
            threshold,
            relation,
            pass,
        }
    }

    fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self::new(name, measured, Relation::AtMost, threshold)
    }

    fn ks(name: impl Into<String>, r: &KsReport) -> Self {
        Self::new(name, r.statistic, Relation::Less, r.critical_value)
    }

    fn flag(name: impl Into<String>, value: bool, expected: bool) -> Self {
        let f = |b: bool| if b { 1.0 } else { 0.0 };
        Self::new(name, f(value), Relation::Equal, f(expected))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub pass: bool,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs `suite`; an `Err` means a computation failed outright rather than a
/// check missing its threshold.
pub fn run_suite(suite: Suite, seed: u64, spec: &QuadratureSpec) -> Result<SuiteReport> {
    spec.validate()?;
    let mut checks = Vec::new();
    for part in suite.parts() {
        let seed = derive_seed(seed, part as u64);
        checks.extend(match part {
            Suite::Identities => identities(seed, spec)?,
            Suite::Orderstats => orderstats(seed)?,
            Suite::Moments => moments(spec)?,
            Suite::Samplers => samplers(seed)?,
            Suite::All => unreachable!(),
        });
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    Ok(SuiteReport {
        suite,
        seed,
        pass: failed == 0,
        passed: checks.len() - failed,
        failed,
        checks,
    })
}

/// Child seed via the SplitMix64 finalizer.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn max_over<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn grid401() -> impl Iterator<Item = f64> {
    grid(-6.0, 6.0, 401)
}

fn std_bsn(lambda: f64, a: f64, b: f64) -> BsnParams {
    BsnParams::standard(lambda, a, b).expect("fixed parameters are valid")
}

fn tbsn(l1: f64, l2: f64, n: u32, m: u32, spec: &QuadratureSpec) -> Result<WeightedNormal> {
    WeightedNormal::tbsn(
        &TbsnParams {
            mu: 0.0,
            sigma: 1.0,
            lambda1: l1,
            lambda2: l2,
            n,
            m,
        },
        spec,
    )
}

fn snb(lambda: f64, n: u32, spec: &QuadratureSpec) -> Result<WeightedNormal> {
    WeightedNormal::snb(
        &SnbParams {
            mu: 0.0,
            sigma: 1.0,
            lambda,
            n,
        },
        spec,
    )
}

const SIGNED: [f64; 9] = [0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 10.0, -10.0];

// ---------------------------------------------------------------------------
// identities
// ---------------------------------------------------------------------------

fn identities(seed: u64, spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    out.extend(special_checks());
    out.extend(family_identity_checks(spec)?);
    out.extend(constant_checks(spec)?);
    out.extend(shape_checks(seed, spec)?);
    out.extend(normalization_checks(spec)?);
    Ok(out)
}

fn special_checks() -> Vec<Check> {
    let zs: Vec<f64> = grid401().collect();
    let owen_a = [0.0, 0.3, 1.0, 2.5, 10.0];
    let mut odd: f64 = 0.0;
    let mut even: f64 = 0.0;
    for &z in &zs {
        for &a in &owen_a {
            odd = odd.max((owen_t(z, -a) + owen_t(z, a)).abs());
            even = even.max((owen_t(-z, a) - owen_t(z, a)).abs());
        }
    }
    let unit = max_over(
        zs.iter()
            .map(|&z| (2.0 * owen_t(z, 1.0) - norm_cdf(z) * norm_cdf(-z)).abs()),
    );

    let (mut pr1, mut pr2, mut pr3): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for &z in &zs {
        pr2 = pr2.max((sn::std_cdf(z, 1.0) - norm_cdf(z).powi(2)).abs());
        for &l in &SIGNED {
            pr1 = pr1.max((1.0 - sn::std_cdf(-z, l) - sn::std_cdf(z, -l)).abs());
            pr3 = pr3.max((sn::std_cdf(z, l) + sn::std_cdf(z, -l) - 2.0 * norm_cdf(z)).abs());
        }
    }

    let shapes = [0.1, 0.5, 1.0, 2.0, 10.0];
    let ps = [
        0.001, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 0.999,
    ];
    let (mut roundtrip, mut reflect): (f64, f64) = (0.0, 0.0);
    for &a in &shapes {
        for &b in &shapes {
            for &p in &ps {
                let (y, ymc) = inv_inc_beta_pair(p, 1.0 - p, a, b);
                roundtrip = roundtrip.max((inc_beta_pair(y, ymc, a, b).0 - p).abs());
                let lhs = inc_beta_pair(p, 1.0 - p, a, b).0;
                let rhs = 1.0 - inc_beta_pair(1.0 - p, p, b, a).0;
                reflect = reflect.max((lhs - rhs).abs());
            }
        }
    }
    vec![
        Check::at_most("owen_t_odd_in_a", odd, 1e-12),
        Check::at_most("owen_t_even_in_h", even, 1e-12),
        Check::at_most("owen_t_unit_slope", unit, 1e-12),
        Check::at_most("sn_cdf_reflection", pr1, 1e-12),
        Check::at_most("sn_cdf_lambda_one_is_phi_squared", pr2, 1e-12),
        Check::at_most("sn_cdf_pair_sums_to_twice_phi", pr3, 1e-12),
        Check::at_most("inc_beta_inverse_roundtrip", roundtrip, 1e-12),
        Check::at_most("inc_beta_reflection", reflect, 1e-13),
    ]
}

fn family_identity_checks(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let zs: Vec<f64> = grid401().collect();
    let mut out = Vec::new();
    let diff = |f: &dyn Fn(f64) -> f64, g: &dyn Fn(f64) -> f64| max_over(zs.iter().map(|&z| (f(z) - g(z)).abs()));

    let mut d: f64 = 0.0;
    for &l in &SIGNED {
        let p = std_bsn(l, 1.0, 1.0);
        d = d.max(diff(&|z| bsn_pdf(&p, z), &|z| sn::std_pdf(z, l)));
    }
    out.push(Check::at_most("bsn_unit_shapes_is_sn", d, 1e-12));

    let mut d: f64 = 0.0;
    for &(a, b) in &[(0.25, 0.25), (0.5, 2.0), (3.0, 1.5), (10.0, 1.0)] {
        let p = std_bsn(0.0, a, b);
        d = d.max(diff(&|z| bsn_pdf(&p, z), &|z| {
            bn_pdf(a, b, 0.0, 1.0, z).unwrap_or(f64::NAN)
        }));
    }
    out.push(Check::at_most("bsn_lambda_zero_is_bn", d, 1e-12));

    for (name, l, a, b) in [
        ("bsn_0_1_1_is_normal", 0.0, 1.0, 1.0),
        ("bsn_1_half_1_is_normal", 1.0, 0.5, 1.0),
        ("bsn_minus1_1_half_is_normal", -1.0, 1.0, 0.5),
    ] {
        let p = std_bsn(l, a, b);
        out.push(Check::at_most(name, diff(&|z| bsn_pdf(&p, z), &norm_pdf), 1e-12));
    }

    let mut d: f64 = 0.0;
    let mut rng = Stream::new(0x5eed);
    for _ in 0..20 {
        let l = 20.0 * rng.uniform() - 10.0;
        let a = 0.2 + 5.0 * rng.uniform();
        let b = 0.2 + 5.0 * rng.uniform();
        let (p, q) = (std_bsn(l, a, b), std_bsn(-l, b, a));
        d = d.max(diff(&|z| bsn_pdf(&p, -z), &|z| bsn_pdf(&q, z)));
    }
    out.push(Check::at_most("bsn_reflection_pointwise", d, 1e-12));

    // Two-factor family reductions.
    let ls = [0.0, 1.0, -1.0, 2.0, -2.0];
    let mut worst = [0.0f64; 5];
    for &l in &ls {
        let p1a = tbsn(l, 0.0, 1, 1, spec)?;
        let p1b = tbsn(0.0, l, 1, 1, spec)?;
        worst[0] = worst[0].max(diff(&|z| p1a.pdf(z), &|z| sn::std_pdf(z, l)));
        worst[0] = worst[0].max(diff(&|z| p1b.pdf(z), &|z| sn::std_pdf(z, l)));
        for n in 0..4u32 {
            for m in 0..4u32 {
                let p2 = tbsn(l, l, n, m, spec)?;
                let s2 = snb(l, n + m, spec)?;
                worst[1] = worst[1].max(diff(&|z| p2.pdf(z), &|z| s2.pdf(z)));
                let p3a = tbsn(l, 0.0, n, m, spec)?;
                let s3a = snb(l, n, spec)?;
                let p3b = tbsn(0.0, l, n, m, spec)?;
                let s3b = snb(l, m, spec)?;
                worst[2] = worst[2].max(diff(&|z| p3a.pdf(z), &|z| s3a.pdf(z)));
                worst[2] = worst[2].max(diff(&|z| p3b.pdf(z), &|z| s3b.pdf(z)));
                let p4 = tbsn(l, -l, n, m, spec)?;
                let g4 = WeightedNormal::gbsn(&GbsnParams { lambda: l, n, m }, spec)?;
                worst[3] = worst[3].max(diff(&|z| p4.pdf(z), &|z| g4.pdf(z)));
                let p5 = tbsn(l, -0.5 * l, 0, 0, spec)?;
                worst[4] = worst[4].max(diff(&|z| p5.pdf(z), &norm_pdf));
            }
        }
    }
    let names = [
        "tbsn_one_one_with_zero_slope_is_sn",
        "tbsn_equal_slopes_is_snb",
        "tbsn_zero_slope_is_snb",
        "tbsn_opposite_slopes_is_gbsn",
        "tbsn_zero_powers_is_normal",
    ];
    for (name, w) in names.iter().zip(worst) {
        out.push(Check::at_most(*name, w, 1e-10));
    }

    // Generalized beta reductions on (0, 1).
    let ys: Vec<f64> = grid(0.0025, 0.9975, 401).collect();
    let mut gb_beta: f64 = 0.0;
    let mut gb_kum: f64 = 0.0;
    for &(a, b) in &[(0.5, 0.5), (2.0, 3.0), (1.0, 7.0)] {
        let g = Gb1Params::new(a, b, 1.0, 1.0)?;
        let bp = BetaParams::new(a, b)?;
        gb_beta = gb_beta.max(max_over(ys.iter().map(|&y| (gb1_pdf(&g, y) - beta_pdf(&bp, y)).abs())));
        let g = Gb1Params::new(1.0, b, a + 0.5, 1.0)?;
        let k = KumaraswamyParams::new(a + 0.5, b)?;
        gb_kum = gb_kum.max(max_over(
            ys.iter().map(|&y| (gb1_pdf(&g, y) - kumaraswamy_pdf(&k, y)).abs()),
        ));
    }
    out.push(Check::at_most("gb1_unit_powers_is_beta", gb_beta, 1e-13));
    out.push(Check::at_most("gb1_unit_first_shape_is_kumaraswamy", gb_kum, 1e-13));

    // BSN members that coincide with two-factor densities.
    let mut ident = [0.0f64; 3];
    for n in 1..=4u32 {
        for m in 1..=4u32 {
            let (nf, mf) = (n as f64, m as f64);
            let p = std_bsn(1.0, nf, 1.0);
            let t = tbsn(1.0, 0.0, 2 * n - 1, m, spec)?;
            ident[0] = ident[0].max(diff(&|z| bsn_pdf(&p, z), &|z| t.pdf(z)));
            let p = std_bsn(-1.0, 1.0, mf);
            let t = tbsn(0.0, -1.0, n, 2 * m - 1, spec)?;
            ident[1] = ident[1].max(diff(&|z| bsn_pdf(&p, z), &|z| t.pdf(z)));
            let p = std_bsn(0.0, nf, mf);
            let t = tbsn(1.0, -1.0, n - 1, m - 1, spec)?;
            ident[2] = ident[2].max(diff(&|z| bsn_pdf(&p, z), &|z| t.pdf(z)));
        }
    }
    out.push(Check::at_most("bsn_max_form_is_tbsn", ident[0], 1e-10));
    out.push(Check::at_most("bsn_min_form_is_tbsn", ident[1], 1e-10));
    out.push(Check::at_most("bsn_integer_shapes_is_tbsn", ident[2], 1e-10));

    // Skewing-mechanism representation.
    let total = integrate_unit(|u| skewing_weight(u, 1.0, 2.0, 3.0).unwrap_or(f64::NAN), spec)?.value;
    out.push(Check::at_most("skewing_weight_integral", (total - 1.0).abs(), 1e-8));
    let p = std_bsn(1.0, 2.0, 3.0);
    let d = diff(
        &|y| norm_pdf(y) * skewing_weight(norm_cdf(y), 1.0, 2.0, 3.0).unwrap_or(f64::NAN),
        &|y| bsn_pdf(&p, y),
    );
    out.push(Check::at_most("skewing_representation", d, 1e-10));

    // Symmetry only at lambda = 0.
    out.push(Check::flag(
        "bn_equal_shapes_symmetric",
        bsn_symmetry_check(0.0, 0.7)?,
        true,
    ));
    out.push(Check::flag(
        "bsn_lambda_1_equal_shapes_asymmetric",
        bsn_symmetry_check(1.0, 1.0)?,
        false,
    ));
    out.push(Check::flag(
        "bsn_lambda_2_equal_shapes_asymmetric",
        bsn_symmetry_check(2.0, 0.5)?,
        false,
    ));
    Ok(out)
}

fn constant_checks(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let lambdas: Vec<f64> = grid(-5.0, 5.0, 41).collect();
    let mut c0: f64 = 0.0;
    let mut c1: f64 = 0.0;
    let mut c2: f64 = 0.0;
    for &l in &lambdas {
        c0 = c0.max((snb_constant(0, l, spec)? - 1.0).abs());
        c1 = c1.max((snb_constant(1, l, spec)? - 2.0).abs());
        let closed = PI / (1.0 + 2.0 * l * l).sqrt().atan();
        c2 = c2.max((snb_constant(2, l, spec)? - closed).abs());
    }
    let mut big: f64 = 0.0;
    for n in 1..=6u32 {
        for j in 1..=n {
            let exact = (ln_gamma(n as f64 + 1.0) - ln_gamma(j as f64) - ln_gamma((n - j + 1) as f64)).exp();
            big = big.max((gbsn_constant(j - 1, n - j, 1.0, spec)? - exact).abs());
        }
    }
    Ok(vec![
        Check::at_most("snb_constant_order_0", c0, 1e-9),
        Check::at_most("snb_constant_order_1", c1, 1e-9),
        Check::at_most("snb_constant_order_2_closed_form", c2, 1e-9),
        Check::at_most("gbsn_constant_order_statistic_multinomial", big, 1e-9),
    ])
}

fn shape_checks(seed: u64, spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut rng = Stream::new(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..20 {
        let l = 20.0 * rng.uniform() - 10.0;
        let a = 1.0 + 9.0 * rng.uniform();
        let b = 1.0 + 9.0 * rng.uniform();
        let p = std_bsn(l, a, b);
        worst = worst.max(max_log_second_difference(
            |x| crate::bsn::bsn_ln_pdf(&p, x),
            -8.0,
            8.0,
            1601,
        ));
    }
    let modes = bsn_mode_report(&std_bsn(0.0, 0.1, 0.1)).mode_count as f64;
    let unimodal = bsn_mode_report(&std_bsn(2.0, 3.0, 2.0)).mode_count as f64;
    let d50 = bsn_bhn_limit_distance(50.0, 1.0, 1.0, spec)?;
    let d200 = bsn_bhn_limit_distance(200.0, 1.0, 1.0, spec)?;
    let d23 = bsn_bhn_limit_distance(100.0, 2.0, 3.0, spec)?;
    Ok(vec![
        Check::at_most("log_concavity_random_shapes_at_least_one", worst, 1e-8),
        Check::new("small_shapes_mode_count", modes, Relation::Equal, 2.0),
        Check::new("large_shapes_mode_count", unimodal, Relation::Equal, 1.0),
        Check::new("half_normal_limit_lambda_50", d50, Relation::Less, 0.02),
        Check::new("half_normal_limit_decreasing", d200, Relation::Less, d50),
        Check::new("half_normal_limit_shapes_2_3", d23, Relation::Less, 0.02),
    ])
}

/// Parameter sets covering every family.
pub fn family_grid(spec: &QuadratureSpec) -> Result<Vec<DistributionHandle>> {
    let mut v = vec![
        DistributionHandle::normal(0.0, 1.0)?,
        DistributionHandle::normal(-2.0, 0.5)?,
    ];
    for &l in &[0.0, 1.0, -3.0, 10.0] {
        v.push(DistributionHandle::sn(SkewNormalParams::new(0.5, 2.0, l)?)?);
    }
    for &(l, n) in &[(1.0, 2), (-2.0, 5), (0.5, 0)] {
        v.push(DistributionHandle::snb(
            SnbParams {
                mu: 0.0,
                sigma: 1.0,
                lambda: l,
                n,
            },
            *spec,
        )?);
    }
    for &(l, n, m) in &[(1.0, 1, 3), (-2.0, 2, 2)] {
        v.push(DistributionHandle::gbsn(GbsnParams { lambda: l, n, m }, *spec)?);
    }
    v.push(DistributionHandle::tbsn(
        TbsnParams {
            mu: 1.0,
            sigma: 0.5,
            lambda1: 3.0,
            lambda2: -0.5,
            n: 2,
            m: 3,
        },
        *spec,
    )?);
    for &(a, b) in &[(0.5, 0.5), (2.0, 3.0), (0.3, 5.0)] {
        v.push(DistributionHandle::beta(BetaParams::new(a, b)?)?);
    }
    v.push(DistributionHandle::gb1(Gb1Params::new(2.0, 3.0, 1.5, 4.0)?)?);
    v.push(DistributionHandle::gb1(Gb1Params::new(0.7, 0.8, 0.5, 1.0)?)?);
    for &(p, b) in &[(2.0, 3.0), (0.5, 0.5)] {
        v.push(DistributionHandle::kumaraswamy(KumaraswamyParams::new(p, b)?)?);
    }
    v.push(DistributionHandle::bn(0.5, 2.0, 1.0, 2.0)?);
    v.push(DistributionHandle::bn(0.25, 0.25, 0.0, 1.0)?);
    v.push(DistributionHandle::bhn(2.0, 0.5)?);
    v.push(DistributionHandle::bhn(0.25, 10.0)?);
    for &(l, a, b) in &[
        (1.0, 2.0, 3.0),
        (-10.0, 0.25, 0.25),
        (10.0, 0.25, 0.5),
        (0.0, 0.5, 10.0),
        (0.0, 0.1, 0.1),
    ] {
        v.push(DistributionHandle::bsn(std_bsn(l, a, b))?);
    }
    v.push(DistributionHandle::bsn(BsnParams::new(1.0, 0.5, -4.0, 10.0, 1.0)?)?);
    v.into_iter().map(|h| h.with_spec(*spec)).collect()
}

/// Total mass of the handle's density.
pub fn total_mass(h: &DistributionHandle) -> Result<f64> {
    h.expect(|_| 1.0)
}

/// Largest `|F(Q(u)) - u|` over a fixed probability grid.
pub fn roundtrip_error(h: &DistributionHandle) -> Result<f64> {
    let us = [
        1e-4,
        0.001,
        0.01,
        0.05,
        0.1,
        0.25,
        0.5,
        0.75,
        0.9,
        0.95,
        0.99,
        0.999,
        1.0 - 1e-4,
    ];
    let mut worst: f64 = 0.0;
    for &u in &us {
        let x = h.quantile(u)?;
        worst = worst.max((h.cdf(x)? - u).abs());
    }
    Ok(worst)
}

fn normalization_checks(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let handles = family_grid(spec)?;
    let rows: Vec<Result<(String, f64, f64)>> = handles
        .par_iter()
        .map(|h| Ok((h.to_string(), total_mass(h)?, roundtrip_error(h)?)))
        .collect();
    let mut out = Vec::new();
    for row in rows {
        let (name, mass, rt) = row?;
        out.push(Check::at_most(format!("mass {name}"), (mass - 1.0).abs(), 5e-9));
        out.push(Check::at_most(format!("quantile roundtrip {name}"), rt, 1e-10));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// orderstats
// ---------------------------------------------------------------------------

/// Trials per order-statistic or conditioning simulation.
pub const ORDERSTAT_TRIALS: usize = 100_000;

fn orderstats(seed: u64) -> Result<Vec<Check>> {
    let cspec = comparison_spec();
    let sn_base = |l: f64| DistributionHandle::sn(SkewNormalParams::standard(l));
    let normal = DistributionHandle::normal(0.0, 1.0)?;
    let snb_base = |n: u32, l: f64| {
        DistributionHandle::snb(
            SnbParams {
                mu: 0.0,
                sigma: 1.0,
                lambda: l,
                n,
            },
            cspec,
        )
    };

    let cases: Vec<(&str, OrderStatSpec)> = vec![
        ("sn_1_rank_3_of_5", OrderStatSpec::new(sn_base(1.0)?, 5, 3)?),
        ("sn_1_max_of_5", OrderStatSpec::new(sn_base(1.0)?, 5, 5)?),
        ("sn_minus1_min_of_4", OrderStatSpec::new(sn_base(-1.0)?, 4, 1)?),
        ("sn_minus2_rank_2_of_6", OrderStatSpec::new(sn_base(-2.0)?, 6, 2)?),
        ("normal_rank_2_of_5_gbsn", OrderStatSpec::new(normal.clone(), 5, 2)?),
        ("snb_1_max_of_3", OrderStatSpec::new(snb_base(1, 1.0)?, 3, 3)?),
        ("snb_2_max_of_3", OrderStatSpec::new(snb_base(2, 1.0)?, 3, 3)?),
        ("snb_2_min_of_3", OrderStatSpec::new(snb_base(2, -1.0)?, 3, 1)?),
    ];
    let mut jobs: Vec<(String, Job)> = cases
        .iter()
        .enumerate()
        .map(|(i, (name, s))| {
            (
                format!("ks {name}"),
                Job::Order(s.clone(), None, derive_seed(seed, i as u64)),
            )
        })
        .collect();
    let tbsn_spec = OrderStatSpec::new(normal.clone(), 5, 2)?;
    let tbsn_target = analytic_order_stat_tbsn(&tbsn_spec)?;
    jobs.push((
        "ks normal_rank_2_of_5_tbsn".into(),
        Job::Order(tbsn_spec, Some(tbsn_target), derive_seed(seed, 100)),
    ));
    let conditioning = [
        ("max_2_lambda_1", 1.0, 1.0, 1.0, ConditioningEvent::Max { n: 2 }),
        ("min_3_lambda_minus2", 1.0, 1.0, -2.0, ConditioningEvent::Min { n: 3 }),
        ("max_2_shapes_2_1_5", 2.0, 1.5, -1.0, ConditioningEvent::Max { n: 2 }),
        (
            "two_sided_2_2_lambda_0",
            1.0,
            1.0,
            0.0,
            ConditioningEvent::TwoSided { n: 2, m: 2 },
        ),
        (
            "two_sided_3_2_lambda_3",
            1.0,
            1.0,
            3.0,
            ConditioningEvent::TwoSided { n: 3, m: 2 },
        ),
    ];
    for (i, &(name, a, b, l, ev)) in conditioning.iter().enumerate() {
        jobs.push((
            name.to_string(),
            Job::Condition(a, b, l, ev, derive_seed(seed, 200 + i as u64)),
        ));
    }

    let results: Vec<Result<Vec<Check>>> = jobs
        .par_iter()
        .map(|(name, job)| match job {
            Job::Order(s, target, seed) => {
                let r = match target {
                    Some(t) => mc_order_stat_ks_against(s, t, ORDERSTAT_TRIALS, *seed)?,
                    None => mc_order_stat_ks(s, ORDERSTAT_TRIALS, *seed)?,
                };
                Ok(vec![Check::ks(name.clone(), &r)])
            }
            Job::Condition(a, b, l, ev, seed) => {
                let r = mc_conditioning_ks(*a, *b, *l, *ev, ORDERSTAT_TRIALS, *seed)?;
                let z = (r.event_probability - r.expected_probability).abs() / r.standard_error;
                Ok(vec![
                    Check::ks(format!("conditioning ks {name}"), &r.ks),
                    Check::at_most(format!("conditioning probability {name} (standard errors)"), z, 3.0),
                ])
            }
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }

    // Closed-form densities against the classical formula.
    let mut brute: Vec<OrderStatSpec> = cases.iter().map(|(_, s)| s.clone()).collect();
    for &l in &[1.0, -1.0, 3.0, -0.5] {
        for j in 1..=5 {
            brute.push(OrderStatSpec::new(sn_base(l)?, 5, j)?);
        }
    }
    for j in 1..=4 {
        brute.push(OrderStatSpec::new(normal.clone(), 4, j)?);
    }
    let mut worst: f64 = 0.0;
    for s in &brute {
        let s = OrderStatSpec {
            base: s.base.clone().with_spec(cspec)?,
            ..s.clone()
        };
        let mapped = analytic_order_stat(&s)?.with_spec(cspec)?;
        worst = worst.max(order_stat_density_discrepancy(&s, &mapped)?);
    }
    out.push(Check::at_most("mapped_density_vs_classical_formula", worst, 1e-10));
    let mut worst: f64 = 0.0;
    for j in 1..=5 {
        let s = OrderStatSpec::new(normal.clone(), 5, j)?;
        let t = analytic_order_stat_tbsn(&s)?.with_spec(cspec)?;
        worst = worst.max(order_stat_density_discrepancy(&s, &t)?);
    }
    out.push(Check::at_most("tbsn_form_vs_classical_formula", worst, 1e-10));

    let mut all = true;
    for j in 1..=5 {
        all &= log_concavity_order_stat_check(1.0, 5, j)?;
    }
    all &= log_concavity_order_stat_check(0.0, 2, 1)?;
    all &= log_concavity_order_stat_check(-3.0, 7, 4)?;
    out.push(Check::flag("order_statistic_log_concavity", all, true));
    Ok(out)
}

#[allow(clippy::large_enum_variant)] // a handful of short-lived jobs
enum Job {
    Order(OrderStatSpec, Option<DistributionHandle>, u64),
    Condition(f64, f64, f64, ConditioningEvent, u64),
}

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

fn moments(spec: &QuadratureSpec) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut grid_params = Vec::new();
    for &l in &[0.0, 1.0, -1.0] {
        for &a in &[2.0, 3.0] {
            for &b in &[2.0, 3.0] {
                for k in 2..=4u32 {
                    grid_params.push((l, a, b, k));
                }
            }
        }
    }
    let discrepancies: Vec<Result<f64>> = grid_params
        .par_iter()
        .map(|&(l, a, b, k)| bsn_moment_recursion_check(&std_bsn(l, a, b), k, spec))
        .collect();
    let mut worst: f64 = 0.0;
    for d in discrepancies {
        worst = worst.max(d?);
    }
    out.push(Check::at_most("moment_recursion", worst, 1e-6));

    let mut mgf0: f64 = 0.0;
    let mut mgf_mean: f64 = 0.0;
    for &(l, a, b) in &[(1.0, 2.0, 3.0), (-1.0, 0.5, 0.5), (3.0, 0.25, 1.0)] {
        let p = std_bsn(l, a, b);
        mgf0 = mgf0.max((bsn_mgf(&p, 0.0, spec)? - 1.0).abs());
        let h = 1e-4;
        let slope = (bsn_mgf(&p, h, spec)? - bsn_mgf(&p, -h, spec)?) / (2.0 * h);
        mgf_mean = mgf_mean.max((slope - bsn_moments(&p, spec)?.mean).abs());
    }
    let n = std_bsn(0.0, 1.0, 1.0);
    let mut mgf_normal: f64 = 0.0;
    for &t in &[-2.0, 0.5, 3.0] {
        let exact = (0.5f64 * t * t).exp();
        mgf_normal = mgf_normal.max(((bsn_mgf(&n, t, spec)? - exact) / exact).abs());
    }
    out.push(Check::at_most("mgf_at_zero", mgf0, 1e-9));
    out.push(Check::at_most("mgf_slope_is_mean", mgf_mean, 1e-5));
    out.push(Check::at_most("mgf_normal_relative", mgf_normal, 1e-9));

    let mut all = true;
    for p in [
        std_bsn(0.0, 2.0, 2.0),
        std_bsn(1.0, 2.0, 3.0),
        BsnParams::new(0.5, 2.0, -3.0, 0.5, 4.0)?,
    ] {
        all &= bsn_reflection_check(&p, spec)?;
    }
    out.push(Check::flag("reflection_density_and_moments", all, true));

    // Published moment rows with both shapes at least one.
    let rows: Vec<_> = table1_rows().into_iter().filter(|r| r.a >= 1.0 && r.b >= 1.0).collect();
    let compared: Vec<Result<_>> = rows.par_iter().map(|r| compare_row(r, spec)).collect();
    for c in compared {
        let c = c?;
        out.push(Check::at_most(
            format!("published moments a={} b={} lambda={}", c.a, c.b, c.lambda),
            c.max_deviation(),
            c.tolerance,
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// samplers
// ---------------------------------------------------------------------------

fn samplers(seed: u64) -> Result<Vec<Check>> {
    let n = SAMPLER_DRAWS;
    let s = |i: u64| derive_seed(seed, i);
    let jobs: Vec<u64> = (0..12).collect();
    let results: Vec<Result<Vec<Check>>> = jobs.par_iter().map(|&i| sampler_job(i, n, s(i))).collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn sampler_job(i: u64, n: usize, seed: u64) -> Result<Vec<Check>> {
    let values = |b: &crate::rng::SampleBatch| b.values.clone();
    Ok(match i {
        0 => {
            let p = std_bsn(1.0, 2.0, 3.0);
            let xs = values(&bsn_sample_inverse(&p, n, seed)?);
            let beta = BetaParams::new(2.0, 3.0)?;
            let flipped = BetaParams::new(3.0, 2.0)?;
            let ys: Vec<f64> = xs.iter().map(|&x| sn::std_cdf(x, 1.0)).collect();
            let ws: Vec<f64> = xs.iter().map(|&x| sn::std_sf(x, 1.0)).collect();
            vec![
                Check::ks("bsn_inverse_sampler", &ks_test(&xs, |x| bsn_cdf(&p, x))),
                Check::ks("sn_cdf_of_bsn_is_beta", &ks_test(&ys, |y| beta_cdf(&beta, y))),
                Check::ks("sn_sf_of_bsn_is_flipped_beta", &ks_test(&ws, |y| beta_cdf(&flipped, y))),
            ]
        }
        1 => {
            let (batch, stats) = bsn_sample_rejection(1.0, 5, n, seed)?;
            let target = std_bsn(1.0, 5.0, 1.0);
            let se = (0.2 * 0.8 / stats.proposals as f64).sqrt();
            vec![
                Check::ks(
                    "bsn_rejection_sampler",
                    &ks_test(&batch.values, |x| bsn_cdf(&target, x)),
                ),
                Check::at_most(
                    "bsn_rejection_acceptance_rate (standard errors)",
                    (stats.acceptance_rate - 0.2).abs() / se,
                    3.0,
                ),
            ]
        }
        2 => {
            let p = SkewNormalParams::new(0.0, 1.0, 3.0)?;
            let xs = values(&sn::sn_sample(&p, n, seed)?);
            let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
            vec![
                Check::ks("sn_sampler", &ks_test(&xs, |x| sn::sn_cdf(&p, x))),
                Check::ks(
                    "sn_square_is_chi_square_1",
                    &ks_test(&sq, |x| chisq1_cdf(x.max(0.0)).unwrap_or(f64::NAN)),
                ),
            ]
        }
        3 => {
            let p = SkewNormalParams::new(1.0, 2.0, -10.0)?;
            let xs = values(&sn::sn_sample(&p, n, seed)?);
            vec![Check::ks("sn_sampler_shifted", &ks_test(&xs, |x| sn::sn_cdf(&p, x)))]
        }
        4 => {
            let p = std_bsn(1.5, 1.0, 3.0);
            let xs = values(&bsn_sample_inverse(&p, n, seed)?);
            let k = KumaraswamyParams::new(2.0, 3.0)?;
            let ys = xs
                .iter()
                .map(|&x| kumaraswamy_transform(&p, KumaraswamyDirection::Lower, 2.0, x))
                .collect::<Result<Vec<f64>>>()?;
            vec![Check::ks(
                "kumaraswamy_lower_transform",
                &ks_test(&ys, |y| kumaraswamy_cdf(&k, y)),
            )]
        }
        5 => {
            let p = std_bsn(-0.5, 2.5, 1.0);
            let xs = values(&bsn_sample_inverse(&p, n, seed)?);
            let k = KumaraswamyParams::new(0.7, 2.5)?;
            let ys = xs
                .iter()
                .map(|&x| kumaraswamy_transform(&p, KumaraswamyDirection::Upper, 0.7, x))
                .collect::<Result<Vec<f64>>>()?;
            vec![Check::ks(
                "kumaraswamy_upper_transform",
                &ks_test(&ys, |y| kumaraswamy_cdf(&k, y)),
            )]
        }
        6 => {
            let p = std_bsn(0.8, 1.0, 1.0);
            let xs = values(&bsn_sample_inverse(&p, n, seed)?);
            let ys = xs
                .iter()
                .map(|&x| kumaraswamy_transform(&p, KumaraswamyDirection::Lower, 1.0, x))
                .collect::<Result<Vec<f64>>>()?;
            vec![Check::ks(
                "probability_integral_transform_uniform",
                &ks_test(&ys, |y| y),
            )]
        }
        7 => {
            let b = BetaParams::new(2.0, 3.0)?;
            let xs = values(&beta_sample(&b, n, seed)?);
            vec![Check::ks("beta_sampler", &ks_test(&xs, |y| beta_cdf(&b, y)))]
        }
        8 => {
            let p = SnbParams {
                mu: 0.0,
                sigma: 1.0,
                lambda: 1.0,
                n: 4,
            };
            let d = DistributionHandle::snb(p, QuadratureSpec::default())?;
            let cdf = d.cdf_evaluator();
            let xs = values(&snb_sample_order_stat(&p, n, seed)?);
            vec![Check::ks("snb_maximum_sampler", &ks_test(&xs, |x| cdf.eval(x)))]
        }
        9 => {
            let d = DistributionHandle::gbsn(
                GbsnParams {
                    lambda: -2.0,
                    n: 2,
                    m: 1,
                },
                QuadratureSpec::default(),
            )?;
            let cdf = d.cdf_evaluator();
            let xs = values(&d.sample(n, seed)?);
            vec![Check::ks("gbsn_table_sampler", &ks_test(&xs, |x| cdf.eval(x)))]
        }
        10 => {
            let p = std_bsn(-3.0, 0.25, 0.5);
            let xs = values(&bsn_sample_inverse(&p, n, seed)?);
            vec![Check::ks(
                "bsn_inverse_sampler_small_shapes",
                &ks_test(&xs, |x| bsn_cdf(&p, x)),
            )]
        }
        11 => {
            let d = DistributionHandle::bhn(2.0, 0.5)?;
            let xs = values(&d.sample(n, seed)?);
            vec![Check::ks(
                "bhn_sampler",
                &ks_test(&xs, |x| d.cdf(x).unwrap_or(f64::NAN)),
            )]
        }
        _ => unreachable!(),
    })
}
