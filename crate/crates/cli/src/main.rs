//! `skewbeta`: evaluate, tabulate, sample and verify the distribution families.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage or parameter error,
//! 3 numerical failure.

use std::fmt::Write as _;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use skewbeta::beta_family::{BetaParams, Gb1Params, KumaraswamyParams};
use skewbeta::bsn::{bsn_sample_rejection, BsnParams};
use skewbeta::error::Error;
use skewbeta::handle::{DistributionHandle, Family};
use skewbeta::quadrature::QuadratureSpec;
use skewbeta::skew_family::{GbsnParams, SnbParams, TbsnParams};
use skewbeta::sn::SkewNormalParams;
use skewbeta::table1::table1_compare;
use skewbeta::verify::{run_suite, Suite};

#[derive(Parser)]
#[command(name = "skewbeta", version, about = "Beta skew-normal and related distributions")]
struct Cli {
    /// key=value file overriding the quadrature settings
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Seed for stochastic commands
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the pdf, cdf or quantile at one point
    Eval {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, allow_negative_numbers = true)]
        at: f64,
    },
    /// Tabulate x, pdf and cdf on an even grid
    Grid {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 401)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Draw a reproducible sample
    Sample {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Method::Inverse)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Mean, standard deviation, skewness and kurtosis as JSON
    Moments {
        #[command(flatten)]
        dist: DistArgs,
    },
    /// Recompute the published BSN moment grid
    Table1 {
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run a verification suite and print a JSON report
    Check {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Pdf,
    Cdf,
    Quantile,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Inverse,
    Rejection,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyName {
    Normal,
    Sn,
    Snb,
    Gbsn,
    Tbsn,
    Beta,
    Gb1,
    Kumaraswamy,
    Bn,
    Bhn,
    Bsn,
}

#[derive(Args)]
struct DistArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    sigma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Integration { .. } | Error::ResourceLimit(_) => 3,
            Error::Domain(_) | Error::Unsupported(_) | Error::Config(_) => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 3,
            message: format!("output error: {e}"),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type CliResult<T> = Result<T, Failure>;

impl DistArgs {
    fn handle(&self, spec: QuadratureSpec) -> CliResult<DistributionHandle> {
        use FamilyName as F;
        let allowed: &[&str] = match self.family {
            F::Normal => &["mu", "sigma"],
            F::Sn => &["mu", "sigma", "lambda"],
            F::Snb => &["mu", "sigma", "lambda", "n"],
            F::Gbsn => &["lambda", "n", "m"],
            F::Tbsn => &["mu", "sigma", "lambda1", "lambda2", "n", "m"],
            F::Beta => &["a", "b"],
            F::Gb1 => &["a", "b", "p", "q"],
            F::Kumaraswamy => &["p", "b"],
            F::Bn => &["mu", "sigma", "a", "b"],
            F::Bhn => &["a", "b"],
            F::Bsn => &["mu", "sigma", "lambda", "a", "b"],
        };
        let given = [
            ("mu", self.mu.is_some()),
            ("sigma", self.sigma.is_some()),
            ("lambda", self.lambda.is_some()),
            ("lambda1", self.lambda1.is_some()),
            ("lambda2", self.lambda2.is_some()),
            ("a", self.a.is_some()),
            ("b", self.b.is_some()),
            ("p", self.p.is_some()),
            ("q", self.q.is_some()),
            ("n", self.n.is_some()),
            ("m", self.m.is_some()),
        ];
        let name = self.family.to_possible_value().expect("named").get_name().to_string();
        for (flag, set) in given {
            if set && !allowed.contains(&flag) {
                return Err(usage(format!("--{flag} is not a parameter of family {name}")));
            }
        }
        let need = |flag: &str, v: Option<f64>| v.ok_or_else(|| usage(format!("family {name} requires --{flag}")));
        let need_int = |flag: &str, v: Option<u32>| v.ok_or_else(|| usage(format!("family {name} requires --{flag}")));
        let mu = self.mu.unwrap_or(0.0);
        let sigma = self.sigma.unwrap_or(1.0);
        let h = match self.family {
            F::Normal => DistributionHandle::normal(mu, sigma)?,
            F::Sn => DistributionHandle::sn(SkewNormalParams::new(mu, sigma, need("lambda", self.lambda)?)?)?,
            F::Snb => DistributionHandle::snb(
                SnbParams {
                    mu,
                    sigma,
                    lambda: need("lambda", self.lambda)?,
                    n: need_int("n", self.n)?,
                },
                spec,
            )?,
            F::Gbsn => DistributionHandle::gbsn(
                GbsnParams {
                    lambda: need("lambda", self.lambda)?,
                    n: need_int("n", self.n)?,
                    m: need_int("m", self.m)?,
                },
                spec,
            )?,
            F::Tbsn => DistributionHandle::tbsn(
                TbsnParams {
                    mu,
                    sigma,
                    lambda1: need("lambda1", self.lambda1)?,
                    lambda2: need("lambda2", self.lambda2)?,
                    n: need_int("n", self.n)?,
                    m: need_int("m", self.m)?,
                },
                spec,
            )?,
            F::Beta => DistributionHandle::beta(BetaParams::new(need("a", self.a)?, need("b", self.b)?)?)?,
            F::Gb1 => DistributionHandle::gb1(Gb1Params::new(
                need("a", self.a)?,
                need("b", self.b)?,
                need("p", self.p)?,
                need("q", self.q)?,
            )?)?,
            F::Kumaraswamy => {
                DistributionHandle::kumaraswamy(KumaraswamyParams::new(need("p", self.p)?, need("b", self.b)?)?)?
            }
            F::Bn => DistributionHandle::bn(need("a", self.a)?, need("b", self.b)?, mu, sigma)?,
            F::Bhn => DistributionHandle::bhn(need("a", self.a)?, need("b", self.b)?)?,
            F::Bsn => DistributionHandle::bsn(BsnParams::new(
                mu,
                sigma,
                need("lambda", self.lambda)?,
                need("a", self.a)?,
                need("b", self.b)?,
            )?)?,
        };
        Ok(h.with_spec(spec)?)
    }
}

/// Twelve significant digits in the style of C's `%.12g`.
fn g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// JSON number text; non-finite values become `null`.
fn json_num(x: f64) -> String {
    if x.is_finite() {
        g12(x)
    } else {
        "null".into()
    }
}

fn load_spec(path: Option<&PathBuf>) -> CliResult<QuadratureSpec> {
    match path {
        None => Ok(QuadratureSpec::default()),
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| usage(format!("cannot read config {}: {e}", p.display())))?;
            Ok(QuadratureSpec::from_config_str(&text)?)
        }
    }
}

fn run(cli: Cli, out: &mut impl Write) -> CliResult<u8> {
    let spec = load_spec(cli.config.as_ref())?;
    match cli.command {
        Command::Eval { dist, what, at } => {
            let h = dist.handle(spec)?;
            if !at.is_finite() {
                return Err(usage("--at must be finite"));
            }
            let v = match what {
                What::Pdf => h.pdf(at),
                What::Cdf => h.cdf(at)?,
                What::Quantile => h.quantile(at)?,
            };
            writeln!(out, "{}", g12(v))?;
        }
        Command::Grid {
            dist,
            from,
            to,
            points,
            format,
        } => {
            let h = dist.handle(spec)?;
            if !(from.is_finite() && to.is_finite() && from < to) {
                return Err(usage(format!("grid needs finite --from < --to (got {from}, {to})")));
            }
            if points < 2 {
                return Err(usage(format!("grid needs --points >= 2 (got {points})")));
            }
            let step = (to - from) / (points - 1) as f64;
            let mut text = String::new();
            if format == Format::Csv {
                text.push_str("x,pdf,cdf\n");
            }
            for i in 0..points {
                let x = if i == points - 1 { to } else { from + step * i as f64 };
                let (pdf, cdf) = (h.pdf(x), h.cdf(x)?);
                match format {
                    Format::Csv => writeln!(text, "{},{},{}", g12(x), g12(pdf), g12(cdf)),
                    Format::Json => writeln!(
                        text,
                        "{{\"x\":{},\"pdf\":{},\"cdf\":{}}}",
                        json_num(x),
                        json_num(pdf),
                        json_num(cdf)
                    ),
                }
                .expect("string write");
            }
            out.write_all(text.as_bytes())?;
        }
        Command::Sample {
            dist,
            count,
            method,
            format,
        } => {
            let h = dist.handle(spec)?;
            if count == 0 {
                return Err(usage("--count must be >= 1"));
            }
            let values = match method {
                Method::Inverse => h.sample(count, cli.seed)?.values,
                Method::Rejection => {
                    let p = match h.family() {
                        Family::Bsn(p) if p.b == 1.0 && p.a >= 1.0 && p.a.fract() == 0.0 && p.a <= u32::MAX as f64 => {
                            *p
                        }
                        _ => {
                            return Err(usage(format!(
                                "rejection sampling needs family bsn with integer --a >= 1 and --b 1 (got {h})"
                            )))
                        }
                    };
                    let (batch, stats) = bsn_sample_rejection(p.lambda, p.a as u32, count, cli.seed)?;
                    eprintln!(
                        "proposals {} accepted {} acceptance rate {}",
                        stats.proposals,
                        stats.accepted,
                        g12(stats.acceptance_rate)
                    );
                    batch.values.iter().map(|t| p.mu + p.sigma * t).collect()
                }
            };
            let mut text = String::new();
            if format == Format::Csv {
                text.push_str("value\n");
            }
            for v in values {
                match format {
                    Format::Csv => writeln!(text, "{}", g12(v)),
                    Format::Json => writeln!(text, "{{\"value\":{}}}", json_num(v)),
                }
                .expect("string write");
            }
            out.write_all(text.as_bytes())?;
        }
        Command::Moments { dist } => {
            let m = dist.handle(spec)?.moments()?;
            let fields = [
                ("mean", m.mean),
                ("sd", m.sd),
                ("skewness", m.skewness),
                ("kurtosis", m.kurtosis),
            ];
            if fields.iter().any(|(_, v)| !v.is_finite()) {
                return Err(Failure {
                    code: 3,
                    message: "moments are not finite".into(),
                });
            }
            let body: Vec<String> = fields
                .iter()
                .map(|(k, v)| format!("\"{k}\":{}", json_num(*v)))
                .collect();
            writeln!(out, "{{{}}}", body.join(","))?;
        }
        Command::Table1 { format } => {
            let rows = table1_compare(&spec)?;
            let within = rows.iter().filter(|r| r.pass).count();
            let mut text = String::new();
            if format == Format::Csv {
                text.push_str(
                    "a,b,lambda,mean,sd,skewness,kurtosis,\
                     published_mean,published_sd,published_skewness,published_kurtosis,\
                     dev_mean,dev_sd,dev_skewness,dev_kurtosis,tolerance,within_tolerance\n",
                );
            }
            for r in &rows {
                let c = [r.computed.mean, r.computed.sd, r.computed.skewness, r.computed.kurtosis];
                let p = [
                    r.published.mean,
                    r.published.sd,
                    r.published.skewness,
                    r.published.kurtosis,
                ];
                match format {
                    Format::Csv => {
                        let mut cells = vec![g12(r.a), g12(r.b), g12(r.lambda)];
                        cells.extend(c.iter().chain(&p).chain(&r.deviation).map(|&v| g12(v)));
                        cells.push(g12(r.tolerance));
                        cells.push(r.pass.to_string());
                        writeln!(text, "{}", cells.join(","))
                    }
                    Format::Json => {
                        let obj = |names: [&str; 4], vals: &[f64; 4]| {
                            let parts: Vec<String> =
                                names.iter().zip(vals).map(|(k, v)| format!("\"{k}\":{}", json_num(*v))).collect();
                            format!("{{{}}}", parts.join(","))
                        };
                        let names = ["mean", "sd", "skewness", "kurtosis"];
                        writeln!(
                            text,
                            "{{\"a\":{},\"b\":{},\"lambda\":{},\"computed\":{},\"published\":{},\"deviation\":{},\"tolerance\":{},\"within_tolerance\":{}}}",
                            json_num(r.a),
                            json_num(r.b),
                            json_num(r.lambda),
                            obj(names, &c),
                            obj(names, &p),
                            obj(names, &r.deviation),
                            json_num(r.tolerance),
                            r.pass
                        )
                    }
                }
                .expect("string write");
            }
            out.write_all(text.as_bytes())?;
            eprintln!("{within} of {} rows within tolerance", rows.len());
        }
        Command::Check { suite } => {
            let suite: Suite = suite.parse()?;
            let report = run_suite(suite, cli.seed, &spec)?;
            writeln!(out, "{}", report.to_json())?;
            if !report.pass {
                for c in report.checks.iter().filter(|c| !c.pass) {
                    eprintln!(
                        "failed: {} (measured {}, threshold {})",
                        c.name,
                        g12(c.measured),
                        g12(c.threshold)
                    );
                }
                return Ok(1);
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: &'a str,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|code| {
        out.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            drop(out);
            if std::env::var_os("SKEWBETA_JSON_ERRORS").is_some() {
                eprintln!(
                    "{}",
                    serde_json::to_string(&Diagnostic { error: &f.message }).expect("serializes")
                );
            } else {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
