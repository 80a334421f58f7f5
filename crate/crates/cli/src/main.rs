mod config;
mod output;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use walkdens::densities::{
    p2, p3, p4, p5, pn_convolution, pn_quadrature, rayleigh, EvalResult, P3Method, P4Method, P5Method,
};
use walkdens::moments::{
    bessel_moment, broadhurst_integral, continue_by_functional_eq, convolution_w4_from_w3, direct_moment,
    even_moment_exact, is_pole, w3, w4_two_term, MomentMethod, MomentValue, MAX_EXACT_K, MAX_EXACT_N,
};
use walkdens::numerics::Precision;
use walkdens::oracle::{estimate_density, RngSpec};
use walkdens::verify::{self, Level, Suite};
use walkdens::WalkError;

use config::Config;
use output::{csv_field, number, render, Format, OutputRecord};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "walkdens", version, about = "Densities and moments of short planar random walks")]
struct Cli {
    /// Output format (csv or json).
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate the density p_n(x) on a grid.
    Density(DensityArgs),
    /// Evaluate the moments W_n(s).
    Moment(MomentArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Monte Carlo histogram of the walk distance.
    Sample(SampleArgs),
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    to: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    /// auto, series, hyper, agm, elliptic, asym, quadrature or convolution.
    #[arg(long, default_value = "auto")]
    method: String,
    /// Add the large-n limit as a second value column.
    #[arg(long)]
    rayleigh: bool,
}

#[derive(Args, Debug)]
struct MomentArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated list of s values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    s: Vec<f64>,
    /// Comma-separated list: auto, exact, functional_eq, quadrature, hyper, convolution.
    #[arg(long, value_delimiter = ',', default_value = "auto")]
    method: Vec<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value = "quick")]
    level: String,
    /// Also write the JSON report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

/// Failure of a whole command, mapped to an exit code.
enum Failure {
    Usage(String),
    Verification,
}

impl From<WalkError> for Failure {
    fn from(e: WalkError) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Ctx {
    config: Config,
    prec: Precision,
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(msg)) => {
            eprintln!("walkdens: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = Config::from_env().map_err(Failure::Usage)?;
    let prec = config.precision().map_err(Failure::Usage)?;
    let format = match cli.format {
        Some(f) => f,
        None => config.get::<Format>("format").map_err(Failure::Usage)?.unwrap_or(Format::Csv),
    };
    let ctx = Ctx { config, prec, format };
    let (text, result) = match cli.command {
        Command::Density(a) => (cmd_density(&ctx, &a)?, Ok(())),
        Command::Moment(a) => (cmd_moment(&ctx, &a)?, Ok(())),
        Command::Verify(a) => cmd_verify(&ctx, &a)?,
        Command::Sample(a) => (cmd_sample(&ctx, &a)?, Ok(())),
    };
    match &cli.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("writing {}: {e}", p.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            // a closed pipe is not an error worth reporting
            let _ = out.write_all(text.as_bytes());
        }
    }
    result
}

fn error_flag(e: &WalkError) -> String {
    let kind = match e {
        WalkError::NonConvergence { .. } => "non_convergence",
        WalkError::Domain(_) => "domain",
        WalkError::SingularInput(_) => "singular_input",
        WalkError::Pole { .. } => "pole",
        WalkError::GuardExceeded(_) => "guard_exceeded",
        WalkError::MethodUnavailable { .. } => "method_unavailable",
        WalkError::SlowConvergence { .. } => "slow_convergence",
    };
    format!("error={kind}")
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum DensityRoute {
    Auto,
    Series,
    Hyper,
    Agm,
    Elliptic,
    Asym,
    Quadrature,
    Convolution,
}

fn density_route(n: usize, method: &str) -> Result<DensityRoute, String> {
    use DensityRoute::*;
    let r = match method {
        "auto" => Auto,
        "series" => Series,
        "hyper" => Hyper,
        "agm" => Agm,
        "elliptic" => Elliptic,
        "asym" => Asym,
        "quadrature" => Quadrature,
        "convolution" => Convolution,
        _ => return Err(format!("unknown density method {method:?}")),
    };
    let ok = match r {
        Auto | Quadrature => true,
        Convolution => n >= 3,
        Series => (3..=5).contains(&n),
        Hyper => n == 3 || n == 4,
        Agm | Elliptic => n == 3,
        Asym => n == 4,
    };
    if ok {
        Ok(r)
    } else {
        Err(format!("method {method} is not available for n = {n}"))
    }
}

fn eval_density(n: usize, x: f64, route: DensityRoute, seam: f64, prec: &Precision) -> walkdens::Result<EvalResult> {
    use DensityRoute::*;
    match (n, route) {
        (_, Convolution) => pn_convolution(n, x, prec),
        (2, Quadrature) => pn_quadrature(2, x, prec),
        (2, _) => Ok(p2(x)),
        (3, r) => {
            let m = match r {
                Series => P3Method::Series,
                Hyper => P3Method::Hyper,
                Agm => P3Method::Agm,
                Elliptic => P3Method::Elliptic,
                Quadrature => return pn_quadrature(3, x, prec),
                _ => P3Method::Auto,
            };
            p3(x, m, prec)
        }
        (4, r) => {
            let m = match r {
                Series => P4Method::Series0,
                Hyper => P4Method::Hyper,
                Asym => P4Method::Asym4,
                Quadrature => P4Method::Quadrature,
                // a configured seam narrower or wider than the built-in one
                _ if (x - 2.0).abs() < seam => P4Method::Quadrature,
                _ if (x - 2.0).abs() < walkdens::densities::P4_SEAM_HALF_WIDTH && x > 1.5 => P4Method::Hyper,
                _ => P4Method::Auto,
            };
            p4(x, m, prec)
        }
        (5, r) => {
            let m = match r {
                Series => P5Method::Series0,
                Quadrature => P5Method::Quadrature,
                _ => P5Method::Auto,
            };
            p5(x, m, prec)
        }
        _ => pn_quadrature(n, x, prec),
    }
}

fn grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(from.is_finite() && to.is_finite() && step.is_finite()) || step <= 0.0 || from < 0.0 || to < from {
        return Err(format!("invalid range: from={from}, to={to}, step={step} (need 0 ≤ from ≤ to, step > 0)"));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(format!("grid of {count} points is too large"));
    }
    // snap to 12 decimals so that 0.05·3 prints as 0.15
    Ok((0..count).map(|i| ((from + i as f64 * step) * 1e12).round() / 1e12).collect())
}

fn cmd_density(ctx: &Ctx, a: &DensityArgs) -> Result<String, Failure> {
    if !(2..=12).contains(&a.n) {
        return Err(Failure::Usage(format!("density needs 2 ≤ n ≤ 12, got {}", a.n)));
    }
    let route = density_route(a.n, &a.method).map_err(Failure::Usage)?;
    let step = match a.step {
        Some(s) => s,
        None => ctx.config.get("step").map_err(Failure::Usage)?.unwrap_or(0.05),
    };
    let seam: f64 = ctx
        .config
        .get("p4_seam_half_width")
        .map_err(Failure::Usage)?
        .unwrap_or(walkdens::densities::P4_SEAM_HALF_WIDTH);
    let xs = grid(a.from.unwrap_or(0.0), a.to.unwrap_or(a.n as f64), step).map_err(Failure::Usage)?;
    let records: Vec<OutputRecord> = xs
        .par_iter()
        .map(|&x| {
            let mut rec = match eval_density(a.n, x, route, seam, &ctx.prec) {
                Ok(r) => {
                    let mut rec = OutputRecord::new(x, r.value, r.err, r.method.as_str());
                    rec.flags = r.flags.iter().map(|f| f.as_str().to_string()).collect();
                    rec
                }
                Err(e) => OutputRecord::new(x, f64::NAN, f64::NAN, a.method.as_str()).flag(error_flag(&e)),
            };
            if a.rayleigh {
                rec.rayleigh = Some(rayleigh(a.n, x));
            }
            rec
        })
        .collect();
    Ok(render(&records, ctx.format))
}

fn near_pole(n: usize, s: f64) -> bool {
    if n < 3 || s > -1.5 || is_pole(n, s) {
        return false;
    }
    let nearest = 2.0 * (s / 2.0).round();
    (s - nearest).abs() < 0.05
}

fn even_index(s: f64) -> Option<usize> {
    (s >= 0.0 && s == s.round() && (s as i64) % 2 == 0).then(|| (s as i64 / 2) as usize)
}

fn eval_moment(n: usize, s: f64, method: &str, prec: &Precision) -> walkdens::Result<MomentValue> {
    let unavailable = || WalkError::MethodUnavailable { method: method.to_string(), context: format!("n={n}, s={s}") };
    match method {
        "auto" => {
            if let Some(k) = even_index(s).filter(|&k| n <= MAX_EXACT_N && k <= MAX_EXACT_K) {
                return eval_moment(n, 2.0 * k as f64, "exact", prec);
            }
            if (3..=5).contains(&n) && s < -1.0 {
                continue_by_functional_eq(n, s, prec)
            } else {
                direct_moment(n, s, prec)
            }
        }
        "exact" => {
            let k = even_index(s).ok_or_else(unavailable)?;
            let v = even_moment_exact(n, k)?;
            let f = v.to_f64().unwrap_or(f64::INFINITY);
            Ok(MomentValue::new(f, f * f64::EPSILON, MomentMethod::ExactCombinatorial))
        }
        "functional_eq" => continue_by_functional_eq(n, s, prec),
        "quadrature" => match n {
            3 | 4 => bessel_moment(n, s, prec),
            _ => broadhurst_integral(n, s, 0, prec),
        },
        "hyper" => match n {
            3 => w3(s, prec),
            4 => w4_two_term(s, prec),
            _ => Err(unavailable()),
        },
        "convolution" => {
            if n != 4 || s != s.round() {
                return Err(unavailable());
            }
            convolution_w4_from_w3(s as i64, 60, prec)
        }
        _ => Err(unavailable()),
    }
}

const MOMENT_METHODS: &[&str] = &["auto", "exact", "functional_eq", "quadrature", "hyper", "convolution"];

fn cmd_moment(ctx: &Ctx, a: &MomentArgs) -> Result<String, Failure> {
    if a.n == 0 {
        return Err(Failure::Usage("moment needs n ≥ 1".into()));
    }
    if let Some(m) = a.method.iter().find(|m| !MOMENT_METHODS.contains(&m.as_str())) {
        return Err(Failure::Usage(format!("unknown moment method {m:?}")));
    }
    if let Some(s) = a.s.iter().find(|s| !s.is_finite()) {
        return Err(Failure::Usage(format!("s must be finite, got {s}")));
    }
    let jobs: Vec<(f64, &str)> = a.s.iter().flat_map(|&s| a.method.iter().map(move |m| (s, m.as_str()))).collect();
    let mut records: Vec<OutputRecord> = jobs
        .par_iter()
        .map(|&(s, m)| {
            if is_pole(a.n, s) {
                return OutputRecord::new(s, f64::INFINITY, f64::NAN, m).flag("pole");
            }
            let rec = match eval_moment(a.n, s, m, &ctx.prec) {
                Ok(v) => OutputRecord::new(s, v.value, v.err, v.method.as_str()),
                Err(e) => OutputRecord::new(s, f64::NAN, f64::NAN, m).flag(error_flag(&e)),
            };
            if near_pole(a.n, s) {
                rec.flag("near_pole")
            } else {
                rec
            }
        })
        .collect();

    // largest spread between methods at the same s
    let mut worst: Option<OutputRecord> = None;
    for &s in &a.s {
        let vals: Vec<&OutputRecord> = records.iter().filter(|r| r.x_or_s == s && r.value.is_finite()).collect();
        for (i, x) in vals.iter().enumerate() {
            for y in &vals[i + 1..] {
                let d = (x.value - y.value).abs();
                if worst.as_ref().is_none_or(|w| d > w.value) {
                    worst = Some(OutputRecord::new(s, d, x.err + y.err, "max_discrepancy").flag("summary"));
                }
            }
        }
    }
    records.extend(worst);
    Ok(render(&records, ctx.format))
}

fn cmd_verify(ctx: &Ctx, a: &VerifyArgs) -> Result<(String, Result<(), Failure>), Failure> {
    let suite: Suite = a.suite.parse()?;
    let level: Level = a.level.parse()?;
    let report = verify::run(suite, level);
    let json = serde_json::to_string_pretty(&report_json(&report)).expect("json") + "\n";
    if let Some(p) = &a.report {
        std::fs::write(p, &json).map_err(|e| Failure::Usage(format!("writing {}: {e}", p.display())))?;
    }
    let text = match ctx.format {
        Format::Json => json,
        Format::Csv => {
            let mut s = String::from("name,criterion,target,residual,cmp,tol,status,note\n");
            for c in &report.checks {
                s += &format!(
                    "{},{},{},{:e},{},{:e},{},{}\n",
                    csv_field(&c.name),
                    c.criterion,
                    csv_field(&c.target),
                    c.residual,
                    c.cmp,
                    c.tol,
                    c.status,
                    csv_field(c.note.as_deref().unwrap_or(""))
                );
            }
            s
        }
    };
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    eprintln!(
        "verify {} ({}): {} checks, {} failed, {:.1} s",
        report.suite,
        report.level,
        report.checks.len(),
        failed.len(),
        report.seconds
    );
    for f in &failed {
        eprintln!("  FAIL {f}");
    }
    let result = if failed.is_empty() { Ok(()) } else { Err(Failure::Verification) };
    Ok((text, result))
}

fn report_json(r: &verify::Report) -> serde_json::Value {
    let mut v = serde_json::to_value(r).expect("report serializes");
    if let Some(checks) = v["checks"].as_array_mut() {
        for (c, src) in checks.iter_mut().zip(&r.checks) {
            c["residual"] = number(src.residual);
        }
    }
    v["passed"] = serde_json::json!(r.all_pass());
    v
}

fn cmd_sample(ctx: &Ctx, a: &SampleArgs) -> Result<String, Failure> {
    let get = |flag: Option<u64>, key: &str, default: u64| -> Result<u64, Failure> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(ctx.config.get(key).map_err(Failure::Usage)?.unwrap_or(default)),
        }
    };
    let samples = get(a.samples, "samples", 1_000_000)?;
    let bins = get(a.bins.map(|b| b as u64), "bins", 100)? as usize;
    let seed = get(a.seed, "seed", 0)?;
    let h = estimate_density(a.n, bins, samples, &RngSpec::new(seed, 0))?;
    Ok(match ctx.format {
        Format::Csv => h.to_csv(),
        Format::Json => {
            let v = serde_json::json!({
                "n": h.n,
                "samples": h.samples,
                "seed": seed,
                "edges": h.edges,
                "counts": h.counts,
                "density": h.density(),
                "stderr": h.stderr(),
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
    })
}
