//! Command-line surface: every check and table as CSV/JSON with
//! deterministic seeds and an echoed run manifest.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use rookmix::bounds;
use rookmix::chain::{ChainParams, ShellDistribution};
use rookmix::full::{self, DEFAULT_STATE_CAP};
use rookmix::krawtchouk::{weighted_inner, KrawtchoukTable};
use rookmix::lumped::{spectral_tv_curve, tv_curve, ShellKernel};
use rookmix::scalar::{Mode, Scalar};
use rookmix::spectral::{eigen_residual, gram_max_deviation, l2_identity_check, self_adjoint_check, SpectralData};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "rookmix", version, about = "Mixing-time analysis of the rook's walk and its shell projection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: GlobalOpts,
}

#[derive(Args)]
struct GlobalOpts {
    /// Board length (n >= 3).
    #[arg(long, global = true)]
    n: Option<u64>,
    /// Dimension, or comma-separated list where a sweep is meaningful.
    #[arg(long, global = true, value_delimiter = ',')]
    d: Vec<usize>,
    /// Threshold(s) in (0,1), comma-separated where a sweep is meaningful.
    #[arg(long, global = true, value_delimiter = ',')]
    eps: Vec<f64>,
    /// Largest time step (tv-curve) or search horizon (bounds).
    #[arg(long = "t-max", global = true)]
    t_max: Option<u64>,
    /// Number of Monte Carlo samples or random trials.
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Master RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Numeric mode: "exact" or "float". Default: exact for verify, float otherwise.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Output path, or "-" for stdout (default).
    #[arg(long, global = true)]
    out: Option<String>,
    /// Output format: "csv" or "json" (bounds and verify are JSON-only).
    #[arg(long, global = true)]
    format: Option<String>,
    /// Brute-force state cap; overrides the ROOKMIX_CAP environment variable.
    #[arg(long, global = true)]
    cap: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Distance to stationarity of the shell chain for t = 0..=t-max.
    TvCurve {
        /// Compute the curve through the eigenfunction expansion instead of
        /// direct evolution.
        #[arg(long)]
        spectral: bool,
    },
    /// Exact mixing times for one or more thresholds.
    MixingTime,
    /// Every closed-form bound at one (n, d, eps), with validity flags.
    Bounds,
    /// Run the full battery of correctness checks; exit 0 iff none fail.
    Verify {
        /// Include the exact record contrasting the stated and corrected
        /// spectral sums.
        #[arg(long)]
        report_discrepancies: bool,
        /// Treat skipped checks as failures for the exit status.
        #[arg(long)]
        strict: bool,
        /// Random trials for transitivity/self-adjointness checks.
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Cutoff profile over a dimension sweep.
    Cutoff,
    /// Monte Carlo shell histogram against exact probabilities.
    Simulate {
        /// Number of steps to simulate.
        #[arg(long)]
        t: Option<u64>,
    },
}

/// Echo of the exact run configuration, written alongside every output.
#[derive(Serialize)]
struct Manifest {
    schema_version: u32,
    command: String,
    library_version: String,
    mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    d: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    eps: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    flags: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

impl Manifest {
    fn new(command: &str, mode: Mode) -> Self {
        Manifest {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            library_version: env!("CARGO_PKG_VERSION").into(),
            mode: mode.to_string(),
            n: None,
            d: Vec::new(),
            eps: Vec::new(),
            t_max: None,
            t: None,
            samples: None,
            seed: None,
            cap: None,
            flags: Vec::new(),
            warnings: Vec::new(),
        }
    }

    /// `# key=value` comment lines prefixed to CSV output.
    fn csv_lines(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# schema_version={}", self.schema_version);
        let _ = writeln!(s, "# command={}", self.command);
        let _ = writeln!(s, "# library_version={}", self.library_version);
        let _ = writeln!(s, "# mode={}", self.mode);
        if let Some(n) = self.n {
            let _ = writeln!(s, "# n={n}");
        }
        if !self.d.is_empty() {
            let _ = writeln!(s, "# d={}", join(&self.d));
        }
        if !self.eps.is_empty() {
            let _ = writeln!(s, "# eps={}", join(&self.eps));
        }
        if let Some(v) = self.t_max {
            let _ = writeln!(s, "# t_max={v}");
        }
        if let Some(v) = self.t {
            let _ = writeln!(s, "# t={v}");
        }
        if let Some(v) = self.samples {
            let _ = writeln!(s, "# samples={v}");
        }
        if let Some(v) = self.seed {
            let _ = writeln!(s, "# seed={v}");
        }
        if let Some(v) = self.cap {
            let _ = writeln!(s, "# cap={v}");
        }
        for f in &self.flags {
            let _ = writeln!(s, "# flag={f}");
        }
        for w in &self.warnings {
            let _ = writeln!(s, "# warning={w}");
        }
        s
    }
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

struct ConfigError(String);

impl From<String> for ConfigError {
    fn from(s: String) -> Self {
        ConfigError(s)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(ConfigError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, ConfigError> {
    let opts = &cli.opts;
    let default_mode = match cli.command {
        Command::Verify { .. } => Mode::Exact,
        _ => Mode::Float,
    };
    let mode = match &opts.mode {
        Some(s) => Mode::from_str(s)?,
        None => default_mode,
    };
    let format = match opts.format.as_deref() {
        None => None,
        Some("csv") => Some(Format::Csv),
        Some("json") => Some(Format::Json),
        Some(other) => return Err(format!("unknown format {other:?}; expected \"csv\" or \"json\"").into()),
    };
    let cap = opts
        .cap
        .or_else(|| std::env::var("ROOKMIX_CAP").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_STATE_CAP);

    match &cli.command {
        Command::TvCurve { spectral } => cmd_tv_curve(opts, mode, format, *spectral),
        Command::MixingTime => cmd_mixing_time(opts, mode, format),
        Command::Bounds => cmd_bounds(opts, mode, format),
        Command::Verify { report_discrepancies, strict, trials } => {
            cmd_verify(opts, mode, format, cap, *report_discrepancies, *strict, *trials)
        }
        Command::Cutoff => cmd_cutoff(opts, format),
        Command::Simulate { t } => cmd_simulate(opts, format, *t),
    }
}

fn require_n(opts: &GlobalOpts) -> Result<u64, ConfigError> {
    opts.n.ok_or_else(|| ConfigError("--n is required".into()))
}

fn require_single_d(opts: &GlobalOpts) -> Result<usize, ConfigError> {
    match opts.d.as_slice() {
        [d] => Ok(*d),
        [] => Err(ConfigError("--d is required".into())),
        _ => Err(ConfigError("this command takes a single --d value".into())),
    }
}

fn build_params(n: u64, d: usize, manifest: &mut Manifest) -> Result<ChainParams, ConfigError> {
    let params = ChainParams::new(n, d).map_err(|e| ConfigError(e.to_string()))?;
    for w in params.warnings() {
        eprintln!("warning: {w}");
        manifest.warnings.push(w);
    }
    Ok(params)
}

fn check_eps_list(eps: &[f64]) -> Result<(), ConfigError> {
    if eps.is_empty() {
        return Err(ConfigError("--eps is required".into()));
    }
    for &e in eps {
        if !(e > 0.0 && e < 1.0) {
            return Err(ConfigError(format!("eps = {e} must lie strictly inside (0, 1)")));
        }
    }
    Ok(())
}

fn write_output(out: Option<&str>, content: &str) -> Result<ExitCode, ConfigError> {
    match out {
        None | Some("-") => {
            print!("{content}");
            Ok(ExitCode::SUCCESS)
        }
        Some(path) => match std::fs::write(path, content) {
            Ok(()) => Ok(ExitCode::SUCCESS),
            Err(e) => {
                eprintln!("error: cannot write {path}: {e}");
                Ok(ExitCode::FAILURE)
            }
        },
    }
}

fn json_document(manifest: &Manifest, results: serde_json::Value) -> String {
    let doc = json!({ "manifest": manifest, "results": results });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable document");
    s.push('\n');
    s
}

fn cmd_tv_curve(
    opts: &GlobalOpts,
    mode: Mode,
    format: Option<Format>,
    spectral: bool,
) -> Result<ExitCode, ConfigError> {
    let n = require_n(opts)?;
    let d = require_single_d(opts)?;
    let t_max = opts.t_max.ok_or_else(|| ConfigError("--t-max is required".into()))?;
    let mut manifest = Manifest::new("tv-curve", mode);
    manifest.n = Some(n);
    manifest.d = vec![d];
    manifest.t_max = Some(t_max);
    if spectral {
        manifest.flags.push("spectral".into());
    }
    let params = build_params(n, d, &mut manifest)?;

    let curve = if spectral {
        let data = SpectralData::new(params, mode);
        spectral_tv_curve(params, t_max, &data)
    } else {
        tv_curve(params, t_max, mode)
    };

    let content = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = manifest.csv_lines();
            s.push_str("t,tv\n");
            for (t, v) in curve.points() {
                let _ = writeln!(s, "{t},{v}");
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = curve
                .points()
                .iter()
                .map(|(t, v)| json!({ "t": t, "tv": v }))
                .collect();
            json_document(&manifest, json!({ "curve": rows }))
        }
    };
    write_output(opts.out.as_deref(), &content)
}

fn cmd_mixing_time(opts: &GlobalOpts, mode: Mode, format: Option<Format>) -> Result<ExitCode, ConfigError> {
    let n = require_n(opts)?;
    let d = require_single_d(opts)?;
    check_eps_list(&opts.eps)?;
    let mut manifest = Manifest::new("mixing-time", mode);
    manifest.n = Some(n);
    manifest.d = vec![d];
    manifest.eps = opts.eps.clone();
    let params = build_params(n, d, &mut manifest)?;

    let mut rows = Vec::new();
    for &eps in &opts.eps {
        let eps_scalar = match mode {
            Mode::Float => Scalar::Float(eps),
            Mode::Exact => Scalar::Exact(num::BigRational::from_float(eps).expect("finite eps")),
        };
        let t = rookmix::lumped::mixing_time(params, &eps_scalar).map_err(|e| ConfigError(e.to_string()))?;
        rows.push((eps, t));
    }

    let content = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = manifest.csv_lines();
            s.push_str("n,d,eps,tmix\n");
            for (eps, t) in &rows {
                let _ = writeln!(s, "{n},{d},{eps},{t}");
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(eps, t)| json!({ "n": n, "d": d, "eps": eps, "tmix": t }))
                .collect();
            json_document(&manifest, json!({ "mixing_times": rows }))
        }
    };
    write_output(opts.out.as_deref(), &content)
}

fn cmd_bounds(opts: &GlobalOpts, mode: Mode, format: Option<Format>) -> Result<ExitCode, ConfigError> {
    let n = require_n(opts)?;
    let d = require_single_d(opts)?;
    check_eps_list(&opts.eps)?;
    if opts.eps.len() != 1 {
        return Err(ConfigError("bounds takes a single --eps value".into()));
    }
    if format == Some(Format::Csv) {
        return Err(ConfigError("bounds emits a structured report; only --format json is supported".into()));
    }
    let eps = opts.eps[0];
    let mut manifest = Manifest::new("bounds", mode);
    manifest.n = Some(n);
    manifest.d = vec![d];
    manifest.eps = vec![eps];
    manifest.t_max = opts.t_max;
    let params = build_params(n, d, &mut manifest)?;

    // The product-chain upper bound always dominates the mixing time, so it
    // makes a safe default search horizon.
    let horizon = opts.t_max.unwrap_or_else(|| {
        let (_, kim_up) = bounds::kim_bounds(params, eps).expect("eps validated");
        2 * kim_up.ceil() as u64 + 100
    });
    let report = bounds::bounds_report(params, eps, mode, horizon).map_err(|e| ConfigError(e.to_string()))?;
    let content = json_document(&manifest, serde_json::to_value(&report).expect("serializable report"));
    write_output(opts.out.as_deref(), &content)
}

#[derive(Serialize)]
struct VerifyCheck {
    name: String,
    status: String,
    detail: String,
}

fn passed(name: &str, detail: String) -> VerifyCheck {
    VerifyCheck { name: name.into(), status: "passed".into(), detail }
}

fn failed(name: &str, detail: String) -> VerifyCheck {
    VerifyCheck { name: name.into(), status: "failed".into(), detail }
}

fn skipped(name: &str, detail: String) -> VerifyCheck {
    VerifyCheck { name: name.into(), status: "skipped".into(), detail }
}

fn scalar_within(v: &Scalar, tol: f64) -> bool {
    match v {
        Scalar::Exact(_) => v.is_zero(),
        Scalar::Float(x) => x.abs() <= tol,
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    opts: &GlobalOpts,
    mode: Mode,
    format: Option<Format>,
    cap: u64,
    report_discrepancies: bool,
    strict: bool,
    trials: Option<u64>,
) -> Result<ExitCode, ConfigError> {
    let n = require_n(opts)?;
    let d = require_single_d(opts)?;
    if format == Some(Format::Csv) {
        return Err(ConfigError("verify emits a structured report; only --format json is supported".into()));
    }
    let trials = trials.unwrap_or(5);
    let seed = opts.seed.unwrap_or(0);
    let t_max = opts.t_max.unwrap_or(40);
    let mut manifest = Manifest::new("verify", mode);
    manifest.n = Some(n);
    manifest.d = vec![d];
    manifest.t_max = Some(t_max);
    manifest.samples = Some(trials);
    manifest.seed = Some(seed);
    manifest.cap = Some(cap);
    if report_discrepancies {
        manifest.flags.push("report-discrepancies".into());
    }
    if strict {
        manifest.flags.push("strict".into());
    }
    let params = build_params(n, d, &mut manifest)?;

    let mut checks = Vec::new();

    match full::verify_lumping(params, t_max, mode, cap) {
        Ok(report) => {
            let worst = report
                .rows
                .iter()
                .map(|r| (r.tv_full.to_f64() - r.tv_lumped.to_f64()).abs())
                .fold(0.0f64, f64::max);
            let detail = format!("t = 0..={t_max}: max |TV_full - TV_lumped| = {worst:e}");
            checks.push(if report.all_equal {
                passed("lumping_equivalence", detail)
            } else {
                failed("lumping_equivalence", detail)
            });
        }
        Err(e) => checks.push(skipped("lumping_equivalence", e.to_string())),
    }

    match full::verify_transitivity(params, 3.min(t_max), trials, seed, mode, cap) {
        Ok(report) => {
            let ok = report.all_match && report.translation_ok;
            let detail = format!(
                "{} random starts vs reference, {} translation pairs",
                report.rows.len(),
                report.translation_pairs_checked
            );
            checks.push(if ok {
                passed("transitivity", detail)
            } else {
                failed("transitivity", detail)
            });
        }
        Err(e) => checks.push(skipped("transitivity", e.to_string())),
    }

    {
        let kernel = ShellKernel::new(params, mode);
        let table = KrawtchoukTable::new(params, mode);
        let mut worst = Scalar::zero(mode);
        for m in 0..=d {
            let r = eigen_residual(&kernel, &table, m);
            if r > worst {
                worst = r;
            }
        }
        let ok = scalar_within(&worst, 1e-10);
        let detail = format!("max relative residual over m = 0..={d}: {worst}");
        checks.push(if ok { passed("eigen_residuals", detail) } else { failed("eigen_residuals", detail) });
    }

    let spectral = SpectralData::new(params, mode);

    {
        let dev = gram_max_deviation(&spectral);
        let ok = scalar_within(&dev, 1e-10);
        let detail = format!("max Gram deviation from identity: {dev}");
        checks.push(if ok { passed("orthonormality", detail) } else { failed("orthonormality", detail) });
    }

    {
        let mut ok = true;
        let mut worst = 0.0f64;
        for t in 0..=20.min(t_max) {
            match l2_identity_check(&spectral, t) {
                Ok(id) => {
                    let gap = &id.lhs - &id.rhs;
                    let tv_ok = {
                        let four_tv_sq = Scalar::from_int(4, mode) * &id.tv * &id.tv;
                        match mode {
                            Mode::Exact => four_tv_sq <= id.lhs,
                            Mode::Float => four_tv_sq.to_f64() <= id.lhs.to_f64() * (1.0 + 1e-12),
                        }
                    };
                    let rel = gap.to_f64().abs() / id.rhs.to_f64().abs().max(1.0);
                    worst = worst.max(rel);
                    ok &= tv_ok
                        && match mode {
                            Mode::Exact => gap.is_zero(),
                            Mode::Float => rel <= 1e-10,
                        };
                }
                Err(e) => {
                    ok = false;
                    worst = f64::INFINITY;
                    eprintln!("l2 identity failed at t={t}: {e}");
                }
            }
        }
        let detail = format!("t = 0..=20: max relative lhs/rhs gap = {worst:e}; 4 TV^2 <= lhs throughout");
        checks.push(if ok { passed("l2_identity", detail) } else { failed("l2_identity", detail) });
    }

    {
        let asym = self_adjoint_check(params, trials, seed, mode);
        let ok = scalar_within(&asym, 1e-12);
        let detail = format!("max |<Pf,g> - <f,Pg>| over {trials} random pairs: {asym}");
        checks.push(if ok { passed("self_adjointness", detail) } else { failed("self_adjointness", detail) });
    }

    {
        // Norm law settled by the exact Gram matrix: <K_m,K_m> = n^d C(d,m)(n-1)^m.
        let table = KrawtchoukTable::new(params, Mode::Exact);
        let nd = Scalar::from_biguint(&params.state_count(), Mode::Exact);
        let mut ok = true;
        for m in 0..=d {
            let ip = weighted_inner(table.row(m), table.row(m), params).expect("same length");
            let want = &nd
                * &Scalar::from_biguint(
                    &(num::integer::binomial(num::BigUint::from(d), num::BigUint::from(m))
                        * num::BigUint::from(n - 1).pow(m as u32)),
                    Mode::Exact,
                );
            ok &= ip == want;
        }
        let detail = "exact inner products match n^d * C(d,m) * (n-1)^m for all m".to_string();
        checks.push(if ok { passed("krawtchouk_norm_law", detail) } else { failed("krawtchouk_norm_law", detail) });
    }

    let discrepancy = if report_discrepancies {
        match bounds::discrepancy_report(params, 1) {
            Ok(r) => Some(r),
            Err(e) => {
                eprintln!("warning: discrepancy report failed: {e}");
                None
            }
        }
    } else {
        None
    };

    let n_passed = checks.iter().filter(|c| c.status == "passed").count();
    let n_failed = checks.iter().filter(|c| c.status == "failed").count();
    let n_skipped = checks.iter().filter(|c| c.status == "skipped").count();

    let results = json!({
        "checks": checks,
        "summary": { "passed": n_passed, "failed": n_failed, "skipped": n_skipped },
        "discrepancy": discrepancy,
    });
    let content = json_document(&manifest, results);
    let write_code = write_output(opts.out.as_deref(), &content)?;
    if write_code != ExitCode::SUCCESS {
        return Ok(write_code);
    }
    if n_failed > 0 || (strict && n_skipped > 0) {
        Ok(ExitCode::FAILURE)
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn cmd_cutoff(opts: &GlobalOpts, format: Option<Format>) -> Result<ExitCode, ConfigError> {
    let n = require_n(opts)?;
    if opts.d.is_empty() {
        return Err(ConfigError("--d list is required".into()));
    }
    check_eps_list(&opts.eps)?;
    let mut manifest = Manifest::new("cutoff", Mode::Float);
    manifest.n = Some(n);
    manifest.d = opts.d.clone();
    manifest.eps = opts.eps.clone();
    for &d in &opts.d {
        build_params(n, d, &mut manifest)?;
    }

    let profile = bounds::cutoff_profile(n, &opts.d, &opts.eps).map_err(|e| ConfigError(e.to_string()))?;
    let content = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = manifest.csv_lines();
            s.push_str("n,d,eps,tmix,t_c,w,u_low,u_high,ratio\n");
            for r in &profile.rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    r.n, r.d, r.eps, r.tmix, r.t_c, r.w, r.u_low, r.u_high, r.ratio
                );
            }
            s
        }
        Format::Json => json_document(&manifest, serde_json::to_value(&profile).expect("serializable profile")),
    };
    write_output(opts.out.as_deref(), &content)
}

fn cmd_simulate(opts: &GlobalOpts, format: Option<Format>, t: Option<u64>) -> Result<ExitCode, ConfigError> {
    let n = require_n(opts)?;
    let d = require_single_d(opts)?;
    let t = t.or(opts.t_max).ok_or_else(|| ConfigError("--t is required".into()))?;
    let samples = opts.samples.unwrap_or(10_000);
    if samples < 1 {
        return Err(ConfigError("--samples must be >= 1".into()));
    }
    let seed = opts.seed.unwrap_or(0);
    let mut manifest = Manifest::new("simulate", Mode::Float);
    manifest.n = Some(n);
    manifest.d = vec![d];
    manifest.t = Some(t);
    manifest.samples = Some(samples);
    manifest.seed = Some(seed);
    let params = build_params(n, d, &mut manifest)?;

    let hist = full::mc_shell_histogram(params, t, samples, seed);
    let exact = exact_shell_probabilities(params, t);

    let content = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = manifest.csv_lines();
            s.push_str("shell,count,freq,exact_p,stderr\n");
            for shell in 0..=d {
                let _ = writeln!(
                    s,
                    "{shell},{},{},{},{}",
                    hist.counts[shell], hist.freqs[shell], exact[shell], hist.stderrs[shell]
                );
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = (0..=d)
                .map(|shell| {
                    json!({
                        "shell": shell,
                        "count": hist.counts[shell],
                        "freq": hist.freqs[shell],
                        "exact_p": exact[shell],
                        "stderr": hist.stderrs[shell],
                    })
                })
                .collect();
            json_document(&manifest, json!({ "histogram": rows }))
        }
    };
    write_output(opts.out.as_deref(), &content)
}

/// Exact (float-evolved) shell probabilities at time `t` from shell 0.
fn exact_shell_probabilities(params: ChainParams, t: u64) -> Vec<f64> {
    let kernel = ShellKernel::new(params, Mode::Float);
    let mut dist = ShellDistribution::delta(params, 0, Mode::Float).expect("shell 0 exists");
    for _ in 0..t {
        dist = kernel.step(&dist);
    }
    dist.weights().iter().map(|w| w.to_f64()).collect()
}
