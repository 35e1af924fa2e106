//! Command-line front-end: identity and corollary checks, coefficient caches,
//! oracle runs and grid scans with JSON or CSV reports.

pub mod parse;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rtf_core::geometric::SpectralParams;
use rtf_core::modforms::{check_weight, eigenform, Eigenform, QExpansion};
use rtf_core::verify::oracle::{orbital_suite, special_function_suite, OracleCheck, DEFAULT_SEED};
use rtf_core::verify::{
    grid, scan, verify_corollary, verify_identity, write_csv, CheckKind, Context, ToleranceConfig, VerificationReport,
    DEFAULT_SHIFTS,
};
use rtf_core::Precision;
use serde::Serialize;
use thiserror::Error;

use parse::{parse_complex, parse_index_range, parse_shift_pair};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_COMPUTE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] rtf_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(rtf_core::Error::UnsupportedWeight(_) | rtf_core::Error::Region(_)) => EXIT_USAGE,
            CliError::Core(_) | CliError::Io(_) => EXIT_COMPUTE,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "rtf", version, about = "Numerical verification of a second-moment relative trace formula")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Working precision: double or double-double.
    #[arg(long, global = true, env = "RTF_PRECISION", value_parser = parse_precision, default_value = "double")]
    pub precision: Precision,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Identity tolerance on the residual.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Target for the truncation tail of each error series.
    #[arg(long, global = true)]
    pub series_tol: Option<f64>,
    #[arg(long, global = true)]
    pub series_cap: Option<usize>,
    #[arg(long, global = true)]
    pub quadrature_cap: Option<usize>,
    /// Number of q-expansion coefficients to build.
    #[arg(long, global = true)]
    pub coefficients: Option<usize>,
    /// q-expansion cache files to use instead of building (repeatable).
    #[arg(long, global = true)]
    pub cache: Vec<PathBuf>,
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the identity at one (k, n, s1, s2).
    Verify {
        #[arg(long)]
        weight: u32,
        #[arg(long)]
        index: u64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s1: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s2: Complex64,
    },
    /// Check the s = (0, 0) specialization over a range of indices.
    Corollary {
        #[arg(long)]
        weight: u32,
        #[arg(long, value_parser = parse_index_range)]
        index_range: std::ops::RangeInclusive<u64>,
    },
    /// Build or inspect q-expansion cache files.
    Qexp {
        #[command(subcommand)]
        action: QexpAction,
    },
    /// Special-function and orbital-integral cross-checks.
    Oracle {
        #[arg(value_enum, default_value = "all")]
        suite: OracleSuite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Identity checks over a (weights × indices × shifts) grid.
    Scan {
        #[arg(long, value_delimiter = ',', default_value = "12,16,18,20,22,26")]
        weights: Vec<u32>,
        #[arg(long, value_parser = parse_index_range, default_value = "1..5")]
        index_range: std::ops::RangeInclusive<u64>,
        /// Shift pair `s1;s2` (repeatable); defaults to two fixed generic pairs.
        #[arg(long = "shift", value_parser = parse_shift_pair, allow_hyphen_values = true)]
        shifts: Vec<(Complex64, Complex64)>,
        /// Also check s = (0, 0) at every (k, n).
        #[arg(long)]
        include_origin: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum QexpAction {
    /// Compute the eigenform of a weight and write its cache file.
    Build {
        #[arg(long)]
        weight: u32,
        #[arg(long, default_value_t = rtf_core::modforms::DEFAULT_COEFFICIENTS)]
        terms: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summarize a cache file.
    Inspect {
        path: PathBuf,
        #[arg(long, default_value_t = 10)]
        head: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleSuite {
    All,
    Special,
    Orbital,
}

impl GlobalOpts {
    fn config(&self) -> Result<ToleranceConfig, CliError> {
        let d = ToleranceConfig::default();
        let cfg = ToleranceConfig {
            identity_tol: self.tol.unwrap_or(d.identity_tol),
            series_tol: self.series_tol.unwrap_or(d.series_tol),
            precision: self.precision,
            series_cap: self.series_cap.unwrap_or(d.series_cap),
            quadrature_cap: self.quadrature_cap.unwrap_or(d.quadrature_cap),
            coefficients: self.coefficients.unwrap_or(d.coefficients),
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }

    fn context(&self) -> Result<Context, CliError> {
        let ctx = Context::new(self.config()?)?;
        for path in &self.cache {
            let f = Eigenform::from_qexp(QExpansion::read_cache(path)?)?;
            ctx.insert_form(f)?;
        }
        Ok(ctx)
    }
}

fn write_out(opts: &GlobalOpts, text: &str) -> Result<(), CliError> {
    match &opts.output {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn emit_reports(opts: &GlobalOpts, reports: &[VerificationReport], single: bool) -> Result<(), CliError> {
    let text = match opts.format {
        Format::Json if single => reports[0].to_json() + "\n",
        Format::Json => serde_json::to_string_pretty(reports).expect("reports serialize") + "\n",
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(reports, &mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
    };
    write_out(opts, &text)
}

fn emit_json<T: Serialize>(opts: &GlobalOpts, value: &T) -> Result<(), CliError> {
    if opts.format == Format::Csv {
        return Err(CliError::Usage("this subcommand only writes JSON".into()));
    }
    write_out(opts, &(serde_json::to_string_pretty(value).expect("value serializes") + "\n"))
}

fn verdict(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| r.error.is_some()) {
        EXIT_COMPUTE
    } else if reports.iter().all(|r| r.pass) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn run_verify(opts: &GlobalOpts, k: u32, n: u64, s1: Complex64, s2: Complex64) -> Result<i32, CliError> {
    check_weight(k)?;
    let p = SpectralParams::new(k, n, s1, s2)?;
    let ctx = opts.context()?;
    let report = verify_identity(&ctx, &p).unwrap_or_else(|e| rtf_core::verify::failed_report(&ctx, CheckKind::Identity, &p, &e));
    emit_reports(opts, std::slice::from_ref(&report), true)?;
    Ok(verdict(std::slice::from_ref(&report)))
}

fn run_corollary(opts: &GlobalOpts, k: u32, range: std::ops::RangeInclusive<u64>) -> Result<i32, CliError> {
    check_weight(k)?;
    let ctx = opts.context()?;
    let reports: Vec<_> = range
        .map(|n| {
            verify_corollary(&ctx, k, n).unwrap_or_else(|e| {
                let p = SpectralParams { k, n, s1: Complex64::default(), s2: Complex64::default() };
                rtf_core::verify::failed_report(&ctx, CheckKind::Corollary, &p, &e)
            })
        })
        .collect();
    emit_reports(opts, &reports, false)?;
    Ok(verdict(&reports))
}

#[derive(Serialize)]
struct CacheSummary {
    path: PathBuf,
    weight: u32,
    terms: usize,
    cache_id: String,
    cusp_form: bool,
    head: Vec<String>,
}

fn summarize(path: &Path, f: &Eigenform, head: usize) -> CacheSummary {
    CacheSummary {
        path: path.to_path_buf(),
        weight: f.weight,
        terms: f.len(),
        cache_id: f.cache_id(),
        cusp_form: f.qexp.is_cusp_form(),
        head: f.qexp.coeffs().iter().take(head).map(|a| a.to_string()).collect(),
    }
}

fn run_qexp(opts: &GlobalOpts, action: &QexpAction) -> Result<i32, CliError> {
    match action {
        QexpAction::Build { weight, terms, out } => {
            let f = eigenform(*weight, *terms)?;
            f.qexp.write_cache(out)?;
            emit_json(opts, &summarize(out, &f, 0))?;
        }
        QexpAction::Inspect { path, head } => {
            let f = Eigenform::from_qexp(QExpansion::read_cache(path)?)?;
            emit_json(opts, &summarize(path, &f, *head))?;
        }
    }
    Ok(EXIT_PASS)
}

#[derive(Serialize)]
struct OracleReport {
    seed: u64,
    checks: Vec<OracleCheck>,
    pass: bool,
}

fn run_oracle(opts: &GlobalOpts, suite: OracleSuite, seed: u64) -> Result<i32, CliError> {
    let mut checks = Vec::new();
    if matches!(suite, OracleSuite::All | OracleSuite::Special) {
        checks.extend(special_function_suite(seed)?);
    }
    if matches!(suite, OracleSuite::All | OracleSuite::Orbital) {
        checks.extend(orbital_suite(12)?);
    }
    let pass = checks.iter().all(|c| c.pass);
    emit_json(opts, &OracleReport { seed, checks, pass })?;
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}

fn run_scan(
    opts: &GlobalOpts,
    weights: &[u32],
    range: std::ops::RangeInclusive<u64>,
    shifts: &[(Complex64, Complex64)],
    include_origin: bool,
) -> Result<i32, CliError> {
    for &k in weights {
        check_weight(k)?;
    }
    let mut shifts = if shifts.is_empty() { DEFAULT_SHIFTS.to_vec() } else { shifts.to_vec() };
    if include_origin {
        shifts.push((Complex64::default(), Complex64::default()));
    }
    let points = grid(weights, range, &shifts);
    for p in &points {
        SpectralParams::new(p.k, p.n, p.s1, p.s2)?;
    }
    let ctx = opts.context()?;
    let reports = scan(&ctx, &points);
    emit_reports(opts, &reports, false)?;
    Ok(verdict(&reports))
}

fn dispatch(cli: &Cli) -> Result<i32, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Verify { weight, index, s1, s2 } => run_verify(g, *weight, *index, *s1, *s2),
        Command::Corollary { weight, index_range } => run_corollary(g, *weight, index_range.clone()),
        Command::Qexp { action } => run_qexp(g, action),
        Command::Oracle { suite, seed } => run_oracle(g, *suite, *seed),
        Command::Scan { weights, index_range, shifts, include_origin } => {
            run_scan(g, weights, index_range.clone(), shifts, *include_origin)
        }
    }
}

/// Parse arguments, run the subcommand and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let block = serde_json::json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } });
            eprintln!("{block}");
            e.exit_code()
        }
    }
}

fn error_kind(e: &CliError) -> &'static str {
    match e {
        CliError::Usage(_) => "usage",
        CliError::Core(c) => c.kind(),
        CliError::Io(_) => "io",
    }
}
