//! Both sides of the identity side by side: spectral evaluation, residuals,
//! batch scans and reports.

pub mod oracle;
mod report;

use std::sync::OnceLock;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometric::{geometric_total, GeometricOptions, MomentBreakdown, SpectralParams, DEFAULT_TERM_CAP};
use crate::lfunc::{l_value, sym2_l1_capped, ARC_MAX_ORDER, MIN_NORM_TABLE};
use crate::modforms::{check_weight, eigenform, Eigenform, DEFAULT_COEFFICIENTS, SUPPORTED_WEIGHTS};
use crate::precision::{CExt, Cx, DoubleDouble, Precision, Real};

pub use report::{
    batch_fingerprint, write_csv, CheckKind, ComplexValue, Criterion, ErrorBlock, GeometricSummary, Provenance,
    ReportParams, Residuals, Timings, VerificationReport,
};

/// Below this modulus the spectral side counts as zero and the pass test
/// uses the absolute residual.
pub const ZERO_THRESHOLD: f64 = 1e-10;

/// Shift pairs used by the default scan grid.
pub const DEFAULT_SHIFTS: [(Complex64, Complex64); 2] = [
    (Complex64::new(0.07, 0.11), Complex64::new(-0.13, 0.05)),
    (Complex64::new(0.31, 0.0), Complex64::new(0.11, -0.17)),
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub identity_tol: f64,
    pub series_tol: f64,
    pub precision: Precision,
    pub series_cap: usize,
    pub quadrature_cap: usize,
    pub coefficients: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            identity_tol: 1e-8,
            series_tol: 1e-12,
            precision: Precision::Double,
            series_cap: DEFAULT_TERM_CAP,
            quadrature_cap: ARC_MAX_ORDER,
            coefficients: DEFAULT_COEFFICIENTS,
        }
    }
}

impl ToleranceConfig {
    pub fn with_precision(self, precision: Precision) -> Self {
        ToleranceConfig { precision, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::domain("ToleranceConfig", msg));
        if !(self.identity_tol > 0.0 && self.series_tol > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if !(self.series_tol < self.identity_tol) {
            return bad(format!(
                "series_tol {:e} must be below identity_tol {:e}",
                self.series_tol, self.identity_tol
            ));
        }
        if self.coefficients < MIN_NORM_TABLE {
            return bad(format!("need at least {MIN_NORM_TABLE} coefficients"));
        }
        if self.series_cap == 0 || self.quadrature_cap < 16 {
            return bad("series_cap must be positive and quadrature_cap at least 16".into());
        }
        Ok(())
    }

    fn geometric_options(&self) -> GeometricOptions {
        GeometricOptions { tol: self.series_tol, term_cap: self.series_cap, ..GeometricOptions::default() }
    }
}

#[derive(Clone, Debug)]
struct NormEntry {
    sym2: DoubleDouble,
    method: String,
    order: usize,
}

fn weight_slot(k: u32) -> Result<usize> {
    check_weight(k)?;
    Ok(SUPPORTED_WEIGHTS.iter().position(|&w| w == k).expect("weight checked"))
}

fn precision_slot(p: Precision) -> usize {
    match p {
        Precision::Double => 0,
        Precision::DoubleDouble => 1,
    }
}

/// Configuration plus per-weight caches of the eigenform table and
/// L(1, sym² f). Shared by reference across scan workers.
#[derive(Debug)]
pub struct Context {
    cfg: ToleranceConfig,
    forms: [OnceLock<Result<Eigenform>>; 6],
    norms: [[OnceLock<Result<NormEntry>>; 2]; 6],
}

impl Context {
    pub fn new(cfg: ToleranceConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Context { cfg, forms: Default::default(), norms: Default::default() })
    }

    pub fn config(&self) -> &ToleranceConfig {
        &self.cfg
    }

    /// Use a precomputed coefficient table (for instance read from a cache
    /// file) instead of building one. Fails if the weight was already loaded.
    pub fn insert_form(&self, f: Eigenform) -> Result<()> {
        let slot = weight_slot(f.weight)?;
        if f.len() < self.cfg.coefficients {
            return Err(Error::range(
                "Context::insert_form",
                format!("table has {} coefficients, configuration asks for {}", f.len(), self.cfg.coefficients),
            ));
        }
        let k = f.weight;
        self.forms[slot]
            .set(Ok(f))
            .map_err(|_| Error::Resource(format!("coefficients for weight {k} already loaded")))
    }

    pub fn form(&self, k: u32) -> Result<&Eigenform> {
        let slot = weight_slot(k)?;
        self.forms[slot]
            .get_or_init(|| eigenform(k, self.cfg.coefficients))
            .as_ref()
            .map_err(Clone::clone)
    }

    fn norm(&self, k: u32, precision: Precision) -> Result<&NormEntry> {
        let slot = weight_slot(k)?;
        self.norms[slot][precision_slot(precision)]
            .get_or_init(|| {
                let f = self.form(k)?;
                match precision {
                    Precision::Double => norm_entry::<f64>(f, self.cfg.quadrature_cap),
                    Precision::DoubleDouble => norm_entry::<DoubleDouble>(f, self.cfg.quadrature_cap),
                }
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

fn norm_entry<R: Real>(f: &Eigenform, cap: usize) -> Result<NormEntry> {
    let d = sym2_l1_capped::<R>(f, cap)?;
    Ok(NormEntry { sym2: d.sym2_at_1.to_dd(), method: d.sym2_method, order: d.quadrature_order })
}

fn index(n: u64) -> Result<usize> {
    usize::try_from(n).map_err(|_| Error::range("spectral_total", format!("n = {n}")))
}

fn spectral_generic<R: Real>(ctx: &Context, p: &SpectralParams) -> Result<Cx<R>> {
    let f = ctx.form(p.k)?;
    let sym2 = R::from_dd(ctx.norm(p.k, ctx.cfg.precision)?.sym2);
    let lambda: R = f.lambda(index(p.n)?)?;
    let (s1, s2) = p.s::<R>();
    let l1 = l_value(f, s1)?.value;
    let l2 = l_value(f, s2)?.value;
    let pi = R::pi();
    let c = R::from_f64(2.0) * pi * pi / R::from_i64(p.k as i64 - 1);
    Ok((l1 * l2).scale_by(c * lambda / sym2))
}

/// (2π²/(k−1)) λ_f(n) L(1/2 + s₁, f) L(1/2 + s₂, f) / L(1, sym² f), the
/// whole spectral side since S_k(1) is one-dimensional.
pub fn spectral_total(ctx: &Context, p: &SpectralParams) -> Result<Complex64> {
    match ctx.cfg.precision {
        Precision::Double => spectral_generic::<f64>(ctx, p).map(to_c64),
        Precision::DoubleDouble => spectral_generic::<DoubleDouble>(ctx, p).map(to_c64),
    }
}

fn to_c64<R: Real>(z: Cx<R>) -> Complex64 {
    Complex64::new(z.re.to_f64(), z.im.to_f64())
}

fn residuals<R: Real>(spec: Cx<R>, geo: Cx<R>, tol: f64) -> (Residuals, bool) {
    let abs = (spec - geo).cabs().to_f64();
    let scale = spec.cabs().to_f64();
    let rel = (scale > 0.0).then(|| abs / scale);
    let criterion = if scale < ZERO_THRESHOLD { Criterion::Absolute } else { Criterion::Relative };
    let measured = match criterion {
        Criterion::Absolute => abs,
        Criterion::Relative => rel.unwrap_or(f64::INFINITY),
    };
    (Residuals { abs_residual: abs, rel_residual: rel, criterion, tolerance: tol }, measured < tol)
}

struct Evaluation {
    spectral: Complex64,
    geometric: GeometricSummary,
    residuals: Residuals,
    pass: bool,
}

fn evaluate<R: Real>(ctx: &Context, p: &SpectralParams, timings: &mut Timings) -> Result<Evaluation> {
    let t = Instant::now();
    ctx.form(p.k)?;
    ctx.norm(p.k, ctx.cfg.precision)?;
    timings.coefficients = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let spec = spectral_generic::<R>(ctx, p)?;
    timings.spectral = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let geo: MomentBreakdown<R> = geometric_total(p, &ctx.cfg.geometric_options())?;
    timings.geometric = t.elapsed().as_secs_f64();

    let (residuals, pass) = residuals(spec, geo.total, ctx.cfg.identity_tol);
    Ok(Evaluation { spectral: to_c64(spec), geometric: (&geo).into(), residuals, pass })
}

fn provenance(ctx: &Context, k: u32) -> Provenance {
    let form = ctx.form(k).ok();
    let norm = ctx.norm(k, ctx.cfg.precision).ok();
    Provenance {
        precision: ctx.cfg.precision,
        coefficient_cache_id: form.map(Eigenform::cache_id),
        coefficients: form.map_or(0, Eigenform::len),
        sym2_method: norm.map(|e| e.method.clone()),
        quadrature_order: norm.map(|e| e.order),
        version: env!("CARGO_PKG_VERSION").into(),
    }
}

fn try_check(ctx: &Context, check: CheckKind, p: &SpectralParams) -> Result<VerificationReport> {
    let p = SpectralParams::new(p.k, p.n, p.s1, p.s2)?;
    let mut timings = Timings::default();
    let e = match ctx.cfg.precision {
        Precision::Double => evaluate::<f64>(ctx, &p, &mut timings),
        Precision::DoubleDouble => evaluate::<DoubleDouble>(ctx, &p, &mut timings),
    }?;
    Ok(VerificationReport {
        check,
        params: (&p).into(),
        spectral: Some(e.spectral.into()),
        geometric: Some(e.geometric),
        residuals: Some(e.residuals),
        pass: e.pass,
        timings,
        provenance: provenance(ctx, p.k),
        error: None,
    })
}

/// Like [`try_check`], but a failure becomes a report with an error block.
fn run_check(ctx: &Context, check: CheckKind, p: &SpectralParams) -> VerificationReport {
    try_check(ctx, check, p).unwrap_or_else(|err| failed_report(ctx, check, p, &err))
}

/// Compare both sides at one point. Parameters are re-validated, so a
/// hand-built `SpectralParams` outside the region yields a region error.
pub fn verify_identity(ctx: &Context, p: &SpectralParams) -> Result<VerificationReport> {
    try_check(ctx, CheckKind::Identity, p)
}

/// Compare the spectral side at s = (0, 0) with the closed-form main term
/// plus the limiting error series.
pub fn verify_corollary(ctx: &Context, k: u32, n: u64) -> Result<VerificationReport> {
    try_check(ctx, CheckKind::Corollary, &SpectralParams::origin(k, n)?)
}

/// Shape of the report [`scan`] records for a point that fails to evaluate.
pub fn failed_report(ctx: &Context, check: CheckKind, p: &SpectralParams, err: &Error) -> VerificationReport {
    VerificationReport {
        check,
        params: p.into(),
        spectral: None,
        geometric: None,
        residuals: None,
        pass: false,
        timings: Timings::default(),
        provenance: provenance(ctx, p.k),
        error: Some(err.into()),
    }
}

/// Identity checks over a grid, evaluated concurrently. Reports come back in
/// input order and per-point failures are recorded in the report.
pub fn scan(ctx: &Context, grid: &[SpectralParams]) -> Vec<VerificationReport> {
    grid.par_iter().map(|p| run_check(ctx, check_for(p), p)).collect()
}

/// [`scan`] on the calling thread only.
pub fn scan_serial(ctx: &Context, grid: &[SpectralParams]) -> Vec<VerificationReport> {
    grid.iter().map(|p| run_check(ctx, check_for(p), p)).collect()
}

fn check_for(p: &SpectralParams) -> CheckKind {
    if p.s1 == Complex64::new(0.0, 0.0) && p.s2 == Complex64::new(0.0, 0.0) {
        CheckKind::Corollary
    } else {
        CheckKind::Identity
    }
}

/// Every (k, n, shift) combination, weights outermost.
pub fn grid(weights: &[u32], indices: impl IntoIterator<Item = u64> + Clone, shifts: &[(Complex64, Complex64)]) -> Vec<SpectralParams> {
    let mut out = Vec::new();
    for &k in weights {
        for n in indices.clone() {
            for &(s1, s2) in shifts {
                out.push(SpectralParams { k, n, s1, s2 });
            }
        }
    }
    out
}
