use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometric::{MomentBreakdown, Pathway, SpectralParams};
use crate::precision::{Precision, Real};

/// A complex number serialized as `{"re": .., "im": ..}`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for Complex64 {
    fn from(z: ComplexValue) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Identity,
    Corollary,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub k: u32,
    pub n: u64,
    pub s1: ComplexValue,
    pub s2: ComplexValue,
}

impl From<&SpectralParams> for ReportParams {
    fn from(p: &SpectralParams) -> Self {
        ReportParams { k: p.k, n: p.n, s1: p.s1.into(), s2: p.s2.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricSummary {
    pub pathway: Pathway,
    pub m2: [ComplexValue; 4],
    pub e: [ComplexValue; 3],
    pub total: ComplexValue,
    pub e1_terms_used: usize,
    pub e3_terms_used: usize,
    pub e1_tail_bound: f64,
    pub e3_tail_bound: f64,
}

fn to_value<R: Real>(z: crate::precision::Cx<R>) -> ComplexValue {
    ComplexValue { re: z.re.to_f64(), im: z.im.to_f64() }
}

impl<R: Real> From<&MomentBreakdown<R>> for GeometricSummary {
    fn from(b: &MomentBreakdown<R>) -> Self {
        GeometricSummary {
            pathway: b.pathway,
            m2: b.m2_terms.map(to_value),
            e: [to_value(b.e1), to_value(b.e2), to_value(b.e3)],
            total: to_value(b.total),
            e1_terms_used: b.e1_terms_used,
            e3_terms_used: b.e3_terms_used,
            e1_tail_bound: b.e1_tail_bound,
            e3_tail_bound: b.e3_tail_bound,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Relative,
    Absolute,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub abs_residual: f64,
    /// Absent when the spectral side is exactly zero.
    pub rel_residual: Option<f64>,
    pub criterion: Criterion,
    pub tolerance: f64,
}

/// Wall-clock seconds per stage. Excluded from fingerprints.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Timings {
    pub coefficients: f64,
    pub spectral: f64,
    pub geometric: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub precision: Precision,
    pub coefficient_cache_id: Option<String>,
    pub coefficients: usize,
    pub sym2_method: Option<String>,
    pub quadrature_order: Option<usize>,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBlock {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorBlock {
    fn from(e: &Error) -> Self {
        ErrorBlock { kind: e.kind().into(), message: e.to_string() }
    }
}

/// Outcome of one identity or corollary check. When a computation fails the
/// numerical fields stay empty, `pass` is false and `error` says why.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: CheckKind,
    pub params: ReportParams,
    pub spectral: Option<ComplexValue>,
    pub geometric: Option<GeometricSummary>,
    pub residuals: Option<Residuals>,
    pub pass: bool,
    pub timings: Timings,
    pub provenance: Provenance,
    pub error: Option<ErrorBlock>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Io(format!("report json: {e}")))
    }

    /// Serialization with timings zeroed, so two runs on the same inputs
    /// compare byte for byte.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.timings = Timings::default();
        serde_json::to_string(&r).expect("report serializes")
    }

    pub fn fingerprint(&self) -> String {
        hex(&Sha256::digest(self.canonical_json().as_bytes()))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest over a batch, order-sensitive.
pub fn batch_fingerprint(reports: &[VerificationReport]) -> String {
    let mut h = Sha256::new();
    for r in reports {
        h.update(r.canonical_json().as_bytes());
        h.update(b"\n");
    }
    hex(&h.finalize())
}

#[derive(Serialize)]
struct CsvRow<'a> {
    check: CheckKind,
    k: u32,
    n: u64,
    s1_re: f64,
    s1_im: f64,
    s2_re: f64,
    s2_im: f64,
    pathway: Option<Pathway>,
    spectral_re: Option<f64>,
    spectral_im: Option<f64>,
    geometric_re: Option<f64>,
    geometric_im: Option<f64>,
    m2_re: Option<f64>,
    m2_im: Option<f64>,
    e1_re: Option<f64>,
    e1_im: Option<f64>,
    e2_re: Option<f64>,
    e2_im: Option<f64>,
    e3_re: Option<f64>,
    e3_im: Option<f64>,
    abs_residual: Option<f64>,
    rel_residual: Option<f64>,
    criterion: Option<Criterion>,
    pass: bool,
    precision: Precision,
    cache_id: Option<&'a str>,
    error_kind: Option<&'a str>,
    error_message: Option<&'a str>,
}

impl<'a> CsvRow<'a> {
    fn new(r: &'a VerificationReport) -> Self {
        let g = r.geometric.as_ref();
        let m2 = g.map(|g| g.m2.iter().fold(Complex64::new(0.0, 0.0), |a, &b| a + Complex64::from(b)));
        let e = |i: usize| g.map(|g| g.e[i]);
        CsvRow {
            check: r.check,
            k: r.params.k,
            n: r.params.n,
            s1_re: r.params.s1.re,
            s1_im: r.params.s1.im,
            s2_re: r.params.s2.re,
            s2_im: r.params.s2.im,
            pathway: g.map(|g| g.pathway),
            spectral_re: r.spectral.map(|z| z.re),
            spectral_im: r.spectral.map(|z| z.im),
            geometric_re: g.map(|g| g.total.re),
            geometric_im: g.map(|g| g.total.im),
            m2_re: m2.map(|z| z.re),
            m2_im: m2.map(|z| z.im),
            e1_re: e(0).map(|z| z.re),
            e1_im: e(0).map(|z| z.im),
            e2_re: e(1).map(|z| z.re),
            e2_im: e(1).map(|z| z.im),
            e3_re: e(2).map(|z| z.re),
            e3_im: e(2).map(|z| z.im),
            abs_residual: r.residuals.map(|x| x.abs_residual),
            rel_residual: r.residuals.and_then(|x| x.rel_residual),
            criterion: r.residuals.map(|x| x.criterion),
            pass: r.pass,
            precision: r.provenance.precision,
            cache_id: r.provenance.coefficient_cache_id.as_deref(),
            error_kind: r.error.as_ref().map(|e| e.kind.as_str()),
            error_message: r.error.as_ref().map(|e| e.message.as_str()),
        }
    }
}

/// One row per report, complex values split into `_re`/`_im` columns.
pub fn write_csv<W: Write>(reports: &[VerificationReport], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(CsvRow::new(r)).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
