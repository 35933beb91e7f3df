//! Descriptor documents, analysis reports and basis payloads.
//!
//! A descriptor document is a JSON object
//! `{"inclusion_matrix": [[..]], "b_dims": [..], "a_dims"?: [..], "label"?: ".."}`.
//! Reports are built once as a [`serde_json::Value`]; the machine rendering
//! pretty-prints it and the human rendering flattens it to `path: value`
//! lines, so the two cannot drift apart.

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use serde_json::Value;

use crate::algebra::{AlgebraElement, CMatrix, C64};
use crate::basis::{build_regular_onb, SolverConfig, UnitaryFamily};
use crate::classify::{
    classify_regular, depth, spectral_condition, DecompositionTree, DepthReport, RegularityVerdict,
    SpectralReport, DEFAULT_DEPTH_MAX,
};
use crate::error::{Error, Result};
use crate::inclusion::InclusionDescriptor;
use crate::verify::{certify_regularity_by_span, verify_family, SpanCertificate, VerificationReport};

/// Exit status of a completed analysis, whatever the verdict.
pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
/// A precondition failed and the refusal carries a certificate.
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;
/// A re-verified basis payload failed at least one check.
pub const EXIT_UNVERIFIED: i32 = 5;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotRegular(_) | Error::SpectralConditionFails(_) | Error::NotNormalizerMatrix(_) => EXIT_REFUSED,
        Error::SolverExhausted { .. } => EXIT_SOLVER,
        Error::Io { .. } => EXIT_IO,
        _ => EXIT_INVALID,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorDocument {
    pub inclusion_matrix: Vec<Vec<u64>>,
    pub b_dims: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_dims: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl DescriptorDocument {
    pub fn from_descriptor(d: &InclusionDescriptor, label: Option<String>) -> Self {
        Self {
            inclusion_matrix: d.matrix().to_rows(),
            b_dims: d.b_dims().to_vec(),
            a_dims: Some(d.a_dims().to_vec()),
            label,
        }
    }

    /// Validates the document, naming the offending field on failure.
    pub fn to_descriptor(&self) -> Result<InclusionDescriptor> {
        let field = |path: String, e: &Error| Error::Validation { path, message: e.to_string() };
        let d = InclusionDescriptor::from_rows(self.inclusion_matrix.clone(), self.b_dims.clone()).map_err(
            |e| match &e {
                Error::EmptyMatrix => field("inclusion_matrix".into(), &e),
                Error::RaggedMatrix { row, .. } | Error::ZeroRow(row) => field(format!("inclusion_matrix[{row}]"), &e),
                Error::ZeroColumn(col) => field(format!("inclusion_matrix[*][{col}]"), &e),
                Error::NonPositiveDim { index } => field(format!("b_dims[{index}]"), &e),
                _ => field("b_dims".into(), &e),
            },
        )?;
        if let Some(given) = &self.a_dims {
            let expected = d.a_dims();
            if given.len() != expected.len() {
                return Err(Error::Validation {
                    path: "a_dims".into(),
                    message: format!("has length {}, expected {}", given.len(), expected.len()),
                });
            }
            if let Some(i) = (0..given.len()).find(|&i| given[i] != expected[i]) {
                return Err(Error::Validation {
                    path: format!("a_dims[{i}]"),
                    message: format!("is {}, but A·m' gives {}", given[i], expected[i]),
                });
            }
        }
        Ok(d)
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

pub fn parse_document(text: &str) -> Result<DescriptorDocument> {
    serde_json::from_str(text).map_err(parse_error)
}

pub fn parse_descriptor(text: &str) -> Result<InclusionDescriptor> {
    parse_document(text)?.to_descriptor()
}

/// Pretty JSON for a descriptor; [`parse_descriptor`] inverts it.
pub fn emit_descriptor(d: &InclusionDescriptor, label: Option<&str>) -> String {
    serde_json::to_string_pretty(&DescriptorDocument::from_descriptor(d, label.map(str::to_owned)))
        .expect("plain data serializes")
}

/// Knobs shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    /// Solver target and verification tolerance.
    pub tolerance: f64,
    pub seed: u64,
    pub max_iters: usize,
    pub restarts: usize,
    pub depth_max: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        let cfg = SolverConfig::default();
        Self {
            tolerance: cfg.tolerance,
            seed: cfg.seed,
            max_iters: cfg.max_iterations,
            restarts: cfg.restarts,
            depth_max: DEFAULT_DEPTH_MAX,
        }
    }
}

impl RunOptions {
    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            tolerance: self.tolerance,
            max_iterations: self.max_iters,
            restarts: self.restarts,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum DepthEntry {
    Found(DepthReport),
    Exceeded { exceeds_n_max: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum BasisSummary {
    Built {
        d: usize,
        gram_residual: f64,
        verification: VerificationReport,
        span: SpanCertificate,
    },
    NotApplicable(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub descriptor: DescriptorDocument,
    pub verdict: RegularityVerdict,
    pub spectral: SpectralReport,
    pub depth: DepthEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionTree>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis_summary: Option<BasisSummary>,
}

impl AnalysisReport {
    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Classification, spectral condition, depth and decomposition. The basis
/// summary is only filled in to say why no basis exists.
pub fn run_analyze(d: &InclusionDescriptor, label: Option<String>, opts: &RunOptions) -> AnalysisReport {
    let verdict = classify_regular(d);
    let spectral = spectral_condition(d);
    let depth = match depth(d.matrix(), opts.depth_max) {
        Ok(r) => DepthEntry::Found(r),
        Err(_) => DepthEntry::Exceeded { exceeds_n_max: opts.depth_max },
    };
    let basis_summary = if !verdict.is_regular() {
        Some(BasisSummary::NotApplicable("not applicable: inclusion is not regular".into()))
    } else if !spectral.satisfied {
        Some(BasisSummary::NotApplicable("not applicable: spectral condition fails".into()))
    } else {
        None
    };
    AnalysisReport {
        descriptor: DescriptorDocument::from_descriptor(d, label.clone()),
        label,
        decomposition: verdict.decomposition().cloned(),
        verdict,
        spectral,
        depth,
        basis_summary,
    }
}

/// Builds and re-verifies a basis. Refusals come back as
/// [`Error::NotRegular`] or [`Error::SpectralConditionFails`] with their
/// certificates.
pub fn run_build_basis(
    d: &InclusionDescriptor,
    label: Option<String>,
    opts: &RunOptions,
) -> Result<(AnalysisReport, UnitaryFamily)> {
    let family = build_regular_onb(d, &opts.solver_config())?;
    let mut report = run_analyze(d, label, opts);
    report.basis_summary = Some(summarize(&family, opts.tolerance)?);
    Ok((report, family))
}

/// Full verification of a family, as it appears in reports.
pub fn summarize(family: &UnitaryFamily, tolerance: f64) -> Result<BasisSummary> {
    let verification = verify_family(family, tolerance)?;
    let span = if verification.overall {
        certify_regularity_by_span(family.inclusion(), family, tolerance)?
    } else {
        SpanCertificate { certified: false, reconstruction_residual: f64::NAN, rank: 0, dim_a: family.inclusion().a_shape().dim() }
    };
    Ok(BasisSummary::Built { d: family.d(), gram_residual: family.gram_residual(), verification, span })
}

/// Machine form of a refusal: the error text plus its certificate.
pub fn refusal_value(err: &Error) -> Value {
    let certificate = match err {
        Error::NotRegular(w) => serde_json::to_value(w).ok(),
        Error::SpectralConditionFails(r) => serde_json::to_value(r).ok(),
        Error::NotNormalizerMatrix(f) => serde_json::to_value(f).ok(),
        _ => None,
    };
    let mut v = serde_json::json!({ "refused": err.to_string(), "exit_code": exit_code(err) });
    if let Some(c) = certificate {
        v["certificate"] = c;
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Machine,
    Human,
    Both,
}

pub fn render_machine(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("value serializes")
}

/// `path: value` lines with paths like `spectral.per_block_d[1]`.
pub fn flatten(v: &Value) -> Vec<(String, String)> {
    fn walk(v: &Value, path: String, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) if !map.is_empty() => {
                for (k, x) in map {
                    let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                    walk(x, p, out);
                }
            }
            Value::Array(xs) if !xs.is_empty() => {
                for (i, x) in xs.iter().enumerate() {
                    walk(x, format!("{path}[{i}]"), out);
                }
            }
            Value::String(s) => out.push((path, s.clone())),
            other => out.push((path, other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk(v, String::new(), &mut out);
    out
}

pub fn render_human(v: &Value) -> String {
    flatten(v).into_iter().map(|(p, x)| format!("{p}: {x}\n")).collect()
}

pub fn render(v: &Value, mode: OutputMode) -> String {
    match mode {
        OutputMode::Machine => render_machine(v) + "\n",
        OutputMode::Human => render_human(v),
        OutputMode::Both => format!("{}\n{}", render_machine(v), render_human(v)),
    }
}

/// A real number written with 17 significant digits.
struct Digits17(f64);

impl Serialize for Digits17 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

#[derive(Serialize)]
struct MatrixOut {
    rows: usize,
    cols: usize,
    data: Vec<[Digits17; 2]>,
}

#[derive(Serialize)]
struct PayloadOut<'a> {
    descriptor: DescriptorDocument,
    d: usize,
    members: Vec<Vec<MatrixOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<&'a BasisSummary>,
}

/// Basis payload: per member, per summand, a row-major matrix of
/// `[re, im]` pairs.
pub fn emit_basis_payload(family: &UnitaryFamily, summary: Option<&BasisSummary>) -> String {
    let members = family
        .members()
        .iter()
        .map(|w| {
            w.blocks()
                .iter()
                .map(|b| MatrixOut {
                    rows: b.nrows(),
                    cols: b.ncols(),
                    data: (0..b.nrows())
                        .flat_map(|r| (0..b.ncols()).map(move |c| (r, c)))
                        .map(|(r, c)| [Digits17(b[(r, c)].re), Digits17(b[(r, c)].im)])
                        .collect(),
                })
                .collect()
        })
        .collect();
    let out = PayloadOut {
        descriptor: DescriptorDocument::from_descriptor(family.descriptor(), None),
        d: family.d(),
        members,
        summary,
    };
    serde_json::to_string_pretty(&out).expect("payload serializes")
}

#[derive(Deserialize)]
struct MatrixIn {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
struct PayloadIn {
    #[serde(default)]
    descriptor: Option<DescriptorDocument>,
    members: Vec<Vec<MatrixIn>>,
}

/// Parsed basis payload: the embedded descriptor (if any) and the members.
pub struct BasisPayload {
    pub descriptor: Option<DescriptorDocument>,
    pub members: Vec<AlgebraElement>,
}

pub fn parse_basis_payload(text: &str) -> Result<BasisPayload> {
    let raw: PayloadIn = serde_json::from_str(text).map_err(parse_error)?;
    let mut members = Vec::with_capacity(raw.members.len());
    for (k, blocks) in raw.members.into_iter().enumerate() {
        let mut out = Vec::with_capacity(blocks.len());
        for (i, m) in blocks.into_iter().enumerate() {
            if m.data.len() != m.rows * m.cols {
                return Err(Error::Validation {
                    path: format!("members[{k}][{i}].data"),
                    message: format!("has {} entries, expected {}", m.data.len(), m.rows * m.cols),
                });
            }
            out.push(CMatrix::from_row_iterator(m.rows, m.cols, m.data.into_iter().map(|[re, im]| C64::new(re, im))));
        }
        members.push(AlgebraElement::from_blocks(out));
    }
    Ok(BasisPayload { descriptor: raw.descriptor, members })
}
