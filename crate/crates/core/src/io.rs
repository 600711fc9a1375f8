//! Canonical JSON documents, plain-text matrix formats and pipeline manifests.
//!
//! A document is a JSON object carrying its payload fields plus `"kind"` and
//! `"version"`. Keys are sorted and the layout is `serde_json`'s pretty form
//! with a trailing newline, so equal values always produce equal bytes.

use crate::error::{Error, Result};
use crate::instances::{
    LabelCoverInstance, LabelCoverSpec, Labeling, LhpAssignment, LhpSystem, NcpInstance,
    SisInstance, SsatInstance,
};
use crate::superassign::SuperAssignment;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

pub const FORMAT_VERSION: u64 = 1;

/// A value with a canonical JSON document form.
pub trait Document: Sized {
    const KIND: &'static str;
    fn to_body(&self) -> Value;
    fn from_body(body: Value) -> Result<Self>;
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    out
}

/// Typed decoding of a JSON value, reporting the failing location.
pub fn decode<T: DeserializeOwned>(body: Value) -> Result<T> {
    serde_path_to_error::deserialize(body).map_err(|e| Error::SchemaViolation {
        pointer: pointer_of(e.path()),
        message: e.inner().to_string(),
    })
}

fn encode<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("documents serialize to JSON")
}

macro_rules! serde_document {
    ($ty:ty, $kind:literal) => {
        impl Document for $ty {
            const KIND: &'static str = $kind;
            fn to_body(&self) -> Value {
                encode(self)
            }
            fn from_body(body: Value) -> Result<Self> {
                decode(body)
            }
        }
    };
}

serde_document!(SsatInstance, "ssat");
serde_document!(SisInstance, "sis");
serde_document!(NcpInstance, "ncp");
serde_document!(LhpSystem, "lhp");
serde_document!(SuperAssignment, "super_assignment");
serde_document!(LhpAssignment, "lhp_assignment");
serde_document!(Labeling, "labeling");
serde_document!(PipelineManifest, "manifest");

impl Document for LabelCoverInstance {
    const KIND: &'static str = "label_cover";
    fn to_body(&self) -> Value {
        encode(&self.to_spec())
    }
    fn from_body(body: Value) -> Result<Self> {
        LabelCoverInstance::from_spec(&decode::<LabelCoverSpec>(body)?)
    }
}

/// The full document value: payload plus `kind` and `version`.
pub fn to_document<T: Document>(x: &T) -> Value {
    let mut obj = match x.to_body() {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("value".into(), other);
            m
        }
    };
    obj.insert("kind".into(), Value::from(T::KIND));
    obj.insert("version".into(), Value::from(FORMAT_VERSION));
    Value::Object(obj)
}

/// Canonical text of any JSON value.
pub fn canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn to_canonical_string<T: Document>(x: &T) -> String {
    canonical_string(&to_document(x))
}

fn violation(pointer: &str, message: impl Into<String>) -> Error {
    Error::SchemaViolation {
        pointer: pointer.into(),
        message: message.into(),
    }
}

pub fn from_json_str<T: Document>(text: &str) -> Result<T> {
    let v: Value = serde_json::from_str(text).map_err(|e| violation("", e.to_string()))?;
    from_document(v)
}

pub fn from_document<T: Document>(v: Value) -> Result<T> {
    let Value::Object(mut obj) = v else {
        return Err(violation("", "expected a JSON object"));
    };
    match obj.remove("kind") {
        Some(Value::String(k)) if k == T::KIND => {}
        Some(other) => {
            return Err(violation(
                "/kind",
                format!("expected {:?}, found {other}", T::KIND),
            ))
        }
        None => return Err(violation("/kind", "missing field")),
    }
    match obj.remove("version") {
        Some(v) if v.as_u64() == Some(FORMAT_VERSION) => {}
        Some(other) => {
            return Err(violation(
                "/version",
                format!("unsupported version {other}"),
            ))
        }
        None => return Err(violation("/version", "missing field")),
    }
    T::from_body(Value::Object(obj))
}

/// The `kind` tag of a document, without decoding the rest.
pub fn peek_kind(text: &str) -> Result<String> {
    let v: Value = serde_json::from_str(text).map_err(|e| violation("", e.to_string()))?;
    v.get("kind")
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| violation("/kind", "missing field"))
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.display().to_string()),
        _ => Error::Io(format!("{}: {e}", path.display())),
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_instance<T: Document>(path: &Path) -> Result<T> {
    from_json_str(&read_text(path)?)
}

pub fn write_instance<T: Document>(path: &Path, x: &T) -> Result<()> {
    write_text(path, &to_canonical_string(x))
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Content hash of the canonical serialization.
pub fn content_hash<T: Document>(x: &T) -> String {
    sha256_hex(&to_canonical_string(x))
}

fn join_row<T: ToString>(row: &[T]) -> String {
    row.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// Header `n' m' d`, one matrix row per line, then the target.
pub fn sis_to_text(sis: &SisInstance) -> String {
    let mut out = format!("{} {} {}\n", sis.rows(), sis.cols(), sis.bound());
    for row in sis.matrix() {
        out.push_str(&join_row(row));
        out.push('\n');
    }
    out.push_str(&join_row(sis.target()));
    out.push('\n');
    out
}

/// Inverse of [`sis_to_text`]; provenance is not part of the text form.
pub fn sis_from_text(text: &str) -> Result<SisInstance> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let bad = |line: usize, m: &str| violation(&format!("/line/{line}"), m);
    let ints = |l: &str, line: usize| -> Result<Vec<i64>> {
        l.split_whitespace()
            .map(|t| t.parse::<i64>().map_err(|_| bad(line, "expected integers")))
            .collect()
    };
    let header = ints(lines.next().ok_or_else(|| bad(0, "missing header"))?, 0)?;
    let [n, m, d] = header[..] else {
        return Err(bad(0, "header must be `n' m' d`"));
    };
    if n < 0 || m < 0 {
        return Err(bad(0, "negative dimension"));
    }
    let mut matrix = Vec::with_capacity(n as usize);
    for i in 0..n as usize {
        let row = ints(
            lines.next().ok_or_else(|| bad(i + 1, "missing row"))?,
            i + 1,
        )?;
        matrix.push(row);
    }
    let target = match lines.next() {
        Some(l) => ints(l, n as usize + 1)?,
        None if n == 0 => Vec::new(),
        None => return Err(bad(n as usize + 1, "missing target")),
    };
    SisInstance::new(matrix, target, d, m as usize)
}

/// Header `rows cols q d`, one row per line, then the target.
pub fn ncp_to_text(ncp: &NcpInstance) -> String {
    let mut out = format!(
        "{} {} {} {}\n",
        ncp.rows(),
        ncp.cols(),
        ncp.modulus(),
        ncp.bound()
    );
    for row in ncp.matrix() {
        out.push_str(&join_row(row));
        out.push('\n');
    }
    out.push_str(&join_row(ncp.target()));
    out.push('\n');
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stage {
    pub kind: String,
    pub input_hash: String,
    pub output_hash: String,
    pub parameters: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapParams {
    pub g: u64,
    /// `"p/q"`.
    pub s_list: String,
    #[serde(rename = "U")]
    pub u: u64,
    #[serde(rename = "D")]
    pub d: u64,
    pub q: u64,
    #[serde(rename = "K")]
    pub k: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineManifest {
    pub stages: Vec<Stage>,
    pub gap_params: GapParams,
}

impl PipelineManifest {
    pub fn new(gap_params: GapParams) -> Self {
        Self {
            stages: Vec::new(),
            gap_params,
        }
    }

    /// Appends a stage mapping `input` to `output`.
    pub fn record<I: Document, O: Document>(
        &mut self,
        kind: &str,
        input: &I,
        output: &O,
        parameters: BTreeMap<String, Value>,
    ) {
        self.stages.push(Stage {
            kind: kind.into(),
            input_hash: content_hash(input),
            output_hash: content_hash(output),
            parameters,
        });
    }

    /// Whether consecutive stages chain by hash. Stages that fan out from a
    /// shared input (SIS → NCP and SIS → LHP) may instead repeat the
    /// previous stage's input.
    pub fn chains(&self) -> bool {
        self.stages
            .windows(2)
            .all(|w| w[1].input_hash == w[0].output_hash || w[1].input_hash == w[0].input_hash)
    }
}
