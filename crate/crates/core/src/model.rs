//! Annotation packages: one media reference plus typed annotation tracks.
//!
//! Packages are read from a strict JSON schema, validated in full, and are
//! immutable once constructed. Intervals are half-open `[begin, end)`;
//! zero-length annotations are widened to one millisecond wherever overlap
//! is tested.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

use crate::timecode::Timecode;

/// True for nonempty strings over `[A-Za-z0-9_-]`.
pub fn is_token(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MediaInfo {
    pub id: String,
    pub uri: String,
    pub duration: Timecode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Text,
    Nominal,
    Numeric,
    Transition,
}

impl ValueKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ValueKind::Text => "text",
            ValueKind::Nominal => "nominal",
            ValueKind::Numeric => "numeric",
            ValueKind::Transition => "transition",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "text" => ValueKind::Text,
            "nominal" => ValueKind::Nominal,
            "numeric" => ValueKind::Numeric,
            "transition" => ValueKind::Transition,
            _ => return None,
        })
    }

    fn needs_vocabulary(self) -> bool {
        matches!(self, ValueKind::Nominal | ValueKind::Transition)
    }
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationType {
    pub id: String,
    pub label: String,
    pub value_kind: ValueKind,
    pub vocabulary: Option<Vec<String>>,
    pub numeric_domain: Option<(f64, f64)>,
}

impl AnnotationType {
    pub fn has_token(&self, token: &str) -> bool {
        self.vocabulary
            .as_ref()
            .is_some_and(|v| v.iter().any(|t| t == token))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnnotationValue {
    Text(String),
    Nominal(String),
    Numeric(f64),
    Transition { from: String, to: String },
}

impl AnnotationValue {
    pub fn kind(&self) -> ValueKind {
        match self {
            AnnotationValue::Text(_) => ValueKind::Text,
            AnnotationValue::Nominal(_) => ValueKind::Nominal,
            AnnotationValue::Numeric(_) => ValueKind::Numeric,
            AnnotationValue::Transition { .. } => ValueKind::Transition,
        }
    }

    /// Human-readable rendering used for inline labels and summaries.
    pub fn display_text(&self) -> String {
        match self {
            AnnotationValue::Text(s) | AnnotationValue::Nominal(s) => s.clone(),
            AnnotationValue::Numeric(v) => v.to_string(),
            AnnotationValue::Transition { from, to } => format!("{from} → {to}"),
        }
    }

    /// JSON form as it appears in a package file.
    pub fn to_json(&self) -> Value {
        match self {
            AnnotationValue::Text(s) | AnnotationValue::Nominal(s) => Value::String(s.clone()),
            AnnotationValue::Numeric(v) => serde_json::Number::from_f64(*v)
                .map(Value::Number)
                .unwrap_or(Value::Null),
            AnnotationValue::Transition { from, to } => {
                serde_json::json!({ "from": from, "to": to })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Annotation {
    pub id: String,
    pub type_id: String,
    pub begin: Timecode,
    pub end: Timecode,
    pub value: AnnotationValue,
}

impl Annotation {
    /// End of the interval used for overlap tests: zero-length annotations
    /// occupy one millisecond.
    pub fn effective_end(&self) -> Timecode {
        if self.end == self.begin {
            Timecode::from_millis(self.begin.millis() + 1)
        } else {
            self.end
        }
    }

    /// Half-open overlap with the window `[from, to)`.
    pub fn overlaps(&self, from: Timecode, to: Timecode) -> bool {
        self.begin < to && self.effective_end() > from
    }

    pub(crate) fn sort_key(&self) -> (Timecode, Timecode, &str) {
        (self.begin, self.end, self.id.as_str())
    }
}

/// Unchecked package contents, as read from disk or assembled in code.
#[derive(Debug, Clone, PartialEq)]
pub struct PackageData {
    pub media: MediaInfo,
    pub types: Vec<AnnotationType>,
    pub annotations: Vec<Annotation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub code: String,
    pub path: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.path, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    fn error(&mut self, code: &str, path: impl Into<String>, message: impl Into<String>) {
        self.errors.push(Issue {
            code: code.into(),
            path: path.into(),
            message: message.into(),
        });
    }

    fn warning(&mut self, code: &str, path: impl Into<String>, message: impl Into<String>) {
        self.warnings.push(Issue {
            code: code.into(),
            path: path.into(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let plural = |n: usize| if n == 1 { "" } else { "s" };
        let (e, w) = (self.errors.len(), self.warnings.len());
        writeln!(f, "{e} error{}, {w} warning{}", plural(e), plural(w))?;
        for issue in &self.errors {
            writeln!(f, "error: {issue}")?;
        }
        for issue in &self.warnings {
            writeln!(f, "warning: {issue}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PackageError {
    #[error("malformed JSON at line {line}, column {column} (byte {position}): {message}")]
    Syntax {
        position: usize,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid package: {} at {}: {} ({} error(s) in total)",
        .0.errors[0].code, .0.errors[0].path, .0.errors[0].message, .0.errors.len())]
    Validation(Box<ValidationReport>),
}

impl PackageError {
    /// Machine-readable code: `syntax_error`, `schema_error`, or the code of
    /// the first validation error.
    pub fn code(&self) -> &str {
        match self {
            PackageError::Syntax { .. } => "syntax_error",
            PackageError::Schema { .. } => "schema_error",
            PackageError::Validation(report) => &report.errors[0].code,
        }
    }

    pub fn path(&self) -> Option<&str> {
        match self {
            PackageError::Syntax { .. } => None,
            PackageError::Schema { path, .. } => Some(path),
            PackageError::Validation(report) => Some(&report.errors[0].path),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("unknown annotation type {0:?}")]
    UnknownType(String),
    #[error("empty query window [{from}, {to})")]
    EmptyWindow { from: Timecode, to: Timecode },
}

/// Reports every invariant violation in `data`, plus warnings for
/// zero-length annotations and annotations ending exactly at the media end.
pub fn validate_package(data: &PackageData) -> ValidationReport {
    let mut report = ValidationReport::default();

    if !is_token(&data.media.id) {
        report.error(
            "invalid_token",
            "media.id",
            format!("{:?} is not a token", data.media.id),
        );
    }
    if data.media.duration.millis() == 0 {
        report.error(
            "duration_not_positive",
            "media.duration",
            "media duration must be > 0",
        );
    }

    let mut type_ids = HashSet::new();
    for (i, ty) in data.types.iter().enumerate() {
        let path = format!("types[{i}]");
        if !is_token(&ty.id) {
            report.error(
                "invalid_token",
                format!("{path}.id"),
                format!("{:?} is not a token", ty.id),
            );
        } else if !type_ids.insert(ty.id.as_str()) {
            report.error(
                "duplicate_type_id",
                format!("{path}.id"),
                format!("type {:?} declared twice", ty.id),
            );
        }
        match (&ty.vocabulary, ty.value_kind.needs_vocabulary()) {
            (None, true) => report.error(
                "missing_vocabulary",
                format!("{path}.vocabulary"),
                format!("{} types require a vocabulary", ty.value_kind),
            ),
            (Some(_), false) => report.error(
                "unexpected_vocabulary",
                format!("{path}.vocabulary"),
                format!("{} types take no vocabulary", ty.value_kind),
            ),
            (Some(vocab), true) => {
                if vocab.is_empty() {
                    report.error(
                        "empty_vocabulary",
                        format!("{path}.vocabulary"),
                        "vocabulary is empty",
                    );
                }
                let mut seen = HashSet::new();
                for (j, token) in vocab.iter().enumerate() {
                    let vpath = format!("{path}.vocabulary[{j}]");
                    if !is_token(token) {
                        report.error("invalid_token", vpath, format!("{token:?} is not a token"));
                    } else if !seen.insert(token.as_str()) {
                        report.error(
                            "duplicate_vocabulary_token",
                            vpath,
                            format!("{token:?} listed twice"),
                        );
                    }
                }
            }
            (None, false) => {}
        }
        if let Some((min, max)) = ty.numeric_domain {
            if ty.value_kind != ValueKind::Numeric {
                report.warning(
                    "ignored_numeric_domain",
                    format!("{path}.numericDomain"),
                    "numeric domain only applies to numeric types",
                );
            } else if !(min.is_finite() && max.is_finite() && min < max) {
                report.error(
                    "invalid_numeric_domain",
                    format!("{path}.numericDomain"),
                    format!("domain [{min}, {max}] must satisfy min < max"),
                );
            }
        }
    }

    let types: HashMap<&str, &AnnotationType> = data.types.iter().map(|t| (t.id.as_str(), t)).collect();
    let duration = data.media.duration;
    let mut annotation_ids = HashSet::new();
    for (i, ann) in data.annotations.iter().enumerate() {
        let path = format!("annotations[{i}]");
        if !is_token(&ann.id) {
            report.error(
                "invalid_token",
                format!("{path}.id"),
                format!("{:?} is not a token", ann.id),
            );
        } else if !annotation_ids.insert(ann.id.as_str()) {
            report.error(
                "duplicate_annotation_id",
                format!("{path}.id"),
                format!("annotation {:?} appears twice", ann.id),
            );
        }
        if ann.begin > ann.end {
            report.error(
                "begin_after_end",
                path.clone(),
                format!("begin {} is after end {}", ann.begin.millis(), ann.end.millis()),
            );
        } else if ann.begin == ann.end {
            report.warning("zero_duration", path.clone(), "annotation has zero duration");
        }
        if ann.end > duration {
            report.error(
                "end_exceeds_duration",
                format!("{path}.end"),
                format!(
                    "end {} exceeds media duration {}",
                    ann.end.millis(),
                    duration.millis()
                ),
            );
        } else if ann.end == duration && duration.millis() > 0 {
            report.warning(
                "end_at_duration",
                format!("{path}.end"),
                "annotation ends at the media end",
            );
        }

        let Some(ty) = types.get(ann.type_id.as_str()) else {
            report.error(
                "unknown_type",
                format!("{path}.type"),
                format!("type {:?} is not declared", ann.type_id),
            );
            continue;
        };
        let vpath = format!("{path}.value");
        if ann.value.kind() != ty.value_kind {
            report.error(
                "value_kind_mismatch",
                vpath,
                format!("{} value on {} type {:?}", ann.value.kind(), ty.value_kind, ty.id),
            );
            continue;
        }
        match &ann.value {
            AnnotationValue::Nominal(token) if !ty.has_token(token) => {
                report.error(
                    "token_not_in_vocabulary",
                    vpath,
                    format!("{token:?} is not in the vocabulary of {:?}", ty.id),
                );
            }
            AnnotationValue::Transition { from, to } => {
                for (end, token) in [("from", from), ("to", to)] {
                    if !ty.has_token(token) {
                        report.error(
                            "token_not_in_vocabulary",
                            format!("{vpath}.{end}"),
                            format!("{token:?} is not in the vocabulary of {:?}", ty.id),
                        );
                    }
                }
            }
            AnnotationValue::Numeric(v) if !v.is_finite() => {
                report.error("non_finite_numeric", vpath, "numeric value must be finite");
            }
            _ => {}
        }
    }
    report
}

/// A validated, immutable annotation package with per-type indexes.
#[derive(Debug, Clone)]
pub struct AnnotationPackage {
    data: PackageData,
    /// Annotation indices per type, sorted by `(begin, end, id)`.
    by_type: HashMap<String, Vec<usize>>,
    warnings: Vec<Issue>,
}

impl PartialEq for AnnotationPackage {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}

impl AnnotationPackage {
    pub fn new(data: PackageData) -> Result<Self, PackageError> {
        let report = validate_package(&data);
        if !report.is_valid() {
            return Err(PackageError::Validation(Box::new(report)));
        }
        let mut by_type: HashMap<String, Vec<usize>> =
            data.types.iter().map(|t| (t.id.clone(), Vec::new())).collect();
        for (i, ann) in data.annotations.iter().enumerate() {
            by_type.get_mut(&ann.type_id).expect("validated").push(i);
        }
        for indices in by_type.values_mut() {
            indices.sort_by(|&a, &b| {
                data.annotations[a]
                    .sort_key()
                    .cmp(&data.annotations[b].sort_key())
            });
        }
        Ok(AnnotationPackage {
            data,
            by_type,
            warnings: report.warnings,
        })
    }

    pub fn media(&self) -> &MediaInfo {
        &self.data.media
    }

    pub fn types(&self) -> &[AnnotationType] {
        &self.data.types
    }

    /// Annotations in file order.
    pub fn annotations(&self) -> &[Annotation] {
        &self.data.annotations
    }

    pub fn data(&self) -> &PackageData {
        &self.data
    }

    pub fn into_data(self) -> PackageData {
        self.data
    }

    /// Warnings collected during validation.
    pub fn warnings(&self) -> &[Issue] {
        &self.warnings
    }

    pub fn annotation_type(&self, id: &str) -> Option<&AnnotationType> {
        self.data.types.iter().find(|t| t.id == id)
    }

    pub fn annotation(&self, id: &str) -> Option<&Annotation> {
        self.data.annotations.iter().find(|a| a.id == id)
    }

    /// All annotations of a type, sorted by `(begin, end, id)`.
    pub fn track(&self, type_id: &str) -> Result<Vec<&Annotation>, QueryError> {
        let indices = self
            .by_type
            .get(type_id)
            .ok_or_else(|| QueryError::UnknownType(type_id.to_owned()))?;
        Ok(indices.iter().map(|&i| &self.data.annotations[i]).collect())
    }

    pub fn count(&self, type_id: &str) -> usize {
        self.by_type.get(type_id).map_or(0, Vec::len)
    }
}

/// Annotations of `type_id` overlapping `[from, to)`, sorted by
/// `(begin, end, id)`.
pub fn query_window<'p>(
    pkg: &'p AnnotationPackage,
    type_id: &str,
    from: Timecode,
    to: Timecode,
) -> Result<Vec<&'p Annotation>, QueryError> {
    if from >= to {
        return Err(QueryError::EmptyWindow { from, to });
    }
    let indices = pkg
        .by_type
        .get(type_id)
        .ok_or_else(|| QueryError::UnknownType(type_id.to_owned()))?;
    let annotations = &pkg.data.annotations;
    // Candidates are the prefix that begins before `to`.
    let candidates = indices.partition_point(|&i| annotations[i].begin < to);
    Ok(indices[..candidates]
        .iter()
        .map(|&i| &annotations[i])
        .filter(|a| a.effective_end() > from)
        .collect())
}

/// Parses and fully validates a package file.
pub fn parse_package(bytes: &[u8]) -> Result<AnnotationPackage, PackageError> {
    AnnotationPackage::new(parse_package_data(bytes)?)
}

/// Parses the package schema without checking semantic invariants.
pub fn parse_package_data(bytes: &[u8]) -> Result<PackageData, PackageError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let position = e.valid_up_to();
        let (line, column) = line_column(&bytes[..position]);
        PackageError::Syntax {
            position,
            line,
            column,
            message: "invalid UTF-8".into(),
        }
    })?;
    let root: Value = serde_json::from_str(text).map_err(|e| {
        let (line, column) = (e.line(), e.column());
        let position = if e.is_eof() {
            text.len()
        } else {
            byte_offset(text, line, column)
        };
        PackageError::Syntax {
            position,
            line,
            column,
            message: e.to_string(),
        }
    })?;
    let root = Obj::new(&root, String::new(), &["media", "types", "annotations"])?;

    let media = {
        let m = root.object("media", &["id", "uri", "duration"])?;
        MediaInfo {
            id: m.string("id")?,
            uri: m.string("uri")?,
            duration: Timecode::from_millis(m.uint("duration")?),
        }
    };

    let mut types = Vec::new();
    for (i, v) in root.array("types")?.iter().enumerate() {
        let t = Obj::new(
            v,
            format!("types[{i}]"),
            &["id", "label", "valueKind", "vocabulary", "numericDomain"],
        )?;
        let kind_name = t.string("valueKind")?;
        let value_kind = ValueKind::parse(&kind_name).ok_or_else(|| {
            t.schema(
                "valueKind",
                format!("expected one of text, nominal, numeric, transition (got {kind_name:?})"),
            )
        })?;
        let vocabulary = match t.optional("vocabulary") {
            None => None,
            Some(_) => Some(
                t.array("vocabulary")?
                    .iter()
                    .enumerate()
                    .map(|(j, v)| {
                        v.as_str().map(str::to_owned).ok_or_else(|| PackageError::Schema {
                            path: format!("{}.vocabulary[{j}]", t.path),
                            message: "expected a string".into(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let numeric_domain = match t.optional("numericDomain") {
            None => None,
            Some(_) => {
                let pair = t.array("numericDomain")?;
                let bad = || t.schema("numericDomain", "expected [min, max] numbers".into());
                match pair.as_slice() {
                    [a, b] => Some((a.as_f64().ok_or_else(bad)?, b.as_f64().ok_or_else(bad)?)),
                    _ => return Err(bad()),
                }
            }
        };
        types.push(AnnotationType {
            id: t.string("id")?,
            label: t.string("label")?,
            value_kind,
            vocabulary,
            numeric_domain,
        });
    }

    let kinds: HashMap<&str, ValueKind> = types.iter().map(|t| (t.id.as_str(), t.value_kind)).collect();
    let mut annotations = Vec::new();
    for (i, v) in root.array("annotations")?.iter().enumerate() {
        let a = Obj::new(
            v,
            format!("annotations[{i}]"),
            &["id", "type", "begin", "end", "value"],
        )?;
        let type_id = a.string("type")?;
        let value = match a.required("value")? {
            Value::String(s) => match kinds.get(type_id.as_str()) {
                Some(ValueKind::Nominal) => AnnotationValue::Nominal(s.clone()),
                _ => AnnotationValue::Text(s.clone()),
            },
            Value::Number(n) => AnnotationValue::Numeric(
                n.as_f64()
                    .ok_or_else(|| a.schema("value", "number out of range".into()))?,
            ),
            obj @ Value::Object(_) => {
                let tr = Obj::new(obj, format!("{}.value", a.path), &["from", "to"])?;
                AnnotationValue::Transition {
                    from: tr.string("from")?,
                    to: tr.string("to")?,
                }
            }
            _ => {
                return Err(a.schema(
                    "value",
                    "expected a string, a number, or {\"from\", \"to\"}".into(),
                ))
            }
        };
        annotations.push(Annotation {
            id: a.string("id")?,
            type_id,
            begin: Timecode::from_millis(a.uint("begin")?),
            end: Timecode::from_millis(a.uint("end")?),
            value,
        });
    }

    Ok(PackageData {
        media,
        types,
        annotations,
    })
}

fn line_column(prefix: &[u8]) -> (usize, usize) {
    let line = prefix.iter().filter(|&&b| b == b'\n').count() + 1;
    let column = prefix.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
    (line, column)
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let line_start: usize = text
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (line_start + column.saturating_sub(1)).min(text.len())
}

fn child_path(parent: &str, key: &str) -> String {
    if parent.is_empty() {
        key.to_owned()
    } else {
        format!("{parent}.{key}")
    }
}

/// A JSON object with a known key set and a path for error messages.
struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Obj<'a> {
    fn new(value: &'a Value, path: String, allowed: &[&str]) -> Result<Self, PackageError> {
        let Value::Object(map) = value else {
            return Err(PackageError::Schema {
                path,
                message: "expected an object".into(),
            });
        };
        if let Some(key) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(PackageError::Schema {
                path: child_path(&path, key),
                message: "unknown key".into(),
            });
        }
        Ok(Obj { map, path })
    }

    fn schema(&self, key: &str, message: String) -> PackageError {
        PackageError::Schema {
            path: child_path(&self.path, key),
            message,
        }
    }

    fn optional(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key)
    }

    fn required(&self, key: &str) -> Result<&'a Value, PackageError> {
        self.map
            .get(key)
            .ok_or_else(|| self.schema(key, "missing field".into()))
    }

    fn string(&self, key: &str) -> Result<String, PackageError> {
        self.required(key)?
            .as_str()
            .map(str::to_owned)
            .ok_or_else(|| self.schema(key, "expected a string".into()))
    }

    fn uint(&self, key: &str) -> Result<u64, PackageError> {
        self.required(key)?
            .as_u64()
            .ok_or_else(|| self.schema(key, "expected a non-negative integer (milliseconds)".into()))
    }

    fn array(&self, key: &str) -> Result<&'a Vec<Value>, PackageError> {
        self.required(key)?
            .as_array()
            .ok_or_else(|| self.schema(key, "expected an array".into()))
    }

    fn object(&self, key: &str, allowed: &[&str]) -> Result<Obj<'a>, PackageError> {
        Obj::new(self.required(key)?, child_path(&self.path, key), allowed)
    }
}

mod wire {
    use serde::Serialize;
    use serde_json::Value;

    #[derive(Serialize)]
    pub struct Package<'a> {
        pub media: Media<'a>,
        pub types: Vec<Type<'a>>,
        pub annotations: Vec<Annotation<'a>>,
    }

    #[derive(Serialize)]
    pub struct Media<'a> {
        pub id: &'a str,
        pub uri: &'a str,
        pub duration: u64,
    }

    #[derive(Serialize)]
    #[serde(rename_all = "camelCase")]
    pub struct Type<'a> {
        pub id: &'a str,
        pub label: &'a str,
        pub value_kind: &'static str,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub vocabulary: Option<&'a [String]>,
        #[serde(skip_serializing_if = "Option::is_none")]
        pub numeric_domain: Option<[f64; 2]>,
    }

    #[derive(Serialize)]
    pub struct Annotation<'a> {
        pub id: &'a str,
        #[serde(rename = "type")]
        pub type_id: &'a str,
        pub begin: u64,
        pub end: u64,
        pub value: Value,
    }
}

/// Serializes package contents in the package file schema.
pub fn package_to_json(data: &PackageData, pretty: bool) -> String {
    let pkg = wire::Package {
        media: wire::Media {
            id: &data.media.id,
            uri: &data.media.uri,
            duration: data.media.duration.millis(),
        },
        types: data
            .types
            .iter()
            .map(|t| wire::Type {
                id: &t.id,
                label: &t.label,
                value_kind: t.value_kind.as_str(),
                vocabulary: t.vocabulary.as_deref(),
                numeric_domain: t.numeric_domain.map(|(a, b)| [a, b]),
            })
            .collect(),
        annotations: data
            .annotations
            .iter()
            .map(|a| wire::Annotation {
                id: &a.id,
                type_id: &a.type_id,
                begin: a.begin.millis(),
                end: a.end.millis(),
                value: a.value.to_json(),
            })
            .collect(),
    };
    let out = if pretty {
        serde_json::to_string_pretty(&pkg)
    } else {
        serde_json::to_string(&pkg)
    };
    out.expect("package serialization is infallible")
}
