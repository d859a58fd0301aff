use serde::Serialize;
use serde_json::Value;
use tlviz_core::model::{AnnotationPackage, Issue, ValueKind};
use tlviz_core::{format_timecode, Timecode};

use crate::registry::StoredPackage;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PackageSummary {
    pub id: String,
    pub media: MediaSummary,
    pub types: Vec<TypeSummary>,
    pub annotation_count: usize,
    pub warnings: Vec<Issue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MediaSummary {
    pub id: String,
    pub uri: String,
    pub duration: Timecode,
    pub duration_timecode: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TypeSummary {
    pub id: String,
    pub label: String,
    pub value_kind: ValueKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vocabulary: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric_domain: Option<(f64, f64)>,
    pub count: usize,
}

impl PackageSummary {
    pub fn new(stored: &StoredPackage) -> Self {
        let pkg = &stored.package;
        let media = pkg.media();
        PackageSummary {
            id: stored.id.clone(),
            media: MediaSummary {
                id: media.id.clone(),
                uri: media.uri.clone(),
                duration: media.duration,
                duration_timecode: format_timecode(media.duration),
            },
            types: pkg
                .types()
                .iter()
                .map(|t| TypeSummary {
                    id: t.id.clone(),
                    label: t.label.clone(),
                    value_kind: t.value_kind,
                    vocabulary: t.vocabulary.clone(),
                    numeric_domain: t.numeric_domain,
                    count: pkg.count(&t.id),
                })
                .collect(),
            annotation_count: pkg.annotations().len(),
            warnings: pkg.warnings().to_vec(),
        }
    }
}

/// One annotation as shown in the UI's detail panel.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnotationDetail {
    pub id: String,
    #[serde(rename = "type")]
    pub type_id: String,
    pub type_label: String,
    pub value_kind: ValueKind,
    pub begin: Timecode,
    pub end: Timecode,
    pub begin_timecode: String,
    pub end_timecode: String,
    pub value: Value,
    pub value_text: String,
}

impl AnnotationDetail {
    pub fn find(pkg: &AnnotationPackage, annotation_id: &str) -> Option<Self> {
        let ann = pkg.annotation(annotation_id)?;
        let ty = pkg.annotation_type(&ann.type_id)?;
        Some(AnnotationDetail {
            id: ann.id.clone(),
            type_id: ann.type_id.clone(),
            type_label: ty.label.clone(),
            value_kind: ty.value_kind,
            begin: ann.begin,
            end: ann.end,
            begin_timecode: format_timecode(ann.begin),
            end_timecode: format_timecode(ann.end),
            value: ann.value.to_json(),
            value_text: ann.value.display_text(),
        })
    }
}
