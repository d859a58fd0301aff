//! Per-track corpus statistics.

use std::fmt::Write as _;

use crate::layout::{assign_lanes, lane_count};
use crate::model::{AnnotationPackage, ValueKind};

#[derive(Debug, Clone, PartialEq)]
pub struct TrackStats {
    pub type_id: String,
    pub label: String,
    pub value_kind: ValueKind,
    pub count: usize,
    /// Length of the union of all annotation intervals, in milliseconds.
    pub covered_ms: u64,
    /// Lanes needed to draw the whole track without overlap.
    pub max_lanes: u32,
}

impl TrackStats {
    pub fn coverage(&self, duration_ms: u64) -> f64 {
        self.covered_ms as f64 / duration_ms as f64
    }
}

pub fn package_stats(pkg: &AnnotationPackage) -> Vec<TrackStats> {
    pkg.types()
        .iter()
        .map(|ty| {
            let track = pkg.track(&ty.id).expect("declared type");
            let lanes = assign_lanes(&track).expect("tracks are kept sorted");
            let mut covered_ms = 0;
            let mut reach = 0;
            for ann in &track {
                let (b, e) = (ann.begin.millis(), ann.end.millis());
                if e > reach {
                    covered_ms += e - b.max(reach);
                    reach = e;
                }
            }
            TrackStats {
                type_id: ty.id.clone(),
                label: ty.label.clone(),
                value_kind: ty.value_kind,
                count: track.len(),
                covered_ms,
                max_lanes: lane_count(&lanes),
            }
        })
        .collect()
}

/// Plain-text table of [`package_stats`].
pub fn stats_table(pkg: &AnnotationPackage) -> String {
    let stats = package_stats(pkg);
    let duration = pkg.media().duration.millis();
    let id_w = stats
        .iter()
        .map(|s| s.type_id.len())
        .chain([4])
        .max()
        .unwrap_or(4);
    let mut out = String::new();
    writeln!(
        out,
        "{:<id_w$}  {:<10}  {:>7}  {:>8}  {:>9}",
        "type", "kind", "count", "coverage", "max lanes"
    )
    .unwrap();
    for s in &stats {
        writeln!(
            out,
            "{:<id_w$}  {:<10}  {:>7}  {:>7.1}%  {:>9}",
            s.type_id,
            s.value_kind.as_str(),
            s.count,
            100.0 * s.coverage(duration),
            s.max_lanes
        )
        .unwrap();
    }
    writeln!(
        out,
        "{} annotations across {} types, media {} ({})",
        pkg.annotations().len(),
        stats.len(),
        pkg.media().id,
        pkg.media().duration
    )
    .unwrap();
    out
}
