//! Timeline geometry.
//!
//! All positions are integer pixels, rounded half-up. Horizontal positions
//! are relative to the plotting area, which starts after the label gutter.

mod bins;
mod lanes;
mod ticks;

use serde::Serialize;
use thiserror::Error;

pub use bins::{bin_track, Bin, BIN_WIDTH_PX};
pub use lanes::{assign_lanes, lane_count};
pub use ticks::{choose_ticks, tick_step, Tick, MIN_TICK_SPACING_PX};

use crate::color::{eval_color, ColorResult};
use crate::config::{LabelMode, ResolvedConfig};
use crate::model::{query_window, AnnotationPackage, QueryError};
use crate::timecode::Timecode;

pub const MIN_WIDTH_PX: u32 = 100;
pub const GUTTER_PX: u32 = 140;
pub const AXIS_HEIGHT_PX: u32 = 20;
pub const TRACK_GAP_PX: u32 = 8;
pub const TRACK_PADDING_PX: u32 = 4;
/// Boxes narrower than this carry no inline label.
pub const MIN_LABEL_WIDTH_PX: u32 = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("width must be at least {MIN_WIDTH_PX} px (got {0})")]
    Width(u32),
    #[error("empty viewport [{from}, {to})")]
    EmptyViewport { from: Timecode, to: Timecode },
    #[error("annotations not sorted by (begin, end, id) at index {index}")]
    UnsortedInput { index: usize },
    #[error(transparent)]
    Query(#[from] QueryError),
}

/// A time window mapped onto a pixel width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Viewport {
    pub from: Timecode,
    pub to: Timecode,
    pub width_px: u32,
}

impl Viewport {
    pub fn new(from: Timecode, to: Timecode, width_px: u32) -> Result<Self, LayoutError> {
        if width_px < MIN_WIDTH_PX {
            return Err(LayoutError::Width(width_px));
        }
        if from >= to {
            return Err(LayoutError::EmptyViewport { from, to });
        }
        Ok(Viewport { from, to, width_px })
    }

    /// Window length in milliseconds.
    pub fn span(&self) -> u64 {
        self.to.millis() - self.from.millis()
    }
}

/// Maps a time to a pixel column: `round_half_up((t - from) / (to - from) * width)`,
/// clamped to `[0, width]`. Computed in exact integer arithmetic.
pub fn time_to_x(t: Timecode, vp: &Viewport) -> u32 {
    if t <= vp.from {
        return 0;
    }
    let offset = u128::from(t.millis() - vp.from.millis());
    let span = u128::from(vp.span());
    let width = u128::from(vp.width_px);
    let x = (2 * offset * width + span) / (2 * span);
    x.min(width) as u32
}

/// Pixel span `(x, w)` of `[begin, end)`: at least one pixel wide and kept
/// inside the viewport.
pub fn pixel_span(begin: Timecode, end: Timecode, vp: &Viewport) -> (u32, u32) {
    let width = vp.width_px;
    let x = time_to_x(begin, vp).min(width - 1);
    let x_end = time_to_x(end, vp);
    let w = x_end.saturating_sub(x).max(1).min(width - x);
    (x, w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LaidBox {
    pub annotation_id: String,
    pub lane: u32,
    pub x: u32,
    pub w: u32,
    pub color: ColorResult,
    pub label: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrackMode {
    Boxes,
    Binned,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrackLayout {
    pub type_id: String,
    /// The annotation type's human-readable label, shown in the gutter.
    pub label: String,
    pub mode: TrackMode,
    pub lanes_used: u32,
    pub lane_height_px: u32,
    pub boxes: Vec<LaidBox>,
    pub bins: Vec<Bin>,
    pub y_top: u32,
    pub height_px: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TimelineLayout {
    pub viewport: Viewport,
    pub tracks: Vec<TrackLayout>,
    pub ticks: Vec<Tick>,
    pub total_height_px: u32,
    pub gutter_px: u32,
}

impl TimelineLayout {
    /// The layout as the JSON document served to clients.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("layout serialization is infallible")
    }

    pub fn total_width_px(&self) -> u32 {
        self.gutter_px + self.viewport.width_px
    }

    pub fn box_count(&self) -> usize {
        self.tracks.iter().map(|t| t.boxes.len()).sum()
    }
}

/// Lays out every resolved track over the resolved window at `width_px`.
///
/// A track whose visible annotation count exceeds the bin threshold is drawn
/// as density bins; otherwise each annotation gets its own box on a lane.
pub fn layout_timeline(
    pkg: &AnnotationPackage,
    rc: &ResolvedConfig,
    width_px: u32,
) -> Result<TimelineLayout, LayoutError> {
    let vp = Viewport::new(rc.from, rc.to, width_px)?;
    let lane_height_px = rc.height.lane_px();
    let mut tracks = Vec::with_capacity(rc.tracks.len());
    let mut y_top = AXIS_HEIGHT_PX;

    for track in &rc.tracks {
        let ty = pkg
            .annotation_type(&track.type_id)
            .ok_or_else(|| QueryError::UnknownType(track.type_id.clone()))?;
        let visible = query_window(pkg, &track.type_id, vp.from, vp.to)?;
        let color_of = |ann: &crate::model::Annotation| eval_color(&track.color, &ann.value, ty);

        let (mode, lanes_used, boxes, bins) = if visible.len() > rc.bin_threshold as usize {
            (
                TrackMode::Binned,
                1,
                Vec::new(),
                bin_track(&visible, &vp, color_of),
            )
        } else {
            let lanes = assign_lanes(&visible)?;
            let boxes = visible
                .iter()
                .zip(&lanes)
                .map(|(ann, &lane)| {
                    let (x, w) = pixel_span(ann.begin, ann.end, &vp);
                    let label = (rc.label_mode == LabelMode::Inline && w >= MIN_LABEL_WIDTH_PX)
                        .then(|| ann.value.display_text());
                    LaidBox {
                        annotation_id: ann.id.clone(),
                        lane,
                        x,
                        w,
                        color: color_of(ann),
                        label,
                    }
                })
                .collect();
            (TrackMode::Boxes, lane_count(&lanes), boxes, Vec::new())
        };

        let height_px = lanes_used * lane_height_px + TRACK_PADDING_PX;
        tracks.push(TrackLayout {
            type_id: track.type_id.clone(),
            label: ty.label.clone(),
            mode,
            lanes_used,
            lane_height_px,
            boxes,
            bins,
            y_top,
            height_px,
        });
        y_top += height_px + TRACK_GAP_PX;
    }

    let total_height_px = match tracks.last() {
        Some(last) => last.y_top + last.height_px,
        None => AXIS_HEIGHT_PX,
    };
    Ok(TimelineLayout {
        ticks: choose_ticks(&vp),
        viewport: vp,
        tracks,
        total_height_px,
        gutter_px: GUTTER_PX,
    })
}
