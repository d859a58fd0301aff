use std::collections::BTreeMap;

use serde::Serialize;

use super::{pixel_span, Viewport};
use crate::color::{ColorResult, Rgb};
use crate::model::Annotation;

pub const BIN_WIDTH_PX: u32 = 4;

/// A fixed-width density strip standing in for many annotations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Bin {
    pub index: u32,
    pub x: u32,
    pub w: u32,
    pub count: u32,
    /// Most frequent color among the bin's annotations.
    pub color: Rgb,
}

/// Splits the viewport into 4 px bins and counts, for each bin, the
/// annotations whose clipped pixel span touches it. Empty bins are omitted.
pub fn bin_track(
    annotations: &[&Annotation],
    vp: &Viewport,
    color_of: impl Fn(&Annotation) -> ColorResult,
) -> Vec<Bin> {
    let bin_count = vp.width_px.div_ceil(BIN_WIDTH_PX) as usize;
    let mut tallies: Vec<BTreeMap<Rgb, u32>> = vec![BTreeMap::new(); bin_count];
    for ann in annotations {
        let (x, w) = pixel_span(ann.begin, ann.end, vp);
        let color = color_of(ann).primary();
        let first = (x / BIN_WIDTH_PX) as usize;
        let last = ((x + w - 1) / BIN_WIDTH_PX) as usize;
        for tally in &mut tallies[first..=last] {
            *tally.entry(color).or_insert(0) += 1;
        }
    }
    tallies
        .into_iter()
        .enumerate()
        .filter(|(_, tally)| !tally.is_empty())
        .map(|(i, tally)| {
            let count = tally.values().sum();
            // Ascending color order plus a strict comparison keeps the
            // lowest color among equally frequent ones.
            let (color, _) = tally.iter().fold(
                (Rgb::BLACK, 0),
                |best, (&c, &n)| {
                    if n > best.1 {
                        (c, n)
                    } else {
                        best
                    }
                },
            );
            let x = i as u32 * BIN_WIDTH_PX;
            Bin {
                index: i as u32,
                x,
                w: BIN_WIDTH_PX.min(vp.width_px - x),
                count,
                color,
            }
        })
        .collect()
}
