//! Byte-stable SVG output for timeline layouts.
//!
//! Element order is fixed (defs, background, axis, tracks top to bottom),
//! attributes are emitted in alphabetical order, and every number goes
//! through [`format_number`], so equal layouts always give equal bytes.

use std::fmt::Write as _;

use crate::color::{ColorResult, Rgb};
use crate::layout::{LaidBox, TimelineLayout, TrackLayout, AXIS_HEIGHT_PX};

const BACKGROUND: Rgb = Rgb::WHITE;
const TRACK_BAND: Rgb = Rgb::new(0xf4, 0xf4, 0xf4);
const AXIS_INK: Rgb = Rgb::new(0x66, 0x66, 0x66);
const TEXT_INK: Rgb = Rgb::new(0x22, 0x22, 0x22);
const TICK_LENGTH_PX: u32 = 6;
const GUTTER_TEXT_X: u32 = 8;
const LABEL_INSET_PX: u32 = 3;
/// Rough advance width of one 12 px sans-serif glyph, for truncation.
const GLYPH_PX: u32 = 7;

/// A rendered SVG document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvgDocument(String);

impl SvgDocument {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

/// Fixed-point text with at most two decimals, trailing zeros trimmed and
/// negative zero written as `0`.
pub fn format_number(v: f64) -> String {
    if !v.is_finite() {
        return "0".to_owned();
    }
    let mut s = format!("{v:.2}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".to_owned();
    }
    s
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

enum Attr {
    Num(f64),
    Text(String),
}

impl From<u32> for Attr {
    fn from(v: u32) -> Self {
        Attr::Num(f64::from(v))
    }
}

impl From<f64> for Attr {
    fn from(v: f64) -> Self {
        Attr::Num(v)
    }
}

impl From<&str> for Attr {
    fn from(v: &str) -> Self {
        Attr::Text(v.to_owned())
    }
}

impl From<String> for Attr {
    fn from(v: String) -> Self {
        Attr::Text(v)
    }
}

impl From<Rgb> for Attr {
    fn from(c: Rgb) -> Self {
        Attr::Text(c.to_string())
    }
}

macro_rules! attrs {
    ($($name:literal => $value:expr),* $(,)?) => {
        vec![$(($name, Attr::from($value))),*]
    };
}

struct Writer {
    out: String,
    depth: usize,
}

impl Writer {
    fn start_tag(&mut self, name: &str, mut attrs: Vec<(&str, Attr)>) {
        attrs.sort_by(|a, b| a.0.cmp(b.0));
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
        self.out.push('<');
        self.out.push_str(name);
        for (key, value) in attrs {
            let value = match value {
                Attr::Num(v) => format_number(v),
                Attr::Text(s) => escape(&s),
            };
            write!(self.out, " {key}=\"{value}\"").expect("writing to a String");
        }
    }

    fn open(&mut self, name: &str, attrs: Vec<(&str, Attr)>) {
        self.start_tag(name, attrs);
        self.out.push_str(">\n");
        self.depth += 1;
    }

    fn close(&mut self, name: &str) {
        self.depth -= 1;
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
        writeln!(self.out, "</{name}>").expect("writing to a String");
    }

    fn empty(&mut self, name: &str, attrs: Vec<(&str, Attr)>) {
        self.start_tag(name, attrs);
        self.out.push_str("/>\n");
    }

    fn text(&mut self, name: &str, attrs: Vec<(&str, Attr)>, text: &str) {
        self.start_tag(name, attrs);
        writeln!(self.out, ">{}</{name}>", escape(text)).expect("writing to a String");
    }
}

fn gradient_id(annotation_id: &str) -> String {
    format!("g-{annotation_id}")
}

/// Dark text on light fills, light text on dark ones.
fn ink_for(fill: Rgb) -> Rgb {
    let luma = 299 * u32::from(fill.r) + 587 * u32::from(fill.g) + 114 * u32::from(fill.b);
    if luma >= 128_000 {
        TEXT_INK
    } else {
        Rgb::WHITE
    }
}

fn truncate_label(label: &str, w: u32) -> Option<String> {
    let max_chars = (w.saturating_sub(2 * LABEL_INSET_PX) / GLYPH_PX) as usize;
    let count = label.chars().count();
    if count <= max_chars {
        return Some(label.to_owned());
    }
    if max_chars < 2 {
        return None;
    }
    let mut s: String = label.chars().take(max_chars - 1).collect();
    s.push('…');
    Some(s)
}

pub fn render_svg(layout: &TimelineLayout) -> SvgDocument {
    let width = layout.total_width_px();
    let height = layout.total_height_px;
    let gutter = layout.gutter_px;
    let mut w = Writer {
        out: String::with_capacity(4096 + 160 * layout.box_count()),
        depth: 0,
    };

    w.open(
        "svg",
        attrs! {
            "xmlns" => "http://www.w3.org/2000/svg",
            "version" => "1.1",
            "width" => width,
            "height" => height,
            "viewBox" => format!("0 0 {width} {height}"),
            "font-family" => "sans-serif",
            "font-size" => 12u32,
        },
    );

    let mut gradients: Vec<(String, Rgb, Rgb)> = layout
        .tracks
        .iter()
        .flat_map(|t| &t.boxes)
        .filter_map(|b| match b.color {
            ColorResult::Gradient { start, end } => Some((gradient_id(&b.annotation_id), start, end)),
            ColorResult::Solid(_) => None,
        })
        .collect();
    gradients.sort_by(|a, b| a.0.cmp(&b.0));
    if !gradients.is_empty() {
        w.open("defs", Vec::new());
        for (id, start, end) in gradients {
            w.open(
                "linearGradient",
                attrs! { "id" => id, "x1" => 0u32, "x2" => 1u32, "y1" => 0u32, "y2" => 0u32 },
            );
            w.empty("stop", attrs! { "offset" => 0u32, "stop-color" => start });
            w.empty("stop", attrs! { "offset" => 1u32, "stop-color" => end });
            w.close("linearGradient");
        }
        w.close("defs");
    }

    w.empty(
        "rect",
        attrs! { "fill" => BACKGROUND, "height" => height, "width" => width, "x" => 0u32, "y" => 0u32 },
    );

    w.open("g", attrs! { "id" => "axis" });
    w.empty(
        "line",
        attrs! {
            "stroke" => AXIS_INK,
            "x1" => gutter, "x2" => width,
            "y1" => AXIS_HEIGHT_PX, "y2" => AXIS_HEIGHT_PX,
        },
    );
    for tick in &layout.ticks {
        let x = gutter + tick.x;
        w.empty(
            "line",
            attrs! {
                "stroke" => AXIS_INK,
                "x1" => x, "x2" => x,
                "y1" => AXIS_HEIGHT_PX - TICK_LENGTH_PX, "y2" => AXIS_HEIGHT_PX,
            },
        );
        w.text(
            "text",
            attrs! {
                "fill" => AXIS_INK,
                "font-size" => 10u32,
                "text-anchor" => "middle",
                "x" => x,
                "y" => AXIS_HEIGHT_PX - TICK_LENGTH_PX - 2,
            },
            &tick.label,
        );
    }
    w.close("g");

    for track in &layout.tracks {
        render_track(&mut w, layout, track);
    }

    w.close("svg");
    SvgDocument(w.out)
}

fn render_track(w: &mut Writer, layout: &TimelineLayout, track: &TrackLayout) {
    let gutter = layout.gutter_px;
    let lane_h = track.lane_height_px;
    let rows_top = track.y_top + 2;
    w.open(
        "g",
        attrs! {
            "data-mode" => match track.mode {
                crate::layout::TrackMode::Boxes => "boxes",
                crate::layout::TrackMode::Binned => "binned",
            },
            "data-type-id" => track.type_id.as_str(),
            "id" => format!("track-{}", track.type_id),
        },
    );
    w.empty(
        "rect",
        attrs! {
            "fill" => TRACK_BAND,
            "height" => track.height_px,
            "width" => layout.viewport.width_px,
            "x" => gutter,
            "y" => track.y_top,
        },
    );
    w.text(
        "text",
        attrs! {
            "fill" => TEXT_INK,
            "x" => GUTTER_TEXT_X,
            "y" => track.y_top + track.height_px.min(28) / 2 + 4,
        },
        &track.label,
    );

    let mut boxes: Vec<&LaidBox> = track.boxes.iter().collect();
    boxes.sort_by(|a, b| (a.lane, a.x, &a.annotation_id).cmp(&(b.lane, b.x, &b.annotation_id)));
    for b in boxes {
        let y = rows_top + b.lane * lane_h + 1;
        let h = lane_h - 2;
        let fill = match b.color {
            ColorResult::Solid(c) => c.to_string(),
            ColorResult::Gradient { .. } => format!("url(#{})", gradient_id(&b.annotation_id)),
        };
        w.empty(
            "rect",
            attrs! {
                "data-annotation-id" => b.annotation_id.as_str(),
                "fill" => fill,
                "height" => h,
                "width" => b.w,
                "x" => gutter + b.x,
                "y" => y,
            },
        );
        if let Some(text) = b.label.as_deref().and_then(|l| truncate_label(l, b.w)) {
            w.text(
                "text",
                attrs! {
                    "fill" => ink_for(b.color.primary()),
                    "x" => gutter + b.x + LABEL_INSET_PX,
                    "y" => y + h / 2 + 4,
                },
                &text,
            );
        }
    }

    let max_count = track.bins.iter().map(|b| b.count).max().unwrap_or(1);
    for bin in &track.bins {
        let opacity = 0.25 + 0.75 * f64::from(bin.count) / f64::from(max_count);
        w.empty(
            "rect",
            attrs! {
                "data-bin-index" => bin.index,
                "data-count" => bin.count,
                "fill" => bin.color,
                "fill-opacity" => opacity,
                "height" => lane_h - 2,
                "width" => bin.w,
                "x" => gutter + bin.x,
                "y" => rows_top + 1,
            },
        );
    }
    w.close("g");
}
