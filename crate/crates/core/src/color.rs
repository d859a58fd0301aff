//! Color values and per-track color rules.
//!
//! Every rule evaluation is total: content a rule cannot map falls back to
//! [`Rgb::FALLBACK`] instead of failing.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::model::{AnnotationType, AnnotationValue};

/// An 8-bit-per-channel sRGB color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb {
    pub const BLACK: Rgb = Rgb::new(0x00, 0x00, 0x00);
    pub const WHITE: Rgb = Rgb::new(0xff, 0xff, 0xff);
    /// The color used whenever a rule has nothing to say about a value.
    pub const FALLBACK: Rgb = Rgb::new(0x80, 0x80, 0x80);

    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Rgb { r, g, b }
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02x}{:02x}{:02x}", self.r, self.g, self.b)
    }
}

impl FromStr for Rgb {
    type Err = ColorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_color(s)
    }
}

impl Serialize for Rgb {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub const NAMED_COLORS: [(&str, Rgb); 7] = [
    ("black", Rgb::new(0x00, 0x00, 0x00)),
    ("white", Rgb::new(0xff, 0xff, 0xff)),
    ("red", Rgb::new(0xff, 0x00, 0x00)),
    ("green", Rgb::new(0x00, 0x80, 0x00)),
    ("blue", Rgb::new(0x00, 0x00, 0xff)),
    ("yellow", Rgb::new(0xff, 0xff, 0x00)),
    ("gray", Rgb::new(0x80, 0x80, 0x80)),
];

pub fn named_color(name: &str) -> Option<Rgb> {
    NAMED_COLORS.iter().find(|(n, _)| *n == name).map(|&(_, c)| c)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid color {0:?}: expected #rgb, #rrggbb or one of black, white, red, green, blue, yellow, gray")]
pub struct ColorError(pub String);

/// Accepts `#rgb` (each digit doubled), `#rrggbb` in either case, and the
/// lowercase named colors.
pub fn parse_color(s: &str) -> Result<Rgb, ColorError> {
    let err = || ColorError(s.to_owned());
    let Some(hex) = s.strip_prefix('#') else {
        return named_color(s).ok_or_else(err);
    };
    if !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(err());
    }
    let digit = |i: usize| u8::from_str_radix(&hex[i..=i], 16).expect("hex digit");
    match hex.len() {
        3 => Ok(Rgb::new(digit(0) * 17, digit(1) * 17, digit(2) * 17)),
        6 => {
            let byte = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).expect("hex pair");
            Ok(Rgb::new(byte(0), byte(2), byte(4)))
        }
        _ => Err(err()),
    }
}

pub fn format_color(c: Rgb) -> String {
    c.to_string()
}

/// A per-track rule mapping annotation content to color.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum ColorSpec {
    Fixed(Rgb),
    Map {
        entries: BTreeMap<String, Rgb>,
        wildcard: Option<Rgb>,
    },
    Scale {
        low: Rgb,
        high: Rgb,
        domain: Option<(f64, f64)>,
    },
    #[default]
    Hash,
}

/// The outcome of evaluating a rule against one annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColorResult {
    Solid(Rgb),
    Gradient { start: Rgb, end: Rgb },
}

impl ColorResult {
    /// The single color standing in for this result where only one fits,
    /// such as density bins. Gradients contribute their start.
    pub fn primary(&self) -> Rgb {
        match *self {
            ColorResult::Solid(c) => c,
            ColorResult::Gradient { start, .. } => start,
        }
    }

    fn pair(start: Rgb, end: Rgb) -> Self {
        if start == end {
            ColorResult::Solid(start)
        } else {
            ColorResult::Gradient { start, end }
        }
    }
}

impl Serialize for ColorResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match self {
            ColorResult::Solid(c) => c.serialize(serializer),
            ColorResult::Gradient { start, end } => {
                let mut st = serializer.serialize_struct("Gradient", 2)?;
                st.serialize_field("start", start)?;
                st.serialize_field("end", end)?;
                st.end()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ColorMathError {
    #[error("scale domain must satisfy min < max (got [{min}, {max}])")]
    Domain { min: f64, max: f64 },
    #[error("{name} must be within [0, 1] (got {value})")]
    Range { name: &'static str, value: f64 },
}

/// Rounds half up. The nudge makes values that are exact halves in real
/// arithmetic, but land a few ulps low in floating point, round up too.
fn round_half_up(v: f64) -> f64 {
    (v + 0.5 + 1e-9).floor()
}

fn channel(v: f64) -> u8 {
    round_half_up(v).clamp(0.0, 255.0) as u8
}

/// Linear per-channel interpolation between `low` and `high` at the position
/// of `v` within `[min, max]`, clamped to the endpoints.
pub fn scale_color(low: Rgb, high: Rgb, v: f64, min: f64, max: f64) -> Result<Rgb, ColorMathError> {
    // `!(min < max)` also rejects NaN bounds.
    // written so that NaN bounds are rejected too
    if min.partial_cmp(&max) != Some(std::cmp::Ordering::Less) {
        return Err(ColorMathError::Domain { min, max });
    }
    let t = if (max - min).is_finite() {
        (v - min) / (max - min)
    } else {
        (v / 2.0 - min / 2.0) / (max / 2.0 - min / 2.0)
    };
    let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
    let lerp = |a: u8, b: u8| {
        let (a, b) = (f64::from(a), f64::from(b));
        channel(a + t * (b - a))
    };
    Ok(Rgb::new(
        lerp(low.r, high.r),
        lerp(low.g, high.g),
        lerp(low.b, high.b),
    ))
}

const FNV_OFFSET_BASIS: u32 = 2_166_136_261;
const FNV_PRIME: u32 = 16_777_619;

/// FNV-1a (32-bit) over the UTF-8 bytes of `s`, reduced to a hue in degrees.
pub fn hash_hue(s: &str) -> u16 {
    let hash = s.bytes().fold(FNV_OFFSET_BASIS, |h, b| {
        (h ^ u32::from(b)).wrapping_mul(FNV_PRIME)
    });
    (hash % 360) as u16
}

/// HSL to 8-bit RGB via the chroma construction. `h` is in degrees and is
/// reduced modulo 360.
pub fn hsl_to_rgb(h: f64, s: f64, l: f64) -> Result<Rgb, ColorMathError> {
    for (name, value) in [("saturation", s), ("lightness", l)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(ColorMathError::Range { name, value });
        }
    }
    let h = if h.is_finite() { h.rem_euclid(360.0) } else { 0.0 };
    let chroma = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let sector = h / 60.0;
    let x = chroma * (1.0 - (sector % 2.0 - 1.0).abs());
    let (r1, g1, b1) = match sector as u32 {
        0 => (chroma, x, 0.0),
        1 => (x, chroma, 0.0),
        2 => (0.0, chroma, x),
        3 => (0.0, x, chroma),
        4 => (x, 0.0, chroma),
        _ => (chroma, 0.0, x),
    };
    let m = l - chroma / 2.0;
    Ok(Rgb::new(
        channel((r1 + m) * 255.0),
        channel((g1 + m) * 255.0),
        channel((b1 + m) * 255.0),
    ))
}

const HASH_SATURATION: f64 = 0.60;
const HASH_LIGHTNESS: f64 = 0.50;

/// The default categorical palette: a stable hue per distinct string.
pub fn hash_color(s: &str) -> Rgb {
    hsl_to_rgb(f64::from(hash_hue(s)), HASH_SATURATION, HASH_LIGHTNESS)
        .expect("constant saturation and lightness are in range")
}

impl ColorSpec {
    /// Color for a single token, treating it as nominal content.
    fn token_color(&self, token: &str) -> Rgb {
        match self {
            ColorSpec::Fixed(c) => *c,
            ColorSpec::Map { entries, wildcard } => {
                entries.get(token).copied().or(*wildcard).unwrap_or(Rgb::FALLBACK)
            }
            ColorSpec::Scale { .. } => Rgb::FALLBACK,
            ColorSpec::Hash => hash_color(token),
        }
    }
}

/// Evaluates a rule against one annotation value of the given type.
pub fn eval_color(spec: &ColorSpec, value: &AnnotationValue, ty: &AnnotationType) -> ColorResult {
    match (spec, value) {
        (ColorSpec::Fixed(c), _) => ColorResult::Solid(*c),
        (_, AnnotationValue::Transition { from, to }) => {
            ColorResult::pair(spec.token_color(from), spec.token_color(to))
        }
        (_, AnnotationValue::Nominal(token) | AnnotationValue::Text(token)) => {
            ColorResult::Solid(spec.token_color(token))
        }
        (ColorSpec::Scale { low, high, domain }, AnnotationValue::Numeric(v)) => {
            let (min, max) = domain.or(ty.numeric_domain).unwrap_or((0.0, 1.0));
            ColorResult::Solid(scale_color(*low, *high, *v, min, max).unwrap_or(Rgb::FALLBACK))
        }
        (ColorSpec::Map { .. }, AnnotationValue::Numeric(_)) => ColorResult::Solid(Rgb::FALLBACK),
        (ColorSpec::Hash, AnnotationValue::Numeric(v)) => ColorResult::Solid(hash_color(&v.to_string())),
    }
}
