//! The timeline configuration language.
//!
//! A configuration is a `&`-separated list of `key=value` parameters, meant
//! to live in a URL query or fragment:
//!
//! ```text
//! tracks=shotDuration,colourRange&from=00:01:00&to=00:05:00
//! color=colourRange:map(dark=%23222222,light=%23eeeeee,*=gray)
//! ```
//!
//! Keys are `tracks`, `from`, `to`, `color`, `height`, `bin` and `label`;
//! each may appear at most once. [`serialize_config`] produces the one
//! canonical spelling of a configuration, so two configurations describe the
//! same view exactly when their canonical strings are equal.

mod canonical;
mod parser;
mod resolve;

use std::fmt;

pub use canonical::serialize_config;
pub use parser::{parse_config, ConfigError, ConfigErrorKind};
pub use resolve::{resolve_config, ResolveError, ResolvedConfig, ResolvedTrack};

use crate::color::ColorSpec;
use crate::timecode::Timecode;

pub const DEFAULT_BIN_THRESHOLD: u32 = 2000;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum TrackSelection {
    #[default]
    Wildcard,
    List(Vec<String>),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TrackHeight {
    Compact,
    #[default]
    Normal,
    Large,
}

impl TrackHeight {
    /// Height of a single lane, in pixels.
    pub fn lane_px(self) -> u32 {
        match self {
            TrackHeight::Compact => 12,
            TrackHeight::Normal => 24,
            TrackHeight::Large => 48,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TrackHeight::Compact => "compact",
            TrackHeight::Normal => "normal",
            TrackHeight::Large => "large",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum LabelMode {
    None,
    #[default]
    Inline,
}

impl LabelMode {
    pub fn as_str(self) -> &'static str {
        match self {
            LabelMode::None => "none",
            LabelMode::Inline => "inline",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColorRule {
    pub type_id: String,
    pub spec: ColorSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimelineConfig {
    pub tracks: TrackSelection,
    pub from: Option<Timecode>,
    pub to: Option<Timecode>,
    pub color_rules: Vec<ColorRule>,
    pub height: TrackHeight,
    pub bin_threshold: u32,
    pub label_mode: LabelMode,
}

impl Default for TimelineConfig {
    fn default() -> Self {
        TimelineConfig {
            tracks: TrackSelection::Wildcard,
            from: None,
            to: None,
            color_rules: Vec::new(),
            height: TrackHeight::Normal,
            bin_threshold: DEFAULT_BIN_THRESHOLD,
            label_mode: LabelMode::Inline,
        }
    }
}

impl TimelineConfig {
    pub fn rule_for(&self, type_id: &str) -> Option<&ColorSpec> {
        self.color_rules
            .iter()
            .find(|r| r.type_id == type_id)
            .map(|r| &r.spec)
    }

    /// Puts color rules into canonical order and normalizes negative zero in
    /// scale domains. Two configurations are the same view iff their
    /// normalized forms are equal.
    pub fn normalized(&self) -> TimelineConfig {
        let mut out = self.clone();
        canonical::sort_rules(&mut out);
        if out.from == Some(Timecode::ZERO) {
            out.from = None;
        }
        for rule in &mut out.color_rules {
            if let ColorSpec::Scale {
                domain: Some((min, max)),
                ..
            } = &mut rule.spec
            {
                *min += 0.0;
                *max += 0.0;
            }
        }
        out
    }
}

impl fmt::Display for TimelineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_config(self))
    }
}

impl std::str::FromStr for TimelineConfig {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_config(s)
    }
}
