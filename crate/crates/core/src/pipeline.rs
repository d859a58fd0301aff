//! Configuration text to layout or SVG, as shared by the CLI and the service.

use thiserror::Error;

use crate::config::{parse_config, resolve_config, ConfigError, ResolveError};
use crate::layout::{layout_timeline, LayoutError, TimelineLayout, MIN_WIDTH_PX};
use crate::model::AnnotationPackage;
use crate::svg::{render_svg, SvgDocument};

pub const DEFAULT_WIDTH_PX: u32 = 1200;
pub const MAX_WIDTH_PX: u32 = 20_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Width(#[from] WidthError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("width must be an integer from {MIN_WIDTH_PX} to {MAX_WIDTH_PX} (got {0:?})")]
pub struct WidthError(pub String);

/// Parses a pixel width, accepting only `MIN_WIDTH_PX..=MAX_WIDTH_PX`.
pub fn parse_width(s: &str) -> Result<u32, WidthError> {
    s.parse::<u32>()
        .ok()
        .filter(|_| s.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|w| check_width(w).ok())
        .ok_or_else(|| WidthError(s.to_owned()))
}

pub fn check_width(width_px: u32) -> Result<u32, WidthError> {
    if (MIN_WIDTH_PX..=MAX_WIDTH_PX).contains(&width_px) {
        Ok(width_px)
    } else {
        Err(WidthError(width_px.to_string()))
    }
}

pub fn layout_for(
    pkg: &AnnotationPackage,
    config: &str,
    width_px: u32,
) -> Result<TimelineLayout, PipelineError> {
    check_width(width_px)?;
    let config = parse_config(config)?;
    let resolved = resolve_config(&config, pkg)?;
    Ok(layout_timeline(pkg, &resolved, width_px)?)
}

pub fn render_for(
    pkg: &AnnotationPackage,
    config: &str,
    width_px: u32,
) -> Result<SvgDocument, PipelineError> {
    layout_for(pkg, config, width_px).map(|layout| render_svg(&layout))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_bounds() {
        assert_eq!(parse_width("100"), Ok(100));
        assert_eq!(parse_width("20000"), Ok(20_000));
        for bad in ["99", "20001", "", "+500", "12.5", "1e3", "-1", "4294967296"] {
            assert!(parse_width(bad).is_err(), "{bad}");
        }
    }
}
