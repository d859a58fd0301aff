//! Timeline visualization for video annotation packages.
//!
//! A package ([`model::AnnotationPackage`]) holds typed, time-anchored
//! annotations on one media item. A configuration string
//! ([`config::TimelineConfig`]) selects tracks, a time window and color rules;
//! [`layout::layout_timeline`] turns both into integer-pixel geometry and
//! [`svg::render_svg`] serializes that geometry to byte-stable SVG.
//!
//! ```
//! use tlviz_core::{fixture, model::AnnotationPackage, pipeline};
//!
//! let pkg = AnnotationPackage::new(fixture::generate_package(&Default::default())).unwrap();
//! let svg = pipeline::render_for(&pkg, "tracks=camera&from=00:01:00&to=00:02:00", 800).unwrap();
//! assert!(svg.as_str().starts_with("<svg "));
//! ```

pub mod color;
pub mod config;
pub mod fixture;
pub mod layout;
pub mod model;
pub mod pipeline;
pub mod stats;
pub mod svg;
pub mod timecode;

pub use color::{ColorResult, ColorSpec, Rgb};
pub use config::{parse_config, resolve_config, serialize_config, ResolvedConfig, TimelineConfig};
pub use layout::{layout_timeline, TimelineLayout};
pub use model::{parse_package, query_window, validate_package, AnnotationPackage};
pub use svg::{render_svg, SvgDocument};
pub use timecode::{format_timecode, parse_timecode, Timecode};
