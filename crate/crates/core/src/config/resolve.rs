use thiserror::Error;

use super::{LabelMode, TimelineConfig, TrackHeight, TrackSelection};
use crate::color::ColorSpec;
use crate::model::AnnotationPackage;
use crate::timecode::Timecode;

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedTrack {
    pub type_id: String,
    pub color: ColorSpec,
}

/// A configuration bound to one package: concrete tracks, a concrete
/// window, and a color rule for every track.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    pub tracks: Vec<ResolvedTrack>,
    pub from: Timecode,
    pub to: Timecode,
    pub height: TrackHeight,
    pub bin_threshold: u32,
    pub label_mode: LabelMode,
    /// Notes about configuration parts that had no effect.
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("unknown track {0:?}: not declared in the package")]
    UnknownTrack(String),
    #[error("empty viewport: from {from} is not before to {to} after clamping to the media")]
    EmptyViewport { from: Timecode, to: Timecode },
    #[error("the package declares no annotation types")]
    NoTracks,
}

impl ResolveError {
    pub fn code(&self) -> &'static str {
        match self {
            ResolveError::UnknownTrack(_) => "unknown_track",
            ResolveError::EmptyViewport { .. } => "empty_viewport",
            ResolveError::NoTracks => "no_tracks",
        }
    }
}

pub fn resolve_config(
    config: &TimelineConfig,
    pkg: &AnnotationPackage,
) -> Result<ResolvedConfig, ResolveError> {
    let type_ids: Vec<String> = match &config.tracks {
        TrackSelection::Wildcard => pkg.types().iter().map(|t| t.id.clone()).collect(),
        TrackSelection::List(ids) => {
            if let Some(missing) = ids.iter().find(|id| pkg.annotation_type(id).is_none()) {
                return Err(ResolveError::UnknownTrack(missing.clone()));
            }
            ids.clone()
        }
    };
    if type_ids.is_empty() {
        return Err(ResolveError::NoTracks);
    }

    let duration = pkg.media().duration;
    let from = config.from.unwrap_or(Timecode::ZERO).min(duration);
    let to = config.to.unwrap_or(duration).min(duration);
    if from >= to {
        return Err(ResolveError::EmptyViewport { from, to });
    }

    let warnings = config
        .color_rules
        .iter()
        .filter(|r| !type_ids.contains(&r.type_id))
        .map(|r| format!("color rule for {:?} ignored: track not displayed", r.type_id))
        .collect();
    let tracks = type_ids
        .into_iter()
        .map(|type_id| ResolvedTrack {
            color: config.rule_for(&type_id).cloned().unwrap_or_default(),
            type_id,
        })
        .collect();

    Ok(ResolvedConfig {
        tracks,
        from,
        to,
        height: config.height,
        bin_threshold: config.bin_threshold,
        label_mode: config.label_mode,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use crate::model::parse_package;

    fn package() -> AnnotationPackage {
        parse_package(
            br#"{"media": {"id": "m", "uri": "", "duration": 10000},
                "types": [{"id": "cut", "label": "Cut", "valueKind": "text"},
                          {"id": "music", "label": "Music", "valueKind": "text"}],
                "annotations": []}"#,
        )
        .unwrap()
    }

    fn resolve(s: &str) -> Result<ResolvedConfig, ResolveError> {
        resolve_config(&parse_config(s).unwrap(), &package())
    }

    fn ids(rc: &ResolvedConfig) -> Vec<&str> {
        rc.tracks.iter().map(|t| t.type_id.as_str()).collect()
    }

    #[test]
    fn wildcard_uses_declaration_order() {
        let rc = resolve("").unwrap();
        assert_eq!(ids(&rc), ["cut", "music"]);
        assert_eq!((rc.from.millis(), rc.to.millis()), (0, 10_000));
        assert!(rc.tracks.iter().all(|t| t.color == ColorSpec::Hash));
    }

    #[test]
    fn explicit_order_wins() {
        assert_eq!(ids(&resolve("tracks=music,cut").unwrap()), ["music", "cut"]);
    }

    #[test]
    fn unknown_track() {
        assert_eq!(
            resolve("tracks=ghost").unwrap_err(),
            ResolveError::UnknownTrack("ghost".into())
        );
    }

    #[test]
    fn window_is_clamped() {
        let rc = resolve("from=5000&to=99999").unwrap();
        assert_eq!((rc.from.millis(), rc.to.millis()), (5000, 10_000));
        assert!(matches!(
            resolve("from=20000"),
            Err(ResolveError::EmptyViewport { .. })
        ));
        assert!(matches!(
            resolve("from=10000&to=20000"),
            Err(ResolveError::EmptyViewport { .. })
        ));
    }

    #[test]
    fn rules_for_hidden_tracks_are_dropped_with_warning() {
        let rc = resolve("tracks=cut&color=music:fixed(red);cut:fixed(blue)").unwrap();
        assert_eq!(rc.tracks.len(), 1);
        assert_eq!(
            rc.tracks[0].color,
            ColorSpec::Fixed(crate::color::Rgb::new(0, 0, 255))
        );
        assert_eq!(rc.warnings.len(), 1);
        assert!(rc.warnings[0].contains("music"));
    }
}
