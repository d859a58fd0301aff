use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};

use super::{TimelineConfig, TrackSelection, DEFAULT_BIN_THRESHOLD};
use crate::color::{format_color, ColorSpec};
use crate::timecode::{format_timecode, Timecode};

/// RFC 3986 unreserved characters pass through; everything else is escaped.
const COMPONENT: &AsciiSet = &NON_ALPHANUMERIC
    .remove(b'-')
    .remove(b'_')
    .remove(b'.')
    .remove(b'~');

const TRACKS_VALUE: &AsciiSet = &COMPONENT.remove(b'*').remove(b',');

const TIMECODE_VALUE: &AsciiSet = &COMPONENT.remove(b':');

/// Parentheses and `*` stay literal; `#`, `:`, `=`, `,`, `;` are escaped.
const COLOR_VALUE: &AsciiSet = &COMPONENT.remove(b'(').remove(b')').remove(b'*');

/// Canonical rule order: rules for listed tracks follow the track order;
/// all others (every rule, under a wildcard selection) sort by type id.
pub(super) fn sort_rules(config: &mut TimelineConfig) {
    let rank = |type_id: &str| match &config.tracks {
        TrackSelection::List(tracks) => tracks.iter().position(|t| t == type_id),
        TrackSelection::Wildcard => None,
    };
    let mut keyed: Vec<_> = std::mem::take(&mut config.color_rules)
        .into_iter()
        .map(|r| (rank(&r.type_id).unwrap_or(usize::MAX), r))
        .collect();
    keyed.sort_by(|(ra, a), (rb, b)| ra.cmp(rb).then_with(|| a.type_id.cmp(&b.type_id)));
    config.color_rules = keyed.into_iter().map(|(_, r)| r).collect();
}

fn format_real(v: f64) -> String {
    // Display gives the shortest round-tripping decimal, never an exponent.
    (v + 0.0).to_string()
}

fn spec_text(spec: &ColorSpec) -> String {
    match spec {
        ColorSpec::Fixed(c) => format!("fixed({})", format_color(*c)),
        ColorSpec::Map { entries, wildcard } => {
            let mut parts: Vec<String> = entries
                .iter()
                .map(|(token, c)| format!("{token}={}", format_color(*c)))
                .collect();
            if let Some(c) = wildcard {
                parts.push(format!("*={}", format_color(*c)));
            }
            format!("map({})", parts.join(","))
        }
        ColorSpec::Scale { low, high, domain } => match domain {
            Some((min, max)) => format!(
                "scale({},{},{},{})",
                format_color(*low),
                format_color(*high),
                format_real(*min),
                format_real(*max)
            ),
            None => format!("scale({},{})", format_color(*low), format_color(*high)),
        },
        ColorSpec::Hash => "hash".to_owned(),
    }
}

/// The canonical text of a configuration: keys in the fixed order
/// `tracks, from, to, color, height, bin, label`, defaults omitted, values
/// normalized and percent-encoded.
pub fn serialize_config(config: &TimelineConfig) -> String {
    let config = config.normalized();
    let defaults = TimelineConfig::default();
    let mut params: Vec<String> = Vec::new();

    if let TrackSelection::List(tracks) = &config.tracks {
        let text = tracks.join(",");
        params.push(format!("tracks={}", utf8_percent_encode(&text, TRACKS_VALUE)));
    }
    // an explicit start of 0 resolves exactly like an unset one
    let from = config.from.filter(|&t| t != Timecode::ZERO);
    for (key, value) in [("from", from), ("to", config.to)] {
        if let Some(t) = value {
            let text = format_timecode(t);
            params.push(format!("{key}={}", utf8_percent_encode(&text, TIMECODE_VALUE)));
        }
    }
    if !config.color_rules.is_empty() {
        let text = config
            .color_rules
            .iter()
            .map(|r| format!("{}:{}", r.type_id, spec_text(&r.spec)))
            .collect::<Vec<_>>()
            .join(";");
        params.push(format!("color={}", utf8_percent_encode(&text, COLOR_VALUE)));
    }
    if config.height != defaults.height {
        params.push(format!("height={}", config.height.as_str()));
    }
    if config.bin_threshold != DEFAULT_BIN_THRESHOLD {
        params.push(format!("bin={}", config.bin_threshold));
    }
    if config.label_mode != defaults.label_mode {
        params.push(format!("label={}", config.label_mode.as_str()));
    }
    params.join("&")
}

#[cfg(test)]
mod tests {
    use super::super::parse_config;
    use super::*;

    fn canon(s: &str) -> String {
        serialize_config(&parse_config(s).unwrap())
    }

    /// Independent RFC 3986 component encoder: unreserved bytes pass,
    /// everything else becomes `%XX` with uppercase hex.
    fn encode_component(s: &str, keep: &[u8]) -> String {
        s.bytes()
            .map(|b| {
                if b.is_ascii_alphanumeric() || b"-_.~".contains(&b) || keep.contains(&b) {
                    (b as char).to_string()
                } else {
                    format!("%{b:02X}")
                }
            })
            .collect()
    }

    #[test]
    fn defaults_serialize_to_empty() {
        assert_eq!(serialize_config(&TimelineConfig::default()), "");
        assert_eq!(canon("tracks=*&height=normal&bin=2000&label=inline"), "");
    }

    #[test]
    fn fixed_key_order() {
        assert_eq!(canon("to=00:05:00&tracks=a"), "tracks=a&to=00:05:00");
        assert_eq!(
            canon("label=none&bin=10&height=compact&color=a:hash&to=2000&from=1000&tracks=b,a"),
            "tracks=b,a&from=00:00:01&to=00:00:02&color=a%3Ahash&height=compact&bin=10&label=none"
        );
    }

    #[test]
    fn map_entries_sorted_and_encoded() {
        let decoded = "a:map(dark=#222222,light=#eeeeee)";
        let expected = format!("color={}", encode_component(decoded, b"()*"));
        assert_eq!(expected, "color=a%3Amap(dark%3D%23222222%2Clight%3D%23eeeeee)");
        assert_eq!(canon("color=a:map(light=%23EEE,dark=%23222)"), expected);
        assert_eq!(
            canon("color=a:map(*=gray,z=red,b=blue)"),
            format!(
                "color={}",
                encode_component("a:map(b=#0000ff,z=#ff0000,*=#808080)", b"()*")
            )
        );
    }

    #[test]
    fn rule_order_follows_tracks() {
        assert_eq!(
            canon("tracks=z,a&color=a:hash;zz:hash;z:hash;b:hash"),
            format!(
                "tracks=z,a&color={}",
                encode_component("z:hash;a:hash;b:hash;zz:hash", b"()*")
            )
        );
        assert_eq!(
            canon("color=m:hash;b:hash"),
            format!("color={}", encode_component("b:hash;m:hash", b"()*"))
        );
    }

    #[test]
    fn scale_domain_only_when_set() {
        assert_eq!(
            canon("color=x:scale(black,white)"),
            "color=x%3Ascale(%23000000%2C%23ffffff)"
        );
        assert_eq!(
            canon("color=x:scale(black,white,-0,2.50)"),
            "color=x%3Ascale(%23000000%2C%23ffffff%2C0%2C2.5)"
        );
    }

    #[test]
    fn timecodes_canonical() {
        assert_eq!(
            canon("from=90000&to=01:00:00.250"),
            "from=00:01:30&to=01:00:00.250"
        );
        assert_eq!(canon("from=0&to=5000"), "to=00:00:05");
        assert_eq!(canon("from=00:00:00"), "");
    }
}
