//! Seeded synthetic annotation packages for tests, benchmarks and the
//! bundled example data.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::color::{ColorSpec, Rgb};
use crate::config::{ColorRule, LabelMode, TimelineConfig, TrackHeight, TrackSelection};
use crate::model::{Annotation, AnnotationType, AnnotationValue, MediaInfo, PackageData, ValueKind};
use crate::timecode::Timecode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixtureSpec {
    pub seed: u64,
    pub types: usize,
    pub annotations: usize,
    pub duration_ms: u64,
    /// Longest generated annotation, in milliseconds.
    pub max_len_ms: u64,
}

impl Default for FixtureSpec {
    /// The bundled example package: 3 types, 500 annotations, 10 minutes.
    fn default() -> Self {
        FixtureSpec {
            seed: 42,
            types: 3,
            annotations: 500,
            duration_ms: 600_000,
            max_len_ms: 30_000,
        }
    }
}

const CAMERA: [&str; 5] = ["static", "pan", "tilt", "zoom", "tracking"];
const COLOUR: [&str; 3] = ["dark", "medium", "light"];
const WORDS: [&str; 8] = ["so", "we", "meet", "again", "at", "dawn", "under", "fire"];

fn template(index: usize) -> AnnotationType {
    let round = index / 4;
    let suffix = if round == 0 {
        String::new()
    } else {
        (round + 1).to_string()
    };
    let (id, label, value_kind, vocabulary, numeric_domain) = match index % 4 {
        0 => (
            "camera",
            "Camera movement",
            ValueKind::Nominal,
            Some(&CAMERA[..]),
            None,
        ),
        1 => (
            "colourRange",
            "Colour range",
            ValueKind::Transition,
            Some(&COLOUR[..]),
            None,
        ),
        2 => (
            "shotDuration",
            "Shot duration (s)",
            ValueKind::Numeric,
            None,
            Some((0.0, 20.0)),
        ),
        _ => ("dialogue", "Dialogue", ValueKind::Text, None, None),
    };
    AnnotationType {
        id: format!("{id}{suffix}"),
        label: if suffix.is_empty() {
            label.to_owned()
        } else {
            format!("{label} {suffix}")
        },
        value_kind,
        vocabulary: vocabulary.map(|v| v.iter().map(|s| (*s).to_owned()).collect()),
        numeric_domain,
    }
}

fn pick<'a>(rng: &mut ChaCha8Rng, items: &[&'a str]) -> &'a str {
    items[rng.random_range(0..items.len())]
}

fn value(rng: &mut ChaCha8Rng, ty: &AnnotationType) -> AnnotationValue {
    match ty.value_kind {
        ValueKind::Nominal => AnnotationValue::Nominal(pick(rng, &CAMERA).to_owned()),
        ValueKind::Transition => AnnotationValue::Transition {
            from: pick(rng, &COLOUR).to_owned(),
            to: pick(rng, &COLOUR).to_owned(),
        },
        // Quarter-second resolution keeps the JSON form short and exact.
        ValueKind::Numeric => AnnotationValue::Numeric(f64::from(rng.random_range(0..=80u32)) / 4.0),
        ValueKind::Text => {
            let n = rng.random_range(1..=4);
            let words: Vec<&str> = (0..n).map(|_| pick(rng, &WORDS)).collect();
            AnnotationValue::Text(words.join(" "))
        }
    }
}

/// Deterministically generates a valid package. Annotations are assigned to
/// types round-robin and emitted in generation (not time) order; about one
/// in fifty has zero duration.
pub fn generate_package(spec: &FixtureSpec) -> PackageData {
    assert!(spec.types > 0 && spec.duration_ms > 1 && spec.max_len_ms > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let types: Vec<AnnotationType> = (0..spec.types).map(template).collect();
    let annotations = (0..spec.annotations)
        .map(|i| {
            let ty = &types[i % types.len()];
            let begin = rng.random_range(0..spec.duration_ms - 1);
            let len = if rng.random_ratio(1, 50) {
                0
            } else {
                rng.random_range(1..=spec.max_len_ms)
            };
            let end = (begin + len).min(spec.duration_ms);
            Annotation {
                id: format!("a{i:05}"),
                type_id: ty.id.clone(),
                begin: Timecode::from_millis(begin),
                end: Timecode::from_millis(end),
                value: value(&mut rng, ty),
            }
        })
        .collect();
    PackageData {
        media: MediaInfo {
            id: format!("synthetic-{}", spec.seed),
            uri: String::new(),
            duration: Timecode::from_millis(spec.duration_ms),
        },
        types,
        annotations,
    }
}

fn random_token(rng: &mut impl Rng) -> String {
    const CHARS: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_";
    let len = rng.random_range(1..=8);
    (0..len)
        .map(|_| CHARS[rng.random_range(0..CHARS.len())] as char)
        .collect()
}

fn random_rgb(rng: &mut impl Rng) -> Rgb {
    Rgb::new(rng.random(), rng.random(), rng.random())
}

fn random_real(rng: &mut impl Rng) -> f64 {
    match rng.random_range(0..3) {
        0 => f64::from(rng.random_range(-1000..1000i32)),
        1 => f64::from(rng.random_range(-100_000..100_000i32)) / 100.0,
        _ => rng.random_range(-1e6..1e6),
    }
}

fn random_spec(rng: &mut impl Rng) -> ColorSpec {
    match rng.random_range(0..4) {
        0 => ColorSpec::Fixed(random_rgb(rng)),
        1 => {
            let wildcard = rng.random_bool(0.5).then(|| random_rgb(rng));
            let min_entries = usize::from(wildcard.is_none());
            let entries: BTreeMap<String, Rgb> = (0..rng.random_range(min_entries..=4))
                .map(|_| (random_token(rng), random_rgb(rng)))
                .collect();
            ColorSpec::Map { entries, wildcard }
        }
        2 => {
            let domain = rng.random_bool(0.5).then(|| {
                let a = random_real(rng);
                let b = random_real(rng);
                if a < b {
                    (a, b)
                } else if b < a {
                    (b, a)
                } else {
                    (a, a + 1.0)
                }
            });
            ColorSpec::Scale {
                low: random_rgb(rng),
                high: random_rgb(rng),
                domain,
            }
        }
        _ => ColorSpec::Hash,
    }
}

/// A random configuration satisfying every configuration invariant. Track
/// and rule ids are drawn from `type_ids` when given, else from random tokens.
pub fn random_config<R: Rng>(rng: &mut R, type_ids: &[&str]) -> TimelineConfig {
    let id = |rng: &mut R| -> String {
        if type_ids.is_empty() {
            random_token(rng)
        } else {
            type_ids[rng.random_range(0..type_ids.len())].to_owned()
        }
    };
    let tracks = if rng.random_bool(0.3) {
        TrackSelection::Wildcard
    } else {
        let mut list: Vec<String> = Vec::new();
        for _ in 0..rng.random_range(1..=5) {
            let t = id(rng);
            if !list.contains(&t) {
                list.push(t);
            }
        }
        TrackSelection::List(list)
    };
    let mut color_rules: Vec<ColorRule> = Vec::new();
    for _ in 0..rng.random_range(0..=4) {
        let type_id = id(rng);
        if color_rules.iter().all(|r| r.type_id != type_id) {
            color_rules.push(ColorRule {
                type_id,
                spec: random_spec(rng),
            });
        }
    }
    let (from, to) = match rng.random_range(0..4) {
        0 => (None, None),
        1 => (Some(Timecode::from_millis(rng.random_range(0..10_000_000))), None),
        2 => (None, Some(Timecode::from_millis(rng.random_range(1..10_000_000)))),
        _ => {
            let a = rng.random_range(0..10_000_000);
            let b = a + rng.random_range(1..10_000_000);
            (Some(Timecode::from_millis(a)), Some(Timecode::from_millis(b)))
        }
    };
    TimelineConfig {
        tracks,
        from,
        to,
        color_rules,
        height: [TrackHeight::Compact, TrackHeight::Normal, TrackHeight::Large][rng.random_range(0..3)],
        bin_threshold: if rng.random_bool(0.5) {
            2000
        } else {
            rng.random_range(1..=100_000)
        },
        label_mode: if rng.random_bool(0.5) {
            LabelMode::Inline
        } else {
            LabelMode::None
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_package, AnnotationPackage};

    #[test]
    fn generated_packages_are_valid_and_seeded() {
        let spec = FixtureSpec {
            types: 9,
            annotations: 2000,
            ..FixtureSpec::default()
        };
        let a = generate_package(&spec);
        assert!(validate_package(&a).is_valid());
        assert_eq!(a, generate_package(&spec));
        assert_ne!(a, generate_package(&FixtureSpec { seed: 7, ..spec }));
        let pkg = AnnotationPackage::new(a).unwrap();
        assert_eq!(pkg.types()[4].id, "camera2");
        assert_eq!(pkg.count("camera"), 223);
    }
}
