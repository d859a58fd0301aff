use std::collections::BTreeSet;

use proptest::prelude::*;
use tlviz_core::fixture::{generate_package, FixtureSpec};
use tlviz_core::model::{
    package_to_json, parse_package, parse_package_data, query_window, Annotation, AnnotationPackage,
    AnnotationValue, PackageData, PackageError,
};
use tlviz_core::Timecode;

/// Linear scan over every annotation with the half-open rule spelled out.
fn scan_window(data: &PackageData, type_id: &str, from: u64, to: u64) -> Vec<String> {
    let mut hits: Vec<&Annotation> = data
        .annotations
        .iter()
        .filter(|a| a.type_id == type_id)
        .filter(|a| {
            let b = a.begin.millis();
            let e = a.end.millis().max(b + 1);
            b < to && e > from
        })
        .collect();
    hits.sort_by(|x, y| (x.begin, x.end, &x.id).cmp(&(y.begin, y.end, &y.id)));
    hits.into_iter().map(|a| a.id.clone()).collect()
}

fn ids(v: Vec<&Annotation>) -> Vec<String> {
    v.into_iter().map(|a| a.id.clone()).collect()
}

fn small_package() -> impl Strategy<Value = PackageData> {
    (
        any::<u64>(),
        1usize..=3,
        0usize..=200,
        1_000u64..100_000,
        1u64..20_000,
    )
        .prop_map(|(seed, types, annotations, duration_ms, max_len_ms)| {
            generate_package(&FixtureSpec {
                seed,
                types,
                annotations,
                duration_ms,
                max_len_ms,
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn window_query_matches_linear_scan(data in small_package(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let duration = data.media.duration.millis();
        let from = ((a.min(b) * duration as f64) as u64).min(duration - 1);
        let to = ((a.max(b) * duration as f64) as u64).max(from + 1);
        let pkg = AnnotationPackage::new(data.clone()).unwrap();
        for ty in pkg.types() {
            let got = ids(query_window(&pkg, &ty.id, Timecode::from_millis(from), Timecode::from_millis(to)).unwrap());
            prop_assert_eq!(got, scan_window(&data, &ty.id, from, to));
        }
    }

    #[test]
    fn partition_union_recovers_track(data in small_package(), cuts in proptest::collection::vec(0.0f64..1.0, 0..6)) {
        let duration = data.media.duration.millis();
        let mut bounds: BTreeSet<u64> = cuts.iter().map(|c| (c * duration as f64) as u64).collect();
        bounds.insert(0);
        bounds.insert(duration);
        let bounds: Vec<u64> = bounds.into_iter().collect();
        let pkg = AnnotationPackage::new(data.clone()).unwrap();
        for ty in pkg.types() {
            let mut union = BTreeSet::new();
            let mut total = 0;
            for w in bounds.windows(2).filter(|w| w[0] < w[1]) {
                let part = query_window(&pkg, &ty.id, Timecode::from_millis(w[0]), Timecode::from_millis(w[1])).unwrap();
                total += part.len();
                union.extend(ids(part));
            }
            let full: BTreeSet<String> = pkg.track(&ty.id).unwrap().into_iter().map(|a| a.id.clone()).collect();
            prop_assert_eq!(&union, &full);
            // Parts are disjoint exactly when nothing straddles an inner boundary.
            let straddles = pkg.track(&ty.id).unwrap().iter().any(|a| {
                let e = a.effective_end().millis();
                bounds[1..bounds.len() - 1].iter().any(|&c| a.begin.millis() < c && e > c)
            });
            prop_assert_eq!(total == full.len(), !straddles);
        }
    }
}

#[test]
fn full_window_returns_sorted_track() {
    let data = generate_package(&FixtureSpec::default());
    let pkg = AnnotationPackage::new(data.clone()).unwrap();
    let duration = pkg.media().duration;
    for ty in pkg.types() {
        let got = ids(query_window(&pkg, &ty.id, Timecode::ZERO, duration).unwrap());
        assert_eq!(got, scan_window(&data, &ty.id, 0, duration.millis()));
        assert_eq!(got.len(), pkg.count(&ty.id));
    }
}

#[test]
fn fixture_round_trips_through_json() {
    let data = generate_package(&FixtureSpec {
        seed: 9,
        types: 3,
        annotations: 100,
        ..FixtureSpec::default()
    });
    let text = package_to_json(&data, false);
    let parsed = parse_package(text.as_bytes()).unwrap();
    assert_eq!(parsed.data(), &data);
    assert_eq!(parsed.annotations().len(), 100);
    assert_eq!(
        parse_package_data(package_to_json(&data, true).as_bytes()).unwrap(),
        data
    );
}

type Mutation = (&'static str, fn(&mut PackageData));

/// Each mutation breaks exactly one invariant of a valid package.
const MUTATIONS: &[Mutation] = &[
    ("begin_after_end", |d| {
        let a = &mut d.annotations[3];
        a.begin = Timecode::from_millis(a.end.millis() + 1);
    }),
    ("end_exceeds_duration", |d| {
        d.annotations[5].end = Timecode::from_millis(d.media.duration.millis() + 1)
    }),
    ("unknown_type", |d| d.annotations[7].type_id = "ghost".into()),
    ("duplicate_annotation_id", |d| {
        d.annotations[9].id = d.annotations[2].id.clone()
    }),
    ("duplicate_type_id", |d| d.types[1].id = d.types[0].id.clone()),
    ("token_not_in_vocabulary", |d| {
        let a = d
            .annotations
            .iter_mut()
            .find(|a| matches!(a.value, AnnotationValue::Nominal(_)))
            .unwrap();
        a.value = AnnotationValue::Nominal("unheardOf".into());
    }),
    ("value_kind_mismatch", |d| {
        let a = d
            .annotations
            .iter_mut()
            .find(|a| matches!(a.value, AnnotationValue::Numeric(_)))
            .unwrap();
        a.value = AnnotationValue::Text("five".into());
    }),
    ("duration_not_positive", |d| {
        d.media.duration = Timecode::ZERO;
    }),
    ("missing_vocabulary", |d| d.types[0].vocabulary = None),
    ("invalid_token", |d| d.annotations[0].id = "has space".into()),
];

#[test]
fn rejects_exactly_the_broken_fixtures() {
    for seed in 0..20 {
        let data = generate_package(&FixtureSpec {
            seed,
            types: 4,
            annotations: 60,
            ..FixtureSpec::default()
        });
        parse_package(package_to_json(&data, false).as_bytes()).expect("valid fixture parses");
        for (code, mutate) in MUTATIONS {
            let mut broken = data.clone();
            mutate(&mut broken);
            match parse_package(package_to_json(&broken, false).as_bytes()) {
                Err(PackageError::Validation(report)) => {
                    assert!(
                        report.errors.iter().any(|e| e.code == *code),
                        "seed {seed}: {code} missing from {report}"
                    );
                }
                other => panic!("seed {seed}: expected {code}, got {other:?}"),
            }
        }
    }
}
