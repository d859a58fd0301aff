use std::path::{Path, PathBuf};

use tlviz_core::fixture::{generate_package, FixtureSpec};
use tlviz_core::model::package_to_json;
use tlviz_core::pipeline::{layout_for, render_for};
use tlviz_core::svg::format_number;
use tlviz_core::AnnotationPackage;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn updating() -> bool {
    std::env::var_os("UPDATE_SNAPSHOTS").is_some()
}

fn bundled_package() -> AnnotationPackage {
    let bytes = std::fs::read(fixtures().join("package.json")).expect("bundled package");
    tlviz_core::parse_package(&bytes).expect("bundled package parses")
}

fn configs() -> Vec<(String, String)> {
    std::fs::read_to_string(fixtures().join("configs.tsv"))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (name, cfg) = l.split_once('\t').unwrap_or((l, ""));
            (name.to_string(), cfg.to_string())
        })
        .collect()
}

#[test]
fn bundled_package_matches_generator() {
    let generated = package_to_json(&generate_package(&FixtureSpec::default()), true);
    let path = fixtures().join("package.json");
    if updating() {
        std::fs::write(&path, &generated).unwrap();
    }
    assert_eq!(std::fs::read_to_string(path).unwrap(), generated);
}

#[test]
fn snapshots_are_byte_identical() {
    let pkg = bundled_package();
    let dir = fixtures().join("snapshots");
    for (name, cfg) in configs() {
        let svg = render_for(&pkg, &cfg, 1200).unwrap();
        let path = dir.join(format!("{name}.svg"));
        if updating() {
            std::fs::write(&path, svg.as_bytes()).unwrap();
        }
        let expected = std::fs::read(&path).unwrap_or_else(|_| panic!("missing snapshot {}", path.display()));
        assert!(expected == svg.as_bytes(), "snapshot {name} differs");
    }
}

#[test]
fn output_is_well_formed_and_complete() {
    let pkg = bundled_package();
    for (name, cfg) in configs() {
        for width in [100, 777, 1200, 5000] {
            let layout = layout_for(&pkg, &cfg, width).unwrap();
            let svg = render_for(&pkg, &cfg, width).unwrap();
            let doc =
                roxmltree::Document::parse(svg.as_str()).unwrap_or_else(|e| panic!("{name}@{width}: {e}"));
            let root = doc.root_element();
            assert_eq!(root.tag_name().name(), "svg");
            assert_eq!(root.tag_name().namespace(), Some("http://www.w3.org/2000/svg"));
            assert_eq!(
                root.attribute("width"),
                Some(layout.total_width_px().to_string().as_str())
            );
            assert_eq!(
                root.attribute("height"),
                Some(layout.total_height_px.to_string().as_str())
            );

            let rects: Vec<_> = doc
                .descendants()
                .filter(|n| n.has_tag_name("rect") && n.attribute("data-annotation-id").is_some())
                .collect();
            assert_eq!(rects.len(), layout.box_count(), "{name}@{width}");
            let bins = doc
                .descendants()
                .filter(|n| n.attribute("data-bin-index").is_some())
                .count();
            assert_eq!(bins, layout.tracks.iter().map(|t| t.bins.len()).sum::<usize>());
            let groups = doc
                .descendants()
                .filter(|n| n.has_tag_name("g") && n.attribute("data-type-id").is_some())
                .count();
            assert_eq!(groups, layout.tracks.len());

            for r in &rects {
                if let Some(fill) = r.attribute("fill").and_then(|f| f.strip_prefix("url(#")) {
                    let id = fill.trim_end_matches(')');
                    assert!(doc
                        .descendants()
                        .any(|n| n.has_tag_name("linearGradient") && n.attribute("id") == Some(id)));
                }
            }
        }
    }
}

#[test]
fn rendering_is_deterministic_across_threads() {
    let pkg = std::sync::Arc::new(bundled_package());
    let (_, cfg) = configs().into_iter().nth(1).unwrap();
    let reference = render_for(&pkg, &cfg, 1200).unwrap();
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let (pkg, cfg) = (pkg.clone(), cfg.clone());
            std::thread::spawn(move || render_for(&pkg, &cfg, 1200).unwrap())
        })
        .collect();
    for h in handles {
        assert_eq!(h.join().unwrap(), reference);
    }
}

#[test]
fn text_content_is_escaped() {
    let json = r#"{"media": {"id": "m", "uri": "x", "duration": 10000},
        "types": [{"id": "d", "label": "<Talk & \"Chat\">", "valueKind": "text"}],
        "annotations": [{"id": "a1", "type": "d", "begin": 0, "end": 9000, "value": "a<b>&c"}]}"#;
    let pkg = tlviz_core::parse_package(json.as_bytes()).unwrap();
    let svg = render_for(&pkg, "", 800).unwrap();
    let doc = roxmltree::Document::parse(svg.as_str()).unwrap();
    let texts: Vec<&str> = doc
        .descendants()
        .filter(|n| n.has_tag_name("text"))
        .filter_map(|n| n.text())
        .collect();
    assert!(texts.contains(&"<Talk & \"Chat\">"));
    assert!(texts.contains(&"a<b>&c"));
}

#[test]
fn numbers_are_short_and_stable() {
    for (v, s) in [
        (0.0, "0"),
        (-0.0, "0"),
        (12.0, "12"),
        (0.5, "0.5"),
        (1.0 / 3.0, "0.33"),
        (-2.25, "-2.25"),
        (-0.001, "0"),
    ] {
        assert_eq!(format_number(v), s, "{v}");
    }
}
