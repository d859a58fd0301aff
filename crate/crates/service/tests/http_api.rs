use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use tlviz_core::fixture::{generate_package, FixtureSpec};
use tlviz_core::model::package_to_json;
use tlviz_core::pipeline::{layout_for, render_for};
use tlviz_service::{package_id, router, AppState, Registry};
use tower::ServiceExt;

struct Reply {
    status: StatusCode,
    content_type: String,
    body: Vec<u8>,
}

impl Reply {
    fn json(&self) -> Value {
        serde_json::from_slice(&self.body)
            .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&self.body)))
    }

    fn text(&self) -> &str {
        std::str::from_utf8(&self.body).unwrap()
    }
}

async fn send(app: &Router, req: Request<Body>) -> Reply {
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let content_type = resp
        .headers()
        .get(header::CONTENT_TYPE)
        .map(|v| v.to_str().unwrap().to_owned())
        .unwrap_or_default();
    let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply {
        status,
        content_type,
        body,
    }
}

async fn get(app: &Router, uri: &str) -> Reply {
    send(app, Request::get(uri).body(Body::empty()).unwrap()).await
}

async fn upload(app: &Router, bytes: &[u8]) -> Reply {
    send(
        app,
        Request::post("/packages")
            .body(Body::from(bytes.to_vec()))
            .unwrap(),
    )
    .await
}

fn fixture_bytes(seed: u64, annotations: usize) -> Vec<u8> {
    let spec = FixtureSpec {
        seed,
        annotations,
        ..FixtureSpec::default()
    };
    package_to_json(&generate_package(&spec), false).into_bytes()
}

fn app() -> Router {
    router(AppState::new(Registry::in_memory()))
}

#[tokio::test]
async fn upload_is_idempotent_and_content_addressed() {
    let app = app();
    let bytes = fixture_bytes(1, 120);
    let first = upload(&app, &bytes).await;
    assert_eq!(first.status, StatusCode::OK);
    assert!(first.content_type.starts_with("application/json"));
    let second = upload(&app, &bytes).await;
    assert_eq!(second.status, StatusCode::OK);
    assert_eq!(first.json(), second.json());
    assert_eq!(first.json()["id"], package_id(&bytes));

    let mut other = bytes.clone();
    other.push(b'\n');
    assert_ne!(upload(&app, &other).await.json()["id"], first.json()["id"]);
}

#[tokio::test]
async fn summary_lists_types_with_counts() {
    let app = app();
    let bytes = fixture_bytes(2, 90);
    let id = upload(&app, &bytes).await.json()["id"]
        .as_str()
        .unwrap()
        .to_owned();
    let summary = get(&app, &format!("/packages/{id}")).await;
    assert_eq!(summary.status, StatusCode::OK);
    let summary = summary.json();
    assert_eq!(summary["annotationCount"], 90);
    assert_eq!(summary["media"]["duration"], 600_000);
    assert_eq!(summary["media"]["durationTimecode"], "00:10:00");
    let types = summary["types"].as_array().unwrap();
    assert_eq!(types.len(), 3);
    assert_eq!(types[0]["id"], "camera");
    assert_eq!(types[0]["valueKind"], "nominal");
    assert_eq!(
        types.iter().map(|t| t["count"].as_u64().unwrap()).sum::<u64>(),
        90
    );
}

#[tokio::test]
async fn timeline_endpoints_match_the_pipeline() {
    let app = app();
    let bytes = fixture_bytes(3, 300);
    let pkg = tlviz_core::parse_package(&bytes).unwrap();
    let id = package_id(&bytes);
    upload(&app, &bytes).await;

    let svg = get(&app, &format!("/packages/{id}/timeline.svg")).await;
    assert_eq!(svg.status, StatusCode::OK);
    assert_eq!(svg.content_type, "image/svg+xml");
    assert_eq!(svg.body, render_for(&pkg, "", 1200).unwrap().as_bytes());

    let q = "tracks=camera,colourRange&from=00:01:00&height=compact";
    let svg = get(&app, &format!("/packages/{id}/timeline.svg?{q}&width=640")).await;
    assert_eq!(svg.body, render_for(&pkg, q, 640).unwrap().as_bytes());

    let json = get(&app, &format!("/packages/{id}/timeline.json?width=900&{q}")).await;
    assert_eq!(json.status, StatusCode::OK);
    assert_eq!(json.content_type, "application/json");
    assert_eq!(json.text(), layout_for(&pkg, q, 900).unwrap().to_json());
    assert_eq!(json.json()["viewport"]["widthPx"], 900);
}

#[tokio::test]
async fn dsl_errors_are_structured() {
    let app = app();
    let bytes = fixture_bytes(4, 50);
    let id = package_id(&bytes);
    upload(&app, &bytes).await;

    let bad = get(
        &app,
        &format!("/packages/{id}/timeline.svg?color=x:scale(%23000000)"),
    )
    .await;
    assert_eq!(bad.status, StatusCode::BAD_REQUEST);
    assert!(bad.content_type.starts_with("application/json"));
    let body = bad.json();
    assert_eq!(body["code"], "parse_error");
    assert_eq!(body["position"], 21);
    assert_eq!(body["expected"], ",");
    assert_eq!(body["found"], ")");
    assert_eq!(body["input"], "color=x:scale(#000000)");
    assert!(body["message"].as_str().unwrap().contains("position 21"));

    let cases = [
        ("tracks=nope", "unknown_track"),
        ("from=00:10:00", "empty_viewport"),
        ("zoom=2", "unknown_key"),
        ("bin=1&bin=2", "duplicate_key"),
        ("width=99", "invalid_width"),
        ("width=20001", "invalid_width"),
        ("width=500&width=600", "invalid_width"),
    ];
    for (q, code) in cases {
        let reply = get(&app, &format!("/packages/{id}/timeline.json?{q}")).await;
        assert_eq!(reply.status, StatusCode::BAD_REQUEST, "{q}");
        assert_eq!(reply.json()["code"], code, "{q}");
    }
}

#[tokio::test]
async fn unknown_ids_are_not_found() {
    let app = app();
    let bytes = fixture_bytes(5, 40);
    let id = package_id(&bytes);
    for uri in [
        format!("/packages/{id}"),
        format!("/packages/{id}/timeline.svg"),
        format!("/packages/{id}/annotations/a00001"),
    ] {
        let reply = get(&app, &uri).await;
        assert_eq!(reply.status, StatusCode::NOT_FOUND, "{uri}");
        assert_eq!(reply.json()["code"], "package_not_found");
    }
    upload(&app, &bytes).await;
    let missing = get(&app, &format!("/packages/{id}/annotations/zzz")).await;
    assert_eq!(missing.status, StatusCode::NOT_FOUND);
    assert_eq!(missing.json()["code"], "annotation_not_found");
    assert_eq!(get(&app, "/nowhere").await.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn annotation_detail() {
    let app = app();
    let bytes = br#"{"media": {"id": "m", "uri": "file:///m.mp4", "duration": 90000},
        "types": [{"id": "light", "label": "Light", "valueKind": "transition", "vocabulary": ["dark", "light"]}],
        "annotations": [{"id": "t1", "type": "light", "begin": 1500, "end": 61000, "value": {"from": "dark", "to": "light"}}]}"#;
    let id = package_id(bytes);
    assert_eq!(upload(&app, bytes).await.status, StatusCode::OK);
    let detail = get(&app, &format!("/packages/{id}/annotations/t1")).await.json();
    assert_eq!(detail["type"], "light");
    assert_eq!(detail["typeLabel"], "Light");
    assert_eq!(detail["begin"], 1500);
    assert_eq!(detail["beginTimecode"], "00:00:01.500");
    assert_eq!(detail["endTimecode"], "00:01:01");
    assert_eq!(
        detail["value"],
        serde_json::json!({"from": "dark", "to": "light"})
    );
    assert_eq!(detail["valueText"], "dark → light");
}

#[tokio::test]
async fn canonical_endpoint() {
    let app = app();
    let reply = get(&app, "/canonical?to=00:05:00&tracks=a").await;
    assert_eq!(reply.status, StatusCode::OK);
    assert_eq!(reply.content_type, "text/plain; charset=utf-8");
    assert_eq!(reply.text(), "tracks=a&to=00:05:00");
    assert_eq!(get(&app, "/canonical").await.text(), "");

    let messy = "label=inline&color=b:map(y=%23FFF,*=red,x=blue);a:hash&tracks=a,b&height=normal&from=0";
    let once = get(&app, &format!("/canonical?{messy}")).await.text().to_owned();
    let twice = get(&app, &format!("/canonical?{once}")).await.text().to_owned();
    assert_eq!(once, twice);
    assert_eq!(
        once,
        "tracks=a,b&color=a%3Ahash%3Bb%3Amap(x%3D%230000ff%2Cy%3D%23ffffff%2C*%3D%23ff0000)"
    );

    let bad = get(&app, "/canonical?height=huge").await;
    assert_eq!(bad.status, StatusCode::BAD_REQUEST);
    assert_eq!(bad.json()["position"], 7);
}

#[tokio::test]
async fn invalid_packages_are_rejected_with_details() {
    let app = app();
    let syntax = upload(&app, b"{\"media\": ").await;
    assert_eq!(syntax.status, StatusCode::BAD_REQUEST);
    assert_eq!(syntax.json()["code"], "syntax_error");
    assert_eq!(syntax.json()["position"], 10);

    let invalid = br#"{"media": {"id": "m", "uri": "", "duration": 1000},
        "types": [{"id": "t", "label": "T", "valueKind": "text"}],
        "annotations": [{"id": "a", "type": "t", "begin": 900, "end": 800, "value": "x"},
                        {"id": "b", "type": "q", "begin": 0, "end": 10, "value": "x"}]}"#;
    let reply = upload(&app, invalid).await;
    assert_eq!(reply.status, StatusCode::BAD_REQUEST);
    let body = reply.json();
    assert_eq!(body["code"], "begin_after_end");
    assert_eq!(body["errors"].as_array().unwrap().len(), 2);
    assert_eq!(body["errors"][1]["code"], "unknown_type");
    assert_eq!(
        get(&app, &format!("/packages/{}", package_id(invalid)))
            .await
            .status,
        StatusCode::NOT_FOUND
    );
}

#[tokio::test]
async fn oversized_packages_get_413() {
    let app = router(AppState::new(Registry::in_memory()).with_max_package_bytes(1024));
    let big = fixture_bytes(6, 100);
    assert!(big.len() > 1024);
    let reply = upload(&app, &big).await;
    assert_eq!(reply.status, StatusCode::PAYLOAD_TOO_LARGE);
    assert_eq!(reply.json()["code"], "payload_too_large");

    let small = br#"{"media": {"id": "m", "uri": "", "duration": 1000}, "types": [], "annotations": []}"#;
    assert_eq!(upload(&app, small).await.status, StatusCode::OK);
}

#[tokio::test]
async fn store_survives_restart() {
    let dir = tempfile::tempdir().unwrap();
    let bytes = fixture_bytes(7, 60);
    let id = package_id(&bytes);
    {
        let app = router(AppState::new(Registry::open(dir.path()).unwrap()));
        assert_eq!(upload(&app, &bytes).await.status, StatusCode::OK);
    }
    let stored = std::fs::read(dir.path().join(format!("{id}.json"))).unwrap();
    assert_eq!(stored, bytes);
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty());

    // a renamed copy and a corrupt file must not be served
    std::fs::write(dir.path().join("deadbeef.json"), &bytes).unwrap();
    let corrupt = b"{\"oops\": true}";
    std::fs::write(dir.path().join(format!("{}.json", package_id(corrupt))), corrupt).unwrap();

    let registry = Registry::open(dir.path()).unwrap();
    assert_eq!(registry.ids(), vec![id.clone()]);
    let app = router(AppState::new(registry));
    let reply = get(&app, &format!("/packages/{id}/timeline.svg")).await;
    assert_eq!(reply.status, StatusCode::OK);
    let pkg = tlviz_core::parse_package(&bytes).unwrap();
    assert_eq!(reply.body, render_for(&pkg, "", 1200).unwrap().as_bytes());
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn reads_stay_consistent_during_uploads() {
    let app = app();
    let base = fixture_bytes(8, 400);
    let base_id = package_id(&base);
    upload(&app, &base).await;
    let expected_svg = get(&app, &format!("/packages/{base_id}/timeline.svg")).await.body;

    let uploads: Vec<Vec<u8>> = (0..6).map(|i| fixture_bytes(100 + i, 2000)).collect();
    let expected_counts: Vec<u64> = uploads.iter().map(|_| 2000).collect();
    let new_ids: Vec<String> = uploads.iter().map(|b| package_id(b)).collect();

    let writer = {
        let app = app.clone();
        tokio::spawn(async move {
            for bytes in uploads {
                assert_eq!(upload(&app, &bytes).await.status, StatusCode::OK);
            }
        })
    };
    let mut readers = Vec::new();
    for r in 0..8 {
        let (app, expected_svg, base_id, new_ids) = (
            app.clone(),
            expected_svg.clone(),
            base_id.clone(),
            new_ids.clone(),
        );
        readers.push(tokio::spawn(async move {
            for i in 0..10 {
                let svg = get(&app, &format!("/packages/{base_id}/timeline.svg")).await;
                assert_eq!(svg.status, StatusCode::OK);
                assert!(svg.body == expected_svg);
                let probe = &new_ids[(r + i) % new_ids.len()];
                let summary = get(&app, &format!("/packages/{probe}")).await;
                match summary.status {
                    StatusCode::OK => assert_eq!(summary.json()["annotationCount"], 2000),
                    StatusCode::NOT_FOUND => {}
                    other => panic!("unexpected status {other}"),
                }
            }
        }));
    }
    writer.await.unwrap();
    for r in readers {
        r.await.unwrap();
    }
    for (id, count) in new_ids.iter().zip(expected_counts) {
        assert_eq!(
            get(&app, &format!("/packages/{id}")).await.json()["annotationCount"],
            count
        );
    }
}
