use std::collections::BTreeMap;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use shg::learning::{generalize, refine, RefineParams};
use shg::patterns::Query;
use shg::{Hyperedge, Store};
use shg_app::commands::edge_id;
use shg_app::config::Config;
use shg_app::service::{router, AppState};
use shg_app::sessions::SessionBook;
use tower::ServiceExt;

fn h(s: &str) -> Hyperedge {
    s.parse().unwrap()
}

const CANDIDATE: &str = "(says/P.sr alice/C (are/P.sc dogs/C nice/C))";
const FALSE_POSITIVE: &str = "(says/P.sr dave/C (the/M truth/C))";

fn seeded() -> Store {
    let mut s = Store::new();
    for e in [
        CANDIDATE,
        "(says/P.sr bob/C (is/P.sc it/C late/C))",
        FALSE_POSITIVE,
        "(denies/P.sr erin/C (is/P.sc it/C true/C))",
        "(is/P.sc berlin/C (of/B.ma capital/C germany/C))",
        "(is/P.sc (+/B.am barack/C obama/C) president/C)",
    ] {
        s.add(h(e));
    }
    s.add(h("(lemma/J says/P say/P)"));
    s
}

fn state(store: Store, book: SessionBook) -> Arc<AppState> {
    AppState::new(store, Config::default(), book)
}

async fn call(st: &Arc<AppState>, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req.header("content-type", "application/json").body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = router(st.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap_or(Value::Null) };
    (status, v)
}

fn enc(s: &str) -> String {
    let mut out = String::new();
    for b in s.bytes() {
        if b.is_ascii_alphanumeric() || b"-_.~".contains(&b) {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}

#[tokio::test]
async fn metrics_on_empty_store_are_zero() {
    let st = state(Store::new(), SessionBook::new());
    let (code, v) = call(&st, "GET", &format!("/metrics?edge={}", enc("(is/P berlin/C nice/C)")), None).await;
    assert_eq!(code, StatusCode::OK);
    assert_eq!(v["degree"], 0);
    assert_eq!(v["deep_degree"], 0);
    assert_eq!(v["neighborhood"], json!([]));
    let (code, v) = call(&st, "GET", &format!("/metrics?edge={}", enc("(is/P berlin")), None).await;
    assert_eq!(code, StatusCode::BAD_REQUEST);
    assert!(v["error"].as_str().unwrap().contains("malformed"));
}

#[tokio::test]
async fn edges_and_ids() {
    let st = state(seeded(), SessionBook::new());
    let (code, v) = call(&st, "GET", "/edges", None).await;
    assert_eq!(code, StatusCode::OK);
    assert_eq!(v["edges"].as_array().unwrap().len(), 7);

    let q = "(PRED/P.{sr} ACTOR CLAIM) & (lemma/J >PRED/P say/P)";
    let (code, v) = call(&st, "GET", &format!("/edges?query={}", enc(q)), None).await;
    assert_eq!(code, StatusCode::OK);
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 3);
    assert!(edges.iter().all(|e| e["edge"].as_str().unwrap().starts_with("(says/P")));
    assert_eq!(edges[0]["bindings"][0]["PRED"], "says/P.sr");

    let (code, _) = call(&st, "GET", &format!("/edges?query={}", enc("(PRED")), None).await;
    assert_eq!(code, StatusCode::BAD_REQUEST);

    let id = edge_id(&h(CANDIDATE));
    let (code, v) = call(&st, "GET", &format!("/edges/{id}"), None).await;
    assert_eq!(code, StatusCode::OK);
    assert_eq!(v["edge"], CANDIDATE);
    assert_eq!(v["count"], 1);
    let (code, _) = call(&st, "GET", "/edges/0000", None).await;
    assert_eq!(code, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn coref_endpoint() {
    let st = state(seeded(), SessionBook::new());
    let (code, v) = call(&st, "GET", &format!("/coref/{}", enc("obama/C")), None).await;
    assert_eq!(code, StatusCode::OK);
    assert_eq!(v["seed"], "obama/C");
    assert_eq!(v["sets"][0]["members"], json!(["(+/B.am barack/C obama/C)"]));
    let (code, _) = call(&st, "GET", &format!("/coref/{}", enc("nobody/C")), None).await;
    assert_eq!(code, StatusCode::NOT_FOUND);
    let (code, _) = call(&st, "GET", &format!("/coref/{}", enc("(obama")), None).await;
    assert_eq!(code, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn session_round_trip() {
    let store = seeded();
    let st = state(seeded(), SessionBook::new());
    let (code, s) = call(&st, "POST", "/sessions", Some(json!({ "criterion": "predicate-frequency" }))).await;
    assert_eq!(code, StatusCode::OK);
    let candidate = h(s["candidate"].as_str().unwrap());
    assert_eq!(candidate.connector().unwrap().to_string(), "says/P.sr");
    assert_eq!(candidate, h(CANDIDATE));
    let id = s["id"].as_str().unwrap().to_string();

    let assignments = BTreeMap::from([
        ("ACTOR".to_string(), "alice/C".to_string()),
        ("CLAIM".to_string(), "(are/P.sc dogs/C nice/C)".to_string()),
    ]);
    let (code, s) = call(&st, "POST", &format!("/sessions/{id}/assign"), Some(json!({ "assignments": assignments }))).await;
    assert_eq!(code, StatusCode::OK);
    assert_eq!(s["pattern"], "(says/P.{sr} ACTOR CLAIM)");
    let pending: Vec<String> = serde_json::from_value(s["pending"].clone()).unwrap();
    assert!(pending.contains(&FALSE_POSITIVE.to_string()));

    let (code, s) = call(
        &st,
        "POST",
        &format!("/sessions/{id}/feedback"),
        Some(json!({ "edge": FALSE_POSITIVE, "verdict": "reject" })),
    )
    .await;
    assert_eq!(code, StatusCode::OK, "{s}");
    assert_eq!(s["consistent"], true);

    // oracle: the same refinement computed directly
    let a: BTreeMap<String, Hyperedge> = assignments.iter().map(|(k, v)| (k.clone(), h(v))).collect();
    let q = Query::new(generalize(&candidate, &a).unwrap());
    let expected = refine(&q, &[candidate.clone()], &[h(FALSE_POSITIVE)], &store, &RefineParams::default()).unwrap();
    assert_ne!(expected, q);

    let (code, p) = call(&st, "GET", &format!("/sessions/{id}/pattern"), None).await;
    assert_eq!(code, StatusCode::OK);
    assert_eq!(p["pattern"], expected.to_string());
    let matches: Vec<String> = serde_json::from_value(p["matches"].clone()).unwrap();
    assert!(!matches.contains(&FALSE_POSITIVE.to_string()));
    assert!(matches.contains(&CANDIDATE.to_string()));

    // labeling the rejected edge positive now contradicts the session
    let (code, v) = call(
        &st,
        "POST",
        &format!("/sessions/{id}/feedback"),
        Some(json!({ "edge": FALSE_POSITIVE, "verdict": "accept" })),
    )
    .await;
    assert_eq!(code, StatusCode::CONFLICT);
    assert!(v["error"].is_string());

    let (code, _) = call(&st, "GET", "/sessions/s99", None).await;
    assert_eq!(code, StatusCode::NOT_FOUND);
    let (code, _) = call(&st, "POST", &format!("/sessions/{id}/feedback"), Some(json!({ "edge": "(x", "verdict": "accept" }))).await;
    assert_eq!(code, StatusCode::BAD_REQUEST);
    let (code, _) = call(
        &st,
        "POST",
        &format!("/sessions/{id}/assign"),
        Some(json!({ "assignments": { "ACTOR": "zed/C" } })),
    )
    .await;
    assert_eq!(code, StatusCode::CONFLICT);
}

#[tokio::test]
async fn feedback_before_assign_conflicts() {
    let st = state(seeded(), SessionBook::new());
    let (_, s) = call(&st, "POST", "/sessions", Some(json!({}))).await;
    let id = s["id"].as_str().unwrap();
    let (code, _) = call(&st, "POST", &format!("/sessions/{id}/feedback"), Some(json!({ "edge": CANDIDATE, "verdict": "accept" }))).await;
    assert_eq!(code, StatusCode::CONFLICT);
    let (code, _) = call(&st, "POST", "/sessions", Some(json!({ "criterion": "loudest" }))).await;
    assert_eq!(code, StatusCode::BAD_REQUEST);
    let empty = state(Store::new(), SessionBook::new());
    let (code, _) = call(&empty, "POST", "/sessions", Some(json!({}))).await;
    assert_eq!(code, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn sessions_survive_restart() {
    let dir = tempfile::tempdir().unwrap();
    let car = dir.path().join("sessions.json");
    let st = state(seeded(), SessionBook::open(&car).unwrap());
    let (_, s) = call(&st, "POST", "/sessions", Some(json!({ "criterion": "random:3" }))).await;
    let id = s["id"].as_str().unwrap().to_string();
    let (_, before) = call(&st, "GET", &format!("/sessions/{id}"), None).await;
    drop(st);

    let st = state(seeded(), SessionBook::open(&car).unwrap());
    let (code, after) = call(&st, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(code, StatusCode::OK);
    assert_eq!(before, after);
    // ids keep counting after a restart
    let (_, s) = call(&st, "POST", "/sessions", Some(json!({}))).await;
    assert_ne!(s["id"].as_str().unwrap(), id);
}

#[tokio::test]
async fn mined_patterns() {
    let st = state(seeded(), SessionBook::new());
    let (code, v) = call(&st, "GET", "/patterns/mined?top=3", None).await;
    assert_eq!(code, StatusCode::OK);
    let ps = v["patterns"].as_array().unwrap();
    assert_eq!(ps.len(), 3);
    let counts: Vec<u64> = ps.iter().map(|p| p["count"].as_u64().unwrap()).collect();
    assert!(counts.windows(2).all(|w| w[0] >= w[1]));
}
