use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use coxroot_core::document::GraphDocument;
use coxroot_core::game::{play, Strategy};
use coxroot_service::{router, StoreConfig};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn fixture(name: &str) -> Value {
    let path = format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn app() -> Router {
    router(StoreConfig::default())
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

async fn create(app: &Router, graph: Value, position: Value) -> (String, Value) {
    let (status, body) = call(app, "POST", "/api/sessions", Some(json!({"graph": graph, "position": position}))).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    (body["id"].as_str().unwrap().to_string(), body["state"].clone())
}

#[tokio::test]
async fn health() {
    let (status, _) = call(&app(), "GET", "/api/health", None).await;
    assert_eq!(status, StatusCode::OK);
}

#[tokio::test]
async fn create_session_states() {
    let app = app();
    let (_, state) = create(&app, fixture("a2"), json!(["1", "1"])).await;
    assert_eq!(state["legal_moves"], json!([1, 2]));
    assert_eq!(state["is_terminal"], json!(false));
    assert_eq!(state["fired"], json!([]));
    assert_eq!(state["is_reduced"], json!(true));

    let (_, state) = create(&app, fixture("a2"), json!(["-1", "-1"])).await;
    assert_eq!(state["is_terminal"], json!(true));
    assert_eq!(state["legal_moves"], json!([]));
}

#[tokio::test]
async fn malformed_matrix_is_rejected() {
    let graph = json!({"n": 2, "entries": [
        {"i": 1, "j": 1, "value": "3"},
        {"i": 1, "j": 2, "value": "-1"},
        {"i": 2, "j": 1, "value": "-1"}
    ]});
    let (status, body) = call(&app(), "POST", "/api/sessions", Some(json!({"graph": graph, "position": ["1", "1"]}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["code"], "DiagonalNotTwo");
    assert!(body["detail"].is_string());
}

#[tokio::test]
async fn bad_positions_are_rejected() {
    let app = app();
    let (status, body) = call(&app, "POST", "/api/sessions", Some(json!({"graph": fixture("a2"), "position": ["1"]}))).await;
    assert_eq!((status, body["code"].clone()), (StatusCode::UNPROCESSABLE_ENTITY, json!("WrongLength")));
    let (status, body) = call(&app, "POST", "/api/sessions", Some(json!({"graph": fixture("a2"), "position": ["1", "1/0"]}))).await;
    assert_eq!((status, body["code"].clone()), (StatusCode::UNPROCESSABLE_ENTITY, json!("ValueSyntaxError")));
    let (status, body) = call(&app, "POST", "/api/sessions", Some(json!({"graph": fixture("a2")}))).await;
    assert_eq!((status, body["code"].clone()), (StatusCode::BAD_REQUEST, json!("JsonError")));
}

#[tokio::test]
async fn fire_follows_the_rule() {
    let app = app();
    let (id, _) = create(&app, fixture("a2"), json!([1, 1])).await;
    let (status, state) = call(&app, "POST", &format!("/api/sessions/{id}/fire"), Some(json!({"node": 1}))).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(state["position"], json!(["-1", "2"]));
    assert_eq!(state["fired"], json!([1]));

    let (status, body) = call(&app, "POST", &format!("/api/sessions/{id}/fire"), Some(json!({"node": 1}))).await;
    assert_eq!((status, body["code"].clone()), (StatusCode::CONFLICT, json!("IllegalMove")));
    let (_, after) = call(&app, "GET", &format!("/api/sessions/{id}"), None).await;
    assert_eq!(after["position"], json!(["-1", "2"]));
}

#[tokio::test]
async fn fire_on_terminal_position_conflicts() {
    let app = app();
    let (id, _) = create(&app, fixture("a2"), json!(["-1", "-1"])).await;
    for node in [1, 2, 3, 0] {
        let (status, _) = call(&app, "POST", &format!("/api/sessions/{id}/fire"), Some(json!({"node": node}))).await;
        assert_eq!(status, StatusCode::CONFLICT);
    }
}

#[tokio::test]
async fn unknown_session_is_404() {
    let app = app();
    for (method, uri, body) in [
        ("GET", "/api/sessions/nope", None),
        ("POST", "/api/sessions/nope/fire", Some(json!({"node": 1}))),
        ("POST", "/api/sessions/nope/undo", None),
        ("POST", "/api/sessions/nope/auto", Some(json!({"strategy": "first_legal", "max_steps": 5}))),
    ] {
        let (status, body) = call(&app, method, uri, body).await;
        assert_eq!(status, StatusCode::NOT_FOUND, "{uri}");
        assert_eq!(body["code"], "SessionNotFound");
    }
}

#[tokio::test]
async fn undo_and_branch() {
    let app = app();
    let (id, _) = create(&app, fixture("a2"), json!(["1", "1"])).await;
    let (status, body) = call(&app, "POST", &format!("/api/sessions/{id}/undo"), None).await;
    assert_eq!((status, body["code"].clone()), (StatusCode::CONFLICT, json!("UndoAtRoot")));

    let (_, first) = call(&app, "POST", &format!("/api/sessions/{id}/fire"), Some(json!({"node": 1}))).await;
    let (_, back) = call(&app, "POST", &format!("/api/sessions/{id}/undo"), None).await;
    assert_eq!(back["position"], json!(["1", "1"]));
    assert_eq!(back["fired"], json!([]));
    let (_, second) = call(&app, "POST", &format!("/api/sessions/{id}/fire"), Some(json!({"node": 2}))).await;
    assert_ne!(first["branch_id"], second["branch_id"]);

    let (_, history) = call(&app, "GET", &format!("/api/sessions/{id}/history"), None).await;
    let nodes = history["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 3);
    assert_eq!(nodes[0]["children"], json!([1, 2]));
    assert_eq!(nodes[1]["fired"], json!(1));
    assert_eq!(nodes[2]["fired"], json!(2));

    let (_, jumped) = call(&app, "POST", &format!("/api/sessions/{id}/jump"), Some(json!({"node_id": 1}))).await;
    assert_eq!(jumped["position"], first["position"]);
    let (status, _) = call(&app, "POST", &format!("/api/sessions/{id}/jump"), Some(json!({"node_id": 9}))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn auto_plays_to_termination() {
    let app = app();
    let (id, _) = create(&app, fixture("a2"), json!(["1", "1"])).await;
    let (status, state) = call(
        &app,
        "POST",
        &format!("/api/sessions/{id}/auto"),
        Some(json!({"strategy": "first_legal", "max_steps": 100})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{state}");
    assert_eq!(state["outcome"], "terminated");
    assert_eq!(state["is_terminal"], json!(true));
    assert_eq!(state["position"], json!(["-1", "-1"]));
    assert_eq!(state["fired"].as_array().unwrap().len(), 3);
    assert_eq!(state["reduced_word"], state["fired"]);
    assert_eq!(state["is_reduced"], json!(true));

    let (status, body) = call(&app, "POST", &format!("/api/sessions/{id}/auto"), Some(json!({"strategy": "greedy"}))).await;
    assert_eq!((status, body["code"].clone()), (StatusCode::UNPROCESSABLE_ENTITY, json!("UnknownStrategy")));
}

#[tokio::test]
async fn forked_branches_converge() {
    let app = app();
    let (id, _) = create(&app, fixture("a2"), json!(["1", "1"])).await;
    let mut finals = Vec::new();
    for first in [1, 2] {
        call(&app, "POST", &format!("/api/sessions/{id}/jump"), Some(json!({"node_id": 0}))).await;
        call(&app, "POST", &format!("/api/sessions/{id}/fire"), Some(json!({"node": first}))).await;
        let (_, st) = call(&app, "POST", &format!("/api/sessions/{id}/auto"), Some(json!({"strategy": "random", "seed": 3}))).await;
        finals.push((st["position"].clone(), st["fired"].as_array().unwrap().len(), st["branch_id"].clone()));
    }
    assert_eq!(finals[0].0, json!(["-1", "-1"]));
    assert_eq!(finals[0].0, finals[1].0);
    assert_eq!((finals[0].1, finals[1].1), (3, 3));
    assert_ne!(finals[0].2, finals[1].2);
}

#[tokio::test]
async fn cursor_replays_through_the_engine() {
    let app = app();
    let graph = fixture("example312_reconstruction");
    let g = GraphDocument::from_value(graph.clone()).unwrap().build().unwrap();
    let start = ["1", "0.5", "2", "-1", "3", "0.25"];
    let (id, _) = create(&app, graph, json!(start)).await;
    let mut state = Value::Null;
    for k in 0..40 {
        let uri = format!("/api/sessions/{id}");
        let (_, current) = call(&app, "GET", &uri, None).await;
        let legal = current["legal_moves"].as_array().unwrap().clone();
        if k % 7 == 6 && !current["fired"].as_array().unwrap().is_empty() {
            state = call(&app, "POST", &format!("{uri}/undo"), None).await.1;
        } else if let Some(node) = legal.get(k % legal.len().max(1)) {
            state = call(&app, "POST", &format!("{uri}/fire"), Some(json!({"node": node}))).await.1;
        }
    }
    let fired: Vec<usize> = state["fired"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap() as usize - 1).collect();
    let pos = g.parse_position(&start).unwrap();
    let replay = play(&g, &pos, &Strategy::UserSequence { moves: fired.clone() }, fired.len()).unwrap();
    let text: Vec<String> = replay.final_position.iter().map(|x| x.to_lossless_string()).collect();
    assert_eq!(json!(text), state["position"]);
}

#[tokio::test]
async fn concurrent_requests_to_one_session_are_serialized() {
    let app = app();
    // W is infinite, so play from a dominant position never stops.
    let (id, _) = create(&app, fixture("example48"), json!(["1", "1"])).await;
    let mut tasks = Vec::new();
    for _ in 0..32 {
        let app = app.clone();
        let uri = format!("/api/sessions/{id}/auto");
        tasks.push(tokio::spawn(async move {
            call(&app, "POST", &uri, Some(json!({"strategy": "first_legal", "max_steps": 1}))).await.1
        }));
    }
    let mut revisions = Vec::new();
    for t in tasks {
        let st = t.await.unwrap();
        assert_eq!(st["fired"].as_array().unwrap().len() as u64, st["revision"].as_u64().unwrap());
        revisions.push(st["revision"].as_u64().unwrap());
    }
    revisions.sort();
    assert_eq!(revisions, (1..=32).collect::<Vec<u64>>());
}

#[tokio::test]
async fn distinct_sessions_do_not_interfere() {
    let app = app();
    let (a, _) = create(&app, fixture("a2"), json!(["1", "1"])).await;
    let (b, _) = create(&app, fixture("b2"), json!(["1", "1"])).await;
    call(&app, "POST", &format!("/api/sessions/{a}/fire"), Some(json!({"node": 1}))).await;
    let (_, sb) = call(&app, "GET", &format!("/api/sessions/{b}"), None).await;
    assert_eq!(sb["fired"], json!([]));
    assert_eq!(sb["revision"], json!(0));
}

#[tokio::test]
async fn analyze_gcm() {
    for name in ["a2", "b2", "g2", "a3"] {
        let (status, body) = call(&app(), "POST", "/api/analyze", Some(json!({"graph": fixture(name)}))).await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body["odd_asymmetries"], json!([]), "{name}");
        assert!(body["f_values"].as_array().unwrap().iter().all(|f| f == 1), "{name}");
        assert_eq!(body["type"], "plus");
    }
}

#[tokio::test]
async fn analyze_asymmetric_graph() {
    let (_, body) = call(&app(), "POST", "/api/analyze", Some(json!({"graph": fixture("asym_m3")}))).await;
    assert_eq!(body["odd_asymmetries"], json!([[1, 2]]));
    assert_eq!(body["f_values"], json!([2]));
    assert_eq!(body["s_mult"][1]["K_values"], json!(["1", "1/4"]));

    let (_, body) = call(&app(), "POST", "/api/analyze", Some(json!({"graph": fixture("nonunital_triangle")}))).await;
    assert_eq!(body["unital"], json!([false]));
    assert_eq!(body["s_mult"][0]["finite"], json!(false));
    assert!(body["s_mult"][0]["certificate"].is_array());
}

#[tokio::test]
async fn analyze_session_graph() {
    let app = app();
    let (id, _) = create(&app, fixture("g2"), json!(["1", "1"])).await;
    let (status, body) = call(&app, "POST", &format!("/api/sessions/{id}/analyze"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["m"], json!([[null, 6], [6, null]]));
}

#[tokio::test]
async fn store_cap_evicts_oldest_session() {
    let app = router(StoreConfig {
        max_sessions: 2,
        idle_timeout: Duration::from_secs(3600),
    });
    let (first, _) = create(&app, fixture("a2"), json!(["1", "1"])).await;
    create(&app, fixture("a2"), json!(["1", "1"])).await;
    create(&app, fixture("a2"), json!(["1", "1"])).await;
    let (status, _) = call(&app, "GET", &format!("/api/sessions/{first}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}
