use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use elhlab_core::framework::{Example, FragmentId};
use elhlab_core::teacher::{EqAnswer, Teacher, TeacherConfig, TruthfulTeacher};
use elhlab_core::{parse_tbox, Signature};
use elhlab_harness::session::router;
use elhlab_harness::{run_experiment, ExperimentConfig, TargetSource, Transcript};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

async fn create(app: &Router, body: Value) -> String {
    let (status, v) = call(app, "POST", "/sessions", Some(body)).await;
    assert_eq!(status, StatusCode::CREATED, "{v}");
    v["sessionId"].as_str().unwrap().to_string()
}

/// Waits until a query is pending or the session halted.
async fn next_pending(app: &Router, id: &str) -> Option<Value> {
    for _ in 0..5000 {
        let (status, v) = call(app, "GET", &format!("/sessions/{id}/pending"), None).await;
        if status == StatusCode::OK {
            return Some(v);
        }
        assert_eq!(status, StatusCode::NO_CONTENT);
        let (_, t) = call(app, "GET", &format!("/sessions/{id}/transcript"), None).await;
        let t: Transcript = serde_json::from_value(t).unwrap();
        if t.is_halted() {
            return None;
        }
        tokio::time::sleep(Duration::from_millis(1)).await;
    }
    panic!("session {id} neither asked nor halted");
}

/// Answers every query of session `id` as a truthful teacher for `target`
/// would, then returns the transcript.
async fn drive(app: &Router, id: &str, teacher: &mut TruthfulTeacher) -> Transcript {
    while let Some(q) = next_pending(app, id).await {
        let payload = q["payload"].as_str().unwrap();
        let body = match q["kind"].as_str().unwrap() {
            "mq" => {
                let yes = teacher.membership(&Example::parse(payload).unwrap()).unwrap();
                json!({ "answer": if yes { "yes" } else { "no" } })
            }
            "eq" => match teacher.equivalence(&parse_tbox(payload).unwrap()).unwrap() {
                EqAnswer::Yes => json!({ "answer": "yes" }),
                EqAnswer::Counterexample(e) => json!({ "counterexample": e.to_string() }),
            },
            other => panic!("unexpected query kind {other}"),
        };
        let (status, v) = call(app, "POST", &format!("/sessions/{id}/answer"), Some(body)).await;
        assert_eq!(status, StatusCode::OK, "{v}");
    }
    let (_, t) = call(app, "GET", &format!("/sessions/{id}/transcript"), None).await;
    serde_json::from_value(t).unwrap()
}

fn sig_json(sig: &Signature) -> Value {
    json!({
        "concepts": sig.concept_names.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "roles": sig.role_names.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
    })
}

async fn replay_matches(fragment: FragmentId, learner: &str, target: &str, names: &[&str]) {
    let sig = Signature::from_strs(names, &[]).unwrap();
    let cfg = ExperimentConfig::new(fragment, learner.parse().unwrap(), TargetSource::Inline(target.into()))
        .with_signature(&sig);
    let in_process = run_experiment(&cfg).unwrap();
    assert!(in_process.success());

    let app = router();
    let id =
        create(&app, json!({ "framework": fragment.as_str(), "learner": learner, "signature": sig_json(&sig) })).await;
    let mut teacher = TruthfulTeacher::new(TeacherConfig::new(parse_tbox(target).unwrap(), fragment)).unwrap();
    let api = drive(&app, &id, &mut teacher).await;

    assert_eq!(api.events, in_process.transcript.events);
    assert_eq!(api.final_hypothesis(), in_process.transcript.final_hypothesis());
    let (a, b) = (&api.metrics, &in_process.transcript.metrics);
    assert_eq!(
        (a.mq_count, a.eq_count, &a.max_counterexample_so_far),
        (b.mq_count, b.eq_count, &b.max_counterexample_so_far)
    );
    assert_eq!(a.success, None);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn human_session_replays_the_in_process_run() {
    replay_matches(FragmentId::ToyAtomic, "toy-mq", "ci: A <= B\nci: B <= C", &["A", "B", "C"]).await;
    replay_matches(FragmentId::ToyConj, "horn-mqeq", "ci: A & B <= C\nci: C <= D", &["A", "B", "C", "D"]).await;
    replay_matches(FragmentId::DlLite, "dllite-eq", "ci: A <= B", &["A", "B"]).await;
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn protocol_walk() {
    let app = router();
    let id = create(
        &app,
        json!({ "framework": "toy-atomic", "learner": "toy-mq", "signature": { "concepts": ["A", "B"] } }),
    )
    .await;
    let q = next_pending(&app, &id).await.unwrap();
    assert_eq!(q, json!({ "kind": "mq", "payload": "ci: A <= A", "step": 1 }));

    // A malformed answer is rejected and the query stays pending.
    let (status, v) = call(&app, "POST", &format!("/sessions/{id}/answer"), Some(json!({ "answer": "maybe" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert!(v["error"].is_string());
    let (status, v) =
        call(&app, "POST", &format!("/sessions/{id}/answer"), Some(json!({ "counterexample": "ci: A <=" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "{v}");
    let (status, again) = call(&app, "GET", &format!("/sessions/{id}/pending"), None).await;
    assert_eq!((status, again), (StatusCode::OK, q));

    let (status, _) = call(&app, "POST", &format!("/sessions/{id}/answer"), Some(json!({ "answer": "yes" }))).await;
    assert_eq!(status, StatusCode::OK);
    let q2 = next_pending(&app, &id).await.unwrap();
    assert_eq!(q2["payload"], "ci: A <= B");
    assert_eq!(q2["step"], 3);

    let (status, t) = call(&app, "GET", &format!("/sessions/{id}/transcript"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(t["events"].as_array().unwrap().len(), 3);
    assert_eq!(t["config"]["learner"], "toy-mq");
    assert_eq!(t["metrics"]["mqCount"], 2);

    let (status, _) = call(&app, "DELETE", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, _) = call(&app, "GET", &format!("/sessions/{id}/pending"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "DELETE", &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn malformed_requests_get_reasons() {
    let app = router();
    for body in [
        json!({ "framework": "owl", "learner": "toy-mq", "signature": {} }),
        json!({ "framework": "dllite", "learner": "pac(dllite-eq)", "signature": { "concepts": ["A"] } }),
        json!({ "framework": "elh", "learner": "horn-mqeq", "signature": { "concepts": ["A"] } }),
        json!({ "framework": "toy-atomic", "learner": "toy-mq", "signature": { "concepts": ["__x"] } }),
        json!({ "learner": "toy-mq" }),
    ] {
        let (status, v) = call(&app, "POST", "/sessions", Some(body.clone())).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
        assert!(v["error"].as_str().is_some_and(|s| !s.is_empty()), "{v}");
    }
}

#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn answering_the_wrong_kind_is_rejected() {
    let app = router();
    let id = create(&app, json!({ "framework": "dllite", "learner": "dllite-eq", "signature": { "concepts": ["A"] } }))
        .await;
    let q = next_pending(&app, &id).await.unwrap();
    assert_eq!(q["kind"], "eq");
    let (status, _) = call(&app, "POST", &format!("/sessions/{id}/answer"), Some(json!({ "answer": "no" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/answer"),
        Some(json!({ "counterexample": "ci: A <= some(r, B) " })),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = call(&app, "POST", &format!("/sessions/{id}/answer"), Some(json!({ "answer": "yes" }))).await;
    assert_eq!(status, StatusCode::OK);
    assert!(next_pending(&app, &id).await.is_none());
    let (status, _) = call(&app, "POST", &format!("/sessions/{id}/answer"), Some(json!({ "answer": "yes" }))).await;
    assert!(status == StatusCode::GONE || status == StatusCode::CONFLICT);
    let (_, t) = call(&app, "GET", &format!("/sessions/{id}/transcript"), None).await;
    let t: Transcript = serde_json::from_value(t).unwrap();
    assert_eq!(t.final_hypothesis(), Some(""));
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn sessions_are_isolated() {
    let app = router();
    let a = create(
        &app,
        json!({ "framework": "toy-atomic", "learner": "toy-mq", "signature": { "concepts": ["A", "B"] } }),
    )
    .await;
    let b = create(
        &app,
        json!({ "framework": "toy-atomic", "learner": "toy-mq", "signature": { "concepts": ["C", "D"] } }),
    )
    .await;
    assert_ne!(a, b);
    let mut ta =
        TruthfulTeacher::new(TeacherConfig::new(parse_tbox("ci: A <= B").unwrap(), FragmentId::ToyAtomic)).unwrap();
    let mut tb =
        TruthfulTeacher::new(TeacherConfig::new(parse_tbox("ci: D <= C").unwrap(), FragmentId::ToyAtomic)).unwrap();
    let (ra, rb) = tokio::join!(drive(&app, &a, &mut ta), drive(&app, &b, &mut tb));
    assert_eq!(ra.final_hypothesis(), Some("ci: A <= B\n"));
    assert_eq!(rb.final_hypothesis(), Some("ci: D <= C\n"));
}
