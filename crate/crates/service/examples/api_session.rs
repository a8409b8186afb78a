//! Drives the HTTP API in process: create a project, edit a paragraph with
//! a delta, merge two characters and read the timeline back.
//!
//! cargo run -p storyscope-service --example api_session

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use storyscope_service::api::router;
use storyscope_service::store::Store;
use tower::ServiceExt;

async fn call(app: &axum::Router, method: Method, uri: &str, body: Option<Value>) -> Value {
    let request = Request::builder()
        .method(&method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |v| Body::from(v.to_string())))
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    let value: Value = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    println!("{method} {uri} -> {status}");
    value
}

#[tokio::main]
async fn main() {
    let app = router(Arc::new(Store::in_memory(None)));
    let document = "Mara met Tobin at the mill.\n\nTobin was tired. Mara laughed.";
    let created = call(&app, Method::POST, "/projects", Some(json!({"title": "Mill", "document": document}))).await;
    let id = created["id"].as_str().unwrap().to_string();

    let edited = format!("{document} Old Tob waved.");
    let delta = json!([{"retain": document.chars().count()}, {"insert": " Old Tob waved."}]);
    let outcome = call(&app, Method::POST, &format!("/projects/{id}/analyze"), Some(json!({"document": edited, "delta": delta}))).await;
    println!("  {} paragraph re-ran, hint {}", outcome["pipeline_runs"], outcome["delta_hint"]["status"]);

    let characters = call(&app, Method::GET, &format!("/projects/{id}/characters"), None).await;
    let find = |name: &str| {
        characters["characters"].as_array().unwrap().iter().find(|c| c["canonical_name"] == name).map(|c| c["id"].clone())
    };
    if let (Some(target), Some(source)) = (find("Tobin"), find("Tob")) {
        call(&app, Method::POST, &format!("/projects/{id}/characters/merge"), Some(json!({"target": target, "source": source}))).await;
    }

    let timeline = call(&app, Method::GET, &format!("/projects/{id}/timeline"), None).await;
    for row in timeline["rows"].as_array().unwrap() {
        println!("  {:>8} {} mentions", row["label"].as_str().unwrap(), row["total_mentions"]);
    }
}
