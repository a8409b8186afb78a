//! In-process HTTP client over the router.
#![allow(dead_code)]

use std::sync::Arc;

#[path = "../../../core/tests/support/mod.rs"]
pub mod support;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::Value;
use storyscope::analytics::EmbeddingTable;
use storyscope_service::api::router;
use storyscope_service::store::Store;
use tower::ServiceExt;

pub struct Client {
    pub app: Router,
}

pub struct Reply {
    pub status: StatusCode,
    pub bytes: Vec<u8>,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_slice(&self.bytes).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&self.bytes)))
    }
}

impl Client {
    pub fn new(embeddings: Option<EmbeddingTable>) -> Client {
        Client::over(Store::in_memory(embeddings))
    }

    pub fn over(store: Store) -> Client {
        Client {
            app: router(Arc::new(store)),
        }
    }

    pub async fn call(&self, method: Method, uri: &str, body: Option<Value>) -> Reply {
        let request = Request::builder()
            .method(method)
            .uri(uri)
            .header("content-type", "application/json")
            .body(match body {
                Some(v) => Body::from(serde_json::to_vec(&v).unwrap()),
                None => Body::empty(),
            })
            .unwrap();
        let response = self.app.clone().oneshot(request).await.unwrap();
        let status = response.status();
        let bytes = response.into_body().collect().await.unwrap().to_bytes().to_vec();
        Reply { status, bytes }
    }

    pub async fn get(&self, uri: &str) -> Reply {
        self.call(Method::GET, uri, None).await
    }

    pub async fn post(&self, uri: &str, body: Value) -> Reply {
        self.call(Method::POST, uri, Some(body)).await
    }

    /// Creates a project and returns its id.
    pub async fn project(&self, document: &str) -> String {
        let reply = self.post("/projects", serde_json::json!({"title": "t", "document": document})).await;
        assert_eq!(reply.status, StatusCode::CREATED);
        reply.json()["id"].as_str().unwrap().to_string()
    }

    /// Character id by canonical name.
    pub async fn character(&self, project: &str, name: &str) -> u64 {
        let list = self.get(&format!("/projects/{project}/characters")).await.json();
        list["characters"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["canonical_name"] == name)
            .unwrap_or_else(|| panic!("no character {name}"))["id"]
            .as_u64()
            .unwrap()
    }
}

pub fn fixture(file: &str) -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures/");
    std::fs::read_to_string(format!("{path}{file}")).unwrap()
}

/// A project with a random document, registry history, schema and settings.
pub fn random_project(rng: &mut rand::rngs::StdRng, index: usize) -> storyscope_service::project::Project {
    use rand::seq::SliceRandom;
    use rand::Rng;
    use storyscope::analytics::{Aggregate, SortOrder};
    use storyscope::incremental::Orchestrator;
    use storyscope::text::Span;
    use storyscope_service::project::{Project, Settings};

    let document = match rng.gen_range(0..4) {
        0 => String::new(),
        1 => support::story(support::FIXTURES.choose(rng).unwrap()),
        _ => (0..rng.gen_range(1..30))
            .map(|i| {
                let s = support::EDIT_POOL.choose(rng).unwrap();
                if i % 3 == 2 { format!("{s}\n\n") } else { format!("{s} ") }
            })
            .collect::<String>(),
    };
    let titles = ["Draft", "Zoë’s “story”", "a\\b", "漢字 \"quoted\"", ""];
    let mut project = Project::new(format!("p{index}"), *titles.choose(rng).unwrap(), document.clone());
    let mut orchestrator = Orchestrator::default();
    orchestrator.analyze(&document, None, &mut project.registry);
    for _ in 0..rng.gen_range(0..15) {
        match rng.gen_range(0..5) {
            0 => {
                let dim = ["Profession", "Age group", "Gender", "Région"].choose(rng).unwrap();
                let cat = ["Doctor", "Teen", "Self-described: Fae", "Ünïcode"].choose(rng).copied();
                let _ = project.registry.extend_schema(dim, if rng.gen_bool(0.3) { None } else { cat });
            }
            1 if !document.is_empty() => {
                let words: Vec<(usize, &str)> = document
                    .split(' ')
                    .scan(0usize, |at, w| {
                        let start = *at;
                        *at += w.chars().count() + 1;
                        Some((start, w))
                    })
                    .filter(|(_, w)| w.len() > 3 && w.chars().all(char::is_alphabetic))
                    .collect();
                if let Some(&(start, w)) = words.choose(rng) {
                    let _ = project.registry.add_manual(&document, w, Span::new(start, start + w.chars().count()));
                }
            }
            _ => {
                support::random_registry_op(rng, &document, &mut project.registry);
            }
        }
        orchestrator.analyze(&document, None, &mut project.registry);
    }
    project.settings = Settings {
        aggregate_mode: if rng.gen_bool(0.5) { Aggregate::Auto } else { Aggregate::Off },
        sort_order: if rng.gen_bool(0.5) { SortOrder::Asc } else { SortOrder::Desc },
        min_edge_count: rng.gen_range(1..10),
        top_n_pairs: rng.gen_range(1..20),
        word_zone_k: rng.gen_range(1..50),
    };
    project
}
