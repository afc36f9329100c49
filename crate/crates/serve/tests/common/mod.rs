#![allow(dead_code)]

use std::sync::Arc;

use axum::body::Body;
use axum::http::{HeaderMap, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use qpz_core::export::export_viz;
use qpz_core::json::canonical_json;
use qpz_core::queries::{self, AvailabilityMode};
use qpz_core::{KnowledgeGraph, NodeKind};
use qpz_serve::AvailableResponse;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tower::ServiceExt;

pub struct Reply {
    pub status: StatusCode,
    pub headers: HeaderMap,
    pub body: String,
}

pub async fn send(app: &Router, method: Method, uri: &str, body: Option<&str>) -> Reply {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header("content-type", "application/json");
    }
    let req = req
        .body(
            body.map(|b| Body::from(b.to_string()))
                .unwrap_or_else(Body::empty),
        )
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let headers = res.headers().clone();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    Reply {
        status,
        headers,
        body: String::from_utf8(bytes.to_vec()).unwrap(),
    }
}

pub async fn get(app: &Router, uri: &str) -> Reply {
    send(app, Method::GET, uri, None).await
}

pub struct Fixture {
    pub method: Method,
    pub uri: String,
    pub body: Option<String>,
    pub expected: String,
}

/// Randomized requests over every endpoint, each paired with the canonical
/// serialization of the library call it should mirror.
pub fn fixtures(graph: &KnowledgeGraph, seed: u64, count: usize) -> Vec<Fixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<&str> = graph.nodes().iter().map(|n| n.id.as_str()).collect();
    let atomics: Vec<&str> = graph
        .nodes()
        .iter()
        .filter(|n| n.kind.is_atomic())
        .map(|n| n.id.as_str())
        .collect();
    (0..count)
        .map(|i| match i % 6 {
            0 => Fixture {
                method: Method::GET,
                uri: "/api/graph".into(),
                body: None,
                expected: canonical_json(&export_viz(graph, None).unwrap()),
            },
            1 => {
                let id = ids.choose(&mut rng).unwrap();
                Fixture {
                    method: Method::GET,
                    uri: format!("/api/nodes/{id}"),
                    body: None,
                    expected: canonical_json(graph.node(id).unwrap()),
                }
            }
            2 => {
                let id = ids.choose(&mut rng).unwrap();
                Fixture {
                    method: Method::GET,
                    uri: format!("/api/lineage/{id}"),
                    body: None,
                    expected: canonical_json(&queries::lineage(graph, id).unwrap()),
                }
            }
            3 => {
                let k = rng.gen_range(0..=5);
                let selected: Vec<&str> = atomics.choose_multiple(&mut rng, k).copied().collect();
                let mode = if rng.gen_bool(0.5) {
                    AvailabilityMode::Paper
                } else {
                    AvailabilityMode::AnyImpl
                };
                let body =
                    serde_json::json!({"selected": selected, "mode": mode.as_str()}).to_string();
                let result = queries::available(graph, &selected, mode).unwrap();
                Fixture {
                    method: Method::POST,
                    uri: "/api/available".into(),
                    body: Some(body),
                    expected: canonical_json(&AvailableResponse::from(result)),
                }
            }
            4 => {
                let kind = if rng.gen_bool(0.7) {
                    Some(*NodeKind::ALL.choose(&mut rng).unwrap())
                } else {
                    None
                };
                let top = rng.gen_bool(0.7).then(|| rng.gen_range(0..15));
                let mut uri = "/api/centrality?".to_string();
                if let Some(k) = kind {
                    uri.push_str(&format!("kind={k}&"));
                }
                if let Some(t) = top {
                    uri.push_str(&format!("top={t}"));
                }
                Fixture {
                    method: Method::GET,
                    uri,
                    body: None,
                    expected: canonical_json(&queries::centrality(graph, kind, top)),
                }
            }
            _ => Fixture {
                method: Method::GET,
                uri: "/api/stats".into(),
                body: None,
                expected: canonical_json(&queries::stats(graph)),
            },
        })
        .collect()
}

/// Runs the fixtures against a fresh router; returns how many matched or
/// the first mismatch.
pub async fn check_contract(
    graph: KnowledgeGraph,
    seed: u64,
    count: usize,
) -> Result<usize, String> {
    let all = fixtures(&graph, seed, count);
    let app = qpz_serve::router(Arc::new(graph), None);
    for f in &all {
        let reply = send(&app, f.method.clone(), &f.uri, f.body.as_deref()).await;
        if reply.status != StatusCode::OK {
            return Err(format!("{} {}: status {}", f.method, f.uri, reply.status));
        }
        if reply.headers["content-type"] != "application/json" {
            return Err(format!("{} {}: content type", f.method, f.uri));
        }
        if reply.body != f.expected {
            return Err(format!("{} {}: body differs", f.method, f.uri));
        }
    }
    Ok(all.len())
}
