mod common;

use std::collections::BTreeMap;
use std::process::{Command, Output};

use serde_json::Value;
use storyscope::entities::parse_gold;
use storyscope_service::project::Project;

use common::fixture;

fn fixture_path(file: &str) -> String {
    format!("{}/../core/fixtures/{file}", env!("CARGO_MANIFEST_DIR"))
}

fn storyscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_storyscope"))
        .args(args)
        .env_remove("STORYSCOPE_EMBEDDINGS")
        .output()
        .unwrap()
}

fn report(args: &[&str]) -> Value {
    let out = storyscope(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn empty_file_gives_an_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let out = dir.path().join("out.json");
    let status = storyscope(&["analyze", empty.to_str().unwrap(), "--report", out.to_str().unwrap()]);
    assert!(status.status.success());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(r["snapshot"]["S"], 0);
    assert_eq!(r["timeline"]["rows"], serde_json::json!([]));
    assert_eq!(r["impact"], serde_json::json!([]));
    assert_eq!(r["word_zones"], serde_json::json!([]));
    assert_eq!(r["candidates"]["status"], "skipped");
}

#[test]
fn gold_report_totals_equal_gold_counts() {
    let r = report(&[
        "analyze",
        &fixture_path("sleeping_beauty.txt"),
        "--gold",
        &fixture_path("sleeping_beauty.gold.jsonl"),
    ]);
    let mut gold: BTreeMap<String, u64> = BTreeMap::new();
    for rec in parse_gold(&fixture("sleeping_beauty.gold.jsonl")).unwrap() {
        *gold.entry(rec.entity_key.to_lowercase()).or_insert(0) += 1;
    }
    let totals: BTreeMap<String, u64> = r["timeline"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| (row["label"].as_str().unwrap().to_lowercase(), row["total_mentions"].as_u64().unwrap()))
        .collect();
    assert_eq!(totals, gold);
    assert_eq!(r["timeline"]["rows"][0]["label"], "Florimond");
}

#[test]
fn report_includes_all_four_analytics() {
    let r = report(&[
        "analyze",
        &fixture_path("anna_excerpt.txt"),
        "--embeddings",
        &fixture_path("toy_embeddings.txt"),
    ]);
    let characters = r["timeline"]["rows"].as_array().unwrap().len();
    assert_eq!(characters, 6);
    assert_eq!(r["impact"].as_array().unwrap().len(), characters);
    assert_eq!(r["word_zones"].as_array().unwrap().len(), characters);
    assert_eq!(r["candidates"]["status"], "ranked");
    assert_eq!(r["candidates"]["pairs"].as_array().unwrap().len(), 10);
}

#[test]
fn registry_file_seeds_the_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let first = report(&["analyze", &fixture_path("anna_excerpt.txt")]);
    let mut registry = first["registry"].clone();
    // Rename Stiva's record so the report shows the registry was used.
    for record in registry["records"].as_object_mut().unwrap().values_mut() {
        if record["canonical_name"] == "Stiva" {
            record["canonical_name"] = "Stepan".into();
        }
    }
    let path = dir.path().join("registry.json");
    std::fs::write(&path, registry.to_string()).unwrap();
    let r = report(&["analyze", &fixture_path("anna_excerpt.txt"), "--registry", path.to_str().unwrap()]);
    let labels: Vec<&str> = r["timeline"]["rows"].as_array().unwrap().iter().map(|x| x["label"].as_str().unwrap()).collect();
    assert!(labels.contains(&"Stepan"), "{labels:?}");

    std::fs::write(&path, "{").unwrap();
    let bad = storyscope(&["analyze", &fixture_path("anna_excerpt.txt"), "--registry", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn embeddings_check_exit_codes() {
    let ok = storyscope(&["embeddings", "check", &fixture_path("toy_embeddings.txt")]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("50 vectors of dimension 8"));

    let dir = tempfile::tempdir().unwrap();
    let ragged = dir.path().join("ragged.txt");
    std::fs::write(&ragged, "2 3\nhappy 0.1 0.2 0.3\nsad 0.1 0.2\n").unwrap();
    let out = storyscope(&["embeddings", "check", ragged.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn report_on_a_project_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    Project::new("p1", "Anna", fixture("anna_excerpt.txt")).save(&path).unwrap();

    let json = report(&["report", "--project", path.to_str().unwrap(), "--format", "json"]);
    assert!(json["snapshot"]["S"].as_u64().unwrap() > 70);

    let csv = storyscope(&["report", "--project", path.to_str().unwrap(), "--format", "csv"]);
    assert!(csv.status.success());
    let text = String::from_utf8(csv.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("word,pos,entity,sentence"));
    assert!(lines.any(|l| l == "jealous,ADJ,Dolly,2"));

    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    let corrupt = storyscope(&["report", "--project", path.to_str().unwrap()]);
    assert_eq!(corrupt.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&corrupt.stderr).contains("corrupt"));
}

#[test]
fn missing_input_is_a_plain_failure() {
    let out = storyscope(&["analyze", "/nonexistent/story.txt"]);
    assert_eq!(out.status.code(), Some(1));
}
