//! Loads a diagram file and lists every problem found in it.
//!
//!     cargo run --example validate_diagram -- path/to/diagram.json

use interval_influence::{validate_diagram, DiagramDoc};

const BROKEN: &str = r#"{
  "nodes": [
    {"id": "A", "outcomes": ["a1", "a2"], "parents": ["B"],
     "lower_bounds": {"b1": [0.7, 0.4], "b2": [0.1, 0.1]}},
    {"id": "B", "outcomes": ["b1", "b2"], "parents": ["A"],
     "lower_bounds": {"a1": [0.2, 0.2]}}
  ]
}"#;

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/two_node.json").to_string());
    let doc = DiagramDoc::load(&path).expect("readable diagram file");
    let report = validate_diagram(&doc);
    println!("{path}: {}", if report.is_empty() { "OK".to_string() } else { format!("{} problems", report.len()) });

    // a cyclic diagram with an over-full bound vector and a missing context
    let doc = DiagramDoc::from_json(BROKEN).unwrap();
    println!("inline diagram:");
    for v in &validate_diagram(&doc).violations {
        println!("  {v}");
    }
}
