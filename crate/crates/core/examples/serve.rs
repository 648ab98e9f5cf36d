//! Serve the session API on localhost for the bundled corpus.
//!
//! cargo run --example serve [-- <port>]
//!
//! curl -s localhost:8080/patterns
//! curl -s -XPOST localhost:8080/sessions -H 'content-type: application/json' \
//!     -d '{"pattern_id":"<id>","context":[{"name":"wb","type":"Workbook"}]}'

use patternforge::miner::{mine, MinerConfig};
use patternforge::scs::load_corpus;
use patternforge::session::service::{serve, AppState};
use patternforge::session::{Engine, EngineConfig};
use patternforge::ApiGraph;
use std::path::Path;
use std::sync::Arc;

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let graph = ApiGraph::from_json(&std::fs::read_to_string(root.join("poi-mini.json"))?)?;
    let corpus = load_corpus(&root.join("corpus"), &graph)?;
    let patterns = mine(&corpus, &MinerConfig { min_support_fraction: 0.1, ..Default::default() }, &graph)?;
    let port = std::env::args().nth(1).map(|p| p.parse()).transpose()?.unwrap_or(8080);
    let engine = Engine::new(graph, corpus, patterns, EngineConfig::default())?;
    for p in &engine.patterns {
        println!("{}  {}", p.id, p.description);
    }
    let state = Arc::new(AppState::new(Arc::new(engine), None)?);
    println!("listening on http://127.0.0.1:{port}");
    serve(state, port).await?;
    Ok(())
}
