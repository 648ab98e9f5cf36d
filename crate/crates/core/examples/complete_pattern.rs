//! Open a session on the "fill a cell's background" pattern, fill each hole
//! group with its top candidate and print the emitted code.
//!
//! cargo run --example complete_pattern

use patternforge::miner::{mine, MinerConfig};
use patternforge::scs::{load_corpus, Param};
use patternforge::session::{Choice, Engine, EngineConfig, Session};
use patternforge::ApiGraph;
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let graph = ApiGraph::from_json(&std::fs::read_to_string(root.join("poi-mini.json"))?)?;
    let corpus = load_corpus(&root.join("corpus"), &graph)?;
    let patterns = mine(&corpus, &MinerConfig { min_support_fraction: 0.1, ..Default::default() }, &graph)?;
    let engine = Engine::new(graph, corpus, patterns, EngineConfig::default())?;
    let pattern = engine
        .patterns
        .iter()
        .find(|p| p.description.contains("setFillForegroundColor") && p.calls.len() == 4)
        .ok_or("fill pattern not mined")?;
    println!("pattern {}: {}\n", pattern.id, pattern.description);

    let context = vec![Param::new("wb", "Workbook"), Param::new("cell", "Cell")];
    let mut session = Session::open(&engine, "demo", &pattern.id, context, 7)?;
    let view = session.view(&engine)?;
    for (h, e) in &view.fixed {
        println!("fixed {h} = {e}");
    }
    for g in &view.groups {
        println!("group v{} ({}) \"{}\" holes {:?}", g.index, g.declared_type, g.description, g.holes);
        for (bucket, cands) in &g.buckets {
            if let Some(top) = cands.first() {
                println!("    {:<18} {:>5} candidates, top {}", bucket.label(), cands.len(), top.text);
            }
        }
    }
    println!("\nexamples before filling: {:?}", view.examples.iter().map(|e| &e.id).collect::<Vec<_>>());
    let groups = view.groups.len();
    for g in 0..groups {
        let choice = Choice::Candidate { id: "c0".into() };
        session.fill(&engine, g, choice)?;
        let top = &session.state.ranking.entries[0];
        println!("filled v{g} = {:<40} top example {} (score {})", session.state.assignments[&g].text, top.id, top.score);
    }
    let code = session.emit(&engine)?;
    println!("\ncomplete: {}\n{}", code.complete, code.code);
    Ok(())
}
