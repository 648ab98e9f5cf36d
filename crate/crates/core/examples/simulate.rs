//! Simulate a user completing the fill pattern towards each example in
//! turn and report rank trajectories and mean reciprocal rank.
//!
//! cargo run --example simulate

use patternforge::scs::load_corpus;
use patternforge::session::{simulate, Engine, EngineConfig};
use patternforge::ApiGraph;
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let graph = ApiGraph::from_json(&std::fs::read_to_string(root.join("poi-mini.json"))?)?;
    let corpus = load_corpus(&root.join("corpus"), &graph)?;
    let tokens = "Workbook.createCellStyle() CellStyle.setFillForegroundColor(short) \
        CellStyle.setFillPattern(FillPatternType) Cell.setCellStyle(CellStyle)";
    let pattern = patternforge::miner::build_pattern(
        tokens.split_whitespace().map(str::parse).collect::<Result<_, _>>()?,
        corpus.len(),
        &graph,
    )?;
    let id = pattern.id.clone();
    let engine = Engine::new(graph, corpus, vec![pattern], EngineConfig::default())?;
    let goals = engine.pattern_data(&id)?.analysis.resolutions.examples.clone();

    println!("{:<20} {:>7}  {:<16} {:>6}  hole ranks", "goal", "initial", "trajectory", "mrr");
    for goal in goals {
        let r = simulate(&engine, &id, &goal, 1)?;
        let traj: Vec<String> = r.trajectory.iter().map(usize::to_string).collect();
        let holes: Vec<String> = r.hole_ranks.iter().map(|k| k.map_or("-".into(), |k| k.to_string())).collect();
        println!(
            "{goal:<20} {:>7}  {:<16} {:>6}  {}",
            r.initial_rank,
            traj.join(" > "),
            r.mrr.map_or("-".into(), |m| format!("{m:.3}")),
            holes.join(" ")
        );
    }
    Ok(())
}
