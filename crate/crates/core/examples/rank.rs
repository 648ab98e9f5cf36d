//! Re-rank a pattern's examples as hole groups get assigned.
//!
//! cargo run --example rank

use patternforge::rank::{rerank_examples, RerankConfig};
use patternforge::scs::{load_corpus, parse_expr, resolve_expr};
use patternforge::session::{Engine, EngineConfig};
use patternforge::ApiGraph;
use std::collections::BTreeMap;
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
    let data = engine.pattern_data(&id)?;
    let color = data.analysis.groups.iter().position(|g| g.declared_type == "short").ok_or("no color group")?;
    let cfg = RerankConfig::default();

    let show = |title: &str, assigned: &BTreeMap<usize, patternforge::Expr>| {
        println!("{title}");
        for (k, e) in rerank_examples(&data.views, assigned, 42, &cfg).entries.iter().enumerate() {
            println!("    {}. {:<20} {:.2}", k + 1, e.id, e.score);
        }
    };
    show("no assignments (seeded shuffle):", &BTreeMap::new());
    // An exact match scores 1, a match on the root creator only scores 0.5.
    for text in ["IndexedColors.RED.getIndex()", "IndexedColors.GREEN.getIndex()"] {
        let e = resolve_expr(&parse_expr(text, &[])?, &engine.graph);
        show(&format!("\ncolor = {text}:"), &BTreeMap::from([(color, e)]));
    }
    Ok(())
}
