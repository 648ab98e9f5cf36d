//! Resolve a pattern's holes across the corpus, freeze constants and
//! cluster co-referring holes into groups.
//!
//! cargo run --example analyze_holes

use patternforge::holes::{analyze, ClusterConfig};
use patternforge::miner::build_pattern;
use patternforge::scs::{load_corpus, SeqToken};
use patternforge::ApiGraph;
use std::path::Path;

const FILL: &str = "Workbook.createCellStyle() CellStyle.setFillForegroundColor(short) \
    CellStyle.setFillPattern(FillPatternType) Cell.setCellStyle(CellStyle)";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let graph = ApiGraph::from_json(&std::fs::read_to_string(root.join("poi-mini.json"))?)?;
    let corpus = load_corpus(&root.join("corpus"), &graph)?;
    let tokens: Vec<SeqToken> = FILL.split_whitespace().map(str::parse).collect::<Result<_, _>>()?;
    let pattern = build_pattern(tokens, corpus.len(), &graph)?;
    println!("{}\n", pattern.description);

    let a = analyze(&pattern, &corpus, &graph, &ClusterConfig::default())?;
    println!("resolved in {} examples", a.resolutions.examples.len());
    for (hole, e) in &a.fixed {
        println!("fixed  {hole} = {e}");
    }
    println!("\nco-reference degrees ({}):", a.changeable.join(" "));
    for row in &a.degrees {
        println!("    {}", row.iter().map(|d| format!("{d:.2}")).collect::<Vec<_>>().join(" "));
    }
    for g in &a.groups {
        println!("\ngroup {} : {} \"{}\" {:?}", g.index, g.declared_type, g.description, g.holes);
        for f in g.frequencies.iter().take(4) {
            println!("    {:>2}x {:<18} {}", f.count, f.syntax_type.label(), f.text);
        }
    }
    println!("\nsyntax histogram:");
    for (t, n) in a.histogram() {
        println!("    {:<18} {n}", t.label());
    }
    Ok(())
}
