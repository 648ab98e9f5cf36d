//! Build the API knowledge graph from the bundled model and query it:
//! creators of a type, subtyping, and the cache round trip.
//!
//! cargo run --example build_graph [-- <Type>]

use patternforge::graph::GraphCache;
use patternforge::rank::fit_popularity;
use patternforge::scs::load_corpus;
use patternforge::ApiGraph;
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let bytes = std::fs::read(root.join("poi-mini.json"))?;
    let graph = ApiGraph::from_json(std::str::from_utf8(&bytes)?)?;
    let target = std::env::args().nth(1).unwrap_or_else(|| "CellStyle".into());
    println!("{} types, {} members", graph.type_names().count(), graph.member_count());

    println!("\ncreators of {target}:");
    for c in graph.creators_of(&target)? {
        println!("    {c}");
    }
    let subtypes: Vec<&str> = graph.subtypes_of(&target).collect();
    println!("assignable to {target}: {subtypes:?}");
    println!("XSSFWorkbook -> Workbook assignable: {}", graph.assignable("XSSFWorkbook", "Workbook"));

    // The cache stores the model hash and, optionally, a fitted popularity model.
    let corpus = load_corpus(&root.join("corpus"), &graph)?;
    let mut cache = GraphCache::new(&bytes, graph);
    cache.popularity = Some(fit_popularity(&corpus, &cache.graph)?);
    let text = cache.to_json();
    let back = GraphCache::from_json(&text)?;
    println!("\ncache: {} bytes, {} members after reload", text.len(), back.graph.member_count());
    if let Some(pop) = &back.popularity {
        for c in back.graph.creators_of(&target)? {
            println!("    P({}) = {:.3}", c.key(), pop.probability(&target, &c.key()).unwrap_or(0.0));
        }
    }
    Ok(())
}
