//! Mine closed call-sequence patterns from the bundled POI corpus.
//!
//! cargo run --example mine_patterns [-- <min-support> <min-length>]

use patternforge::miner::{mine, MinerConfig};
use patternforge::scs::{load_corpus, print_pattern};
use patternforge::ApiGraph;
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let graph = ApiGraph::from_json(&std::fs::read_to_string(root.join("poi-mini.json"))?)?;
    let corpus = load_corpus(&root.join("corpus"), &graph)?;
    let mut args = std::env::args().skip(1);
    let cfg = MinerConfig {
        min_support_fraction: args.next().map(|a| a.parse()).transpose()?.unwrap_or(0.05),
        min_length: args.next().map(|a| a.parse()).transpose()?.unwrap_or(3),
        closed_only: true,
    };
    let patterns = mine(&corpus, &cfg, &graph)?;
    println!("{} examples, support threshold {}, {} patterns\n", corpus.len(), cfg.threshold(corpus.len()), patterns.len());
    for p in &patterns {
        println!("{}", print_pattern(p));
    }
    Ok(())
}
