//! Synthesize ranked candidate expressions of a type from local variables.
//!
//! cargo run --example synthesize [-- <Type> <name:Type,...> <max-depth>]

use patternforge::rank::fit_popularity;
use patternforge::scs::{load_corpus, Param};
use patternforge::synth::{synthesize, SynthConfig};
use patternforge::ApiGraph;
use std::path::Path;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let graph = ApiGraph::from_json(&std::fs::read_to_string(root.join("poi-mini.json"))?)?;
    let popularity = fit_popularity(&load_corpus(&root.join("corpus"), &graph)?, &graph)?;
    let mut args = std::env::args().skip(1);
    let target = args.next().unwrap_or_else(|| "Cell".into());
    let locals: Vec<Param> = args
        .next()
        .unwrap_or_else(|| "wb:Workbook".into())
        .split(',')
        .filter_map(|p| p.split_once(':').map(|(n, t)| Param::new(n, t)))
        .collect();
    let max_depth = args.next().map(|d| d.parse()).transpose()?.unwrap_or(4);

    let cfg = SynthConfig { max_depth, ..SynthConfig::default() };
    let started = std::time::Instant::now();
    let cands = synthesize(&locals, &target, &cfg, &graph, &popularity)?;
    println!("{} candidates for {target} in {:.1} ms\n", cands.len(), started.elapsed().as_secs_f64() * 1e3);
    println!("{:<18} {:>5} {:>10}  expression", "syntax", "holes", "score");
    for c in cands.iter().take(15) {
        println!("{:<18} {:>5} {:>10.2e}  {}", c.syntax_type.label(), c.incompleteness(), c.popularity, c.text);
    }
    Ok(())
}
