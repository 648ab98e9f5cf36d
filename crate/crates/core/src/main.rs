use clap::{Parser, Subcommand};
use patternforge::graph::GraphCache;
use patternforge::holes::analyze;
use patternforge::miner::{mine, read_denylist, read_review, write_denylist, write_review, Decision, MinerConfig, PatternFile};
use patternforge::rank::{fit_popularity, PopularityModel};
use patternforge::scs::{load_corpus, Param};
use patternforge::session::service::{serve, AppState};
use patternforge::session::{simulate, Engine, EngineConfig};
use patternforge::synth::{synthesize, SynthConfig};
use patternforge::ApiGraph;
use std::collections::BTreeSet;
use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

type Result<T> = std::result::Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "patternforge", version, about = "Turn mined API usage patterns into complete code snippets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the API knowledge graph and write the graph cache.
    BuildKg {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Fit a popularity model on this corpus and store it in the cache.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Mine closed frequent call sequences into patterns.json.
    Mine {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        min_support: f64,
        #[arg(long, default_value_t = 3)]
        min_length: usize,
        /// Keep non-closed frequent sequences too.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        out: PathBuf,
        /// Also write the patterns to this file for accept/reject review.
        #[arg(long)]
        review: Option<PathBuf>,
        /// Rejected pattern ids, skipped when mining and extended by `--apply-review`.
        #[arg(long)]
        denylist: Option<PathBuf>,
        /// Read a reviewed file and add its rejected ids to the denylist.
        #[arg(long, requires = "denylist")]
        apply_review: Option<PathBuf>,
    },
    /// Resolve, freeze and cluster one pattern's holes into groups.json.
    Analyze {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        patterns: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Synthesize candidate expressions of a type.
    Synth {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        target: String,
        /// Comma-separated `name:Type` locals.
        #[arg(long, default_value = "")]
        locals: String,
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
        /// Sub-results kept per type and depth; 0 disables the cap.
        #[arg(long, default_value_t = 50)]
        cap: usize,
        /// Fit popularity on this corpus instead of the cache's model.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Simulate a user completing a pattern towards a goal example.
    Simulate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        patterns: PathBuf,
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        goal: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: PathBuf,
    },
    /// Serve the HTTP/JSON session API on localhost.
    Serve {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        patterns: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        data: Option<PathBuf>,
    },
}

/// A model document or a graph cache built from one.
fn load_graph(path: &Path) -> Result<(ApiGraph, Option<PopularityModel>)> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Ok(cache) = GraphCache::from_json(&text) {
        return Ok((cache.graph, cache.popularity));
    }
    Ok((ApiGraph::from_json(&text)?, None))
}

fn load_patterns(path: &Path) -> Result<PatternFile> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(PatternFile::from_json(&text)?)
}

fn parse_locals(s: &str) -> Result<Vec<Param>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| match p.split_once(':') {
            Some((n, t)) => Ok(Param { name: n.trim().to_string(), ty: t.trim().to_string() }),
            None => Err(format!("local `{p}` is not `name:Type`").into()),
        })
        .collect()
}

fn engine(model: &Path, corpus: &Path, patterns: &Path) -> Result<Engine> {
    let (graph, popularity) = load_graph(model)?;
    let corpus = load_corpus(corpus, &graph)?;
    let patterns = load_patterns(patterns)?.patterns;
    let engine = match popularity {
        Some(p) => Engine::with_popularity(graph, corpus, patterns, p, EngineConfig::default())?,
        None => Engine::new(graph, corpus, patterns, EngineConfig::default())?,
    };
    Ok(engine)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::BuildKg { model, out, corpus } => {
            let bytes = fs::read(&model).map_err(|e| format!("{}: {e}", model.display()))?;
            let graph = ApiGraph::from_json(&String::from_utf8(bytes.clone())?)?;
            let mut cache = GraphCache::new(&bytes, graph);
            if let Some(c) = corpus {
                let examples = load_corpus(&c, &cache.graph)?;
                cache.popularity = Some(fit_popularity(&examples, &cache.graph)?);
            }
            fs::write(&out, cache.to_json())?;
            eprintln!("wrote {} ({} members)", out.display(), cache.graph.member_count());
        }
        Command::Mine { corpus, model, min_support, min_length, all, out, review, denylist, apply_review } => {
            let mut denied = match &denylist {
                Some(p) if p.exists() => read_denylist(&fs::read_to_string(p)?),
                _ => BTreeSet::new(),
            };
            if let (Some(r), Some(d)) = (&apply_review, &denylist) {
                let decisions = read_review(&fs::read_to_string(r)?)?;
                let before = denied.len();
                denied.extend(decisions.into_iter().filter(|(_, d)| *d == Decision::Reject).map(|(id, _)| id));
                fs::write(d, write_denylist(&denied))?;
                eprintln!("denylist: {} new rejected ids", denied.len() - before);
            }
            let (graph, _) = load_graph(&model)?;
            let examples = load_corpus(&corpus, &graph)?;
            let cfg = MinerConfig { min_support_fraction: min_support, min_length, closed_only: !all };
            let patterns: Vec<_> = mine(&examples, &cfg, &graph)?.into_iter().filter(|p| !denied.contains(&p.id)).collect();
            if let Some(r) = review {
                fs::write(r, write_review(&patterns))?;
            }
            let file = PatternFile::new(cfg, examples.len(), patterns);
            fs::write(&out, file.to_json())?;
            eprintln!("mined {} patterns from {} examples (threshold {})", file.patterns.len(), file.corpus_size, file.threshold);
        }
        Command::Analyze { pattern, corpus, model, patterns, out } => {
            let (graph, _) = load_graph(&model)?;
            let examples = load_corpus(&corpus, &graph)?;
            let file = load_patterns(&patterns)?;
            let p = file.patterns.iter().find(|p| p.id == pattern).ok_or_else(|| format!("unknown pattern `{pattern}`"))?;
            let analysis = analyze(p, &examples, &graph, &Default::default())?;
            fs::write(&out, serde_json::to_string_pretty(&analysis)?)?;
            eprintln!("{} fixed, {} groups", analysis.fixed.len(), analysis.groups.len());
        }
        Command::Synth { model, target, locals, max_depth, cap, corpus, limit } => {
            let (graph, popularity) = load_graph(&model)?;
            let popularity = match (corpus, popularity) {
                (Some(c), _) => fit_popularity(&load_corpus(&c, &graph)?, &graph)?,
                (None, Some(p)) => p,
                (None, None) => PopularityModel::uniform(&graph),
            };
            let cfg = SynthConfig { max_depth, per_type_cap: cap };
            let cands = synthesize(&parse_locals(&locals)?, &target, &cfg, &graph, &popularity)?;
            println!("{} candidates", cands.len());
            for c in cands.iter().take(limit) {
                println!("{:<18} {:.6}  {}", c.syntax_type.label(), c.popularity, c.text);
            }
        }
        Command::Simulate { model, corpus, patterns, pattern, goal, seed, report } => {
            let engine = engine(&model, &corpus, &patterns)?;
            let r = simulate(&engine, &pattern, &goal, seed)?;
            fs::write(&report, serde_json::to_string_pretty(&r)?)?;
            let trajectory: Vec<String> = r.trajectory.iter().map(usize::to_string).collect();
            eprintln!("rank {} -> {} (final {})", r.initial_rank, trajectory.join(" -> "), r.final_rank);
        }
        Command::Serve { model, corpus, patterns, port, data } => {
            let state = Arc::new(AppState::new(Arc::new(engine(&model, &corpus, &patterns)?), data)?);
            eprintln!("listening on http://127.0.0.1:{port}");
            tokio::runtime::Runtime::new()?.block_on(serve(state, port))?;
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
