//! The SCS (structured call sequence) mini-language: parser, canonical
//! printer and linearization into call/control token sequences.
//!
//! See `docs/scs-grammar.md` for the concrete grammar.

pub mod ast;
mod infer;
pub mod lexer;
mod linearize;
mod parser;
mod pattern;
mod printer;

pub use ast::*;
pub use infer::{infer_free_var_types, resolve_expr, resolve_in_graph};
pub use linearize::{events, linearize, CallSite, Event, MethodKey, SeqToken};
pub use parser::{parse_corpus, parse_example, parse_expr, parse_statements};
pub use pattern::{call_contexts, describe_tokens, parse_pattern, pattern_id, print_pattern, CallKind, CallTemplate, ControlContext, Hole, HoleRole, ScsPattern};
pub use printer::{print_example, print_example_block, print_expr, print_statements};

use crate::graph::ApiGraph;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Grammar version; bump when fixtures need a grammar extension.
pub const GRAMMAR_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScsError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("invalid type name `{name}` at {line}:{col}")]
    TypeName { line: usize, col: usize, name: String },
}

/// Parse one example and resolve it against `g`: enum constants vs static
/// fields, and free-variable types inferred from their uses.
pub fn parse_example_in(text: &str, g: &ApiGraph) -> Result<ScsExample, ScsError> {
    let mut ex = parse_example(text)?;
    resolve_in_graph(&mut ex, g);
    Ok(ex)
}

/// Parse a corpus file and resolve every example against `g`.
pub fn parse_corpus_in(text: &str, g: &ApiGraph) -> Result<Vec<ScsExample>, ScsError> {
    let mut out = parse_corpus(text)?;
    for ex in &mut out {
        resolve_in_graph(ex, g);
    }
    Ok(out)
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ScsError },
    #[error("duplicate example id `{0}`")]
    DuplicateId(String),
}

/// Load a corpus from one file or from every `*.scs` file of a directory
/// (in file-name order), resolved against `g`.
pub fn load_corpus(path: &Path, g: &ApiGraph) -> Result<Vec<ScsExample>, CorpusError> {
    let io = |e| CorpusError::Io { path: path.to_path_buf(), source: e };
    let files = if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "scs"))
            .collect();
        files.sort();
        files
    } else {
        vec![path.to_path_buf()]
    };
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for f in files {
        let text = std::fs::read_to_string(&f).map_err(|e| CorpusError::Io { path: f.clone(), source: e })?;
        for ex in parse_corpus_in(&text, g).map_err(|e| CorpusError::Parse { path: f.clone(), source: e })? {
            if !seen.insert(ex.id.clone()) {
                return Err(CorpusError::DuplicateId(ex.id));
            }
            out.push(ex);
        }
    }
    Ok(out)
}
