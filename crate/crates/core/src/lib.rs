//! Turn mined API usage patterns into complete code snippets.
//!
//! The pipeline: usage examples written in the SCS mini-language ([`scs`])
//! are linearized against an API knowledge graph ([`graph`]) and mined for
//! closed frequent call sequences ([`miner`]). For a chosen pattern, hole
//! analysis ([`holes`]) resolves what each receiver/argument hole held in
//! the examples, freezes near-constant holes and groups co-referent ones.
//! The synthesizer ([`synth`]) enumerates well-typed candidate expressions
//! per group, the ranker ([`rank`]) orders them and re-ranks examples, and
//! [`session`] ties it together as an interactive, replayable session with
//! an HTTP front end.

pub mod graph;
pub mod holes;
pub mod miner;
pub mod rank;
pub mod scs;
pub mod session;
pub mod synth;

pub use graph::{ApiGraph, ApiModelDocument, GraphError};
pub use scs::{Expr, ScsError, ScsExample, ScsPattern};
