//! Rank-promotion simulation: a scripted user completes a pattern towards
//! a goal example, always picking the goal's own expression.

use super::{Choice, Engine, Session, SessionError};
use crate::holes::classify;
use crate::rank::mrr;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub pattern_id: String,
    pub goal: String,
    pub seed: u64,
    /// Examples the pattern embeds in (the ranked population).
    pub example_count: usize,
    pub initial_rank: usize,
    /// Goal rank after each filled group.
    pub trajectory: Vec<usize>,
    pub final_rank: usize,
    /// Rank of the goal's expression in its syntax bucket, per group;
    /// `None` when no candidate equals it.
    pub hole_ranks: Vec<Option<usize>>,
    pub mrr: Option<f64>,
    /// Wall-clock time to produce each group's recommendations.
    pub response_ms: Vec<f64>,
    /// One fill per group.
    pub interactions: usize,
}

/// Replay the completion of `pattern_id` towards `goal_id`. Groups are
/// filled in pattern order; for each, the goal's syntax type picks the
/// bucket and the first candidate equal to the goal's expression is taken.
/// When there is none the goal's expression is typed in directly.
pub fn simulate(engine: &Engine, pattern_id: &str, goal_id: &str, seed: u64) -> Result<SimulationReport, SessionError> {
    let goal = engine.example(goal_id)?;
    let data = engine.pattern_data(pattern_id)?;
    let gi = data.analysis.resolutions.example_index(goal_id).ok_or_else(|| SessionError::NoEmbedding(goal_id.to_string()))?;
    let mut session = Session::open(engine, "simulation", pattern_id, goal.context_params.clone(), seed)?;
    let rank_of = |s: &Session| s.state.ranking.rank_of(goal_id).expect("goal is ranked");
    let initial_rank = rank_of(&session);
    let mut trajectory = Vec::new();
    let mut hole_ranks = Vec::new();
    let mut response_ms = Vec::new();
    for group in &data.analysis.groups {
        let Some(target) = data.analysis.example_group_expr(gi, group.index) else {
            hole_ranks.push(None);
            response_ms.push(0.0);
            trajectory.push(rank_of(&session));
            continue;
        };
        let bucket = classify(target);
        let want = target.to_string();
        let started = Instant::now();
        let cands = session.candidates(engine, group.index)?;
        response_ms.push(started.elapsed().as_secs_f64() * 1e3);
        let found = cands
            .iter()
            .enumerate()
            .filter(|(_, c)| c.syntax_type == bucket)
            .enumerate()
            .find(|(_, (_, c))| session.expand(&c.expression).to_string() == want)
            .map(|(rank, (k, _))| (rank + 1, k));
        hole_ranks.push(found.map(|(r, _)| r));
        let choice = match found {
            Some((_, k)) => Choice::Candidate { id: format!("c{k}") },
            None => Choice::Expression { text: want },
        };
        session.fill(engine, group.index, choice)?;
        trajectory.push(rank_of(&session));
    }
    let final_rank = trajectory.last().copied().unwrap_or(initial_rank);
    Ok(SimulationReport {
        pattern_id: pattern_id.to_string(),
        goal: goal_id.to_string(),
        seed,
        example_count: session.state.ranking.entries.len(),
        initial_rank,
        final_rank,
        mrr: mrr(&hole_ranks).ok(),
        interactions: trajectory.len(),
        trajectory,
        hole_ranks,
        response_ms,
    })
}
