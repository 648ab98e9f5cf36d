//! Popularity estimation, candidate ranking, example re-ranking and MRR.

use crate::graph::{ApiGraph, NodeKind};
use crate::holes::SyntaxType;
use crate::scs::{Expr, ScsExample, Target};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RankError {
    #[error("popularity needs a non-empty corpus")]
    EmptyCorpus,
    #[error("mean reciprocal rank of an empty hole set is undefined")]
    EmptyHoles,
    #[error("rank must be at least 1, got {0}")]
    BadRank(usize),
}

/// Score given to placeholder leaves.
pub const PLACEHOLDER_EPSILON: f64 = 0.01;

/// Per-type creator probabilities estimated from a client corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopularityModel {
    pub placeholder_epsilon: f64,
    pub corpus_size: usize,
    /// Observed uses of each creator, by creator key.
    pub counts: BTreeMap<String, usize>,
    /// For every type with at least one creator: creator key → probability.
    pub per_type: BTreeMap<String, BTreeMap<String, f64>>,
}

impl PopularityModel {
    /// Smoothing-only model: every type's creators are equally likely.
    pub fn uniform(g: &ApiGraph) -> PopularityModel {
        PopularityModel::from_counts(g, BTreeMap::new(), 0)
    }

    fn from_counts(g: &ApiGraph, counts: BTreeMap<String, usize>, corpus_size: usize) -> PopularityModel {
        let mut per_type = BTreeMap::new();
        for ty in g.type_names() {
            let creators = g.creators_of(ty).expect("listed type exists");
            if creators.is_empty() {
                continue;
            }
            let keys: Vec<String> = creators.iter().map(|c| c.key()).collect();
            let total: usize = keys.iter().map(|k| counts.get(k).copied().unwrap_or(0) + 1).sum();
            let probs = keys
                .into_iter()
                .map(|k| {
                    let c = counts.get(&k).copied().unwrap_or(0) + 1;
                    (k, c as f64 / total as f64)
                })
                .collect();
            per_type.insert(ty.to_string(), probs);
        }
        PopularityModel { placeholder_epsilon: PLACEHOLDER_EPSILON, corpus_size, counts, per_type }
    }

    /// Probability of `creator` among the creators of `ty`.
    pub fn probability(&self, ty: &str, creator: &str) -> Option<f64> {
        self.per_type.get(ty)?.get(creator).copied()
    }
}

/// Count every creator application in the corpus (constructor calls,
/// value-returning method calls, field reads, enum constants) and normalize
/// per type with add-one smoothing over that type's creators.
pub fn fit_popularity(corpus: &[ScsExample], g: &ApiGraph) -> Result<PopularityModel, RankError> {
    if corpus.is_empty() {
        return Err(RankError::EmptyCorpus);
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for ex in corpus {
        for e in ex.expressions() {
            e.walk(&mut |node| {
                if let Some(c) = g.member_of(node).and_then(|id| g.creator_of_node(id)) {
                    *counts.entry(c.key()).or_default() += 1;
                }
            });
        }
    }
    Ok(PopularityModel::from_counts(g, counts, corpus.len()))
}

/// Product of creator probabilities over the expression, each creator
/// scored among the creators of the slot it fills (`slot` for the root).
/// Variables and literals score 1, placeholders the model's epsilon.
pub fn score_expression(e: &Expr, slot: &str, g: &ApiGraph, model: &PopularityModel) -> f64 {
    match e {
        Expr::Literal(_) | Expr::Null | Expr::Var { .. } => 1.0,
        Expr::Placeholder { .. } => model.placeholder_epsilon,
        _ => {
            let Some(id) = g.member_of(e) else { return model.placeholder_epsilon };
            let own = g
                .creator_of_node(id)
                .and_then(|c| model.probability(slot, &c.key()))
                .unwrap_or(model.placeholder_epsilon);
            let n = g.node(id);
            let mut slots: Vec<(&Expr, String)> = Vec::new();
            let params: Vec<String> =
                n.method.as_ref().map(|m| m.params.iter().map(|p| p.ty.clone()).collect()).unwrap_or_default();
            let owner = n.owner.map(|o| g.node(o).name.clone()).unwrap_or_default();
            match e {
                Expr::Call { target, args, .. } => {
                    if let Target::Expr(r) = target {
                        slots.push((r, owner));
                    }
                    slots.extend(args.iter().zip(params));
                }
                Expr::New { args, .. } => slots.extend(args.iter().zip(params)),
                Expr::Field { target: Target::Expr(r), .. } if n.kind == NodeKind::Field => slots.push((r, owner)),
                _ => {}
            }
            slots.into_iter().fold(own, |acc, (c, t)| acc * score_expression(c, &t, g, model))
        }
    }
}

/// A synthesized (or user-supplied) expression with its ranking features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateExpression {
    pub expression: Expr,
    pub text: String,
    pub placeholder_count: usize,
    /// Variables not bound in the context the candidate was built for.
    pub free_var_count: usize,
    pub popularity: f64,
    pub syntax_type: SyntaxType,
}

impl CandidateExpression {
    pub fn new(expression: Expr, slot: &str, bound: &BTreeSet<String>, g: &ApiGraph, model: &PopularityModel) -> Self {
        let free_var_count = expression.vars().iter().filter(|(n, _)| !bound.contains(*n)).count();
        CandidateExpression {
            text: expression.to_string(),
            placeholder_count: expression.placeholder_count(),
            free_var_count,
            popularity: score_expression(&expression, slot, g, model),
            syntax_type: crate::holes::classify(&expression),
            expression,
        }
    }

    pub fn incompleteness(&self) -> usize {
        self.placeholder_count + self.free_var_count
    }
}

/// Completeness first, then popularity, then canonical text.
pub fn candidate_order(a: &CandidateExpression, b: &CandidateExpression) -> Ordering {
    a.incompleteness()
        .cmp(&b.incompleteness())
        .then_with(|| b.popularity.total_cmp(&a.popularity))
        .then_with(|| a.text.cmp(&b.text))
}

pub fn rank_candidates(mut cands: Vec<CandidateExpression>) -> Vec<CandidateExpression> {
    cands.sort_by(candidate_order);
    cands
}

/// Weights of the example match function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RerankConfig {
    pub exact_match: f64,
    pub root_match: f64,
}

impl Default for RerankConfig {
    fn default() -> Self {
        RerankConfig { exact_match: 1.0, root_match: 0.5 }
    }
}

/// Identity of an expression's root node, ignoring its children.
pub fn root_key(e: &Expr) -> String {
    match e {
        Expr::Literal(l) => format!("lit:{}", l.ty.type_name()),
        Expr::Null => "null".into(),
        Expr::Var { name, .. } => format!("var:{name}"),
        Expr::EnumConst { ty, .. } => format!("enum:{ty}"),
        Expr::New { ty, args } => format!("new:{ty}/{}", args.len()),
        Expr::Field { target, name } => match target {
            Target::Static(t) => format!("field:{t}.{name}"),
            Target::Expr(_) => format!("field:.{name}"),
        },
        Expr::Call { target, name, args } => match target {
            Target::Static(t) => format!("call:{t}.{name}/{}", args.len()),
            Target::Expr(_) => format!("call:.{name}/{}", args.len()),
        },
        Expr::Placeholder { ty } => format!("placeholder:{ty}"),
    }
}

/// Match credit of one example expression against an assignment. Equality
/// is on canonical text.
pub fn match_score(example: Option<&Expr>, assigned: &Expr, cfg: &RerankConfig) -> f64 {
    match example {
        Some(e) if e.to_string() == assigned.to_string() => cfg.exact_match,
        Some(e) if root_key(e) == root_key(assigned) => cfg.root_match,
        _ => 0.0,
    }
}

/// An example as the re-ranker sees it: its actual expression per group.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleView {
    pub id: String,
    pub group_exprs: BTreeMap<usize, Expr>,
    /// Popularity prior, used to break score ties.
    pub prior: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedExample {
    pub id: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleRanking {
    pub seed: u64,
    pub entries: Vec<RankedExample>,
}

impl ExampleRanking {
    /// 1-based rank of an example.
    pub fn rank_of(&self, id: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.id == id).map(|p| p + 1)
    }
}

/// Seeded uniform shuffle of the ids (sorted first, so the result does not
/// depend on input order).
pub fn seeded_shuffle(ids: &[String], seed: u64) -> Vec<String> {
    let mut out = ids.to_vec();
    out.sort();
    out.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    out
}

/// Rank examples against the current assignments (group → expression).
pub fn rerank_examples(
    examples: &[ExampleView],
    assignments: &BTreeMap<usize, Expr>,
    seed: u64,
    cfg: &RerankConfig,
) -> ExampleRanking {
    if assignments.is_empty() {
        let ids: Vec<String> = examples.iter().map(|e| e.id.clone()).collect();
        let entries = seeded_shuffle(&ids, seed).into_iter().map(|id| RankedExample { id, score: 0.0 }).collect();
        return ExampleRanking { seed, entries };
    }
    let mut scored: Vec<(f64, f64, &str)> = examples
        .iter()
        .map(|e| {
            let s: f64 = assignments.iter().map(|(g, a)| match_score(e.group_exprs.get(g), a, cfg)).sum();
            (s, e.prior, e.id.as_str())
        })
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| b.1.total_cmp(&a.1)).then_with(|| a.2.cmp(b.2)));
    ExampleRanking {
        seed,
        entries: scored.into_iter().map(|(score, _, id)| RankedExample { id: id.to_string(), score }).collect(),
    }
}

/// Mean reciprocal rank; `None` entries (answer not found) contribute 0.
pub fn mrr(ranks: &[Option<usize>]) -> Result<f64, RankError> {
    if ranks.is_empty() {
        return Err(RankError::EmptyHoles);
    }
    let mut sum = 0.0;
    for r in ranks {
        match r {
            Some(0) => return Err(RankError::BadRank(0)),
            Some(k) => sum += 1.0 / *k as f64,
            None => {}
        }
    }
    Ok(sum / ranks.len() as f64)
}
