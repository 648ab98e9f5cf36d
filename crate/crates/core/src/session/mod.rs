//! Interactive integration sessions: open a pattern, fill hole groups,
//! undo, emit code. Sessions are a pure fold over their event log.

mod emit;
pub mod service;
mod simulate;

pub use emit::{emit_code, EmittedCode};
pub use simulate::{simulate, SimulationReport};

use crate::graph::ApiGraph;
use crate::holes::{analyze, Analysis, ClusterConfig, HoleError, SyntaxType};
use crate::rank::{
    fit_popularity, rank_candidates, rerank_examples, root_key, score_expression, CandidateExpression, ExampleRanking,
    ExampleView, PopularityModel, RerankConfig,
};
use crate::scs::{parse_expr, print_pattern, resolve_expr, Expr, LitType, Literal, Param, ScsExample, ScsPattern};
use crate::synth::{synthesize, SynthConfig};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SessionError {
    #[error("unknown pattern `{0}`")]
    UnknownPattern(String),
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("unknown example `{0}`")]
    UnknownExample(String),
    #[error("unknown group {0}")]
    UnknownGroup(usize),
    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),
    #[error("group {0} is already filled; undo first")]
    AlreadyFilled(usize),
    #[error("nothing to undo")]
    NothingToUndo,
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("model mismatch: {0}")]
    ModelMismatch(String),
    #[error("pattern does not embed in example `{0}`")]
    NoEmbedding(String),
    #[error(transparent)]
    Hole(#[from] HoleError),
    #[error("invalid event log: {0}")]
    Log(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineConfig {
    pub synth: SynthConfig,
    pub cluster: ClusterConfig,
    pub rerank: RerankConfig,
    /// Examples included in a session view.
    pub top_examples: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            synth: SynthConfig::default(),
            cluster: ClusterConfig::default(),
            rerank: RerankConfig::default(),
            top_examples: 10,
        }
    }
}

/// Per-pattern data shared by all sessions on it.
#[derive(Debug)]
pub struct PatternData {
    pub analysis: Analysis,
    pub views: Vec<ExampleView>,
}

/// Immutable shared state: graph, corpus, patterns, popularity. Pattern
/// analyses are computed on first use and cached.
#[derive(Debug)]
pub struct Engine {
    pub graph: ApiGraph,
    pub corpus: Vec<ScsExample>,
    pub patterns: Vec<ScsPattern>,
    pub popularity: PopularityModel,
    pub config: EngineConfig,
    cache: RwLock<HashMap<String, Arc<PatternData>>>,
}

impl Engine {
    /// Popularity is fitted on the corpus (uniform when it is empty).
    pub fn new(
        graph: ApiGraph,
        corpus: Vec<ScsExample>,
        patterns: Vec<ScsPattern>,
        config: EngineConfig,
    ) -> Result<Engine, SessionError> {
        let popularity = if corpus.is_empty() {
            PopularityModel::uniform(&graph)
        } else {
            fit_popularity(&corpus, &graph).expect("corpus is non-empty")
        };
        Engine::with_popularity(graph, corpus, patterns, popularity, config)
    }

    pub fn with_popularity(
        graph: ApiGraph,
        corpus: Vec<ScsExample>,
        patterns: Vec<ScsPattern>,
        popularity: PopularityModel,
        config: EngineConfig,
    ) -> Result<Engine, SessionError> {
        for p in &patterns {
            for m in p.call_tokens() {
                if m.resolve(&graph).is_none() {
                    return Err(SessionError::ModelMismatch(format!("pattern {} calls unknown `{m}`", p.id)));
                }
            }
        }
        Ok(Engine { graph, corpus, patterns, popularity, config, cache: RwLock::new(HashMap::new()) })
    }

    pub fn pattern(&self, id: &str) -> Result<&ScsPattern, SessionError> {
        self.patterns.iter().find(|p| p.id == id).ok_or_else(|| SessionError::UnknownPattern(id.to_string()))
    }

    pub fn example(&self, id: &str) -> Result<&ScsExample, SessionError> {
        self.corpus.iter().find(|e| e.id == id).ok_or_else(|| SessionError::UnknownExample(id.to_string()))
    }

    pub fn pattern_data(&self, id: &str) -> Result<Arc<PatternData>, SessionError> {
        if let Some(d) = self.cache.read().expect("cache lock").get(id) {
            return Ok(d.clone());
        }
        let pattern = self.pattern(id)?;
        let analysis = match analyze(pattern, &self.corpus, &self.graph, &self.config.cluster) {
            Ok(a) => a,
            Err(HoleError::NoExamples(_)) => {
                // No example to learn from: every hole stays changeable and
                // alone in its group.
                let empty = crate::holes::Resolutions {
                    pattern_id: pattern.id.clone(),
                    holes: pattern.holes.iter().map(|h| h.id.clone()).collect(),
                    examples: Vec::new(),
                    table: Vec::new(),
                };
                let changeable: Vec<String> = empty.holes.clone();
                let (degrees, groups) =
                    crate::holes::cluster_coref(pattern, &changeable, &empty, &self.graph, &self.config.cluster);
                Analysis {
                    pattern_id: pattern.id.clone(),
                    config: self.config.cluster,
                    resolutions: empty,
                    fixed: BTreeMap::new(),
                    changeable,
                    degrees,
                    groups,
                }
            }
            Err(e) => return Err(e.into()),
        };
        let views = (0..analysis.resolutions.examples.len())
            .map(|e| {
                let mut group_exprs = BTreeMap::new();
                let mut prior = 1.0;
                for g in &analysis.groups {
                    if let Some(x) = analysis.example_group_expr(e, g.index) {
                        prior *= score_expression(x, &g.declared_type, &self.graph, &self.popularity);
                        group_exprs.insert(g.index, x.clone());
                    }
                }
                ExampleView { id: analysis.resolutions.examples[e].clone(), group_exprs, prior }
            })
            .collect();
        let data = Arc::new(PatternData { analysis, views });
        self.cache.write().expect("cache lock").insert(id.to_string(), data.clone());
        Ok(data)
    }
}

/// How a group is filled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Choice {
    /// A candidate from the group's current list, by id (`c0`, `c1`, ...).
    Candidate { id: String },
    /// A typed literal for groups of primitive or `String` type.
    Constant { text: String },
    /// Any expression over the session's variables.
    Expression { text: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    /// May reference the variables of other filled groups (`v<N>`).
    pub expression: Expr,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionState {
    pub assignments: BTreeMap<usize, Assignment>,
    pub ranking: ExampleRanking,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum SessionEvent {
    Open { session_id: String, pattern_id: String, context: Vec<Param>, seed: u64 },
    Fill { group_id: usize, choice: Choice },
    Undo,
}

/// Name of the variable holding group `i` in emitted code.
pub fn group_var(i: usize) -> String {
    format!("v{i}")
}

fn is_group_var_name(name: &str) -> bool {
    name.strip_prefix('v').is_some_and(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub id: String,
    pub pattern_id: String,
    pub context: Vec<Param>,
    pub seed: u64,
    pub state: SessionState,
    history: Vec<SessionState>,
    pub events: Vec<SessionEvent>,
}

impl Session {
    pub fn open(
        engine: &Engine,
        id: &str,
        pattern_id: &str,
        context: Vec<Param>,
        seed: u64,
    ) -> Result<Session, SessionError> {
        let data = engine.pattern_data(pattern_id)?;
        let mut names = BTreeSet::new();
        for p in &context {
            if !engine.graph.has_type(&p.ty) {
                return Err(SessionError::ModelMismatch(format!("context type `{}` is not in the API model", p.ty)));
            }
            if is_group_var_name(&p.name) {
                return Err(SessionError::InvalidContext(format!("`{}` is reserved for hole groups", p.name)));
            }
            if !names.insert(p.name.clone()) {
                return Err(SessionError::InvalidContext(format!("duplicate variable `{}`", p.name)));
            }
        }
        let ranking = rerank_examples(&data.views, &BTreeMap::new(), seed, &engine.config.rerank);
        Ok(Session {
            id: id.to_string(),
            pattern_id: pattern_id.to_string(),
            context: context.clone(),
            seed,
            state: SessionState { assignments: BTreeMap::new(), ranking },
            history: Vec::new(),
            events: vec![SessionEvent::Open {
                session_id: id.to_string(),
                pattern_id: pattern_id.to_string(),
                context,
                seed,
            }],
        })
    }

    /// Rebuild a session from its event log.
    pub fn replay(engine: &Engine, events: &[SessionEvent]) -> Result<Session, SessionError> {
        let Some(SessionEvent::Open { session_id, pattern_id, context, seed }) = events.first() else {
            return Err(SessionError::Log("log must start with an open event".into()));
        };
        let mut s = Session::open(engine, session_id, pattern_id, context.clone(), *seed)?;
        for ev in &events[1..] {
            match ev {
                SessionEvent::Open { .. } => return Err(SessionError::Log("duplicate open event".into())),
                SessionEvent::Fill { group_id, choice } => s.fill(engine, *group_id, choice.clone())?,
                SessionEvent::Undo => s.undo(engine)?,
            }
        }
        Ok(s)
    }

    pub fn is_complete(&self, engine: &Engine) -> Result<bool, SessionError> {
        let data = engine.pattern_data(&self.pattern_id)?;
        Ok(data.analysis.groups.iter().all(|g| self.state.assignments.contains_key(&g.index)))
    }

    /// Variables visible to a new fill: the context plus filled groups.
    pub fn locals(&self, engine: &Engine) -> Result<Vec<Param>, SessionError> {
        let data = engine.pattern_data(&self.pattern_id)?;
        let mut out = self.context.clone();
        for i in self.state.assignments.keys() {
            out.push(Param::new(group_var(*i), data.analysis.groups[*i].declared_type.clone()));
        }
        Ok(out)
    }

    /// Replace group variables by their assigned expressions, recursively.
    pub fn expand(&self, e: &Expr) -> Expr {
        e.rewrite(&mut |n| match n {
            Expr::Var { name, .. } if is_group_var_name(name) => {
                let i: usize = name[1..].parse().ok()?;
                self.state.assignments.get(&i).map(|a| self.expand(&a.expression))
            }
            _ => None,
        })
    }

    /// Ranked candidates of a group under the current state. Observed
    /// constants of primitive/`String` groups come from the corpus.
    pub fn candidates(&self, engine: &Engine, group: usize) -> Result<Vec<CandidateExpression>, SessionError> {
        let data = engine.pattern_data(&self.pattern_id)?;
        let g = data.analysis.groups.get(group).ok_or(SessionError::UnknownGroup(group))?;
        let locals = self.locals(engine)?;
        let mut cands = synthesize(&locals, &g.declared_type, &engine.config.synth, &engine.graph, &engine.popularity)
            .map_err(|e| SessionError::ModelMismatch(e.to_string()))?;
        let total: usize = g.frequencies.iter().map(|f| f.count).sum();
        let bound: BTreeSet<String> = locals.iter().map(|p| p.name.clone()).collect();
        for f in &g.frequencies {
            if f.syntax_type == SyntaxType::Constant && self.literal_fits(engine, &f.expression, &g.declared_type) {
                let mut c = CandidateExpression::new(f.expression.clone(), &g.declared_type, &bound, &engine.graph, &engine.popularity);
                c.popularity = f.count as f64 / total as f64;
                cands.push(c);
            }
        }
        Ok(rank_candidates(cands))
    }

    fn literal_fits(&self, engine: &Engine, e: &Expr, ty: &str) -> bool {
        engine.graph.type_of(e).is_some_and(|t| engine.graph.fits(&t, ty))
    }

    fn resolve_choice(&self, engine: &Engine, group: usize, choice: &Choice) -> Result<Expr, SessionError> {
        let data = engine.pattern_data(&self.pattern_id)?;
        let ty = data.analysis.groups[group].declared_type.clone();
        let g = &engine.graph;
        match choice {
            Choice::Candidate { id } => {
                let k: usize = id
                    .strip_prefix('c')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| SessionError::UnknownCandidate(id.clone()))?;
                let cands = self.candidates(engine, group)?;
                cands.get(k).map(|c| c.expression.clone()).ok_or_else(|| SessionError::UnknownCandidate(id.clone()))
            }
            Choice::Constant { text } => {
                if !g.is_builtin(&ty) {
                    return Err(SessionError::TypeMismatch(format!("group of type {ty} takes no constants")));
                }
                let e = parse_expr(text, &[]).map_err(|e| SessionError::TypeMismatch(e.to_string()))?;
                let e = match e {
                    Expr::Literal(l) => Expr::Literal(coerce_literal(l, &ty)),
                    Expr::Null => Expr::Null,
                    _ => return Err(SessionError::TypeMismatch(format!("`{text}` is not a literal"))),
                };
                if !self.literal_fits(engine, &e, &ty) {
                    return Err(SessionError::TypeMismatch(format!("`{text}` does not fit {ty}")));
                }
                Ok(e)
            }
            Choice::Expression { text } => {
                let locals = self.locals(engine)?;
                let e = parse_expr(text, &locals).map_err(|e| SessionError::TypeMismatch(e.to_string()))?;
                let e = resolve_expr(&e, g);
                let scope: BTreeSet<&str> = locals.iter().map(|p| p.name.as_str()).collect();
                if let Some((v, _)) = e.vars().into_iter().find(|(v, _)| !scope.contains(v)) {
                    return Err(SessionError::TypeMismatch(format!("unbound variable `{v}`")));
                }
                match g.type_of(&e) {
                    Some(t) if g.fits(&t, &ty) => Ok(e),
                    Some(t) => Err(SessionError::TypeMismatch(format!("`{text}` has type {t}, expected {ty}"))),
                    None => Err(SessionError::TypeMismatch(format!("cannot type `{text}`"))),
                }
            }
        }
    }

    fn rerank(&self, engine: &Engine) -> Result<ExampleRanking, SessionError> {
        let data = engine.pattern_data(&self.pattern_id)?;
        let expanded: BTreeMap<usize, Expr> =
            self.state.assignments.iter().map(|(i, a)| (*i, self.expand(&a.expression))).collect();
        Ok(rerank_examples(&data.views, &expanded, self.seed, &engine.config.rerank))
    }

    pub fn fill(&mut self, engine: &Engine, group: usize, choice: Choice) -> Result<(), SessionError> {
        let data = engine.pattern_data(&self.pattern_id)?;
        if group >= data.analysis.groups.len() {
            return Err(SessionError::UnknownGroup(group));
        }
        if self.state.assignments.contains_key(&group) {
            return Err(SessionError::AlreadyFilled(group));
        }
        let expression = self.resolve_choice(engine, group, &choice)?;
        self.history.push(self.state.clone());
        self.state.assignments.insert(group, Assignment { text: expression.to_string(), expression });
        self.state.ranking = self.rerank(engine)?;
        self.events.push(SessionEvent::Fill { group_id: group, choice });
        Ok(())
    }

    pub fn undo(&mut self, _engine: &Engine) -> Result<(), SessionError> {
        self.state = self.history.pop().ok_or(SessionError::NothingToUndo)?;
        self.events.push(SessionEvent::Undo);
        Ok(())
    }

    pub fn emit(&self, engine: &Engine) -> Result<EmittedCode, SessionError> {
        let data = engine.pattern_data(&self.pattern_id)?;
        let pattern = engine.pattern(&self.pattern_id)?;
        let assigned: BTreeMap<usize, Expr> =
            self.state.assignments.iter().map(|(i, a)| (*i, a.expression.clone())).collect();
        Ok(emit_code(pattern, &data.analysis, &assigned, &engine.graph))
    }

    /// Serializable snapshot for clients.
    pub fn view(&self, engine: &Engine) -> Result<SessionView, SessionError> {
        let data = engine.pattern_data(&self.pattern_id)?;
        let pattern = engine.pattern(&self.pattern_id)?;
        let mut groups = Vec::new();
        for g in &data.analysis.groups {
            let assigned = self.state.assignments.get(&g.index);
            let mut buckets: BTreeMap<SyntaxType, Vec<CandidateView>> =
                SyntaxType::ALL.iter().map(|t| (*t, Vec::new())).collect();
            if assigned.is_none() {
                for (k, c) in self.candidates(engine, g.index)?.into_iter().enumerate() {
                    buckets.get_mut(&c.syntax_type).expect("all buckets").push(CandidateView {
                        id: format!("c{k}"),
                        incomplete: c.placeholder_count > 0,
                        text: c.text,
                        popularity: c.popularity,
                        placeholder_count: c.placeholder_count,
                        free_var_count: c.free_var_count,
                    });
                }
            }
            groups.push(GroupView {
                index: g.index,
                variable: group_var(g.index),
                holes: g.holes.clone(),
                declared_type: g.declared_type.clone(),
                description: g.description.clone(),
                accepts_constants: engine.graph.is_builtin(&g.declared_type),
                assigned: assigned.map(|a| a.text.clone()),
                buckets,
            });
        }
        let expanded: BTreeMap<usize, Expr> =
            self.state.assignments.iter().map(|(i, a)| (*i, self.expand(&a.expression))).collect();
        let views: HashMap<&str, &ExampleView> = data.views.iter().map(|v| (v.id.as_str(), v)).collect();
        let examples = self
            .state
            .ranking
            .entries
            .iter()
            .take(engine.config.top_examples)
            .enumerate()
            .map(|(k, r)| {
                let v = views[r.id.as_str()];
                let matches = expanded
                    .iter()
                    .map(|(gi, a)| {
                        let m = match v.group_exprs.get(gi) {
                            Some(e) if e.to_string() == a.to_string() => MatchKind::Exact,
                            Some(e) if root_key(e) == root_key(a) => MatchKind::Root,
                            _ => MatchKind::None,
                        };
                        (*gi, m)
                    })
                    .collect();
                ExampleEntry { id: r.id.clone(), rank: k + 1, score: r.score, matches }
            })
            .collect();
        let code = self.emit(engine)?;
        Ok(SessionView {
            id: self.id.clone(),
            pattern_id: self.pattern_id.clone(),
            pattern_text: print_pattern(pattern),
            context: self.context.clone(),
            seed: self.seed,
            complete: self.is_complete(engine)?,
            fixed: data.analysis.fixed.iter().map(|(h, e)| (h.clone(), e.to_string())).collect(),
            groups,
            examples,
            example_count: self.state.ranking.entries.len(),
            code: code.code,
            code_complete: code.complete,
            can_undo: !self.history.is_empty(),
        })
    }
}

/// Integer literal typed into a `short`, `long` or `double` slot takes the
/// slot's type.
fn coerce_literal(l: Literal, ty: &str) -> Literal {
    if l.ty != LitType::Int {
        return l;
    }
    let v: i64 = l.text.parse().expect("canonical int");
    match ty {
        "short" if i16::try_from(v).is_ok() => Literal::new(LitType::Short, l.text),
        "long" => Literal::new(LitType::Long, l.text),
        "double" => Literal::new(LitType::Double, format!("{v}.0")),
        _ => l,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateView {
    pub id: String,
    pub text: String,
    pub popularity: f64,
    pub placeholder_count: usize,
    pub free_var_count: usize,
    pub incomplete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupView {
    pub index: usize,
    pub variable: String,
    pub holes: Vec<String>,
    pub declared_type: String,
    pub description: String,
    pub accepts_constants: bool,
    pub assigned: Option<String>,
    pub buckets: BTreeMap<SyntaxType, Vec<CandidateView>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchKind {
    Exact,
    Root,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleEntry {
    pub id: String,
    pub rank: usize,
    pub score: f64,
    pub matches: BTreeMap<usize, MatchKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub pattern_id: String,
    pub pattern_text: String,
    pub context: Vec<Param>,
    pub seed: u64,
    pub complete: bool,
    pub fixed: BTreeMap<String, String>,
    pub groups: Vec<GroupView>,
    pub examples: Vec<ExampleEntry>,
    pub example_count: usize,
    pub code: String,
    pub code_complete: bool,
    pub can_undo: bool,
}
