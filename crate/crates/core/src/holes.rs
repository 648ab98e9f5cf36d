//! Hole analysis: resolve each hole's actual expression in the examples a
//! pattern embeds in, classify it, freeze near-constant holes and cluster
//! the rest into co-reference groups.

use crate::graph::{ApiGraph, NodeKind};
use crate::scs::{events, Event, Expr, HoleRole, ScsExample, ScsPattern, SeqToken};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HoleError {
    #[error("pattern {pattern} does not embed in example {example}")]
    NoMatch { pattern: String, example: String },
    #[error("pattern {pattern} has no hole `{hole}`")]
    UnknownHole { pattern: String, hole: String },
    #[error("pattern {0} embeds in no example of the corpus")]
    NoExamples(String),
}

/// Completion-syntax category of an expression, decided by its root node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SyntaxType {
    Enumeration,
    MethodCall,
    Constant,
    ClassInstantiation,
    DefinedVariable,
}

impl SyntaxType {
    pub const ALL: [SyntaxType; 5] = [
        SyntaxType::Enumeration,
        SyntaxType::MethodCall,
        SyntaxType::Constant,
        SyntaxType::ClassInstantiation,
        SyntaxType::DefinedVariable,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SyntaxType::Enumeration => "Enumeration",
            SyntaxType::MethodCall => "MethodCall",
            SyntaxType::Constant => "Constant",
            SyntaxType::ClassInstantiation => "ClassInstantiation",
            SyntaxType::DefinedVariable => "DefinedVariable",
        }
    }
}

/// Root-based classification. Placeholders count as method calls: they
/// stand for an expression still to be built.
pub fn classify(e: &Expr) -> SyntaxType {
    match e {
        Expr::EnumConst { .. } => SyntaxType::Enumeration,
        Expr::Literal(_) | Expr::Null => SyntaxType::Constant,
        Expr::New { .. } => SyntaxType::ClassInstantiation,
        Expr::Var { .. } => SyntaxType::DefinedVariable,
        Expr::Call { .. } | Expr::Field { .. } | Expr::Placeholder { .. } => SyntaxType::MethodCall,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClusterConfig {
    pub fixed_threshold: f64,
    pub coref_threshold: f64,
}

impl Default for ClusterConfig {
    fn default() -> Self {
        ClusterConfig { fixed_threshold: 0.5, coref_threshold: 0.8 }
    }
}

/// Leftmost embedding of `pattern` as a subsequence of `seq`: the matched
/// positions in `seq`.
pub fn embed<T: PartialEq>(pattern: &[T], seq: &[T]) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(pattern.len());
    let mut i = 0;
    for p in pattern {
        while i < seq.len() && seq[i] != *p {
            i += 1;
        }
        if i == seq.len() {
            return None;
        }
        out.push(i);
        i += 1;
    }
    Some(out)
}

/// Replace variable uses by their reaching definitions, transitively. The
/// reaching definition of a use at `point` is the last definition of the
/// name before it; names without one stay as free-variable leaves.
pub fn inline_at(e: &Expr, point: usize, evs: &[Event]) -> Expr {
    e.rewrite(&mut |n| match n {
        Expr::Var { name, .. } => {
            let def = evs[..point.min(evs.len())].iter().rev().find_map(|ev| match ev {
                Event::Def { name: d, value, point } if d == name => Some((value, *point)),
                _ => None,
            });
            match def {
                Some((Some(value), at)) => Some(inline_at(value, at, evs)),
                _ => None,
            }
        }
        _ => None,
    })
}

/// Actual expressions of every hole of `pattern` in `ex`, first match used.
pub fn resolve_holes(ex: &ScsExample, pattern: &ScsPattern, g: &ApiGraph) -> Result<BTreeMap<String, Expr>, HoleError> {
    let evs = events(ex, g);
    let token_events: Vec<&Event> = evs.iter().filter(|e| matches!(e, Event::Token { .. })).collect();
    let seq: Vec<&SeqToken> = token_events
        .iter()
        .map(|e| match e {
            Event::Token { token, .. } => token,
            Event::Def { .. } => unreachable!(),
        })
        .collect();
    let pat: Vec<&SeqToken> = pattern.tokens.iter().collect();
    let positions = embed(&pat, &seq)
        .ok_or_else(|| HoleError::NoMatch { pattern: pattern.id.clone(), example: ex.id.clone() })?;
    let call_positions: Vec<usize> =
        positions.iter().zip(&pattern.tokens).filter(|(_, t)| t.is_call()).map(|(p, _)| *p).collect();
    let mut out = BTreeMap::new();
    for h in &pattern.holes {
        let Event::Token { site: Some(site), point, .. } = token_events[call_positions[h.call_index]] else {
            continue;
        };
        let actual = match h.role {
            HoleRole::Receiver => site.receiver.as_ref(),
            HoleRole::Param(k) => site.args.get(k),
        };
        if let Some(a) = actual {
            out.insert(h.id.clone(), inline_at(a, *point, &evs));
        }
    }
    Ok(out)
}

pub fn resolve_hole(ex: &ScsExample, pattern: &ScsPattern, hole_id: &str, g: &ApiGraph) -> Result<Expr, HoleError> {
    if pattern.hole(hole_id).is_none() {
        return Err(HoleError::UnknownHole { pattern: pattern.id.clone(), hole: hole_id.to_string() });
    }
    resolve_holes(ex, pattern, g)?
        .remove(hole_id)
        .ok_or_else(|| HoleError::NoMatch { pattern: pattern.id.clone(), example: ex.id.clone() })
}

/// Resolved hole expressions for every example a pattern embeds in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolutions {
    pub pattern_id: String,
    pub holes: Vec<String>,
    pub examples: Vec<String>,
    /// `table[e][h]`: expression of hole `holes[h]` in example `examples[e]`.
    pub table: Vec<Vec<Option<Expr>>>,
}

impl Resolutions {
    pub fn compute(pattern: &ScsPattern, corpus: &[ScsExample], g: &ApiGraph) -> Resolutions {
        let holes: Vec<String> = pattern.holes.iter().map(|h| h.id.clone()).collect();
        let mut examples = Vec::new();
        let mut table = Vec::new();
        for ex in corpus {
            if let Ok(map) = resolve_holes(ex, pattern, g) {
                examples.push(ex.id.clone());
                table.push(holes.iter().map(|h| map.get(h).cloned()).collect());
            }
        }
        Resolutions { pattern_id: pattern.id.clone(), holes, examples, table }
    }

    pub fn hole_index(&self, id: &str) -> Option<usize> {
        self.holes.iter().position(|h| h == id)
    }

    pub fn example_index(&self, id: &str) -> Option<usize> {
        self.examples.iter().position(|e| e == id)
    }

    pub fn get(&self, example: usize, hole: usize) -> Option<&Expr> {
        self.table[example][hole].as_ref()
    }

    /// Distinct expressions of one hole with their counts, most frequent
    /// first, ties by canonical text.
    pub fn frequencies(&self, hole: usize) -> Vec<FrequencyEntry> {
        let mut counts: BTreeMap<String, (usize, &Expr)> = BTreeMap::new();
        for row in &self.table {
            if let Some(e) = &row[hole] {
                counts.entry(e.to_string()).or_insert((0, e)).0 += 1;
            }
        }
        let mut out: Vec<FrequencyEntry> = counts
            .into_iter()
            .map(|(text, (count, e))| FrequencyEntry { syntax_type: classify(e), expression: e.clone(), text, count })
            .collect();
        out.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.text.cmp(&b.text)));
        out
    }

    /// Share of examples, among those where both resolve, in which holes
    /// `a` and `b` have identical expressions (0 when none resolve both).
    pub fn coref_degree(&self, a: usize, b: usize) -> f64 {
        let mut both = 0usize;
        let mut same = 0usize;
        for row in &self.table {
            if let (Some(x), Some(y)) = (&row[a], &row[b]) {
                both += 1;
                if x.to_string() == y.to_string() {
                    same += 1;
                }
            }
        }
        if both == 0 {
            0.0
        } else {
            same as f64 / both as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyEntry {
    pub text: String,
    pub count: usize,
    pub syntax_type: SyntaxType,
    pub expression: Expr,
}

fn constant_kind_type(g: &ApiGraph, ty: &str) -> bool {
    g.is_builtin(ty) || g.type_kind(ty) == Some(NodeKind::EnumClass)
}

/// Freeze holes of constant kind (literals and enum constants) whose most
/// frequent actual reaches `fixed_threshold`. Returns the frozen
/// assignments and the remaining changeable hole ids, in hole order.
pub fn freeze_fixed(
    pattern: &ScsPattern,
    res: &Resolutions,
    g: &ApiGraph,
    cfg: &ClusterConfig,
) -> (BTreeMap<String, Expr>, Vec<String>) {
    let mut fixed = BTreeMap::new();
    let mut changeable: Vec<String> = pattern.holes.iter().map(|h| h.id.clone()).collect();
    // Frequencies of one hole do not depend on the others, so the loop
    // settles after one productive round.
    loop {
        let mut changed = false;
        changeable.retain(|id| {
            let hole = pattern.hole(id).expect("pattern hole");
            let Some(h) = res.hole_index(id) else { return true };
            let freqs = res.frequencies(h);
            let total: usize = freqs.iter().map(|f| f.count).sum();
            let Some(top) = freqs.first() else { return true };
            let constant = matches!(top.syntax_type, SyntaxType::Constant | SyntaxType::Enumeration);
            if constant
                && constant_kind_type(g, &hole.declared_type)
                && top.count as f64 / total as f64 >= cfg.fixed_threshold
            {
                fixed.insert(id.clone(), top.expression.clone());
                changed = true;
                false
            } else {
                true
            }
        });
        if !changed {
            break;
        }
    }
    (fixed, changeable)
}

/// Bottom-up merging on a co-reference matrix: repeatedly merge the first
/// pair (row-major over the upper triangle) whose degree reaches
/// `threshold`; the merged row is the elementwise minimum and stays at the
/// lower index. Returns groups of original indices, each sorted.
#[allow(clippy::needless_range_loop)] // symmetric row/column update
pub fn cluster_matrix(degree: &[Vec<f64>], threshold: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = (0..degree.len()).map(|i| vec![i]).collect();
    let mut m: Vec<Vec<f64>> = degree.to_vec();
    loop {
        let n = m.len();
        let pair = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| m[i][j] >= threshold);
        let Some((i, j)) = pair else { break };
        for k in 0..n {
            let v = m[i][k].min(m[j][k]);
            m[i][k] = v;
            m[k][i] = v;
        }
        m.remove(j);
        for row in &mut m {
            row.remove(j);
        }
        let merged = groups.remove(j);
        groups[i].extend(merged);
        groups[i].sort_unstable();
    }
    groups
}

/// A maximal co-reference group: holes that are filled by one expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleGroup {
    pub index: usize,
    pub holes: Vec<String>,
    pub declared_type: String,
    pub description: String,
    /// Resolved expressions of the group's first member, most frequent first.
    pub frequencies: Vec<FrequencyEntry>,
}

/// Co-reference clustering of the changeable holes.
pub fn cluster_coref(
    pattern: &ScsPattern,
    changeable: &[String],
    res: &Resolutions,
    g: &ApiGraph,
    cfg: &ClusterConfig,
) -> (Vec<Vec<f64>>, Vec<HoleGroup>) {
    let idx: Vec<usize> = changeable.iter().map(|h| res.hole_index(h).expect("resolved hole")).collect();
    let n = idx.len();
    let mut degree = vec![vec![0.0; n]; n];
    for i in 0..n {
        degree[i][i] = 1.0;
        for j in i + 1..n {
            let d = res.coref_degree(idx[i], idx[j]);
            degree[i][j] = d;
            degree[j][i] = d;
        }
    }
    let groups = cluster_matrix(&degree, cfg.coref_threshold)
        .into_iter()
        .enumerate()
        .map(|(index, members)| {
            let holes: Vec<String> = members.iter().map(|&m| changeable[m].clone()).collect();
            let types: Vec<&str> =
                holes.iter().map(|h| pattern.hole(h).expect("hole").declared_type.as_str()).collect();
            let declared_type = types
                .iter()
                .find(|t| types.iter().all(|o| g.assignable(t, o)))
                .unwrap_or(&types[0])
                .to_string();
            let description = crate::synth::describe_holes(pattern, &holes, g);
            HoleGroup { index, frequencies: res.frequencies(idx[members[0]]), holes, declared_type, description }
        })
        .collect();
    (degree, groups)
}

/// Everything hole analysis knows about one pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub pattern_id: String,
    pub config: ClusterConfig,
    pub resolutions: Resolutions,
    pub fixed: BTreeMap<String, Expr>,
    pub changeable: Vec<String>,
    /// Co-reference degrees between changeable holes, in `changeable` order.
    pub degrees: Vec<Vec<f64>>,
    pub groups: Vec<HoleGroup>,
}

impl Analysis {
    /// Group holding `hole`, if the hole is changeable.
    pub fn group_of(&self, hole: &str) -> Option<&HoleGroup> {
        self.groups.iter().find(|g| g.holes.iter().any(|h| h == hole))
    }

    /// The example's actual expression for a group: its first member hole
    /// that resolves.
    pub fn example_group_expr(&self, example: usize, group: usize) -> Option<&Expr> {
        self.groups[group]
            .holes
            .iter()
            .find_map(|h| self.resolutions.get(example, self.resolutions.hole_index(h)?))
    }

    /// Five-way histogram of the classification of every resolved hole.
    pub fn histogram(&self) -> BTreeMap<SyntaxType, usize> {
        let mut out: BTreeMap<SyntaxType, usize> = SyntaxType::ALL.iter().map(|t| (*t, 0)).collect();
        for row in &self.resolutions.table {
            for e in row.iter().flatten() {
                *out.get_mut(&classify(e)).expect("all types present") += 1;
            }
        }
        out
    }
}

/// Resolve, freeze and cluster. Fails when the pattern embeds nowhere.
pub fn analyze(
    pattern: &ScsPattern,
    corpus: &[ScsExample],
    g: &ApiGraph,
    cfg: &ClusterConfig,
) -> Result<Analysis, HoleError> {
    let resolutions = Resolutions::compute(pattern, corpus, g);
    if resolutions.examples.is_empty() && !pattern.holes.is_empty() {
        return Err(HoleError::NoExamples(pattern.id.clone()));
    }
    let (fixed, changeable) = freeze_fixed(pattern, &resolutions, g, cfg);
    let (degrees, groups) = cluster_coref(pattern, &changeable, &resolutions, g, cfg);
    Ok(Analysis { pattern_id: pattern.id.clone(), config: *cfg, resolutions, fixed, changeable, degrees, groups })
}
