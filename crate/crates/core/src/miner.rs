//! Closed frequent subsequence mining over linearized examples, and
//! packaging of mined sequences as patterns with typed holes.

use crate::graph::ApiGraph;
use crate::scs::{
    call_contexts, describe_tokens, linearize, pattern_id, print_pattern, CallKind, CallTemplate, Hole, HoleRole, ScsExample, ScsPattern, SeqToken,
};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MinerError {
    #[error("cannot mine an empty corpus")]
    EmptyCorpus,
    #[error("token `{token}` in example {example} has no method in the API graph")]
    UnknownMethodToken { token: String, example: String },
    #[error("invalid miner configuration: {0}")]
    Config(String),
    #[error("call `{0}` does not resolve to a method")]
    Unresolved(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MinerConfig {
    pub min_support_fraction: f64,
    /// Minimum number of call tokens in a pattern.
    pub min_length: usize,
    pub closed_only: bool,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig { min_support_fraction: 0.05, min_length: 3, closed_only: true }
    }
}

impl MinerConfig {
    pub fn validate(&self) -> Result<(), MinerError> {
        if !(self.min_support_fraction > 0.0 && self.min_support_fraction <= 1.0) {
            return Err(MinerError::Config(format!("min_support_fraction {} not in (0, 1]", self.min_support_fraction)));
        }
        if self.min_length == 0 {
            return Err(MinerError::Config("min_length must be at least 1".into()));
        }
        Ok(())
    }

    /// Absolute support threshold for a corpus of `n` examples.
    pub fn threshold(&self, n: usize) -> usize {
        ((self.min_support_fraction * n as f64 - 1e-9).ceil() as usize).max(1)
    }
}

/// Leftmost embedding end positions of every prefix of `pat` in `seq`.
fn first_instance(pat: &[u32], seq: &[u32]) -> Vec<usize> {
    let mut out = Vec::with_capacity(pat.len());
    let mut i = 0;
    for &p in pat {
        while seq[i] != p {
            i += 1;
        }
        out.push(i);
        i += 1;
    }
    out
}

/// Walk backwards from position `end` of item `pat[n-1]`, taking for each
/// earlier item its last occurrence before the next one.
fn last_before(pat: &[u32], seq: &[u32], end: usize) -> Vec<usize> {
    let n = pat.len();
    let mut out = vec![0; n];
    out[n - 1] = end;
    for i in (0..n - 1).rev() {
        let mut j = out[i + 1];
        loop {
            j -= 1;
            if seq[j] == pat[i] {
                break;
            }
        }
        out[i] = j;
    }
    out
}

/// An item occurring in the i-th period of every supporting sequence, for
/// some i. Periods run from the end of the first instance of the
/// (i-1)-prefix to `bound(i)`.
fn common_in_periods(db: &[Vec<u32>], pat: &[u32], proj: &[(usize, usize)], semi: bool) -> bool {
    let n = pat.len();
    let mut per_seq: Vec<(Vec<usize>, Vec<usize>)> = Vec::with_capacity(proj.len());
    for &(s, _) in proj {
        let seq = &db[s];
        let first = first_instance(pat, seq);
        let bounds = if semi {
            last_before(pat, seq, first[n - 1])
        } else {
            let last = seq.iter().rposition(|&x| x == pat[n - 1]).expect("sequence contains prefix");
            last_before(pat, seq, last)
        };
        per_seq.push((first, bounds));
    }
    for i in 0..n {
        let mut common: Option<BTreeSet<u32>> = None;
        for (&(s, _), (first, bounds)) in proj.iter().zip(&per_seq) {
            let lo = if i == 0 { 0 } else { first[i - 1] + 1 };
            let hi = bounds[i];
            let items: BTreeSet<u32> = if lo < hi { db[s][lo..hi].iter().copied().collect() } else { BTreeSet::new() };
            common = Some(match common {
                None => items,
                Some(c) => c.intersection(&items).copied().collect(),
            });
            if common.as_ref().is_some_and(|c| c.is_empty()) {
                break;
            }
        }
        if common.is_some_and(|c| !c.is_empty()) {
            return true;
        }
    }
    false
}

struct Bide<'a> {
    db: &'a [Vec<u32>],
    min_sup: usize,
    closed_only: bool,
    out: Vec<(Vec<u32>, usize)>,
}

impl Bide<'_> {
    fn grow(&mut self, prefix: &mut Vec<u32>, proj: Vec<(usize, usize)>) {
        let support = proj.len();
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &(s, start) in &proj {
            let seen: BTreeSet<u32> = self.db[s][start..].iter().copied().collect();
            for x in seen {
                *counts.entry(x).or_default() += 1;
            }
        }
        if self.closed_only {
            if common_in_periods(self.db, prefix, &proj, true) {
                return; // BackScan: every extension has a backward extension too.
            }
            let forward = counts.values().any(|&c| c == support);
            if !forward && !common_in_periods(self.db, prefix, &proj, false) {
                self.out.push((prefix.clone(), support));
            }
        } else {
            self.out.push((prefix.clone(), support));
        }
        for (&x, &c) in &counts {
            if c < self.min_sup {
                continue;
            }
            let next: Vec<(usize, usize)> = proj
                .iter()
                .filter_map(|&(s, start)| {
                    self.db[s][start..].iter().position(|&y| y == x).map(|p| (s, start + p + 1))
                })
                .collect();
            prefix.push(x);
            self.grow(prefix, next);
            prefix.pop();
        }
    }
}

/// Frequent subsequences of `db` with document support ≥ `min_sup`; only
/// closed ones when `closed_only`. Output order: by sequence.
pub fn mine_sequences(db: &[Vec<u32>], min_sup: usize, closed_only: bool) -> Vec<(Vec<u32>, usize)> {
    let min_sup = min_sup.max(1);
    let mut b = Bide { db, min_sup, closed_only, out: Vec::new() };
    let mut items: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (s, seq) in db.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for (p, &x) in seq.iter().enumerate() {
            if seen.insert(x) {
                items.entry(x).or_default().push((s, p + 1));
            }
        }
    }
    for (x, proj) in items {
        if proj.len() >= min_sup {
            b.grow(&mut vec![x], proj);
        }
    }
    b.out.sort();
    b.out
}

/// Control tokens open and close properly; `CATCH` only directly inside `TRY`.
pub fn balanced(tokens: &[SeqToken]) -> bool {
    let mut stack: Vec<&SeqToken> = Vec::new();
    for t in tokens {
        match t {
            SeqToken::If | SeqToken::While | SeqToken::Try => stack.push(t),
            SeqToken::Catch(_) => {
                if !matches!(stack.last(), Some(SeqToken::Try)) {
                    return false;
                }
            }
            SeqToken::EndIf | SeqToken::EndWhile | SeqToken::EndTry => {
                let open = match t {
                    SeqToken::EndIf => SeqToken::If,
                    SeqToken::EndWhile => SeqToken::While,
                    _ => SeqToken::Try,
                };
                if stack.pop() != Some(&open) {
                    return false;
                }
            }
            SeqToken::Call(_) => {}
        }
    }
    stack.is_empty()
}

/// One hole per instance receiver, then one per parameter, numbered
/// `hole-0, hole-1, ...` in call order.
pub fn extract_holes(calls: &[CallTemplate]) -> Vec<Hole> {
    let mut holes = Vec::new();
    for (i, c) in calls.iter().enumerate() {
        if let Some(r) = &c.receiver {
            holes.push(Hole { id: r.clone(), call_index: i, role: HoleRole::Receiver, declared_type: c.method.owner.clone() });
        }
        for (k, a) in c.args.iter().enumerate() {
            holes.push(Hole {
                id: a.clone(),
                call_index: i,
                role: HoleRole::Param(k),
                declared_type: c.method.params[k].clone(),
            });
        }
    }
    holes
}

/// Package a token sequence as a pattern: call templates with fresh hole
/// ids, from the graph's signatures.
pub fn build_pattern(tokens: Vec<SeqToken>, support: usize, g: &ApiGraph) -> Result<ScsPattern, MinerError> {
    let contexts = call_contexts(&tokens);
    let mut calls = Vec::new();
    let mut next = 0usize;
    let mut fresh = || {
        let id = format!("hole-{next}");
        next += 1;
        id
    };
    for (m, context) in tokens.iter().filter_map(|t| t.method()).zip(contexts) {
        let id = m.resolve(g).ok_or_else(|| MinerError::Unresolved(m.to_string()))?;
        let info = g.node(id).method.as_ref().expect("method node");
        let kind = if info.is_constructor {
            CallKind::Constructor
        } else if info.is_static {
            CallKind::Static
        } else {
            CallKind::Instance
        };
        let receiver = (kind == CallKind::Instance).then(&mut fresh);
        let args = (0..m.params.len()).map(|_| fresh()).collect();
        calls.push(CallTemplate { method: m.clone(), kind, receiver, args, context });
    }
    let holes = extract_holes(&calls);
    Ok(ScsPattern { id: pattern_id(&tokens), description: describe_tokens(&tokens), tokens, calls, holes, support })
}

/// Mine closed frequent call sequences and package them as patterns,
/// sorted by support desc, length desc, then token text.
pub fn mine(corpus: &[ScsExample], cfg: &MinerConfig, g: &ApiGraph) -> Result<Vec<ScsPattern>, MinerError> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(MinerError::EmptyCorpus);
    }
    let seqs: Vec<Vec<SeqToken>> = corpus.iter().map(|ex| linearize(ex, g)).collect();
    for (ex, seq) in corpus.iter().zip(&seqs) {
        for m in seq.iter().filter_map(|t| t.method()) {
            if m.resolve(g).is_none() {
                return Err(MinerError::UnknownMethodToken { token: m.to_string(), example: ex.id.clone() });
            }
        }
    }
    // Interning by sorted token text keeps the output independent of corpus order.
    let alphabet: Vec<SeqToken> = seqs.iter().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let code = |t: &SeqToken| alphabet.binary_search(t).expect("interned") as u32;
    let db: Vec<Vec<u32>> = seqs.iter().map(|s| s.iter().map(code).collect()).collect();
    let mut out = Vec::new();
    for (seq, support) in mine_sequences(&db, cfg.threshold(corpus.len()), cfg.closed_only) {
        let tokens: Vec<SeqToken> = seq.iter().map(|&i| alphabet[i as usize].clone()).collect();
        let calls = tokens.iter().filter(|t| t.is_call()).count();
        if calls < cfg.min_length || !balanced(&tokens) {
            continue;
        }
        out.push(build_pattern(tokens, support, g)?);
    }
    out.sort_by(|a, b| {
        b.support
            .cmp(&a.support)
            .then_with(|| b.tokens.len().cmp(&a.tokens.len()))
            .then_with(|| a.tokens.cmp(&b.tokens))
    });
    Ok(out)
}

pub const PATTERN_FILE_VERSION: u32 = 1;

/// `patterns.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternFile {
    pub format_version: u32,
    pub config: MinerConfig,
    pub corpus_size: usize,
    pub threshold: usize,
    pub patterns: Vec<ScsPattern>,
}

impl PatternFile {
    pub fn new(cfg: MinerConfig, corpus_size: usize, patterns: Vec<ScsPattern>) -> Self {
        PatternFile { format_version: PATTERN_FILE_VERSION, config: cfg, threshold: cfg.threshold(corpus_size), corpus_size, patterns }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("patterns serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Review decision for a mined pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Pending,
    Accept,
    Reject,
}

/// Review file: each pattern block preceded by `#review <id> pending`; a
/// reviewer changes `pending` to `accept` or `reject`.
pub fn write_review(patterns: &[ScsPattern]) -> String {
    let mut out = String::new();
    for p in patterns {
        out.push_str(&format!("#review {} pending\n", p.id));
        out.push_str(&print_pattern(p));
        out.push('\n');
    }
    out
}

pub fn read_review(text: &str) -> Result<Vec<(String, Decision)>, String> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let Some(rest) = line.trim().strip_prefix("#review ") else { continue };
        let mut parts = rest.split_whitespace();
        let (Some(id), Some(d), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(format!("line {}: expected `#review <id> <decision>`", n + 1));
        };
        let d = match d {
            "pending" => Decision::Pending,
            "accept" => Decision::Accept,
            "reject" => Decision::Reject,
            other => return Err(format!("line {}: unknown decision `{other}`", n + 1)),
        };
        out.push((id.to_string(), d));
    }
    Ok(out)
}

/// Denylist file: one pattern id per line, `#` comments allowed.
pub fn read_denylist(text: &str) -> BTreeSet<String> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from).collect()
}

pub fn write_denylist(ids: &BTreeSet<String>) -> String {
    ids.iter().map(|id| format!("{id}\n")).collect()
}
