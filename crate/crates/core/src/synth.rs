//! Type-directed expression synthesis over the API graph, and hole-group
//! descriptions.

use crate::graph::{ApiGraph, CreatorKind, GraphError};
use crate::holes::HoleGroup;
use crate::rank::{rank_candidates, CandidateExpression, PopularityModel};
use crate::scs::{Expr, HoleRole, Param, ScsPattern, Target};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub max_depth: usize,
    /// Sub-results kept per (type, depth) when combining; 0 keeps all.
    pub per_type_cap: usize,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig { max_depth: 4, per_type_cap: 50 }
    }
}

/// Description of a set of holes: the `@param` text of the first parameter
/// hole that has one, otherwise the first hole's type name.
pub fn describe_holes(pattern: &ScsPattern, holes: &[String], g: &ApiGraph) -> String {
    for id in holes {
        let Some(h) = pattern.hole(id) else { continue };
        let HoleRole::Param(k) = h.role else { continue };
        let call = &pattern.calls[h.call_index];
        let doc = call
            .method
            .resolve(g)
            .and_then(|m| g.node(m).method.as_ref())
            .and_then(|m| m.params.get(k))
            .map(|p| p.doc.trim())
            .unwrap_or("");
        if !doc.is_empty() {
            return doc.to_string();
        }
    }
    holes.first().and_then(|h| pattern.hole(h)).map(|h| h.declared_type.clone()).unwrap_or_default()
}

pub fn describe_group(pattern: &ScsPattern, group: &HoleGroup, g: &ApiGraph) -> String {
    describe_holes(pattern, &group.holes, g)
}

#[derive(Debug, Clone)]
struct Term {
    expr: Expr,
    text: String,
    /// Popularity score within the slot type the term was built for.
    score: f64,
}

struct Synth<'a> {
    g: &'a ApiGraph,
    model: &'a PopularityModel,
    locals: &'a [Param],
    cap: usize,
    memo: HashMap<(String, usize), Rc<Vec<Term>>>,
}

impl Synth<'_> {
    /// Every term of type `ty` within depth `d` (placeholder when none).
    fn terms(&mut self, ty: &str, d: usize) -> Rc<Vec<Term>> {
        if d == 0 {
            return Rc::new(Vec::new());
        }
        let key = (ty.to_string(), d);
        if let Some(t) = self.memo.get(&key) {
            return t.clone();
        }
        let mut out: Vec<Term> = Vec::new();
        let mut seen: HashSet<String> = HashSet::new();
        let mut push = |expr: Expr, score: f64, out: &mut Vec<Term>| {
            let text = expr.to_string();
            if seen.insert(text.clone()) {
                out.push(Term { expr, text, score });
            }
        };
        // Locals, static fields and enum constants are leaves at every depth.
        for p in self.locals {
            if self.g.assignable(&p.ty, ty) {
                push(Expr::var(&p.name, &p.ty), 1.0, &mut out);
            }
        }
        let creators = self.g.creators_of(ty).map(|c| c.to_vec()).unwrap_or_default();
        for c in &creators {
            let own = self.model.probability(ty, &c.key()).unwrap_or(self.model.placeholder_epsilon);
            match c.kind {
                CreatorKind::EnumConstant => {
                    push(Expr::EnumConst { ty: c.owner.clone(), name: c.member.clone() }, own, &mut out)
                }
                CreatorKind::Field if c.is_static => push(
                    Expr::Field { target: Target::Static(c.owner.clone()), name: c.member.clone() },
                    own,
                    &mut out,
                ),
                CreatorKind::Field => {
                    for base in self.sub(&c.owner, d - 1).iter() {
                        let e = Expr::Field { target: Target::Expr(Box::new(base.expr.clone())), name: c.member.clone() };
                        push(e, own * base.score, &mut out);
                    }
                }
                CreatorKind::Constructor | CreatorKind::Method => {
                    let mut slots: Vec<Rc<Vec<Term>>> = Vec::new();
                    let receiver = c.kind == CreatorKind::Method && !c.is_static;
                    if receiver {
                        slots.push(self.sub(&c.owner, d - 1));
                    }
                    for p in &c.params {
                        slots.push(self.sub(p, d - 1));
                    }
                    for combo in cartesian(&slots) {
                        let score = combo.iter().fold(own, |acc, t| acc * t.score);
                        let mut parts = combo.into_iter().map(|t| t.expr.clone());
                        let e = match c.kind {
                            CreatorKind::Constructor => Expr::New { ty: c.owner.clone(), args: parts.collect() },
                            _ if receiver => {
                                let r = parts.next().expect("receiver slot");
                                Expr::call(r, &c.member, parts.collect())
                            }
                            _ => Expr::static_call(&c.owner, &c.member, parts.collect()),
                        };
                        push(e, score, &mut out);
                    }
                }
            }
        }
        if out.is_empty() {
            out.push(Term {
                text: Expr::placeholder(ty).to_string(),
                expr: Expr::placeholder(ty),
                score: self.model.placeholder_epsilon,
            });
        }
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        out
    }

    /// Terms used as sub-expressions: the top `cap` by popularity.
    fn sub(&mut self, ty: &str, d: usize) -> Rc<Vec<Term>> {
        let all = self.terms(ty, d);
        if self.cap == 0 || all.len() <= self.cap {
            return all;
        }
        let mut v: Vec<Term> = all.as_ref().clone();
        v.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.text.cmp(&b.text)));
        v.truncate(self.cap);
        Rc::new(v)
    }
}

fn cartesian(slots: &[Rc<Vec<Term>>]) -> Vec<Vec<&Term>> {
    let mut out: Vec<Vec<&Term>> = vec![Vec::new()];
    for s in slots {
        if s.is_empty() {
            return Vec::new();
        }
        out = out.into_iter().flat_map(|prefix| s.iter().map(move |t| {
            let mut p = prefix.clone();
            p.push(t);
            p
        })).collect();
    }
    out
}

/// Every expression of type `target` (or a subtype) buildable within
/// `max_depth` from the locals and the graph's creators, ranked. When none
/// exists, the single placeholder `⟨target⟩`.
pub fn synthesize(
    locals: &[Param],
    target: &str,
    cfg: &SynthConfig,
    g: &ApiGraph,
    model: &PopularityModel,
) -> Result<Vec<CandidateExpression>, GraphError> {
    g.creators_of(target)?;
    let mut s = Synth { g, model, locals, cap: cfg.per_type_cap, memo: HashMap::new() };
    let terms = s.terms(target, cfg.max_depth.max(1));
    let bound: BTreeSet<String> = locals.iter().map(|p| p.name.clone()).collect();
    let cands = terms.iter().map(|t| CandidateExpression::new(t.expr.clone(), target, &bound, g, model)).collect();
    Ok(rank_candidates(cands))
}
