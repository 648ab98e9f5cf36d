//! Code emission: the pattern's calls with holes replaced by group
//! variables, each group declared once before its first use.

use super::group_var;
use crate::graph::ApiGraph;
use crate::holes::Analysis;
use crate::scs::{CallKind, Expr, ScsPattern, SeqToken, Target};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmittedCode {
    pub code: String,
    /// No placeholder remains anywhere in the code.
    pub complete: bool,
}

struct Emitter<'a> {
    pattern: &'a ScsPattern,
    analysis: &'a Analysis,
    exprs: BTreeMap<usize, Expr>,
    g: &'a ApiGraph,
    lines: Vec<String>,
    depth: usize,
    /// Line index where the outermost open block starts.
    block_start: Option<usize>,
    declared: BTreeSet<usize>,
}

impl Emitter<'_> {
    fn group_of_var(&self, e: &Expr) -> Option<usize> {
        match e {
            Expr::Var { name, .. } => {
                let i: usize = name.strip_prefix('v')?.parse().ok()?;
                self.exprs.contains_key(&i).then_some(i)
            }
            _ => None,
        }
    }

    fn expand(&self, e: &Expr) -> Expr {
        e.rewrite(&mut |n| self.group_of_var(n).map(|i| self.expand(&self.exprs[&i])))
    }

    fn hole_value(&self, id: &str) -> Expr {
        if let Some(e) = self.analysis.fixed.get(id) {
            return e.clone();
        }
        match self.analysis.group_of(id) {
            Some(g) => Expr::var(group_var(g.index), &g.declared_type),
            None => {
                let ty = self.pattern.hole(id).map(|h| h.declared_type.as_str()).unwrap_or("unknown");
                Expr::placeholder(ty)
            }
        }
    }

    /// Declarations go at top level: before the outermost open block, or at
    /// the end when no block is open.
    fn put_declaration(&mut self, line: String) {
        match self.block_start {
            Some(at) => {
                self.lines.insert(at, line);
                self.block_start = Some(at + 1);
            }
            None => self.lines.push(line),
        }
    }

    fn ensure_declared(&mut self, i: usize) {
        if !self.declared.insert(i) {
            return;
        }
        let e = self.exprs[&i].clone();
        let mut deps = Vec::new();
        e.walk(&mut |n| deps.extend(self.group_of_var(n)));
        for d in deps {
            if d != i {
                self.ensure_declared(d);
            }
        }
        let ty = &self.analysis.groups[i].declared_type;
        self.put_declaration(format!("{ty} {} = {e};", group_var(i)));
    }

    fn push_line(&mut self, s: String) {
        self.lines.push(format!("{}{s}", "    ".repeat(self.depth)));
    }

    fn open_block(&mut self, s: String) {
        if self.depth == 0 {
            self.block_start = Some(self.lines.len());
        }
        self.push_line(s);
        self.depth += 1;
    }

    fn close_block(&mut self) {
        self.depth = self.depth.saturating_sub(1);
        self.push_line("}".into());
        if self.depth == 0 {
            self.block_start = None;
        }
    }

    fn run(&mut self) {
        let mut calls = self.pattern.calls.iter();
        for t in &self.pattern.tokens {
            match t {
                SeqToken::If => self.open_block("if (⟨boolean⟩) {".into()),
                SeqToken::While => self.open_block("while (⟨boolean⟩) {".into()),
                SeqToken::Try => self.open_block("try {".into()),
                SeqToken::Catch(ty) => {
                    self.depth = self.depth.saturating_sub(1);
                    self.push_line(format!("}} catch ({ty} e) {{"));
                    self.depth += 1;
                }
                SeqToken::EndIf | SeqToken::EndWhile | SeqToken::EndTry => self.close_block(),
                SeqToken::Call(_) => {
                    let c = calls.next().expect("template per call token");
                    let holes: Vec<&String> = c.receiver.iter().chain(&c.args).collect();
                    for h in &holes {
                        if let Some(g) = self.analysis.group_of(h) {
                            self.ensure_declared(g.index);
                        }
                    }
                    let args: Vec<Expr> = c.args.iter().map(|a| self.hole_value(a)).collect();
                    let call = match c.kind {
                        CallKind::Constructor => Expr::New { ty: c.method.owner.clone(), args },
                        CallKind::Static => Expr::static_call(&c.method.owner, &c.method.name, args),
                        CallKind::Instance => {
                            let r = c.receiver.as_deref().map(|r| self.hole_value(r)).unwrap_or(Expr::placeholder(&c.method.owner));
                            Expr::Call { target: Target::Expr(Box::new(r)), name: c.method.name.clone(), args }
                        }
                    };
                    // A call whose value is exactly an undeclared group's
                    // expression becomes that group's declaration.
                    let expanded = self.expand(&call).to_string();
                    let merge = if self.depth == 0 && self.g.type_of(&call).is_some() {
                        self.analysis
                            .groups
                            .iter()
                            .map(|g| g.index)
                            .find(|i| !self.declared.contains(i) && self.expand(&self.exprs[i]).to_string() == expanded)
                    } else {
                        None
                    };
                    match merge {
                        Some(i) => {
                            self.declared.insert(i);
                            let ty = self.analysis.groups[i].declared_type.clone();
                            self.push_line(format!("{ty} {} = {call};", group_var(i)));
                        }
                        None => self.push_line(format!("{call};")),
                    }
                }
            }
        }
        // Groups with no remaining use still get their declaration.
        for g in &self.analysis.groups {
            if !self.declared.contains(&g.index) {
                self.ensure_declared(g.index);
            }
        }
    }
}

/// Emit code for a pattern. Unfilled groups are declared with a
/// placeholder of their type.
pub fn emit_code(pattern: &ScsPattern, analysis: &Analysis, assigned: &BTreeMap<usize, Expr>, g: &ApiGraph) -> EmittedCode {
    let exprs: BTreeMap<usize, Expr> = analysis
        .groups
        .iter()
        .map(|grp| (grp.index, assigned.get(&grp.index).cloned().unwrap_or_else(|| Expr::placeholder(&grp.declared_type))))
        .collect();
    let mut em = Emitter {
        pattern,
        analysis,
        exprs,
        g,
        lines: Vec::new(),
        depth: 0,
        block_start: None,
        declared: BTreeSet::new(),
    };
    em.run();
    let mut code = em.lines.join("\n");
    if !code.is_empty() {
        code.push('\n');
    }
    EmittedCode { complete: !code.contains('⟨'), code }
}
