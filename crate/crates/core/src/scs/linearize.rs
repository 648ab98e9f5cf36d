//! Flattening of examples into call/control token sequences.

use super::ast::*;
use crate::graph::{ApiGraph, NodeId};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Type-qualified method signature, e.g. `CellStyle.setFillPattern(FillPatternType)`.
/// Constructors are named `<init>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MethodKey {
    pub owner: String,
    pub name: String,
    pub params: Vec<String>,
}

impl MethodKey {
    pub fn new(owner: impl Into<String>, name: impl Into<String>, params: Vec<String>) -> Self {
        MethodKey { owner: owner.into(), name: name.into(), params }
    }

    pub fn is_constructor(&self) -> bool {
        self.name == "<init>"
    }

    /// `Owner.name` without the parameter list.
    pub fn short(&self) -> String {
        format!("{}.{}", self.owner, self.name)
    }

    /// Key of the method or constructor node `id`.
    pub fn of_node(g: &ApiGraph, id: NodeId) -> MethodKey {
        let n = g.node(id);
        let m = n.method.as_ref().expect("method node");
        let owner = g.node(n.owner.expect("method has owner")).name.clone();
        MethodKey::new(owner, n.name.clone(), m.params.iter().map(|p| p.ty.clone()).collect())
    }

    /// The graph node with exactly this owner, name and parameter types.
    pub fn resolve(&self, g: &ApiGraph) -> Option<NodeId> {
        g.members(&self.owner)
            .find(|(_, n)| {
                n.name == self.name
                    && n.method.as_ref().is_some_and(|m| {
                        m.params.len() == self.params.len() && m.params.iter().zip(&self.params).all(|(p, t)| &p.ty == t)
                    })
            })
            .map(|(id, _)| id)
    }
}

impl fmt::Display for MethodKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}({})", self.owner, self.name, self.params.join(","))
    }
}

/// One element of a linearized example.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SeqToken {
    Call(MethodKey),
    If,
    EndIf,
    While,
    EndWhile,
    Try,
    Catch(String),
    EndTry,
}

impl SeqToken {
    pub fn is_call(&self) -> bool {
        matches!(self, SeqToken::Call(_))
    }

    pub fn method(&self) -> Option<&MethodKey> {
        match self {
            SeqToken::Call(m) => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for SeqToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqToken::Call(m) => write!(f, "{m}"),
            SeqToken::If => f.write_str("IF"),
            SeqToken::EndIf => f.write_str("END-IF"),
            SeqToken::While => f.write_str("WHILE"),
            SeqToken::EndWhile => f.write_str("END-WHILE"),
            SeqToken::Try => f.write_str("TRY"),
            SeqToken::Catch(t) => write!(f, "CATCH({t})"),
            SeqToken::EndTry => f.write_str("END-TRY"),
        }
    }
}

impl FromStr for SeqToken {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "IF" => SeqToken::If,
            "END-IF" => SeqToken::EndIf,
            "WHILE" => SeqToken::While,
            "END-WHILE" => SeqToken::EndWhile,
            "TRY" => SeqToken::Try,
            "END-TRY" => SeqToken::EndTry,
            _ => {
                if let Some(t) = s.strip_prefix("CATCH(").and_then(|r| r.strip_suffix(')')) {
                    return Ok(SeqToken::Catch(t.to_string()));
                }
                let bad = || format!("malformed token `{s}`");
                let (head, rest) = s.split_once('(').ok_or_else(bad)?;
                let params = rest.strip_suffix(')').ok_or_else(bad)?;
                let (owner, name) = head.rsplit_once('.').ok_or_else(bad)?;
                if owner.is_empty() || name.is_empty() {
                    return Err(bad());
                }
                let params = if params.trim().is_empty() {
                    Vec::new()
                } else {
                    params.split(',').map(|p| p.trim().to_string()).collect()
                };
                SeqToken::Call(MethodKey::new(owner, name, params))
            }
        })
    }
}

impl Ord for SeqToken {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_string().cmp(&other.to_string())
    }
}

impl PartialOrd for SeqToken {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for SeqToken {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SeqToken {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Receiver and argument expressions of one call occurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct CallSite {
    /// `None` for static calls and constructors.
    pub receiver: Option<Expr>,
    pub args: Vec<Expr>,
    /// Program point of the call.
    pub point: usize,
}

/// Linearization event: a token, or a variable definition. Both share one
/// program-point counter so definitions can be matched to later uses.
#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Token { token: SeqToken, site: Option<CallSite>, point: usize },
    Def { name: String, value: Option<Expr>, point: usize },
}

/// Token sequence of `ex` in evaluation order: receivers, then arguments,
/// then the call itself.
pub fn linearize(ex: &ScsExample, g: &ApiGraph) -> Vec<SeqToken> {
    events(ex, g)
        .into_iter()
        .filter_map(|e| match e {
            Event::Token { token, .. } => Some(token),
            Event::Def { .. } => None,
        })
        .collect()
}

pub fn events(ex: &ScsExample, g: &ApiGraph) -> Vec<Event> {
    let mut w = Walker { g, out: Vec::new() };
    w.stmts(&ex.statements);
    w.out
}

struct Walker<'a> {
    g: &'a ApiGraph,
    out: Vec<Event>,
}

impl Walker<'_> {
    fn point(&self) -> usize {
        self.out.len()
    }

    fn control(&mut self, token: SeqToken) {
        let point = self.point();
        self.out.push(Event::Token { token, site: None, point });
    }

    fn def(&mut self, name: &str, value: Option<&Expr>) {
        let point = self.point();
        self.out.push(Event::Def { name: name.to_string(), value: value.cloned(), point });
    }

    fn stmts(&mut self, stmts: &[Stmt]) {
        for s in stmts {
            match s {
                Stmt::Decl { name, init, .. } => {
                    if let Some(e) = init {
                        self.expr(e);
                    }
                    self.def(name, init.as_ref());
                }
                Stmt::Assign { name, value } => {
                    self.expr(value);
                    self.def(name, Some(value));
                }
                Stmt::Expr { expr } => self.expr(expr),
                Stmt::If { cond, body } => {
                    self.control(SeqToken::If);
                    self.expr(cond);
                    self.stmts(body);
                    self.control(SeqToken::EndIf);
                }
                Stmt::While { cond, body } => {
                    self.control(SeqToken::While);
                    self.expr(cond);
                    self.stmts(body);
                    self.control(SeqToken::EndWhile);
                }
                Stmt::Try { body, catches } => {
                    self.control(SeqToken::Try);
                    self.stmts(body);
                    for c in catches {
                        self.control(SeqToken::Catch(c.ty.clone()));
                        self.def(&c.name, None);
                        self.stmts(&c.body);
                    }
                    self.control(SeqToken::EndTry);
                }
            }
        }
    }

    fn expr(&mut self, e: &Expr) {
        for c in e.children() {
            self.expr(c);
        }
        let (receiver, args) = match e {
            Expr::Call { target, args, .. } => match target {
                Target::Expr(r) => (Some(r.as_ref().clone()), args.clone()),
                Target::Static(_) => (None, args.clone()),
            },
            Expr::New { args, .. } => (None, args.clone()),
            _ => return,
        };
        let key = self.key_of(e);
        let point = self.point();
        self.out.push(Event::Token {
            token: SeqToken::Call(key),
            site: Some(CallSite { receiver, args, point }),
            point,
        });
    }

    fn key_of(&self, e: &Expr) -> MethodKey {
        if let Some(id) = self.g.member_of(e) {
            return MethodKey::of_node(self.g, id);
        }
        // Unresolved: keep what the syntax tells us so the miner can report it.
        let (owner, name, arity) = match e {
            Expr::New { ty, args } => (ty.clone(), "<init>".to_string(), args.len()),
            Expr::Call { target, name, args } => {
                let owner = match target {
                    Target::Static(t) => t.clone(),
                    Target::Expr(r) => self.g.type_of(r).unwrap_or_else(|| UNKNOWN_TYPE.to_string()),
                };
                (owner, name.clone(), args.len())
            }
            _ => unreachable!("only calls and constructors produce tokens"),
        };
        MethodKey::new(owner, name, vec!["?".to_string(); arity])
    }
}
