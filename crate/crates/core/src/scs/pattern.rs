//! Usage patterns: mined token sequences whose receivers and arguments are
//! typed holes.
//!
//! Text form, one pattern per block:
//!
//! ```text
//! #pattern p-1a2b3c4d5e6f support=12
//! #description Workbook.createCellStyle → CellStyle.setFillPattern
//! {hole-0:Workbook}.createCellStyle();
//! IF
//! {hole-1:CellStyle}.setFillPattern({hole-2:FillPatternType});
//! END-IF
//! #end
//! ```

use super::lexer::{tokenize, Tok};
use super::linearize::{MethodKey, SeqToken};
use super::ScsError;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CallKind {
    Instance,
    Static,
    Constructor,
}

/// Innermost control block enclosing a call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlContext {
    Plain,
    If,
    While,
    Try,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallTemplate {
    pub method: MethodKey,
    pub kind: CallKind,
    /// Hole id of the receiver (instance calls only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub receiver: Option<String>,
    /// Hole ids of the arguments, one per parameter.
    pub args: Vec<String>,
    pub context: ControlContext,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HoleRole {
    Receiver,
    Param(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hole {
    pub id: String,
    pub call_index: usize,
    pub role: HoleRole,
    pub declared_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScsPattern {
    pub id: String,
    /// Full mined sequence, control tokens included.
    pub tokens: Vec<SeqToken>,
    /// One template per call token, in order.
    pub calls: Vec<CallTemplate>,
    pub holes: Vec<Hole>,
    pub support: usize,
    pub description: String,
}

// Serde for MethodKey goes through its display form.
impl Serialize for MethodKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MethodKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.parse::<SeqToken>().map_err(serde::de::Error::custom)? {
            SeqToken::Call(m) => Ok(m),
            other => Err(serde::de::Error::custom(format!("`{other}` is not a method"))),
        }
    }
}

/// Stable id derived from the token sequence.
pub fn pattern_id(tokens: &[SeqToken]) -> String {
    let joined = tokens.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("\n");
    let digest = hex::encode(Sha256::digest(joined.as_bytes()));
    format!("p-{}", &digest[..12])
}

/// Short call chain, e.g. `Workbook.createCellStyle → CellStyle.setFillPattern`.
pub fn describe_tokens(tokens: &[SeqToken]) -> String {
    tokens.iter().filter_map(|t| t.method()).map(|m| m.short()).collect::<Vec<_>>().join(" → ")
}

/// Control context of every call token, by the innermost open block.
pub fn call_contexts(tokens: &[SeqToken]) -> Vec<ControlContext> {
    let mut stack = Vec::new();
    let mut out = Vec::new();
    for t in tokens {
        match t {
            SeqToken::If => stack.push(ControlContext::If),
            SeqToken::While => stack.push(ControlContext::While),
            SeqToken::Try => stack.push(ControlContext::Try),
            SeqToken::EndIf | SeqToken::EndWhile | SeqToken::EndTry => {
                stack.pop();
            }
            SeqToken::Catch(_) => {}
            SeqToken::Call(_) => out.push(*stack.last().unwrap_or(&ControlContext::Plain)),
        }
    }
    out
}

impl ScsPattern {
    pub fn hole(&self, id: &str) -> Option<&Hole> {
        self.holes.iter().find(|h| h.id == id)
    }

    pub fn call_tokens(&self) -> impl Iterator<Item = &MethodKey> {
        self.tokens.iter().filter_map(|t| t.method())
    }
}

fn hole_text(p: &ScsPattern, id: &str) -> String {
    let ty = p.hole(id).map(|h| h.declared_type.as_str()).unwrap_or("unknown");
    format!("{{{id}:{ty}}}")
}

/// Canonical text of one pattern block.
pub fn print_pattern(p: &ScsPattern) -> String {
    let mut out = String::new();
    writeln!(out, "#pattern {} support={}", p.id, p.support).unwrap();
    if !p.description.is_empty() {
        writeln!(out, "#description {}", p.description).unwrap();
    }
    let mut calls = p.calls.iter();
    let mut depth = 0usize;
    for t in &p.tokens {
        if matches!(t, SeqToken::EndIf | SeqToken::EndWhile | SeqToken::EndTry | SeqToken::Catch(_)) {
            depth = depth.saturating_sub(1);
        }
        let line = match t {
            SeqToken::Call(_) => {
                let c = calls.next().expect("one template per call token");
                let args = c.args.iter().map(|a| hole_text(p, a)).collect::<Vec<_>>().join(", ");
                match c.kind {
                    CallKind::Constructor => format!("new {}({args});", c.method.owner),
                    CallKind::Static => format!("{}.{}({args});", c.method.owner, c.method.name),
                    CallKind::Instance => {
                        let r = c.receiver.as_deref().map(|r| hole_text(p, r)).unwrap_or_default();
                        format!("{r}.{}({args});", c.method.name)
                    }
                }
            }
            other => other.to_string(),
        };
        writeln!(out, "{}{line}", "    ".repeat(depth)).unwrap();
        if matches!(t, SeqToken::If | SeqToken::While | SeqToken::Try | SeqToken::Catch(_)) {
            depth += 1;
        }
    }
    out.push_str("#end\n");
    out
}

fn err(line: usize, message: impl Into<String>) -> ScsError {
    ScsError::Syntax { line, col: 1, message: message.into() }
}

/// Parse one pattern block produced by [`print_pattern`].
pub fn parse_pattern(text: &str) -> Result<ScsPattern, ScsError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (n, header) = lines.next().ok_or_else(|| err(1, "empty pattern text"))?;
    let rest = header.strip_prefix("#pattern ").ok_or_else(|| err(n, "expected `#pattern <id> support=<n>`"))?;
    let (id, support) = rest.split_once(" support=").ok_or_else(|| err(n, "missing `support=`"))?;
    let support: usize = support.trim().parse().map_err(|_| err(n, "support is not a count"))?;
    let mut p = ScsPattern {
        id: id.trim().to_string(),
        tokens: Vec::new(),
        calls: Vec::new(),
        holes: Vec::new(),
        support,
        description: String::new(),
    };
    let mut closed = false;
    for (n, line) in lines {
        if closed {
            return Err(err(n, "text after `#end`"));
        }
        if line == "#end" {
            closed = true;
            continue;
        }
        if let Some(d) = line.strip_prefix("#description") {
            p.description = d.trim().to_string();
            continue;
        }
        if !line.ends_with(';') {
            let tok: SeqToken = line.parse().map_err(|e: String| err(n, e))?;
            if tok.is_call() {
                return Err(err(n, "call lines end with `;`"));
            }
            p.tokens.push(tok);
            continue;
        }
        let call_index = p.calls.len();
        let (template, holes) = parse_call_line(line, n, call_index)?;
        for h in holes {
            if p.hole(&h.id).is_some() {
                return Err(err(n, format!("duplicate hole `{}`", h.id)));
            }
            p.holes.push(h);
        }
        p.tokens.push(SeqToken::Call(template.method.clone()));
        p.calls.push(template);
    }
    if !closed {
        return Err(err(text.lines().count().max(1), "missing `#end`"));
    }
    for (c, ctx) in p.calls.iter_mut().zip(call_contexts(&p.tokens)) {
        c.context = ctx;
    }
    Ok(p)
}

fn parse_call_line(line: &str, n: usize, call_index: usize) -> Result<(CallTemplate, Vec<Hole>), ScsError> {
    let toks: Vec<Tok> = tokenize(line, n)?.into_iter().map(|t| t.tok).collect();
    let bad = || err(n, format!("malformed call line `{line}`"));
    let mut holes = Vec::new();
    let (kind, owner, name, receiver, mut i) = match toks.as_slice() {
        [Tok::Ident(kw), Tok::Ident(ty), Tok::LParen, ..] if kw == "new" => {
            (CallKind::Constructor, ty.clone(), "<init>".to_string(), None, 3)
        }
        [Tok::Hole { id, ty }, Tok::Dot, Tok::Ident(m), Tok::LParen, ..] => {
            holes.push(Hole { id: id.clone(), call_index, role: HoleRole::Receiver, declared_type: ty.clone() });
            (CallKind::Instance, ty.clone(), m.clone(), Some(id.clone()), 4)
        }
        [Tok::Ident(ty), Tok::Dot, Tok::Ident(m), Tok::LParen, ..] => {
            (CallKind::Static, ty.clone(), m.clone(), None, 4)
        }
        _ => return Err(bad()),
    };
    let mut args = Vec::new();
    let mut params = Vec::new();
    if toks.get(i) == Some(&Tok::RParen) {
        i += 1;
    } else {
        loop {
            match toks.get(i) {
                Some(Tok::Hole { id, ty }) => {
                    holes.push(Hole {
                        id: id.clone(),
                        call_index,
                        role: HoleRole::Param(args.len()),
                        declared_type: ty.clone(),
                    });
                    args.push(id.clone());
                    params.push(ty.clone());
                }
                _ => return Err(bad()),
            }
            i += 1;
            match toks.get(i) {
                Some(Tok::Comma) => i += 1,
                Some(Tok::RParen) => {
                    i += 1;
                    break;
                }
                _ => return Err(bad()),
            }
        }
    }
    if toks.get(i) != Some(&Tok::Semi) || toks.get(i + 1) != Some(&Tok::Eof) {
        return Err(bad());
    }
    let template = CallTemplate {
        method: MethodKey::new(owner, name, params),
        kind,
        receiver,
        args,
        context: ControlContext::Plain,
    };
    Ok((template, holes))
}
