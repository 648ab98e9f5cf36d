//! Syntax tree for structured call sequences.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Type name used for anything whose type could not be determined.
pub const UNKNOWN_TYPE: &str = "unknown";

/// Built-in literal types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LitType {
    Int,
    Long,
    Short,
    Double,
    Boolean,
    Char,
    String,
}

impl LitType {
    /// Type name as it appears in declarations and in the API graph.
    pub fn type_name(self) -> &'static str {
        match self {
            LitType::Int => "int",
            LitType::Long => "long",
            LitType::Short => "short",
            LitType::Double => "double",
            LitType::Boolean => "boolean",
            LitType::Char => "char",
            LitType::String => "String",
        }
    }

    pub fn from_type_name(name: &str) -> Option<LitType> {
        Some(match name {
            "int" => LitType::Int,
            "long" => LitType::Long,
            "short" => LitType::Short,
            "double" => LitType::Double,
            "boolean" => LitType::Boolean,
            "char" => LitType::Char,
            "String" => LitType::String,
            _ => return None,
        })
    }

    pub const ALL: [LitType; 7] = [
        LitType::Int,
        LitType::Long,
        LitType::Short,
        LitType::Double,
        LitType::Boolean,
        LitType::Char,
        LitType::String,
    ];
}

/// A literal constant. `text` is the canonical value: decimal digits for the
/// integral types, the lexeme for doubles, `true`/`false`, and the unescaped
/// content for chars and strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub ty: LitType,
    pub text: String,
}

impl Literal {
    pub fn new(ty: LitType, text: impl Into<String>) -> Self {
        Literal { ty, text: text.into() }
    }

    pub fn int(v: i64) -> Self {
        Literal::new(LitType::Int, v.to_string())
    }
}

/// Where a field access or method call is dispatched from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// `Type.member`, with no receiver expression.
    Static(String),
    /// `expr.member`
    Expr(Box<Expr>),
}

/// A typed expression tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expr {
    Literal(Literal),
    Null,
    /// Variable reference. After def-use inlining, the remaining variables are
    /// free: context parameters or identifiers with no reaching definition.
    Var { name: String, ty: String },
    EnumConst { ty: String, name: String },
    New { ty: String, args: Vec<Expr> },
    Field { target: Target, name: String },
    Call { target: Target, name: String, args: Vec<Expr> },
    /// Typed hole the synthesizer could not fill, rendered `⟨Type⟩`.
    Placeholder { ty: String },
}

impl Expr {
    pub fn var(name: impl Into<String>, ty: impl Into<String>) -> Self {
        Expr::Var { name: name.into(), ty: ty.into() }
    }

    pub fn call(receiver: Expr, name: impl Into<String>, args: Vec<Expr>) -> Self {
        Expr::Call { target: Target::Expr(Box::new(receiver)), name: name.into(), args }
    }

    pub fn static_call(owner: impl Into<String>, name: impl Into<String>, args: Vec<Expr>) -> Self {
        Expr::Call { target: Target::Static(owner.into()), name: name.into(), args }
    }

    pub fn new_object(ty: impl Into<String>, args: Vec<Expr>) -> Self {
        Expr::New { ty: ty.into(), args }
    }

    pub fn placeholder(ty: impl Into<String>) -> Self {
        Expr::Placeholder { ty: ty.into() }
    }

    /// Direct children in evaluation order (receiver first, then arguments).
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Literal(_) | Expr::Null | Expr::Var { .. } | Expr::EnumConst { .. } | Expr::Placeholder { .. } => {
                Vec::new()
            }
            Expr::New { args, .. } => args.iter().collect(),
            Expr::Field { target, .. } => match target {
                Target::Expr(e) => vec![e.as_ref()],
                Target::Static(_) => Vec::new(),
            },
            Expr::Call { target, args, .. } => {
                let mut out = Vec::with_capacity(args.len() + 1);
                if let Target::Expr(e) = target {
                    out.push(e.as_ref());
                }
                out.extend(args.iter());
                out
            }
        }
    }

    /// Nesting depth: leaves are 1, a static class-name receiver costs nothing.
    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn placeholder_count(&self) -> usize {
        match self {
            Expr::Placeholder { .. } => 1,
            _ => self.children().iter().map(|c| c.placeholder_count()).sum(),
        }
    }

    /// Variable leaves, in evaluation order (duplicates kept).
    pub fn vars(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<(&'a str, &'a str)>) {
        if let Expr::Var { name, ty } = self {
            out.push((name, ty));
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    /// Pre-order visit of every node.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    /// Rebuild the tree top-down, letting `f` replace any node (a replaced
    /// node is not descended into).
    pub fn rewrite(&self, f: &mut dyn FnMut(&Expr) -> Option<Expr>) -> Expr {
        if let Some(e) = f(self) {
            return e;
        }
        match self {
            Expr::New { ty, args } => Expr::New {
                ty: ty.clone(),
                args: args.iter().map(|a| a.rewrite(f)).collect(),
            },
            Expr::Field { target, name } => Expr::Field { target: target.rewrite(f), name: name.clone() },
            Expr::Call { target, name, args } => {
                let target = target.rewrite(f);
                Expr::Call { target, name: name.clone(), args: args.iter().map(|a| a.rewrite(f)).collect() }
            }
            other => other.clone(),
        }
    }
}

impl Target {
    fn rewrite(&self, f: &mut dyn FnMut(&Expr) -> Option<Expr>) -> Target {
        match self {
            Target::Static(s) => Target::Static(s.clone()),
            Target::Expr(e) => Target::Expr(Box::new(e.rewrite(f))),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::printer::write_expr(f, self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatchClause {
    pub ty: String,
    pub name: String,
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "stmt", rename_all = "snake_case")]
pub enum Stmt {
    Decl { ty: String, name: String, init: Option<Expr> },
    Assign { name: String, value: Expr },
    Expr { expr: Expr },
    If { cond: Expr, body: Vec<Stmt> },
    While { cond: Expr, body: Vec<Stmt> },
    Try { body: Vec<Stmt>, catches: Vec<CatchClause> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

impl Param {
    pub fn new(name: impl Into<String>, ty: impl Into<String>) -> Self {
        Param { name: name.into(), ty: ty.into() }
    }
}

/// Identifier used without a definition in scope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeVar {
    pub name: String,
    pub ty: String,
    /// Uses disagreed about the type; `ty` is then `unknown`.
    pub conflicted: bool,
}

/// One concrete usage example.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScsExample {
    pub id: String,
    pub context_params: Vec<Param>,
    pub statements: Vec<Stmt>,
    pub free_vars: Vec<FreeVar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_uri: Option<String>,
}

impl ScsExample {
    /// Every expression statement, declaration initializer, assignment value
    /// and condition, in source order.
    pub fn expressions(&self) -> Vec<&Expr> {
        fn go<'a>(stmts: &'a [Stmt], out: &mut Vec<&'a Expr>) {
            for s in stmts {
                match s {
                    Stmt::Decl { init, .. } => out.extend(init.iter()),
                    Stmt::Assign { value, .. } => out.push(value),
                    Stmt::Expr { expr } => out.push(expr),
                    Stmt::If { cond, body } | Stmt::While { cond, body } => {
                        out.push(cond);
                        go(body, out);
                    }
                    Stmt::Try { body, catches } => {
                        go(body, out);
                        for c in catches {
                            go(&c.body, out);
                        }
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(&self.statements, &mut out);
        out
    }
}
