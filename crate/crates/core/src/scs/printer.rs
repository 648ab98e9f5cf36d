//! Canonical printer: one statement per line, four-space indentation,
//! single spaces after commas.

use super::ast::*;
use std::fmt::{self, Write};

pub fn write_expr(f: &mut impl Write, e: &Expr) -> fmt::Result {
    match e {
        Expr::Literal(l) => write_literal(f, l),
        Expr::Null => f.write_str("null"),
        Expr::Var { name, .. } => f.write_str(name),
        Expr::EnumConst { ty, name } => write!(f, "{ty}.{name}"),
        Expr::Placeholder { ty } => write!(f, "⟨{ty}⟩"),
        Expr::New { ty, args } => {
            write!(f, "new {ty}")?;
            write_args(f, args)
        }
        Expr::Field { target, name } => {
            write_target(f, target)?;
            write!(f, ".{name}")
        }
        Expr::Call { target, name, args } => {
            write_target(f, target)?;
            write!(f, ".{name}")?;
            write_args(f, args)
        }
    }
}

fn write_target(f: &mut impl Write, t: &Target) -> fmt::Result {
    match t {
        Target::Static(ty) => f.write_str(ty),
        Target::Expr(e) => write_expr(f, e),
    }
}

fn write_args(f: &mut impl Write, args: &[Expr]) -> fmt::Result {
    f.write_char('(')?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write_expr(f, a)?;
    }
    f.write_char(')')
}

fn escape(s: &str, quote: char) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            '\0' => out.push_str("\\0"),
            '\\' => out.push_str("\\\\"),
            c if c == quote => {
                out.push('\\');
                out.push(c);
            }
            c => out.push(c),
        }
    }
    out
}

fn write_literal(f: &mut impl Write, l: &Literal) -> fmt::Result {
    match l.ty {
        LitType::Int | LitType::Double | LitType::Boolean => f.write_str(&l.text),
        LitType::Long => write!(f, "{}L", l.text),
        LitType::Short => write!(f, "(short) {}", l.text),
        LitType::Char => write!(f, "'{}'", escape(&l.text, '\'')),
        LitType::String => write!(f, "\"{}\"", escape(&l.text, '"')),
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e).expect("writing to a String cannot fail");
    s
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("    ");
    }
}

fn print_block(out: &mut String, stmts: &[Stmt], level: usize) {
    for s in stmts {
        print_stmt(out, s, level);
    }
}

fn print_stmt(out: &mut String, s: &Stmt, level: usize) {
    indent(out, level);
    match s {
        Stmt::Decl { ty, name, init: Some(e) } => {
            let _ = writeln!(out, "{ty} {name} = {};", print_expr(e));
        }
        Stmt::Decl { ty, name, init: None } => {
            let _ = writeln!(out, "{ty} {name};");
        }
        Stmt::Assign { name, value } => {
            let _ = writeln!(out, "{name} = {};", print_expr(value));
        }
        Stmt::Expr { expr } => {
            let _ = writeln!(out, "{};", print_expr(expr));
        }
        Stmt::If { cond, body } | Stmt::While { cond, body } => {
            let kw = if matches!(s, Stmt::If { .. }) { "if" } else { "while" };
            let _ = writeln!(out, "{kw} ({}) {{", print_expr(cond));
            print_block(out, body, level + 1);
            indent(out, level);
            out.push_str("}\n");
        }
        Stmt::Try { body, catches } => {
            out.push_str("try {\n");
            print_block(out, body, level + 1);
            for c in catches {
                indent(out, level);
                let _ = writeln!(out, "}} catch ({} {}) {{", c.ty, c.name);
                print_block(out, &c.body, level + 1);
            }
            indent(out, level);
            out.push_str("}\n");
        }
    }
}

/// Statement list only; an empty list prints as the empty string.
pub fn print_statements(stmts: &[Stmt]) -> String {
    let mut out = String::new();
    print_block(&mut out, stmts, 0);
    out
}

pub fn print_example(ex: &ScsExample) -> String {
    print_statements(&ex.statements)
}

/// Full corpus block with `#example` header and `#end` terminator.
pub fn print_example_block(ex: &ScsExample) -> String {
    let params: Vec<String> = ex.context_params.iter().map(|p| format!("{}:{}", p.name, p.ty)).collect();
    let mut out = format!("#example {} ({})\n", ex.id, params.join(", "));
    if let Some(uri) = &ex.source_uri {
        let _ = writeln!(out, "#source {uri}");
    }
    out.push_str(&print_statements(&ex.statements));
    out.push_str("#end\n");
    out
}
