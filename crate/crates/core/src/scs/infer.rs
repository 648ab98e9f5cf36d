//! Free-variable type inference and graph-aware resolution of `Type.NAME`.

use super::ast::*;
use crate::graph::ApiGraph;
use std::collections::{BTreeMap, BTreeSet};

/// Rewrite `Type.NAME` to an enum constant or a static field according to
/// the graph, then infer free-variable types.
pub fn resolve_in_graph(ex: &mut ScsExample, g: &ApiGraph) {
    for_each_expr_mut(&mut ex.statements, &mut |e| *e = resolve_expr(e, g));
    infer_free_var_types(ex, Some(g));
}

/// Graph-aware fix-up of a standalone expression.
pub fn resolve_expr(e: &Expr, g: &ApiGraph) -> Expr {
    e.rewrite(&mut |node| match node {
        Expr::Field { target: Target::Static(ty), name } if g.has_enum_constant(ty, name) => {
            Some(Expr::EnumConst { ty: ty.clone(), name: name.clone() })
        }
        Expr::EnumConst { ty, name } if g.has_type(ty) && !g.has_enum_constant(ty, name) => {
            Some(Expr::Field { target: Target::Static(ty.clone()), name: name.clone() })
        }
        _ => None,
    })
}

pub(crate) fn for_each_expr_mut(stmts: &mut [Stmt], f: &mut dyn FnMut(&mut Expr)) {
    for s in stmts {
        match s {
            Stmt::Decl { init, .. } => {
                if let Some(e) = init {
                    f(e)
                }
            }
            Stmt::Assign { value, .. } => f(value),
            Stmt::Expr { expr } => f(expr),
            Stmt::If { cond, body } | Stmt::While { cond, body } => {
                f(cond);
                for_each_expr_mut(body, f);
            }
            Stmt::Try { body, catches } => {
                for_each_expr_mut(body, f);
                for c in catches {
                    for_each_expr_mut(&mut c.body, f);
                }
            }
        }
    }
}

fn for_each_stmt<'a>(stmts: &'a [Stmt], f: &mut dyn FnMut(&'a Stmt)) {
    for s in stmts {
        f(s);
        match s {
            Stmt::If { body, .. } | Stmt::While { body, .. } => for_each_stmt(body, f),
            Stmt::Try { body, catches } => {
                for_each_stmt(body, f);
                for c in catches {
                    for_each_stmt(&c.body, f);
                }
            }
            _ => {}
        }
    }
}

/// Constrain each free variable's type from its uses. Without a graph only
/// `T x = v;` / `x = v;` uses contribute. Disagreeing constraints leave the
/// variable `unknown` and flag it.
pub fn infer_free_var_types(ex: &mut ScsExample, g: Option<&ApiGraph>) {
    if ex.free_vars.is_empty() {
        return;
    }
    let free: BTreeSet<String> = ex.free_vars.iter().map(|f| f.name.clone()).collect();
    let mut result: BTreeMap<String, (String, bool)> = BTreeMap::new();
    // A few rounds: a newly typed receiver can type the arguments of its calls.
    for _ in 0..4 {
        let mut constraints: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let declared = declared_types(ex);
        for_each_stmt(&ex.statements, &mut |s| match s {
            Stmt::Decl { ty, init: Some(Expr::Var { name, .. }), .. } if free.contains(name) => {
                constraints.entry(name.clone()).or_default().insert(ty.clone());
            }
            Stmt::Assign { name: target, value: Expr::Var { name, .. } } if free.contains(name) => {
                if let Some(ty) = declared.get(target) {
                    constraints.entry(name.clone()).or_default().insert(ty.clone());
                }
            }
            _ => {}
        });
        if let Some(g) = g {
            for e in ex.expressions() {
                e.walk(&mut |node| use_constraints(node, g, &free, &mut constraints));
            }
        }
        let mut next = BTreeMap::new();
        for (name, tys) in constraints {
            let entry = if tys.len() == 1 {
                (tys.into_iter().next().unwrap(), false)
            } else {
                (UNKNOWN_TYPE.to_string(), true)
            };
            next.insert(name, entry);
        }
        if next == result {
            break;
        }
        result = next;
        apply_types(ex, &result);
    }
    apply_types(ex, &result);
}

fn declared_types(ex: &ScsExample) -> BTreeMap<String, String> {
    let mut out: BTreeMap<String, String> = ex.context_params.iter().map(|p| (p.name.clone(), p.ty.clone())).collect();
    for_each_stmt(&ex.statements, &mut |s| {
        if let Stmt::Decl { ty, name, .. } = s {
            out.insert(name.clone(), ty.clone());
        }
    });
    out
}

fn use_constraints(node: &Expr, g: &ApiGraph, free: &BTreeSet<String>, out: &mut BTreeMap<String, BTreeSet<String>>) {
    let free_name = |e: &Expr| match e {
        Expr::Var { name, .. } if free.contains(name) => Some(name.clone()),
        _ => None,
    };
    let mut add = |name: String, ty: &str| {
        out.entry(name).or_default().insert(ty.to_string());
    };
    match node {
        Expr::Call { target, name, args } => {
            if let Target::Expr(r) = target {
                if let Some(v) = free_name(r) {
                    if let [owner] = g.owners_of_method(name, args.len()).as_slice() {
                        add(v, owner);
                    }
                }
            }
            if let Some(id) = g.member_of(node) {
                let m = g.node(id).method.as_ref().expect("call resolves to a method");
                for (p, a) in m.params.iter().zip(args) {
                    if let Some(v) = free_name(a) {
                        add(v, &p.ty);
                    }
                }
            }
        }
        Expr::New { args, .. } => {
            if let Some(id) = g.member_of(node) {
                let m = g.node(id).method.as_ref().expect("constructor");
                for (p, a) in m.params.iter().zip(args) {
                    if let Some(v) = free_name(a) {
                        add(v, &p.ty);
                    }
                }
            }
        }
        Expr::Field { target: Target::Expr(r), name } => {
            if let Some(v) = free_name(r) {
                if let [owner] = g.owners_of_field(name).as_slice() {
                    add(v, owner);
                }
            }
        }
        _ => {}
    }
}

fn apply_types(ex: &mut ScsExample, types: &BTreeMap<String, (String, bool)>) {
    for fv in &mut ex.free_vars {
        if let Some((ty, conflicted)) = types.get(&fv.name) {
            fv.ty = ty.clone();
            fv.conflicted = *conflicted;
        }
    }
    let lookup: BTreeMap<&str, &str> = ex.free_vars.iter().map(|f| (f.name.as_str(), f.ty.as_str())).collect();
    for_each_expr_mut(&mut ex.statements, &mut |e| {
        *e = e.rewrite(&mut |n| match n {
            Expr::Var { name, ty } => match lookup.get(name.as_str()) {
                Some(t) if *t != ty => Some(Expr::Var { name: name.clone(), ty: t.to_string() }),
                _ => None,
            },
            _ => None,
        })
    });
}
