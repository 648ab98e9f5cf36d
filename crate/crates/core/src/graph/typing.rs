//! Static typing of expression trees against the graph.

use super::{ApiGraph, Creator, CreatorKind, NodeId, NodeKind};
use crate::scs::{Expr, Target, UNKNOWN_TYPE};

/// Type of the `null` literal for assignability checks.
pub const NULL_TYPE: &str = "null";

impl ApiGraph {
    /// Best-effort type of `e`; `None` when unknown or void.
    pub fn type_of(&self, e: &Expr) -> Option<String> {
        match e {
            Expr::Literal(l) => Some(l.ty.type_name().to_string()),
            Expr::Null => Some(NULL_TYPE.to_string()),
            Expr::Var { ty, .. } | Expr::Placeholder { ty } => (ty != UNKNOWN_TYPE).then(|| ty.clone()),
            Expr::EnumConst { ty, .. } | Expr::New { ty, .. } => Some(ty.clone()),
            Expr::Field { .. } | Expr::Call { .. } => {
                let id = self.member_of(e)?;
                let n = self.node(id);
                match n.kind {
                    NodeKind::Field => n.field.as_ref().map(|f| f.ty.clone()),
                    NodeKind::EnumConstant => n.owner.map(|o| self.node(o).name.clone()),
                    NodeKind::Method => n.method.as_ref().and_then(|m| m.returns.clone()),
                    _ => None,
                }
            }
        }
    }

    fn target_type(&self, t: &Target) -> Option<String> {
        match t {
            Target::Static(ty) => Some(ty.clone()),
            Target::Expr(e) => self.type_of(e),
        }
    }

    /// The graph member an expression's root node refers to: the method for
    /// calls, the constructor for `new`, the field or enum constant for
    /// accesses.
    pub fn member_of(&self, e: &Expr) -> Option<NodeId> {
        match e {
            Expr::Call { target, name, args } => {
                let recv = self.target_type(target)?;
                let arg_tys: Vec<Option<String>> = args.iter().map(|a| self.type_of(a)).collect();
                self.resolve_method(&recv, name, &arg_tys)
            }
            Expr::New { ty, args } => {
                let arg_tys: Vec<Option<String>> = args.iter().map(|a| self.type_of(a)).collect();
                self.resolve_constructor(ty, &arg_tys)
            }
            Expr::Field { target, name } => {
                let owner = self.target_type(target)?;
                self.resolve_field(&owner, name)
            }
            Expr::EnumConst { ty, name } => {
                self.members(ty).find(|(_, n)| n.kind == NodeKind::EnumConstant && &n.name == name).map(|(id, _)| id)
            }
            _ => None,
        }
    }

    /// Creator kind of an expression's root, if it is a creator application.
    pub fn creator_kind_of(&self, e: &Expr) -> Option<CreatorKind> {
        let n = self.node(self.member_of(e)?);
        Some(match n.kind {
            NodeKind::Method if n.method.as_ref()?.is_constructor => CreatorKind::Constructor,
            NodeKind::Method => CreatorKind::Method,
            NodeKind::Field => CreatorKind::Field,
            NodeKind::EnumConstant => CreatorKind::EnumConstant,
            _ => return None,
        })
    }

    /// The creator a member node acts as, if it produces a value.
    pub fn creator_of_node(&self, id: NodeId) -> Option<Creator> {
        let n = self.node(id);
        let owner = self.node(n.owner?).name.clone();
        let (kind, produces, params, is_static) = match n.kind {
            NodeKind::Method => {
                let m = n.method.as_ref()?;
                let params = m.params.iter().map(|p| p.ty.clone()).collect();
                if m.is_constructor {
                    (CreatorKind::Constructor, owner.clone(), params, true)
                } else {
                    (CreatorKind::Method, m.returns.clone()?, params, m.is_static)
                }
            }
            NodeKind::Field => {
                let f = n.field.as_ref()?;
                (CreatorKind::Field, f.ty.clone(), Vec::new(), f.is_static)
            }
            NodeKind::EnumConstant => (CreatorKind::EnumConstant, owner.clone(), Vec::new(), true),
            _ => return None,
        };
        Some(Creator { kind, node: id, owner, member: n.name.clone(), params, is_static, produces })
    }

    /// `from` (possibly `null`) fits a slot of type `to`.
    pub fn fits(&self, from: &str, to: &str) -> bool {
        if from == NULL_TYPE {
            return self.is_reference_type(to);
        }
        self.assignable(from, to)
    }

    /// Strict check: every call and access resolves, receivers and
    /// arguments fit their signatures. Returns the expression's type.
    pub fn typecheck(&self, e: &Expr) -> Result<String, String> {
        match e {
            Expr::Literal(_) | Expr::Null | Expr::Placeholder { .. } | Expr::EnumConst { .. } | Expr::Var { .. } => {
                if let Expr::EnumConst { ty, name } = e {
                    if !self.has_enum_constant(ty, name) {
                        return Err(format!("`{ty}.{name}` is not an enum constant"));
                    }
                }
                let ty = self.type_of(e).ok_or_else(|| format!("untyped leaf `{e}`"))?;
                if ty != NULL_TYPE && !self.has_type(&ty) {
                    return Err(format!("unknown type `{ty}`"));
                }
                Ok(ty)
            }
            Expr::New { ty, args } => {
                let id = self.member_of(e).ok_or_else(|| format!("no constructor for `{e}`"))?;
                self.check_args(id, args)?;
                Ok(ty.clone())
            }
            Expr::Field { target, .. } | Expr::Call { target, .. } => {
                let id = self.member_of(e).ok_or_else(|| format!("cannot resolve `{e}`"))?;
                let n = self.node(id);
                let owner = self.node(n.owner.expect("member has owner")).name.clone();
                let is_static = match n.kind {
                    NodeKind::Field => n.field.as_ref().map(|f| f.is_static).unwrap_or(false),
                    NodeKind::Method => n.method.as_ref().map(|m| m.is_static).unwrap_or(false),
                    _ => true,
                };
                match target {
                    Target::Static(_) if !is_static => return Err(format!("`{e}` needs a receiver")),
                    Target::Expr(_) if is_static => return Err(format!("`{e}` is static")),
                    Target::Expr(r) => {
                        let rt = self.typecheck(r)?;
                        if !self.fits(&rt, &owner) || rt == NULL_TYPE {
                            return Err(format!("receiver `{r}` of type {rt} does not fit {owner}"));
                        }
                    }
                    Target::Static(_) => {}
                }
                if let Expr::Call { args, .. } = e {
                    self.check_args(id, args)?;
                }
                self.type_of(e).ok_or_else(|| format!("`{e}` has no value"))
            }
        }
    }

    fn check_args(&self, id: NodeId, args: &[Expr]) -> Result<(), String> {
        let m = self.node(id).method.as_ref().expect("method");
        if m.params.len() != args.len() {
            return Err("arity mismatch".into());
        }
        for (p, a) in m.params.iter().zip(args) {
            let at = self.typecheck(a)?;
            if !self.fits(&at, &p.ty) {
                return Err(format!("argument `{a}` of type {at} does not fit {}", p.ty));
            }
        }
        Ok(())
    }
}
