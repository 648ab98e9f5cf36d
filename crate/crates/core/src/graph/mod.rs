//! API knowledge graph: classes, interfaces, enums, their members, and the
//! typed relations between them.
//!
//! Node kinds: `Class`, `Interface`, `Method`, `EnumClass`, `EnumConstant`,
//! plus `Field`, which the synthesizer needs for static and instance field
//! access. Edge kinds: `haveMethod`, `return`, `haveConstant`, `implement`,
//! `extend`, `iterable`, plus `haveField`/`fieldType` for fields.
//!
//! The primitive types and `String` are built-in leaf `Class` nodes, present
//! in every graph and flagged `builtin`.

mod model;
mod typing;

pub use model::{ApiModelDocument, CtorDecl, DeclKind, FieldDecl, MethodDecl, ParamDecl, TypeDecl};
pub use typing::NULL_TYPE;

use crate::scs::lexer::is_type_ident;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

pub const BUILTIN_TYPES: [&str; 7] = ["int", "long", "short", "double", "boolean", "char", "String"];

/// Version of the serialized graph cache layout.
pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("model error at {path}: {message}")]
    Model { path: String, message: String },
    #[error("unknown type `{0}`")]
    UnknownType(String),
}

fn model_err(path: impl Into<String>, message: impl Into<String>) -> GraphError {
    GraphError::Model { path: path.into(), message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Class,
    Interface,
    Method,
    EnumClass,
    EnumConstant,
    Field,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EdgeKind {
    HaveMethod,
    Return,
    HaveConstant,
    Implement,
    Extend,
    Iterable,
    HaveField,
    FieldType,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamInfo {
    pub name: String,
    pub ty: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub doc: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodInfo {
    pub params: Vec<ParamInfo>,
    /// `None` for void methods and constructors.
    pub returns: Option<String>,
    pub is_static: bool,
    pub is_constructor: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub ty: String,
    pub is_static: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub kind: NodeKind,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub owner: Option<NodeId>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub comment: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub builtin: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodInfo>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldInfo>,
}

impl Node {
    pub fn is_type(&self) -> bool {
        matches!(self.kind, NodeKind::Class | NodeKind::Interface | NodeKind::EnumClass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub kind: EdgeKind,
    pub from: NodeId,
    pub to: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CreatorKind {
    Constructor,
    Method,
    Field,
    EnumConstant,
}

/// A member that can produce a value of some type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Creator {
    pub kind: CreatorKind,
    pub node: NodeId,
    pub owner: String,
    pub member: String,
    pub params: Vec<String>,
    pub is_static: bool,
    pub produces: String,
}

impl Creator {
    /// Stable textual key, e.g. `Workbook.createSheet(String)`,
    /// `new File(String)`, `IndexedColors.RED`.
    pub fn key(&self) -> String {
        self.to_string()
    }

    fn sort_key(&self) -> (CreatorKind, &str, &str, &[String]) {
        (self.kind, &self.owner, &self.member, &self.params)
    }

    /// Receiver type if the creator needs a receiver expression.
    pub fn receiver(&self) -> Option<&str> {
        match self.kind {
            CreatorKind::Method | CreatorKind::Field if !self.is_static => Some(&self.owner),
            _ => None,
        }
    }
}

impl fmt::Display for Creator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CreatorKind::Constructor => write!(f, "new {}({})", self.owner, self.params.join(", ")),
            CreatorKind::Method => write!(f, "{}.{}({})", self.owner, self.member, self.params.join(", ")),
            CreatorKind::Field | CreatorKind::EnumConstant => write!(f, "{}.{}", self.owner, self.member),
        }
    }
}

#[derive(Debug, Clone, Default)]
struct Index {
    types: HashMap<String, NodeId>,
    members: HashMap<NodeId, Vec<NodeId>>,
    /// Strict supertypes (transitive), sorted.
    supertypes: HashMap<String, BTreeSet<String>>,
    /// Types assignable to the key (including itself), sorted.
    assignable_from: HashMap<String, BTreeSet<String>>,
    creators: HashMap<String, Vec<Creator>>,
}

/// Immutable API knowledge graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ApiGraph {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub library: Option<String>,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    #[serde(skip)]
    index: Index,
}

impl PartialEq for ApiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.library == other.library && self.nodes == other.nodes && self.edges == other.edges
    }
}

impl Default for ApiGraph {
    fn default() -> Self {
        ApiGraph::build(&ApiModelDocument::default()).expect("empty model is valid")
    }
}

impl ApiGraph {
    pub fn from_json(text: &str) -> Result<ApiGraph, GraphError> {
        let doc = ApiModelDocument::from_json(text).map_err(|e| model_err("$", e.to_string()))?;
        ApiGraph::build(&doc)
    }

    /// Build the graph from a model document, validating it.
    pub fn build(doc: &ApiModelDocument) -> Result<ApiGraph, GraphError> {
        let mut nodes = Vec::new();
        let mut type_ids: HashMap<String, NodeId> = HashMap::new();
        for b in BUILTIN_TYPES {
            type_ids.insert(b.to_string(), NodeId(nodes.len()));
            nodes.push(Node {
                kind: NodeKind::Class,
                name: b.to_string(),
                owner: None,
                comment: String::new(),
                builtin: true,
                method: None,
                field: None,
            });
        }
        for (i, t) in doc.types.iter().enumerate() {
            let path = format!("types[{i}]");
            if !is_type_ident(&t.name) {
                return Err(model_err(format!("{path}.name"), format!("`{}` is not a valid type name", t.name)));
            }
            if type_ids.contains_key(&t.name) {
                return Err(model_err(format!("{path}.name"), format!("duplicate type `{}`", t.name)));
            }
            let kind = match t.kind {
                DeclKind::Class => NodeKind::Class,
                DeclKind::Interface => NodeKind::Interface,
                DeclKind::Enum => NodeKind::EnumClass,
            };
            type_ids.insert(t.name.clone(), NodeId(nodes.len()));
            nodes.push(Node {
                kind,
                name: t.name.clone(),
                owner: None,
                comment: t.comment.clone(),
                builtin: false,
                method: None,
                field: None,
            });
        }

        let resolve = |path: &str, ty: &str| -> Result<NodeId, GraphError> {
            type_ids
                .get(ty)
                .copied()
                .ok_or_else(|| model_err(path, format!("reference to undeclared type `{ty}`")))
        };

        let mut edges = Vec::new();
        for (i, t) in doc.types.iter().enumerate() {
            let path = format!("types[{i}]");
            let id = type_ids[&t.name];
            for (k, sup) in t.extends.iter().enumerate() {
                let p = format!("{path}.extends[{k}]");
                let to = resolve(&p, sup)?;
                let ok = match t.kind {
                    DeclKind::Class => nodes[to.0].kind == NodeKind::Class && !nodes[to.0].builtin,
                    DeclKind::Interface => nodes[to.0].kind == NodeKind::Interface,
                    DeclKind::Enum => false,
                };
                if !ok {
                    return Err(model_err(p, format!("`{}` cannot extend `{sup}`", t.name)));
                }
                if t.kind == DeclKind::Class && t.extends.len() > 1 {
                    return Err(model_err(p, "a class extends at most one class"));
                }
                edges.push(Edge { kind: EdgeKind::Extend, from: id, to });
            }
            for (k, sup) in t.implements.iter().enumerate() {
                let p = format!("{path}.implements[{k}]");
                let to = resolve(&p, sup)?;
                if nodes[to.0].kind != NodeKind::Interface {
                    return Err(model_err(p, format!("`{sup}` is not an interface")));
                }
                edges.push(Edge { kind: EdgeKind::Implement, from: id, to });
            }
            if let Some(elem) = &t.iterable {
                let p = format!("{path}.iterable");
                let to = resolve(&p, elem)?;
                edges.push(Edge { kind: EdgeKind::Iterable, from: id, to });
            }
            if !t.constants.is_empty() && t.kind != DeclKind::Enum {
                return Err(model_err(format!("{path}.constants"), "only enums declare constants"));
            }
            if !t.constructors.is_empty() && t.kind != DeclKind::Class {
                return Err(model_err(
                    format!("{path}.constructors"),
                    format!("`{}` cannot be instantiated", t.name),
                ));
            }

            let mut seen = BTreeSet::new();
            for (k, c) in t.constants.iter().enumerate() {
                let p = format!("{path}.constants[{k}]");
                if !seen.insert(format!("const {c}")) {
                    return Err(model_err(p, format!("duplicate constant `{c}`")));
                }
                let cid = NodeId(nodes.len());
                nodes.push(Node {
                    kind: NodeKind::EnumConstant,
                    name: c.clone(),
                    owner: Some(id),
                    comment: String::new(),
                    builtin: false,
                    method: None,
                    field: None,
                });
                edges.push(Edge { kind: EdgeKind::HaveConstant, from: id, to: cid });
            }
            for (k, c) in t.constructors.iter().enumerate() {
                let p = format!("{path}.constructors[{k}]");
                let params = params_info(&p, &c.params, &resolve)?;
                let sig = format!("<init>({})", param_types(&params));
                if !seen.insert(sig.clone()) {
                    return Err(model_err(p, format!("duplicate constructor {sig}")));
                }
                let mid = NodeId(nodes.len());
                nodes.push(Node {
                    kind: NodeKind::Method,
                    name: "<init>".into(),
                    owner: Some(id),
                    comment: c.comment.clone(),
                    builtin: false,
                    method: Some(MethodInfo { params, returns: None, is_static: false, is_constructor: true }),
                    field: None,
                });
                edges.push(Edge { kind: EdgeKind::HaveMethod, from: id, to: mid });
            }
            for (k, m) in t.methods.iter().enumerate() {
                let p = format!("{path}.methods[{k}]");
                if m.name == "<init>" || m.name.is_empty() {
                    return Err(model_err(p, "invalid method name"));
                }
                let params = params_info(&p, &m.params, &resolve)?;
                let sig = format!("{}({})", m.name, param_types(&params));
                if !seen.insert(sig.clone()) {
                    return Err(model_err(p, format!("duplicate method {sig}")));
                }
                let returns = if m.returns == "void" {
                    None
                } else {
                    Some(resolve(&format!("{p}.returns"), &m.returns)?)
                };
                let mid = NodeId(nodes.len());
                nodes.push(Node {
                    kind: NodeKind::Method,
                    name: m.name.clone(),
                    owner: Some(id),
                    comment: m.comment.clone(),
                    builtin: false,
                    method: Some(MethodInfo {
                        params,
                        returns: returns.map(|_| m.returns.clone()),
                        is_static: m.is_static,
                        is_constructor: false,
                    }),
                    field: None,
                });
                edges.push(Edge { kind: EdgeKind::HaveMethod, from: id, to: mid });
                if let Some(r) = returns {
                    edges.push(Edge { kind: EdgeKind::Return, from: mid, to: r });
                }
            }
            for (k, f) in t.fields.iter().enumerate() {
                let p = format!("{path}.fields[{k}]");
                if !seen.insert(format!("field {}", f.name)) || t.constants.contains(&f.name) {
                    return Err(model_err(p, format!("duplicate field `{}`", f.name)));
                }
                let to = resolve(&format!("{p}.type"), &f.ty)?;
                let fid = NodeId(nodes.len());
                nodes.push(Node {
                    kind: NodeKind::Field,
                    name: f.name.clone(),
                    owner: Some(id),
                    comment: f.comment.clone(),
                    builtin: false,
                    method: None,
                    field: Some(FieldInfo { ty: f.ty.clone(), is_static: f.is_static }),
                });
                edges.push(Edge { kind: EdgeKind::HaveField, from: id, to: fid });
                edges.push(Edge { kind: EdgeKind::FieldType, from: fid, to });
            }
        }

        let mut g = ApiGraph { library: doc.library.clone(), nodes, edges, index: Index::default() };
        g.reindex()?;
        Ok(g)
    }

    /// Rebuild lookup tables (needed after deserialization).
    pub fn reindex(&mut self) -> Result<(), GraphError> {
        let mut idx = Index::default();
        for (i, n) in self.nodes.iter().enumerate() {
            if n.is_type() {
                idx.types.insert(n.name.clone(), NodeId(i));
            }
            if let Some(o) = n.owner {
                idx.members.entry(o).or_default().push(NodeId(i));
            }
        }
        let mut direct: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
        for e in &self.edges {
            if matches!(e.kind, EdgeKind::Extend | EdgeKind::Implement) {
                direct.entry(e.from).or_default().push(e.to);
            }
        }
        // Cycle check + closure via DFS with colors.
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Grey,
            Black,
        }
        let mut color = vec![Color::White; self.nodes.len()];
        let mut closure: HashMap<NodeId, BTreeSet<String>> = HashMap::new();
        fn visit(
            n: NodeId,
            nodes: &[Node],
            direct: &HashMap<NodeId, Vec<NodeId>>,
            color: &mut [Color],
            closure: &mut HashMap<NodeId, BTreeSet<String>>,
        ) -> Result<(), GraphError> {
            match color[n.0] {
                Color::Black => return Ok(()),
                Color::Grey => {
                    return Err(model_err(
                        format!("types.{}", nodes[n.0].name),
                        format!("inheritance cycle through `{}`", nodes[n.0].name),
                    ))
                }
                Color::White => {}
            }
            color[n.0] = Color::Grey;
            let mut set = BTreeSet::new();
            for &s in direct.get(&n).map(Vec::as_slice).unwrap_or(&[]) {
                visit(s, nodes, direct, color, closure)?;
                set.insert(nodes[s.0].name.clone());
                set.extend(closure[&s].iter().cloned());
            }
            color[n.0] = Color::Black;
            closure.insert(n, set);
            Ok(())
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if n.is_type() {
                visit(NodeId(i), &self.nodes, &direct, &mut color, &mut closure)?;
            }
        }
        for (id, sups) in closure {
            let name = self.nodes[id.0].name.clone();
            idx.assignable_from.entry(name.clone()).or_default().insert(name.clone());
            for s in &sups {
                idx.assignable_from.entry(s.clone()).or_default().insert(name.clone());
            }
            idx.supertypes.insert(name, sups);
        }
        self.index = idx;
        let names: Vec<String> = self.index.types.keys().cloned().collect();
        let mut creators = HashMap::new();
        for t in names {
            creators.insert(t.clone(), self.compute_creators(&t));
        }
        self.index.creators = creators;
        Ok(())
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0]
    }

    /// Nodes declared by the model (built-in types excluded).
    pub fn declared_nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(|n| !n.builtin)
    }

    pub fn is_empty(&self) -> bool {
        self.declared_nodes().next().is_none() && self.edges.is_empty()
    }

    pub fn has_type(&self, ty: &str) -> bool {
        self.index.types.contains_key(ty)
    }

    pub fn type_node(&self, ty: &str) -> Option<&Node> {
        self.index.types.get(ty).map(|id| self.node(*id))
    }

    pub fn type_kind(&self, ty: &str) -> Option<NodeKind> {
        self.type_node(ty).map(|n| n.kind)
    }

    pub fn is_builtin(&self, ty: &str) -> bool {
        self.type_node(ty).is_some_and(|n| n.builtin)
    }

    /// Declared type names in node order (built-ins first).
    pub fn type_names(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().filter(|n| n.is_type()).map(|n| n.name.as_str())
    }

    pub fn edges_of(&self, kind: EdgeKind) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.kind == kind)
    }

    pub fn members(&self, ty: &str) -> impl Iterator<Item = (NodeId, &Node)> {
        let ids = self.index.types.get(ty).and_then(|id| self.index.members.get(id));
        ids.into_iter().flatten().map(|id| (*id, self.node(*id)))
    }

    /// Number of member nodes (methods, constructors, fields, constants).
    pub fn member_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.owner.is_some()).count()
    }

    fn require(&self, ty: &str) -> Result<(), GraphError> {
        if self.has_type(ty) {
            Ok(())
        } else {
            Err(GraphError::UnknownType(ty.to_string()))
        }
    }

    /// `from` can be used where `to` is expected: equal, or `to` is reachable
    /// from `from` through extend/implement edges (upcast).
    pub fn is_assignable(&self, from: &str, to: &str) -> Result<bool, GraphError> {
        self.require(from)?;
        self.require(to)?;
        Ok(self.assignable(from, to))
    }

    /// Like [`is_assignable`](Self::is_assignable) but unknown names are simply
    /// not assignable.
    pub fn assignable(&self, from: &str, to: &str) -> bool {
        from == to && self.has_type(from) || self.index.supertypes.get(from).is_some_and(|s| s.contains(to))
    }

    /// Types assignable to `to`, including itself, sorted by name.
    pub fn subtypes_of(&self, to: &str) -> impl Iterator<Item = &str> {
        self.index.assignable_from.get(to).into_iter().flatten().map(String::as_str)
    }

    /// `ty` followed by all of its supertypes, nearest declaration order not
    /// guaranteed beyond "self first".
    pub fn self_and_supertypes(&self, ty: &str) -> Vec<&str> {
        let mut out = vec![];
        if let Some(n) = self.type_node(ty) {
            out.push(n.name.as_str());
        }
        if let Some(s) = self.index.supertypes.get(ty) {
            out.extend(s.iter().map(String::as_str));
        }
        out
    }

    pub fn is_reference_type(&self, ty: &str) -> bool {
        self.type_node(ty).is_some_and(|n| !n.builtin || n.name == "String")
    }

    pub fn enum_constants(&self, ty: &str) -> Vec<&str> {
        self.members(ty)
            .filter(|(_, n)| n.kind == NodeKind::EnumConstant)
            .map(|(_, n)| n.name.as_str())
            .collect()
    }

    pub fn has_enum_constant(&self, ty: &str, name: &str) -> bool {
        self.members(ty).any(|(_, n)| n.kind == NodeKind::EnumConstant && n.name == name)
    }

    /// Methods named `name` with `arity` parameters visible on `ty`
    /// (declared on it or inherited), own declarations first.
    pub fn methods_named(&self, ty: &str, name: &str, arity: usize) -> Vec<NodeId> {
        let mut out = Vec::new();
        for t in self.self_and_supertypes(ty) {
            for (id, n) in self.members(t) {
                if let Some(m) = &n.method {
                    if !m.is_constructor && n.name == name && m.params.len() == arity {
                        out.push(id);
                    }
                }
            }
        }
        out
    }

    /// Pick the best overload given (possibly unknown) argument types.
    pub fn resolve_method(&self, ty: &str, name: &str, args: &[Option<String>]) -> Option<NodeId> {
        let cands = self.methods_named(ty, name, args.len());
        self.best_overload(cands, args)
    }

    pub fn resolve_constructor(&self, ty: &str, args: &[Option<String>]) -> Option<NodeId> {
        let cands = self
            .members(ty)
            .filter(|(_, n)| n.method.as_ref().is_some_and(|m| m.is_constructor && m.params.len() == args.len()))
            .map(|(id, _)| id)
            .collect();
        self.best_overload(cands, args)
    }

    fn best_overload(&self, cands: Vec<NodeId>, args: &[Option<String>]) -> Option<NodeId> {
        let fits = |id: &NodeId| {
            let m = self.node(*id).method.as_ref().expect("method node");
            m.params.iter().zip(args).all(|(p, a)| match a.as_deref() {
                None => true,
                Some("null") => self.is_reference_type(&p.ty),
                Some(a) => self.assignable(a, &p.ty),
            })
        };
        cands.iter().copied().find(fits).or_else(|| cands.first().copied())
    }

    /// Field `name` visible on `ty` (own or inherited).
    pub fn resolve_field(&self, ty: &str, name: &str) -> Option<NodeId> {
        self.self_and_supertypes(ty).into_iter().find_map(|t| {
            self.members(t).find(|(_, n)| n.kind == NodeKind::Field && n.name == name).map(|(id, _)| id)
        })
    }

    /// Every type declaring a method `name` with `arity` parameters.
    pub fn owners_of_method(&self, name: &str, arity: usize) -> Vec<&str> {
        let mut owners: Vec<&str> = self
            .nodes
            .iter()
            .filter(|n| {
                n.name == name && n.method.as_ref().is_some_and(|m| !m.is_constructor && m.params.len() == arity)
            })
            .filter_map(|n| n.owner.map(|o| self.node(o).name.as_str()))
            .collect();
        owners.sort();
        owners.dedup();
        owners
    }

    pub fn owners_of_field(&self, name: &str) -> Vec<&str> {
        let mut owners: Vec<&str> = self
            .nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Field && n.name == name)
            .filter_map(|n| n.owner.map(|o| self.node(o).name.as_str()))
            .collect();
        owners.sort();
        owners.dedup();
        owners
    }

    /// All members producing a value assignable to `ty`, ordered by
    /// (kind, owner, member, parameter types).
    pub fn creators_of(&self, ty: &str) -> Result<&[Creator], GraphError> {
        self.require(ty)?;
        Ok(self.index.creators.get(ty).map(Vec::as_slice).unwrap_or(&[]))
    }

    fn compute_creators(&self, ty: &str) -> Vec<Creator> {
        let mut out = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            let Some(owner) = n.owner.map(|o| self.node(o)) else { continue };
            let creator = |kind, produces: &str, params: Vec<String>, is_static| Creator {
                kind,
                node: NodeId(i),
                owner: owner.name.clone(),
                member: n.name.clone(),
                params,
                is_static,
                produces: produces.to_string(),
            };
            match n.kind {
                NodeKind::Method => {
                    let m = n.method.as_ref().expect("method info");
                    let params = m.params.iter().map(|p| p.ty.clone()).collect();
                    if m.is_constructor {
                        if owner.kind == NodeKind::Class && self.assignable(&owner.name, ty) {
                            out.push(creator(CreatorKind::Constructor, &owner.name, params, true));
                        }
                    } else if let Some(r) = &m.returns {
                        if self.assignable(r, ty) {
                            out.push(creator(CreatorKind::Method, r, params, m.is_static));
                        }
                    }
                }
                NodeKind::Field => {
                    let f = n.field.as_ref().expect("field info");
                    if self.assignable(&f.ty, ty) {
                        out.push(creator(CreatorKind::Field, &f.ty, Vec::new(), f.is_static));
                    }
                }
                NodeKind::EnumConstant if self.assignable(&owner.name, ty) => {
                    out.push(creator(CreatorKind::EnumConstant, &owner.name, Vec::new(), true));
                }
                _ => {}
            }
        }
        out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        out
    }

    /// Canonical JSON (stable for identical models).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn from_cache_json(text: &str) -> Result<ApiGraph, GraphError> {
        let mut g: ApiGraph = serde_json::from_str(text).map_err(|e| model_err("$", e.to_string()))?;
        g.reindex()?;
        Ok(g)
    }
}

fn param_types(ps: &[ParamInfo]) -> String {
    ps.iter().map(|p| p.ty.as_str()).collect::<Vec<_>>().join(",")
}

fn params_info(
    path: &str,
    ps: &[ParamDecl],
    resolve: &impl Fn(&str, &str) -> Result<NodeId, GraphError>,
) -> Result<Vec<ParamInfo>, GraphError> {
    ps.iter()
        .enumerate()
        .map(|(k, p)| {
            resolve(&format!("{path}.params[{k}].type"), &p.ty)?;
            Ok(ParamInfo { name: p.name.clone(), ty: p.ty.clone(), doc: p.doc.clone() })
        })
        .collect()
}

/// Hex SHA-256 of the raw model bytes; keys the graph cache.
pub fn model_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// On-disk cache: the graph plus, optionally, a fitted popularity model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphCache {
    pub format_version: u32,
    pub model_hash: String,
    pub graph: ApiGraph,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub popularity: Option<crate::rank::PopularityModel>,
}

impl GraphCache {
    pub fn new(model_bytes: &[u8], graph: ApiGraph) -> Self {
        GraphCache { format_version: CACHE_FORMAT_VERSION, model_hash: model_hash(model_bytes), graph, popularity: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cache serializes")
    }

    pub fn from_json(text: &str) -> Result<GraphCache, GraphError> {
        let mut c: GraphCache = serde_json::from_str(text).map_err(|e| model_err("$", e.to_string()))?;
        if c.format_version != CACHE_FORMAT_VERSION {
            return Err(model_err("$.format_version", format!("unsupported cache version {}", c.format_version)));
        }
        c.graph.reindex()?;
        Ok(c)
    }

    /// The cache is valid for `model_bytes` when the content hashes match.
    pub fn matches(&self, model_bytes: &[u8]) -> bool {
        self.model_hash == model_hash(model_bytes)
    }
}
