mod common;

use common::*;
use patternforge::graph::{ApiModelDocument, CreatorKind, EdgeKind, GraphCache, NodeKind};
use patternforge::ApiGraph;
use proptest::prelude::*;
use std::collections::BTreeSet;

#[test]
fn poi_mini_has_the_fill_pattern_constants() {
    let g = poi_graph();
    let from_fill = g
        .edges_of(EdgeKind::HaveConstant)
        .filter(|e| g.node(e.from).name == "FillPatternType")
        .count();
    assert_eq!(from_fill, 19);
    let creators = g.creators_of("FillPatternType").unwrap();
    assert!(creators.iter().any(|c| c.key() == "FillPatternType.SOLID_FOREGROUND"));
    assert_eq!(creators.iter().filter(|c| c.kind == CreatorKind::EnumConstant).count(), 19);
}

#[test]
fn poi_mini_scale() {
    let g = poi_graph();
    let members = g.member_count();
    assert!((150..=400).contains(&members), "{members} members");
    assert!(g.is_assignable("XSSFWorkbook", "Workbook").unwrap());
    assert!(g.is_assignable("FileInputStream", "InputStream").unwrap());
    assert!(!g.is_assignable("InputStream", "FileInputStream").unwrap());
}

/// Every member of the model document whose produced type is assignable,
/// found by scanning the document itself.
fn scan_creators(doc: &ApiModelDocument, oracle: &TermOracle, ty: &str) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for t in &doc.types {
        for c in &t.constants {
            if oracle.assignable(&t.name, ty) {
                out.insert(format!("{}.{c}", t.name));
            }
        }
        if t.kind == patternforge::graph::DeclKind::Class && oracle.assignable(&t.name, ty) {
            for c in &t.constructors {
                let ps: Vec<&str> = c.params.iter().map(|p| p.ty.as_str()).collect();
                out.insert(format!("new {}({})", t.name, ps.join(", ")));
            }
        }
        for m in &t.methods {
            if m.returns != "void" && oracle.assignable(&m.returns, ty) {
                let ps: Vec<&str> = m.params.iter().map(|p| p.ty.as_str()).collect();
                out.insert(format!("{}.{}({})", t.name, m.name, ps.join(", ")));
            }
        }
        for f in &t.fields {
            if oracle.assignable(&f.ty, ty) {
                out.insert(format!("{}.{}", t.name, f.name));
            }
        }
    }
    out
}

#[test]
fn creators_match_an_exhaustive_scan_on_poi_mini() {
    let text = poi_model_text();
    let doc = ApiModelDocument::from_json(&text).unwrap();
    let g = ApiGraph::from_json(&text).unwrap();
    let oracle = TermOracle::new(&doc, &[], false);
    let cell_style: Vec<String> = g.creators_of("CellStyle").unwrap().iter().map(|c| c.key()).collect();
    assert_eq!(cell_style, vec!["Workbook.createCellStyle()"]);
    for ty in g.type_names().map(str::to_string).collect::<Vec<_>>() {
        let got: BTreeSet<String> = g.creators_of(&ty).unwrap().iter().map(|c| c.key()).collect();
        assert_eq!(got, scan_creators(&doc, &oracle, &ty), "creators of {ty}");
    }
}

#[test]
fn creators_are_sorted_by_kind_owner_member_params() {
    let g = poi_graph();
    for ty in g.type_names() {
        let c = g.creators_of(ty).unwrap();
        for w in c.windows(2) {
            let key = |x: &patternforge::graph::Creator| (x.kind, x.owner.clone(), x.member.clone(), x.params.clone());
            assert!(key(&w[0]) <= key(&w[1]), "{ty}: {} before {}", w[0].key(), w[1].key());
        }
    }
}

#[test]
fn parameter_docs_survive_in_the_graph() {
    let g = poi_graph();
    let id = g.resolve_method("CellStyle", "setFillForegroundColor", &[Some("short".into())]).unwrap();
    assert_eq!(g.node(id).method.as_ref().unwrap().params[0].doc, "the color index to set");
}

#[test]
fn cache_round_trip_on_poi_mini() {
    let text = poi_model_text();
    let g = ApiGraph::from_json(&text).unwrap();
    let cache = GraphCache::new(text.as_bytes(), g.clone());
    let back = GraphCache::from_json(&cache.to_json()).unwrap();
    assert_eq!(back.graph, g);
    assert!(back.matches(text.as_bytes()));
    assert_eq!(back.graph.creators_of("Cell").unwrap(), g.creators_of("Cell").unwrap());
}

#[test]
fn node_kinds_are_all_present() {
    let g = poi_graph();
    let kinds: BTreeSet<NodeKind> = g.declared_nodes().map(|n| n.kind).collect();
    for k in [NodeKind::Class, NodeKind::Interface, NodeKind::EnumClass, NodeKind::Method, NodeKind::Field, NodeKind::EnumConstant] {
        assert!(kinds.contains(&k), "{k:?} missing");
    }
}

/// Random hierarchy: interfaces extend earlier interfaces, classes extend
/// at most one earlier class and implement earlier interfaces.
fn hierarchy(shape: &[(bool, Vec<usize>)]) -> String {
    let mut types = Vec::new();
    for (i, (is_class, sups)) in shape.iter().enumerate() {
        let name = format!("N{i}");
        let mut extends = Vec::new();
        let mut implements = Vec::new();
        for &s in sups.iter().filter(|&&s| s < i) {
            let (sup_class, _) = &shape[s];
            match (is_class, sup_class) {
                (true, true) if extends.is_empty() => extends.push(format!("N{s}")),
                (true, false) => implements.push(format!("N{s}")),
                (false, false) => extends.push(format!("N{s}")),
                _ => {}
            }
        }
        extends.dedup();
        implements.sort();
        implements.dedup();
        extends.sort();
        extends.dedup();
        let kind = if *is_class { "class" } else { "interface" };
        types.push(serde_json::json!({"name": name, "kind": kind, "extends": extends, "implements": implements}));
    }
    serde_json::json!({ "types": types }).to_string()
}

fn dfs_reaches(doc: &ApiModelDocument, from: &str, to: &str) -> bool {
    if from == to {
        return true;
    }
    let t = doc.types.iter().find(|t| t.name == from).unwrap();
    t.extends.iter().chain(&t.implements).any(|s| dfs_reaches(doc, s, to))
}

proptest! {
    #[test]
    fn is_assignable_matches_dfs(shape in prop::collection::vec((any::<bool>(), prop::collection::vec(0usize..12, 0..3)), 1..12)) {
        let text = hierarchy(&shape);
        let doc = ApiModelDocument::from_json(&text).unwrap();
        let g = ApiGraph::from_json(&text).unwrap();
        for a in &doc.types {
            for b in &doc.types {
                prop_assert_eq!(g.is_assignable(&a.name, &b.name).unwrap(), dfs_reaches(&doc, &a.name, &b.name),
                    "{} -> {}", a.name, b.name);
            }
        }
    }

    #[test]
    fn random_models_build_deterministically(seed in any::<u64>()) {
        use rand::SeedableRng;
        let doc = random_model(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed), 20);
        let text = serde_json::to_string(&doc).unwrap();
        let a = ApiGraph::from_json(&text).unwrap();
        let b = ApiGraph::from_json(&text).unwrap();
        prop_assert_eq!(a.to_json(), b.to_json());
        prop_assert!(a.member_count() <= 20);
    }
}
