mod common;

use common::*;
use patternforge::scs::{parse_corpus_in, parse_example_in, Param};
use patternforge::session::{simulate, Choice, Engine, EngineConfig, Session, SessionError, SessionEvent};
use patternforge::ScsPattern;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

const FILL: &str = "Workbook.createCellStyle() CellStyle.setFillForegroundColor(short) \
    CellStyle.setFillPattern(FillPatternType) Cell.setCellStyle(CellStyle)";

fn fill_engine() -> (Engine, ScsPattern) {
    let g = poi_graph();
    let corpus = poi_corpus(&g);
    let p = pattern(FILL, &g);
    (Engine::new(g, corpus, vec![p.clone()], EngineConfig::default()).unwrap(), p)
}

fn ctx(pairs: &[(&str, &str)]) -> Vec<Param> {
    pairs.iter().map(|(n, t)| Param::new(*n, *t)).collect()
}

fn expr(text: &str) -> Choice {
    Choice::Expression { text: text.into() }
}

#[test]
fn fill_pattern_opens_with_four_groups() {
    let (engine, p) = fill_engine();
    let s = Session::open(&engine, "s", &p.id, ctx(&[("wb", "Workbook"), ("cell", "Cell")]), 1).unwrap();
    let view = s.view(&engine).unwrap();
    let groups: Vec<(Vec<String>, String)> = view.groups.iter().map(|g| (g.holes.clone(), g.declared_type.clone())).collect();
    let h = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    assert_eq!(
        groups,
        [
            (h(&["hole-0"]), "Workbook".to_string()),
            (h(&["hole-1", "hole-3", "hole-6"]), "CellStyle".to_string()),
            (h(&["hole-2"]), "short".to_string()),
            (h(&["hole-5"]), "Cell".to_string()),
        ]
    );
    assert_eq!(view.fixed["hole-4"], "FillPatternType.SOLID_FOREGROUND");
    assert_eq!(view.groups[2].description, "the color index to set");
    assert!(view.groups[2].accepts_constants);
    assert!(!view.complete && !view.can_undo);
    assert_eq!(view.example_count, 6);
    // Candidates are bucketed by syntax type; the context variable is a defined variable.
    let wb = &view.groups[0].buckets[&patternforge::holes::SyntaxType::DefinedVariable];
    assert_eq!(wb[0].text, "wb");
}

#[test]
fn filling_every_group_emits_code_that_reparses() {
    let (engine, p) = fill_engine();
    let context = ctx(&[("wb", "Workbook"), ("cell", "Cell")]);
    let mut s = Session::open(&engine, "s", &p.id, context.clone(), 1).unwrap();
    s.fill(&engine, 0, expr("wb")).unwrap();
    s.fill(&engine, 1, expr("v0.createCellStyle()")).unwrap();
    s.fill(&engine, 2, expr("IndexedColors.RED.getIndex()")).unwrap();
    assert!(!s.is_complete(&engine).unwrap());
    s.fill(&engine, 3, expr("cell")).unwrap();
    assert!(s.is_complete(&engine).unwrap());
    let code = s.emit(&engine).unwrap();
    assert!(code.complete);
    assert_eq!(
        code.code,
        "Workbook v0 = wb;\n\
         CellStyle v1 = v0.createCellStyle();\n\
         short v2 = IndexedColors.RED.getIndex();\n\
         v1.setFillForegroundColor(v2);\n\
         v1.setFillPattern(FillPatternType.SOLID_FOREGROUND);\n\
         Cell v3 = cell;\n\
         v3.setCellStyle(v1);\n"
    );
    let back = parse_example_in(&code.code, &engine.graph).unwrap();
    let names: BTreeSet<&str> = back.free_vars.iter().map(|f| f.name.as_str()).collect();
    assert!(names.is_subset(&context.iter().map(|p| p.name.as_str()).collect()));
    // The style group's variable: one declaration plus one use per member hole.
    assert_eq!(code.code.matches("v1").count(), 1 + 3);
}

#[test]
fn filling_the_goal_colour_never_lowers_its_score() {
    let (engine, p) = fill_engine();
    let mut s = Session::open(&engine, "s", &p.id, ctx(&[("wb", "Workbook")]), 3).unwrap();
    let data = engine.pattern_data(&p.id).unwrap();
    let goal = data
        .views
        .iter()
        .find(|v| v.group_exprs.get(&2).is_some_and(|e| e.to_string() == "IndexedColors.RED.getIndex()"))
        .expect("an example uses RED")
        .id
        .clone();
    let score = |s: &Session| s.state.ranking.entries.iter().find(|e| e.id == goal).unwrap().score;
    let before = score(&s);
    s.fill(&engine, 2, expr("IndexedColors.RED.getIndex()")).unwrap();
    assert!(score(&s) >= before);
    assert_eq!(score(&s), 1.0);
    assert_eq!(s.state.assignments[&2].text, "IndexedColors.RED.getIndex()");
}

#[test]
fn fill_errors() {
    let (engine, p) = fill_engine();
    let mut s = Session::open(&engine, "s", &p.id, ctx(&[("wb", "Workbook")]), 1).unwrap();
    assert_eq!(s.fill(&engine, 9, expr("wb")), Err(SessionError::UnknownGroup(9)));
    assert!(matches!(s.fill(&engine, 0, expr("nobody")), Err(SessionError::TypeMismatch(_))));
    assert!(matches!(s.fill(&engine, 0, expr("IndexedColors.RED")), Err(SessionError::TypeMismatch(_))));
    assert!(matches!(s.fill(&engine, 0, Choice::Constant { text: "1".into() }), Err(SessionError::TypeMismatch(_))));
    assert!(matches!(s.fill(&engine, 2, Choice::Constant { text: "\"red\"".into() }), Err(SessionError::TypeMismatch(_))));
    assert!(matches!(s.fill(&engine, 2, Choice::Constant { text: "70000".into() }), Err(SessionError::TypeMismatch(_))));
    assert!(matches!(s.fill(&engine, 0, Choice::Candidate { id: "c100000".into() }), Err(SessionError::UnknownCandidate(_))));
    assert!(matches!(s.fill(&engine, 0, Choice::Candidate { id: "x".into() }), Err(SessionError::UnknownCandidate(_))));
    assert_eq!(s.undo(&engine), Err(SessionError::NothingToUndo));
    s.fill(&engine, 2, Choice::Constant { text: "10".into() }).unwrap();
    assert_eq!(s.state.assignments[&2].text, "(short) 10");
    assert_eq!(s.fill(&engine, 2, expr("IndexedColors.RED.getIndex()")), Err(SessionError::AlreadyFilled(2)));
    s.undo(&engine).unwrap();
    s.fill(&engine, 2, expr("IndexedColors.RED.getIndex()")).unwrap();
}

#[test]
fn open_errors() {
    let (engine, p) = fill_engine();
    assert_eq!(
        Session::open(&engine, "s", "nope", vec![], 0).map(|_| ()),
        Err(SessionError::UnknownPattern("nope".into()))
    );
    assert!(matches!(Session::open(&engine, "s", &p.id, ctx(&[("x", "Nope")]), 0), Err(SessionError::ModelMismatch(_))));
    assert!(matches!(Session::open(&engine, "s", &p.id, ctx(&[("v0", "Cell")]), 0), Err(SessionError::InvalidContext(_))));
    assert!(matches!(
        Session::open(&engine, "s", &p.id, ctx(&[("a", "Cell"), ("a", "Cell")]), 0),
        Err(SessionError::InvalidContext(_))
    ));
    let g = poi_graph();
    let bad = pattern("Workbook.createCellStyle()", &g);
    let mut tampered = bad.clone();
    tampered.calls[0].method.name = "vanish".into();
    tampered.tokens = vec![patternforge::scs::SeqToken::Call(tampered.calls[0].method.clone())];
    assert!(matches!(Engine::new(g, vec![], vec![tampered], EngineConfig::default()), Err(SessionError::ModelMismatch(_))));
}

#[test]
fn zero_hole_pattern_is_born_complete() {
    let g = poi_graph();
    let p = pattern("XSSFWorkbook.<init>() DataFormatter.<init>()", &g);
    assert!(p.holes.is_empty());
    let engine = Engine::new(g, poi_corpus(&poi_graph()), vec![p.clone()], EngineConfig::default()).unwrap();
    let s = Session::open(&engine, "s", &p.id, vec![], 0).unwrap();
    assert!(s.is_complete(&engine).unwrap());
    let code = s.emit(&engine).unwrap();
    assert_eq!(code.code, "new XSSFWorkbook();\nnew DataFormatter();\n");
    assert!(code.complete);
}

#[test]
fn pattern_without_examples_keeps_every_hole_alone() {
    let g = poi_graph();
    let p = pattern("Sheet.createRow(int) Row.createCell(int)", &g);
    let engine = Engine::new(g, vec![], vec![p.clone()], EngineConfig::default()).unwrap();
    let s = Session::open(&engine, "s", &p.id, ctx(&[("sheet", "Sheet")]), 0).unwrap();
    let view = s.view(&engine).unwrap();
    assert_eq!(view.groups.len(), p.holes.len());
    assert_eq!(view.example_count, 0);
    let code = s.emit(&engine).unwrap();
    assert!(!code.complete);
    assert!(code.code.contains("⟨Sheet⟩"));
}

/// Apply random fills and undos drawn from each group's candidates.
fn random_walk(engine: &Engine, p: &ScsPattern, seed: u64) -> Session {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Session::open(engine, "w", &p.id, ctx(&[("wb", "Workbook"), ("cell", "Cell")]), seed).unwrap();
    let groups = engine.pattern_data(&p.id).unwrap().analysis.groups.len();
    for _ in 0..rng.gen_range(0..8) {
        if rng.gen_bool(0.25) {
            let _ = s.undo(engine);
            continue;
        }
        let open: Vec<usize> = (0..groups).filter(|g| !s.state.assignments.contains_key(g)).collect();
        if open.is_empty() {
            continue;
        }
        let g = open[rng.gen_range(0..open.len())];
        let k = rng.gen_range(0..3);
        s.fill(engine, g, Choice::Candidate { id: format!("c{k}") }).unwrap();
    }
    s
}

#[test]
fn undo_after_fill_restores_the_state() {
    let (engine, p) = fill_engine();
    for seed in 0..8 {
        let mut s = random_walk(&engine, &p, seed);
        let groups = engine.pattern_data(&p.id).unwrap().analysis.groups.len();
        let open: Vec<usize> = (0..groups).filter(|g| !s.state.assignments.contains_key(g)).collect();
        for g in open {
            for k in 0..3 {
                let before = s.state.clone();
                let code = s.emit(&engine).unwrap();
                s.fill(&engine, g, Choice::Candidate { id: format!("c{k}") }).unwrap();
                s.undo(&engine).unwrap();
                assert_eq!(s.state, before);
                assert_eq!(s.emit(&engine).unwrap(), code);
            }
        }
    }
}

#[test]
fn replayed_sessions_emit_identical_code() {
    let (engine, p) = fill_engine();
    for seed in 0..16 {
        let s = random_walk(&engine, &p, seed);
        let log: Vec<SessionEvent> = s
            .events
            .iter()
            .map(|e| serde_json::from_str(&serde_json::to_string(e).unwrap()).unwrap())
            .collect();
        let r = Session::replay(&engine, &log).unwrap();
        assert_eq!(r.state, s.state);
        assert_eq!(r.emit(&engine).unwrap().code, s.emit(&engine).unwrap().code);
        assert_eq!(r.view(&engine).unwrap(), s.view(&engine).unwrap());
    }
    assert!(matches!(Session::replay(&engine, &[SessionEvent::Undo]), Err(SessionError::Log(_))));
}

#[test]
fn simulation_reaches_unique_goals() {
    let g = poi_graph();
    let s = suite(&TEMPLATES[0], 100, 0, &g);
    let engine = Engine::new(g, s.corpus.clone(), vec![s.pattern.clone()], EngineConfig::default()).unwrap();
    let data = engine.pattern_data(&s.pattern.id).unwrap();
    let goals = unique_goals(&data.analysis);
    assert!(goals.len() >= 3);
    for goal in goals.iter().take(3) {
        let r = simulate(&engine, &s.pattern.id, goal, 11).unwrap();
        assert_eq!(r.trajectory.len(), data.analysis.groups.len());
        assert_eq!(r.interactions, r.trajectory.len());
        assert_eq!(r.example_count, 100);
        assert!(r.trajectory.windows(2).all(|w| w[0] >= w[1]), "{:?}", r.trajectory);
        assert!(r.trajectory.iter().all(|&k| (1..=100).contains(&k)));
        assert_eq!(r.final_rank, 1);
        assert!((r.mrr.unwrap() - direct_mrr(&r.hole_ranks)).abs() <= 1e-12);
        assert_eq!(r.response_ms.len(), r.trajectory.len());
    }
    assert!(matches!(simulate(&engine, &s.pattern.id, "missing", 0), Err(SessionError::UnknownExample(_))));
}

#[test]
fn identical_examples_rank_by_id() {
    let g = poi_graph();
    let text: String = (0..5)
        .map(|i| format!("#example same-{i} (wb:Workbook, cell:Cell)\nCellStyle s = wb.createCellStyle();\ns.setWrapText(true);\ncell.setCellStyle(s);\n#end\n"))
        .collect();
    let corpus = parse_corpus_in(&text, &g).unwrap();
    let p = pattern("Workbook.createCellStyle() CellStyle.setWrapText(boolean) Cell.setCellStyle(CellStyle)", &g);
    let engine = Engine::new(g, corpus, vec![p.clone()], EngineConfig::default()).unwrap();
    let r = simulate(&engine, &p.id, "same-3", 5).unwrap();
    assert_eq!(r.final_rank, 4);
    assert!(r.trajectory.iter().all(|&k| k == 4), "{:?}", r.trajectory);
}

#[test]
fn goal_outside_the_pattern_is_no_embedding() {
    let (engine, p) = fill_engine();
    let other = engine.corpus.iter().find(|e| e.id == "open-xlsx").unwrap().id.clone();
    assert!(matches!(simulate(&engine, &p.id, &other, 0), Err(SessionError::NoEmbedding(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn emitted_code_reparses_with_context_only(seed in any::<u64>()) {
        let (engine, p) = fill_engine();
        let s = random_walk(&engine, &p, seed);
        let code = s.emit(&engine).unwrap();
        let back = parse_example_in(&code.code, &engine.graph).unwrap();
        for f in &back.free_vars {
            prop_assert!(f.name == "wb" || f.name == "cell", "free `{}` in\n{}", f.name, code.code);
        }
        prop_assert_eq!(code.complete, !code.code.contains('⟨'));
    }
}
