//! Fixtures, generators and independent oracles shared by the integration
//! tests and the acceptance gate.
#![allow(dead_code)]

use patternforge::graph::{ApiModelDocument, DeclKind};
use patternforge::miner::build_pattern;
use patternforge::scs::{load_corpus, parse_corpus_in, Param, SeqToken};
use patternforge::{ApiGraph, ScsExample, ScsPattern};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

pub fn poi_model_text() -> String {
    std::fs::read_to_string(fixture("poi-mini.json")).unwrap()
}

pub fn poi_graph() -> ApiGraph {
    ApiGraph::from_json(&poi_model_text()).unwrap()
}

pub fn poi_corpus(g: &ApiGraph) -> Vec<ScsExample> {
    load_corpus(&fixture("corpus"), g).unwrap()
}

pub fn tokens(text: &str) -> Vec<SeqToken> {
    text.split_whitespace().map(|t| t.parse().unwrap()).collect()
}

pub fn pattern(text: &str, g: &ApiGraph) -> ScsPattern {
    build_pattern(tokens(text), 1, g).unwrap()
}

// ---------------------------------------------------------------------------
// Miner oracle

pub fn is_subsequence(a: &[u32], b: &[u32]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// All closed (or all) frequent subsequences by enumerating every
/// subsequence of every sequence and counting document support.
pub fn brute_force_mine(db: &[Vec<u32>], min_sup: usize, closed_only: bool) -> BTreeSet<(Vec<u32>, usize)> {
    let mut candidates: BTreeSet<Vec<u32>> = BTreeSet::new();
    for s in db {
        for mask in 1u32..(1 << s.len()) {
            candidates.insert((0..s.len()).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect());
        }
    }
    let frequent: Vec<(Vec<u32>, usize)> = candidates
        .into_iter()
        .map(|c| {
            let sup = db.iter().filter(|s| is_subsequence(&c, s)).count();
            (c, sup)
        })
        .filter(|(_, sup)| *sup >= min_sup.max(1))
        .collect();
    frequent
        .iter()
        .filter(|(c, sup)| {
            !closed_only
                || !frequent.iter().any(|(d, dsup)| d.len() > c.len() && dsup == sup && is_subsequence(c, d))
        })
        .cloned()
        .collect()
}

pub fn random_db(rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
    let n = rng.gen_range(1..=8);
    let alphabet = rng.gen_range(1..=6);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(0..=8);
            (0..len).map(|_| rng.gen_range(0..alphabet)).collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Clustering oracle

/// Complete-linkage agglomeration: the linkage of two clusters is the
/// minimum degree over all cross pairs of original members; clusters are
/// scanned in index order and the first pair reaching the threshold merges.
pub fn complete_linkage(d: &[Vec<f64>], threshold: f64) -> BTreeSet<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = (0..d.len()).map(|i| vec![i]).collect();
    'outer: loop {
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let link = clusters[i]
                    .iter()
                    .flat_map(|&a| clusters[j].iter().map(move |&b| d[a][b]))
                    .fold(f64::INFINITY, f64::min);
                if link >= threshold {
                    let moved = clusters.remove(j);
                    clusters[i].extend(moved);
                    continue 'outer;
                }
            }
        }
        break;
    }
    clusters
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect()
}

/// Symmetric matrix with unit diagonal; values on a coarse grid so ties
/// and threshold hits are common.
pub fn random_degree_matrix(rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = rng.gen_range(1..=8);
    let mut d = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(0..=10) as f64 / 10.0;
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

// ---------------------------------------------------------------------------
// Random API models and the enumeration oracle

const LEAF_TYPES: [&str; 3] = ["int", "String", "boolean"];

/// A random model document with at most `max_members` members.
pub fn random_model(rng: &mut ChaCha8Rng, max_members: usize) -> ApiModelDocument {
    let ntypes = rng.gen_range(2..=5);
    let kinds: Vec<DeclKind> = (0..ntypes)
        .map(|_| match rng.gen_range(0..4) {
            0 => DeclKind::Interface,
            1 => DeclKind::Enum,
            _ => DeclKind::Class,
        })
        .collect();
    let names: Vec<String> = (0..ntypes).map(|i| format!("T{i}")).collect();
    let mut value_types: Vec<String> = names.clone();
    value_types.extend(LEAF_TYPES.iter().map(|s| s.to_string()));
    let mut doc = ApiModelDocument::default();
    for i in 0..ntypes {
        let mut t: patternforge::graph::TypeDecl =
            serde_json::from_value(serde_json::json!({"name": names[i], "kind": kinds[i]})).unwrap();
        if i > 0 && rng.gen_bool(0.5) {
            let j = rng.gen_range(0..i);
            match (kinds[i], kinds[j]) {
                (DeclKind::Class, DeclKind::Class) | (DeclKind::Interface, DeclKind::Interface) => t.extends.push(names[j].clone()),
                (DeclKind::Class, DeclKind::Interface) | (DeclKind::Enum, DeclKind::Interface) => {
                    t.implements.push(names[j].clone())
                }
                _ => {}
            }
        }
        if kinds[i] == DeclKind::Enum {
            t.constants = (0..rng.gen_range(1..=2)).map(|k| format!("K{k}")).collect();
        }
        doc.types.push(t);
    }
    let mut members: usize = doc.types.iter().map(|t| t.constants.len()).sum();
    let budget = rng.gen_range(members..=max_members.max(members));
    let mut serial = 0;
    while members < budget {
        let i = rng.gen_range(0..ntypes);
        let params: Vec<serde_json::Value> = (0..rng.gen_range(0..=2))
            .map(|k| serde_json::json!({"name": format!("p{k}"), "type": value_types.choose(rng).unwrap()}))
            .collect();
        serial += 1;
        let member = match rng.gen_range(0..5) {
            0 if kinds[i] == DeclKind::Class => {
                let ctor: patternforge::graph::CtorDecl =
                    serde_json::from_value(serde_json::json!({"params": params})).unwrap();
                let sig = |c: &patternforge::graph::CtorDecl| c.params.iter().map(|p| p.ty.clone()).collect::<Vec<_>>();
                if doc.types[i].constructors.iter().any(|c| sig(c) == sig(&ctor)) {
                    continue;
                }
                doc.types[i].constructors.push(ctor);
                true
            }
            1 => {
                let f = serde_json::json!({"name": format!("f{serial}"), "type": value_types.choose(rng).unwrap(),
                                           "static": rng.gen_bool(0.3)});
                doc.types[i].fields.push(serde_json::from_value(f).unwrap());
                true
            }
            _ => {
                let returns = if rng.gen_bool(0.15) { "void".to_string() } else { value_types.choose(rng).unwrap().clone() };
                let m = serde_json::json!({"name": format!("m{serial}"), "returns": returns, "params": params,
                                           "static": rng.gen_bool(0.25)});
                doc.types[i].methods.push(serde_json::from_value(m).unwrap());
                true
            }
        };
        if member {
            members += 1;
        }
    }
    doc
}

/// Exhaustive typed-term enumeration straight from the model document.
pub struct TermOracle<'a> {
    doc: &'a ApiModelDocument,
    supers: HashMap<String, BTreeSet<String>>,
    locals: Vec<(String, String)>,
    /// Placeholder fallback at every level (`false`: placeholder-free terms only).
    placeholders: bool,
    memo: HashMap<(String, usize), BTreeSet<String>>,
}

impl<'a> TermOracle<'a> {
    pub fn new(doc: &'a ApiModelDocument, locals: &[Param], placeholders: bool) -> Self {
        let mut supers = HashMap::new();
        for t in &doc.types {
            let mut seen = BTreeSet::new();
            let mut stack: Vec<&str> = vec![&t.name];
            while let Some(x) = stack.pop() {
                if let Some(d) = doc.types.iter().find(|d| d.name == x) {
                    for s in d.extends.iter().chain(&d.implements) {
                        if seen.insert(s.clone()) {
                            stack.push(s);
                        }
                    }
                }
            }
            supers.insert(t.name.clone(), seen);
        }
        TermOracle {
            doc,
            supers,
            locals: locals.iter().map(|p| (p.name.clone(), p.ty.clone())).collect(),
            placeholders,
            memo: HashMap::new(),
        }
    }

    pub fn assignable(&self, from: &str, to: &str) -> bool {
        from == to || self.supers.get(from).is_some_and(|s| s.contains(to))
    }

    fn product(&mut self, slots: &[String], d: usize) -> Vec<Vec<String>> {
        let mut out = vec![Vec::new()];
        for s in slots {
            let terms: Vec<String> = self.terms(s, d).into_iter().collect();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    terms.iter().map(move |t| {
                        let mut p = prefix.clone();
                        p.push(t.clone());
                        p
                    })
                })
                .collect();
        }
        out
    }

    pub fn terms(&mut self, ty: &str, d: usize) -> BTreeSet<String> {
        if d == 0 {
            return BTreeSet::new();
        }
        if let Some(s) = self.memo.get(&(ty.to_string(), d)) {
            return s.clone();
        }
        let mut out = BTreeSet::new();
        for (n, t) in self.locals.clone() {
            if self.assignable(&t, ty) {
                out.insert(n);
            }
        }
        let doc = self.doc;
        for t in &doc.types {
            for c in &t.constants {
                if self.assignable(&t.name, ty) {
                    out.insert(format!("{}.{c}", t.name));
                }
            }
            for f in &t.fields {
                if !self.assignable(&f.ty, ty) {
                    continue;
                }
                if f.is_static {
                    out.insert(format!("{}.{}", t.name, f.name));
                } else {
                    for b in self.terms(&t.name, d - 1) {
                        out.insert(format!("{b}.{}", f.name));
                    }
                }
            }
            if t.kind == DeclKind::Class && self.assignable(&t.name, ty) {
                for c in &t.constructors {
                    let slots: Vec<String> = c.params.iter().map(|p| p.ty.clone()).collect();
                    for args in self.product(&slots, d - 1) {
                        out.insert(format!("new {}({})", t.name, args.join(", ")));
                    }
                }
            }
            for m in &t.methods {
                if m.returns == "void" || !self.assignable(&m.returns, ty) {
                    continue;
                }
                let mut slots: Vec<String> = Vec::new();
                if !m.is_static {
                    slots.push(t.name.clone());
                }
                slots.extend(m.params.iter().map(|p| p.ty.clone()));
                for mut parts in self.product(&slots, d - 1) {
                    let target = if m.is_static { t.name.clone() } else { parts.remove(0) };
                    out.insert(format!("{target}.{}({})", m.name, parts.join(", ")));
                }
            }
        }
        if out.is_empty() && self.placeholders {
            out.insert(format!("⟨{ty}⟩"));
        }
        self.memo.insert((ty.to_string(), d), out.clone());
        out
    }
}

pub fn random_locals(rng: &mut ChaCha8Rng, doc: &ApiModelDocument) -> Vec<Param> {
    let mut types: Vec<String> = doc.types.iter().map(|t| t.name.clone()).collect();
    types.extend(LEAF_TYPES.iter().map(|s| s.to_string()));
    (0..rng.gen_range(0..=2)).map(|k| Param::new(format!("x{k}"), types.choose(rng).unwrap().clone())).collect()
}

// ---------------------------------------------------------------------------
// Rank-promotion corpora: one generated corpus per pattern template.

pub struct Template {
    pub name: &'static str,
    pub context: &'static str,
    pub body: &'static str,
    pub slots: &'static [(&'static str, &'static [&'static str])],
    pub tokens: &'static str,
}

const WORKBOOKS: &[&str] = &["wb", "new XSSFWorkbook()", "new HSSFWorkbook()", "WorkbookFactory.create(true)"];
const COLORS: &[&str] = &[
    "IndexedColors.RED.getIndex()",
    "IndexedColors.BLUE.getIndex()",
    "IndexedColors.GREEN.getIndex()",
    "Font.COLOR_RED",
    "color",
    "(short) 10",
    "(short) 12",
];
const SHEETS: &[&str] = &["sheet", "wb.createSheet()", "wb.getSheetAt(0)", "wb.createSheet(\"Data\")"];
const SMALL_SHORTS: &[&str] = &["(short) 0", "(short) 1", "(short) 2", "(short) 3"];

pub const TEMPLATES: &[Template] = &[
    Template {
        name: "fill",
        context: "wb:Workbook, cell:Cell, other:Cell, color:short",
        body: "CellStyle style = {WB}.createCellStyle();\nstyle.setFillForegroundColor({COLOR});\nstyle.setFillPattern({FILL});\n{CELL}.setCellStyle(style);",
        slots: &[
            ("WB", WORKBOOKS),
            ("COLOR", COLORS),
            (
                "FILL",
                &[
                    "FillPatternType.SOLID_FOREGROUND",
                    "FillPatternType.FINE_DOTS",
                    "FillPatternType.BRICKS",
                    "FillPatternType.SQUARES",
                    "FillPatternType.DIAMONDS",
                    "FillPatternType.LESS_DOTS",
                ],
            ),
            ("CELL", &["cell", "other"]),
        ],
        tokens: "Workbook.createCellStyle() CellStyle.setFillForegroundColor(short) CellStyle.setFillPattern(FillPatternType) Cell.setCellStyle(CellStyle)",
    },
    Template {
        name: "font",
        context: "wb:Workbook, style:CellStyle, color:short",
        body: "Font font = {WB}.createFont();\nfont.setColor({COLOR});\nfont.setFontHeightInPoints({SIZE});\n{STYLE}.setFont(font);",
        slots: &[
            ("WB", WORKBOOKS),
            ("COLOR", &["Font.COLOR_RED", "Font.COLOR_NORMAL", "IndexedColors.RED.getIndex()", "IndexedColors.BLUE.getIndex()", "color"]),
            ("SIZE", &["(short) 9", "(short) 10", "(short) 11", "(short) 12", "(short) 14", "(short) 16"]),
            ("STYLE", &["style", "wb.createCellStyle()"]),
        ],
        tokens: "Workbook.createFont() Font.setColor(short) Font.setFontHeightInPoints(short) CellStyle.setFont(Font)",
    },
    Template {
        name: "open",
        context: "path:String, file:File, input:InputStream",
        body: "try {\n    Workbook wb = new XSSFWorkbook({STREAM});\n    Sheet sheet = wb.getSheetAt({IDX});\n    sheet.setZoom({ZOOM});\n} catch (IOException e) {\n}",
        slots: &[
            ("STREAM", &["input", "new FileInputStream(path)", "new FileInputStream(file)", "new FileInputStream(new File(path))"]),
            ("IDX", &["0", "1", "2", "3"]),
            ("ZOOM", &["50", "75", "100", "125", "150", "200"]),
        ],
        tokens: "TRY XSSFWorkbook.<init>(InputStream) Workbook.getSheetAt(int) Sheet.setZoom(int) CATCH(IOException) END-TRY",
    },
    Template {
        name: "write",
        context: "wb:Workbook, path:String, name:String",
        body: "try {\n    FileOutputStream out = new FileOutputStream({DEST});\n    {WB}.write(out);\n    out.close();\n} catch (IOException e) {\n}",
        slots: &[
            (
                "DEST",
                &[
                    "path",
                    "name",
                    "WorkbookUtil.createSafeSheetName(name)",
                    "\"out.xlsx\"",
                    "\"report.xls\"",
                    "\"summary.xlsx\"",
                    "\"q1.xlsx\"",
                    "\"q2.xlsx\"",
                    "\"q3.xlsx\"",
                    "\"q4.xlsx\"",
                    "\"budget.xls\"",
                    "\"export.xlsx\"",
                    "\"backup.xlsx\"",
                    "\"archive.xls\"",
                    "\"daily.xlsx\"",
                    "\"weekly.xlsx\"",
                    "\"monthly.xlsx\"",
                    "\"totals.xlsx\"",
                    "\"draft.xls\"",
                    "\"final.xlsx\"",
                ],
            ),
            ("WB", &["wb", "new XSSFWorkbook()", "new HSSFWorkbook()"]),
        ],
        tokens: "TRY FileOutputStream.<init>(String) Workbook.write(OutputStream) OutputStream.close() CATCH(IOException) END-TRY",
    },
    Template {
        name: "merge",
        context: "sheet:Sheet, wb:Workbook",
        body: "Sheet s = {SHEET};\ns.addMergedRegion(new CellRangeAddress({R1}, {R2}, {C1}, {C2}));\ns.setColumnWidth({C3}, {W});",
        slots: &[
            ("SHEET", SHEETS),
            ("R1", &["0", "1", "2"]),
            ("R2", &["3", "4", "5", "6"]),
            ("C1", &["0", "1", "2"]),
            ("C2", &["7", "8", "9", "10"]),
            ("C3", &["0", "1", "2", "3", "4"]),
            ("W", &["2000", "3000", "4000", "5000", "6000"]),
        ],
        tokens: "CellRangeAddress.<init>(int,int,int,int) Sheet.addMergedRegion(CellRangeAddress) Sheet.setColumnWidth(int,int)",
    },
    Template {
        name: "row",
        context: "sheet:Sheet, wb:Workbook, style:CellStyle, name:String",
        body: "Row row = {SHEET}.createRow({R});\nCell cell = row.createCell({C});\ncell.setCellValue({TEXT});\ncell.setCellStyle({STYLE});",
        slots: &[
            ("SHEET", SHEETS),
            ("R", &["0", "1", "2", "3", "4", "5"]),
            ("C", &["0", "1", "2", "3", "4", "5"]),
            ("TEXT", &["name", "\"Name\"", "\"Total\"", "\"ID\"", "\"Date\""]),
            ("STYLE", &["style", "wb.createCellStyle()"]),
        ],
        tokens: "Sheet.createRow(int) Row.createCell(int) Cell.setCellValue(String) Cell.setCellStyle(CellStyle)",
    },
    Template {
        name: "borders",
        context: "wb:Workbook, color:short",
        body: "CellStyle style = {WB}.createCellStyle();\nstyle.setBorderBottom({B1});\nstyle.setBorderTop({B2});\nstyle.setBottomBorderColor({COLOR});",
        slots: &[
            ("WB", WORKBOOKS),
            ("B1", &["BorderStyle.THIN", "BorderStyle.MEDIUM", "BorderStyle.DASHED", "BorderStyle.DOTTED", "BorderStyle.THICK", "BorderStyle.DOUBLE"]),
            ("B2", &["BorderStyle.THIN", "BorderStyle.MEDIUM", "BorderStyle.DASHED", "BorderStyle.DOTTED", "BorderStyle.THICK", "BorderStyle.HAIR"]),
            ("COLOR", COLORS),
        ],
        tokens: "Workbook.createCellStyle() CellStyle.setBorderBottom(BorderStyle) CellStyle.setBorderTop(BorderStyle) CellStyle.setBottomBorderColor(short)",
    },
    Template {
        name: "link",
        context: "wb:Workbook, helper:CreationHelper, cell:Cell, other:Cell, url:String",
        body: "Hyperlink link = {HELPER}.createHyperlink({KIND});\nlink.setAddress({ADDR});\n{CELL}.setHyperlink(link);",
        slots: &[
            ("HELPER", &["helper", "wb.getCreationHelper()", "new XSSFWorkbook().getCreationHelper()"]),
            ("KIND", &["HyperlinkType.URL", "HyperlinkType.DOCUMENT", "HyperlinkType.EMAIL", "HyperlinkType.FILE"]),
            ("ADDR", &["url", "\"https://poi.apache.org/\"", "\"mailto:team@example.org\"", "\"Sheet2!A1\""]),
            ("CELL", &["cell", "other"]),
        ],
        tokens: "CreationHelper.createHyperlink(HyperlinkType) Hyperlink.setAddress(String) Cell.setHyperlink(Hyperlink)",
    },
    Template {
        name: "align",
        context: "wb:Workbook, cell:Cell, other:Cell",
        body: "CellStyle style = {WB}.createCellStyle();\nstyle.setAlignment({HA});\nstyle.setVerticalAlignment({VA});\n{CELL}.setCellStyle(style);",
        slots: &[
            ("WB", WORKBOOKS),
            ("HA", &["HorizontalAlignment.LEFT", "HorizontalAlignment.CENTER", "HorizontalAlignment.RIGHT", "HorizontalAlignment.JUSTIFY", "HorizontalAlignment.FILL"]),
            ("VA", &["VerticalAlignment.TOP", "VerticalAlignment.CENTER", "VerticalAlignment.BOTTOM", "VerticalAlignment.JUSTIFY"]),
            ("CELL", &["cell", "other"]),
        ],
        tokens: "Workbook.createCellStyle() CellStyle.setAlignment(HorizontalAlignment) CellStyle.setVerticalAlignment(VerticalAlignment) Cell.setCellStyle(CellStyle)",
    },
    Template {
        name: "comment",
        context: "wb:Workbook, sheet:Sheet, drawing:Drawing, anchor:ClientAnchor, author:String",
        body: "Comment comment = {DRAWING}.createCellComment({ANCHOR});\ncomment.setString({TEXT});\ncomment.setAuthor({AUTHOR});",
        slots: &[
            ("DRAWING", &["drawing", "sheet.createDrawingPatriarch()"]),
            ("ANCHOR", &["anchor", "wb.getCreationHelper().createClientAnchor()"]),
            (
                "TEXT",
                &[
                    "new XSSFRichTextString(\"note\")",
                    "new XSSFRichTextString(\"todo\")",
                    "new HSSFRichTextString(\"check\")",
                    "wb.getCreationHelper().createRichTextString(\"seen\")",
                ],
            ),
            ("AUTHOR", &["author", "\"auditor\"", "\"admin\"", "\"reviewer\""]),
        ],
        tokens: "Drawing.createCellComment(ClientAnchor) Comment.setString(RichTextString) Comment.setAuthor(String)",
    },
    Template {
        name: "print",
        context: "sheet:Sheet, wb:Workbook",
        body: "PrintSetup ps = {SHEET}.getPrintSetup();\nps.setPaperSize({PAPER});\nps.setFitWidth({FW});\nps.setFitHeight({FH});",
        slots: &[
            ("SHEET", &["sheet", "wb.getSheetAt(0)", "wb.createSheet()"]),
            ("PAPER", &["PrintSetup.A4_PAPERSIZE", "PrintSetup.LETTER_PAPERSIZE", "(short) 9", "(short) 5"]),
            ("FW", SMALL_SHORTS),
            ("FH", SMALL_SHORTS),
        ],
        tokens: "Sheet.getPrintSetup() PrintSetup.setPaperSize(short) PrintSetup.setFitWidth(short) PrintSetup.setFitHeight(short)",
    },
];

/// Corpus text of `n` examples drawn from a template with a fixed seed.
pub fn generate_corpus_text(t: &Template, n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for i in 0..n {
        let mut body = t.body.to_string();
        for (slot, choices) in t.slots {
            body = body.replace(&format!("{{{slot}}}"), choices.choose(&mut rng).unwrap());
        }
        out.push_str(&format!("#example {}-{i:03} ({})\n{body}\n#end\n\n", t.name, t.context));
    }
    out
}

pub struct Suite {
    pub name: &'static str,
    pub pattern: ScsPattern,
    pub corpus: Vec<ScsExample>,
}

pub fn suite(t: &Template, n: usize, seed: u64, g: &ApiGraph) -> Suite {
    let corpus = parse_corpus_in(&generate_corpus_text(t, n, seed), g).unwrap();
    let pattern = build_pattern(tokens(t.tokens), corpus.len(), g).unwrap();
    Suite { name: t.name, pattern, corpus }
}

/// Examples whose tuple of group expressions occurs exactly once.
pub fn unique_goals(analysis: &patternforge::holes::Analysis) -> Vec<String> {
    let tuple = |e: usize| -> Vec<String> {
        analysis
            .groups
            .iter()
            .map(|g| analysis.example_group_expr(e, g.index).map(ToString::to_string).unwrap_or_default())
            .collect()
    };
    let n = analysis.resolutions.examples.len();
    let mut counts: BTreeMap<Vec<String>, usize> = BTreeMap::new();
    for e in 0..n {
        *counts.entry(tuple(e)).or_default() += 1;
    }
    (0..n).filter(|&e| counts[&tuple(e)] == 1).map(|e| analysis.resolutions.examples[e].clone()).collect()
}

/// Mean reciprocal rank written out directly.
pub fn direct_mrr(ranks: &[Option<usize>]) -> f64 {
    let reciprocal: Vec<f64> = ranks.iter().map(|r| r.map_or(0.0, |k| 1.0 / k as f64)).collect();
    reciprocal.iter().sum::<f64>() / reciprocal.len() as f64
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

// ---------------------------------------------------------------------------
// Random corpora for the miner oracle: `a.m<k>();` statements over one type.

pub const MINER_MODEL: &str = r#"{"types":[{"name":"A","kind":"class","methods":[
    {"name":"m0"},{"name":"m1"},{"name":"m2"},{"name":"m3"},{"name":"m4"},{"name":"m5"}]}]}"#;

pub fn db_corpus(db: &[Vec<u32>], g: &ApiGraph) -> Vec<ScsExample> {
    let text: String = db
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let body: String = s.iter().map(|k| format!("a.m{k}();\n")).collect();
            format!("#example e{i} (a:A)\n{body}#end\n")
        })
        .collect();
    parse_corpus_in(&text, g).unwrap()
}

/// Token text of a mined sequence over the miner model.
pub fn db_tokens(seq: &[u32]) -> Vec<String> {
    seq.iter().map(|k| format!("A.m{k}()")).collect()
}

pub const SUPPORT_FRACTIONS: [f64; 6] = [0.05, 0.2, 0.34, 0.5, 0.75, 1.0];
