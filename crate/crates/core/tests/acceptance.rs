//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines always show up in `cargo test` output.

mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use dolc::adapters::clif::ClifSentence;
use dolc::adapters::manchester::{Characteristic, ClassExpr, ManchesterAxiom};
use dolc::adapters::prop::Formula;
use dolc::adapters::turtle::{isomorphic, RdfTerm, RdfTriple};
use dolc::adapters::AdapterRegistry;
use dolc::analyzer::{analyze, check_interpretation, Analysis, AnalyzerOptions, Verdict};
use dolc::iri::{expand, Curie, Iri};
use dolc::known;
use dolc::model::{
    BasicOntologyBlock, DistributedOntology, Entity, EntityKind, Item, Link, LinkPayload, LogicDeclaration,
    OntologyDefinition, OntologyExpression, SentenceForm, SignatureAndSentences,
};
use dolc::parser::{dump_ast, parse_document};
use dolc::registry::{MappingKind, MappingLevel, RegistryGraph};
use dolc::serialize::{emit, print_text, read_structural_rdf, EmissionOptions, Format};
use dolc::translate::{apply_translation, TranslationImpl};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LISTINGS: [&str; 4] = ["listing1", "listing2", "listing3", "listing4"];

/// Wall-clock limits, checked in whatever profile the suite is built in.
const PARSE_LIMIT: Duration = Duration::from_secs(1);
const INTERPRETATION_LIMIT: Duration = Duration::from_millis(10);
const SOUNDNESS_LIMIT: Duration = Duration::from_secs(30);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(golden(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn iri(s: &str) -> Iri {
    Iri::parse(s).unwrap()
}

fn analyzed(name: &str, lossy: bool) -> Analysis {
    let p = parse_document(&read(name));
    assert!(!p.has_errors(), "{name} does not parse");
    let opts = AnalyzerOptions { include_path: vec![golden("")], lossy };
    analyze(&p.document, Some(&p.source_map), &RegistryGraph::builtin(), &AdapterRegistry::builtin(), &opts)
}

fn analyze_text(text: &str) -> Analysis {
    let p = parse_document(text);
    assert!(!p.has_errors(), "{:?}", p.diagnostics);
    analyze(&p.document, Some(&p.source_map), &RegistryGraph::builtin(), &AdapterRegistry::builtin(), &AnalyzerOptions::default())
}

// ---- 1 ----------------------------------------------------------------------

fn normalize_blocks(doc: &mut DistributedOntology) {
    for item in &mut doc.items {
        if let Item::Definition(d) = item {
            d.body.walk_mut(&mut |e| {
                if let OntologyExpression::Inline(b) = e {
                    b.text = b.text.split_whitespace().collect::<Vec<_>>().join(" ");
                }
            });
        }
    }
}

/// listing4.dol as a tree written out by hand.
fn listing4_by_hand() -> DistributedOntology {
    let lang = |s: &str| Some(iri(&format!("{}{s}", known::LANGUAGES)));
    let ser = |s: &str| Some(iri(&format!("{}{s}", known::SERIALIZATIONS)));
    let pizza = "http://www.co-ode.org/ontologies/pizza/pizza.owl#";
    let productdb = "http://productdb.org/ean/";
    let r = |s: &str| OntologyExpression::Reference(iri(s));
    let decl = |language, serialization| LogicDeclaration { language, logic: None, serialization };
    let turtle = OntologyExpression::Inline(BasicOntologyBlock::new(
        decl(lang("RDF"), ser("RDF/Turtle")),
        "productdb:4001724819806 pizza:hasTopping [ a pizza:TomatoTopping ], [ a pizza:MozzarellaTopping ] .",
    ));
    let manchester = OntologyExpression::Inline(BasicOntologyBlock::new(
        decl(lang("OWL2/DL"), ser("OWL2/Manchester")),
        "Individual: productdb:4001724819806 Types: pizza:hasTopping exactly 2",
    ));
    let body = OntologyExpression::Projection { base: Box::new(r(pizza)), mapping: iri(&format!("{}OWL2DLtoRDF", known::PROJECTIONS)) }
        .and(r(productdb))
        .then(OntologyExpression::ContextShift {
            decl: decl(lang("RDF"), ser("RDF/Turtle")),
            inner: Box::new(OntologyExpression::Translation {
                base: Box::new(turtle),
                mapping: Some(iri(&format!("{}RDFtoOWL2DL", known::TRANSLATIONS))),
                renames: vec![],
            }),
        })
        .then(r(pizza).then(OntologyExpression::ContextShift { decl: decl(None, ser("OWL2/Manchester")), inner: Box::new(manchester) }));
    let mut doc = DistributedOntology { iri: Some(iri("http://www.example.org/freezer#Freezer")), ..Default::default() };
    for (l, ns) in [
        ("", "http://www.example.org/freezer#"),
        ("lang", known::LANGUAGES),
        ("ser", known::SERIALIZATIONS),
        ("trans", known::TRANSLATIONS),
        ("proj", known::PROJECTIONS),
        ("pizza", pizza),
        ("productdb", productdb),
    ] {
        doc.prefixes.bind(l, ns);
    }
    doc.items.push(Item::Logic(decl(lang("OWL2/DL"), None)));
    doc.items.push(Item::Definition(OntologyDefinition { iri: iri("http://www.example.org/freezer#FreezerInMyHome"), body }));
    doc
}

fn golden_parsing() -> Outcome {
    let texts: Vec<(String, String)> = LISTINGS.iter().map(|n| (read(&format!("{n}.dol")), read(&format!("{n}.ast")))).collect();
    let start = Instant::now();
    let parsed: Vec<_> = texts.iter().map(|(dol, _)| parse_document(dol)).collect();
    let elapsed = start.elapsed();
    for ((n, (_, ast)), p) in LISTINGS.iter().zip(&texts).zip(&parsed) {
        let errors = p.diagnostics.iter().filter(|d| d.is_error()).count();
        ensure!(errors == 0, "{n}: {errors} parse errors");
        ensure!(&dump_ast(&p.document) == ast, "{n}: AST dump differs from the golden tree");
    }
    let mut l4 = parsed[3].document.clone();
    normalize_blocks(&mut l4);
    ensure!(l4 == listing4_by_hand(), "listing4 model differs from the hand-built tree");
    ensure!(elapsed < PARSE_LIMIT, "parsing took {elapsed:?}");
    Ok(format!("4 listings, 0 errors, dumps match, listing 4 matches hand-built tree, {elapsed:?}"))
}

// ---- 2 ----------------------------------------------------------------------

fn iri_expansion() -> Outcome {
    let p = parse_document(&read("listing1.dol"));
    let curie = Curie::parse(":Mereology").map_err(|e| e.to_string())?;
    let expanded = expand(&curie, &p.document.prefixes).map_err(|e| e.to_string())?;
    ensure!(expanded.as_str() == "http://www.example.org/mereology#Mereology", "expanded to {expanded}");
    let a = analyzed("listing1.dol", false);
    let ld = emit(&a.document, &EmissionOptions::new(Format::LinkedData)).map_err(|e| e.to_string())?;
    let triples = read_structural_rdf(&ld).map_err(|e| e.to_string())?;
    let wanted = RdfTerm::Iri(iri("http://www.example.org/mereology#isAtomicPartOf"));
    let described = triples.iter().filter(|t| t.subject == wanted).count();
    ensure!(described > 0, "linked data has no subject {wanted:?}");
    Ok(format!(":Mereology -> {expanded}; isAtomicPartOf described by {described} triples"))
}

// ---- 3 ----------------------------------------------------------------------

fn block_of<'a>(a: &'a Analysis, def: &str) -> &'a SignatureAndSentences {
    let d = a.document.definition(&iri(&format!("http://www.example.org/mereology#{def}"))).unwrap();
    d.body.blocks()[0].extracted.as_ref().unwrap_or_else(|| panic!("{def} not extracted"))
}

fn extraction_counts() -> Outcome {
    let a = analyzed("listing1.dol", false);
    let tax = block_of(&a, "Taxonomy");
    let props = tax.entities.values().filter(|e| e.kind == EntityKind::Proposition).count();
    ensure!(props == 5 && tax.sentences.len() == 3, "Taxonomy: {props} propositions, {} sentences", tax.sentences.len());

    let bp = block_of(&a, "BasicParthood");
    let ops: Vec<&Entity> = bp.entities.values().filter(|e| e.kind == EntityKind::ObjectProperty && e.declared).collect();
    let has = |c: Characteristic| {
        bp.sentences.iter().any(|s| matches!(&s.form, SentenceForm::Owl(ManchesterAxiom::Characteristic(_, x)) if *x == c))
    };
    ensure!(ops.len() >= 2, "BasicParthood: {} declared object properties", ops.len());
    ensure!(has(Characteristic::Transitive) && has(Characteristic::Asymmetric), "missing a characteristic");

    let cl = a.document.definition(&iri("http://www.example.org/mereology#ClassicalExtensionalParthood")).unwrap();
    let block = cl.body.blocks().into_iter().find(|b| b.extracted.is_some()).ok_or("CL block not extracted")?;
    let sig = block.extracted.as_ref().unwrap();
    let depth = sig
        .sentences
        .iter()
        .filter_map(|s| match &s.form {
            SentenceForm::Clif(c) => Some(oracle::cl_depth(c)),
            _ => None,
        })
        .max()
        .unwrap_or(0);
    ensure!(!sig.sentences.is_empty() && depth >= 3, "CL block: {} sentences, depth {depth}", sig.sentences.len());
    Ok(format!(
        "Taxonomy 5 propositions/3 sentences; BasicParthood {} object properties, Transitive+Asymmetric; CL {} sentence(s), depth {depth}",
        ops.len(),
        sig.sentences.len()
    ))
}

// ---- 4 ----------------------------------------------------------------------

fn renamed(f: &Formula, map: &BTreeMap<Iri, Iri>) -> Formula {
    let r = |x: &Formula| Box::new(renamed(x, map));
    match f {
        Formula::Atom(a) => Formula::Atom(map.get(a).cloned().unwrap_or_else(|| a.clone())),
        Formula::Not(x) => Formula::Not(r(x)),
        Formula::And(xs) => Formula::And(xs.iter().map(|x| renamed(x, map)).collect()),
        Formula::Or(xs) => Formula::Or(xs.iter().map(|x| renamed(x, map)).collect()),
        Formula::Implies(a, b) => Formula::Implies(r(a), r(b)),
        Formula::Iff(a, b) => Formula::Iff(r(a), r(b)),
        other => other.clone(),
    }
}

fn boolean(c: &ClassExpr) -> bool {
    match c {
        ClassExpr::Thing | ClassExpr::Nothing | ClassExpr::Class(_) => true,
        ClassExpr::And(xs) | ClassExpr::Or(xs) => xs.iter().all(boolean),
        ClassExpr::Not(x) => boolean(x),
        _ => false,
    }
}

fn boolean_axiom(a: &ManchesterAxiom) -> bool {
    match a {
        ManchesterAxiom::SubClassOf(c, d) => boolean(c) && boolean(d),
        ManchesterAxiom::EquivalentTo(_, d) => boolean(d),
        ManchesterAxiom::DisjointUnionOf(_, ps) => ps.iter().all(boolean),
        _ => false,
    }
}

fn owl_axioms(s: &SignatureAndSentences) -> Vec<ManchesterAxiom> {
    s.sentences
        .iter()
        .filter_map(|x| match &x.form {
            SentenceForm::Owl(a) => Some(a.clone()),
            _ => None,
        })
        .collect()
}

fn prop_formulas(s: &SignatureAndSentences) -> Vec<Formula> {
    s.sentences
        .iter()
        .filter_map(|x| match &x.form {
            SentenceForm::Prop(f) => Some(f.clone()),
            _ => None,
        })
        .collect()
}

/// Every assignment to the names involved that satisfies the boolean target
/// axioms must satisfy the renamed source formulas. Returns the names and,
/// if the claim fails, a falsifying assignment.
fn entailment_oracle(
    source: &[Formula],
    target: &[ManchesterAxiom],
    map: &BTreeMap<Iri, Iri>,
) -> (Vec<Iri>, usize, Option<BTreeMap<Iri, bool>>) {
    let premises: Vec<&ManchesterAxiom> = target.iter().filter(|a| boolean_axiom(a)).collect();
    let conclusions: Vec<Formula> = source.iter().map(|f| renamed(f, map)).collect();
    let mut names = BTreeSet::new();
    for a in &premises {
        names.extend(a.class_names());
    }
    conclusions.iter().for_each(|f| oracle::prop_atoms(f, &mut names));
    let names: Vec<Iri> = names.into_iter().collect();
    let mut models = 0;
    for v in oracle::assignments(&names) {
        let m = pointwise(&v);
        if premises.iter().all(|a| oracle::dl_holds(a, &m)) {
            models += 1;
            if !conclusions.iter().all(|f| oracle::prop_eval(f, &|i| v[i])) {
                return (names, models, Some(v));
            }
        }
    }
    (names, models, None)
}

fn pointwise(v: &BTreeMap<Iri, bool>) -> oracle::Model {
    oracle::Model {
        n: 1,
        sets: v.iter().map(|(k, b)| (k.clone(), u32::from(*b))).collect(),
        elements: Default::default(),
        empty_roles: true,
    }
}

fn rename_map(link: &Link) -> BTreeMap<Iri, Iri> {
    match &link.payload {
        LinkPayload::SymbolMap(m) => m.renames.iter().map(|r| (r.from.clone(), r.to.clone())).collect(),
        _ => BTreeMap::new(),
    }
}

fn interpretation_verification() -> Outcome {
    let registry = RegistryGraph::builtin();
    let a = analyzed("listing1.dol", false);
    let m = |s: &str| iri(&format!("http://www.example.org/mereology#{s}"));
    let link = a.document.link(&m("TaxonomyToParthood")).ok_or("no TaxonomyToParthood")?.clone();
    let source = &a.definition_node(&m("Taxonomy")).unwrap().content;
    let target = &a.definition_node(&m("BasicParthood")).unwrap().content;

    let mut best = Duration::MAX;
    let mut report = None;
    for _ in 0..5 {
        let start = Instant::now();
        let (r, _) = check_interpretation(&link, source, target, &registry);
        best = best.min(start.elapsed());
        report = Some(r);
    }
    let report = report.unwrap();
    let (names, models, counter) = entailment_oracle(&prop_formulas(source), &owl_axioms(target), &rename_map(&link));
    let expected: BTreeSet<Iri> =
        ["Particular", "ParticularCategory", "SpaceRegion", "TimeInterval", "AbstractRegion", "Perdurant"].map(m).into();
    ensure!(names.iter().cloned().collect::<BTreeSet<_>>() == expected, "oracle ranged over {names:?}");
    ensure!(counter.is_none(), "oracle refutes TaxonomyToParthood: {counter:?}");
    ensure!(report.verdict == Verdict::Verified, "pipeline says {}", report.verdict.as_str());
    ensure!(best < INTERPRETATION_LIMIT, "check took {best:?}");

    // S ↦ Atom
    let mut mutated = link.clone();
    if let LinkPayload::SymbolMap(sm) = &mut mutated.payload {
        for r in &mut sm.renames {
            if r.from == m("S") {
                r.to = m("Atom");
            }
        }
    }
    let (oracle_names, _, oracle_counter) = entailment_oracle(&prop_formulas(source), &owl_axioms(target), &rename_map(&mutated));
    ensure!(oracle_counter.is_some(), "oracle finds no counter-assignment for S -> Atom");
    let (bad, _) = check_interpretation(&mutated, source, target, &registry);
    ensure!(bad.verdict == Verdict::Refuted, "S -> Atom: pipeline says {}", bad.verdict.as_str());
    let ca = bad.counter_assignment.as_ref().ok_or("refuted without a counter-assignment")?;
    let v: BTreeMap<Iri, bool> = ca.iter().map(|(k, b)| (iri(k), *b)).collect();
    let model = pointwise(&v);
    ensure!(owl_axioms(target).iter().all(|ax| oracle::dl_holds(ax, &model)), "counter-assignment violates the target");
    let conclusions: Vec<Formula> = prop_formulas(source).iter().map(|f| renamed(f, &rename_map(&mutated))).collect();
    ensure!(
        conclusions.iter().any(|f| !oracle::prop_eval(f, &|i| v.get(i).copied().unwrap_or(false))),
        "counter-assignment satisfies every translated axiom"
    );
    let shown: Vec<String> = v.iter().filter(|(_, b)| **b).map(|(k, _)| k.local_name().to_owned()).collect();
    Ok(format!(
        "verified ({} names, {models} target models of 2^{}), {best:?}; S->Atom refuted (oracle over {} names), counter-assignment true: {{{}}}",
        names.len(),
        names.len(),
        oracle_names.len(),
        shown.join(", ")
    ))
}

// ---- 5 ----------------------------------------------------------------------

fn registry_inference() -> Outcome {
    let g = RegistryGraph::builtin();
    let k = |s: &str| iri(s);
    let t = g
        .infer_triple(Some(&k(&format!("{}OWL2/DL", known::LANGUAGES))), None, Some(&k(known::SER_OWL2_MANCHESTER)))
        .map_err(|e| e.to_string())?;
    ensure!(t.logic.as_str() == known::LOGIC_SROIQ, "OWL2/DL + Manchester -> {}", t.logic);
    let t = g
        .infer_triple(None, Some(&k(known::LOGIC_PROPOSITIONAL)), Some(&k(known::SER_PROP_HETS)))
        .map_err(|e| e.to_string())?;
    ensure!(t.language.as_str() == format!("{}Propositional", known::LANGUAGES), "Propositional + Prop/Hets -> {}", t.language);

    let path = |s: &str, t: &str| -> Result<Vec<String>, String> {
        Ok(g.default_translation(&k(s), &k(t)).map_err(|e| e.to_string())?.iter().map(|m| m.iri.to_string()).collect())
    };
    let direct = path(known::LOGIC_PROPOSITIONAL, known::LOGIC_SROIQ)?;
    ensure!(direct == [known::TRANS_PROPOSITIONAL_TO_SROIQ], "Propositional -> SROIQ: {direct:?}");
    let two = path(known::LOGIC_PROPOSITIONAL, known::LOGIC_COMMON_LOGIC)?;
    ensure!(two == [known::TRANS_PROPOSITIONAL_TO_SROIQ, known::TRANS_SROIQ_TO_CL], "Propositional -> CL: {two:?}");

    // every path of default logic-level translations up to length 3
    let edges: Vec<(Iri, Iri, Iri)> = g
        .mappings
        .values()
        .filter(|m| m.default && m.kind == MappingKind::Translation && m.level == MappingLevel::Logic)
        .map(|m| (m.source.clone(), m.target.clone(), m.iri.clone()))
        .collect();
    let (from, to) = (k(known::LOGIC_PROPOSITIONAL), k(known::LOGIC_COMMON_LOGIC));
    let mut paths: Vec<Vec<String>> = Vec::new();
    let mut stack: Vec<(Iri, Vec<String>, Vec<Iri>)> = vec![(from.clone(), vec![], vec![from.clone()])];
    while let Some((at, path, seen)) = stack.pop() {
        if at == to {
            paths.push(path);
            continue;
        }
        if path.len() == 3 {
            continue;
        }
        for (s, t, m) in &edges {
            if s == &at && !seen.contains(t) {
                let mut p = path.clone();
                p.push(m.to_string());
                let mut sn = seen.clone();
                sn.push(t.clone());
                stack.push((t.clone(), p, sn));
            }
        }
    }
    let shortest = paths.iter().map(Vec::len).min().ok_or("no path found by enumeration")?;
    let minimal: Vec<&Vec<String>> = paths.iter().filter(|p| p.len() == shortest).collect();
    ensure!(minimal.len() == 1 && *minimal[0] == two, "enumeration found shortest paths {minimal:?}");
    Ok(format!(
        "SROIQ, Propositional, PropositionalToSROIQ, 2-edge path unique among {} enumerated paths (length <= 3)",
        paths.len()
    ))
}

// ---- 6 ----------------------------------------------------------------------

fn translation_soundness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d01c);
    let to_sroiq = TranslationImpl::builtin(&iri(known::TRANS_PROPOSITIONAL_TO_SROIQ)).map_err(|e| e.to_string())?;
    let to_cl = TranslationImpl::builtin(&iri(known::TRANS_SROIQ_TO_CL)).map_err(|e| e.to_string())?;
    let name = |p: &str, i: usize| iri(&format!("http://example.org/r#{p}{i}"));

    let mut prop_counts = [0usize; 2];
    for case in 0..100 {
        let atoms: Vec<Iri> = (0..rng.gen_range(1..=5)).map(|i| name("p", i)).collect();
        let formulas: Vec<Formula> = (0..rng.gen_range(1..=6)).map(|_| oracle::random_formula(&mut rng, &atoms, 3)).collect();
        let mut sig = SignatureAndSentences::empty(iri(known::LOGIC_PROPOSITIONAL));
        for a in &atoms {
            sig.add_entity(Entity { iri: a.clone(), kind: EntityKind::Proposition, declared: true }).unwrap();
        }
        for f in &formulas {
            sig.push_sentence(SentenceForm::Prop(f.clone()), None);
        }
        let out = apply_translation(&to_sroiq, &sig).map_err(|e| format!("case {case}: {e}"))?;
        let source_sat = oracle::prop_sat(&formulas);
        let target_sat = oracle::dl_sat_upto(&owl_axioms(&out), 2);
        ensure!(source_sat == target_sat, "propositional case {case}: source sat {source_sat}, target sat {target_sat}");
        prop_counts[usize::from(source_sat)] += 1;
    }

    let mut dl_counts = [0usize; 2];
    for case in 0..50 {
        let classes: Vec<Iri> = (0..rng.gen_range(1..=3)).map(|i| name("C", i)).collect();
        let individuals: Vec<Iri> = (0..rng.gen_range(1..=2)).map(|i| name("i", i)).collect();
        let axioms: Vec<ManchesterAxiom> =
            (0..rng.gen_range(1..=4)).map(|_| oracle::random_axiom(&mut rng, &classes, &individuals)).collect();
        let mut sig = SignatureAndSentences::empty(iri(known::LOGIC_SROIQ));
        for c in &classes {
            sig.add_entity(Entity { iri: c.clone(), kind: EntityKind::Class, declared: true }).unwrap();
        }
        for i in &individuals {
            sig.add_entity(Entity { iri: i.clone(), kind: EntityKind::Individual, declared: true }).unwrap();
        }
        for a in &axioms {
            sig.push_sentence(SentenceForm::Owl(a.clone()), None);
        }
        let out = apply_translation(&to_cl, &sig).map_err(|e| format!("case {case}: {e}"))?;
        let sentences: Vec<ClifSentence> = out
            .sentences
            .iter()
            .filter_map(|s| match &s.form {
                SentenceForm::Clif(c) => Some(c.clone()),
                _ => None,
            })
            .collect();
        ensure!(sentences.len() == axioms.len(), "case {case}: {} axioms became {} sentences", axioms.len(), sentences.len());
        let source_sat = oracle::dl_sat_upto(&axioms, 3);
        let target_sat = oracle::cl_sat_upto(&sentences, 3);
        ensure!(source_sat == target_sat, "Manchester case {case}: source sat {source_sat}, target sat {target_sat}");
        dl_counts[usize::from(source_sat)] += 1;
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < SOUNDNESS_LIMIT, "took {elapsed:?}");
    Ok(format!(
        "100/100 propositional agree ({} sat, {} unsat); 50/50 Manchester agree ({} sat, {} unsat); {elapsed:?}",
        prop_counts[1], prop_counts[0], dl_counts[1], dl_counts[0]
    ))
}

// ---- 7 ----------------------------------------------------------------------

fn blank(s: &str) -> RdfTerm {
    RdfTerm::Blank(s.into())
}

fn triple(s: RdfTerm, p: &str, o: RdfTerm) -> RdfTriple {
    RdfTriple::new(s, iri(&format!("http://example.org/g#{p}")), o)
}

fn iso_pairs() -> Vec<(Vec<RdfTriple>, Vec<RdfTriple>, bool)> {
    let n = |s: &str| RdfTerm::Iri(iri(&format!("http://example.org/g#{s}")));
    let (a, b, c, x, y, z) = (blank("a"), blank("b"), blank("c"), blank("x"), blank("y"), blank("z"));
    vec![
        // renaming only
        (vec![triple(a.clone(), "p", b.clone()), triple(b.clone(), "p", a.clone())], vec![triple(x.clone(), "p", y.clone()), triple(y.clone(), "p", x.clone())], true),
        (
            vec![triple(n("s"), "p", a.clone()), triple(a.clone(), "q", RdfTerm::literal("1")), triple(a.clone(), "q", b.clone())],
            vec![triple(n("s"), "p", y.clone()), triple(y.clone(), "q", RdfTerm::literal("1")), triple(y.clone(), "q", x.clone())],
            true,
        ),
        (
            vec![triple(a.clone(), "p", b.clone()), triple(b.clone(), "p", c.clone()), triple(c.clone(), "p", a.clone())],
            vec![triple(z.clone(), "p", x.clone()), triple(x.clone(), "p", y.clone()), triple(y.clone(), "p", z.clone())],
            true,
        ),
        (vec![], vec![], true),
        // same size, different shape
        (
            vec![triple(a.clone(), "p", b.clone()), triple(b.clone(), "p", c.clone()), triple(c.clone(), "p", a.clone())],
            vec![triple(x.clone(), "p", y.clone()), triple(y.clone(), "p", x.clone()), triple(z.clone(), "p", z.clone())],
            false,
        ),
        (
            vec![triple(a.clone(), "p", b.clone()), triple(a.clone(), "q", b.clone())],
            vec![triple(x.clone(), "p", y.clone()), triple(y.clone(), "q", x.clone())],
            false,
        ),
        (
            vec![triple(n("s"), "p", a.clone()), triple(a.clone(), "q", RdfTerm::literal("1"))],
            vec![triple(n("s"), "p", x.clone()), triple(x.clone(), "q", RdfTerm::literal("2"))],
            false,
        ),
        (
            vec![triple(n("s"), "p", a.clone()), triple(n("t"), "p", b.clone())],
            vec![triple(n("s"), "p", x.clone()), triple(n("s"), "p", y.clone())],
            false,
        ),
        (vec![triple(n("s"), "p", a.clone())], vec![triple(n("s"), "p", n("o"))], false),
    ]
}

fn random_graph(rng: &mut impl Rng) -> Vec<RdfTriple> {
    let nodes: Vec<RdfTerm> = (0..rng.gen_range(1..=5))
        .map(|i| blank(&format!("n{i}")))
        .chain([RdfTerm::Iri(iri("http://example.org/g#k"))])
        .collect();
    (0..rng.gen_range(1..=7))
        .map(|_| {
            let s = nodes[rng.gen_range(0..nodes.len())].clone();
            let o = nodes[rng.gen_range(0..nodes.len())].clone();
            triple(s, ["p", "q"][rng.gen_range(0..2)], o)
        })
        .collect()
}

fn relabel(g: &[RdfTriple], rng: &mut impl Rng) -> Vec<RdfTriple> {
    let mut labels: Vec<usize> = (0..10).collect();
    for i in (1..labels.len()).rev() {
        labels.swap(i, rng.gen_range(0..=i));
    }
    let f = |t: &RdfTerm| match t {
        RdfTerm::Blank(l) => blank(&format!("m{}", labels[l[1..].parse::<usize>().unwrap()])),
        other => other.clone(),
    };
    g.iter().rev().map(|t| RdfTriple::new(f(&t.subject), t.predicate.clone(), f(&t.object))).collect()
}

fn round_trips() -> Outcome {
    for n in LISTINGS {
        let p = parse_document(&read(&format!("{n}.dol")));
        let text = print_text(&p.document);
        let again = parse_document(&text);
        ensure!(!again.has_errors(), "{n}: printed text does not parse");
        ensure!(again.document == p.document, "{n}: text -> model differs");
        ensure!(print_text(&again.document) == text, "{n}: printing is not a fixpoint");
    }

    let reg = RegistryGraph::builtin();
    let exported = reg.to_turtle();
    let statements = read_structural_rdf(&exported).map_err(|e| e.to_string())?;
    ensure!(statements.len() <= 200, "registry graph has {} statements", statements.len());
    let reread = RegistryGraph::from_rdf(&statements).map_err(|e| e.to_string())?;
    let reexported = read_structural_rdf(&reread.to_turtle()).map_err(|e| e.to_string())?;
    ensure!(isomorphic(&statements, &reexported), "registry re-export is not isomorphic");
    ensure!(oracle::iso_bruteforce(&statements, &reexported), "brute-force oracle disagrees on the registry graph");

    let pairs = iso_pairs();
    for (i, (a, b, expected)) in pairs.iter().enumerate() {
        ensure!(oracle::iso_bruteforce(a, b) == *expected, "oracle wrong on hand-built pair {i}");
        ensure!(isomorphic(a, b) == *expected, "isomorphic() wrong on hand-built pair {i}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut agreements = 0;
    for _ in 0..200 {
        let g = random_graph(&mut rng);
        let h = if rng.gen_bool(0.5) { relabel(&g, &mut rng) } else { random_graph(&mut rng) };
        ensure!(isomorphic(&g, &h) == oracle::iso_bruteforce(&g, &h), "isomorphic() disagrees with brute force on {g:?} / {h:?}");
        agreements += 1;
    }
    Ok(format!(
        "text fixpoint on 4 listings; registry {} statements re-export isomorphic; {} hand-built pairs and {agreements} random pairs agree with brute force",
        statements.len(),
        pairs.len()
    ))
}

// ---- 8 ----------------------------------------------------------------------

fn lint_conformance() -> Outcome {
    let a = analyzed("listing1.dol", false);
    let errors = a.diagnostics.iter().filter(|d| d.is_error()).count();
    ensure!(errors == 0, "listing 1: {errors} errors");
    for n in LISTINGS {
        let g = analyzed(&format!("{n}.dol"), true).graph;
        ensure!(g.find_cycle().is_none(), "{n}: development graph has a cycle");
    }

    let synthetic = analyze_text(
        "%prefix( :    <http://example.org/s#>\n         lang: <http://purl.net/dol/languages/>\n         ser:  <http://purl.net/dol/serializations/> )%\n\
         distributed-ontology S\n\
         language lang:OWL2/DL syntax ser:OWL2/Manchester\n\
         ontology O =\n  Class: A SubClassOf: B\n",
    );
    let w102 = synthetic.diagnostics.iter().find(|d| d.code == "W102").ok_or("no W102 for the undeclared logic")?;
    ensure!(w102.message.ends_with("inferred, not declared"), "W102 says `{}`", w102.message);
    ensure!(!synthetic.has_errors(), "synthetic document has errors");

    let cyclic = analyze_text("%prefix( : <http://example.org/c#> )%\ndistributed-ontology C\nontology A = B\nontology B = A\n");
    let e206 = cyclic.diagnostics.iter().find(|d| d.code == "E206").ok_or("cyclic document not rejected")?;
    ensure!(e206.message.contains("A") && e206.message.contains("B") && e206.message.contains("->"), "no trace in `{}`", e206.message);
    Ok(format!("listing 1: 0 errors, golden graphs acyclic; W102 `{}`; E206 `{}`", w102.message, e206.message))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("golden-file parsing", golden_parsing),
        ("IRI expansion", iri_expansion),
        ("structural extraction counts", extraction_counts),
        ("interpretation verification", interpretation_verification),
        ("registry inference", registry_inference),
        ("translation soundness", translation_soundness),
        ("round-trips", round_trips),
        ("lint/conformance", lint_conformance),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
