mod oracle;

use std::collections::{BTreeMap, BTreeSet};

use dolc::adapters::manchester::{ClassExpr, ManchesterAxiom};
use dolc::adapters::prop::Formula;
use dolc::adapters::AdapterRegistry;
use dolc::analyzer::{analyze, check_interpretation, Analysis, AnalyzerOptions, Verdict};
use dolc::iri::Iri;
use dolc::known;
use dolc::model::{
    Entity, EntityKind, Link, LinkKind, LinkPayload, OntologyExpression, SentenceForm, SignatureAndSentences, SymbolMap,
    SymbolRename,
};
use dolc::parser::parse_document;
use dolc::registry::RegistryGraph;
use dolc::serialize::{emit, EmissionOptions, Format};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const NS: &str = "http://example.org/u#";

fn iri(s: &str) -> Iri {
    Iri::parse(s).unwrap()
}

fn run(text: &str) -> Analysis {
    let p = parse_document(text);
    assert!(!p.has_errors(), "{:?}", p.diagnostics);
    analyze(&p.document, Some(&p.source_map), &RegistryGraph::builtin(), &AdapterRegistry::builtin(), &AnalyzerOptions::default())
}

/// Three small Manchester ontologies plus both bracketings of their union.
fn union_document(blocks: &[Vec<(u8, u8)>; 3]) -> String {
    let mut s = format!(
        "%prefix( : <{NS}>\n         log: <{}>\n         ser: <{}> )%\ndistributed-ontology U\nlogic log:SROIQ syntax ser:OWL2/Manchester\n",
        known::LOGICS,
        known::SERIALIZATIONS
    );
    for (i, axioms) in blocks.iter().enumerate() {
        s.push_str(&format!("ontology O{i} =\n"));
        for (a, b) in axioms {
            s.push_str(&format!("  Class: C{a} SubClassOf: C{b}\n"));
        }
    }
    s.push_str("ontology Left = { O0 and O1 } and O2\nontology Right = O0 and { O1 and O2 }\n");
    s
}

fn content<'a>(a: &'a Analysis, name: &str) -> &'a SignatureAndSentences {
    &a.definition_node(&iri(&format!("{NS}{name}"))).unwrap().content
}

fn sentence_set(s: &SignatureAndSentences) -> BTreeSet<String> {
    s.sentences.iter().map(|x| format!("{:?}", x.form)).collect()
}

fn axioms() -> impl Strategy<Value = Vec<(u8, u8)>> {
    prop::collection::vec((0u8..4, 0u8..4), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn union_is_associative(a in axioms(), b in axioms(), c in axioms()) {
        let analysis = run(&union_document(&[a, b, c]));
        prop_assert!(!analysis.has_errors());
        let (l, r) = (content(&analysis, "Left"), content(&analysis, "Right"));
        let names = |s: &SignatureAndSentences| s.entities.keys().cloned().collect::<BTreeSet<_>>();
        prop_assert_eq!(names(l), names(r));
        prop_assert_eq!(sentence_set(l), sentence_set(r));
    }

    #[test]
    fn analysis_is_deterministic(a in axioms(), b in axioms(), c in axioms()) {
        let text = union_document(&[a, b, c]);
        let (x, y) = (run(&text), run(&text));
        prop_assert_eq!(x.json_report("u.dol", &[]), y.json_report("u.dol", &[]));
        for format in [Format::Text, Format::Rdf, Format::LinkedData, Format::Xml] {
            let opts = EmissionOptions::new(format);
            prop_assert_eq!(emit(&x.document, &opts).unwrap(), emit(&y.document, &opts).unwrap());
        }
    }
}

// ---- random propositional interpretations -------------------------------------

fn class_formula(c: &ClassExpr, back: &BTreeMap<Iri, Iri>) -> Formula {
    match c {
        ClassExpr::Thing => Formula::True,
        ClassExpr::Nothing => Formula::False,
        ClassExpr::Class(n) => Formula::Atom(back[n].clone()),
        ClassExpr::And(xs) => Formula::And(xs.iter().map(|x| class_formula(x, back)).collect()),
        ClassExpr::Or(xs) => Formula::Or(xs.iter().map(|x| class_formula(x, back)).collect()),
        ClassExpr::Not(x) => Formula::Not(Box::new(class_formula(x, back))),
        other => panic!("not boolean: {other:?}"),
    }
}

/// A source formula that the target entails under the renaming.
fn entailed(axiom: &ManchesterAxiom, back: &BTreeMap<Iri, Iri>) -> Formula {
    match axiom {
        ManchesterAxiom::SubClassOf(c, d) => Formula::Implies(Box::new(class_formula(c, back)), Box::new(class_formula(d, back))),
        ManchesterAxiom::EquivalentTo(n, d) => {
            Formula::Iff(Box::new(Formula::Atom(back[n].clone())), Box::new(class_formula(d, back)))
        }
        ManchesterAxiom::DisjointUnionOf(n, parts) => Formula::Implies(
            Box::new(Formula::Or(parts.iter().map(|p| class_formula(p, back)).collect())),
            Box::new(Formula::Atom(back[n].clone())),
        ),
        other => panic!("unexpected {other:?}"),
    }
}

fn rename(f: &Formula, map: &BTreeMap<Iri, Iri>) -> Formula {
    let r = |x: &Formula| Box::new(rename(x, map));
    match f {
        Formula::Atom(a) => Formula::Atom(map[a].clone()),
        Formula::Not(x) => Formula::Not(r(x)),
        Formula::And(xs) => Formula::And(xs.iter().map(|x| rename(x, map)).collect()),
        Formula::Or(xs) => Formula::Or(xs.iter().map(|x| rename(x, map)).collect()),
        Formula::Implies(a, b) => Formula::Implies(r(a), r(b)),
        Formula::Iff(a, b) => Formula::Iff(r(a), r(b)),
        other => other.clone(),
    }
}

fn point(v: &BTreeMap<Iri, bool>) -> oracle::Model {
    oracle::Model {
        n: 1,
        sets: v.iter().map(|(k, b)| (k.clone(), u32::from(*b))).collect(),
        elements: Default::default(),
        empty_roles: true,
    }
}

#[test]
fn random_interpretations_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let registry = RegistryGraph::builtin();
    let (mut verified, mut refuted) = (0, 0);
    for case in 0..50 {
        let n = rng.gen_range(2..=4);
        let atoms: Vec<Iri> = (0..n).map(|i| iri(&format!("{NS}p{i}"))).collect();
        let classes: Vec<Iri> = (0..n).map(|i| iri(&format!("{NS}C{i}"))).collect();
        let map: BTreeMap<Iri, Iri> = atoms.iter().cloned().zip(classes.iter().cloned()).collect();
        let back: BTreeMap<Iri, Iri> = classes.iter().cloned().zip(atoms.iter().cloned()).collect();

        let unused = [iri(&format!("{NS}i"))];
        let mut target_axioms = Vec::new();
        while target_axioms.len() < rng.gen_range(1..=4) {
            let a = oracle::random_axiom(&mut rng, &classes, &unused);
            if !matches!(a, ManchesterAxiom::Types(..)) {
                target_axioms.push(a);
            }
        }
        let formulas: Vec<Formula> = (0..rng.gen_range(1..=3))
            .map(|_| {
                if rng.gen_bool(0.5) {
                    entailed(&target_axioms[rng.gen_range(0..target_axioms.len())], &back)
                } else {
                    oracle::random_formula(&mut rng, &atoms, 2)
                }
            })
            .collect();

        let mut source = SignatureAndSentences::empty(iri(known::LOGIC_PROPOSITIONAL));
        for a in &atoms {
            source.add_entity(Entity { iri: a.clone(), kind: EntityKind::Proposition, declared: true }).unwrap();
        }
        formulas.iter().for_each(|f| source.push_sentence(SentenceForm::Prop(f.clone()), None));
        let mut target = SignatureAndSentences::empty(iri(known::LOGIC_SROIQ));
        for c in &classes {
            target.add_entity(Entity { iri: c.clone(), kind: EntityKind::Class, declared: true }).unwrap();
        }
        target_axioms.iter().for_each(|a| target.push_sentence(SentenceForm::Owl(a.clone()), None));

        let link = Link {
            iri: iri(&format!("{NS}I{case}")),
            kind: LinkKind::Interpretation,
            source: OntologyExpression::Reference(iri(&format!("{NS}S"))),
            target: OntologyExpression::Reference(iri(&format!("{NS}T"))),
            payload: LinkPayload::SymbolMap(SymbolMap {
                translation: Some(iri(known::TRANS_PROPOSITIONAL_TO_SROIQ)),
                renames: map.iter().map(|(f, t)| SymbolRename { from: f.clone(), to: t.clone() }).collect(),
            }),
        };
        let (report, diags) = check_interpretation(&link, &source, &target, &registry);
        assert!(diags.iter().all(|d| !d.is_error()), "case {case}: {diags:?}");

        let renamed: Vec<Formula> = formulas.iter().map(|f| rename(f, &map)).collect();
        let holds = oracle::assignments(&classes).iter().all(|v| {
            let m = point(v);
            !target_axioms.iter().all(|a| oracle::dl_holds(a, &m)) || renamed.iter().all(|f| oracle::prop_eval(f, &|i| v[i]))
        });
        if holds {
            verified += 1;
            assert_eq!(report.verdict, Verdict::Verified, "case {case}");
        } else {
            refuted += 1;
            assert_eq!(report.verdict, Verdict::Refuted, "case {case}");
            let ca = report.counter_assignment.as_ref().expect("counter-assignment");
            let v: BTreeMap<Iri, bool> = classes.iter().map(|c| (c.clone(), ca.get(c.as_str()).copied().unwrap_or(false))).collect();
            let m = point(&v);
            assert!(target_axioms.iter().all(|a| oracle::dl_holds(a, &m)), "case {case}: counter-assignment violates target");
            assert!(!renamed.iter().all(|f| oracle::prop_eval(f, &|i| v[i])), "case {case}: counter-assignment satisfies source");
        }
    }
    assert!(verified > 0 && refuted > 0, "{verified} verified, {refuted} refuted");
}
