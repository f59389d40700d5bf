//! Executable translations and projections between the built-in logics.
//!
//! | mapping                     | entities                         | sentences                           |
//! |-----------------------------|----------------------------------|-------------------------------------|
//! | `trans:PropositionalToSROIQ`| proposition → class              | `A ⟶ B` → `SubClassOf(A, B)`, else `SubClassOf(owl:Thing, φ)` |
//! | `trans:SROIQtoCL`           | class, property, individual → CL name | standard relational translation |
//! | `trans:RDFtoSROIQ`          | by position: class / property / individual | `a` → `Types`, others → `Facts` |
//! | `proj:SROIQtoRDF`           | everything → RDF resource        | `Types(i, A)` and `Facts` → triples, rest dropped |
//!
//! The language-level mappings `trans:RDFtoOWL2DL` and `proj:OWL2DLtoRDF` run
//! through the logic-level mapping the registry says backs them.

use std::collections::HashMap;

use thiserror::Error;

use crate::adapters::clif::{ClifSentence, ClifTerm};
use crate::adapters::manchester::{Characteristic, ClassExpr, Individual, ManchesterAxiom, PropertyExpr};
use crate::adapters::prop::Formula;
use crate::adapters::turtle::{RdfTerm, RdfTriple};
use crate::iri::Iri;
use crate::known;
use crate::model::{Entity, EntityKind, KindClash, Sentence, SentenceForm, SignatureAndSentences};
use crate::registry::{MappingLookupError, RegistryGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("ontology is in logic <{found}> but the mapping expects <{expected}>")]
    SourceMismatch { expected: Iri, found: Iri },
    #[error("{mapping} cannot translate {construct}: {sentence}")]
    Untranslatable { mapping: String, construct: String, sentence: String },
    #[error("cannot compose: {left} ends in <{to}> but {right} starts in <{from}>")]
    EndpointMismatch { left: String, to: Iri, right: String, from: Iri },
    #[error("no built-in implementation for mapping <{0}>")]
    Unimplemented(Iri),
    #[error(transparent)]
    Lookup(#[from] MappingLookupError),
    #[error("translated signature has clashing kinds for <{}>: {} and {}", .0.iri, .0.first, .0.second)]
    KindClash(KindClash),
}

/// One built-in logic-level mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    PropositionalToSroiq,
    SroiqToCl,
    RdfToSroiq,
    SroiqToRdf,
}

impl Step {
    pub const ALL: [Step; 4] = [Step::PropositionalToSroiq, Step::SroiqToCl, Step::RdfToSroiq, Step::SroiqToRdf];

    pub fn mapping(self) -> Iri {
        known::iri(match self {
            Step::PropositionalToSroiq => known::TRANS_PROPOSITIONAL_TO_SROIQ,
            Step::SroiqToCl => known::TRANS_SROIQ_TO_CL,
            Step::RdfToSroiq => known::TRANS_RDF_TO_SROIQ,
            Step::SroiqToRdf => known::PROJ_SROIQ_TO_RDF,
        })
    }

    pub fn source(self) -> Iri {
        known::iri(match self {
            Step::PropositionalToSroiq => known::LOGIC_PROPOSITIONAL,
            Step::SroiqToCl | Step::SroiqToRdf => known::LOGIC_SROIQ,
            Step::RdfToSroiq => known::LOGIC_RDF,
        })
    }

    pub fn target(self) -> Iri {
        known::iri(match self {
            Step::PropositionalToSroiq | Step::RdfToSroiq => known::LOGIC_SROIQ,
            Step::SroiqToCl => known::LOGIC_COMMON_LOGIC,
            Step::SroiqToRdf => known::LOGIC_RDF,
        })
    }

    pub fn is_projection(self) -> bool {
        self == Step::SroiqToRdf
    }

    fn from_mapping(iri: &Iri) -> Option<Step> {
        Step::ALL.into_iter().find(|s| &s.mapping() == iri)
    }

    fn name(self) -> String {
        self.mapping().local_name().to_owned()
    }
}

/// A translation: a chain of built-in steps, named by the mapping IRI it
/// was built from when there is a single one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationImpl {
    pub mapping: Option<Iri>,
    pub steps: Vec<Step>,
}

impl TranslationImpl {
    pub fn identity() -> Self {
        TranslationImpl { mapping: None, steps: Vec::new() }
    }

    pub fn step(step: Step) -> Self {
        TranslationImpl { mapping: Some(step.mapping()), steps: vec![step] }
    }

    /// The built-in implementation of a logic-level mapping IRI.
    pub fn builtin(iri: &Iri) -> Result<Self, TranslateError> {
        Step::from_mapping(iri).map(Self::step).ok_or_else(|| TranslateError::Unimplemented(iri.clone()))
    }

    /// Implementation of any registered mapping; language-level mappings run
    /// through their logic-level backing.
    pub fn from_registry(iri: &Iri, registry: &RegistryGraph) -> Result<Self, TranslateError> {
        let desc = registry.resolve_mapping_iri(iri)?;
        let mut t = Self::builtin(&desc.iri)?;
        t.mapping = Some(iri.clone());
        Ok(t)
    }

    pub fn source(&self) -> Option<Iri> {
        self.steps.first().map(|s| s.source())
    }

    pub fn target(&self) -> Option<Iri> {
        self.steps.last().map(|s| s.target())
    }

    pub fn is_projection(&self) -> bool {
        self.steps.iter().any(|s| s.is_projection())
    }

    fn label(&self) -> String {
        match &self.mapping {
            Some(m) => m.local_name().to_owned(),
            None if self.steps.is_empty() => "identity".to_owned(),
            None => self.steps.iter().map(|s| s.name()).collect::<Vec<_>>().join(" ; "),
        }
    }
}

/// Sequential composition; `compose(&[])` is the identity.
pub fn compose(ts: &[TranslationImpl]) -> Result<TranslationImpl, TranslateError> {
    for pair in ts.windows(2) {
        if let (Some(target), Some(source)) = (pair[0].target(), pair[1].source()) {
            if target != source {
                return Err(TranslateError::EndpointMismatch {
                    left: pair[0].label(),
                    to: target,
                    right: pair[1].label(),
                    from: source,
                });
            }
        }
    }
    let steps: Vec<Step> = ts.iter().flat_map(|t| t.steps.iter().copied()).collect();
    let mapping = match ts {
        [one] => one.mapping.clone(),
        _ => None,
    };
    Ok(TranslationImpl { mapping, steps })
}

/// A sentence a projection could not express.
#[derive(Debug, Clone, PartialEq)]
pub struct Dropped {
    pub mapping: Iri,
    /// Position in the input of the step that dropped it.
    pub index: usize,
    pub construct: String,
    pub sentence: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Applied {
    pub result: SignatureAndSentences,
    pub dropped: Vec<Dropped>,
}

/// Runs every step. Translation steps fail on constructs they cannot
/// handle; projection steps drop them and report each one.
pub fn apply(t: &TranslationImpl, s: &SignatureAndSentences) -> Result<Applied, TranslateError> {
    if let Some(expected) = t.source() {
        if expected != s.logic {
            return Err(TranslateError::SourceMismatch { expected, found: s.logic.clone() });
        }
    }
    let mut current = s.clone();
    let mut dropped = Vec::new();
    for step in &t.steps {
        current = match step {
            Step::PropositionalToSroiq => prop_to_sroiq(&current)?,
            Step::SroiqToCl => sroiq_to_cl(&current)?,
            Step::RdfToSroiq => rdf_to_sroiq(&current)?,
            Step::SroiqToRdf => {
                let (out, mut d) = sroiq_to_rdf(&current);
                dropped.append(&mut d);
                out
            }
        };
    }
    Ok(Applied { result: current, dropped })
}

/// [`apply`] for translations: anything dropped is an error.
pub fn apply_translation(t: &TranslationImpl, s: &SignatureAndSentences) -> Result<SignatureAndSentences, TranslateError> {
    let applied = apply(t, s)?;
    match applied.dropped.into_iter().next() {
        None => Ok(applied.result),
        Some(d) => Err(TranslateError::Untranslatable { mapping: t.label(), construct: d.construct, sentence: d.sentence }),
    }
}

/// Applies a projection, reporting what it drops.
pub fn apply_projection(mapping: &Iri, registry: &RegistryGraph, s: &SignatureAndSentences) -> Result<Applied, TranslateError> {
    apply(&TranslationImpl::from_registry(mapping, registry)?, s)
}

fn untranslatable(step: Step, construct: &str, sentence: &Sentence) -> TranslateError {
    TranslateError::Untranslatable { mapping: step.name(), construct: construct.to_owned(), sentence: sentence.form.to_string() }
}

fn retag(s: &SignatureAndSentences, step: Step, kind: impl Fn(EntityKind) -> Option<EntityKind>) -> Result<SignatureAndSentences, TranslateError> {
    let mut out = SignatureAndSentences::empty(step.target());
    for e in s.entities.values() {
        if let Some(k) = kind(e.kind) {
            out.add_entity(Entity { iri: e.iri.clone(), kind: k, declared: e.declared }).map_err(TranslateError::KindClash)?;
        }
    }
    out.imports = s.imports.clone();
    Ok(out)
}

fn wrong_form(step: Step, sentence: &Sentence) -> TranslateError {
    untranslatable(step, "a sentence of another logic", sentence)
}

// ---- Propositional → SROIQ -------------------------------------------------

/// Class expression of a formula under the one-element reading: an atom
/// becomes the class of the same name.
pub fn formula_to_class(f: &Formula) -> ClassExpr {
    match f {
        Formula::Atom(a) => ClassExpr::Class(a.clone()),
        Formula::True => ClassExpr::Thing,
        Formula::False => ClassExpr::Nothing,
        Formula::Not(x) => ClassExpr::not(formula_to_class(x)),
        Formula::And(xs) => ClassExpr::And(xs.iter().map(formula_to_class).collect()),
        Formula::Or(xs) => ClassExpr::Or(xs.iter().map(formula_to_class).collect()),
        Formula::Implies(a, b) => ClassExpr::Or(vec![ClassExpr::not(formula_to_class(a)), formula_to_class(b)]),
        Formula::Iff(a, b) => {
            let (a, b) = (formula_to_class(a), formula_to_class(b));
            ClassExpr::And(vec![
                ClassExpr::Or(vec![ClassExpr::not(a.clone()), b.clone()]),
                ClassExpr::Or(vec![ClassExpr::not(b), a]),
            ])
        }
    }
}

pub fn formula_to_axiom(f: &Formula) -> ManchesterAxiom {
    match f {
        Formula::Implies(a, b) => ManchesterAxiom::SubClassOf(formula_to_class(a), formula_to_class(b)),
        other => ManchesterAxiom::SubClassOf(ClassExpr::Thing, formula_to_class(other)),
    }
}

fn prop_to_sroiq(s: &SignatureAndSentences) -> Result<SignatureAndSentences, TranslateError> {
    let step = Step::PropositionalToSroiq;
    let mut out = retag(s, step, |k| Some(if k == EntityKind::Proposition { EntityKind::Class } else { k }))?;
    for sen in &s.sentences {
        let SentenceForm::Prop(f) = &sen.form else { return Err(wrong_form(step, sen)) };
        out.push_sentence(SentenceForm::Owl(formula_to_axiom(f)), sen.span.clone());
    }
    Ok(out)
}

// ---- SROIQ → Common Logic ------------------------------------------------

/// Variable names: `x y z u v w`, then `x6`, `x7`, …
pub fn variable(i: usize) -> String {
    const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    NAMES.get(i).map_or_else(|| format!("x{i}"), |n| (*n).to_owned())
}

fn holds(p: &Iri, args: Vec<ClifTerm>) -> ClifSentence {
    ClifSentence::atom(p, args)
}

fn role(r: &PropertyExpr, a: ClifTerm, b: ClifTerm) -> ClifSentence {
    match r {
        PropertyExpr::Named(p) => holds(p, vec![a, b]),
        PropertyExpr::Inverse(p) => holds(p, vec![b, a]),
    }
}

fn all_different(vars: &[String]) -> Vec<ClifSentence> {
    let mut out = Vec::new();
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            out.push(ClifSentence::not(ClifSentence::Equal(ClifTerm::var(&vars[i]), ClifTerm::var(&vars[j]))));
        }
    }
    out
}

fn conj(mut xs: Vec<ClifSentence>) -> ClifSentence {
    if xs.len() == 1 {
        xs.pop().expect("one element")
    } else {
        ClifSentence::And(xs)
    }
}

/// `τ_t(C)`: the CL sentence saying term `t` is an instance of `C`. `next`
/// is the index of the first unused variable.
pub fn class_to_clif(c: &ClassExpr, t: &ClifTerm, next: usize) -> ClifSentence {
    match c {
        ClassExpr::Thing => ClifSentence::Equal(t.clone(), t.clone()),
        ClassExpr::Nothing => ClifSentence::not(ClifSentence::Equal(t.clone(), t.clone())),
        ClassExpr::Class(a) => holds(a, vec![t.clone()]),
        ClassExpr::And(xs) => ClifSentence::And(xs.iter().map(|x| class_to_clif(x, t, next)).collect()),
        ClassExpr::Or(xs) => ClifSentence::Or(xs.iter().map(|x| class_to_clif(x, t, next)).collect()),
        ClassExpr::Not(x) => ClifSentence::not(class_to_clif(x, t, next)),
        ClassExpr::Some(r, x) => {
            let y = variable(next);
            let yv = ClifTerm::var(&y);
            ClifSentence::Exists(
                vec![y],
                Box::new(ClifSentence::And(vec![role(r, t.clone(), yv.clone()), class_to_clif(x, &yv, next + 1)])),
            )
        }
        ClassExpr::Only(r, x) => {
            let y = variable(next);
            let yv = ClifTerm::var(&y);
            ClifSentence::Forall(vec![y], Box::new(ClifSentence::implies(role(r, t.clone(), yv.clone()), class_to_clif(x, &yv, next + 1))))
        }
        ClassExpr::Exactly(n, r, filler) => {
            let n = *n as usize;
            let member = |v: &ClifTerm, next: usize| {
                let mut parts = vec![role(r, t.clone(), v.clone())];
                if let Some(f) = filler {
                    parts.push(class_to_clif(f, v, next));
                }
                conj(parts)
            };
            // at most n: every member equals one of the n witnesses
            let z = variable(next + n);
            let zv = ClifTerm::var(&z);
            let witnesses: Vec<String> = (0..n).map(|i| variable(next + i)).collect();
            let at_most = ClifSentence::Forall(
                vec![z],
                Box::new(ClifSentence::implies(
                    member(&zv, next + n + 1),
                    ClifSentence::Or(witnesses.iter().map(|w| ClifSentence::Equal(zv.clone(), ClifTerm::var(w))).collect()),
                )),
            );
            if n == 0 {
                return at_most;
            }
            let mut body: Vec<ClifSentence> =
                witnesses.iter().map(|w| member(&ClifTerm::var(w), next + n + 1)).collect();
            body.extend(all_different(&witnesses));
            body.push(at_most);
            ClifSentence::Exists(witnesses, Box::new(ClifSentence::And(body)))
        }
    }
}

fn individual_term(step: Step, i: &Individual, sen: &Sentence) -> Result<ClifTerm, TranslateError> {
    match i {
        Individual::Named(n) => Ok(ClifTerm::Name(n.clone())),
        Individual::Anonymous(_) => Err(untranslatable(step, "an anonymous individual", sen)),
    }
}

fn forall(vars: &[&str], body: ClifSentence) -> ClifSentence {
    ClifSentence::forall(vars, body)
}

pub fn axiom_to_clif(a: &ManchesterAxiom) -> Option<ClifSentence> {
    let x = || ClifTerm::var("x");
    let y = || ClifTerm::var("y");
    let z = || ClifTerm::var("z");
    Some(match a {
        ManchesterAxiom::SubClassOf(c, d) => {
            forall(&["x"], ClifSentence::implies(class_to_clif(c, &x(), 1), class_to_clif(d, &x(), 1)))
        }
        ManchesterAxiom::EquivalentTo(c, d) => {
            forall(&["x"], ClifSentence::iff(holds(c, vec![x()]), class_to_clif(d, &x(), 1)))
        }
        ManchesterAxiom::DisjointUnionOf(c, parts) => {
            let union = ClifSentence::Or(parts.iter().map(|p| class_to_clif(p, &x(), 1)).collect());
            let mut body = vec![ClifSentence::iff(holds(c, vec![x()]), union)];
            for i in 0..parts.len() {
                for j in i + 1..parts.len() {
                    body.push(ClifSentence::not(ClifSentence::And(vec![
                        class_to_clif(&parts[i], &x(), 1),
                        class_to_clif(&parts[j], &x(), 1),
                    ])));
                }
            }
            forall(&["x"], conj(body))
        }
        ManchesterAxiom::Characteristic(r, Characteristic::Transitive) => forall(
            &["x", "y", "z"],
            ClifSentence::implies(
                ClifSentence::And(vec![holds(r, vec![x(), y()]), holds(r, vec![y(), z()])]),
                holds(r, vec![x(), z()]),
            ),
        ),
        ManchesterAxiom::Characteristic(r, Characteristic::Asymmetric) => forall(
            &["x", "y"],
            ClifSentence::implies(holds(r, vec![x(), y()]), ClifSentence::not(holds(r, vec![y(), x()]))),
        ),
        ManchesterAxiom::SubPropertyOf(r, s) => {
            forall(&["x", "y"], ClifSentence::implies(holds(r, vec![x(), y()]), holds(s, vec![x(), y()])))
        }
        ManchesterAxiom::Types(..) | ManchesterAxiom::Fact(..) => return None,
    })
}

fn sroiq_to_cl(s: &SignatureAndSentences) -> Result<SignatureAndSentences, TranslateError> {
    let step = Step::SroiqToCl;
    let mut out = retag(s, step, |k| match k {
        EntityKind::Class | EntityKind::ObjectProperty | EntityKind::Individual => Some(EntityKind::ClName),
        other => Some(other),
    })?;
    for sen in &s.sentences {
        let SentenceForm::Owl(a) = &sen.form else { return Err(wrong_form(step, sen)) };
        let translated = match a {
            ManchesterAxiom::Types(i, c) => class_to_clif(c, &individual_term(step, i, sen)?, 0),
            ManchesterAxiom::Fact(i, p, j) => holds(p, vec![individual_term(step, i, sen)?, individual_term(step, j, sen)?]),
            other => axiom_to_clif(other).expect("class and property axioms translate"),
        };
        out.push_sentence(SentenceForm::Clif(translated), sen.span.clone());
    }
    Ok(out)
}

// ---- RDF ↔ SROIQ ----------------------------------------------------------

fn individual_of(t: &RdfTerm) -> Option<Individual> {
    match t {
        RdfTerm::Iri(i) => Some(Individual::Named(i.clone())),
        RdfTerm::Blank(b) => Some(Individual::Anonymous(b.clone())),
        RdfTerm::Literal { .. } => None,
    }
}

fn rdf_to_sroiq(s: &SignatureAndSentences) -> Result<SignatureAndSentences, TranslateError> {
    let step = Step::RdfToSroiq;
    let mut out = SignatureAndSentences::empty(step.target());
    out.imports = s.imports.clone();
    let mut kinds: Vec<(Iri, EntityKind)> = Vec::new();
    for sen in &s.sentences {
        let SentenceForm::Rdf(t) = &sen.form else { return Err(wrong_form(step, sen)) };
        let subject = individual_of(&t.subject).ok_or_else(|| untranslatable(step, "a literal subject", sen))?;
        if let RdfTerm::Iri(i) = &t.subject {
            kinds.push((i.clone(), EntityKind::Individual));
        }
        let axiom = if t.predicate.as_str() == known::RDF_TYPE {
            let RdfTerm::Iri(class) = &t.object else {
                return Err(untranslatable(step, "a type that is not an IRI", sen));
            };
            kinds.push((class.clone(), EntityKind::Class));
            ManchesterAxiom::Types(subject, ClassExpr::Class(class.clone()))
        } else {
            let object = individual_of(&t.object).ok_or_else(|| untranslatable(step, "a literal object", sen))?;
            if let RdfTerm::Iri(i) = &t.object {
                kinds.push((i.clone(), EntityKind::Individual));
            }
            kinds.push((t.predicate.clone(), EntityKind::ObjectProperty));
            ManchesterAxiom::Fact(subject, t.predicate.clone(), object)
        };
        out.push_sentence(SentenceForm::Owl(axiom), sen.span.clone());
    }
    let declared: HashMap<&Iri, bool> = s.entities.values().map(|e| (&e.iri, e.declared)).collect();
    for (iri, kind) in kinds {
        let declared = declared.get(&iri).copied().unwrap_or(false);
        out.add_entity(Entity { iri, kind, declared }).map_err(TranslateError::KindClash)?;
    }
    Ok(out)
}

fn term_of(i: &Individual) -> RdfTerm {
    match i {
        Individual::Named(n) => RdfTerm::Iri(n.clone()),
        Individual::Anonymous(a) => RdfTerm::Blank(a.clone()),
    }
}

fn sroiq_to_rdf(s: &SignatureAndSentences) -> (SignatureAndSentences, Vec<Dropped>) {
    let step = Step::SroiqToRdf;
    let mut out = retag(s, step, |_| Some(EntityKind::RdfResource)).expect("a single target kind cannot clash");
    let mut dropped = Vec::new();
    for (index, sen) in s.sentences.iter().enumerate() {
        let triple = match &sen.form {
            SentenceForm::Owl(ManchesterAxiom::Types(i, ClassExpr::Class(c))) => {
                Some(RdfTriple::new(term_of(i), known::iri(known::RDF_TYPE), RdfTerm::Iri(c.clone())))
            }
            SentenceForm::Owl(ManchesterAxiom::Fact(a, p, b)) => Some(RdfTriple::new(term_of(a), p.clone(), term_of(b))),
            _ => None,
        };
        match triple {
            Some(t) => out.push_sentence(SentenceForm::Rdf(t), sen.span.clone()),
            None => dropped.push(Dropped {
                mapping: step.mapping(),
                index,
                construct: match &sen.form {
                    SentenceForm::Owl(ManchesterAxiom::Types(..)) => "Types with a complex class".to_owned(),
                    SentenceForm::Owl(a) => a.construct().to_owned(),
                    _ => "a sentence of another logic".to_owned(),
                },
                sentence: sen.form.to_string(),
            }),
        }
    }
    (out, dropped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapters::clif::parse_clif;
    use crate::adapters::manchester::parse_manchester;
    use crate::adapters::prop::parse_prop;
    use crate::adapters::turtle::{parse_turtle, triples_to_signature};
    use crate::iri::PrefixMap;

    fn px() -> PrefixMap {
        [("", "http://ex.org/#"), ("owl", known::OWL)].into_iter().collect()
    }

    fn ex(s: &str) -> Iri {
        Iri::parse(format!("http://ex.org/#{s}")).unwrap()
    }

    fn c(s: &str) -> ClassExpr {
        ClassExpr::Class(ex(s))
    }

    fn owl(s: &SignatureAndSentences) -> Vec<&ManchesterAxiom> {
        s.sentences
            .iter()
            .map(|x| match &x.form {
                SentenceForm::Owl(a) => a,
                _ => panic!("not OWL"),
            })
            .collect()
    }

    #[test]
    fn taxonomy_to_sroiq() {
        let src = parse_prop("props PT, T, S, AR, PD\n. S ∨ T ∨ AR ∨ PD ⟶ PT\n. S ∧ T ⟶ ⊥\n. ⊥", &px()).unwrap();
        let out = apply_translation(&TranslationImpl::step(Step::PropositionalToSroiq), &src).unwrap();
        assert_eq!(out.logic, known::iri(known::LOGIC_SROIQ));
        assert_eq!(out.entities.len(), 5);
        assert!(out.entities.values().all(|e| e.kind == EntityKind::Class));
        let axioms = owl(&out);
        assert_eq!(axioms[0], &ManchesterAxiom::SubClassOf(ClassExpr::Or(vec![c("S"), c("T"), c("AR"), c("PD")]), c("PT")));
        assert_eq!(axioms[1], &ManchesterAxiom::SubClassOf(ClassExpr::And(vec![c("S"), c("T")]), ClassExpr::Nothing));
        assert_eq!(axioms[2], &ManchesterAxiom::SubClassOf(ClassExpr::Thing, ClassExpr::Nothing));
    }

    #[test]
    fn subclass_and_transitivity_to_cl() {
        let src = parse_manchester("Class: A SubClassOf: B\nObjectProperty: isPartOf Characteristics: Transitive", &px()).unwrap();
        let out = apply_translation(&TranslationImpl::step(Step::SroiqToCl), &src).unwrap();
        let expected = parse_clif(
            "(forall (x) (if (A x) (B x)))\n(forall (x y z) (if (and (isPartOf x y) (isPartOf y z)) (isPartOf x z)))",
            &px(),
        )
        .unwrap();
        let forms = |s: &SignatureAndSentences| s.sentences.iter().map(|x| x.form.clone()).collect::<Vec<_>>();
        assert_eq!(forms(&out), forms(&expected));
        assert_eq!(out.sentences.len(), src.sentences.len());
        assert!(out.entities.values().all(|e| e.kind == EntityKind::ClName));
    }

    #[test]
    fn nested_restrictions_use_fresh_variables() {
        let src = parse_manchester("Class: A SubClassOf: r some (s only B)", &px()).unwrap();
        let out = apply_translation(&TranslationImpl::step(Step::SroiqToCl), &src).unwrap();
        let expected =
            parse_clif("(forall (x) (if (A x) (exists (y) (and (r x y) (forall (z) (if (s y z) (B z)))))))", &px()).unwrap();
        assert_eq!(out.sentences[0].form, expected.sentences[0].form);
    }

    #[test]
    fn source_mismatch_and_unimplemented() {
        let src = parse_manchester("Class: A", &px()).unwrap();
        let err = apply(&TranslationImpl::step(Step::PropositionalToSroiq), &src).unwrap_err();
        assert!(matches!(err, TranslateError::SourceMismatch { .. }));
        assert!(matches!(TranslationImpl::builtin(&ex("Nope")), Err(TranslateError::Unimplemented(_))));
    }

    #[test]
    fn anonymous_individuals_do_not_reach_cl() {
        let src = parse_turtle("<http://ex.org/#p> <http://ex.org/#r> [ a <http://ex.org/#C> ] .", &px(), "b").unwrap();
        let owl = apply_translation(&TranslationImpl::step(Step::RdfToSroiq), &triples_to_signature(&src)).unwrap();
        let err = apply_translation(&TranslationImpl::step(Step::SroiqToCl), &owl).unwrap_err();
        assert!(err.to_string().contains("anonymous individual"), "{err}");
    }

    #[test]
    fn rdf_to_owl_by_position() {
        let doc = parse_turtle(":p :hasTopping [ a :Tomato ], :m .", &px(), "b").unwrap();
        let owl_sig = apply_translation(&TranslationImpl::step(Step::RdfToSroiq), &triples_to_signature(&doc)).unwrap();
        assert_eq!(owl_sig.entity(&ex("Tomato")).unwrap().kind, EntityKind::Class);
        assert_eq!(owl_sig.entity(&ex("hasTopping")).unwrap().kind, EntityKind::ObjectProperty);
        assert_eq!(owl_sig.entity(&ex("m")).unwrap().kind, EntityKind::Individual);
        let axioms = owl(&owl_sig);
        assert_eq!(axioms.len(), 3);
        assert!(axioms.iter().any(|a| matches!(a, ManchesterAxiom::Types(Individual::Anonymous(_), _))));
    }

    #[test]
    fn projection_keeps_abox_and_reports_the_rest() {
        let src = parse_manchester(
            "Class: A SubClassOf: B\nIndividual: i Types: A, r some B Facts: r j",
            &px(),
        )
        .unwrap();
        let applied = apply(&TranslationImpl::step(Step::SroiqToRdf), &src).unwrap();
        assert_eq!(applied.result.sentences.len(), 2);
        assert_eq!(applied.dropped.len(), 2);
        assert_eq!(applied.dropped[0].construct, "SubClassOf");
        assert_eq!(applied.dropped[1].construct, "Types with a complex class");
        assert!(matches!(
            apply_translation(&TranslationImpl::step(Step::SroiqToRdf), &src),
            Err(TranslateError::Untranslatable { .. })
        ));
        let empty = SignatureAndSentences::empty(known::iri(known::LOGIC_SROIQ));
        let applied = apply(&TranslationImpl::step(Step::SroiqToRdf), &empty).unwrap();
        assert!(applied.result.sentences.is_empty() && applied.dropped.is_empty());
    }

    #[test]
    fn projection_after_rdf_round_trip_is_stable_on_abox() {
        let doc = parse_turtle(":p :r :q . :p a :C .", &px(), "b").unwrap();
        let rdf = triples_to_signature(&doc);
        let there = compose(&[TranslationImpl::step(Step::RdfToSroiq), TranslationImpl::step(Step::SroiqToRdf)]).unwrap();
        let back = apply_translation(&there, &rdf).unwrap();
        let forms = |s: &SignatureAndSentences| s.sentences.iter().map(|x| x.form.clone()).collect::<Vec<_>>();
        assert_eq!(forms(&back), forms(&rdf));
    }

    #[test]
    fn composition() {
        let p2o = TranslationImpl::step(Step::PropositionalToSroiq);
        let o2c = TranslationImpl::step(Step::SroiqToCl);
        let src = parse_prop("props S, T\n. S ∧ T ⟶ ⊥", &px()).unwrap();
        let both = compose(&[p2o.clone(), o2c.clone()]).unwrap();
        let direct = apply_translation(&both, &src).unwrap();
        let staged = apply_translation(&o2c, &apply_translation(&p2o, &src).unwrap()).unwrap();
        assert_eq!(direct, staged);
        let expected = parse_clif("(forall (x) (if (and (S x) (T x)) (not (= x x))))", &px()).unwrap();
        assert_eq!(direct.sentences[0].form, expected.sentences[0].form);

        assert_eq!(compose(&[]).unwrap(), TranslationImpl::identity());
        assert_eq!(apply_translation(&compose(&[]).unwrap(), &src).unwrap(), src);
        assert_eq!(compose(std::slice::from_ref(&p2o)).unwrap(), p2o);
        assert!(matches!(compose(&[o2c, p2o]), Err(TranslateError::EndpointMismatch { .. })));
    }

    #[test]
    fn language_level_mappings_use_their_backing() {
        let reg = RegistryGraph::builtin();
        let t = TranslationImpl::from_registry(&Iri::parse("http://purl.net/dol/translations/RDFtoOWL2DL").unwrap(), &reg).unwrap();
        assert_eq!(t.steps, vec![Step::RdfToSroiq]);
        let p = TranslationImpl::from_registry(&Iri::parse("http://purl.net/dol/projections/OWL2DLtoRDF").unwrap(), &reg).unwrap();
        assert!(p.is_projection());
    }
}
