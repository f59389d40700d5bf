//! Test-side oracles. Nothing here calls the library's own decision
//! procedures; models are enumerated and sentences evaluated from scratch.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use dolc::adapters::clif::{ClifSentence, ClifTerm};
use dolc::adapters::manchester::{ClassExpr, Individual, ManchesterAxiom};
use dolc::adapters::prop::Formula;
use dolc::adapters::turtle::{RdfTerm, RdfTriple};
use dolc::iri::Iri;
use rand::seq::SliceRandom;
use rand::Rng;

// ---- propositional ----------------------------------------------------------

pub fn prop_atoms(f: &Formula, out: &mut BTreeSet<Iri>) {
    match f {
        Formula::Atom(a) => {
            out.insert(a.clone());
        }
        Formula::Not(x) => prop_atoms(x, out),
        Formula::And(xs) | Formula::Or(xs) => xs.iter().for_each(|x| prop_atoms(x, out)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            prop_atoms(a, out);
            prop_atoms(b, out);
        }
        Formula::True | Formula::False => {}
    }
}

pub fn prop_eval(f: &Formula, v: &dyn Fn(&Iri) -> bool) -> bool {
    match f {
        Formula::Atom(a) => v(a),
        Formula::Not(x) => !prop_eval(x, v),
        Formula::And(xs) => xs.iter().all(|x| prop_eval(x, v)),
        Formula::Or(xs) => xs.iter().any(|x| prop_eval(x, v)),
        Formula::Implies(a, b) => !prop_eval(a, v) || prop_eval(b, v),
        Formula::Iff(a, b) => prop_eval(a, v) == prop_eval(b, v),
        Formula::True => true,
        Formula::False => false,
    }
}

/// Every assignment to `names`, as maps.
pub fn assignments(names: &[Iri]) -> Vec<BTreeMap<Iri, bool>> {
    (0u64..1 << names.len()).map(|bits| names.iter().enumerate().map(|(i, n)| (n.clone(), bits >> i & 1 == 1)).collect()).collect()
}

pub fn prop_sat(fs: &[Formula]) -> bool {
    let mut atoms = BTreeSet::new();
    fs.iter().for_each(|f| prop_atoms(f, &mut atoms));
    let atoms: Vec<Iri> = atoms.into_iter().collect();
    assignments(&atoms).iter().any(|a| fs.iter().all(|f| prop_eval(f, &|i| a[i])))
}

pub fn random_formula(rng: &mut impl Rng, atoms: &[Iri], depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..12) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::Atom(atoms.choose(rng).unwrap().clone()),
        };
    }
    let op = rng.gen_range(0..5);
    let a = random_formula(rng, atoms, depth - 1);
    if op == 0 {
        return Formula::Not(Box::new(a));
    }
    let b = random_formula(rng, atoms, depth - 1);
    match op {
        1 => Formula::And(vec![a, b]),
        2 => Formula::Or(vec![a, b]),
        3 => Formula::Implies(Box::new(a), Box::new(b)),
        _ => Formula::Iff(Box::new(a), Box::new(b)),
    }
}

// ---- role-free description logic over finite domains ----------------------

/// A finite interpretation: classes and unary predicates as bitsets over
/// `0..n`, individuals and constants as elements.
#[derive(Debug, Clone)]
pub struct Model {
    pub n: usize,
    pub sets: HashMap<Iri, u32>,
    pub elements: HashMap<Iri, usize>,
    /// Interpret every object property as the empty relation instead of
    /// rejecting role constructs.
    pub empty_roles: bool,
}

impl Model {
    fn all(&self) -> u32 {
        (1u32 << self.n) - 1
    }

    fn set(&self, c: &Iri) -> u32 {
        *self.sets.get(c).unwrap_or_else(|| panic!("uninterpreted <{c}>"))
    }

    fn element(&self, i: &Iri) -> usize {
        *self.elements.get(i).unwrap_or_else(|| panic!("uninterpreted <{i}>"))
    }
}

pub fn extension(c: &ClassExpr, m: &Model) -> u32 {
    match c {
        ClassExpr::Thing => m.all(),
        ClassExpr::Nothing => 0,
        ClassExpr::Class(a) => m.set(a),
        ClassExpr::And(xs) => xs.iter().fold(m.all(), |acc, x| acc & extension(x, m)),
        ClassExpr::Or(xs) => xs.iter().fold(0, |acc, x| acc | extension(x, m)),
        ClassExpr::Not(x) => m.all() & !extension(x, m),
        ClassExpr::Some(..) if m.empty_roles => 0,
        ClassExpr::Only(..) if m.empty_roles => m.all(),
        ClassExpr::Exactly(n, ..) if m.empty_roles => {
            if *n == 0 {
                m.all()
            } else {
                0
            }
        }
        other => panic!("not role-free: {other:?}"),
    }
}

pub fn dl_holds(a: &ManchesterAxiom, m: &Model) -> bool {
    match a {
        ManchesterAxiom::SubClassOf(c, d) => extension(c, m) & !extension(d, m) == 0,
        ManchesterAxiom::EquivalentTo(c, d) => m.set(c) == extension(d, m),
        ManchesterAxiom::DisjointUnionOf(c, parts) => {
            let exts: Vec<u32> = parts.iter().map(|p| extension(p, m)).collect();
            let pairwise = (0..exts.len()).all(|i| (i + 1..exts.len()).all(|j| exts[i] & exts[j] == 0));
            pairwise && exts.iter().fold(0, |a, e| a | e) == m.set(c)
        }
        ManchesterAxiom::Types(Individual::Named(i), c) => extension(c, m) >> m.element(i) & 1 == 1,
        ManchesterAxiom::Characteristic(..) | ManchesterAxiom::SubPropertyOf(..) if m.empty_roles => true,
        other => panic!("outside the oracle's fragment: {other:?}"),
    }
}

fn class_names(c: &ClassExpr, out: &mut BTreeSet<Iri>) {
    match c {
        ClassExpr::Class(a) => {
            out.insert(a.clone());
        }
        ClassExpr::And(xs) | ClassExpr::Or(xs) => xs.iter().for_each(|x| class_names(x, out)),
        ClassExpr::Not(x) => class_names(x, out),
        _ => {}
    }
}

fn axiom_names(a: &ManchesterAxiom, classes: &mut BTreeSet<Iri>, individuals: &mut BTreeSet<Iri>) {
    match a {
        ManchesterAxiom::SubClassOf(c, d) => {
            class_names(c, classes);
            class_names(d, classes);
        }
        ManchesterAxiom::EquivalentTo(c, d) => {
            classes.insert(c.clone());
            class_names(d, classes);
        }
        ManchesterAxiom::DisjointUnionOf(c, ps) => {
            classes.insert(c.clone());
            ps.iter().for_each(|p| class_names(p, classes));
        }
        ManchesterAxiom::Types(Individual::Named(i), c) => {
            individuals.insert(i.clone());
            class_names(c, classes);
        }
        other => panic!("outside the oracle's fragment: {other:?}"),
    }
}

/// Every interpretation of `preds` (unary) and `consts` over domains of
/// size 1 to `max_n`.
pub fn models<'a>(preds: &'a [Iri], consts: &'a [Iri], max_n: usize) -> impl Iterator<Item = Model> + 'a {
    (1..=max_n).flat_map(move |n| {
        let set_choices = 1u64 << (n * preds.len());
        let elem_choices = n.pow(consts.len() as u32) as u64;
        (0..set_choices).flat_map(move |s| {
            (0..elem_choices).map(move |e| {
                let mask = (1u64 << n) - 1;
                let sets = preds.iter().enumerate().map(|(i, p)| (p.clone(), ((s >> (i * n)) & mask) as u32)).collect();
                let mut rest = e;
                let elements = consts
                    .iter()
                    .map(|c| {
                        let v = (rest % n as u64) as usize;
                        rest /= n as u64;
                        (c.clone(), v)
                    })
                    .collect();
                Model { n, sets, elements, empty_roles: false }
            })
        })
    })
}

/// Satisfiable in some model with at most `max_n` elements.
pub fn dl_sat_upto(axioms: &[ManchesterAxiom], max_n: usize) -> bool {
    let (mut classes, mut individuals) = (BTreeSet::new(), BTreeSet::new());
    axioms.iter().for_each(|a| axiom_names(a, &mut classes, &mut individuals));
    let classes: Vec<Iri> = classes.into_iter().collect();
    let individuals: Vec<Iri> = individuals.into_iter().collect();
    let found = models(&classes, &individuals, max_n).any(|m| axioms.iter().all(|a| dl_holds(a, &m)));
    found
}

pub fn random_class(rng: &mut impl Rng, classes: &[Iri], depth: u32) -> ClassExpr {
    if depth == 0 || rng.gen_bool(0.35) {
        return match rng.gen_range(0..10) {
            0 => ClassExpr::Thing,
            1 => ClassExpr::Nothing,
            _ => ClassExpr::Class(classes.choose(rng).unwrap().clone()),
        };
    }
    match rng.gen_range(0..3) {
        0 => ClassExpr::Not(Box::new(random_class(rng, classes, depth - 1))),
        1 => ClassExpr::And(vec![random_class(rng, classes, depth - 1), random_class(rng, classes, depth - 1)]),
        _ => ClassExpr::Or(vec![random_class(rng, classes, depth - 1), random_class(rng, classes, depth - 1)]),
    }
}

pub fn random_axiom(rng: &mut impl Rng, classes: &[Iri], individuals: &[Iri]) -> ManchesterAxiom {
    let named = |rng: &mut dyn rand::RngCore| classes.choose(rng).unwrap().clone();
    match rng.gen_range(0..5) {
        0 | 1 => ManchesterAxiom::SubClassOf(random_class(rng, classes, 2), random_class(rng, classes, 2)),
        2 => ManchesterAxiom::EquivalentTo(named(rng), random_class(rng, classes, 2)),
        3 => {
            let parts = (0..rng.gen_range(1..=3)).map(|_| random_class(rng, classes, 1)).collect();
            ManchesterAxiom::DisjointUnionOf(named(rng), parts)
        }
        _ => ManchesterAxiom::Types(Individual::Named(individuals.choose(rng).unwrap().clone()), random_class(rng, classes, 2)),
    }
}

// ---- first-order evaluation of CLIF sentences -------------------------------

fn term_value(t: &ClifTerm, m: &Model, env: &HashMap<String, usize>) -> usize {
    match t {
        ClifTerm::Var(v) => *env.get(v).unwrap_or_else(|| panic!("free variable {v}")),
        ClifTerm::Name(n) => m.element(n),
        other => panic!("term outside the oracle's fragment: {other:?}"),
    }
}

pub fn cl_holds(s: &ClifSentence, m: &Model, env: &mut HashMap<String, usize>) -> bool {
    match s {
        ClifSentence::Atom { pred: ClifTerm::Name(p), args } if args.len() == 1 => {
            m.set(p) >> term_value(&args[0], m, env) & 1 == 1
        }
        ClifSentence::Equal(a, b) => term_value(a, m, env) == term_value(b, m, env),
        ClifSentence::Not(x) => !cl_holds(x, m, env),
        ClifSentence::And(xs) => xs.iter().all(|x| cl_holds(x, m, env)),
        ClifSentence::Or(xs) => xs.iter().any(|x| cl_holds(x, m, env)),
        ClifSentence::If(a, b) => !cl_holds(a, m, env) || cl_holds(b, m, env),
        ClifSentence::Iff(a, b) => cl_holds(a, m, env) == cl_holds(b, m, env),
        ClifSentence::Forall(vs, body) => quantify(vs, body, m, env, true),
        ClifSentence::Exists(vs, body) => quantify(vs, body, m, env, false),
        other => panic!("sentence outside the oracle's fragment: {other:?}"),
    }
}

fn quantify(vs: &[String], body: &ClifSentence, m: &Model, env: &mut HashMap<String, usize>, all: bool) -> bool {
    let Some((v, rest)) = vs.split_first() else { return cl_holds(body, m, env) };
    let saved = env.get(v).copied();
    let mut result = all;
    for e in 0..m.n {
        env.insert(v.clone(), e);
        if quantify(rest, body, m, env, all) != all {
            result = !all;
            break;
        }
    }
    match saved {
        Some(x) => env.insert(v.clone(), x),
        None => env.remove(v),
    };
    result
}

fn cl_signature(s: &ClifSentence, preds: &mut BTreeSet<Iri>, consts: &mut BTreeSet<Iri>) {
    let mut term = |t: &ClifTerm| {
        if let ClifTerm::Name(n) = t {
            consts.insert(n.clone());
        }
    };
    match s {
        ClifSentence::Atom { pred, args } => {
            if let ClifTerm::Name(p) = pred {
                preds.insert(p.clone());
            }
            args.iter().for_each(&mut term);
        }
        ClifSentence::Equal(a, b) => {
            term(a);
            term(b);
        }
        ClifSentence::Not(x) | ClifSentence::Forall(_, x) | ClifSentence::Exists(_, x) => cl_signature(x, preds, consts),
        ClifSentence::And(xs) | ClifSentence::Or(xs) => xs.iter().for_each(|x| cl_signature(x, preds, consts)),
        ClifSentence::If(a, b) | ClifSentence::Iff(a, b) => {
            cl_signature(a, preds, consts);
            cl_signature(b, preds, consts);
        }
        ClifSentence::Imports(_) => {}
    }
}

pub fn cl_sat_upto(sentences: &[ClifSentence], max_n: usize) -> bool {
    let (mut preds, mut consts) = (BTreeSet::new(), BTreeSet::new());
    sentences.iter().for_each(|s| cl_signature(s, &mut preds, &mut consts));
    let preds: Vec<Iri> = preds.into_iter().collect();
    let consts: Vec<Iri> = consts.into_iter().collect();
    let found = models(&preds, &consts, max_n).any(|m| sentences.iter().all(|s| cl_holds(s, &m, &mut HashMap::new())));
    found
}

/// Quantifier nesting depth, counting each bound variable list once.
pub fn cl_depth(s: &ClifSentence) -> usize {
    match s {
        ClifSentence::Forall(_, x) | ClifSentence::Exists(_, x) => 1 + cl_depth(x),
        ClifSentence::Not(x) => cl_depth(x),
        ClifSentence::And(xs) | ClifSentence::Or(xs) => xs.iter().map(cl_depth).max().unwrap_or(0),
        ClifSentence::If(a, b) | ClifSentence::Iff(a, b) => cl_depth(a).max(cl_depth(b)),
        _ => 0,
    }
}

// ---- RDF graph equality -----------------------------------------------------

/// Blank-node isomorphism by trying every bijection. Only for small graphs.
pub fn iso_bruteforce(a: &[RdfTriple], b: &[RdfTriple]) -> bool {
    let set = |g: &[RdfTriple]| g.iter().cloned().collect::<BTreeSet<_>>();
    let (sa, sb) = (set(a), set(b));
    if sa.len() != sb.len() {
        return false;
    }
    let blanks = |g: &BTreeSet<RdfTriple>| -> Vec<String> {
        let mut v: BTreeSet<String> = BTreeSet::new();
        for t in g {
            for x in [&t.subject, &t.object] {
                if let RdfTerm::Blank(l) = x {
                    v.insert(l.clone());
                }
            }
        }
        v.into_iter().collect()
    };
    let (ba, bb) = (blanks(&sa), blanks(&sb));
    if ba.len() != bb.len() {
        return false;
    }
    assert!(ba.len() <= 8, "too many blank nodes for brute force");
    let mut perm: Vec<usize> = (0..bb.len()).collect();
    loop {
        let map: HashMap<&String, &String> = ba.iter().zip(perm.iter().map(|&i| &bb[i])).collect();
        let rename = |t: &RdfTerm| match t {
            RdfTerm::Blank(l) => RdfTerm::Blank(map[l].clone()),
            other => other.clone(),
        };
        let mapped: BTreeSet<RdfTriple> =
            sa.iter().map(|t| RdfTriple::new(rename(&t.subject), t.predicate.clone(), rename(&t.object))).collect();
        if mapped == sb {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else { return false };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}
