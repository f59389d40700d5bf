//! Translates the Taxonomy of listing1.dol to SROIQ and then to Common Logic.

use dolc::adapters::AdapterRegistry;
use dolc::analyzer::{analyze, AnalyzerOptions};
use dolc::iri::Iri;
use dolc::known;
use dolc::parser::parse_document;
use dolc::registry::RegistryGraph;
use dolc::translate::{apply_translation, TranslationImpl};

fn main() {
    let parsed = parse_document(include_str!("../tests/golden/listing1.dol"));
    let analysis = analyze(
        &parsed.document,
        Some(&parsed.source_map),
        &RegistryGraph::builtin(),
        &AdapterRegistry::builtin(),
        &AnalyzerOptions::default(),
    );
    let taxonomy = Iri::parse("http://www.example.org/mereology#Taxonomy").unwrap();
    let mut current = analysis.definition_node(&taxonomy).unwrap().content.clone();
    for step in [known::TRANS_PROPOSITIONAL_TO_SROIQ, known::TRANS_SROIQ_TO_CL] {
        let t = TranslationImpl::builtin(&Iri::parse(step).unwrap()).unwrap();
        current = apply_translation(&t, &current).unwrap();
        println!("after {}:", Iri::parse(step).unwrap().local_name());
        for s in &current.sentences {
            println!("  {}", s.form);
        }
    }
}
