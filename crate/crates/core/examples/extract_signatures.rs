//! Analyzes listing1.dol and prints the signature and sentences of each
//! ontology definition.

use dolc::adapters::AdapterRegistry;
use dolc::analyzer::{analyze, AnalyzerOptions};
use dolc::parser::parse_document;
use dolc::registry::RegistryGraph;

fn main() {
    let parsed = parse_document(include_str!("../tests/golden/listing1.dol"));
    let analysis = analyze(
        &parsed.document,
        Some(&parsed.source_map),
        &RegistryGraph::builtin(),
        &AdapterRegistry::builtin(),
        &AnalyzerOptions::default(),
    );
    for (name, _) in &analysis.definitions {
        let content = &analysis.definition_node(name).unwrap().content;
        println!("{} ({})", name.local_name(), content.logic.local_name());
        for e in content.entities.values() {
            println!("  {:<16} {}", e.kind.to_string(), e.iri.local_name());
        }
        for s in &content.sentences {
            println!("  . {}", s.form);
        }
    }
}
