//! Analyzes listing1.dol and writes it as structural RDF and as linked data.

use dolc::adapters::AdapterRegistry;
use dolc::analyzer::{analyze, AnalyzerOptions};
use dolc::parser::parse_document;
use dolc::registry::RegistryGraph;
use dolc::serialize::{emit, EmissionOptions, Format};

fn main() {
    let parsed = parse_document(include_str!("../tests/golden/listing1.dol"));
    let analysis = analyze(
        &parsed.document,
        Some(&parsed.source_map),
        &RegistryGraph::builtin(),
        &AdapterRegistry::builtin(),
        &AnalyzerOptions::default(),
    );
    println!("# structural RDF\n{}", emit(&analysis.document, &EmissionOptions::new(Format::Rdf)).unwrap());
    println!("# linked data\n{}", emit(&analysis.document, &EmissionOptions::new(Format::LinkedData)).unwrap());
}
