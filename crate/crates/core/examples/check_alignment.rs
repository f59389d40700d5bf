//! Checks the alignment of listing3.dol against the ontologies it relates.

use std::path::PathBuf;

use dolc::adapters::AdapterRegistry;
use dolc::analyzer::{analyze, AnalyzerOptions};
use dolc::iri::Iri;
use dolc::parser::parse_document;
use dolc::registry::RegistryGraph;

fn main() {
    let dir = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden"));
    let parsed = parse_document(include_str!("../tests/golden/listing3.dol"));
    let opts = AnalyzerOptions { include_path: vec![dir], lossy: true };
    let analysis = analyze(&parsed.document, Some(&parsed.source_map), &RegistryGraph::builtin(), &AdapterRegistry::builtin(), &opts);
    for d in &analysis.diagnostics {
        eprintln!("{}", d.render("listing3.dol"));
    }
    let link = Iri::parse("https://raw.github.com/doroam/planning-do-roam/master/ActivitiesToTags").unwrap();
    match analysis.report(&link) {
        Some(r) => print!("{}", r.render()),
        None => println!("no report for {link}"),
    }
}
