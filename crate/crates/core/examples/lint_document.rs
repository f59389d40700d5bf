//! Runs the full analysis over a small document with common mistakes and
//! prints the diagnostics.

use dolc::adapters::AdapterRegistry;
use dolc::analyzer::{analyze, AnalyzerOptions};
use dolc::parser::parse_document;
use dolc::registry::RegistryGraph;

const DOC: &str = "\
%prefix( :    <http://example.org/lint#>
         lang: <http://purl.net/dol/languages/>
         ser:  <http://purl.net/dol/serializations/> )%
distributed-ontology Lint

language lang:OWL2/DL syntax ser:OWL2/Manchester
ontology Animals =
  Class: Dog SubClassOf: Animal

ontology Loop1 = Loop2
ontology Loop2 = Loop1

ontology Broken = Animals then Missing
";

fn main() {
    let parsed = parse_document(DOC);
    let analysis = analyze(
        &parsed.document,
        Some(&parsed.source_map),
        &RegistryGraph::builtin(),
        &AdapterRegistry::builtin(),
        &AnalyzerOptions::default(),
    );
    for d in parsed.diagnostics.iter().chain(&analysis.diagnostics) {
        println!("{}", d.render("lint.dol"));
    }
}
