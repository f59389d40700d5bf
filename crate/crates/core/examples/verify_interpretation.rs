//! Checks the interpretation in listing1.dol, then a broken variant of it.

use dolc::adapters::AdapterRegistry;
use dolc::analyzer::{analyze, check_interpretation, AnalyzerOptions};
use dolc::iri::Iri;
use dolc::model::LinkPayload;
use dolc::parser::parse_document;
use dolc::registry::RegistryGraph;

fn main() {
    let registry = RegistryGraph::builtin();
    let parsed = parse_document(include_str!("../tests/golden/listing1.dol"));
    let analysis =
        analyze(&parsed.document, Some(&parsed.source_map), &registry, &AdapterRegistry::builtin(), &AnalyzerOptions::default());
    let m = |s: &str| Iri::parse(format!("http://www.example.org/mereology#{s}")).unwrap();

    let report = analysis.report(&m("TaxonomyToParthood")).unwrap();
    print!("{}", report.render());

    // map S to Atom instead of SpaceRegion
    let mut link = analysis.document.link(&m("TaxonomyToParthood")).unwrap().clone();
    if let LinkPayload::SymbolMap(map) = &mut link.payload {
        map.renames.iter_mut().filter(|r| r.from == m("S")).for_each(|r| r.to = m("Atom"));
    }
    let source = &analysis.definition_node(&m("Taxonomy")).unwrap().content;
    let target = &analysis.definition_node(&m("BasicParthood")).unwrap().content;
    let (broken, _) = check_interpretation(&link, source, target, &registry);
    print!("{}", broken.render());
}
