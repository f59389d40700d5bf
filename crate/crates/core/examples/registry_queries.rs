//! Queries the built-in registry: triple completion and default translations.

use dolc::iri::Iri;
use dolc::known;
use dolc::registry::RegistryGraph;

fn main() {
    let g = RegistryGraph::builtin();
    let iri = |s: &str| Iri::parse(s).unwrap();
    let owl = iri(&format!("{}OWL2/DL", known::LANGUAGES));
    let manchester = iri(known::SER_OWL2_MANCHESTER);
    match g.infer_triple(Some(&owl), None, Some(&manchester)) {
        Ok(t) => println!("OWL2/DL + Manchester completes to {t}"),
        Err(e) => println!("no completion: {e}"),
    }
    for (s, t) in [
        (known::LOGIC_PROPOSITIONAL, known::LOGIC_SROIQ),
        (known::LOGIC_PROPOSITIONAL, known::LOGIC_COMMON_LOGIC),
        (known::LOGIC_COMMON_LOGIC, known::LOGIC_PROPOSITIONAL),
    ] {
        let (s, t) = (iri(s), iri(t));
        match g.default_translation(&s, &t) {
            Ok(path) => {
                let names: Vec<&str> = path.iter().map(|m| m.iri.local_name()).collect();
                println!("{} -> {}: {}", s.local_name(), t.local_name(), names.join(" ; "));
            }
            Err(e) => println!("{} -> {}: {e}", s.local_name(), t.local_name()),
        }
    }
}
