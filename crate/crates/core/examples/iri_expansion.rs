//! Expands and compacts names against the prefix map of listing1.dol.

use dolc::iri::{compact, expand, Curie};
use dolc::parser::parse_document;

fn main() {
    let text = include_str!("../tests/golden/listing1.dol");
    let doc = parse_document(text).document;
    for name in [":Mereology", "log:Propositional", "trans:SROIQtoCL", "owl:Nothing", "undeclared:x"] {
        let curie = Curie::parse(name).unwrap();
        match expand(&curie, &doc.prefixes) {
            Ok(iri) => println!("{name:20} {iri}  (compacts to {})", compact(&iri, &doc.prefixes)),
            Err(e) => println!("{name:20} error: {e}"),
        }
    }
    // document names may also be written as full IRIs
    let full = doc.prefixes.resolve("<http://www.example.org/mereology#Taxonomy>").unwrap();
    println!("{:20} {full}  (compacts to {})", "<…#Taxonomy>", compact(&full, &doc.prefixes));
}
