//! IRIs of the built-in logics, languages, serializations and mappings.

use crate::iri::{Iri, PrefixMap};

pub const LOGICS: &str = "http://purl.net/dol/logics/";
pub const LANGUAGES: &str = "http://purl.net/dol/languages/";
pub const SERIALIZATIONS: &str = "http://purl.net/dol/serializations/";
pub const TRANSLATIONS: &str = "http://purl.net/dol/translations/";
pub const PROJECTIONS: &str = "http://purl.net/dol/projections/";

pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

pub const LOGIC_PROPOSITIONAL: &str = "http://purl.net/dol/logics/Propositional";
pub const LOGIC_SROIQ: &str = "http://purl.net/dol/logics/SROIQ";
pub const LOGIC_COMMON_LOGIC: &str = "http://purl.net/dol/logics/CommonLogic";
pub const LOGIC_RDF: &str = "http://purl.net/dol/logics/RDF";

pub const SER_PROP_HETS: &str = "http://purl.net/dol/serializations/Prop/Hets";
pub const SER_OWL2_MANCHESTER: &str = "http://purl.net/dol/serializations/OWL2/Manchester";
pub const SER_CLIF: &str = "http://purl.net/dol/serializations/CommonLogic/CLIF";
pub const SER_RDF_TURTLE: &str = "http://purl.net/dol/serializations/RDF/Turtle";

pub const TRANS_PROPOSITIONAL_TO_SROIQ: &str = "http://purl.net/dol/translations/PropositionalToSROIQ";
pub const TRANS_SROIQ_TO_CL: &str = "http://purl.net/dol/translations/SROIQtoCL";
pub const TRANS_RDF_TO_SROIQ: &str = "http://purl.net/dol/translations/RDFtoSROIQ";
pub const PROJ_SROIQ_TO_RDF: &str = "http://purl.net/dol/projections/SROIQtoRDF";

pub const OWL_THING: &str = "http://www.w3.org/2002/07/owl#Thing";
pub const OWL_NOTHING: &str = "http://www.w3.org/2002/07/owl#Nothing";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

/// Parses one of the constants above.
pub fn iri(s: &str) -> Iri {
    Iri::parse(s).expect("well-known IRI constant is absolute")
}

/// The prefixes accepted on the command line and used when printing
/// registry entries: `log:`, `lang:`, `ser:`, `trans:`, `proj:`.
pub fn registry_prefixes() -> PrefixMap {
    [
        ("lang", LANGUAGES),
        ("log", LOGICS),
        ("proj", PROJECTIONS),
        ("ser", SERIALIZATIONS),
        ("trans", TRANSLATIONS),
    ]
    .into_iter()
    .collect()
}
