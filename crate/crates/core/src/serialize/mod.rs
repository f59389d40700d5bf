//! Emission in DOL Text, DOL XML, DOL RDF and linked data.

pub mod rdf;
pub mod text;
pub mod xml;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::adapters::turtle::{parse_turtle, write_turtle, RdfTriple};
use crate::adapters::AdapterError;
use crate::iri::{Iri, PrefixMap};
use crate::model::DistributedOntology;

pub use rdf::{dol_rdf, linked_data, read_dol_rdf, RdfReadError};
pub use text::{dol_name, print_text};
pub use xml::{read_xml, validate_xml, write_xml, XmlError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Xml,
    Rdf,
    LinkedData,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "xml" => Ok(Format::Xml),
            "rdf" => Ok(Format::Rdf),
            "ld" => Ok(Format::LinkedData),
            _ => Err(format!("unknown format `{s}` (expected text, xml, rdf or ld)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Xml => "xml",
            Format::Rdf => "rdf",
            Format::LinkedData => "ld",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmissionOptions {
    pub format: Format,
    /// Linked data only: the IRI every description is `rdfs:isDefinedBy`.
    /// Defaults to the document IRI.
    pub base_iri: Option<Iri>,
    pub pretty: bool,
}

impl EmissionOptions {
    pub fn new(format: Format) -> Self {
        EmissionOptions { format, base_iri: None, pretty: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("linked data needs an analyzed document (run the analyzer first)")]
    Unanalyzed,
    #[error("linked data needs a base IRI: the document has no IRI and none was given")]
    NoBase,
}

pub fn emit(doc: &DistributedOntology, opts: &EmissionOptions) -> Result<String, EmitError> {
    Ok(match opts.format {
        Format::Text => print_text(doc),
        Format::Xml => write_xml(doc, opts.pretty),
        Format::Rdf => write_turtle(&dol_rdf(doc), &rdf::export_prefixes(doc)),
        Format::LinkedData => {
            if !doc.is_analyzed() {
                return Err(EmitError::Unanalyzed);
            }
            let base = opts.base_iri.clone().or_else(|| doc.iri.clone()).ok_or(EmitError::NoBase)?;
            write_turtle(&linked_data(doc, &base), &rdf::export_prefixes(doc))
        }
    })
}

/// Reads Turtle into its statement set. Blank nodes are scoped to the
/// document and renamed `b0`, `b1`, ...
pub fn read_structural_rdf(text: &str) -> Result<Vec<RdfTriple>, AdapterError> {
    Ok(parse_turtle(text, &PrefixMap::new(), "b")?.triples)
}

/// Rebuilds a document from the Turtle written for [`Format::Rdf`].
pub fn read_rdf_document(text: &str) -> Result<DistributedOntology, RdfReadError> {
    let triples = read_structural_rdf(text).map_err(|e| RdfReadError(e.to_string()))?;
    read_dol_rdf(&triples)
}
