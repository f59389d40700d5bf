pub mod adapters;
pub mod analyzer;
pub mod cli;
pub mod diagnostics;
pub mod iri;
pub mod known;
pub mod model;
pub mod parser;
pub mod registry;
pub mod serialize;
pub mod translate;
pub mod vocab;
