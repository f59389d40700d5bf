//! Terms of the DOL RDF vocabulary used by the RDF and linked-data
//! exports and by the registry description. Every term lives under
//! [`NS`]; the term names are this crate's own and are all listed here.

use crate::iri::Iri;

pub const NS: &str = "http://purl.net/dol/1.0/rdf#";

macro_rules! terms {
    ($($name:ident = $local:literal;)*) => {
        $(pub const $name: &str = concat!("http://purl.net/dol/1.0/rdf#", $local);)*
        /// Every term, as `(local name, IRI)`.
        pub const ALL: &[(&str, &str)] = &[$(($local, $name)),*];
    };
}

terms! {
    // classes
    DISTRIBUTED_ONTOLOGY = "DistributedOntology";
    ONTOLOGY = "Ontology";
    BASIC_ONTOLOGY = "BasicOntology";
    LOGIC_DECLARATION = "LogicDeclaration";
    LINK = "Link";
    INTERPRETATION = "Interpretation";
    ALIGNMENT = "Alignment";
    IMPORT = "Import";
    CONSERVATIVE_EXTENSION_CLAIM = "ConservativeExtensionClaim";
    DEFINITIONAL_EXTENSION_CLAIM = "DefinitionalExtensionClaim";
    REFERENCE = "Reference";
    EXTENSION = "Extension";
    UNION = "Union";
    TRANSLATION_EXPR = "TranslationExpression";
    PROJECTION_EXPR = "ProjectionExpression";
    CONTEXT_SHIFT = "ContextShift";
    SYMBOL_MAP = "SymbolMap";
    SYMBOL_RENAME = "SymbolRename";
    CORRESPONDENCE = "Correspondence";
    ENTITY = "Entity";
    SENTENCE = "Sentence";
    LOGIC = "Logic";
    ONTOLOGY_LANGUAGE = "OntologyLanguage";
    SERIALIZATION = "Serialization";
    TRANSLATION = "Translation";
    PROJECTION = "Projection";
    LOGIC_MAPPING = "LogicMapping";
    LANGUAGE_MAPPING = "LanguageMapping";
    PREFIX_BINDING = "PrefixBinding";

    // document structure
    PREFIX = "prefix";
    PREFIX_LABEL = "prefixLabel";
    NAMESPACE = "namespace";
    HAS_ITEM = "hasItem";
    POSITION = "position";
    DEFINES = "defines";
    BODY = "body";
    BASE = "base";
    EXTENDED_BY = "extendedBy";
    LEFT = "left";
    RIGHT = "right";
    MAPPING = "mapping";
    RENAME = "rename";
    RENAMES_FROM = "from";
    RENAMES_TO = "to";
    DECLARATION = "declaration";
    INNER = "inner";
    REFERS_TO = "refersTo";
    TEXT = "text";
    SOURCE = "source";
    TARGET = "target";
    SYMBOL_MAP_PROP = "symbolMap";
    CORRESPONDS = "correspondence";
    CORRESPONDENCE_LEFT = "entity";
    RELATION = "relation";
    TERM = "term";

    // logic context
    LANGUAGE = "language";
    LOGIC_PROP = "logic";
    SERIALIZATION_PROP = "serialization";

    // structural parts
    PART_OF = "partOf";
    HAS_ENTITY = "hasEntity";
    HAS_SENTENCE = "hasSentence";
    ENTITY_KIND = "entityKind";
    DECLARED = "declared";
    SENTENCE_COUNT = "sentenceCount";
    ENTITY_COUNT = "entityCount";
    IMPORTS = "imports";

    // registry
    SUPPORTS_SERIALIZATION = "supportsSerialization";
    SUBLANGUAGE_OF = "sublanguageOf";
    SUPPORTS_IRIS = "supportsIRIs";
    FILE_EXTENSION = "fileExtension";
    MAPPING_SOURCE = "mappingSource";
    MAPPING_TARGET = "mappingTarget";
    IS_DEFAULT = "isDefault";
    ADJOINT_OF = "adjointOf";
    BACKED_BY = "backedBy";
}

pub fn term(iri: &str) -> Iri {
    Iri::parse(iri).expect("vocabulary term is absolute")
}
