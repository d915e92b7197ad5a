//! Legal documents as a knowledge graph: vocabulary, the bundled mapping,
//! a synthetic corpus, a hand-written baseline transformer and the
//! concept query.

mod adhoc;
mod generate;
mod model;
mod query;
mod taxonomy;

pub use adhoc::{adhoc_parse, SchemaViolation};
pub use generate::{corpus_file_name, generate_corpus, generate_document, FRAGMENT_TYPES};
pub use model::{serialize_document, Fragment, LegalDocument};
pub use query::{
    documents_for_concept, documents_for_concept_with, match_pattern, Expansion,
};
pub use taxonomy::{load_taxonomy, taxonomy_fixture, taxonomy_ntriples, TaxonomyError, TaxonomyFixture};

use std::sync::OnceLock;

use crate::mapping::{parse_mapping, MappingDocument};

pub mod vocab {
    pub const PCICORE: &str = "http://onto.wolterskluwer.com/pci/core/";
    pub const FRAGMENT: &str = "http://onto.wolterskluwer.com/pci/core/Fragment";
    pub const FRAGMENT_TYPE: &str = "http://onto.wolterskluwer.com/pci/core/FragmentType";
    pub const HAS_CONTENT: &str = "http://onto.wolterskluwer.com/pci/core/hasContent";
    pub const IS_FRAGMENT_OF: &str = "http://onto.wolterskluwer.com/pci/core/isFragmentOf";
    pub const HAS_FRAGMENT: &str = "http://onto.wolterskluwer.com/pci/core/hasFragment";
    pub const HAS_KEYWORD: &str = "http://onto.wolterskluwer.com/pci/core/hasKeyword";

    pub const DCTERMS: &str = "http://purl.org/dc/terms/";
    pub const SUBJECT: &str = "http://purl.org/dc/terms/subject";
    pub const TYPE: &str = "http://purl.org/dc/terms/type";

    pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
    pub const CONCEPT: &str = "http://www.w3.org/2004/02/skos/core#Concept";
    pub const NARROWER: &str = "http://www.w3.org/2004/02/skos/core#narrower";
    pub const BROADER: &str = "http://www.w3.org/2004/02/skos/core#broader";

    pub const FRBR: &str = "http://purl.org/vocab/frbr/core#";
    pub const MANIFESTATION: &str = "http://purl.org/vocab/frbr/core#Manifestation";

    pub const WKD_LAW: &str = "http://taxonomy.wolterskluwer.de/law/";

    /// Where generated resources live.
    pub const DOC_BASE: &str = "http://data.example/doc/";
    pub const FRAGMENT_TYPE_BASE: &str = "http://data.example/fragment-type/";

    pub const ALL: &[&str] = &[
        FRAGMENT,
        FRAGMENT_TYPE,
        HAS_CONTENT,
        IS_FRAGMENT_OF,
        HAS_FRAGMENT,
        HAS_KEYWORD,
        SUBJECT,
        TYPE,
        CONCEPT,
        NARROWER,
        BROADER,
        MANIFESTATION,
        WKD_LAW,
    ];
}

/// Turtle source of the bundled mapping.
pub const REFERENCE_MAPPING_TTL: &str = include_str!("../../mappings/legal.rml.ttl");

pub fn reference_mapping() -> MappingDocument {
    static PARSED: OnceLock<MappingDocument> = OnceLock::new();
    PARSED
        .get_or_init(|| parse_mapping(REFERENCE_MAPPING_TTL).expect("bundled mapping parses"))
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::{validate_mapping, TermMap, TermValue};
    use crate::rdf::make_iri;

    #[test]
    fn vocabulary_is_valid() {
        for iri in vocab::ALL {
            make_iri(iri).unwrap();
        }
    }

    #[test]
    fn reference_mapping_shape() {
        let m = reference_mapping();
        assert_eq!(m.triples_maps.len(), 3);
        assert_eq!(validate_mapping(&m), vec![]);
        let maps = m.term_maps();
        assert!(maps
            .iter()
            .any(|t| matches!(&t.value, TermValue::Reference(r) if r.ends_with("string()"))));
        assert!(maps.contains(&&TermMap::constant_iri(vocab::IS_FRAGMENT_OF)));
    }
}
