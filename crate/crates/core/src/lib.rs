//! Declarative XML-to-RDF uplift: RDF terms and graphs, an XPath subset,
//! RML mappings, the mapping engine, the legal-document corpus and the
//! benchmark statistics.

pub mod bench;
pub mod engine;
pub mod legal;
pub mod mapping;
pub mod rdf;
pub mod xml;

pub use engine::{execute_mapping, Engine, EngineConfig, EngineError, FunctionRegistry, Warning};
pub use mapping::{parse_mapping, validate_mapping, MappingDocument, MappingError};
pub use rdf::{graph_equal, parse_ntriples, to_ntriples, Graph, Iri, Term, Triple};
pub use xml::{eval_xpath, parse_xml, XmlDocument, XmlNode};
