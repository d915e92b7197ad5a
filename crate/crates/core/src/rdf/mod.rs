//! RDF terms, triples, set-semantic graphs and canonical N-Triples.

mod graph;
mod iso;
mod ntriples;
mod term;

pub use graph::Graph;
pub use iso::graph_equal;
pub use ntriples::{parse_ntriples, to_ntriples, write_ntriples};
pub use term::{
    is_language_tag, make_iri, make_literal, BlankNode, Iri, Literal, Term, Triple, RDF_TYPE,
    XSD_STRING,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RdfError {
    #[error("invalid IRI at position {position}: {reason}")]
    InvalidIri { position: usize, reason: String },
    #[error("literal cannot carry both a datatype and a language tag")]
    ConflictingQualifiers,
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("invalid blank node label {0:?}")]
    InvalidBlankLabel(String),
    #[error("a literal cannot be the subject of a triple")]
    LiteralSubject,
    #[error("N-Triples syntax error on line {line}: {reason}")]
    Syntax { line: usize, reason: String },
}
