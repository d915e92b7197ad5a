//! RML mapping documents: model, Turtle-subset reader and writer, validation.

mod model;
mod parse;
mod reference;
mod turtle;
mod validate;
mod write;

pub use model::*;
pub use parse::{parse_mapping, FNML, QL_XPATH, RML, RR};
pub use reference::{compile_reference, compile_template, ExprError, Reference, Template, TemplatePart};
pub use validate::{validate_mapping, Diagnostic};
pub use write::to_turtle;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MappingError {
    #[error("Turtle syntax error on line {line}: {reason}")]
    TurtleSyntax { line: usize, reason: String },
    #[error("unknown vocabulary term <{0}>")]
    UnknownVocabularyTerm(String),
    #[error("invalid mapping: {0}")]
    Structural(String),
}
