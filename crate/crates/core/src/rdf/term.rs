use std::fmt;

use super::RdfError;

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

/// An absolute IRI.
///
/// Validation is syntactic: a scheme followed by `:`, no characters that
/// RFC 3987 forbids outside of percent-encoding, and well-formed `%XX`
/// escapes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(String);

impl Iri {
    pub fn new(text: impl Into<String>) -> Result<Self, RdfError> {
        let text = text.into();
        validate_iri(&text)?;
        Ok(Iri(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

fn invalid(position: usize, reason: impl Into<String>) -> RdfError {
    RdfError::InvalidIri {
        position,
        reason: reason.into(),
    }
}

/// Positions are 1-based character offsets into `text`.
fn validate_iri(text: &str) -> Result<(), RdfError> {
    let mut chars = text.chars().enumerate().peekable();
    match chars.next() {
        Some((_, c)) if c.is_ascii_alphabetic() => {}
        Some((i, c)) => return Err(invalid(i + 1, format!("scheme cannot start with {c:?}"))),
        None => return Err(invalid(1, "empty string has no scheme")),
    }
    loop {
        match chars.next() {
            Some((_, ':')) => break,
            Some((_, c)) if c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.') => {}
            Some((i, c)) => return Err(invalid(i + 1, format!("{c:?} not allowed in scheme"))),
            None => return Err(invalid(text.chars().count() + 1, "missing ':' after scheme")),
        }
    }
    while let Some((i, c)) = chars.next() {
        match c {
            ' ' | '<' | '>' | '"' | '{' | '}' | '|' | '\\' | '^' | '`' => {
                return Err(invalid(i + 1, format!("{c:?} is forbidden in IRIs")))
            }
            c if c.is_control() => {
                return Err(invalid(i + 1, format!("control character U+{:04X}", c as u32)))
            }
            '%' => {
                for _ in 0..2 {
                    match chars.next() {
                        Some((_, h)) if h.is_ascii_hexdigit() => {}
                        _ => return Err(invalid(i + 1, "malformed percent-encoding")),
                    }
                }
            }
            _ => {}
        }
    }
    Ok(())
}

pub fn make_iri(text: &str) -> Result<Term, RdfError> {
    Iri::new(text).map(Term::Iri)
}

/// Blank node label restricted to `[A-Za-z][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, RdfError> {
        let label = label.into();
        let mut chars = label.chars();
        let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if ok {
            Ok(BlankNode(label))
        } else {
            Err(RdfError::InvalidBlankLabel(label))
        }
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// A literal with an optional datatype or language tag, never both.
///
/// `xsd:string` is folded into the plain form so that `"x"` and
/// `"x"^^xsd:string` compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: String,
    datatype: Option<Iri>,
    language: Option<String>,
}

impl Literal {
    pub fn new(
        lexical: impl Into<String>,
        datatype: Option<Iri>,
        language: Option<&str>,
    ) -> Result<Self, RdfError> {
        if datatype.is_some() && language.is_some() {
            return Err(RdfError::ConflictingQualifiers);
        }
        let language = match language {
            Some(tag) if is_language_tag(tag) => Some(tag.to_string()),
            Some(tag) => return Err(RdfError::InvalidLanguageTag(tag.to_string())),
            None => None,
        };
        let datatype = datatype.filter(|dt| dt.as_str() != XSD_STRING);
        Ok(Literal {
            lexical: lexical.into(),
            datatype,
            language,
        })
    }

    pub fn plain(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: None,
            language: None,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("\"")?;
        for c in self.lexical.chars() {
            match c {
                '"' => f.write_str("\\\"")?,
                '\\' => f.write_str("\\\\")?,
                '\n' => f.write_str("\\n")?,
                '\r' => f.write_str("\\r")?,
                c => write!(f, "{c}")?,
            }
        }
        f.write_str("\"")?;
        if let Some(lang) = &self.language {
            write!(f, "@{lang}")?;
        } else if let Some(dt) = &self.datatype {
            write!(f, "^^{dt}")?;
        }
        Ok(())
    }
}

/// BCP-47 shape only: `[A-Za-z]{1,8}(-[A-Za-z0-9]{1,8})*`.
pub fn is_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let primary = parts.next().unwrap_or("");
    (1..=8).contains(&primary.len())
        && primary.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| (1..=8).contains(&p.len()) && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

pub fn make_literal(
    lexical: &str,
    datatype: Option<Iri>,
    language: Option<&str>,
) -> Result<Term, RdfError> {
    Literal::new(lexical, datatype, language).map(Term::Literal)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    BlankNode(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::BlankNode(_))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    /// IRI string, blank label or lexical form.
    pub fn value(&self) -> &str {
        match self {
            Term::Iri(iri) => iri.as_str(),
            Term::BlankNode(b) => b.label(),
            Term::Literal(l) => l.lexical(),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::BlankNode(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => iri.fmt(f),
            Term::BlankNode(b) => b.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Iri, object: Term) -> Result<Self, RdfError> {
        if subject.is_literal() {
            return Err(RdfError::LiteralSubject);
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Iri, Term) {
        (self.subject, self.predicate, self.object)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
