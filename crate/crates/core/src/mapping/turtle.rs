//! Reader for the Turtle subset used by mapping files.
//!
//! Supported: `@prefix`, prefixed names, `<iri>`, `a`, `_:label`,
//! `"..."` / `'...'` / `"""..."""` strings with `@lang` or `^^type`,
//! `[ ... ]` property lists, `;` and `,` lists, `#` comments.
//! Collections, numeric and boolean shorthand and `@base` are rejected.

use std::collections::BTreeMap;

use super::MappingError;

const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Iri(String),
    Blank(String),
    /// `[ ... ]` node, numbered in order of appearance.
    Anon(usize),
    Literal {
        value: String,
        language: Option<String>,
        datatype: Option<String>,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct Statement {
    pub subject: Node,
    pub predicate: String,
    pub object: Node,
}

#[derive(Debug, Default)]
pub(crate) struct TurtleDocument {
    pub prefixes: BTreeMap<String, String>,
    pub statements: Vec<Statement>,
}

pub(crate) fn parse_turtle(src: &str) -> Result<TurtleDocument, MappingError> {
    let mut p = Parser {
        src: src.as_bytes(),
        text: src,
        pos: 0,
        line: 1,
        doc: TurtleDocument::default(),
        anon: 0,
    };
    p.document()?;
    Ok(p.doc)
}

struct Parser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
    line: usize,
    doc: TurtleDocument,
    anon: usize,
}

fn is_pn_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\u{B7}')
}

impl Parser<'_> {
    fn err(&self, reason: impl Into<String>) -> MappingError {
        MappingError::TurtleSyntax {
            line: self.line,
            reason: reason.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
        }
        Some(c)
    }

    fn starts_with(&self, s: &str) -> bool {
        self.text[self.pos..].starts_with(s)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char) -> Result<(), MappingError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}, found {}", self.describe())))
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            Some(c) => format!("{c:?}"),
            None => "end of input".into(),
        }
    }

    fn document(&mut self) -> Result<(), MappingError> {
        loop {
            self.skip_ws();
            if self.pos >= self.src.len() {
                return Ok(());
            }
            if self.starts_with("@prefix") {
                self.pos += "@prefix".len();
                self.prefix_directive()?;
            } else if self.starts_with("@base") || self.starts_with("BASE") || self.starts_with("@") {
                return Err(self.err("only @prefix directives are supported"));
            } else {
                self.triples()?;
                self.expect('.')?;
            }
        }
    }

    fn prefix_directive(&mut self) -> Result<(), MappingError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(is_pn_char) {
            self.bump();
        }
        let label = self.text[start..self.pos].to_string();
        if self.peek() != Some(':') {
            return Err(self.err("expected ':' in prefix declaration"));
        }
        self.bump();
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.doc.prefixes.insert(label, iri);
        self.expect('.')
    }

    fn triples(&mut self) -> Result<(), MappingError> {
        self.skip_ws();
        if self.peek() == Some('[') {
            let node = self.blank_property_list()?;
            self.skip_ws();
            if self.peek() != Some('.') {
                self.predicate_object_list(&node)?;
            }
            Ok(())
        } else {
            let subject = self.subject()?;
            self.predicate_object_list(&subject)
        }
    }

    fn subject(&mut self) -> Result<Node, MappingError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Node::Iri(self.iri_ref()?)),
            Some('_') => self.blank_label(),
            Some('(') => Err(self.err("collections are not supported")),
            Some(_) => Ok(Node::Iri(self.prefixed_name()?)),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn predicate_object_list(&mut self, subject: &Node) -> Result<(), MappingError> {
        loop {
            self.skip_ws();
            let predicate = self.verb()?;
            loop {
                let object = self.object()?;
                self.doc.statements.push(Statement {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                });
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                } else {
                    break;
                }
            }
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.') | Some(']')) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<String, MappingError> {
        self.skip_ws();
        if self.peek() == Some('a') {
            let next = self.text[self.pos + 1..].chars().next();
            if next.is_none_or(|c| c.is_whitespace() || c == '<' || c == '[' || c == '"' || c == '_') {
                self.bump();
                return Ok(RDF_TYPE.to_string());
            }
        }
        match self.peek() {
            Some('<') => self.iri_ref(),
            _ => self.prefixed_name(),
        }
    }

    fn object(&mut self) -> Result<Node, MappingError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Node::Iri(self.iri_ref()?)),
            Some('_') => self.blank_label(),
            Some('[') => self.blank_property_list(),
            Some('"') | Some('\'') => self.literal(),
            Some('(') => Err(self.err("collections are not supported")),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => {
                Err(self.err("numeric literals are not supported; quote the value"))
            }
            Some(_) => {
                if self.starts_with("true") || self.starts_with("false") {
                    let rest = &self.text[self.pos..];
                    let word_len = if rest.starts_with("true") { 4 } else { 5 };
                    if rest[word_len..].chars().next().is_none_or(|c| !is_pn_char(c) && c != ':') {
                        return Err(self.err("boolean literals are not supported; quote the value"));
                    }
                }
                Ok(Node::Iri(self.prefixed_name()?))
            }
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn blank_property_list(&mut self) -> Result<Node, MappingError> {
        self.expect('[')?;
        let node = Node::Anon(self.anon);
        self.anon += 1;
        self.skip_ws();
        if self.peek() != Some(']') {
            self.predicate_object_list(&node)?;
        }
        self.expect(']')?;
        Ok(node)
    }

    fn blank_label(&mut self) -> Result<Node, MappingError> {
        if !self.starts_with("_:") {
            return Err(self.err("expected '_:'"));
        }
        self.pos += 2;
        let start = self.pos;
        if !self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
            return Err(self.err("invalid blank node label"));
        }
        while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '-') {
            self.bump();
        }
        Ok(Node::Blank(self.text[start..self.pos].to_string()))
    }

    fn iri_ref(&mut self) -> Result<String, MappingError> {
        self.skip_ws();
        if self.peek() != Some('<') {
            return Err(self.err(format!("expected '<', found {}", self.describe())));
        }
        self.bump();
        let mut out = String::new();
        loop {
            match self.bump() {
                Some('>') => return Ok(out),
                Some(c) if c.is_whitespace() => return Err(self.err("whitespace inside IRI")),
                Some('\\') => out.push(self.uchar()?),
                Some(c) => out.push(c),
                None => return Err(self.err("unterminated IRI")),
            }
        }
    }

    fn uchar(&mut self) -> Result<char, MappingError> {
        let digits = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.err("invalid escape")),
        };
        let mut code = 0u32;
        for _ in 0..digits {
            let d = self.bump().and_then(|c| c.to_digit(16)).ok_or_else(|| self.err("invalid hex escape"))?;
            code = code * 16 + d;
        }
        char::from_u32(code).ok_or_else(|| self.err("escape is not a scalar value"))
    }

    fn prefixed_name(&mut self) -> Result<String, MappingError> {
        let start = self.pos;
        while self.peek().is_some_and(is_pn_char) {
            self.bump();
        }
        let prefix = self.text[start..self.pos].to_string();
        if self.peek() != Some(':') {
            return Err(self.err(format!("expected a term, found {}", self.describe())));
        }
        self.bump();
        let local_start = self.pos;
        while self.peek().is_some_and(|c| is_pn_char(c) || c == ':') {
            self.bump();
        }
        // A trailing '.' terminates the statement, not the name.
        while self.pos > local_start && self.text[..self.pos].ends_with('.') {
            self.pos -= 1;
        }
        let local = &self.text[local_start..self.pos];
        let ns = self
            .doc
            .prefixes
            .get(&prefix)
            .ok_or_else(|| self.err(format!("undeclared prefix {prefix:?}")))?;
        Ok(format!("{ns}{local}"))
    }

    fn literal(&mut self) -> Result<Node, MappingError> {
        let quote = self.peek().unwrap();
        let long: String = std::iter::repeat_n(quote, 3).collect();
        let value = if self.starts_with(&long) {
            self.pos += 3;
            let mut out = String::new();
            loop {
                if self.starts_with(&long) {
                    self.pos += 3;
                    break;
                }
                match self.bump() {
                    Some('\\') => out.push(self.string_escape()?),
                    Some(c) => out.push(c),
                    None => return Err(self.err("unterminated long string")),
                }
            }
            out
        } else {
            self.bump();
            let mut out = String::new();
            loop {
                match self.bump() {
                    Some(c) if c == quote => break,
                    Some('\\') => out.push(self.string_escape()?),
                    Some('\n') | None => return Err(self.err("unterminated string")),
                    Some(c) => out.push(c),
                }
            }
            out
        };
        let mut language = None;
        let mut datatype = None;
        if self.peek() == Some('@') {
            self.bump();
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '-') {
                self.bump();
            }
            language = Some(self.text[start..self.pos].to_string());
        } else if self.starts_with("^^") {
            self.pos += 2;
            datatype = Some(match self.peek() {
                Some('<') => self.iri_ref()?,
                _ => self.prefixed_name()?,
            });
        }
        Ok(Node::Literal {
            value,
            language,
            datatype,
        })
    }

    fn string_escape(&mut self) -> Result<char, MappingError> {
        Ok(match self.peek() {
            Some('u') | Some('U') => return self.uchar(),
            Some(c) => {
                self.bump();
                match c {
                    't' => '\t',
                    'b' => '\u{8}',
                    'n' => '\n',
                    'r' => '\r',
                    'f' => '\u{c}',
                    '"' => '"',
                    '\'' => '\'',
                    '\\' => '\\',
                    _ => return Err(self.err(format!("invalid escape \\{c}"))),
                }
            }
            None => return Err(self.err("unterminated escape")),
        })
    }
}
