//! Canonical N-Triples: one triple per line, lines sorted bytewise.

use std::io::{self, Write};

use super::{BlankNode, Graph, Iri, Literal, RdfError, Term, Triple};

pub fn to_ntriples(graph: &Graph) -> String {
    let mut lines: Vec<String> = graph.iter().map(|t| t.to_string()).collect();
    lines.sort_unstable();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn write_ntriples<W: Write>(graph: &Graph, mut out: W) -> io::Result<()> {
    out.write_all(to_ntriples(graph).as_bytes())
}

pub fn parse_ntriples(text: &str) -> Result<Graph, RdfError> {
    let mut graph = Graph::new();
    for (idx, line) in text.lines().enumerate() {
        let mut cursor = Cursor {
            rest: line,
            line: idx + 1,
        };
        cursor.skip_ws();
        if cursor.rest.is_empty() || cursor.rest.starts_with('#') {
            continue;
        }
        let triple = cursor.triple()?;
        graph.insert(triple);
    }
    Ok(graph)
}

struct Cursor<'a> {
    rest: &'a str,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, reason: impl Into<String>) -> RdfError {
        RdfError::Syntax {
            line: self.line,
            reason: reason.into(),
        }
    }

    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start_matches([' ', '\t']);
    }

    fn eat(&mut self, c: char) -> bool {
        if let Some(rest) = self.rest.strip_prefix(c) {
            self.rest = rest;
            true
        } else {
            false
        }
    }

    fn triple(&mut self) -> Result<Triple, RdfError> {
        let subject = match self.rest.chars().next() {
            Some('<') => Term::Iri(self.iri()?),
            Some('_') => Term::BlankNode(self.blank()?),
            _ => return Err(self.err("expected IRI or blank node subject")),
        };
        self.skip_ws();
        if !self.rest.starts_with('<') {
            return Err(self.err("expected IRI predicate"));
        }
        let predicate = self.iri()?;
        self.skip_ws();
        let object = match self.rest.chars().next() {
            Some('<') => Term::Iri(self.iri()?),
            Some('_') => Term::BlankNode(self.blank()?),
            Some('"') => Term::Literal(self.literal()?),
            _ => return Err(self.err("expected object term")),
        };
        self.skip_ws();
        if !self.eat('.') {
            return Err(self.err("expected '.'"));
        }
        self.skip_ws();
        if !(self.rest.is_empty() || self.rest.starts_with('#')) {
            return Err(self.err("trailing content after '.'"));
        }
        Triple::new(subject, predicate, object).map_err(|e| self.err(e.to_string()))
    }

    fn iri(&mut self) -> Result<Iri, RdfError> {
        self.eat('<');
        let mut value = String::new();
        let mut chars = self.rest.char_indices();
        loop {
            match chars.next() {
                Some((i, '>')) => {
                    self.rest = &self.rest[i + 1..];
                    break;
                }
                Some((_, '\\')) => match chars.next() {
                    Some((_, 'u')) => value.push(self.hex_escape(&mut chars, 4)?),
                    Some((_, 'U')) => value.push(self.hex_escape(&mut chars, 8)?),
                    _ => return Err(self.err("invalid escape in IRI")),
                },
                Some((_, c)) => value.push(c),
                None => return Err(self.err("unterminated IRI")),
            }
        }
        Iri::new(value).map_err(|e| self.err(e.to_string()))
    }

    fn blank(&mut self) -> Result<BlankNode, RdfError> {
        let Some(rest) = self.rest.strip_prefix("_:") else {
            return Err(self.err("expected '_:'"));
        };
        let end = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        let label = &rest[..end];
        self.rest = &rest[end..];
        BlankNode::new(label).map_err(|e| self.err(e.to_string()))
    }

    fn literal(&mut self) -> Result<Literal, RdfError> {
        self.eat('"');
        let mut value = String::new();
        let mut chars = self.rest.char_indices();
        loop {
            match chars.next() {
                Some((i, '"')) => {
                    self.rest = &self.rest[i + 1..];
                    break;
                }
                Some((_, '\\')) => {
                    let c = match chars.next() {
                        Some((_, 't')) => '\t',
                        Some((_, 'b')) => '\u{8}',
                        Some((_, 'n')) => '\n',
                        Some((_, 'r')) => '\r',
                        Some((_, 'f')) => '\u{c}',
                        Some((_, '"')) => '"',
                        Some((_, '\'')) => '\'',
                        Some((_, '\\')) => '\\',
                        Some((_, 'u')) => self.hex_escape(&mut chars, 4)?,
                        Some((_, 'U')) => self.hex_escape(&mut chars, 8)?,
                        _ => return Err(self.err("invalid string escape")),
                    };
                    value.push(c);
                }
                Some((_, c)) => value.push(c),
                None => return Err(self.err("unterminated literal")),
            }
        }
        if let Some(rest) = self.rest.strip_prefix('@') {
            let end = rest
                .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
                .unwrap_or(rest.len());
            let tag = &rest[..end];
            self.rest = &rest[end..];
            Literal::new(value, None, Some(tag)).map_err(|e| self.err(e.to_string()))
        } else if let Some(rest) = self.rest.strip_prefix("^^") {
            self.rest = rest;
            if !self.rest.starts_with('<') {
                return Err(self.err("expected datatype IRI"));
            }
            let dt = self.iri()?;
            Literal::new(value, Some(dt), None).map_err(|e| self.err(e.to_string()))
        } else {
            Ok(Literal::plain(value))
        }
    }

    fn hex_escape(&self, chars: &mut std::str::CharIndices<'_>, digits: usize) -> Result<char, RdfError> {
        let mut code = 0u32;
        for _ in 0..digits {
            let d = chars
                .next()
                .and_then(|(_, c)| c.to_digit(16))
                .ok_or_else(|| self.err("invalid hex escape"))?;
            code = code * 16 + d;
        }
        char::from_u32(code).ok_or_else(|| self.err("escape is not a scalar value"))
    }
}
