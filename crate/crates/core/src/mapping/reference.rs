//! Compiled forms of `rml:reference` values and `rr:template` strings.

use crate::xml::{compile_path, eval_xpath, node_string, PathExpr, XmlError, XmlNode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error(transparent)]
    Path(#[from] XmlError),
    #[error("template error at position {position}: {reason}")]
    Template { position: usize, reason: String },
}

/// A reference selects zero or more string values relative to a context
/// node.
///
/// The final selector decides what a value is: `text()` yields each direct
/// text node, `@attr` the attribute value, and an element path (or an
/// explicit trailing `string()`) the full string value of each element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reference {
    src: String,
    /// `None` selects the context node itself (`string()`).
    path: Option<PathExpr>,
}

impl Reference {
    /// The reference as written, trimmed.
    pub fn source(&self) -> &str {
        &self.src
    }

    pub fn path(&self) -> Option<&PathExpr> {
        self.path.as_ref()
    }

    pub fn values(&self, context: XmlNode<'_>) -> Vec<String> {
        match &self.path {
            None => vec![node_string(context)],
            Some(path) => eval_xpath(context, path).iter().map(node_string).collect(),
        }
    }
}

pub fn compile_reference(src: &str) -> Result<Reference, ExprError> {
    let src = src.trim();
    let path = if src == "string()" {
        None
    } else if let Some(prefix) = src.strip_suffix("/string()") {
        Some(compile_path(prefix)?)
    } else if let Some(inner) = src.strip_prefix("string(").and_then(|s| s.strip_suffix(')')) {
        Some(compile_path(inner)?)
    } else {
        Some(compile_path(src)?)
    };
    Ok(Reference {
        src: src.to_string(),
        path,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplatePart {
    Text(String),
    Placeholder(Reference),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    parts: Vec<TemplatePart>,
}

impl Template {
    pub fn parts(&self) -> &[TemplatePart] {
        &self.parts
    }

    pub fn placeholders(&self) -> impl Iterator<Item = &Reference> {
        self.parts.iter().filter_map(|p| match p {
            TemplatePart::Placeholder(r) => Some(r),
            TemplatePart::Text(_) => None,
        })
    }
}

/// Splits a template into text and `{reference}` parts. `\{`, `\}` and
/// `\\` escape literal characters.
pub fn compile_template(src: &str) -> Result<Template, ExprError> {
    let err = |position: usize, reason: &str| ExprError::Template {
        position,
        reason: reason.to_string(),
    };
    let mut parts = Vec::new();
    let mut text = String::new();
    let mut chars = src.chars().enumerate();
    while let Some((i, c)) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some((_, e @ ('{' | '}' | '\\'))) => text.push(e),
                _ => return Err(err(i + 1, "invalid escape")),
            },
            '}' => return Err(err(i + 1, "unmatched '}'")),
            '{' => {
                let mut inner = String::new();
                loop {
                    match chars.next() {
                        Some((_, '}')) => break,
                        Some((j, '{')) => return Err(err(j + 1, "nested '{'")),
                        Some((_, c)) => inner.push(c),
                        None => return Err(err(i + 1, "unclosed '{'")),
                    }
                }
                if inner.trim().is_empty() {
                    return Err(err(i + 1, "empty placeholder"));
                }
                if !text.is_empty() {
                    parts.push(TemplatePart::Text(std::mem::take(&mut text)));
                }
                parts.push(TemplatePart::Placeholder(compile_reference(&inner)?));
            }
            c => text.push(c),
        }
    }
    if !text.is_empty() {
        parts.push(TemplatePart::Text(text));
    }
    Ok(Template { parts })
}
