use std::collections::HashMap;

use super::functions::{FunctionError, FunctionRegistry};
use crate::mapping::{
    compile_reference, compile_template, Constant, ExprError, Reference, Template, TemplatePart, TermMap, TermType,
    TermValue,
};
use crate::rdf::{BlankNode, Iri, Literal, RdfError, Term};
use crate::xml::XmlNode;

/// Where term maps are evaluated: the current iterator node, plus the
/// document root that absolute references start from.
#[derive(Debug, Clone, Copy)]
pub struct BindingContext<'a> {
    pub document: XmlNode<'a>,
    pub iterator_node: XmlNode<'a>,
}

impl<'a> BindingContext<'a> {
    pub fn new(iterator_node: XmlNode<'a>) -> Self {
        BindingContext {
            document: iterator_node.document().root(),
            iterator_node,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TermError {
    #[error("invalid IRI {value:?}: {reason}")]
    InvalidIri { value: String, reason: RdfError },
    #[error("invalid literal {value:?}: {reason}")]
    InvalidLiteral { value: String, reason: RdfError },
    #[error("invalid blank node {value:?}: {reason}")]
    InvalidBlankNode { value: String, reason: RdfError },
    #[error(transparent)]
    Function(#[from] FunctionError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Rdf(#[from] RdfError),
    #[error(transparent)]
    Function(#[from] FunctionError),
}

/// Percent-encodes every UTF-8 byte outside `A-Za-z0-9-._~`.
pub fn percent_encode(value: &str) -> String {
    const HEX: &[u8; 16] = b"0123456789ABCDEF";
    let mut out = String::with_capacity(value.len());
    for &b in value.as_bytes() {
        if b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_' | b'~') {
            out.push(b as char);
        } else {
            out.push('%');
            out.push(HEX[(b >> 4) as usize] as char);
            out.push(HEX[(b & 15) as usize] as char);
        }
    }
    out
}

/// Fills each `{ref}` of `template` with the IRI-safe encoding of
/// `values[ref]`. `Ok(None)` when some placeholder has no value.
pub fn expand_template(template: &str, values: &HashMap<&str, &str>) -> Result<Option<String>, ExprError> {
    let template = compile_template(template)?;
    let mut choice = Vec::new();
    for r in template.placeholders() {
        match values.get(r.source()) {
            Some(v) => choice.push(*v),
            None => return Ok(None),
        }
    }
    Ok(Some(fill(&template, &choice, true)))
}

fn fill(template: &Template, choice: &[&str], encode: bool) -> String {
    let mut out = String::new();
    let mut values = choice.iter();
    for part in template.parts() {
        match part {
            TemplatePart::Text(t) => out.push_str(t),
            TemplatePart::Placeholder(_) => {
                let v = values.next().expect("one value per placeholder");
                if encode {
                    out.push_str(&percent_encode(v));
                } else {
                    out.push_str(v);
                }
            }
        }
    }
    out
}

/// Every combination taking one value from each list, in lexicographic
/// order of list positions. Empty if any list is empty.
fn product(lists: &[Vec<String>]) -> Vec<Vec<&str>> {
    let mut combos: Vec<Vec<&str>> = vec![Vec::new()];
    for list in lists {
        let mut next = Vec::with_capacity(combos.len() * list.len());
        for c in &combos {
            for v in list {
                let mut c = c.clone();
                c.push(v.as_str());
                next.push(c);
            }
        }
        combos = next;
    }
    combos
}

/// Document-local blank node labels keyed by generated value.
#[derive(Debug, Default)]
pub(crate) struct Blanks {
    labels: HashMap<String, usize>,
}

impl Blanks {
    pub(crate) fn len(&self) -> usize {
        self.labels.len()
    }

    fn node(&mut self, value: &str) -> Result<BlankNode, RdfError> {
        let next = self.labels.len();
        let n = *self.labels.entry(value.to_string()).or_insert(next);
        BlankNode::new(format!("b{n}"))
    }
}

#[derive(Debug, Clone)]
pub(crate) struct CompiledTermMap {
    value: CompiledValue,
    term_type: TermType,
    datatype: Option<Iri>,
    language: Option<String>,
}

#[derive(Debug, Clone)]
enum CompiledValue {
    Constant(Term),
    Reference(Reference),
    Template(Template),
    Function { iri: String, params: Vec<CompiledTermMap> },
}

impl CompiledTermMap {
    pub(crate) fn compile(tm: &TermMap, registry: &FunctionRegistry) -> Result<Self, CompileError> {
        let value = match &tm.value {
            TermValue::Constant(Constant::Iri(i)) => CompiledValue::Constant(Term::Iri(Iri::new(i.as_str())?)),
            TermValue::Constant(Constant::Literal {
                value,
                language,
                datatype,
            }) => {
                let dt = datatype.as_deref().map(Iri::new).transpose()?;
                CompiledValue::Constant(Term::Literal(Literal::new(value.as_str(), dt, language.as_deref())?))
            }
            TermValue::Reference(r) => CompiledValue::Reference(compile_reference(r)?),
            TermValue::Template(t) => CompiledValue::Template(compile_template(t)?),
            TermValue::Function(call) => {
                registry.check(&call.function, call.parameters.len())?;
                CompiledValue::Function {
                    iri: call.function.clone(),
                    params: call
                        .parameters
                        .iter()
                        .map(|p| Self::compile(p, registry))
                        .collect::<Result<_, _>>()?,
                }
            }
        };
        Ok(CompiledTermMap {
            value,
            term_type: tm.term_type,
            datatype: tm.datatype.as_deref().map(Iri::new).transpose()?,
            language: tm.language.clone(),
        })
    }

    /// The lexical values before the term type is applied.
    fn strings(&self, ctx: BindingContext<'_>, registry: &FunctionRegistry) -> Result<Vec<String>, FunctionError> {
        Ok(match &self.value {
            CompiledValue::Constant(t) => vec![t.value().to_string()],
            CompiledValue::Reference(r) => r.values(ctx.iterator_node),
            CompiledValue::Template(t) => {
                let lists: Vec<Vec<String>> = t.placeholders().map(|r| r.values(ctx.iterator_node)).collect();
                let encode = self.term_type == TermType::Iri;
                product(&lists).iter().map(|c| fill(t, c, encode)).collect()
            }
            CompiledValue::Function { iri, params } => {
                let lists = params
                    .iter()
                    .map(|p| p.strings(ctx, registry))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut out = Vec::new();
                for args in product(&lists) {
                    out.push(registry.apply(iri, &args)?);
                }
                out
            }
        })
    }

    /// Generates terms, collecting per-value failures in `errors` instead
    /// of stopping at the first one.
    pub(crate) fn generate(
        &self,
        ctx: BindingContext<'_>,
        registry: &FunctionRegistry,
        blanks: &mut Blanks,
        out: &mut Vec<Term>,
        errors: &mut Vec<TermError>,
    ) {
        if let CompiledValue::Constant(t) = &self.value {
            out.push(t.clone());
            return;
        }
        let values = match self.strings(ctx, registry) {
            Ok(v) => v,
            Err(e) => {
                errors.push(e.into());
                return;
            }
        };
        for value in values {
            match self.typed(value, blanks) {
                Ok(t) => out.push(t),
                Err(e) => errors.push(e),
            }
        }
    }

    fn typed(&self, value: String, blanks: &mut Blanks) -> Result<Term, TermError> {
        match self.term_type {
            TermType::Iri => match Iri::new(value.as_str()) {
                Ok(iri) => Ok(Term::Iri(iri)),
                Err(reason) => Err(TermError::InvalidIri { value, reason }),
            },
            TermType::BlankNode => match blanks.node(&value) {
                Ok(b) => Ok(Term::BlankNode(b)),
                Err(reason) => Err(TermError::InvalidBlankNode { value, reason }),
            },
            TermType::Literal => match Literal::new(value.as_str(), self.datatype.clone(), self.language.as_deref()) {
                Ok(l) => Ok(Term::Literal(l)),
                Err(reason) => Err(TermError::InvalidLiteral { value, reason }),
            },
        }
    }
}

/// Evaluates one term map in `ctx`. Stops at the first failing value.
/// Blank nodes are labelled `b0`, `b1`, … per call.
pub fn generate_terms(
    tm: &TermMap,
    ctx: BindingContext<'_>,
    registry: &FunctionRegistry,
) -> Result<Vec<Term>, TermError> {
    let compiled = match CompiledTermMap::compile(tm, registry) {
        Ok(c) => c,
        Err(CompileError::Function(e)) => return Err(e.into()),
        Err(CompileError::Expr(e)) => return Err(e.into()),
        Err(CompileError::Rdf(reason)) => {
            let value = format!("{:?}", tm.value);
            return Err(match reason {
                RdfError::InvalidIri { .. } => TermError::InvalidIri { value, reason },
                _ => TermError::InvalidLiteral { value, reason },
            });
        }
    };
    let mut out = Vec::new();
    let mut errors = Vec::new();
    compiled.generate(ctx, registry, &mut Blanks::default(), &mut out, &mut errors);
    match errors.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
