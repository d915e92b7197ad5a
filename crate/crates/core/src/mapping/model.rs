use std::collections::BTreeMap;
use std::fmt;

/// A parsed mapping file: prefix table plus triples maps in source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingDocument {
    pub prefixes: BTreeMap<String, String>,
    pub triples_maps: Vec<TriplesMap>,
}

impl MappingDocument {
    pub fn triples_map(&self, id: &MapId) -> Option<&TriplesMap> {
        self.triples_maps.iter().find(|m| &m.id == id)
    }

    /// Every term map in the document, nested function parameters included.
    pub fn term_maps(&self) -> Vec<&TermMap> {
        let mut out = Vec::new();
        for tm in &self.triples_maps {
            collect(&tm.subject_map, &mut out);
            for pom in &tm.predicate_object_maps {
                for p in &pom.predicate_maps {
                    collect(p, &mut out);
                }
                for o in &pom.object_maps {
                    if let ObjectMap::Term(t) = o {
                        collect(t, &mut out);
                    }
                }
            }
        }
        out
    }
}

fn collect<'a>(tm: &'a TermMap, out: &mut Vec<&'a TermMap>) {
    out.push(tm);
    if let TermValue::Function(call) = &tm.value {
        for p in &call.parameters {
            collect(p, out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MapId {
    Iri(String),
    Blank(String),
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapId::Iri(iri) => write!(f, "<{iri}>"),
            MapId::Blank(label) => write!(f, "_:{label}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplesMap {
    pub id: MapId,
    pub logical_source: LogicalSource,
    pub subject_map: TermMap,
    /// `rr:class` IRIs; each yields an `rdf:type` triple per subject.
    pub subject_classes: Vec<String>,
    pub predicate_object_maps: Vec<PredicateObjectMap>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LogicalSource {
    pub source: Option<String>,
    /// XPath iterator; compiled by the engine.
    pub iterator: String,
    pub reference_formulation: ReferenceFormulation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReferenceFormulation {
    XPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermType {
    Iri,
    BlankNode,
    Literal,
}

impl fmt::Display for TermType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermType::Iri => "IRI",
            TermType::BlankNode => "BlankNode",
            TermType::Literal => "Literal",
        })
    }
}

/// Generates RDF terms from a value form plus term-type qualifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermMap {
    pub value: TermValue,
    pub term_type: TermType,
    pub datatype: Option<String>,
    pub language: Option<String>,
}

impl TermMap {
    pub fn constant_iri(iri: impl Into<String>) -> Self {
        TermMap {
            value: TermValue::Constant(Constant::Iri(iri.into())),
            term_type: TermType::Iri,
            datatype: None,
            language: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermValue {
    Constant(Constant),
    /// XPath reference, optionally ending in `text()`, `string()` or `@attr`.
    Reference(String),
    /// String with `{reference}` placeholders.
    Template(String),
    Function(FunctionCall),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constant {
    Iri(String),
    Literal {
        value: String,
        language: Option<String>,
        datatype: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionCall {
    pub function: String,
    pub parameters: Vec<TermMap>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateObjectMap {
    pub predicate_maps: Vec<TermMap>,
    pub object_maps: Vec<ObjectMap>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectMap {
    Term(TermMap),
    Ref(RefObjectMap),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefObjectMap {
    pub parent_triples_map: MapId,
    pub join_conditions: Vec<JoinCondition>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinCondition {
    pub child: String,
    pub parent: String,
}
