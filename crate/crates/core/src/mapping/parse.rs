use std::collections::{HashMap, HashSet};

use super::model::*;
use super::turtle::{parse_turtle, Node, Statement};
use super::MappingError;

pub const RR: &str = "http://www.w3.org/ns/r2rml#";
pub const RML: &str = "http://semweb.mmlab.be/ns/rml#";
pub const FNML: &str = "http://semweb.mmlab.be/ns/fnml#";
pub const QL_XPATH: &str = "http://semweb.mmlab.be/ns/ql#XPath";
const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Vocab {
    LogicalSource,
    Source,
    Iterator,
    ReferenceFormulation,
    SubjectMap,
    Subject,
    PredicateObjectMap,
    PredicateMap,
    Predicate,
    ObjectMap,
    Object,
    Reference,
    Template,
    Constant,
    TermType,
    Datatype,
    Language,
    ParentTriplesMap,
    JoinCondition,
    Child,
    Parent,
    Class,
    FunctionValue,
    Function,
    Parameter,
}

const PROPERTIES: &[(&str, Vocab)] = &[
    ("logicalSource", Vocab::LogicalSource),
    ("source", Vocab::Source),
    ("iterator", Vocab::Iterator),
    ("referenceFormulation", Vocab::ReferenceFormulation),
    ("subjectMap", Vocab::SubjectMap),
    ("subject", Vocab::Subject),
    ("predicateObjectMap", Vocab::PredicateObjectMap),
    ("predicateMap", Vocab::PredicateMap),
    ("predicate", Vocab::Predicate),
    ("objectMap", Vocab::ObjectMap),
    ("object", Vocab::Object),
    ("reference", Vocab::Reference),
    ("template", Vocab::Template),
    ("constant", Vocab::Constant),
    ("termType", Vocab::TermType),
    ("datatype", Vocab::Datatype),
    ("language", Vocab::Language),
    ("parentTriplesMap", Vocab::ParentTriplesMap),
    ("joinCondition", Vocab::JoinCondition),
    ("child", Vocab::Child),
    ("parent", Vocab::Parent),
    ("class", Vocab::Class),
    ("functionValue", Vocab::FunctionValue),
    ("function", Vocab::Function),
    ("parameter", Vocab::Parameter),
];

const CLASSES: &[&str] = &[
    "TriplesMap",
    "LogicalSource",
    "SubjectMap",
    "PredicateObjectMap",
    "PredicateMap",
    "ObjectMap",
    "RefObjectMap",
    "TermMap",
    "Join",
    "FunctionTermMap",
    "IRI",
    "BlankNode",
    "Literal",
];

fn local_name(iri: &str) -> Option<&str> {
    [RR, RML, FNML].iter().find_map(|ns| iri.strip_prefix(ns))
}

/// `None` for predicates outside the mapping vocabularies, which are
/// ignored.
fn classify(predicate: &str) -> Result<Option<Vocab>, MappingError> {
    let Some(local) = local_name(predicate) else {
        return Ok(None);
    };
    PROPERTIES
        .iter()
        .find(|(name, _)| *name == local)
        .map(|(_, v)| Some(*v))
        .ok_or_else(|| MappingError::UnknownVocabularyTerm(predicate.to_string()))
}

fn vocab_name(v: Vocab) -> &'static str {
    PROPERTIES.iter().find(|(_, x)| *x == v).map(|(n, _)| *n).unwrap_or("?")
}

pub fn parse_mapping(text: &str) -> Result<MappingDocument, MappingError> {
    let turtle = parse_turtle(text)?;
    let mut props: HashMap<&Node, Vec<(Vocab, &Node)>> = HashMap::new();
    let mut types: HashMap<&Node, Vec<&str>> = HashMap::new();
    let mut order: Vec<&Node> = Vec::new();
    let mut seen: HashSet<&Node> = HashSet::new();

    for Statement {
        subject,
        predicate,
        object,
        ..
    } in &turtle.statements
    {
        if seen.insert(subject) {
            order.push(subject);
        }
        if predicate == RDF_TYPE {
            if let Node::Iri(class) = object {
                if let Some(local) = local_name(class) {
                    if !CLASSES.contains(&local) {
                        return Err(MappingError::UnknownVocabularyTerm(class.clone()));
                    }
                }
                types.entry(subject).or_default().push(class);
            }
            continue;
        }
        if let Some(v) = classify(predicate)? {
            props.entry(subject).or_default().push((v, object));
        }
    }

    let builder = Builder { props: &props };
    let mut triples_maps = Vec::new();
    let mut ids = HashSet::new();
    for node in order {
        let is_map = types
            .get(node)
            .is_some_and(|ts| ts.iter().any(|t| local_name(t) == Some("TriplesMap")))
            || builder.props(node).iter().any(|(v, _)| {
                matches!(
                    v,
                    Vocab::LogicalSource | Vocab::SubjectMap | Vocab::Subject | Vocab::PredicateObjectMap
                )
            });
        if !is_map {
            continue;
        }
        let tm = builder.triples_map(node)?;
        if !ids.insert(tm.id.clone()) {
            return Err(MappingError::Structural(format!("duplicate triples map id {}", tm.id)));
        }
        triples_maps.push(tm);
    }
    Ok(MappingDocument {
        prefixes: turtle.prefixes,
        triples_maps,
    })
}

fn structural(msg: impl Into<String>) -> MappingError {
    MappingError::Structural(msg.into())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Subject,
    Predicate,
    Object,
    Parameter,
}

impl Role {
    fn name(self) -> &'static str {
        match self {
            Role::Subject => "subject map",
            Role::Predicate => "predicate map",
            Role::Object => "object map",
            Role::Parameter => "function parameter",
        }
    }
}

struct Builder<'a> {
    props: &'a HashMap<&'a Node, Vec<(Vocab, &'a Node)>>,
}

impl<'a> Builder<'a> {
    fn props(&self, node: &Node) -> &[(Vocab, &'a Node)] {
        self.props.get(node).map(Vec::as_slice).unwrap_or(&[])
    }

    fn all(&self, node: &Node, v: Vocab) -> Vec<&'a Node> {
        self.props(node).iter().filter(|(x, _)| *x == v).map(|(_, o)| *o).collect()
    }

    fn at_most_one(&self, node: &Node, v: Vocab, ctx: &str) -> Result<Option<&'a Node>, MappingError> {
        let mut all = self.all(node, v);
        if all.len() > 1 {
            return Err(structural(format!("{ctx} has more than one {}", vocab_name(v))));
        }
        Ok(all.pop())
    }

    fn only(&self, node: &Node, allowed: &[Vocab], ctx: &str) -> Result<(), MappingError> {
        for (v, _) in self.props(node) {
            if !allowed.contains(v) {
                return Err(structural(format!("{} is not allowed in a {ctx}", vocab_name(*v))));
            }
        }
        Ok(())
    }

    fn string(&self, node: &Node, what: &str) -> Result<String, MappingError> {
        match node {
            Node::Literal { value, .. } => Ok(value.clone()),
            _ => Err(structural(format!("{what} must be a string literal"))),
        }
    }

    fn iri(&self, node: &Node, what: &str) -> Result<String, MappingError> {
        match node {
            Node::Iri(iri) => Ok(iri.clone()),
            _ => Err(structural(format!("{what} must be an IRI"))),
        }
    }

    fn map_id(node: &Node) -> Result<MapId, MappingError> {
        match node {
            Node::Iri(iri) => Ok(MapId::Iri(iri.clone())),
            Node::Blank(label) => Ok(MapId::Blank(label.clone())),
            Node::Anon(n) => Ok(MapId::Blank(format!("genid{n}"))),
            Node::Literal { .. } => Err(structural("a triples map cannot be a literal")),
        }
    }

    fn triples_map(&self, node: &Node) -> Result<TriplesMap, MappingError> {
        let id = Self::map_id(node)?;
        let ctx = format!("triples map {id}");
        self.only(
            node,
            &[Vocab::LogicalSource, Vocab::SubjectMap, Vocab::Subject, Vocab::PredicateObjectMap],
            "triples map",
        )?;

        let source_node = self
            .at_most_one(node, Vocab::LogicalSource, &ctx)?
            .ok_or_else(|| structural(format!("{ctx}: missing logical source")))?;
        let logical_source = self.logical_source(source_node)?;

        let maps = self.all(node, Vocab::SubjectMap);
        let shortcuts = self.all(node, Vocab::Subject);
        let (subject_map, subject_classes) = match (maps.as_slice(), shortcuts.as_slice()) {
            ([], []) => return Err(structural("missing subject map")),
            ([m], []) => {
                let classes = self
                    .all(m, Vocab::Class)
                    .into_iter()
                    .map(|c| self.iri(c, "rr:class"))
                    .collect::<Result<Vec<_>, _>>()?;
                (self.term_map(m, Role::Subject)?, classes)
            }
            ([], [c]) => (self.constant_shortcut(c, Role::Subject)?, Vec::new()),
            _ => return Err(structural(format!("{ctx}: more than one subject map"))),
        };

        let predicate_object_maps = self
            .all(node, Vocab::PredicateObjectMap)
            .into_iter()
            .map(|n| self.predicate_object_map(n))
            .collect::<Result<Vec<_>, _>>()?;

        Ok(TriplesMap {
            id,
            logical_source,
            subject_map,
            subject_classes,
            predicate_object_maps,
        })
    }

    fn logical_source(&self, node: &Node) -> Result<LogicalSource, MappingError> {
        let ctx = "logical source";
        self.only(node, &[Vocab::Source, Vocab::Iterator, Vocab::ReferenceFormulation], ctx)?;
        let source = match self.at_most_one(node, Vocab::Source, ctx)? {
            Some(Node::Literal { value, .. }) => Some(value.clone()),
            Some(Node::Iri(iri)) => Some(iri.clone()),
            Some(_) => return Err(structural("rml:source must be a string or IRI")),
            None => None,
        };
        let iterator = match self.at_most_one(node, Vocab::Iterator, ctx)? {
            Some(n) => self.string(n, "rml:iterator")?,
            None => return Err(structural("logical source is missing rml:iterator")),
        };
        if let Some(rf) = self.at_most_one(node, Vocab::ReferenceFormulation, ctx)? {
            let rf = self.iri(rf, "rml:referenceFormulation")?;
            if rf != QL_XPATH {
                return Err(structural(format!("unsupported reference formulation <{rf}>")));
            }
        }
        Ok(LogicalSource {
            source,
            iterator,
            reference_formulation: ReferenceFormulation::XPath,
        })
    }

    fn predicate_object_map(&self, node: &Node) -> Result<PredicateObjectMap, MappingError> {
        let ctx = "predicate-object map";
        self.only(
            node,
            &[Vocab::PredicateMap, Vocab::Predicate, Vocab::ObjectMap, Vocab::Object],
            ctx,
        )?;
        let mut predicate_maps = Vec::new();
        for n in self.all(node, Vocab::PredicateMap) {
            predicate_maps.push(self.term_map(n, Role::Predicate)?);
        }
        for n in self.all(node, Vocab::Predicate) {
            predicate_maps.push(self.constant_shortcut(n, Role::Predicate)?);
        }
        let mut object_maps = Vec::new();
        for n in self.all(node, Vocab::ObjectMap) {
            if self.props(n).iter().any(|(v, _)| *v == Vocab::ParentTriplesMap) {
                object_maps.push(ObjectMap::Ref(self.ref_object_map(n)?));
            } else {
                object_maps.push(ObjectMap::Term(self.term_map(n, Role::Object)?));
            }
        }
        for n in self.all(node, Vocab::Object) {
            object_maps.push(ObjectMap::Term(self.constant_shortcut(n, Role::Object)?));
        }
        if predicate_maps.is_empty() {
            return Err(structural("predicate-object map without a predicate map"));
        }
        if object_maps.is_empty() {
            return Err(structural("predicate-object map without an object map"));
        }
        Ok(PredicateObjectMap {
            predicate_maps,
            object_maps,
        })
    }

    fn ref_object_map(&self, node: &Node) -> Result<RefObjectMap, MappingError> {
        let ctx = "referencing object map";
        self.only(node, &[Vocab::ParentTriplesMap, Vocab::JoinCondition], ctx)?;
        let parent = self.at_most_one(node, Vocab::ParentTriplesMap, ctx)?.unwrap();
        let parent_triples_map = Self::map_id(parent)?;
        let mut join_conditions = Vec::new();
        for j in self.all(node, Vocab::JoinCondition) {
            self.only(j, &[Vocab::Child, Vocab::Parent], "join condition")?;
            let child = self
                .at_most_one(j, Vocab::Child, "join condition")?
                .ok_or_else(|| structural("join condition without rr:child"))?;
            let parent = self
                .at_most_one(j, Vocab::Parent, "join condition")?
                .ok_or_else(|| structural("join condition without rr:parent"))?;
            join_conditions.push(JoinCondition {
                child: self.string(child, "rr:child")?,
                parent: self.string(parent, "rr:parent")?,
            });
        }
        Ok(RefObjectMap {
            parent_triples_map,
            join_conditions,
        })
    }

    fn constant_value(&self, node: &Node) -> Result<Constant, MappingError> {
        match node {
            Node::Iri(iri) => Ok(Constant::Iri(iri.clone())),
            Node::Literal {
                value,
                language,
                datatype,
            } => Ok(Constant::Literal {
                value: value.clone(),
                language: language.clone(),
                datatype: datatype.clone(),
            }),
            _ => Err(structural("constant must be an IRI or literal")),
        }
    }

    fn constant_shortcut(&self, node: &Node, role: Role) -> Result<TermMap, MappingError> {
        let constant = self.constant_value(node)?;
        let term_type = match constant {
            Constant::Iri(_) => TermType::Iri,
            Constant::Literal { .. } => TermType::Literal,
        };
        if role != Role::Object && term_type == TermType::Literal {
            return Err(structural(format!("{} constant must be an IRI", role.name())));
        }
        Ok(TermMap {
            value: TermValue::Constant(constant),
            term_type,
            datatype: None,
            language: None,
        })
    }

    fn term_map(&self, node: &Node, role: Role) -> Result<TermMap, MappingError> {
        let ctx = role.name();
        let mut allowed = vec![
            Vocab::Constant,
            Vocab::Reference,
            Vocab::Template,
            Vocab::FunctionValue,
            Vocab::TermType,
            Vocab::Datatype,
            Vocab::Language,
        ];
        if role == Role::Subject {
            allowed.push(Vocab::Class);
        }
        self.only(node, &allowed, ctx)?;

        let forms: Vec<(Vocab, &Node)> = self
            .props(node)
            .iter()
            .filter(|(v, _)| {
                matches!(v, Vocab::Constant | Vocab::Reference | Vocab::Template | Vocab::FunctionValue)
            })
            .copied()
            .collect();
        let (form, value_node) = match forms.as_slice() {
            [] => return Err(structural(format!("{ctx} has no constant, reference, template or function value"))),
            [one] => *one,
            _ => return Err(structural(format!("{ctx} has more than one value form"))),
        };
        let value = match form {
            Vocab::Constant => TermValue::Constant(self.constant_value(value_node)?),
            Vocab::Reference => TermValue::Reference(self.string(value_node, "rml:reference")?),
            Vocab::Template => TermValue::Template(self.string(value_node, "rr:template")?),
            _ => TermValue::Function(self.function_call(value_node)?),
        };

        let datatype = self
            .at_most_one(node, Vocab::Datatype, ctx)?
            .map(|n| self.iri(n, "rr:datatype"))
            .transpose()?;
        let language = self
            .at_most_one(node, Vocab::Language, ctx)?
            .map(|n| self.string(n, "rr:language"))
            .transpose()?;
        let explicit = self
            .at_most_one(node, Vocab::TermType, ctx)?
            .map(|n| match n {
                Node::Iri(iri) => match local_name(iri) {
                    Some("IRI") => Ok(TermType::Iri),
                    Some("BlankNode") => Ok(TermType::BlankNode),
                    Some("Literal") => Ok(TermType::Literal),
                    _ => Err(structural(format!("unknown term type <{iri}>"))),
                },
                _ => Err(structural("rr:termType must be an IRI")),
            })
            .transpose()?;

        let term_type = match (&value, explicit) {
            (TermValue::Constant(c), explicit) => {
                let natural = match c {
                    Constant::Iri(_) => TermType::Iri,
                    Constant::Literal { .. } => TermType::Literal,
                };
                if explicit.is_some_and(|t| t != natural) {
                    return Err(structural(format!("{ctx}: rr:termType contradicts the constant")));
                }
                natural
            }
            (_, Some(t)) => t,
            (_, None) if datatype.is_some() || language.is_some() => TermType::Literal,
            (_, None) => match (role, &value) {
                (Role::Subject | Role::Predicate, _) => TermType::Iri,
                (_, TermValue::Template(_)) => TermType::Iri,
                _ => TermType::Literal,
            },
        };
        if term_type != TermType::Literal && (datatype.is_some() || language.is_some()) {
            return Err(structural(format!("{ctx}: datatype and language require term type Literal")));
        }
        if datatype.is_some() && language.is_some() {
            return Err(structural(format!("{ctx}: both datatype and language given")));
        }
        if matches!(value, TermValue::Constant(_)) && (datatype.is_some() || language.is_some()) {
            return Err(structural(format!("{ctx}: qualify constant literals inline")));
        }
        Ok(TermMap {
            value,
            term_type,
            datatype,
            language,
        })
    }

    fn function_call(&self, node: &Node) -> Result<FunctionCall, MappingError> {
        let ctx = "function value";
        self.only(node, &[Vocab::Function, Vocab::Parameter], ctx)?;
        let function = match self.at_most_one(node, Vocab::Function, ctx)? {
            Some(n) => self.iri(n, "fnml:function")?,
            None => return Err(structural("function value without fnml:function")),
        };
        let parameters = self
            .all(node, Vocab::Parameter)
            .into_iter()
            .map(|p| self.term_map(p, Role::Parameter))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FunctionCall { function, parameters })
    }
}
