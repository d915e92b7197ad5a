use std::fmt;

use super::model::*;
use super::reference::{compile_reference, compile_template};
use crate::rdf::{is_language_tag, Iri};
use crate::xml::compile_path;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Triples map id plus a path to the offending part.
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Checks everything the engine relies on. An empty result means the
/// mapping can be executed.
pub fn validate_mapping(doc: &MappingDocument) -> Vec<Diagnostic> {
    let mut v = Validator { out: Vec::new() };
    let mut seen = std::collections::HashSet::new();
    for tm in &doc.triples_maps {
        let loc = tm.id.to_string();
        if !seen.insert(&tm.id) {
            v.push(&loc, "duplicate triples map id");
        }
        if let Err(e) = compile_path(&tm.logical_source.iterator) {
            v.push(&format!("{loc} iterator"), e.to_string());
        }
        let sloc = format!("{loc} subject map");
        v.term_map(&sloc, &tm.subject_map);
        if tm.subject_map.term_type == TermType::Literal {
            v.push(&sloc, "subject map cannot produce literals");
        }
        for class in &tm.subject_classes {
            v.iri(&sloc, "class", class);
        }
        for (i, pom) in tm.predicate_object_maps.iter().enumerate() {
            let ploc = format!("{loc} predicate-object map {}", i + 1);
            if pom.predicate_maps.is_empty() {
                v.push(&ploc, "no predicate map");
            }
            if pom.object_maps.is_empty() {
                v.push(&ploc, "no object map");
            }
            for p in &pom.predicate_maps {
                v.term_map(&format!("{ploc} predicate"), p);
                if p.term_type != TermType::Iri {
                    v.push(&format!("{ploc} predicate"), "predicate map must produce IRIs");
                }
            }
            for o in &pom.object_maps {
                let oloc = format!("{ploc} object");
                match o {
                    ObjectMap::Term(t) => v.term_map(&oloc, t),
                    ObjectMap::Ref(r) => v.ref_object_map(&oloc, doc, tm, r),
                }
            }
        }
    }
    v.out
}

struct Validator {
    out: Vec<Diagnostic>,
}

impl Validator {
    fn push(&mut self, location: &str, message: impl Into<String>) {
        self.out.push(Diagnostic {
            location: location.to_string(),
            message: message.into(),
        });
    }

    fn iri(&mut self, loc: &str, what: &str, iri: &str) {
        if let Err(e) = Iri::new(iri) {
            self.push(loc, format!("{what} <{iri}>: {e}"));
        }
    }

    fn term_map(&mut self, loc: &str, t: &TermMap) {
        match &t.value {
            TermValue::Constant(Constant::Iri(i)) => self.iri(loc, "constant", i),
            TermValue::Constant(Constant::Literal {
                language, datatype, ..
            }) => {
                if let Some(l) = language {
                    if !is_language_tag(l) {
                        self.push(loc, format!("invalid language tag {l:?}"));
                    }
                }
                if let Some(dt) = datatype {
                    self.iri(loc, "datatype", dt);
                }
                if t.term_type != TermType::Literal {
                    self.push(loc, "literal constant with a non-literal term type");
                }
            }
            TermValue::Reference(r) => {
                if let Err(e) = compile_reference(r) {
                    self.push(loc, format!("reference {r:?}: {e}"));
                }
            }
            TermValue::Template(s) => {
                if let Err(e) = compile_template(s) {
                    self.push(loc, format!("template {s:?}: {e}"));
                }
            }
            TermValue::Function(call) => {
                self.iri(loc, "function", &call.function);
                for (i, p) in call.parameters.iter().enumerate() {
                    self.term_map(&format!("{loc} parameter {}", i + 1), p);
                }
            }
        }
        if t.term_type != TermType::Literal && (t.datatype.is_some() || t.language.is_some()) {
            self.push(loc, "datatype or language on a non-literal term map");
        }
        if t.datatype.is_some() && t.language.is_some() {
            self.push(loc, "both datatype and language");
        }
        if let Some(dt) = &t.datatype {
            self.iri(loc, "datatype", dt);
        }
        if let Some(l) = &t.language {
            if !is_language_tag(l) {
                self.push(loc, format!("invalid language tag {l:?}"));
            }
        }
    }

    fn ref_object_map(&mut self, loc: &str, doc: &MappingDocument, child: &TriplesMap, r: &RefObjectMap) {
        let Some(parent) = doc.triples_map(&r.parent_triples_map) else {
            self.push(loc, format!("parent triples map {} does not exist", r.parent_triples_map));
            return;
        };
        if r.join_conditions.is_empty() && parent.logical_source != child.logical_source {
            self.push(loc, "join without conditions needs identical logical sources");
        }
        for j in &r.join_conditions {
            for (what, s) in [("child", &j.child), ("parent", &j.parent)] {
                if let Err(e) = compile_reference(s) {
                    self.push(loc, format!("join {what} {s:?}: {e}"));
                }
            }
        }
    }
}
