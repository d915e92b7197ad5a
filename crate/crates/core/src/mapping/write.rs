use std::fmt::Write;

use super::model::*;
use super::parse::{FNML, QL_XPATH, RML, RR};

/// Serializes a mapping to the accepted Turtle subset. Every IRI is written
/// in full and every nested structure as a `[ ]` property list, so the
/// output parses back to an equal document.
pub fn to_turtle(doc: &MappingDocument) -> String {
    let mut out = String::new();
    for (prefix, ns) in &doc.prefixes {
        let _ = writeln!(out, "@prefix {prefix}: {} .", iri(ns));
    }
    if !doc.prefixes.is_empty() {
        out.push('\n');
    }
    for tm in &doc.triples_maps {
        let id = match &tm.id {
            MapId::Iri(i) => iri(i),
            MapId::Blank(label) => format!("_:{label}"),
        };
        let _ = writeln!(out, "{id}");
        let ls = &tm.logical_source;
        let mut source = String::new();
        if let Some(s) = &ls.source {
            let _ = write!(source, "{} {} ; ", iri(&format!("{RML}source")), string(s));
        }
        let _ = writeln!(
            out,
            "  {} [ {source}{} {} ; {} {} ] ;",
            iri(&format!("{RML}logicalSource")),
            iri(&format!("{RML}iterator")),
            string(&ls.iterator),
            iri(&format!("{RML}referenceFormulation")),
            iri(QL_XPATH),
        );
        let mut extra = String::new();
        for class in &tm.subject_classes {
            let _ = write!(extra, " ; {} {}", iri(&format!("{RR}class")), iri(class));
        }
        let _ = write!(
            out,
            "  {} [ {}{extra} ]",
            iri(&format!("{RR}subjectMap")),
            term_map(&tm.subject_map)
        );
        for pom in &tm.predicate_object_maps {
            let mut parts = Vec::new();
            for p in &pom.predicate_maps {
                parts.push(format!("{} [ {} ]", iri(&format!("{RR}predicateMap")), term_map(p)));
            }
            for o in &pom.object_maps {
                let body = match o {
                    ObjectMap::Term(t) => term_map(t),
                    ObjectMap::Ref(r) => ref_object_map(r),
                };
                parts.push(format!("{} [ {body} ]", iri(&format!("{RR}objectMap"))));
            }
            let _ = write!(
                out,
                " ;\n  {} [ {} ]",
                iri(&format!("{RR}predicateObjectMap")),
                parts.join(" ; ")
            );
        }
        out.push_str(" .\n\n");
    }
    out
}

fn ref_object_map(r: &RefObjectMap) -> String {
    let parent = match &r.parent_triples_map {
        MapId::Iri(i) => iri(i),
        MapId::Blank(label) => format!("_:{label}"),
    };
    let mut s = format!("{} {parent}", iri(&format!("{RR}parentTriplesMap")));
    for j in &r.join_conditions {
        let _ = write!(
            s,
            " ; {} [ {} {} ; {} {} ]",
            iri(&format!("{RR}joinCondition")),
            iri(&format!("{RR}child")),
            string(&j.child),
            iri(&format!("{RR}parent")),
            string(&j.parent)
        );
    }
    s
}

fn term_map(t: &TermMap) -> String {
    let mut s = match &t.value {
        TermValue::Constant(c) => format!("{} {}", iri(&format!("{RR}constant")), constant(c)),
        TermValue::Reference(r) => format!("{} {}", iri(&format!("{RML}reference")), string(r)),
        TermValue::Template(r) => format!("{} {}", iri(&format!("{RR}template")), string(r)),
        TermValue::Function(call) => {
            let mut f = format!("{} {}", iri(&format!("{FNML}function")), iri(&call.function));
            for p in &call.parameters {
                let _ = write!(f, " ; {} [ {} ]", iri(&format!("{FNML}parameter")), term_map(p));
            }
            format!("{} [ {f} ]", iri(&format!("{FNML}functionValue")))
        }
    };
    if !matches!(t.value, TermValue::Constant(_)) {
        let _ = write!(s, " ; {} {}", iri(&format!("{RR}termType")), iri(&format!("{RR}{}", t.term_type)));
    }
    if let Some(dt) = &t.datatype {
        let _ = write!(s, " ; {} {}", iri(&format!("{RR}datatype")), iri(dt));
    }
    if let Some(lang) = &t.language {
        let _ = write!(s, " ; {} {}", iri(&format!("{RR}language")), string(lang));
    }
    s
}

fn constant(c: &Constant) -> String {
    match c {
        Constant::Iri(i) => iri(i),
        Constant::Literal {
            value,
            language,
            datatype,
        } => {
            let mut s = string(value);
            if let Some(l) = language {
                let _ = write!(s, "@{l}");
            } else if let Some(dt) = datatype {
                let _ = write!(s, "^^{}", iri(dt));
            }
            s
        }
    }
}

fn iri(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('<');
    for c in s.chars() {
        if c == '>' || c == '\\' || c == '<' || c == '"' || c.is_whitespace() || c.is_control() {
            let _ = write!(out, "\\U{:08X}", c as u32);
        } else {
            out.push(c);
        }
    }
    out.push('>');
    out
}

fn string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\U{:08X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse_mapping;
    use super::*;

    #[test]
    fn round_trip() {
        let src = r#"
@prefix rr: <http://www.w3.org/ns/r2rml#> .
@prefix rml: <http://semweb.mmlab.be/ns/rml#> .
@prefix fnml: <http://semweb.mmlab.be/ns/fnml#> .
@prefix ex: <http://ex.com/> .
ex:A rml:logicalSource [ rml:source "in.xml" ; rml:iterator "/a" ] ;
  rr:subjectMap [ rr:template "http://ex.com/{@id}" ; rr:class ex:C , ex:D ] ;
  rr:predicateObjectMap [ rr:predicate ex:p ; rr:object "quote \" and\nline"@de ] ;
  rr:predicateObjectMap [ rr:predicate ex:q ;
     rr:objectMap [ fnml:functionValue [ fnml:function ex:f ; fnml:parameter [ rml:reference "k/text()" ] ] ; rr:datatype ex:T ] ] ;
  rr:predicateObjectMap [ rr:predicate ex:r ; rr:objectMap [ rr:parentTriplesMap _:b ; rr:joinCondition [ rr:child "@x" ; rr:parent "@y" ] ] ] .
_:b rml:logicalSource [ rml:iterator "/a/b" ] ; rr:subjectMap [ rml:reference "@y" ; rr:termType rr:BlankNode ] .
"#;
        let doc = parse_mapping(src).unwrap();
        let text = to_turtle(&doc);
        assert_eq!(parse_mapping(&text).unwrap(), doc, "{text}");
    }
}
