//! Direct XML-to-RDF conversion of the corpus schema without the mapping
//! engine. Shares no code with the engine beyond the RDF and XML types.

use super::vocab::*;
use crate::rdf::{Graph, Iri, Literal, Term, Triple, RDF_TYPE};
use crate::xml::{NodeKind, XmlNode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("schema violation: {0}")]
pub struct SchemaViolation(pub String);

fn violation(msg: impl Into<String>) -> SchemaViolation {
    SchemaViolation(msg.into())
}

fn string_value(node: XmlNode<'_>, out: &mut String) {
    match node.kind() {
        NodeKind::Text | NodeKind::Attribute => out.push_str(node.value()),
        NodeKind::Element => {
            for c in node.children() {
                string_value(c, out);
            }
        }
    }
}

fn squash(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut pending = false;
    for c in s.chars() {
        if matches!(c, ' ' | '\t' | '\r' | '\n') {
            pending = !out.is_empty();
        } else {
            if pending {
                out.push(' ');
                pending = false;
            }
            out.push(c);
        }
    }
    out
}

fn escape_segment(s: &str) -> String {
    let mut out = String::new();
    for b in s.bytes() {
        match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'.' | b'_' | b'~' => out.push(b as char),
            _ => out.push_str(&format!("%{b:02X}")),
        }
    }
    out
}

struct Out {
    graph: Graph,
    rdf_type: Iri,
}

impl Out {
    fn add(&mut self, s: &Iri, p: &str, o: Term) -> Result<(), SchemaViolation> {
        let p = Iri::new(p).map_err(|e| violation(e.to_string()))?;
        self.graph
            .insert(Triple::new(Term::Iri(s.clone()), p, o).map_err(|e| violation(e.to_string()))?);
        Ok(())
    }

    fn typed(&mut self, s: &Iri, class: &str) -> Result<(), SchemaViolation> {
        let p = self.rdf_type.as_str().to_string();
        self.add(s, &p, Term::Iri(iri(class)?))
    }
}

fn iri(s: &str) -> Result<Iri, SchemaViolation> {
    Iri::new(s).map_err(|e| violation(format!("bad IRI {s:?}: {e}")))
}

fn required<'a>(el: XmlNode<'a>, attr: &str) -> Result<&'a str, SchemaViolation> {
    el.attribute(attr)
        .ok_or_else(|| violation(format!("<{}> without @{attr}", el.name())))
}

/// Keywords and concepts are shared by metadata and fragments.
fn annotation(out: &mut Out, subject: &Iri, el: XmlNode<'_>) -> Result<bool, SchemaViolation> {
    match el.name() {
        "keyword" => {
            let mut text = String::new();
            string_value(el, &mut text);
            out.add(subject, HAS_KEYWORD, Term::Literal(Literal::plain(squash(&text))))?;
        }
        "concept" => {
            let uri = required(el, "uri")?;
            out.add(subject, SUBJECT, Term::Iri(iri(uri)?))?;
        }
        _ => return Ok(false),
    }
    Ok(true)
}

/// Converts one `<document>` tree into the graph the bundled mapping
/// describes.
pub fn adhoc_parse(root: XmlNode<'_>) -> Result<Graph, SchemaViolation> {
    if root.kind() != NodeKind::Element || root.name() != "document" {
        return Err(violation("root element must be <document>"));
    }
    let doc_id = escape_segment(required(root, "id")?);
    let doc_iri = iri(&format!("{DOC_BASE}{doc_id}"))?;
    let mut out = Out {
        graph: Graph::new(),
        rdf_type: iri(RDF_TYPE)?,
    };
    out.typed(&doc_iri, MANIFESTATION)?;

    for child in root.element_children() {
        match child.name() {
            "metadata" => {
                for el in child.element_children() {
                    if !annotation(&mut out, &doc_iri, el)? {
                        return Err(violation(format!("unexpected <{}> in <metadata>", el.name())));
                    }
                }
            }
            "fragment" => {
                let frag_id = escape_segment(required(child, "id")?);
                let type_code = required(child, "type")?;
                let frag_iri = iri(&format!("{DOC_BASE}{doc_id}/fragment/{frag_id}"))?;
                let type_iri = iri(&format!("{FRAGMENT_TYPE_BASE}{}", escape_segment(type_code)))?;
                out.add(&doc_iri, HAS_FRAGMENT, Term::Iri(frag_iri.clone()))?;
                out.typed(&frag_iri, FRAGMENT)?;
                out.add(&frag_iri, IS_FRAGMENT_OF, Term::Iri(doc_iri.clone()))?;
                out.add(&frag_iri, TYPE, Term::Iri(type_iri.clone()))?;
                out.typed(&type_iri, FRAGMENT_TYPE)?;
                for el in child.element_children() {
                    if el.name() == "content" {
                        let mut text = String::new();
                        string_value(el, &mut text);
                        out.add(&frag_iri, HAS_CONTENT, Term::Literal(Literal::plain(squash(&text))))?;
                    } else if !annotation(&mut out, &frag_iri, el)? {
                        return Err(violation(format!("unexpected <{}> in <fragment>", el.name())));
                    }
                }
            }
            other => return Err(violation(format!("unexpected <{other}> in <document>"))),
        }
    }
    Ok(out.graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xml::parse_xml_str;

    fn parse(xml: &str) -> Result<Graph, SchemaViolation> {
        adhoc_parse(parse_xml_str(xml).unwrap().root())
    }

    #[test]
    fn helpers() {
        assert_eq!(squash("  Kündigung \n  fristlos "), "Kündigung fristlos");
        assert_eq!(squash(""), "");
        assert_eq!(escape_segment("A 1/b"), "A%201%2Fb");
    }

    #[test]
    fn content_string_value() {
        let g = parse(
            r#"<document id="d1"><metadata/><fragment id="f1" type="tenor"><content>A<em>B</em>C</content></fragment></document>"#,
        )
        .unwrap();
        let p = Iri::new(HAS_CONTENT).unwrap();
        let contents: Vec<_> = g.matching(None, Some(&p), None).collect();
        assert_eq!(contents.len(), 1);
        assert_eq!(contents[0].object().value(), "ABC");
    }

    #[test]
    fn no_concepts_no_subject_triples() {
        let g = parse(r#"<document id="d1"><metadata><keyword>k</keyword></metadata></document>"#).unwrap();
        let p = Iri::new(SUBJECT).unwrap();
        assert_eq!(g.matching(None, Some(&p), None).count(), 0);
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn violations() {
        for bad in [
            "<doc/>",
            "<document/>",
            r#"<document id="d"><other/></document>"#,
            r#"<document id="d"><fragment type="t"/></document>"#,
            r#"<document id="d"><metadata><concept uri="not an iri"/></metadata></document>"#,
            r#"<document id="d"><metadata><concept/></metadata></document>"#,
        ] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }
}
