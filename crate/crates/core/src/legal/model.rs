use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegalDocument {
    pub id: String,
    pub keywords: Vec<String>,
    /// Concept IRIs, stored as plain strings the way the XML carries them.
    pub concepts: Vec<String>,
    pub fragments: Vec<Fragment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub id: String,
    pub type_code: String,
    pub keywords: Vec<String>,
    pub concepts: Vec<String>,
    /// Serialized XML content: escaped text plus inline markup, written
    /// verbatim into `<content>`.
    pub content: String,
}

fn escape_text(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
}

fn escape_attr(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '"' => out.push_str("&quot;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
}

fn element_list(indent: &str, keywords: &[String], concepts: &[String], out: &mut String) {
    for k in keywords {
        out.push_str(indent);
        out.push_str("<keyword>");
        escape_text(k, out);
        out.push_str("</keyword>\n");
    }
    for c in concepts {
        out.push_str(indent);
        out.push_str("<concept uri=\"");
        escape_attr(c, out);
        out.push_str("\"/>\n");
    }
}

/// Pretty-printed XML for one document.
pub fn serialize_document(d: &LegalDocument) -> String {
    let mut out = String::with_capacity(1024);
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<document id=\"");
    escape_attr(&d.id, &mut out);
    out.push_str("\">\n  <metadata>\n");
    element_list("    ", &d.keywords, &d.concepts, &mut out);
    out.push_str("  </metadata>\n");
    for f in &d.fragments {
        out.push_str("  <fragment id=\"");
        escape_attr(&f.id, &mut out);
        out.push_str("\" type=\"");
        escape_attr(&f.type_code, &mut out);
        out.push_str("\">\n");
        element_list("    ", &f.keywords, &f.concepts, &mut out);
        let _ = writeln!(out, "    <content>{}</content>", f.content);
        out.push_str("  </fragment>\n");
    }
    out.push_str("</document>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xml::{node_string, parse_xml_str};

    fn doc(fragments: Vec<Fragment>) -> LegalDocument {
        LegalDocument {
            id: "d1".into(),
            keywords: vec!["A & B".into()],
            concepts: vec!["http://taxonomy.wolterskluwer.de/law/10046".into()],
            fragments,
        }
    }

    #[test]
    fn metadata_only() {
        let xml = serialize_document(&doc(vec![]));
        let parsed = parse_xml_str(&xml).unwrap();
        let root = parsed.root();
        assert_eq!(root.name(), "document");
        assert_eq!(root.element_children().map(|e| e.name()).collect::<Vec<_>>(), vec!["metadata"]);
        let kw = root.element_children().next().unwrap().element_children().next().unwrap();
        assert_eq!(node_string(kw), "A & B");
    }

    #[test]
    fn content_is_verbatim() {
        let content = "A<em>B <ref href=\"x\">§ 1</ref></em>C &amp; D";
        let xml = serialize_document(&doc(vec![Fragment {
            id: "f1".into(),
            type_code: "tenor".into(),
            keywords: vec![],
            concepts: vec![],
            content: content.into(),
        }]));
        assert!(xml.contains(&format!("<content>{content}</content>")));
        let parsed = parse_xml_str(&xml).unwrap();
        let frag = parsed.root().element_children().nth(1).unwrap();
        assert_eq!(frag.attribute("type"), Some("tenor"));
        let c = frag.element_children().last().unwrap();
        assert_eq!(node_string(c), "AB § 1C & D");
    }
}
