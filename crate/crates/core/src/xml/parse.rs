use quick_xml::events::{BytesStart, Event};
use quick_xml::escape::resolve_predefined_entity;
use quick_xml::Reader;
use quick_xml::XmlVersion;

use super::{NodeData, NodeId, NodeKind, XmlDocument, XmlError};

/// Parses a UTF-8 byte stream into a document tree.
///
/// The five predefined entities and character references are resolved;
/// comments, processing instructions and the DOCTYPE are dropped;
/// adjacent text (including CDATA) is merged into one text node.
pub fn parse_xml(input: &[u8]) -> Result<XmlDocument, XmlError> {
    let text = std::str::from_utf8(input).map_err(|e| {
        let (line, column) = line_col(&input[..e.valid_up_to()]);
        XmlError::MalformedXml {
            line,
            column,
            reason: "invalid UTF-8".into(),
        }
    })?;
    parse_xml_str(text)
}

pub fn parse_xml_str(text: &str) -> Result<XmlDocument, XmlError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    Builder::new(text).run()
}

fn line_col(prefix: &[u8]) -> (usize, usize) {
    let line = prefix.iter().filter(|&&b| b == b'\n').count() + 1;
    let line_start = prefix.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
    let column = String::from_utf8_lossy(&prefix[line_start..]).chars().count() + 1;
    (line, column)
}

struct Builder<'i> {
    input: &'i str,
    reader: Reader<&'i [u8]>,
    nodes: Vec<NodeData>,
    stack: Vec<NodeId>,
    root_closed: bool,
}

impl<'i> Builder<'i> {
    fn new(input: &'i str) -> Self {
        let mut reader = Reader::from_str(input);
        let config = reader.config_mut();
        config.check_end_names = true;
        config.expand_empty_elements = false;
        config.trim_text(false);
        Builder {
            input,
            reader,
            nodes: Vec::new(),
            stack: Vec::new(),
            root_closed: false,
        }
    }

    fn error_at(&self, pos: u64, reason: impl Into<String>) -> XmlError {
        let pos = (pos as usize).min(self.input.len());
        let (line, column) = line_col(&self.input.as_bytes()[..pos]);
        XmlError::MalformedXml {
            line,
            column,
            reason: reason.into(),
        }
    }

    fn error_here(&self, reason: impl Into<String>) -> XmlError {
        self.error_at(self.reader.buffer_position(), reason)
    }

    fn run(mut self) -> Result<XmlDocument, XmlError> {
        loop {
            let event = match self.reader.read_event() {
                Ok(ev) => ev,
                Err(e) => return Err(self.error_at(self.reader.error_position(), e.to_string())),
            };
            match event {
                Event::Start(start) => {
                    self.open(&start)?;
                }
                Event::Empty(start) => {
                    self.open(&start)?;
                    self.stack.pop();
                    self.after_close();
                }
                Event::End(_) => {
                    if self.stack.pop().is_none() {
                        return Err(self.error_here("unexpected end tag"));
                    }
                    self.after_close();
                }
                Event::Text(t) => {
                    let content = t.xml10_content();
                    self.text(&content)?;
                }
                Event::CData(c) => {
                    let content = c.xml10_content();
                    self.text(&content)?;
                }
                Event::GeneralRef(r) => {
                    let resolved = match r.resolve_char_ref() {
                        Ok(Some(c)) => c.to_string(),
                        Ok(None) => {
                            let name = r.xml10_content();
                            match resolve_predefined_entity(&name) {
                                Some(s) => s.to_string(),
                                None => return Err(self.error_here(format!("undefined entity &{name};"))),
                            }
                        }
                        Err(e) => return Err(self.error_here(e.to_string())),
                    };
                    self.text(&resolved)?;
                }
                Event::Comment(_) | Event::PI(_) | Event::Decl(_) | Event::DocType(_) => {}
                Event::Eof => break,
            }
        }
        if !self.stack.is_empty() {
            let open = &self.nodes[self.stack.last().unwrap().index()].name;
            return Err(self.error_here(format!("unclosed element <{open}>")));
        }
        if self.nodes.is_empty() {
            return Err(self.error_here("no root element"));
        }
        Ok(XmlDocument { nodes: self.nodes })
    }

    fn after_close(&mut self) {
        if self.stack.is_empty() {
            self.root_closed = true;
        }
    }

    fn push(&mut self, data: NodeData) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(data);
        id
    }

    fn open(&mut self, start: &BytesStart<'_>) -> Result<(), XmlError> {
        if self.root_closed || (self.stack.is_empty() && !self.nodes.is_empty()) {
            return Err(self.error_here("content after the root element"));
        }
        let name = start.name();
        let name: &str = name.as_ref();
        let parent = self.stack.last().copied();
        let id = self.push(NodeData {
            kind: NodeKind::Element,
            name: name.to_string(),
            value: String::new(),
            parent,
            attributes: Vec::new(),
            children: Vec::new(),
        });
        if let Some(p) = parent {
            self.nodes[p.index()].children.push(id);
        }
        for attr in start.attributes() {
            let attr = attr.map_err(|e| self.error_here(e.to_string()))?;
            let value = attr
                .normalized_value(XmlVersion::Implicit1_0)
                .map_err(|e| self.error_here(e.to_string()))?;
            let key: &str = attr.key.as_ref();
            let attr_id = self.push(NodeData {
                kind: NodeKind::Attribute,
                name: key.to_string(),
                value: value.into_owned(),
                parent: Some(id),
                attributes: Vec::new(),
                children: Vec::new(),
            });
            self.nodes[id.index()].attributes.push(attr_id);
        }
        self.stack.push(id);
        Ok(())
    }

    fn text(&mut self, content: &str) -> Result<(), XmlError> {
        let Some(&parent) = self.stack.last() else {
            if content.chars().all(|c| c.is_ascii_whitespace()) {
                return Ok(());
            }
            return Err(self.error_here("text outside the root element"));
        };
        if let Some(&last) = self.nodes[parent.index()].children.last() {
            if self.nodes[last.index()].kind == NodeKind::Text {
                self.nodes[last.index()].value.push_str(content);
                return Ok(());
            }
        }
        let id = self.push(NodeData {
            kind: NodeKind::Text,
            name: String::new(),
            value: content.to_string(),
            parent: Some(parent),
            attributes: Vec::new(),
            children: Vec::new(),
        });
        self.nodes[parent.index()].children.push(id);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::node_string;
    use super::*;

    fn shape(doc: &XmlDocument) -> Vec<String> {
        doc.root().children().map(|c| format!("{c:?}")).collect()
    }

    #[test]
    fn empty_element() {
        let doc = parse_xml(b"<a/>").unwrap();
        assert_eq!(doc.root().name(), "a");
        assert_eq!(doc.root().children().len(), 0);
    }

    #[test]
    fn mixed_content_structure() {
        let doc = parse_xml(b"<a>x<b/>y</a>").unwrap();
        assert_eq!(shape(&doc), vec!["Text(\"x\")", "Element(b)", "Text(\"y\")"]);
    }

    #[test]
    fn unclosed_is_malformed() {
        assert!(matches!(parse_xml(b"<a>"), Err(XmlError::MalformedXml { .. })));
    }

    #[test]
    fn malformed_cases() {
        for bad in [
            &b"<a></b>"[..],
            b"",
            b"<a/><b/>",
            b"text",
            b"<a>&bogus;</a>",
            b"<a x='1' x='2'/>",
            b"</a>",
            b"<a><b></a></b>",
            b"<a>\xff</a>",
        ] {
            assert!(parse_xml(bad).is_err(), "{:?}", String::from_utf8_lossy(bad));
        }
    }

    #[test]
    fn error_reports_line() {
        match parse_xml(b"<a>\n  <b>\n</a>") {
            Err(XmlError::MalformedXml { line, .. }) => assert!(line >= 2, "line {line}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn entities_comments_and_pi() {
        let doc = parse_xml(
            b"<?xml version=\"1.0\"?><!DOCTYPE a><!-- c --><a t=\"&lt;&amp;&#x41;\">1 &lt; 2<!-- x -->&amp;<?pi ok?> 3 &#252;<![CDATA[<raw>]]></a>",
        )
        .unwrap();
        assert_eq!(doc.root().attribute("t"), Some("<&A"));
        assert_eq!(shape(&doc), vec!["Text(\"1 < 2& 3 ü<raw>\")"]);
    }

    #[test]
    fn whitespace_text_preserved() {
        let doc = parse_xml(b"<a>\n  <b> </b>\n</a>").unwrap();
        assert_eq!(doc.root().children().len(), 3);
        assert_eq!(node_string(doc.root()), "\n   \n");
    }

    #[test]
    fn qualified_names_kept_as_written() {
        let doc = parse_xml(br#"<x:a xmlns:x="urn:x" x:id="1"><x:b/></x:a>"#).unwrap();
        assert_eq!(doc.root().name(), "x:a");
        assert_eq!(doc.root().attribute("x:id"), Some("1"));
        assert_eq!(doc.root().children().next().unwrap().name(), "x:b");
    }

    #[test]
    fn document_order_ids() {
        let doc = parse_xml(br#"<a i="1"><b j="2">t</b><c/></a>"#).unwrap();
        let names: Vec<String> = (0..doc.len())
            .map(|i| format!("{:?}", doc.node(NodeId(i as u32))))
            .collect();
        assert_eq!(
            names,
            vec![
                "Element(a)",
                "Attribute(i=\"1\")",
                "Element(b)",
                "Attribute(j=\"2\")",
                "Text(\"t\")",
                "Element(c)"
            ]
        );
    }
}
