//! XML document tree and an XPath subset evaluator.
//!
//! Nodes live in an arena in document order (an element, then its
//! attributes, then its children), so `NodeId` order is document order.

mod eval;
mod parse;
mod path;

pub use eval::{eval_xpath, NodeSet};
pub use parse::{parse_xml, parse_xml_str};
pub use path::{compile_path, NodeTest, PathExpr, Predicate, Step};

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum XmlError {
    #[error("malformed XML at {line}:{column}: {reason}")]
    MalformedXml {
        line: usize,
        column: usize,
        reason: String,
    },
    #[error("XPath syntax error at position {position}: {reason}")]
    PathSyntax { position: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Element,
    Attribute,
    Text,
}

#[derive(Debug, Clone)]
struct NodeData {
    kind: NodeKind,
    name: String,
    value: String,
    parent: Option<NodeId>,
    attributes: Vec<NodeId>,
    children: Vec<NodeId>,
}

/// A parsed, immutable XML document.
#[derive(Debug, Clone)]
pub struct XmlDocument {
    nodes: Vec<NodeData>,
}

impl XmlDocument {
    pub fn root(&self) -> XmlNode<'_> {
        XmlNode {
            doc: self,
            id: NodeId(0),
        }
    }

    pub fn node(&self, id: NodeId) -> XmlNode<'_> {
        XmlNode { doc: self, id }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn data(&self, id: NodeId) -> &NodeData {
        &self.nodes[id.index()]
    }
}

/// A borrowed handle to one node of an [`XmlDocument`].
#[derive(Clone, Copy)]
pub struct XmlNode<'a> {
    doc: &'a XmlDocument,
    id: NodeId,
}

impl<'a> XmlNode<'a> {
    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn document(&self) -> &'a XmlDocument {
        self.doc
    }

    pub fn kind(&self) -> NodeKind {
        self.doc.data(self.id).kind
    }

    pub fn is_element(&self) -> bool {
        self.kind() == NodeKind::Element
    }

    /// Qualified name as written; empty for text nodes.
    pub fn name(&self) -> &'a str {
        &self.doc.data(self.id).name
    }

    /// Attribute or text value; empty for elements.
    pub fn value(&self) -> &'a str {
        &self.doc.data(self.id).value
    }

    pub fn parent(&self) -> Option<XmlNode<'a>> {
        self.doc.data(self.id).parent.map(|id| self.doc.node(id))
    }

    pub fn children(&self) -> impl DoubleEndedIterator<Item = XmlNode<'a>> + ExactSizeIterator + 'a {
        let doc = self.doc;
        doc.data(self.id).children.iter().map(move |&id| doc.node(id))
    }

    pub fn attributes(&self) -> impl DoubleEndedIterator<Item = XmlNode<'a>> + ExactSizeIterator + 'a {
        let doc = self.doc;
        doc.data(self.id).attributes.iter().map(move |&id| doc.node(id))
    }

    pub fn attribute(&self, name: &str) -> Option<&'a str> {
        self.attributes().find(|a| a.name() == name).map(|a| a.value())
    }

    pub fn element_children(&self) -> impl Iterator<Item = XmlNode<'a>> + 'a {
        self.children().filter(|c| c.is_element())
    }
}

impl PartialEq for XmlNode<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.doc, other.doc) && self.id == other.id
    }
}

impl Eq for XmlNode<'_> {}

impl fmt::Debug for XmlNode<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            NodeKind::Element => write!(f, "Element({})", self.name()),
            NodeKind::Attribute => write!(f, "Attribute({}={:?})", self.name(), self.value()),
            NodeKind::Text => write!(f, "Text({:?})", self.value()),
        }
    }
}

/// Values of the direct text children of `node`, in order.
pub fn node_text<'a>(node: XmlNode<'a>) -> Vec<&'a str> {
    node.children()
        .filter(|c| c.kind() == NodeKind::Text)
        .map(|c| c.value())
        .collect()
}

/// XPath string value: descendant text for elements, the value otherwise.
pub fn node_string(node: XmlNode<'_>) -> String {
    match node.kind() {
        NodeKind::Element => {
            let mut out = String::new();
            push_descendant_text(node, &mut out);
            out
        }
        NodeKind::Attribute | NodeKind::Text => node.value().to_string(),
    }
}

fn push_descendant_text(node: XmlNode<'_>, out: &mut String) {
    for child in node.children() {
        match child.kind() {
            NodeKind::Text => out.push_str(child.value()),
            NodeKind::Element => push_descendant_text(child, out),
            NodeKind::Attribute => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_vs_string() {
        let doc = parse_xml_str("<c>A<b>B</b>C</c>").unwrap();
        assert_eq!(node_text(doc.root()), vec!["A", "C"]);
        assert_eq!(node_string(doc.root()), "ABC");

        let doc = parse_xml_str("<c><b>B</b></c>").unwrap();
        assert!(node_text(doc.root()).is_empty());

        let doc = parse_xml_str("<c>only</c>").unwrap();
        assert_eq!(node_text(doc.root()), vec!["only"]);

        let doc = parse_xml_str("<c/>").unwrap();
        assert_eq!(node_string(doc.root()), "");
    }

    #[test]
    fn attribute_string_value() {
        let doc = parse_xml_str(r#"<d id="7"/>"#).unwrap();
        let attr = doc.root().attributes().next().unwrap();
        assert_eq!(attr.kind(), NodeKind::Attribute);
        assert_eq!(node_string(attr), "7");
        assert_eq!(doc.root().attribute("id"), Some("7"));
        assert_eq!(attr.parent(), Some(doc.root()));
    }
}
