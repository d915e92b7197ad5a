use super::{NodeId, NodeKind, NodeTest, PathExpr, Predicate, Step, XmlDocument, XmlNode};

/// Nodes of one document, in document order, without duplicates.
#[derive(Clone)]
pub struct NodeSet<'a> {
    doc: &'a XmlDocument,
    ids: Vec<NodeId>,
}

impl<'a> NodeSet<'a> {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn get(&self, i: usize) -> Option<XmlNode<'a>> {
        self.ids.get(i).map(|&id| self.doc.node(id))
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = XmlNode<'a>> + '_ {
        self.ids.iter().map(|&id| self.doc.node(id))
    }
}

impl PartialEq for NodeSet<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.doc, other.doc) && self.ids == other.ids
    }
}

impl std::fmt::Debug for NodeSet<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

/// Evaluates `path` against `context`. Absolute paths start at the
/// document root whatever the context is.
pub fn eval_xpath<'a>(context: XmlNode<'a>, path: &PathExpr) -> NodeSet<'a> {
    let doc = context.document();
    let mut steps = path.steps.iter();
    let mut current: Vec<NodeId> = if path.absolute {
        let Some(first) = steps.next() else {
            return NodeSet { doc, ids: Vec::new() };
        };
        // The root element is the only child of the document node.
        let root = doc.root();
        filter(doc, first, std::iter::once(root))
    } else {
        vec![context.id()]
    };
    for step in steps {
        let mut next = Vec::new();
        for &id in &current {
            let node = doc.node(id);
            let selected = match &step.test {
                NodeTest::Attribute(_) => filter(doc, step, node.attributes()),
                _ => filter(doc, step, node.children()),
            };
            next.extend(selected);
        }
        if !next.is_sorted() {
            next.sort_unstable();
        }
        next.dedup();
        current = next;
        if current.is_empty() {
            break;
        }
    }
    NodeSet { doc, ids: current }
}

/// Applies the node test to `candidates` (one axis of one context node),
/// then each predicate in turn with positions counted within that axis.
fn filter<'a>(doc: &'a XmlDocument, step: &Step, candidates: impl Iterator<Item = XmlNode<'a>>) -> Vec<NodeId> {
    let mut matched: Vec<NodeId> = candidates
        .filter(|n| match &step.test {
            NodeTest::Element(name) => n.kind() == NodeKind::Element && n.name() == name,
            NodeTest::AnyElement => n.kind() == NodeKind::Element,
            NodeTest::Attribute(name) => n.kind() == NodeKind::Attribute && n.name() == name,
            NodeTest::Text => n.kind() == NodeKind::Text,
        })
        .map(|n| n.id())
        .collect();
    for pred in &step.predicates {
        matched = match pred {
            Predicate::Position(k) => matched.get(k - 1).copied().into_iter().collect(),
            Predicate::AttributeEquals { name, value } => matched
                .into_iter()
                .filter(|&id| doc.node(id).attribute(name) == Some(value.as_str()))
                .collect(),
        };
    }
    matched
}

#[cfg(test)]
mod tests {
    use super::super::{compile_path, node_string, parse_xml_str};
    use super::*;

    fn strings(set: &NodeSet<'_>) -> Vec<String> {
        set.iter().map(node_string).collect()
    }

    #[test]
    fn child_steps_and_position() {
        let doc = parse_xml_str("<d><k>a</k><k>b</k></d>").unwrap();
        let all = eval_xpath(doc.root(), &compile_path("k").unwrap());
        assert_eq!(all.len(), 2);
        let second = eval_xpath(doc.root(), &compile_path("k[2]/text()").unwrap());
        assert_eq!(strings(&second), vec!["b"]);
        assert_eq!(second.get(0).unwrap().kind(), NodeKind::Text);
    }

    #[test]
    fn absolute_from_any_context() {
        let doc = parse_xml_str(r#"<d id="7"><x><y/></x></d>"#).unwrap();
        let deep = eval_xpath(doc.root(), &compile_path("x/y").unwrap()).get(0).unwrap();
        let ids = eval_xpath(deep, &compile_path("/d/@id").unwrap());
        assert_eq!(ids.len(), 1);
        assert_eq!(ids.get(0).unwrap().kind(), NodeKind::Attribute);
        assert_eq!(strings(&ids), vec!["7"]);
        assert!(eval_xpath(deep, &compile_path("/x").unwrap()).is_empty());
    }

    #[test]
    fn attribute_predicate_and_wildcard() {
        let doc = parse_xml_str(
            r#"<doc><fragment type="tenor" id="1"/><fragment type="gruende" id="2"/><note type="tenor" id="3"/></doc>"#,
        )
        .unwrap();
        let r = eval_xpath(doc.root(), &compile_path("/doc/fragment[@type='tenor']/@id").unwrap());
        assert_eq!(strings(&r), vec!["1"]);
        let r = eval_xpath(doc.root(), &compile_path("*[@type='tenor']/@id").unwrap());
        assert_eq!(strings(&r), vec!["1", "3"]);
        let r = eval_xpath(doc.root(), &compile_path("*[@type='tenor'][2]").unwrap());
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn position_is_per_parent() {
        let doc = parse_xml_str("<r><a><b>1</b><b>2</b></a><a><b>3</b></a></r>").unwrap();
        let r = eval_xpath(doc.root(), &compile_path("a/b[1]").unwrap());
        assert_eq!(strings(&r), vec!["1", "3"]);
    }

    #[test]
    fn no_match_is_empty() {
        let doc = parse_xml_str("<r/>").unwrap();
        assert!(eval_xpath(doc.root(), &compile_path("a/b/text()").unwrap()).is_empty());
        assert!(eval_xpath(doc.root(), &compile_path("@missing").unwrap()).is_empty());
    }
}
