use std::collections::{BTreeSet, HashSet};

use super::vocab::{FRAGMENT, IS_FRAGMENT_OF, NARROWER, SUBJECT};
use crate::rdf::{Graph, Iri, Term, Triple, RDF_TYPE};

/// Triples matching the bound positions, in canonical order.
pub fn match_pattern(g: &Graph, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> Vec<Triple> {
    let p = match p {
        Some(Term::Iri(i)) => Some(i),
        Some(_) => return Vec::new(),
        None => None,
    };
    let mut out: Vec<Triple> = g.matching(s, p, o).cloned().collect();
    out.sort();
    out
}

/// Which concepts besides the queried one count as a match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Expansion {
    #[default]
    None,
    /// Concepts one `skos:narrower` step below.
    Narrower,
    /// Everything reachable through `skos:narrower`.
    Transitive,
}

/// Documents related to `concept` at document or fragment level. Only
/// documents that have at least one typed fragment are found.
pub fn documents_for_concept(g: &Graph, concept: &Iri, include_narrower: bool) -> BTreeSet<Term> {
    let expansion = if include_narrower {
        Expansion::Narrower
    } else {
        Expansion::None
    };
    documents_for_concept_with(g, concept, expansion)
}

pub fn documents_for_concept_with(g: &Graph, concept: &Iri, expansion: Expansion) -> BTreeSet<Term> {
    let iri = |s: &str| Iri::new(s).expect("vocabulary IRI");
    let (narrower, subject, part_of, rdf_type) = (iri(NARROWER), iri(SUBJECT), iri(IS_FRAGMENT_OF), iri(RDF_TYPE));
    let fragment_class = Term::Iri(iri(FRAGMENT));

    let root = Term::Iri(concept.clone());
    let mut concepts: HashSet<Term> = HashSet::from([root.clone()]);
    let mut frontier = vec![root];
    let hops = match expansion {
        Expansion::None => 0,
        Expansion::Narrower => 1,
        Expansion::Transitive => usize::MAX,
    };
    let mut depth = 0;
    while depth < hops && !frontier.is_empty() {
        let mut next = Vec::new();
        for c in &frontier {
            for t in g.matching(Some(c), Some(&narrower), None) {
                if concepts.insert(t.object().clone()) {
                    next.push(t.object().clone());
                }
            }
        }
        frontier = next;
        depth += 1;
    }

    let about = |node: &Term| {
        g.matching(Some(node), Some(&subject), None)
            .any(|t| concepts.contains(t.object()))
    };
    let mut docs = BTreeSet::new();
    for t in g.matching(None, Some(&part_of), None) {
        let (fragment, document) = (t.subject(), t.object());
        if docs.contains(document) {
            continue;
        }
        let typed = g.contains(&Triple::new(fragment.clone(), rdf_type.clone(), fragment_class.clone()).unwrap());
        if typed && (about(fragment) || about(document)) {
            docs.insert(document.clone());
        }
    }
    docs
}
