use std::collections::hash_set;
use std::collections::HashSet;

use super::{Iri, Term, Triple};

/// A duplicate-free set of triples.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    triples: HashSet<Triple>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` if the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> hash_set::Iter<'_, Triple> {
        self.triples.iter()
    }

    /// Set union, consuming `other`.
    pub fn merge(&mut self, other: Graph) {
        if self.triples.len() < other.triples.len() {
            let small = std::mem::replace(&mut self.triples, other.triples);
            self.triples.extend(small);
        } else {
            self.triples.extend(other.triples);
        }
    }

    /// Triples matching the bound positions; `None` is a wildcard.
    /// Result order is unspecified.
    pub fn matching<'a>(
        &'a self,
        subject: Option<&'a Term>,
        predicate: Option<&'a Iri>,
        object: Option<&'a Term>,
    ) -> impl Iterator<Item = &'a Triple> + 'a {
        self.triples.iter().filter(move |t| {
            subject.is_none_or(|s| t.subject() == s)
                && predicate.is_none_or(|p| t.predicate() == p)
                && object.is_none_or(|o| t.object() == o)
        })
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph {
            triples: iter.into_iter().collect(),
        }
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        self.triples.extend(iter)
    }
}

impl IntoIterator for Graph {
    type Item = Triple;
    type IntoIter = hash_set::IntoIter<Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.into_iter()
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = hash_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Literal;

    fn t(s: &str, o: &str) -> Triple {
        Triple::new(
            Term::Iri(Iri::new(format!("http://ex.com/{s}")).unwrap()),
            Iri::new("http://ex.com/p").unwrap(),
            Term::Literal(Literal::plain(o)),
        )
        .unwrap()
    }

    #[test]
    fn set_semantics() {
        let mut g = Graph::new();
        assert!(g.insert(t("a", "x")));
        assert_eq!(g.len(), 1);
        assert!(!g.insert(t("a", "x")));
        assert_eq!(g.len(), 1);
        g.insert(t("a", "y"));
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn merge_is_union() {
        let mut a: Graph = [t("a", "1"), t("b", "2")].into_iter().collect();
        let b: Graph = [t("b", "2"), t("c", "3")].into_iter().collect();
        a.merge(b);
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn matching_wildcards() {
        let g: Graph = [t("a", "1"), t("a", "2"), t("b", "1")].into_iter().collect();
        assert_eq!(g.matching(None, None, None).count(), 3);
        let a = Term::Iri(Iri::new("http://ex.com/a").unwrap());
        assert_eq!(g.matching(Some(&a), None, None).count(), 2);
        let one = Term::Literal(Literal::plain("1"));
        let p = Iri::new("http://ex.com/p").unwrap();
        assert_eq!(g.matching(Some(&a), Some(&p), Some(&one)).count(), 1);
        let nine = Term::Literal(Literal::plain("9"));
        assert_eq!(g.matching(Some(&a), Some(&p), Some(&nine)).count(), 0);
    }
}
