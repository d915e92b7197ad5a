//! Graph equality up to blank-node relabelling.

use std::collections::{HashMap, HashSet};

use super::{BlankNode, Graph, Term, Triple};

/// `true` iff a bijection between the blank nodes of `a` and `b` maps `a`
/// onto `b`. Blank-free graphs reduce to plain set equality.
pub fn graph_equal(a: &Graph, b: &Graph) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let (ground_a, blank_a) = split(a);
    let (ground_b, blank_b) = split(b);
    if ground_a.len() != ground_b.len() || blank_a.len() != blank_b.len() {
        return false;
    }
    if !ground_a.iter().all(|t| b.contains(t)) {
        return false;
    }
    if blank_a.is_empty() {
        return true;
    }

    let sig_a = signatures(&blank_a);
    let sig_b = signatures(&blank_b);
    if sig_a.len() != sig_b.len() {
        return false;
    }
    let mut classes_a: HashMap<&Vec<String>, usize> = HashMap::new();
    let mut classes_b: HashMap<&Vec<String>, usize> = HashMap::new();
    for s in sig_a.values() {
        *classes_a.entry(s).or_default() += 1;
    }
    for s in sig_b.values() {
        *classes_b.entry(s).or_default() += 1;
    }
    if classes_a != classes_b {
        return false;
    }

    // Most constrained nodes first.
    let mut order: Vec<&BlankNode> = sig_a.keys().copied().collect();
    order.sort_by_key(|n| (classes_a[&sig_a[n]], n.label().to_string()));

    let target: HashSet<&Triple> = blank_b.iter().copied().collect();
    let mut search = Search {
        order,
        sig_a: &sig_a,
        sig_b: &sig_b,
        blank_a: &blank_a,
        target: &target,
        mapping: HashMap::new(),
        used: HashSet::new(),
    };
    search.extend(0)
}

fn split(g: &Graph) -> (Vec<&Triple>, Vec<&Triple>) {
    g.iter()
        .partition(|t| !t.subject().is_blank() && !t.object().is_blank())
}

/// Per blank node: the sorted shapes of the triples it occurs in, with
/// itself shown as `?` and any other blank node as `_`.
fn signatures<'g>(triples: &[&'g Triple]) -> HashMap<&'g BlankNode, Vec<String>> {
    let mut out: HashMap<&BlankNode, Vec<String>> = HashMap::new();
    for t in triples {
        for (pos, term) in [(0, t.subject()), (2, t.object())] {
            if let Term::BlankNode(node) = term {
                let show = |x: &Term| match x {
                    Term::BlankNode(other) if other == node => "?".to_string(),
                    Term::BlankNode(_) => "_".to_string(),
                    other => other.to_string(),
                };
                let shape = format!("{pos} {} {} {}", show(t.subject()), t.predicate(), show(t.object()));
                out.entry(node).or_default().push(shape);
            }
        }
    }
    for shapes in out.values_mut() {
        shapes.sort();
    }
    out
}

struct Search<'a, 'g> {
    order: Vec<&'g BlankNode>,
    sig_a: &'a HashMap<&'g BlankNode, Vec<String>>,
    sig_b: &'a HashMap<&'g BlankNode, Vec<String>>,
    blank_a: &'a [&'g Triple],
    target: &'a HashSet<&'g Triple>,
    mapping: HashMap<&'g BlankNode, &'g BlankNode>,
    used: HashSet<&'g BlankNode>,
}

impl<'g> Search<'_, 'g> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return self.consistent();
        }
        let node = self.order[depth];
        let wanted = &self.sig_a[node];
        let candidates: Vec<&'g BlankNode> = self
            .sig_b
            .iter()
            .filter(|(b, sig)| *sig == wanted && !self.used.contains(*b))
            .map(|(b, _)| *b)
            .collect();
        for cand in candidates {
            self.mapping.insert(node, cand);
            self.used.insert(cand);
            if self.consistent() && self.extend(depth + 1) {
                return true;
            }
            self.mapping.remove(node);
            self.used.remove(cand);
        }
        false
    }

    /// Every triple whose blank nodes are all mapped lands in the target.
    fn consistent(&self) -> bool {
        self.blank_a.iter().all(|t| {
            let map = |x: &Term| -> Option<Term> {
                match x {
                    Term::BlankNode(b) => self.mapping.get(b).map(|m| Term::BlankNode((*m).clone())),
                    other => Some(other.clone()),
                }
            };
            match (map(t.subject()), map(t.object())) {
                (Some(s), Some(o)) => Triple::new(s, t.predicate().clone(), o)
                    .map(|m| self.target.contains(&m))
                    .unwrap_or(false),
                _ => true,
            }
        })
    }
}
