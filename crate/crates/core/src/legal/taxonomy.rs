use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::vocab::{BROADER, CONCEPT, NARROWER, WKD_LAW};
use crate::rdf::{parse_ntriples, to_ntriples, Graph, Iri, RdfError, Term, Triple, RDF_TYPE};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaxonomyFixture {
    pub concepts: Vec<String>,
    /// `(broader, narrower)` pairs.
    pub narrower_edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TaxonomyError {
    #[error(transparent)]
    Parse(#[from] RdfError),
    #[error("narrower edges form a cycle through <{0}>")]
    Cycle(String),
    #[error("edge endpoint <{0}> is not declared as a skos:Concept")]
    UndeclaredConcept(String),
    #[error("object of a SKOS relation is not an IRI: {0}")]
    NotAnIri(String),
}

const SEED: u64 = 2019;
const LEVELS: [usize; 3] = [5, 15, 30];
const EXTRA_EDGES: usize = 15;

/// The bundled taxonomy: 50 concepts `wkd-law:10000` to `wkd-law:10049`
/// on three levels, 45 tree edges plus 15 extra edges from the middle to
/// the bottom level. `wkd-law:10046` is a top concept.
pub fn taxonomy_fixture() -> TaxonomyFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ids: Vec<u32> = (10000..10050).filter(|&n| n != 10046).collect();
    ids.shuffle(&mut rng);
    ids.insert(0, 10046);
    let iri = |n: u32| format!("{WKD_LAW}{n}");

    let mut levels: Vec<Vec<u32>> = Vec::new();
    let mut rest = ids.as_slice();
    for size in LEVELS {
        let (level, tail) = rest.split_at(size);
        let mut level = level.to_vec();
        level.sort_unstable();
        levels.push(level);
        rest = tail;
    }

    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    for pair in levels.windows(2) {
        for &child in &pair[1] {
            edges.insert((*pair[0].choose(&mut rng).unwrap(), child));
        }
    }
    while edges.len() < 45 + EXTRA_EDGES {
        let b = *levels[1].choose(&mut rng).unwrap();
        let n = *levels[2].choose(&mut rng).unwrap();
        edges.insert((b, n));
    }

    let mut concepts: Vec<u32> = levels.concat();
    concepts.sort_unstable();
    TaxonomyFixture {
        concepts: concepts.into_iter().map(iri).collect(),
        narrower_edges: edges.into_iter().map(|(b, n)| (iri(b), iri(n))).collect(),
    }
}

/// Concepts typed `skos:Concept`, each edge as both `skos:narrower` and
/// the inverse `skos:broader`.
pub fn taxonomy_ntriples(t: &TaxonomyFixture) -> String {
    let iri = |s: &str| Iri::new(s).expect("taxonomy IRIs are valid");
    let mut g = Graph::new();
    for c in &t.concepts {
        g.insert(Triple::new(Term::Iri(iri(c)), iri(RDF_TYPE), Term::Iri(iri(CONCEPT))).unwrap());
    }
    for (b, n) in &t.narrower_edges {
        g.insert(Triple::new(Term::Iri(iri(b)), iri(NARROWER), Term::Iri(iri(n))).unwrap());
        g.insert(Triple::new(Term::Iri(iri(n)), iri(BROADER), Term::Iri(iri(b))).unwrap());
    }
    to_ntriples(&g)
}

pub fn load_taxonomy(ntriples: &str) -> Result<TaxonomyFixture, TaxonomyError> {
    let g = parse_ntriples(ntriples)?;
    let mut concepts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    let name = |t: &Term| match t {
        Term::Iri(i) => Ok(i.as_str().to_string()),
        other => Err(TaxonomyError::NotAnIri(other.to_string())),
    };
    for t in g.iter() {
        match t.predicate().as_str() {
            RDF_TYPE if t.object().as_iri().map(Iri::as_str) == Some(CONCEPT) => {
                concepts.insert(name(t.subject())?);
            }
            NARROWER => {
                edges.insert((name(t.subject())?, name(t.object())?));
            }
            BROADER => {
                edges.insert((name(t.object())?, name(t.subject())?));
            }
            _ => {}
        }
    }
    for (b, n) in &edges {
        for c in [b, n] {
            if !concepts.contains(c) {
                return Err(TaxonomyError::UndeclaredConcept(c.clone()));
            }
        }
    }
    check_acyclic(&edges)?;
    Ok(TaxonomyFixture {
        concepts: concepts.into_iter().collect(),
        narrower_edges: edges.into_iter().collect(),
    })
}

fn check_acyclic(edges: &BTreeSet<(String, String)>) -> Result<(), TaxonomyError> {
    let mut out: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (b, n) in edges {
        out.entry(b).or_default().push(n);
    }
    // 0 unvisited, 1 on the stack, 2 done
    let mut state: BTreeMap<&str, u8> = BTreeMap::new();
    for &start in out.keys() {
        if state.get(start).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut stack: Vec<(&str, usize)> = vec![(start, 0)];
        state.insert(start, 1);
        while let Some((node, i)) = stack.pop() {
            let next = out.get(node).and_then(|v| v.get(i)).copied();
            match next {
                None => {
                    state.insert(node, 2);
                }
                Some(n) => {
                    stack.push((node, i + 1));
                    match state.get(n).copied().unwrap_or(0) {
                        1 => return Err(TaxonomyError::Cycle(n.to_string())),
                        0 => {
                            state.insert(n, 1);
                            stack.push((n, 0));
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    Ok(())
}
