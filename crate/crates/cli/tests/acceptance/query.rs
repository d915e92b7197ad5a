//! Brute-force evaluation of the concept query: a nested-loop join over a
//! flat triple list, one union branch at a time.

use std::collections::{BTreeSet, HashMap};

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use uplift_core::legal::vocab::{FRAGMENT, IS_FRAGMENT_OF, NARROWER, SUBJECT};
use uplift_core::legal::{documents_for_concept, generate_corpus, reference_mapping, serialize_document, taxonomy_fixture, taxonomy_ntriples};
use uplift_core::rdf::{parse_ntriples, Graph, Iri, Term, RDF_TYPE};
use uplift_core::xml::parse_xml_str;
use uplift_core::{execute_mapping, EngineConfig, FunctionRegistry};

/// Terms are interned so the scans compare integers.
#[derive(Clone, Copy)]
enum Slot {
    Var(usize),
    Fixed(u32),
}

const F: usize = 0;
const D: usize = 1;
const C: usize = 2;
const N: usize = 3;

type Binding = [Option<u32>; 4];

fn extend(pattern: &[Slot; 3], triple: &[u32; 3], b: &Binding) -> Option<Binding> {
    let mut out = *b;
    for (slot, &value) in pattern.iter().zip(triple) {
        match *slot {
            Slot::Fixed(t) if t != value => return None,
            Slot::Fixed(_) => {}
            Slot::Var(v) => match out[v] {
                Some(bound) if bound != value => return None,
                Some(_) => {}
                None => out[v] = Some(value),
            },
        }
    }
    Some(out)
}

fn solve(triples: &[[u32; 3]], patterns: &[[Slot; 3]], seed: Binding) -> Vec<Binding> {
    let mut solutions = vec![seed];
    for pattern in patterns {
        solutions = solutions
            .iter()
            .flat_map(|b| triples.iter().filter_map(move |t| extend(pattern, t, b)))
            .collect();
    }
    solutions
}

struct Interned {
    ids: HashMap<Term, u32>,
    terms: Vec<Term>,
    triples: Vec<[u32; 3]>,
}

impl Interned {
    fn new(g: &Graph) -> Self {
        let mut me = Interned {
            ids: HashMap::new(),
            terms: Vec::new(),
            triples: Vec::new(),
        };
        for t in g {
            let row = [t.subject().clone(), Term::Iri(t.predicate().clone()), t.object().clone()].map(|x| me.id(x));
            me.triples.push(row);
        }
        me
    }

    fn id(&mut self, t: Term) -> u32 {
        if let Some(&i) = self.ids.get(&t) {
            return i;
        }
        let i = self.terms.len() as u32;
        self.terms.push(t.clone());
        self.ids.insert(t, i);
        i
    }

    /// Id for a term; unseen terms get a fresh id that matches nothing.
    fn lookup(&self, s: &str) -> u32 {
        self.ids.get(&Term::Iri(Iri::new(s).unwrap())).copied().unwrap_or(u32::MAX)
    }
}

fn brute_force(g: &Interned, concept: &str, narrower: bool) -> BTreeSet<Term> {
    let (a, fragment, part_of, subject, narrower_p) = (
        g.lookup(RDF_TYPE),
        g.lookup(FRAGMENT),
        g.lookup(IS_FRAGMENT_OF),
        g.lookup(SUBJECT),
        g.lookup(NARROWER),
    );
    use Slot::{Fixed, Var};
    let shared = [[Var(F), Fixed(a), Fixed(fragment)], [Var(F), Fixed(part_of), Var(D)]];
    let mut branches = vec![vec![[Var(F), Fixed(subject), Var(C)]], vec![[Var(D), Fixed(subject), Var(C)]]];
    if narrower {
        branches.push(vec![[Var(F), Fixed(subject), Var(N)], [Var(C), Fixed(narrower_p), Var(N)]]);
        branches.push(vec![[Var(D), Fixed(subject), Var(N)], [Var(C), Fixed(narrower_p), Var(N)]]);
    }
    let mut seed = [None; 4];
    seed[C] = Some(g.lookup(concept));
    let mut docs = BTreeSet::new();
    for base in solve(&g.triples, &shared, seed) {
        for branch in &branches {
            if !solve(&g.triples, branch, base).is_empty() {
                docs.insert(g.terms[base[D].unwrap() as usize].clone());
            }
        }
    }
    docs
}

pub fn check(corpora: usize, docs_per_corpus: usize, concepts_per_corpus: usize) -> Result<String, String> {
    let taxonomy = taxonomy_fixture();
    let taxonomy_graph = parse_ntriples(&taxonomy_ntriples(&taxonomy)).map_err(|e| e.to_string())?;
    let (mut queries, mut hits) = (0, 0);
    for seed in 0..corpora as u64 {
        let docs: Vec<_> = generate_corpus(100 + seed, docs_per_corpus, &taxonomy)
            .iter()
            .map(|d| parse_xml_str(&serialize_document(d)).unwrap())
            .collect();
        let (mut g, _) = execute_mapping(&reference_mapping(), &docs, FunctionRegistry::new(), EngineConfig::default())
            .map_err(|e| e.to_string())?;
        g.merge(taxonomy_graph.clone());
        let interned = Interned::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in taxonomy.concepts.choose_multiple(&mut rng, concepts_per_corpus) {
            let iri = Iri::new(c.as_str()).unwrap();
            let direct = documents_for_concept(&g, &iri, false);
            let wide = documents_for_concept(&g, &iri, true);
            if direct != brute_force(&interned, c, false) {
                return Err(format!("corpus {seed}, <{c}>: direct result differs from brute force"));
            }
            if wide != brute_force(&interned, c, true) {
                return Err(format!("corpus {seed}, <{c}>: narrower result differs from brute force"));
            }
            if !direct.is_subset(&wide) {
                return Err(format!("corpus {seed}, <{c}>: direct result is not a subset"));
            }
            queries += 2;
            hits += wide.len();
        }
    }
    if hits == 0 {
        return Err("every query came back empty".into());
    }
    Ok(format!("{queries} queries over {corpora} corpora agree, {hits} documents matched with narrower"))
}
