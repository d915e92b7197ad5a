use proptest::prelude::*;
use uplift_core::rdf::{graph_equal, parse_ntriples, to_ntriples, BlankNode, Graph, Iri, Literal, Term, Triple};

fn iri() -> impl Strategy<Value = Iri> {
    prop_oneof![
        "[a-c]{1,3}".prop_map(|s| format!("http://ex.org/{s}")),
        "[a-z0-9é/#]{0,6}".prop_map(|s| format!("urn:x:{s}")),
    ]
    .prop_map(|s| Iri::new(s).unwrap())
}

fn literal() -> impl Strategy<Value = Literal> {
    // quotes, backslashes, control characters and non-ASCII
    let lexical = prop::collection::vec(
        prop_oneof![
            4 => prop::char::range('a', 'e'),
            1 => prop::sample::select(vec!['"', '\\', '\n', '\r', '\t', '\u{7}', 'ü', '\u{1F600}', ' ']),
        ],
        0..8,
    )
    .prop_map(|cs| cs.into_iter().collect::<String>());
    (lexical, 0u8..3, iri()).prop_map(|(lex, kind, dt)| match kind {
        0 => Literal::plain(lex),
        1 => Literal::new(lex, Some(dt), None).unwrap(),
        _ => Literal::new(lex, None, Some("en-GB")).unwrap(),
    })
}

fn blank() -> impl Strategy<Value = BlankNode> {
    (0u8..4).prop_map(|n| BlankNode::new(format!("b{n}")).unwrap())
}

fn subject() -> impl Strategy<Value = Term> {
    prop_oneof![iri().prop_map(Term::from), blank().prop_map(Term::from)]
}

fn object() -> impl Strategy<Value = Term> {
    prop_oneof![iri().prop_map(Term::from), blank().prop_map(Term::from), literal().prop_map(Term::from)]
}

fn graph() -> impl Strategy<Value = Graph> {
    prop::collection::vec((subject(), iri(), object()), 0..24)
        .prop_map(|ts| ts.into_iter().map(|(s, p, o)| Triple::new(s, p, o).unwrap()).collect())
}

fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let map = |t: &Term| match t {
        Term::BlankNode(b) => {
            let n: usize = b.label()[1..].parse().unwrap();
            Term::from(BlankNode::new(format!("z{}", perm[n])).unwrap())
        }
        other => other.clone(),
    };
    g.iter()
        .map(|t| Triple::new(map(t.subject()), t.predicate().clone(), map(t.object())).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn round_trip(g in graph()) {
        let text = to_ntriples(&g);
        let back = parse_ntriples(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(to_ntriples(&back), text.clone());
        let lines: Vec<&str> = text.lines().collect();
        let mut sorted = lines.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(lines, sorted);
    }

    #[test]
    fn equal_under_relabelling(g in graph(), perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
        let h = relabel(&g, &perm);
        prop_assert!(graph_equal(&g, &h));
        prop_assert!(graph_equal(&h, &g));
    }

    #[test]
    fn dropping_a_triple_breaks_equality(g in graph(), pick in any::<prop::sample::Index>()) {
        prop_assume!(!g.is_empty());
        let victim = g.iter().nth(pick.index(g.len())).unwrap().clone();
        let smaller: Graph = g.iter().filter(|t| **t != victim).cloned().collect();
        prop_assert!(!graph_equal(&g, &smaller));
    }

    #[test]
    fn merging_blank_nodes_breaks_equality(g in graph()) {
        // collapsing two blank nodes leaves no bijection
        let collapse = |t: &Term| match t {
            Term::BlankNode(b) if b.label() == "b1" => Term::from(BlankNode::new("b0").unwrap()),
            other => other.clone(),
        };
        let merged: Graph = g
            .iter()
            .map(|t| Triple::new(collapse(t.subject()), t.predicate().clone(), collapse(t.object())).unwrap())
            .collect();
        let blanks = |g: &Graph| {
            let mut s = std::collections::BTreeSet::new();
            for t in g {
                for term in [t.subject(), t.object()] {
                    if let Term::BlankNode(b) = term {
                        s.insert(b.label().to_string());
                    }
                }
            }
            s.len()
        };
        if blanks(&merged) != blanks(&g) {
            prop_assert!(!graph_equal(&g, &merged));
        }
    }
}
