//! One group per engine requirement: XML input, node selection, vocabulary
//! independence, transformation functions, multi-valued properties and
//! literal-to-IRI conversion.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use proptest::test_runner::{Config, TestRunner};
use sxd_xpath::{nodeset::Node, Context, Factory, Value};
use uplift_core::engine::{Engine, EngineError};
use uplift_core::legal::vocab::{DOC_BASE, HAS_CONTENT, HAS_KEYWORD, SUBJECT};
use uplift_core::legal::{generate_corpus, reference_mapping, serialize_document, taxonomy_fixture, REFERENCE_MAPPING_TTL};
use uplift_core::mapping::parse_mapping;
use uplift_core::rdf::{make_iri, Graph, Iri, Term, Triple};
use uplift_core::xml::parse_xml;
use uplift_core::{execute_mapping, EngineConfig, FunctionRegistry, XmlDocument};

type Check = Result<String, String>;

pub fn groups() -> Vec<(&'static str, Check)> {
    vec![
        ("R1 data format", r1()),
        ("R2 data selection", r2()),
        ("R3 vocabulary independence", r3()),
        ("R4 transformation functions", r4()),
        ("R5 multi-valued properties", r5()),
        ("R6 literal values to IRI", r6()),
    ]
}

fn corpus(seed: u64, n: usize) -> Vec<String> {
    generate_corpus(seed, n, &taxonomy_fixture()).iter().map(serialize_document).collect()
}

fn strict() -> EngineConfig {
    EngineConfig {
        strict: true,
        ..Default::default()
    }
}

fn parse_all(sources: &[String]) -> Result<Vec<XmlDocument>, String> {
    sources
        .iter()
        .enumerate()
        .map(|(i, s)| parse_xml(s.as_bytes()).map_err(|e| format!("document {i}: {e}")))
        .collect()
}

fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

fn literals(g: &Graph, s: &Term, p: &str) -> Vec<String> {
    g.matching(Some(s), Some(&iri(p)), None)
        .filter_map(|t| match t.object() {
            Term::Literal(l) => Some(l.lexical().to_string()),
            _ => None,
        })
        .collect()
}

/// Per fragment: id, XPath string value of `content`, and its direct text
/// nodes, all computed by sxd-xpath.
struct ReferenceFragment {
    id: String,
    string_value: String,
    text_nodes: Vec<String>,
}

fn reference_fragments(xml: &str) -> Vec<ReferenceFragment> {
    let package = sxd_document::parser::parse(xml).expect("sxd parses generated XML");
    let doc = package.as_document();
    fn eval<'d>(expr: &str, node: Node<'d>) -> Value<'d> {
        let xpath = Factory::new().build(expr).unwrap().unwrap();
        xpath.evaluate(&Context::new(), node).unwrap()
    }
    let Value::Nodeset(fragments) = eval("/document/fragment", doc.root().into()) else {
        panic!("fragments are a node-set");
    };
    fragments
        .document_order()
        .into_iter()
        .map(|f| {
            let Value::Nodeset(children) = eval("content/node()", f) else {
                panic!("node() is a node-set");
            };
            // sxd-document splits text at entity references; the XPath data
            // model has no adjacent text nodes, so glue runs back together
            let mut text_nodes: Vec<String> = Vec::new();
            let mut previous_was_text = false;
            for n in children.document_order() {
                let is_text = n.text().is_some();
                match text_nodes.last_mut() {
                    Some(last) if is_text && previous_was_text => last.push_str(&n.string_value()),
                    _ if is_text => text_nodes.push(n.string_value()),
                    _ => {}
                }
                previous_was_text = is_text;
            }
            ReferenceFragment {
                id: eval("string(@id)", f).string(),
                string_value: eval("string(content)", f).string(),
                text_nodes,
            }
        })
        .collect()
}

fn doc_id(xml: &str) -> String {
    let start = xml.find("<document id=\"").unwrap() + 14;
    xml[start..].split('"').next().unwrap().to_string()
}

fn fragment_term(doc: &str, fragment: &str) -> Term {
    Term::Iri(iri(&format!("{DOC_BASE}{doc}/fragment/{fragment}")))
}

fn r1() -> Check {
    let sources = corpus(11, 300);
    let docs = parse_all(&sources)?;
    let (g, _) = execute_mapping(&reference_mapping(), &docs, FunctionRegistry::new(), strict()).map_err(|e| e.to_string())?;
    Ok(format!("{} documents parsed, {} triples", docs.len(), g.len()))
}

const SELECTION: &str = r#"@prefix rr: <http://www.w3.org/ns/r2rml#> .
@prefix rml: <http://semweb.mmlab.be/ns/rml#> .
@prefix ex: <http://ex.example/> .
ex:Content rml:logicalSource [ rml:iterator "/document/fragment" ] ;
    rr:subjectMap [ rr:template "http://data.example/doc/{/document/@id}/fragment/{@id}" ] ;
    rr:predicateObjectMap [ rr:predicate ex:whole ; rr:objectMap [ rml:reference "content/string()" ] ] ;
    rr:predicateObjectMap [ rr:predicate ex:bare ; rr:objectMap [ rml:reference "content" ] ] ;
    rr:predicateObjectMap [ rr:predicate ex:pieces ; rr:objectMap [ rml:reference "content/text()" ] ] .
"#;

fn r2() -> Check {
    let mapping = parse_mapping(SELECTION).map_err(|e| e.to_string())?;
    let sources = corpus(12, 60);
    let docs = parse_all(&sources)?;
    let (g, _) = execute_mapping(&mapping, &docs, FunctionRegistry::new(), strict()).map_err(|e| e.to_string())?;
    let (mut fragments, mut nested) = (0, 0);
    for xml in &sources {
        let id = doc_id(xml);
        for f in reference_fragments(xml) {
            let s = fragment_term(&id, &f.id);
            for p in ["http://ex.example/whole", "http://ex.example/bare"] {
                let got = literals(&g, &s, p);
                if got != [f.string_value.clone()] {
                    return Err(format!("{id}/{}: {p} gave {} literals, expected the string value", f.id, got.len()));
                }
            }
            let pieces: BTreeSet<String> = literals(&g, &s, "http://ex.example/pieces").into_iter().collect();
            let expected: BTreeSet<String> = f.text_nodes.iter().cloned().collect();
            if pieces != expected {
                return Err(format!("{id}/{}: text() selection differs from sxd-xpath", f.id));
            }
            if f.text_nodes.concat() != f.string_value {
                nested += 1;
            }
            fragments += 1;
        }
    }
    if nested == 0 {
        return Err("no fragment had nested markup".into());
    }
    Ok(format!("{fragments} fragments, {nested} with nested markup, string() matches sxd-xpath"))
}

const ALT: [(&str, &str); 3] = [
    ("http://onto.wolterskluwer.com/pci/core/", "http://alt.example/legal#"),
    ("http://purl.org/dc/terms/", "http://schema.example/"),
    ("http://purl.org/vocab/frbr/core#", "http://alt.example/work#"),
];

fn rename(t: &Term) -> Term {
    match t {
        Term::Iri(i) => {
            for (from, to) in ALT {
                if let Some(rest) = i.as_str().strip_prefix(from) {
                    return Term::Iri(iri(&format!("{to}{rest}")));
                }
            }
            t.clone()
        }
        other => other.clone(),
    }
}

fn r3() -> Check {
    let mut ttl = REFERENCE_MAPPING_TTL.to_string();
    for (from, to) in ALT {
        ttl = ttl.replace(&format!("<{from}>"), &format!("<{to}>"));
    }
    let alt = parse_mapping(&ttl).map_err(|e| e.to_string())?;
    let docs = parse_all(&corpus(13, 50))?;
    let (base, _) = execute_mapping(&reference_mapping(), &docs, FunctionRegistry::new(), strict()).map_err(|e| e.to_string())?;
    let (other, _) = execute_mapping(&alt, &docs, FunctionRegistry::new(), strict()).map_err(|e| e.to_string())?;
    let renamed: Graph = base
        .iter()
        .map(|t| {
            let p = rename(&Term::Iri(t.predicate().clone()));
            Triple::new(rename(t.subject()), p.as_iri().unwrap().clone(), rename(t.object())).unwrap()
        })
        .collect();
    if renamed != other {
        return Err("alternate vocabulary output is not the renamed reference output".into());
    }
    let untouched = other.iter().all(|t| !ALT.iter().any(|(from, _)| t.predicate().as_str().starts_with(from)));
    if !untouched {
        return Err("original vocabulary leaked into alternate output".into());
    }
    Ok(format!("{} triples under both bindings", other.len()))
}

fn xml_normalized(s: &str) -> String {
    s.split([' ', '\t', '\n', '\r']).filter(|w| !w.is_empty()).collect::<Vec<_>>().join(" ")
}

fn r4() -> Check {
    let sources = corpus(14, 60);
    let docs = parse_all(&sources)?;
    let (g, _) = execute_mapping(&reference_mapping(), &docs, FunctionRegistry::new(), strict()).map_err(|e| e.to_string())?;
    let mut changed = 0;
    for xml in &sources {
        let id = doc_id(xml);
        for f in reference_fragments(xml) {
            let got = literals(&g, &fragment_term(&id, &f.id), HAS_CONTENT);
            let want = xml_normalized(&f.string_value);
            if got != [want.clone()] {
                return Err(format!("{id}/{}: hasContent is not the normalized string value", f.id));
            }
            if want != f.string_value {
                changed += 1;
            }
        }
    }
    for t in g.matching(None, Some(&iri(HAS_KEYWORD)), None) {
        let v = t.object().value();
        if v != xml_normalized(v) {
            return Err(format!("keyword {v:?} is not normalized"));
        }
    }
    if changed == 0 {
        return Err("no content needed normalization".into());
    }
    Ok(format!("{changed} content values normalized in-mapping"))
}

fn r5() -> Check {
    let taxonomy = taxonomy_fixture();
    let engine = Engine::new(&reference_mapping(), FunctionRegistry::new(), strict()).map_err(|e| e.to_string())?;
    let mut runner = TestRunner::new(Config {
        cases: 128,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (0usize..=20, 0usize..=20, proptest::num::u64::ANY);
    let seen = RefCell::new(BTreeSet::new());
    runner
        .run(&strategy, |(k, kf, seed)| {
            seen.borrow_mut().insert(k);
            let mut d = generate_corpus(seed, 1, &taxonomy).remove(0);
            d.keywords = (0..k).map(|i| format!("keyword {i}")).collect();
            d.fragments[0].keywords = (0..kf).map(|i| format!("fragment keyword {i}")).collect();
            let xml = serialize_document(&d);
            let (g, _) = engine.execute(&[parse_xml(xml.as_bytes()).unwrap()]).unwrap();
            let doc = Term::Iri(iri(&format!("{DOC_BASE}{}", d.id)));
            let frag = fragment_term(&d.id, &d.fragments[0].id);
            proptest::prop_assert_eq!(literals(&g, &doc, HAS_KEYWORD).len(), k);
            proptest::prop_assert_eq!(literals(&g, &frag, HAS_KEYWORD).len(), kf);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("128 cases, {} distinct k in [0, 20]", seen.borrow().len()))
}

fn r6() -> Check {
    let taxonomy = taxonomy_fixture();
    let mut corpus_docs = generate_corpus(16, 60, &taxonomy);
    let sources: Vec<String> = corpus_docs.iter().map(serialize_document).collect();
    let docs = parse_all(&sources)?;
    let (g, _) = execute_mapping(&reference_mapping(), &docs, FunctionRegistry::new(), strict()).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for d in &corpus_docs {
        let s = Term::Iri(iri(&format!("{DOC_BASE}{}", d.id)));
        let objects: BTreeMap<String, bool> = g
            .matching(Some(&s), Some(&iri(SUBJECT)), None)
            .map(|t| (t.object().value().to_string(), matches!(t.object(), Term::Iri(_))))
            .collect();
        let expected: BTreeMap<String, bool> = d.concepts.iter().map(|c| (c.clone(), true)).collect();
        if objects != expected {
            return Err(format!("{}: concept objects differ from attribute strings", d.id));
        }
        checked += objects.len();
    }
    if g.iter().any(|t| matches!(t.object(), Term::Iri(i) if make_iri(i.as_str()).is_err())) {
        return Err("invalid IRI in output".into());
    }

    let bad = "http://taxonomy.wolterskluwer.de/law/10 046";
    if make_iri(bad).is_ok() {
        return Err("injected value is unexpectedly a valid IRI".into());
    }
    corpus_docs[3].concepts.push(bad.into());
    let injected = parse_all(&corpus_docs.iter().map(serialize_document).collect::<Vec<_>>())?;
    let (lenient, warnings) = execute_mapping(&reference_mapping(), &injected, FunctionRegistry::new(), EngineConfig::default())
        .map_err(|e| e.to_string())?;
    if lenient != g || warnings.len() != 1 || warnings[0].document != 3 {
        return Err(format!("lenient mode: {} warnings, graph unchanged: {}", warnings.len(), lenient == g));
    }
    match execute_mapping(&reference_mapping(), &injected, FunctionRegistry::new(), strict()) {
        Err(EngineError::Term { document: 3, .. }) => {}
        other => return Err(format!("strict mode did not abort on document 3: {:?}", other.map(|r| r.0.len()))),
    }
    Ok(format!("{checked} concept IRIs checked; malformed IRI skipped leniently, fatal in strict mode"))
}
