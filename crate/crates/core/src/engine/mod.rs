//! Executes mapping documents over parsed XML.

mod functions;
mod terms;

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

pub use functions::{normalize_space, Arity, FunctionError, FunctionRegistry, NativeFn, FN_NS};
pub use terms::{expand_template, generate_terms, percent_encode, BindingContext, CompileError, TermError};

use crate::mapping::{compile_reference, validate_mapping, Diagnostic, MapId, MappingDocument, ObjectMap, Reference};
use crate::rdf::{BlankNode, Graph, Iri, Term, Triple, RDF_TYPE};
use crate::xml::{compile_path, eval_xpath, parse_xml, PathExpr, XmlDocument, XmlError, XmlNode};
use terms::{Blanks, CompiledTermMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    /// Abort on the first term generation failure instead of skipping.
    pub strict: bool,
    pub emit_warnings: bool,
    /// Size of the document-level worker pool; 1 runs on the calling thread.
    pub workers: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            strict: false,
            emit_warnings: true,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    /// Position of the document in the input sequence.
    pub document: usize,
    pub map: String,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "document {}, {}: {}", self.document, self.map, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("mapping is invalid: {}", join_diagnostics(.0))]
    InvalidMapping(Vec<Diagnostic>),
    #[error("{map}: {reason}")]
    Compile { map: String, reason: CompileError },
    #[error("document {document}, {map}: {reason}")]
    Term { map: String, document: usize, reason: TermError },
    #[error("document {document}: {reason}")]
    Xml { document: usize, reason: XmlError },
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

fn join_diagnostics(d: &[Diagnostic]) -> String {
    d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Triples generated from one document. Blank node labels are local to
/// the document until merged.
#[derive(Debug, Clone, Default)]
pub struct DocumentOutput {
    pub triples: Vec<Triple>,
    pub warnings: Vec<Warning>,
    blank_nodes: usize,
}

struct MapPlan {
    label: String,
    iterator: PathExpr,
    subject: CompiledTermMap,
    classes: Vec<Term>,
    poms: Vec<PomPlan>,
}

struct PomPlan {
    predicates: Vec<CompiledTermMap>,
    objects: Vec<ObjectPlan>,
}

enum ObjectPlan {
    Term(CompiledTermMap),
    Ref {
        parent: usize,
        /// Slot in the per-document join index cache.
        slot: usize,
        joins: Vec<(Reference, Reference)>,
    },
}

/// A compiled mapping bound to a function registry.
pub struct Engine {
    maps: Vec<MapPlan>,
    joins: usize,
    registry: FunctionRegistry,
    config: EngineConfig,
}

impl fmt::Debug for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Engine")
            .field("maps", &self.maps.iter().map(|m| &m.label).collect::<Vec<_>>())
            .field("config", &self.config)
            .finish()
    }
}

impl Engine {
    pub fn new(mapping: &MappingDocument, registry: FunctionRegistry, config: EngineConfig) -> Result<Self, EngineError> {
        let diagnostics = validate_mapping(mapping);
        if !diagnostics.is_empty() {
            return Err(EngineError::InvalidMapping(diagnostics));
        }
        let index: HashMap<&MapId, usize> = mapping.triples_maps.iter().enumerate().map(|(i, m)| (&m.id, i)).collect();
        let mut joins = 0;
        let mut maps = Vec::new();
        for tm in &mapping.triples_maps {
            let label = tm.id.to_string();
            let compile_err = |reason: CompileError| EngineError::Compile {
                map: label.clone(),
                reason,
            };
            let term = |t| CompiledTermMap::compile(t, &registry).map_err(compile_err);
            let mut iterator = compile_path(&tm.logical_source.iterator)
                .map_err(|e| compile_err(CompileError::Expr(e.into())))?;
            // Iterators always start from the document.
            iterator.absolute = true;
            let classes = tm
                .subject_classes
                .iter()
                .map(|c| Iri::new(c.as_str()).map(Term::Iri))
                .collect::<Result<_, _>>()
                .map_err(|e| compile_err(e.into()))?;
            let mut poms = Vec::new();
            for pom in &tm.predicate_object_maps {
                let predicates = pom.predicate_maps.iter().map(term).collect::<Result<_, _>>()?;
                let mut objects = Vec::new();
                for om in &pom.object_maps {
                    objects.push(match om {
                        ObjectMap::Term(t) => ObjectPlan::Term(term(t)?),
                        ObjectMap::Ref(r) => {
                            let mut pairs = Vec::new();
                            for j in &r.join_conditions {
                                let child = compile_reference(&j.child).map_err(|e| compile_err(e.into()))?;
                                let parent = compile_reference(&j.parent).map_err(|e| compile_err(e.into()))?;
                                pairs.push((child, parent));
                            }
                            joins += 1;
                            ObjectPlan::Ref {
                                parent: index[&r.parent_triples_map],
                                slot: joins - 1,
                                joins: pairs,
                            }
                        }
                    });
                }
                poms.push(PomPlan { predicates, objects });
            }
            maps.push(MapPlan {
                subject: term(&tm.subject_map)?,
                label,
                iterator,
                classes,
                poms,
            });
        }
        Ok(Engine {
            maps,
            joins,
            registry,
            config,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    /// Runs every triples map over one document.
    pub fn execute_one(&self, document: usize, doc: &XmlDocument) -> Result<DocumentOutput, EngineError> {
        let root = doc.root();
        let mut run = DocRun {
            engine: self,
            document,
            blanks: Blanks::default(),
            warnings: Vec::new(),
        };
        let contexts: Vec<Vec<XmlNode<'_>>> =
            self.maps.iter().map(|m| eval_xpath(root, &m.iterator).iter().collect()).collect();
        let mut subjects: Vec<Vec<Vec<Term>>> = Vec::with_capacity(self.maps.len());
        for (plan, ctxs) in self.maps.iter().zip(&contexts) {
            let mut per_ctx = Vec::with_capacity(ctxs.len());
            for &node in ctxs {
                per_ctx.push(run.terms(plan, &plan.subject, node)?);
            }
            subjects.push(per_ctx);
        }

        let mut join_index: Vec<Option<HashMap<Vec<String>, Vec<usize>>>> = vec![None; self.joins];
        let mut triples = Vec::new();
        let rdf_type = Iri::new(RDF_TYPE).expect("rdf:type");
        for (m, plan) in self.maps.iter().enumerate() {
            for (c, &node) in contexts[m].iter().enumerate() {
                let subs = &subjects[m][c];
                if subs.is_empty() {
                    continue;
                }
                for s in subs {
                    for class in &plan.classes {
                        triples.push(triple(s, &rdf_type, class));
                    }
                }
                for pom in &plan.poms {
                    let mut predicates = Vec::new();
                    for p in &pom.predicates {
                        for t in run.terms(plan, p, node)? {
                            if let Term::Iri(iri) = t {
                                predicates.push(iri);
                            }
                        }
                    }
                    if predicates.is_empty() {
                        continue;
                    }
                    let mut objects = Vec::new();
                    for om in &pom.objects {
                        match om {
                            ObjectPlan::Term(t) => objects.extend(run.terms(plan, t, node)?),
                            ObjectPlan::Ref { parent, joins, .. } if joins.is_empty() => {
                                objects.extend(subjects[*parent][c].iter().cloned());
                            }
                            ObjectPlan::Ref { parent, slot, joins } => {
                                let index = join_index[*slot].get_or_insert_with(|| {
                                    build_index(&contexts[*parent], joins.iter().map(|(_, p)| p))
                                });
                                let mut hits: Vec<usize> = join_keys(node, joins.iter().map(|(c, _)| c))
                                    .iter()
                                    .filter_map(|k| index.get(k))
                                    .flatten()
                                    .copied()
                                    .collect();
                                hits.sort_unstable();
                                hits.dedup();
                                for h in hits {
                                    objects.extend(subjects[*parent][h].iter().cloned());
                                }
                            }
                        }
                    }
                    for s in subs {
                        for p in &predicates {
                            for o in &objects {
                                triples.push(triple(s, p, o));
                            }
                        }
                    }
                }
            }
        }
        Ok(DocumentOutput {
            triples,
            warnings: run.warnings,
            blank_nodes: run.blanks.len(),
        })
    }

    pub fn execute(&self, docs: &[XmlDocument]) -> Result<(Graph, Vec<Warning>), EngineError> {
        let outputs = par_map_ordered(docs, self.config.workers, |i, d| self.execute_one(i, d))?;
        merge(outputs)
    }

    /// Parses and executes raw XML inputs, parsing inside the workers.
    pub fn execute_sources<S: AsRef<[u8]> + Sync>(&self, sources: &[S]) -> Result<(Graph, Vec<Warning>), EngineError> {
        let outputs = par_map_ordered(sources, self.config.workers, |i, s| {
            let doc = parse_xml(s.as_ref()).map_err(|reason| EngineError::Xml { document: i, reason })?;
            self.execute_one(i, &doc)
        })?;
        merge(outputs)
    }
}

struct DocRun<'e> {
    engine: &'e Engine,
    document: usize,
    blanks: Blanks,
    warnings: Vec<Warning>,
}

impl DocRun<'_> {
    fn terms(&mut self, plan: &MapPlan, tm: &CompiledTermMap, node: XmlNode<'_>) -> Result<Vec<Term>, EngineError> {
        let mut out = Vec::new();
        let mut errors = Vec::new();
        tm.generate(
            BindingContext::new(node),
            &self.engine.registry,
            &mut self.blanks,
            &mut out,
            &mut errors,
        );
        if let Some(first) = errors.first() {
            if self.engine.config.strict {
                return Err(EngineError::Term {
                    map: plan.label.clone(),
                    document: self.document,
                    reason: first.clone(),
                });
            }
            if self.engine.config.emit_warnings {
                self.warnings.extend(errors.into_iter().map(|e| Warning {
                    document: self.document,
                    map: plan.label.clone(),
                    message: format!("skipped: {e}"),
                }));
            }
        }
        Ok(out)
    }
}

fn triple(s: &Term, p: &Iri, o: &Term) -> Triple {
    Triple::new(s.clone(), p.clone(), o.clone()).expect("subject maps never produce literals")
}

fn join_keys<'r>(node: XmlNode<'_>, refs: impl Iterator<Item = &'r Reference>) -> Vec<Vec<String>> {
    let mut keys: Vec<Vec<String>> = vec![Vec::new()];
    for r in refs {
        let values = r.values(node);
        keys = keys
            .into_iter()
            .flat_map(|k| {
                values.iter().map(move |v| {
                    let mut k = k.clone();
                    k.push(v.clone());
                    k
                })
            })
            .collect();
    }
    keys
}

fn build_index<'r>(
    parents: &[XmlNode<'_>],
    refs: impl Iterator<Item = &'r Reference> + Clone,
) -> HashMap<Vec<String>, Vec<usize>> {
    let mut index: HashMap<Vec<String>, Vec<usize>> = HashMap::new();
    for (i, &node) in parents.iter().enumerate() {
        for key in join_keys(node, refs.clone()) {
            index.entry(key).or_default().push(i);
        }
    }
    index
}

/// Merges per-document outputs in input order, renumbering blank nodes
/// so labels stay unique and independent of scheduling.
pub fn merge(outputs: Vec<DocumentOutput>) -> Result<(Graph, Vec<Warning>), EngineError> {
    let mut graph = Graph::new();
    let mut warnings = Vec::new();
    let mut offset = 0;
    for out in outputs {
        if out.blank_nodes == 0 || offset == 0 {
            graph.extend(out.triples);
        } else {
            for t in out.triples {
                let (s, p, o) = t.into_parts();
                let t = Triple::new(shift(s, offset), p, shift(o, offset)).expect("relabelling keeps positions");
                graph.insert(t);
            }
        }
        offset += out.blank_nodes;
        warnings.extend(out.warnings);
    }
    Ok((graph, warnings))
}

fn shift(t: Term, offset: usize) -> Term {
    match t {
        Term::BlankNode(b) => {
            let n: usize = b.label()[1..].parse().expect("engine blank labels are b<n>");
            Term::BlankNode(BlankNode::new(format!("b{}", n + offset)).expect("valid label"))
        }
        other => other,
    }
}

/// Maps `f` over `items` on a pool of `workers` threads, keeping input
/// order. Stops at the first error in input order.
pub fn par_map_ordered<T, R, F>(items: &[T], workers: usize, f: F) -> Result<Vec<R>, EngineError>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &T) -> Result<R, EngineError> + Sync,
{
    if workers <= 1 || items.len() <= 1 {
        return items.iter().enumerate().map(|(i, t)| f(i, t)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| EngineError::Pool(e.to_string()))?;
    let results: Vec<Result<R, EngineError>> =
        pool.install(|| items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect());
    results.into_iter().collect()
}

/// One-shot form of [`Engine::new`] plus [`Engine::execute`].
pub fn execute_mapping(
    mapping: &MappingDocument,
    documents: &[XmlDocument],
    registry: FunctionRegistry,
    config: EngineConfig,
) -> Result<(Graph, Vec<Warning>), EngineError> {
    Engine::new(mapping, registry, config)?.execute(documents)
}
