use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::report::{environment_note, BenchReport, Comparison, SubjectResult};
use super::stats::{welch_from_summaries, SampleSummary, StatsError};
use crate::engine::{par_map_ordered, Engine, EngineConfig, EngineError, FunctionRegistry};
use crate::legal::{adhoc_parse, generate_corpus, reference_mapping, serialize_document, taxonomy_fixture};
use crate::rdf::{graph_equal, to_ntriples, Graph};
use crate::xml::parse_xml;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subject {
    Engine,
    Adhoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub corpus_sizes: Vec<usize>,
    pub runs: usize,
    pub seed: u64,
    pub subjects: Vec<Subject>,
    /// Worker pool size handed to every subject.
    pub workers: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            corpus_sizes: vec![1000, 10000, 50000],
            runs: 10,
            seed: 1,
            subjects: vec![Subject::Engine, Subject::Adhoc],
            workers: 1,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid benchmark configuration: {0}")]
    InvalidConfig(String),
    #[error("{subject} failed on the {size}-document corpus: {reason}")]
    Transform { subject: String, size: usize, reason: String },
    #[error("{subject} output differs from {reference} on the {size}-document corpus")]
    OutputMismatch { subject: String, reference: String, size: usize },
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Something that turns a corpus of XML sources into one graph.
pub trait Transformer: Sync {
    fn name(&self) -> &str;
    fn transform(&self, sources: &[String]) -> Result<Graph, String>;
}

pub struct EngineTransformer {
    engine: Engine,
}

impl EngineTransformer {
    pub fn new(workers: usize) -> Result<Self, EngineError> {
        let config = EngineConfig {
            workers,
            ..Default::default()
        };
        Ok(EngineTransformer {
            engine: Engine::new(&reference_mapping(), FunctionRegistry::new(), config)?,
        })
    }
}

impl Transformer for EngineTransformer {
    fn name(&self) -> &str {
        "engine"
    }

    fn transform(&self, sources: &[String]) -> Result<Graph, String> {
        self.engine
            .execute_sources(sources)
            .map(|(g, _)| g)
            .map_err(|e| e.to_string())
    }
}

pub struct AdhocTransformer {
    pub workers: usize,
}

impl Transformer for AdhocTransformer {
    fn name(&self) -> &str {
        "adhoc"
    }

    fn transform(&self, sources: &[String]) -> Result<Graph, String> {
        let graphs = par_map_ordered(sources, self.workers, |i, s| {
            let doc = parse_xml(s.as_bytes()).map_err(|reason| EngineError::Xml { document: i, reason })?;
            Ok(adhoc_parse(doc.root()))
        })
        .map_err(|e| e.to_string())?;
        let mut out = Graph::new();
        for g in graphs {
            out.extend(g.map_err(|e| e.to_string())?);
        }
        Ok(out)
    }
}

/// Serialized XML of the seeded corpus.
pub fn prepare_corpus(seed: u64, size: usize) -> Vec<String> {
    generate_corpus(seed, size, &taxonomy_fixture())
        .iter()
        .map(serialize_document)
        .collect()
}

pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    let mut subjects: Vec<Box<dyn Transformer>> = Vec::new();
    for s in &cfg.subjects {
        subjects.push(match s {
            Subject::Engine => Box::new(EngineTransformer::new(cfg.workers)?),
            Subject::Adhoc => Box::new(AdhocTransformer { workers: cfg.workers }),
        });
    }
    run_benchmark_with(cfg, &subjects)
}

/// Times every subject on every corpus size. Per size, one untimed run of
/// each subject warms up and checks that all outputs are equal to the
/// first subject's; a mismatch aborts.
pub fn run_benchmark_with(cfg: &BenchConfig, subjects: &[Box<dyn Transformer>]) -> Result<BenchReport, BenchError> {
    if cfg.runs < 2 {
        return Err(BenchError::InvalidConfig("runs must be at least 2".into()));
    }
    if cfg.corpus_sizes.is_empty() || cfg.corpus_sizes.contains(&0) {
        return Err(BenchError::InvalidConfig("corpus sizes must be at least 1".into()));
    }
    if subjects.is_empty() {
        return Err(BenchError::InvalidConfig("no subjects".into()));
    }
    let mut results = Vec::new();
    let mut comparisons = Vec::new();
    for &size in &cfg.corpus_sizes {
        let corpus = prepare_corpus(cfg.seed, size);
        let fail = |s: &dyn Transformer, reason: String| BenchError::Transform {
            subject: s.name().to_string(),
            size,
            reason,
        };

        let reference = subjects[0].transform(&corpus).map_err(|r| fail(subjects[0].as_ref(), r))?;
        for s in &subjects[1..] {
            let g = s.transform(&corpus).map_err(|r| fail(s.as_ref(), r))?;
            if !graph_equal(&g, &reference) {
                return Err(BenchError::OutputMismatch {
                    subject: s.name().to_string(),
                    reference: subjects[0].name().to_string(),
                    size,
                });
            }
        }
        drop(reference);

        let mut per_size = Vec::new();
        for s in subjects {
            let mut times = Vec::with_capacity(cfg.runs);
            for _ in 0..cfg.runs {
                let start = Instant::now();
                let g = s.transform(&corpus).map_err(|r| fail(s.as_ref(), r))?;
                let text = to_ntriples(&g);
                let elapsed = start.elapsed().as_secs_f64();
                std::hint::black_box(text);
                times.push(elapsed);
            }
            let summary = SampleSummary::from_samples(&times)?;
            per_size.push(SubjectResult {
                subject: s.name().to_string(),
                size,
                mean: summary.mean,
                std_dev: summary.std_dev,
                times,
            });
        }
        if let [a, b] = per_size.as_slice() {
            let welch = welch_from_summaries(&a.summary(), &b.summary()).ok();
            comparisons.push(Comparison {
                size,
                first: a.subject.clone(),
                second: b.subject.clone(),
                welch,
            });
        }
        results.extend(per_size);
    }
    Ok(BenchReport {
        config: cfg.clone(),
        environment: environment_note(cfg.workers),
        results,
        comparisons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_shape() {
        let cfg = BenchConfig {
            corpus_sizes: vec![10],
            runs: 2,
            seed: 3,
            ..Default::default()
        };
        let report = run_benchmark(&cfg).unwrap();
        assert_eq!(report.results.len(), 2);
        for r in &report.results {
            assert_eq!(r.times.len(), 2);
            assert!(r.mean >= 0.0 && r.std_dev >= 0.0);
        }
        assert_eq!(report.comparisons.len(), 1);
    }

    struct Broken;

    impl Transformer for Broken {
        fn name(&self) -> &str {
            "broken"
        }

        fn transform(&self, sources: &[String]) -> Result<Graph, String> {
            let mut g = AdhocTransformer { workers: 1 }.transform(sources)?;
            let first = g.iter().next().cloned().unwrap();
            g = g.into_iter().filter(|t| t != &first).collect();
            Ok(g)
        }
    }

    #[test]
    fn mismatch_aborts() {
        let cfg = BenchConfig {
            corpus_sizes: vec![3],
            runs: 2,
            ..Default::default()
        };
        let subjects: Vec<Box<dyn Transformer>> =
            vec![Box::new(EngineTransformer::new(1).unwrap()), Box::new(Broken)];
        assert!(matches!(
            run_benchmark_with(&cfg, &subjects),
            Err(BenchError::OutputMismatch { size: 3, .. })
        ));
    }

    #[test]
    fn config_checks() {
        let bad_runs = BenchConfig {
            runs: 1,
            ..Default::default()
        };
        assert!(matches!(run_benchmark(&bad_runs), Err(BenchError::InvalidConfig(_))));
        let bad_size = BenchConfig {
            corpus_sizes: vec![0],
            ..Default::default()
        };
        assert!(matches!(run_benchmark(&bad_size), Err(BenchError::InvalidConfig(_))));
    }
}
