//! Fixtures shared by the criterion benchmarks.

use uplift_core::bench::{prepare_corpus, AdhocTransformer, EngineTransformer, Transformer};
use uplift_core::rdf::Graph;

pub const SEED: u64 = 1;

/// The two transformers under comparison, single-threaded so the numbers
/// reflect per-document cost.
pub fn subjects() -> Vec<Box<dyn Transformer>> {
    vec![
        Box::new(EngineTransformer::new(1).expect("bundled mapping compiles")),
        Box::new(AdhocTransformer { workers: 1 }),
    ]
}

pub fn corpus(size: usize) -> Vec<String> {
    prepare_corpus(SEED, size)
}

/// Graph for a corpus, used by the serialization benchmarks.
pub fn reference_graph(size: usize) -> Graph {
    AdhocTransformer { workers: 1 }
        .transform(&corpus(size))
        .expect("generated corpus is well formed")
}
