//! Timed comparisons of XML-to-RDF transformers with summary statistics
//! and Welch's t-test.

mod report;
mod run;
mod special;
mod stats;

pub use report::{size_label, BenchReport, Comparison, RunRecord, SubjectResult};
pub use run::{
    prepare_corpus, run_benchmark, run_benchmark_with, AdhocTransformer, BenchConfig, BenchError, EngineTransformer,
    Subject, Transformer,
};
pub use special::{ln_gamma, regularized_incomplete_beta, student_t_sf};
pub use stats::{summary_stats, welch_from_summaries, welch_t_test, SampleSummary, StatsError, WelchResult, ALPHA};
