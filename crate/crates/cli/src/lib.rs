//! Command implementations behind the `uplift` binary. Each returns the
//! process exit code: 0 success, 1 input or validation error, 2 execution
//! error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use uplift_core::bench::{run_benchmark_with, AdhocTransformer, BenchConfig, BenchError, EngineTransformer, Transformer};
use uplift_core::engine::{Engine, EngineConfig, EngineError, FunctionRegistry};
use uplift_core::legal::{
    corpus_file_name, documents_for_concept_with, generate_corpus, serialize_document, taxonomy_fixture,
    taxonomy_ntriples, Expansion,
};
use uplift_core::mapping::{parse_mapping, validate_mapping, MappingDocument};
use uplift_core::rdf::{parse_ntriples, write_ntriples, Graph, Iri};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_EXECUTION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "uplift", version, about = "Declarative XML to RDF uplift")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a mapping over XML files and write canonical N-Triples
    Map(MapArgs),
    /// Write a synthetic legal corpus and its taxonomy
    Generate(GenerateArgs),
    /// Time the mapping engine against the hand-written transformer
    Bench(BenchArgs),
    /// List documents related to a taxonomy concept
    Query(QueryArgs),
    /// Check a mapping file and print diagnostics
    Validate(ValidateArgs),
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(long)]
    pub mapping: PathBuf,
    /// XML files or directories of `*.xml` files
    #[arg(long, num_args = 1.., required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Abort on the first value that cannot be turned into a term
    #[arg(long)]
    pub strict: bool,
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated corpus sizes
    #[arg(long, value_delimiter = ',', default_value = "1000,10000,50000")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// JSON report path; the table and raw runs go next to it
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = default_workers())]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// N-Triples file; repeat to combine data and taxonomy
    #[arg(long, required = true)]
    pub graph: Vec<PathBuf>,
    #[arg(long)]
    pub concept: String,
    /// Also match concepts one skos:narrower step below
    #[arg(long)]
    pub narrower: bool,
    /// Follow skos:narrower to any depth
    #[arg(long)]
    pub transitive: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub mapping: PathBuf,
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Map(a) => cmd_map(&a, err),
        Command::Generate(a) => cmd_generate(&a, err),
        Command::Bench(a) => cmd_bench(&a, err),
        Command::Query(a) => cmd_query(&a, out, err),
        Command::Validate(a) => cmd_validate(&a, out, err),
    }
}

macro_rules! log {
    ($err:expr, $($arg:tt)*) => {{
        let _ = writeln!($err, $($arg)*);
    }};
}

fn load_mapping(path: &Path, err: &mut dyn Write) -> Option<MappingDocument> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            log!(err, "error: cannot read {}: {e}", path.display());
            return None;
        }
    };
    match parse_mapping(&text) {
        Ok(m) => Some(m),
        Err(e) => {
            log!(err, "error: {}: {e}", path.display());
            None
        }
    }
}

fn xml_inputs(paths: &[PathBuf]) -> std::io::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)?
                .map(|e| e.map(|e| e.path()))
                .collect::<Result<_, _>>()?;
            found.retain(|f| f.extension().is_some_and(|x| x == "xml") && f.is_file());
            found.sort();
            files.extend(found);
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

pub fn cmd_map(args: &MapArgs, err: &mut dyn Write) -> i32 {
    let Some(mapping) = load_mapping(&args.mapping, err) else {
        return EXIT_INPUT;
    };
    let config = EngineConfig {
        strict: args.strict,
        emit_warnings: true,
        workers: args.workers.max(1),
    };
    let engine = match Engine::new(&mapping, FunctionRegistry::new(), config) {
        Ok(e) => e,
        Err(e) => {
            log!(err, "error: {}: {e}", args.mapping.display());
            return EXIT_INPUT;
        }
    };
    let files = match xml_inputs(&args.input) {
        Ok(f) => f,
        Err(e) => {
            log!(err, "error: cannot list inputs: {e}");
            return EXIT_INPUT;
        }
    };
    let mut sources = Vec::with_capacity(files.len());
    for f in &files {
        match fs::read(f) {
            Ok(bytes) => sources.push(bytes),
            Err(e) => {
                log!(err, "error: cannot read {}: {e}", f.display());
                return EXIT_INPUT;
            }
        }
    }
    let (graph, warnings) = match engine.execute_sources(&sources) {
        Ok(r) => r,
        Err(EngineError::Xml { document, reason }) => {
            log!(err, "error: {}: {reason}", files[document].display());
            return EXIT_INPUT;
        }
        Err(EngineError::Term { map, document, reason }) => {
            log!(err, "error: {}, {map}: {reason}", files[document].display());
            return EXIT_EXECUTION;
        }
        Err(e) => {
            log!(err, "error: {e}");
            return EXIT_EXECUTION;
        }
    };
    for w in &warnings {
        log!(err, "warning: {}, {}: {}", files[w.document].display(), w.map, w.message);
    }
    if let Err(e) = write_graph(&args.out, &graph) {
        log!(err, "error: cannot write {}: {e}", args.out.display());
        return EXIT_INPUT;
    }
    log!(err, "{} triples from {} documents written to {}", graph.len(), files.len(), args.out.display());
    EXIT_OK
}

fn write_graph(path: &Path, graph: &Graph) -> std::io::Result<()> {
    let mut w = std::io::BufWriter::new(fs::File::create(path)?);
    write_ntriples(graph, &mut w)?;
    w.flush()
}

pub fn cmd_generate(args: &GenerateArgs, err: &mut dyn Write) -> i32 {
    let taxonomy = taxonomy_fixture();
    let result = (|| -> std::io::Result<()> {
        fs::create_dir_all(&args.out)?;
        for doc in generate_corpus(args.seed, args.count, &taxonomy) {
            fs::write(args.out.join(corpus_file_name(&doc)), serialize_document(&doc))?;
        }
        fs::write(args.out.join("taxonomy.nt"), taxonomy_ntriples(&taxonomy))
    })();
    match result {
        Ok(()) => {
            log!(err, "{} documents written to {}", args.count, args.out.display());
            EXIT_OK
        }
        Err(e) => {
            log!(err, "error: cannot write to {}: {e}", args.out.display());
            EXIT_INPUT
        }
    }
}

pub fn cmd_bench(args: &BenchArgs, err: &mut dyn Write) -> i32 {
    let workers = args.workers.max(1);
    let engine = match EngineTransformer::new(workers) {
        Ok(e) => e,
        Err(e) => {
            log!(err, "error: {e}");
            return EXIT_EXECUTION;
        }
    };
    let subjects: Vec<Box<dyn Transformer>> = vec![Box::new(engine), Box::new(AdhocTransformer { workers })];
    bench_with_subjects(args, &subjects, err)
}

/// [`cmd_bench`] with caller-supplied subjects; the first is the reference
/// for the output equality check.
pub fn bench_with_subjects(args: &BenchArgs, subjects: &[Box<dyn Transformer>], err: &mut dyn Write) -> i32 {
    let cfg = BenchConfig {
        corpus_sizes: args.sizes.clone(),
        runs: args.runs,
        seed: args.seed,
        workers: args.workers.max(1),
        ..Default::default()
    };
    let report = match run_benchmark_with(&cfg, subjects) {
        Ok(r) => r,
        Err(e @ BenchError::InvalidConfig(_)) => {
            log!(err, "error: {e}");
            return EXIT_INPUT;
        }
        Err(e) => {
            log!(err, "error: {e}");
            return EXIT_EXECUTION;
        }
    };
    let table = report.table();
    let mut runs = String::new();
    for r in report.run_records() {
        runs.push_str(&serde_json::to_string(&r).expect("plain data serializes"));
        runs.push('\n');
    }
    let json = serde_json::to_string_pretty(&report).expect("plain data serializes");
    let written = fs::write(&args.out, json + "\n")
        .and_then(|_| fs::write(args.out.with_extension("txt"), &table))
        .and_then(|_| fs::write(args.out.with_extension("runs.jsonl"), runs));
    if let Err(e) = written {
        log!(err, "error: cannot write report {}: {e}", args.out.display());
        return EXIT_INPUT;
    }
    log!(err, "{table}");
    EXIT_OK
}

pub fn cmd_query(args: &QueryArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let concept = match Iri::new(args.concept.as_str()) {
        Ok(c) => c,
        Err(e) => {
            log!(err, "error: concept {:?}: {e}", args.concept);
            return EXIT_INPUT;
        }
    };
    let mut graph = Graph::new();
    for path in &args.graph {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                log!(err, "error: cannot read {}: {e}", path.display());
                return EXIT_INPUT;
            }
        };
        match parse_ntriples(&text) {
            Ok(g) => graph.merge(g),
            Err(e) => {
                log!(err, "error: {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
    }
    let expansion = if args.transitive {
        Expansion::Transitive
    } else if args.narrower {
        Expansion::Narrower
    } else {
        Expansion::None
    };
    for doc in documents_for_concept_with(&graph, &concept, expansion) {
        if writeln!(out, "{}", doc.value()).is_err() {
            return EXIT_EXECUTION;
        }
    }
    EXIT_OK
}

pub fn cmd_validate(args: &ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(mapping) = load_mapping(&args.mapping, err) else {
        return EXIT_INPUT;
    };
    let diagnostics = validate_mapping(&mapping);
    for d in &diagnostics {
        let _ = writeln!(out, "{d}");
    }
    if diagnostics.is_empty() {
        log!(err, "{}: {} triples maps, no problems", args.mapping.display(), mapping.triples_maps.len());
        EXIT_OK
    } else {
        EXIT_INPUT
    }
}
