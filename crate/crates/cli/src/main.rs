use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sahn::linkage::{linkage, linkage_vectors, Algorithm};
use sahn::oracle::{validate_dendrogram, DEFAULT_TOLERANCE};
use sahn::{Convention, Method};
use sahn_cli::{format_dendrogram, parse_dendrogram, parse_matrix_file, parse_vectors_csv, InputError};

/// Hierarchical agglomerative clustering.
#[derive(Parser)]
#[command(name = "sahn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster a dissimilarity matrix or a set of points.
    Cluster(ClusterArgs),
    /// Check that a dendrogram is a valid clustering of a matrix.
    Validate(ValidateArgs),
    /// Run a benchmark plan and write CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct ClusterArgs {
    /// single, complete, average, weighted, ward, centroid, median or
    /// flexible:aI,aJ,b,g
    #[arg(long)]
    method: Method,
    /// auto, primitive, generic, nnchain, mst, anderberg or generic-variant
    #[arg(long, default_value = "auto")]
    algorithm: String,
    /// Condensed dissimilarity matrix file.
    #[arg(long, required_unless_present = "vectors", conflicts_with = "vectors")]
    input: Option<PathBuf>,
    /// CSV file of points, clustered under the Euclidean distance.
    #[arg(long)]
    vectors: Option<PathBuf>,
    /// Node numbering: scipy, r or matlab.
    #[arg(long, default_value = "scipy")]
    labels: Convention,
    /// Output file, or - for standard output.
    #[arg(long, default_value = "-")]
    output: String,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    method: Method,
    /// Dendrogram file with one `a b delta` row per merge.
    #[arg(long)]
    dendrogram: PathBuf,
    /// Node numbering used in the dendrogram file.
    #[arg(long, default_value = "scipy")]
    labels: Convention,
    /// Relative tolerance for comparing heights; 0 demands exact equality.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON plan; the built-in plan is used if omitted.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// CSV output file, or - for standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

enum Failure {
    /// I/O, parse and data errors.
    Input(String),
    /// An algorithm that cannot run the requested method.
    Usage(String),
    /// A dendrogram rejected by the validator.
    Invalid(String),
}

impl Failure {
    fn report(self) -> ExitCode {
        let (code, message) = match self {
            Failure::Input(m) => (1, m),
            Failure::Usage(m) => (2, m),
            Failure::Invalid(m) => (3, m),
        };
        eprintln!("sahn: {}", message);
        ExitCode::from(code)
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Failure {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

fn clustering_error(e: sahn::Error) -> Failure {
    match e {
        sahn::Error::UnsupportedMethod { .. } | sahn::Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
        other => Failure::Input(other.to_string()),
    }
}

fn write_output(target: &str, text: &[u8]) -> Result<(), Failure> {
    if target == "-" {
        io::stdout().lock().write_all(text)?;
    } else {
        File::create(target)
            .and_then(|mut f| f.write_all(text))
            .map_err(|e| Failure::Input(format!("{}: {}", target, e)))?;
    }
    Ok(())
}

fn cluster(args: ClusterArgs) -> Result<(), Failure> {
    let algorithm = match args.algorithm.as_str() {
        "auto" => Algorithm::recommended(args.method),
        name => name.parse().map_err(clustering_error)?,
    };
    algorithm.supports(args.method).map_err(clustering_error)?;
    let d = match (&args.input, &args.vectors) {
        (Some(path), _) => {
            if algorithm == Algorithm::GenericVariant {
                return Err(Failure::Usage("generic-variant needs --vectors input".into()));
            }
            linkage(&parse_matrix_file(path)?, algorithm, args.method)
        }
        (None, Some(path)) => linkage_vectors(&parse_vectors_csv(path)?, algorithm, args.method),
        (None, None) => unreachable!("clap requires one input"),
    }
    .map_err(clustering_error)?;
    // Pair order within a row carries no meaning for symmetric schemes.
    let d = if args.method.is_symmetric() {
        d.with_ordered_pairs()
    } else {
        d
    };
    write_output(&args.output, format_dendrogram(&d.convert(args.labels)).as_bytes())
}

fn validate(args: ValidateArgs) -> Result<(), Failure> {
    let d0 = parse_matrix_file(&args.input)?;
    let text = read_file(&args.dendrogram)?;
    let cand = parse_dendrogram(&text, d0.n(), args.labels)?;
    let verdict = validate_dendrogram(&d0, args.method, &cand, args.tolerance);
    if verdict.is_valid() {
        println!("{}", verdict);
        Ok(())
    } else {
        Err(Failure::Invalid(verdict.to_string()))
    }
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let plan = match &args.plan {
        Some(path) => {
            let text = read_file(path)?;
            sahn_bench::parse_plan(&text).map_err(|e| Failure::Input(e.to_string()))?
        }
        None => sahn_bench::default_plan(),
    };
    let records = sahn_bench::run_benchmark(&plan).map_err(|e| match e {
        sahn_bench::BenchError::Plan { .. } => Failure::Usage(e.to_string()),
        other => Failure::Input(other.to_string()),
    })?;
    let mut csv = Vec::new();
    sahn_bench::write_csv(&records, &mut csv).map_err(|e| Failure::Input(e.to_string()))?;
    write_output(&args.out, &csv)
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {}", path.display(), e)))
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Cluster(args) => cluster(args),
        Command::Validate(args) => validate(args),
        Command::Bench(args) => bench(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
