//! Synthetic workloads and a sequential timing harness for the `sahn`
//! clustering algorithms.
//!
//! A benchmark plan is a JSON array of cells:
//!
//! ```json
//! [
//!   {"algorithm": "generic", "method": "centroid", "n": 800,
//!    "generator": {"gaussian": {"dim": 3, "modes": 5}}, "seed": 1, "repeats": 3},
//!   {"algorithm": "mst", "method": "single", "n": 1000,
//!    "generator": "uniform", "seed": 2}
//! ]
//! ```
//!
//! [`run_benchmark`] checks every cell before running any of them, then
//! times each repeat and spot-checks the results with the validator.

mod generate;
mod plan;
mod run;

pub use generate::{gen_gaussian_mixture, gen_uniform_dissimilarities};
pub use plan::{default_plan, parse_plan, Generator, Modes, PlanCell};
pub use run::{run_benchmark, write_csv, BenchmarkRecord};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("plan cell {cell}: {message}")]
    Plan { cell: usize, message: String },
    #[error("invalid plan file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cell {cell}, repeat {repeat}: result failed validation ({verdict})")]
    Invalid {
        cell: usize,
        repeat: usize,
        verdict: String,
    },
    #[error(transparent)]
    Clustering(#[from] sahn::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
