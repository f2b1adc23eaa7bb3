use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use sahn::linkage::{linkage_vectors_with_stats, linkage_with_stats};
use sahn::oracle::validate;
use sahn::{
    pairwise_dissimilarity, Algorithm, CondensedMatrix, LinkageStats, Method, Metric, StepwiseDendrogram, VectorDataset,
};

use crate::plan::{Generator, PlanCell};
use crate::{gen_gaussian_mixture, gen_uniform_dissimilarities, BenchError, Result};

/// Inputs up to this size are validated on every repeat.
const ALWAYS_VALIDATE: usize = 200;
/// Above [`ALWAYS_VALIDATE`], one run in this many is validated.
const VALIDATE_EVERY: usize = 10;

/// Measurements for one plan cell.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkRecord {
    pub algorithm: String,
    pub method: String,
    pub n: usize,
    pub dim: Option<usize>,
    pub modes: Option<usize>,
    pub seed: u64,
    /// Median wall time over the repeats.
    pub seconds: f64,
    /// Wall time of every repeat, in order.
    pub repeat_seconds: Vec<f64>,
    pub recalculations: u64,
    pub scanned: u64,
    pub peak_bytes: Option<u64>,
    /// How many repeats were checked against the validator.
    pub validated: usize,
}

enum Input {
    Matrix(CondensedMatrix),
    Vectors(VectorDataset, CondensedMatrix),
}

impl Input {
    fn matrix(&self) -> &CondensedMatrix {
        match self {
            Input::Matrix(d) | Input::Vectors(_, d) => d,
        }
    }
}

fn generate(cell: &PlanCell, algorithm: Algorithm) -> Result<(Input, Option<usize>, Option<usize>)> {
    match cell.generator {
        Generator::Uniform => Ok((
            Input::Matrix(gen_uniform_dissimilarities(cell.n, cell.seed)?),
            None,
            None,
        )),
        Generator::Gaussian { dim, modes, spread } => {
            let modes = modes.resolve(cell.n);
            let ds = gen_gaussian_mixture(cell.n, dim, modes, spread, cell.seed)?;
            let d0 = pairwise_dissimilarity(&ds, &Metric::Euclidean)?;
            // Only the vector variant works from the points; everything
            // else is timed on the precomputed matrix.
            let input = if algorithm == Algorithm::GenericVariant {
                Input::Vectors(ds, d0)
            } else {
                Input::Matrix(d0)
            };
            Ok((input, Some(dim), Some(modes)))
        }
    }
}

fn run_once(input: &Input, algorithm: Algorithm, method: Method) -> Result<(StepwiseDendrogram, LinkageStats)> {
    Ok(match input {
        Input::Matrix(d0) => linkage_with_stats(d0, algorithm, method)?,
        Input::Vectors(ds, _) => linkage_vectors_with_stats(ds, algorithm, method)?,
    })
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// Runs the cells one after another. Every cell is checked before the
/// first one starts; data generation is not timed.
pub fn run_benchmark(plan: &[PlanCell]) -> Result<Vec<BenchmarkRecord>> {
    let resolved = plan
        .iter()
        .enumerate()
        .map(|(i, c)| c.resolve(i))
        .collect::<Result<Vec<_>>>()?;
    let mut large_runs = 0usize;
    let mut records = Vec::with_capacity(plan.len());
    for (index, (cell, &(algorithm, method))) in plan.iter().zip(&resolved).enumerate() {
        let (input, dim, modes) = generate(cell, algorithm)?;
        let mut repeat_seconds = Vec::with_capacity(cell.repeats);
        let mut stats = LinkageStats::default();
        let mut validated = 0;
        for repeat in 0..cell.repeats {
            let start = Instant::now();
            let (d, s) = run_once(&input, algorithm, method)?;
            repeat_seconds.push(start.elapsed().as_secs_f64());
            stats = s;
            let check = if cell.n <= ALWAYS_VALIDATE {
                true
            } else {
                large_runs += 1;
                (large_runs - 1).is_multiple_of(VALIDATE_EVERY)
            };
            if check {
                let verdict = validate(input.matrix(), method, &d);
                if !verdict.is_valid() {
                    return Err(BenchError::Invalid {
                        cell: index,
                        repeat,
                        verdict: verdict.to_string(),
                    });
                }
                validated += 1;
            }
        }
        records.push(BenchmarkRecord {
            algorithm: algorithm.name().into(),
            method: method.to_string(),
            n: cell.n,
            dim,
            modes,
            seed: cell.seed,
            seconds: median(&repeat_seconds),
            repeat_seconds,
            recalculations: stats.recalculations,
            scanned: stats.scanned,
            peak_bytes: None,
            validated,
        });
    }
    Ok(records)
}

#[derive(Serialize)]
struct Row<'a> {
    algorithm: &'a str,
    method: &'a str,
    n: usize,
    dim: Option<usize>,
    modes: Option<usize>,
    seed: u64,
    repeat: usize,
    seconds: f64,
    recalculations: u64,
}

/// Writes one CSV row per repeat.
pub fn write_csv<W: Write>(records: &[BenchmarkRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for r in records {
        for (repeat, &seconds) in r.repeat_seconds.iter().enumerate() {
            w.serialize(Row {
                algorithm: &r.algorithm,
                method: &r.method,
                n: r.n,
                dim: r.dim,
                modes: r.modes,
                seed: r.seed,
                repeat,
                seconds,
                recalculations: r.recalculations,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}
